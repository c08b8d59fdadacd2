use serde::Serialize;

use super::field::KVal;
use super::orbit::{cocycle_scan, point_label, CocycleScan, OrbitKind};
use super::stepfn::StepFn;
use crate::error::{Error, Result};
use crate::local::{Domain, LocalElem, PeriodicPoint, Place, ProdElem};
use crate::par::Exec;

/// Largest periodic-point count the cocycle precondition scan enumerates per period.
pub const SCAN_CAP: u128 = 200_000;

/// The digit tuple 𝐛 of the recovery construction, one digit index per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofParams {
    pub b: Vec<u32>,
}

impl ProofParams {
    pub fn zero(dom: &Domain) -> ProofParams {
        ProofParams { b: dom.components().iter().map(|c| c.zero_digit()).collect() }
    }

    pub fn new(dom: &Domain, b: Vec<u32>) -> Result<ProofParams> {
        if b.len() != dom.len() {
            return Err(Error::Domain("one b digit per component".into()));
        }
        for (c, &d) in dom.components().iter().zip(&b) {
            if d as u64 >= c.radix() {
                return Err(Error::Domain("b digit index out of range".into()));
            }
            // b = π − 1 would put 𝐛/(𝟏−𝛑) = −1 on the boundary
            if c.is_canonical() && matches!(c.place(), Place::Z { .. }) && *c.digit(d) == c.pi().sub(&c.one()) {
                return Err(Error::Domain(format!("b = {} violates 0 ≤ b < π − 1", c.digit(d))));
            }
        }
        Ok(ProofParams { b })
    }

    /// Semicolon-separated digit values, e.g. `1;theta`.
    pub fn parse(dom: &Domain, s: &str) -> Result<ProofParams> {
        let toks: Vec<&str> = s.split(';').collect();
        if toks.len() != dom.len() {
            return Err(Error::Parse(format!("b {s:?} has the wrong arity")));
        }
        let mut b = Vec::with_capacity(toks.len());
        for (c, t) in dom.components().iter().zip(toks) {
            let x = c.parse_digit(t)?;
            let i = c.digit_index(&x);
            if c.digit(i) != &x {
                return Err(Error::Parse(format!("{t:?} is not a digit of {}", c.id())));
            }
            b.push(i);
        }
        ProofParams::new(dom, b)
    }
}

fn window(block: &[u32], start: usize, len: usize) -> Vec<u32> {
    (0..len).map(|i| block[(start + i) % block.len()]).collect()
}

fn digits_upto(x: &[u32], k: usize, pad: u32) -> impl Iterator<Item = u32> + '_ {
    (0..k).map(move |i| x.get(i).copied().unwrap_or(pad))
}

/// Repeating block [b^{n−1}, x_0..x_{n−1}] of α_n(x).
pub fn alpha_block(x: &[u32], b: u32, n: usize, pad: u32) -> Vec<u32> {
    std::iter::repeat_n(b, n - 1).chain(digits_upto(x, n, pad)).collect()
}

/// Repeating block [b^{n−1}, x_0..x_{n−2}] of β_n(x), n ≥ 2.
pub fn beta_block(x: &[u32], b: u32, n: usize, pad: u32) -> Vec<u32> {
    std::iter::repeat_n(b, n - 1).chain(digits_upto(x, n - 1, pad)).collect()
}

fn check_x(x: &ProdElem, dom: &Domain, need: usize) -> Result<()> {
    if x.parts().len() != dom.len() {
        return Err(Error::Domain("arity mismatch".into()));
    }
    if x.precision() < need {
        return Err(Error::InsufficientPrecision { needed: need, available: x.precision() });
    }
    Ok(())
}

fn periodic_elem(x: &ProdElem, params: &ProofParams, prec: usize, block: impl Fn(&[u32], u32) -> Vec<u32>) -> ProdElem {
    ProdElem::new(
        x.parts()
            .iter()
            .zip(&params.b)
            .map(|(p, &b)| {
                let bl = block(p.digits(), b);
                LocalElem::from_digits(p.component().clone(), window(&bl, 0, prec)).expect("digit indices in range")
            })
            .collect(),
    )
}

/// α_n(x), a point fixed by φ^{(2n−1)}, at the precision of x.
pub fn alpha_n(x: &ProdElem, n: usize, params: &ProofParams) -> Result<ProdElem> {
    if n == 0 {
        return Err(Error::Domain("α_n needs n ≥ 1".into()));
    }
    if x.precision() < n {
        return Err(Error::InsufficientPrecision { needed: n, available: x.precision() });
    }
    Ok(periodic_elem(x, params, x.precision(), |d, b| alpha_block(d, b, n, 0)))
}

/// β_n(x), at the precision of x.
pub fn beta_n(x: &ProdElem, n: usize, params: &ProofParams) -> Result<ProdElem> {
    if n < 2 {
        return Err(Error::Domain("β_n needs n ≥ 2".into()));
    }
    if x.precision() < n - 1 {
        return Err(Error::InsufficientPrecision { needed: n - 1, available: x.precision() });
    }
    Ok(periodic_elem(x, params, x.precision(), |d, b| beta_block(d, b, n, 0)))
}

/// F at φ^{(i)} of the periodic point with the given blocks.
fn f_shift<'a>(f: &'a StepFn, blocks: &[Vec<u32>], i: usize) -> &'a KVal {
    let ws: Vec<Vec<u32>> = blocks.iter().map(|b| window(b, i, f.level())).collect();
    f.eval_digits(&ws)
}

fn f_range(f: &StepFn, blocks: &[Vec<u32>], range: std::ops::Range<usize>) -> KVal {
    let k = f.field();
    range.fold(k.one(), |acc, i| k.mul(&acc, f_shift(f, blocks, i)))
}

fn betas(f: &StepFn, x: &[&[u32]], n: usize, params: &ProofParams) -> Vec<Vec<u32>> {
    f.domain()
        .components()
        .iter()
        .zip(x)
        .zip(&params.b)
        .map(|((c, d), &b)| beta_block(d, b, n, c.zero_digit()))
        .collect()
}

fn alphas(f: &StepFn, x: &[&[u32]], n: usize, params: &ProofParams) -> Vec<Vec<u32>> {
    f.domain()
        .components()
        .iter()
        .zip(x)
        .zip(&params.b)
        .map(|((c, d), &b)| alpha_block(d, b, n, c.zero_digit()))
        .collect()
}

/// G_n on raw digits; digits past the supplied length are never read for n ≤ len + 1.
fn g_n_digits(f: &StepFn, x: &[&[u32]], n: usize, params: &ProofParams) -> KVal {
    let k = f.field();
    if n < 2 {
        return k.one();
    }
    k.inv(&f_range(f, &betas(f, x, n, params), 0..n - 1))
}

fn digit_slices(x: &ProdElem) -> Vec<&[u32]> {
    x.parts().iter().map(|p| p.digits()).collect()
}

/// G_n(x) = [∏_{i=0}^{n−2} F(φ^{(i)}(β_n(x)))]^{−1}; G_1 = 1.
pub fn g_n(f: &StepFn, x: &ProdElem, n: usize, params: &ProofParams) -> Result<KVal> {
    check_x(x, f.domain(), n.saturating_sub(1))?;
    Ok(g_n_digits(f, &digit_slices(x), n, params))
}

/// Level at which every G_n of a level-m function is exactly tabulated.
pub fn g_n_level(f: &StepFn) -> usize {
    f.level().saturating_sub(1).max(1)
}

/// G_n as a step function at [`g_n_level`].
pub fn g_n_table(f: &StepFn, n: usize, params: &ProofParams, exec: Exec) -> Result<StepFn> {
    StepFn::tabulate(f.domain(), g_n_level(f), f.field().clone(), exec, |ds| {
        let xs: Vec<&[u32]> = ds.iter().map(|d| d.as_slice()).collect();
        g_n_digits(f, &xs, n, params)
    })
}

/// (A_n(x), B_n(x)).
pub fn a_n_b_n(f: &StepFn, x: &ProdElem, n: usize, params: &ProofParams) -> Result<(KVal, KVal)> {
    if n < 2 {
        return Err(Error::Domain("A_n, B_n need n ≥ 2".into()));
    }
    check_x(x, f.domain(), n)?;
    let xs = digit_slices(x);
    let shifted: Vec<&[u32]> = xs.iter().map(|d| &d[1..]).collect();
    let k = f.field();
    let al = alphas(f, &xs, n, params);
    let be = betas(f, &xs, n, params);
    let be_phi = betas(f, &shifted, n, params);
    let a = k.div(&f_range(f, &be, 0..n - 1), &f_range(f, &al, 0..n - 1));
    let b = k.div(&f_range(f, &be_phi, n - 1..2 * n - 2), &f_range(f, &al, n..2 * n - 1));
    Ok((a, b))
}

/// Both sides of F(φ^{(n−1)}(α_n(x))) = A_n(x)·B_n(x)·G_n(x)/G_n(φ(x)).
pub fn fabg_sides(f: &StepFn, x: &ProdElem, n: usize, params: &ProofParams) -> Result<(KVal, KVal)> {
    let (a, b) = a_n_b_n(f, x, n, params)?;
    let xs = digit_slices(x);
    let shifted: Vec<&[u32]> = xs.iter().map(|d| &d[1..]).collect();
    let k = f.field();
    let lhs = f_shift(f, &alphas(f, &xs, n, params), n - 1).clone();
    let g = k.div(&g_n_digits(f, &xs, n, params), &g_n_digits(f, &shifted, n, params));
    Ok((lhs, k.mul(&k.mul(&a, &b), &g)))
}

pub fn fabg_holds(f: &StepFn, x: &ProdElem, n: usize, params: &ProofParams) -> Result<bool> {
    let (l, r) = fabg_sides(f, x, n, params)?;
    Ok(l == r)
}

/// One step of the convergence trace: ord(G_n − G_{n+1}), `None` when equal at working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub ord: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    pub level_f: usize,
    pub target: i64,
    pub trace: Vec<TraceRow>,
    pub final_n: usize,
    /// min ord(F(x)·G(φ(x)) − G(x)) over all residue classes; equality at working precision
    /// counts as ord G(x) + R.
    pub residual: i64,
    pub cocycle: CocycleScan,
    pub pass: bool,
}

impl RecoveryReport {
    /// ord(G_n − G_{n+1}) non-decreasing for n ≥ from.
    pub fn monotone_from(&self, from: usize) -> bool {
        let key = |o: Option<i64>| o.unwrap_or(i64::MAX);
        self.trace.windows(2).filter(|w| w[0].n >= from).all(|w| key(w[0].ord) <= key(w[1].ord))
    }
}

#[derive(Debug, Clone)]
pub struct Recovery {
    pub g: StepFn,
    pub report: RecoveryReport,
}

fn table_ord_diff(a: &StepFn, b: &StepFn) -> Option<i64> {
    let k = a.field();
    a.table().iter().zip(b.table()).filter_map(|(x, y)| k.ord_diff(x, y)).min()
}

/// Checks the forced value F(𝐛/(𝟏−𝛑)) = 1 and then the cocycle condition on periodic points.
pub fn check_cocycle(f: &StepFn, params: &ProofParams, exec: Exec) -> Result<CocycleScan> {
    let bbar: Vec<Vec<u32>> = params.b.iter().map(|&b| vec![b; f.level()]).collect();
    if *f.eval_digits(&bbar) != f.field().one() {
        let pt = PeriodicPoint { n: 1, blocks: params.b.iter().map(|&b| vec![b]).collect() };
        return Err(Error::CocycleViolation { point: point_label(f.domain(), &pt, OrbitKind::Plain), period: 1 });
    }
    cocycle_scan(f, f.level().max(1) + 1, SCAN_CAP, exec)
}

/// Residual ord(F(x)·G(φ(x)) − G(x)) over every residue class.
pub fn residual(f: &StepFn, g: &StepFn) -> Result<i64> {
    f.check_compatible(g)?;
    let k = f.field().clone();
    let level = f.level().max(g.level() + 1);
    let prec = k.precision() as i64;
    let diffs = StepFn::tabulate(f.domain(), level, k.clone(), Exec::Sequential, |ds| {
        let shifted: Vec<&[u32]> = ds.iter().map(|d| &d[1..]).collect();
        let lhs = k.mul(f.eval_digits(ds), g.eval_digits(&shifted));
        let rhs = g.eval_digits(ds);
        let ord = k.ord_diff(&lhs, rhs).unwrap_or(rhs.val + prec);
        KVal { val: ord, unit: k.one().unit }
    })?;
    Ok(diffs.table().iter().map(|v| v.val).min().unwrap_or(i64::MAX))
}

/// Builds G with F(x) = G(x)/G(φ(x)) as the limit of G_n; F must satisfy the cocycle condition.
pub fn recover_g(f: &StepFn, params: &ProofParams, r: i64, exec: Exec) -> Result<Recovery> {
    let cocycle = check_cocycle(f, params, exec)?;
    let cap = f.level() + r.max(0) as usize + 8;
    let mut trace = Vec::new();
    let mut prev = g_n_table(f, 2, params, exec)?;
    for n in 2..cap {
        let next = g_n_table(f, n + 1, params, exec)?;
        let ord = table_ord_diff(&prev, &next);
        trace.push(TraceRow { n, ord });
        let margin = (-next.bounds().0).max(0);
        if ord.is_none_or(|o| o >= r + margin) {
            let res = residual(f, &next)?;
            let report = RecoveryReport {
                level_f: f.level(),
                target: r,
                trace,
                final_n: n + 1,
                residual: res,
                cocycle,
                pass: res >= r,
            };
            return Ok(Recovery { g: next, report });
        }
        prev = next;
    }
    let profile: Vec<String> =
        trace.iter().map(|t| format!("{}:{}", t.n, t.ord.map_or("exact".into(), |o| o.to_string()))).collect();
    Err(Error::NonConvergence(format!("ord(G_n − G_(n+1)) profile {}", profile.join(" "))))
}

/// The minus-sign variant: G with F(x) = G(x)/G(−φ(−x)), via x ↦ −x.
pub fn recover_g_minus(f: &StepFn, params: &ProofParams, r: i64, exec: Exec) -> Result<Recovery> {
    let rec = recover_g(&f.negate_arg(), params, r, exec)?;
    Ok(Recovery { g: rec.g.negate_arg(), report: rec.report })
}
