use serde::Serialize;

use super::field::KVal;
use super::stepfn::{residue_of, StepFn};
use crate::error::{Error, Result};
use crate::local::{component_blocks, periodic_count, Component, Domain, FracElem, PeriodicPoint};
use crate::par::{self, Exec};

/// Which orbit a periodic block generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    /// Blocks of −x with φ^{(n)}(−x) = −x; orbit elements −φ^{(j)}(−x).
    Minus,
    /// Blocks of y with φ^{(n)}(y) = y; orbit elements φ^{(j)}(y).
    Plain,
}

struct CompOrbits {
    blocks: Vec<Vec<u32>>,
    /// block → j → residue of the j-th orbit element.
    shift: Vec<Vec<u64>>,
    /// block → j → residue of ⟨π^j x⟩, for canonical digits in the minus form.
    frac: Option<Vec<Vec<u64>>>,
}

/// Residues of every orbit element of every period-n point, per component.
pub struct OrbitTable {
    n: usize,
    level: usize,
    kind: OrbitKind,
    comps: Vec<CompOrbits>,
}

fn window(block: &[u32], start: usize, len: usize) -> Vec<u32> {
    (0..len).map(|i| block[(start + i) % block.len()]).collect()
}

fn comp_orbits(c: &Component, n: usize, level: usize, kind: OrbitKind) -> Result<CompOrbits> {
    let blocks = component_blocks(c, n);
    let r = c.radix();
    let mut shift = Vec::with_capacity(blocks.len());
    let mut frac = (kind == OrbitKind::Minus && c.is_canonical()).then(|| Vec::with_capacity(blocks.len()));
    for b in &blocks {
        shift.push(
            (0..n)
                .map(|j| {
                    let w = window(b, j, level);
                    let d = if kind == OrbitKind::Minus { c.neg_digits(&w) } else { w };
                    residue_of(r, &d, level)
                })
                .collect(),
        );
        if let Some(fr) = frac.as_mut() {
            // x = value(block)/(π^n − 1)
            let x = c.value(b).to_frac().mul(&inv_frac(&c.pi_pow(n).sub(&c.one()).to_frac()));
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let y = x.mul(&c.pi_pow(j).to_frac()).frac_part();
                row.push(residue_of(r, &c.digits_of(&y, level)?, level));
            }
            fr.push(row);
        }
    }
    Ok(CompOrbits { blocks, shift, frac })
}

fn inv_frac(x: &FracElem) -> FracElem {
    match x {
        FracElem::Rat(r) => FracElem::Rat(r.recip()),
        FracElem::Fun(f) => FracElem::Fun(f.inv().expect("π^n − 1 ≠ 0")),
    }
}

impl OrbitTable {
    pub fn new(dom: &Domain, n: usize, level: usize, kind: OrbitKind, cap: u128) -> Result<OrbitTable> {
        if n == 0 {
            return Err(Error::Domain("period must be ≥ 1".into()));
        }
        let count = periodic_count(dom, n);
        if count > cap {
            return Err(Error::EnumerationCap { count, cap });
        }
        let comps = dom.components().iter().map(|c| comp_orbits(c, n, level, kind)).collect::<Result<_>>()?;
        Ok(OrbitTable { n, level, kind, comps })
    }

    pub fn period(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn kind(&self) -> OrbitKind {
        self.kind
    }

    pub fn point_count(&self) -> usize {
        self.comps.iter().map(|c| c.blocks.len()).product()
    }

    pub fn has_frac_form(&self) -> bool {
        self.comps.iter().all(|c| c.frac.is_some())
    }

    fn split(&self, mut idx: usize) -> Vec<usize> {
        self.comps
            .iter()
            .map(|c| {
                let k = idx % c.blocks.len();
                idx /= c.blocks.len();
                k
            })
            .collect()
    }

    pub fn point(&self, idx: usize) -> PeriodicPoint {
        let ks = self.split(idx);
        PeriodicPoint { n: self.n, blocks: ks.iter().zip(&self.comps).map(|(&k, c)| c.blocks[k].clone()).collect() }
    }

    /// ∏_j f(orbit element j), via the shift form or the fractional-part form.
    pub fn product(&self, f: &StepFn, idx: usize, frac_form: bool) -> KVal {
        assert!(f.level() <= self.level, "table level below the step function level");
        let ks = self.split(idx);
        let k = f.field();
        let mut acc = k.one();
        let mut res = vec![0u64; self.comps.len()];
        for j in 0..self.n {
            for (t, (c, &b)) in self.comps.iter().zip(&ks).enumerate() {
                res[t] =
                    if frac_form { c.frac.as_ref().expect("fractional form available")[b][j] } else { c.shift[b][j] };
            }
            acc = k.mul(&acc, &f.table()[f.index_of_residues(&res)]);
        }
        acc
    }
}

/// Labels a point by its coordinates: x for the minus form, y for the plain form.
pub fn point_label(dom: &Domain, pt: &PeriodicPoint, kind: OrbitKind) -> String {
    let fr = pt.fractions(dom);
    let fr: Vec<String> = match kind {
        OrbitKind::Minus => fr.iter().map(|f| f.to_string()).collect(),
        OrbitKind::Plain => fr.iter().map(|f| f.neg().to_string()).collect(),
    };
    format!("({})", fr.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub n: usize,
    pub points: usize,
    pub failures: usize,
    /// Up to ten failing points.
    pub examples: Vec<String>,
    /// Whether the ⟨𝛑^j x⟩ form was evaluated (canonical digits only).
    pub frac_form_checked: bool,
    /// The two formulations give the same products at every point.
    pub forms_agree: bool,
    pub pass: bool,
}

/// Compares ∏Γ and ∏H over the orbit of every period-n point, in both formulations.
pub fn check_product_identity(h: &StepFn, gamma: &StepFn, n: usize, cap: u128, exec: Exec) -> Result<ProductReport> {
    h.check_compatible(gamma)?;
    let dom = h.domain();
    let table = OrbitTable::new(dom, n, h.level().max(gamma.level()), OrbitKind::Minus, cap)?;
    let frac = table.has_frac_form();
    let results = par::map_range(exec, table.point_count(), |i| {
        let ph = table.product(h, i, false);
        let pg = table.product(gamma, i, false);
        let mut ok = ph == pg;
        let mut agree = true;
        if frac {
            let fh = table.product(h, i, true);
            let fg = table.product(gamma, i, true);
            ok &= fh == fg;
            agree = fh == ph && fg == pg;
        }
        (ok, agree)
    });
    let bad: Vec<usize> = results.iter().enumerate().filter(|(_, r)| !r.0).map(|(i, _)| i).collect();
    let examples = bad.iter().take(10).map(|&i| point_label(dom, &table.point(i), OrbitKind::Minus)).collect();
    Ok(ProductReport {
        n,
        points: results.len(),
        failures: bad.len(),
        examples,
        frac_form_checked: frac,
        forms_agree: results.iter().all(|r| r.1),
        pass: bad.is_empty(),
    })
}

/// Periods scanned by [`cocycle_scan`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleScan {
    pub periods: Vec<usize>,
    pub points: usize,
}

/// Checks φ^{(n)}(y) = y ⟹ ∏_j F(φ^{(j)}(y)) = 1 for n ≤ max_n; periods whose point count
/// exceeds the cap are skipped.
pub fn cocycle_scan(f: &StepFn, max_n: usize, cap: u128, exec: Exec) -> Result<CocycleScan> {
    let dom = f.domain();
    let one = f.field().one();
    let mut scan = CocycleScan { periods: Vec::new(), points: 0 };
    for n in 1..=max_n {
        if periodic_count(dom, n) > cap {
            break;
        }
        let table = OrbitTable::new(dom, n, f.level(), OrbitKind::Plain, cap)?;
        let bad =
            par::map_range(exec, table.point_count(), |i| table.product(f, i, false) != one).iter().position(|&b| b);
        if let Some(i) = bad {
            return Err(Error::CocycleViolation {
                point: point_label(dom, &table.point(i), OrbitKind::Plain),
                period: n,
            });
        }
        scan.periods.push(n);
        scan.points += table.point_count();
    }
    Ok(scan)
}
