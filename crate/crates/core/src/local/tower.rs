use std::fmt;
use std::sync::Arc;

use super::component::{Component, Integral, Place};
use super::elem::LocalElem;
use crate::algebra::{ExtField, ExtFieldElem, Poly};
use crate::error::{Error, Result};

/// F[[u]] over a finite residue field F with u^e = sign·v: unramified (u = v) or
/// totally ramified (u^{q^d−1} = −v).
pub struct Tower {
    field: ExtField,
    v: Poly,
    e: u64,
    negate: bool,
    zeta: u32,
    cap: i64,
    theta: Vec<u32>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 && !self.negate {
            write!(f, "unramified({:?}, v={})", self.field, self.v.to_human())
        } else {
            write!(f, "ramified({:?}, u^{}=-{})", self.field, self.e, self.v.to_human())
        }
    }
}

impl Tower {
    /// Unramified tower with uniformizer v; ζ must be a root of v in `field`.
    pub fn unramified(field: ExtField, v: Poly, zeta: u32, cap: i64) -> Result<Arc<Tower>> {
        Tower::build(field, v, zeta, 1, false, cap)
    }

    /// Totally ramified tower with uniformizer ϖ, ϖ^e = −v.
    pub fn ramified(field: ExtField, v: Poly, zeta: u32, e: u64, cap: i64) -> Result<Arc<Tower>> {
        Tower::build(field, v, zeta, e, true, cap)
    }

    /// The completion A_v itself: residue field A/v, ζ = θ mod v.
    pub fn completion(v: &Poly, cap: i64) -> Result<Arc<Tower>> {
        let field = ExtField::new(v.clone())?;
        let zeta = field.from_poly(&Poly::theta(v.p()));
        Tower::unramified(field, v.clone(), zeta, cap)
    }

    fn build(field: ExtField, v: Poly, zeta: u32, e: u64, negate: bool, cap: i64) -> Result<Arc<Tower>> {
        if field.p() != v.p() {
            return Err(Error::FieldMismatch(format!("{field:?}"), v.to_human()));
        }
        if field.eval_poly(&v, zeta) != 0 {
            return Err(Error::Domain("ζ is not a root of v".into()));
        }
        if cap < 1 {
            return Err(Error::Domain("tower precision must be positive".into()));
        }
        let t_prec = (cap as u64).div_ceil(e) as usize + 1;
        let theta_t = theta_series(&field, &v, zeta, t_prec)?;
        let mut theta = vec![0u32; cap as usize];
        for (k, &c) in theta_t.iter().enumerate() {
            let idx = k as u64 * e;
            if idx < cap as u64 {
                theta[idx as usize] = if negate && k % 2 == 1 { field.neg(c) } else { c };
            }
        }
        Ok(Arc::new(Tower { field, v, e, negate, zeta, cap, theta }))
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }

    /// Ramification index: u^e = ±v.
    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn is_ramified(&self) -> bool {
        self.negate || self.e > 1
    }

    pub fn zeta(&self) -> u32 {
        self.zeta
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }
}

fn series_mul(f: &ExtField, a: &[u32], b: &[u32], n: usize) -> Vec<u32> {
    let mut r = vec![0u32; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            if y != 0 {
                r[i + j] = f.add(r[i + j], f.mul(x, y));
            }
        }
    }
    r
}

fn series_inv(f: &ExtField, a: &[u32], n: usize) -> Result<Vec<u32>> {
    let i0 = f.inv(a[0])?;
    let mut r = vec![0u32; n];
    r[0] = i0;
    for k in 1..n {
        let mut acc = 0;
        for j in 1..=k.min(a.len() - 1) {
            if a[j] != 0 && r[k - j] != 0 {
                acc = f.add(acc, f.mul(a[j], r[k - j]));
            }
        }
        r[k] = f.mul(f.neg(acc), i0);
    }
    Ok(r)
}

fn series_eval_poly(f: &ExtField, poly: &Poly, x: &[u32], n: usize) -> Vec<u32> {
    let mut r = vec![0u32; n];
    for &c in poly.coeffs().iter().rev() {
        r = series_mul(f, &r, x, n);
        r[0] = f.add(r[0], f.constant(c));
    }
    r
}

/// Θ ∈ F[[T]] with v(Θ) = T and Θ ≡ ζ, by Newton iteration.
fn theta_series(f: &ExtField, v: &Poly, zeta: u32, n: usize) -> Result<Vec<u32>> {
    let dv = v.derivative();
    let mut th = vec![0u32; n];
    th[0] = zeta;
    let mut good = 1usize;
    while good < n {
        let mut fv = series_eval_poly(f, v, &th, n);
        fv[1 % n] = f.sub(fv[1 % n], if n > 1 { 1 } else { 0 });
        let d = series_eval_poly(f, &dv, &th, n);
        let corr = series_mul(f, &fv, &series_inv(f, &d, n)?, n);
        for k in 0..n {
            th[k] = f.sub(th[k], corr[k]);
        }
        good *= 2;
    }
    let mut check = series_eval_poly(f, v, &th, n);
    if n > 1 {
        check[1] = f.sub(check[1], 1);
    }
    if check.iter().any(|&c| c != 0) {
        return Err(Error::NonConvergence("θ-series Newton iteration".into()));
    }
    Ok(th)
}

/// Truncated Laurent series Σ_{i≥val} c_i u^i + O(u^prec) in a tower.
#[derive(Clone)]
pub struct TowerElem {
    tower: Arc<Tower>,
    val: i64,
    coeffs: Vec<u32>,
    prec: i64,
}

impl PartialEq for TowerElem {
    fn eq(&self, o: &TowerElem) -> bool {
        self.val == o.val && self.prec == o.prec && self.coeffs == o.coeffs
    }
}

impl TowerElem {
    /// Builds from coefficients starting at u^val, known mod u^prec.
    pub fn from_coeffs(tower: &Arc<Tower>, val: i64, coeffs: &[u32], prec: i64) -> TowerElem {
        let prec = prec.min(tower.cap.max(val));
        let len = (prec - val).max(0) as usize;
        let mut c: Vec<u32> = coeffs.iter().take(len).copied().collect();
        c.resize(len, 0);
        let mut x = TowerElem { tower: tower.clone(), val, coeffs: c, prec };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|&c| c != 0).unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        if self.prec > self.tower.cap && self.val < self.tower.cap {
            let keep = (self.tower.cap - self.val) as usize;
            self.coeffs.truncate(keep);
            self.prec = self.tower.cap;
        }
        if self.coeffs.is_empty() {
            self.val = self.prec;
        }
    }

    pub fn zero(tower: &Arc<Tower>, prec: i64) -> TowerElem {
        TowerElem::from_coeffs(tower, prec, &[], prec)
    }

    pub fn constant(tower: &Arc<Tower>, c: u32, prec: i64) -> TowerElem {
        TowerElem::from_coeffs(tower, 0, &[c], prec)
    }

    pub fn one(tower: &Arc<Tower>, prec: i64) -> TowerElem {
        TowerElem::constant(tower, 1, prec)
    }

    pub fn uniformizer(tower: &Arc<Tower>, prec: i64) -> TowerElem {
        TowerElem::from_coeffs(tower, 1, &[1], prec)
    }

    /// Image of θ.
    pub fn theta(tower: &Arc<Tower>, prec: i64) -> TowerElem {
        TowerElem::from_coeffs(tower, 0, &tower.theta, prec)
    }

    /// Image of a ∈ A, known mod u^prec.
    pub fn from_poly(tower: &Arc<Tower>, a: &Poly, prec: i64) -> TowerElem {
        let f = &tower.field;
        let n = prec.clamp(0, tower.cap) as usize;
        let s = series_eval_poly(f, a, &tower.theta[..n], n);
        TowerElem::from_coeffs(tower, 0, &s, prec)
    }

    /// Image of v.
    pub fn v(tower: &Arc<Tower>, prec: i64) -> TowerElem {
        let mut c = vec![0u32; tower.e as usize + 1];
        c[tower.e as usize] = if tower.negate { tower.field.neg(1) } else { 1 };
        TowerElem::from_coeffs(tower, 0, &c, prec)
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    /// Valuation; equals the precision when the element is zero at known precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: i64) -> u32 {
        if i < self.val || i >= self.prec {
            0
        } else {
            self.coeffs[(i - self.val) as usize]
        }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of u^0 when the element is integral.
    pub fn residue(&self) -> u32 {
        self.coeff(0)
    }

    pub fn residue_elem(&self) -> ExtFieldElem {
        self.tower.field.elem(self.residue())
    }

    fn check(&self, o: &TowerElem) {
        debug_assert!(Arc::ptr_eq(&self.tower, &o.tower), "tower mismatch");
    }

    pub fn add(&self, o: &TowerElem) -> TowerElem {
        self.check(o);
        let f = &self.tower.field;
        let prec = self.prec.min(o.prec);
        let start = self.val.min(o.val).min(prec);
        let c: Vec<u32> = (start..prec).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        TowerElem::from_coeffs(&self.tower, start, &c, prec)
    }

    pub fn neg(&self) -> TowerElem {
        let f = &self.tower.field;
        TowerElem {
            tower: self.tower.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &TowerElem) -> TowerElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &TowerElem) -> TowerElem {
        self.check(o);
        let prec = (self.prec + o.val).min(o.prec + self.val);
        let val = self.val + o.val;
        if self.is_zero() || o.is_zero() {
            return TowerElem::zero(&self.tower, prec);
        }
        let n = (prec - val).max(0) as usize;
        let c = series_mul(&self.tower.field, &self.coeffs, &o.coeffs, n);
        TowerElem::from_coeffs(&self.tower, val, &c, prec)
    }

    pub fn scale(&self, c: u32) -> TowerElem {
        let f = &self.tower.field;
        let cs: Vec<u32> = self.coeffs.iter().map(|&x| f.mul(x, c)).collect();
        TowerElem::from_coeffs(&self.tower, self.val, &cs, self.prec)
    }

    pub fn inv(&self) -> Result<TowerElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.coeffs.len();
        let c = series_inv(&self.tower.field, &self.coeffs, n)?;
        Ok(TowerElem::from_coeffs(&self.tower, -self.val, &c, -self.val + n as i64))
    }

    pub fn div(&self, o: &TowerElem) -> Result<TowerElem> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u128) -> TowerElem {
        let mut r = TowerElem::one(&self.tower, self.tower.cap);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// x^{p^k}: Frobenius on coefficients and exponents scaled by p^k.
    pub fn frob_pow(&self, k: u32) -> TowerElem {
        let f = &self.tower.field;
        let s = (f.p() as i64).pow(k);
        let cap = self.tower.cap;
        let val = self.val * s;
        let prec = self.prec.saturating_mul(s).min(cap.max(val));
        let len = (prec - val).max(0) as usize;
        let mut c = vec![0u32; len];
        for (i, &x) in self.coeffs.iter().enumerate() {
            let idx = i * s as usize;
            if idx < len {
                c[idx] = f.frobenius(x, k as usize);
            }
        }
        TowerElem::from_coeffs(&self.tower, val, &c, prec)
    }

    /// Multiplies by u^k.
    pub fn shift(&self, k: i64) -> TowerElem {
        TowerElem::from_coeffs(&self.tower, self.val + k, &self.coeffs, self.prec + k)
    }

    pub fn with_precision(&self, prec: i64) -> TowerElem {
        let prec = prec.min(self.prec);
        TowerElem::from_coeffs(&self.tower, self.val, &self.coeffs, prec)
    }

    /// ord(self − o), capped by the known precision.
    pub fn ord_diff(&self, o: &TowerElem) -> i64 {
        self.sub(o).valuation()
    }

    pub fn to_text(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|&c| c.to_string()).collect();
        format!("u^{}*[{}] + O(u^{})", self.val, cs.join(","), self.prec)
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Evaluates Σ f_k X^k.
pub fn eval_poly(f: &[TowerElem], x: &TowerElem) -> TowerElem {
    let t = x.tower();
    let mut r = TowerElem::zero(t, t.cap());
    for c in f.iter().rev() {
        r = r.mul(x).add(c);
    }
    r
}

pub fn derivative(f: &[TowerElem]) -> Vec<TowerElem> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(c.tower().field().constant((k as u64 % c.tower().field().p() as u64) as u32)))
        .collect()
}

/// Newton iteration from x0 given closures for f and f′; the hypothesis
/// ord f(x0) > 2·ord f′(x0) is checked first.
pub fn newton<F, D>(f: F, df: D, x0: &TowerElem, n: i64) -> Result<TowerElem>
where
    F: Fn(&TowerElem) -> TowerElem,
    D: Fn(&TowerElem) -> TowerElem,
{
    let fx = f(x0);
    let dfx = df(x0);
    if fx.is_zero() && fx.precision() >= n {
        return Ok(x0.clone());
    }
    if dfx.is_zero() || fx.valuation() <= 2 * dfx.valuation() {
        return Err(Error::NewtonHypothesis { f_val: fx.valuation(), df_val: dfx.valuation() });
    }
    let mut x = x0.clone();
    let iters = (64 - (n.max(1) as u64).leading_zeros()) as usize + 4;
    for _ in 0..iters {
        let fx = f(&x);
        if fx.valuation() >= n {
            return Ok(x);
        }
        let dfx = df(&x);
        let step = fx.div(&dfx)?;
        x = x.sub(&step);
    }
    let fx = f(&x);
    if fx.valuation() >= n {
        Ok(x)
    } else if fx.precision() < n {
        Err(Error::InsufficientPrecision { needed: n as usize, available: fx.precision().max(0) as usize })
    } else {
        Err(Error::NonConvergence(format!("Newton stalled at ord f = {}", fx.valuation())))
    }
}

/// Root of the polynomial Σ f_k X^k in the Newton ball of x0, to precision n.
pub fn hensel_lift(f: &[TowerElem], x0: &TowerElem, n: i64) -> Result<TowerElem> {
    let df = derivative(f);
    newton(|x| eval_poly(f, x), |x| eval_poly(&df, x), x0, n)
}

/// Teichmüller lift of z: iterate x ↦ x^{|F|} from the constant lift until stable.
pub fn teichmuller_lift(tower: &Arc<Tower>, z: u32, n: i64) -> TowerElem {
    teichmuller_from(&TowerElem::constant(tower, z, n))
}

/// Teichmüller representative of the residue class of an integral x.
pub fn teichmuller_from(x: &TowerElem) -> TowerElem {
    let m = x.tower().field().degree() as u32;
    let n = x.precision();
    let mut cur = x.with_precision(n);
    loop {
        let next = cur.frob_pow(m).with_precision(n);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// A_v digit form (π = v, canonical digits) into the unramified tower with residue field A/v.
pub fn convert_rep(x: &LocalElem, tower: &Arc<Tower>) -> Result<TowerElem> {
    check_completion(x.component(), tower)?;
    let n = x.precision() as i64;
    let Integral::Poly(val) = x.value() else { unreachable!() };
    Ok(TowerElem::from_poly(tower, &val, n))
}

/// Inverse of [`convert_rep`].
pub fn convert_back(t: &TowerElem, comp: &Arc<Component>) -> Result<LocalElem> {
    let tower = t.tower();
    check_completion(comp, tower)?;
    if t.valuation() < 0 {
        return Err(Error::NotIntegral);
    }
    let n = t.precision().max(0);
    let f = tower.field();
    let mut s = t.clone();
    let mut digits = Vec::with_capacity(n as usize);
    for k in 0..n {
        let r = s.coeff(k);
        let d = f.to_poly(r);
        digits.push(comp.digit_index(&Integral::Poly(d.clone())));
        let dv = TowerElem::from_poly(tower, &d, n).shift(k);
        s = s.sub(&dv);
    }
    LocalElem::from_digits(comp.clone(), digits)
}

fn check_completion(comp: &Component, tower: &Tower) -> Result<()> {
    match comp.place() {
        Place::A { v, .. } if comp.e() == 1 && comp.is_canonical() && v == tower.v() && !tower.is_ramified() => {
            if tower.field().modulus() != v {
                return Err(Error::Domain("tower residue field must be A/v".into()));
            }
            Ok(())
        }
        _ => Err(Error::Domain("convert_rep needs a canonical A_v component with π = v".into())),
    }
}
