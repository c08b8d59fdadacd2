//! Carlitz factorial, global and v-adic gamma functions, Morita's Γ_p.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num::{BigInt, BigRational, ToPrimitive};
use serde::Serialize;

use crate::algebra::{enumerate_monic, is_irreducible, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::local::{Component, FracElem, Integral, LocalElem, Place};

/// Truncation rule for the infinite products over i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncationRule {
    pub guard: usize,
    pub window: usize,
    pub max_index: usize,
}

impl Default for TruncationRule {
    fn default() -> Self {
        TruncationRule { guard: 2, window: 3, max_index: 64 }
    }
}

/// Evidence for a truncated product: factors with index ≥ `index` were dropped after
/// `window` consecutive factors were ≡ 1 mod v^`modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub index: usize,
    pub modulus: usize,
    pub tail_valuations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaValue {
    pub value: LocalElem,
    pub certificate: Certificate,
}

impl GammaValue {
    /// Canonical representative mod v^N.
    pub fn poly(&self) -> Poly {
        match self.value.value() {
            Integral::Poly(f) => f,
            Integral::Int(_) => unreachable!("gamma values live in A_v"),
        }
    }
}

/// x^♭: x if x is a unit, 1 if v | x.
pub fn flat(x: &LocalElem) -> Result<LocalElem> {
    if x.precision() == 0 {
        return Err(Error::PrecisionExhausted);
    }
    let comp = x.component();
    if !matches!(comp.place(), Place::A { .. }) {
        return Err(Error::Domain("flat is defined on A_v".into()));
    }
    if comp.reduce(&x.value(), 1).is_zero() {
        Ok(LocalElem::from_integral(comp.clone(), &comp.one(), x.precision()))
    } else {
        Ok(x.clone())
    }
}

fn flat_poly(x: &Poly, v: &Poly) -> Poly {
    if x.rem(v).expect("nonzero").is_zero() {
        Poly::one(x.p())
    } else {
        x.clone()
    }
}

/// D_i = ∏_{a ∈ A_{+,i}} a.
pub fn monic_product(p: u32, i: usize) -> Poly {
    enumerate_monic(p, i).fold(Poly::one(p), |acc, a| acc.mul(&a))
}

/// Γ^ari(y+1) = ∏ D_i^{y_i} with y = Σ y_i p^i.
pub fn carlitz_factorial(p: u32, y: u64) -> Poly {
    let mut r = Poly::one(p);
    let mut t = y;
    let mut i = 0;
    while t > 0 {
        let yi = (t % p as u64) as u32;
        if yi > 0 {
            r = r.mul(&monic_product(p, i).pow(yi));
        }
        t /= p as u64;
        i += 1;
    }
    r
}

/// Σ_{e≥1} ⌊y / q^{e·deg f}⌋ for monic irreducible f.
pub fn sinnott_valuation(y: u64, f: &Poly) -> Result<u64> {
    if !is_irreducible(f)? {
        return Err(Error::Reducible);
    }
    let q = f.p() as u128;
    let step = q.pow(f.degree().unwrap_or(0) as u32);
    let mut s = 0u64;
    let mut qe = step;
    while qe <= y as u128 {
        s += (y as u128 / qe) as u64;
        qe *= step;
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GlobalGamma {
    Pole,
    /// (1/x)∏_{deg a ≤ degree} a/(x+a); the omitted tail is 1 + (terms of degree ≤ tail_degree_bound).
    Value {
        partial: RatFunc,
        degree: usize,
        tail_degree_bound: i64,
    },
}

/// Γ^geo(x) = (1/x)∏_{a∈A_+} a/(x+a), truncated after monic degree `degree`.
pub fn gamma_geo_global(x: &RatFunc, degree: usize) -> GlobalGamma {
    let p = x.p();
    if x.is_zero() || (x.is_integral() && x.num().neg().is_monic()) {
        return GlobalGamma::Pole;
    }
    let mut acc = x.inv().expect("nonzero");
    for i in 0..=degree {
        for a in enumerate_monic(p, i) {
            let a = RatFunc::from_poly(a);
            acc = acc.mul(&a.div(&x.add(&a)).expect("x + a ≠ 0 off the poles"));
        }
    }
    let dx = x.degree().unwrap_or(0);
    GlobalGamma::Value { partial: acc, degree, tail_degree_bound: dx - (degree as i64 + 1) }
}

struct Factors {
    list: Vec<Poly>,
    cert: Certificate,
}

/// v-adic gamma functions for a fixed place v of A = F_p[θ].
pub struct VGamma {
    v: Poly,
    av: Arc<Component>,
    zp: Arc<Component>,
    rule: TruncationRule,
    ari_cache: Mutex<HashMap<usize, Arc<Factors>>>,
}

impl VGamma {
    pub fn new(v: Poly) -> Result<VGamma> {
        VGamma::with_rule(v, TruncationRule::default())
    }

    pub fn with_rule(v: Poly, rule: TruncationRule) -> Result<VGamma> {
        let av = Arc::new(Component::av(v.clone(), 1)?);
        let zp = Arc::new(Component::zp(v.p(), 1)?);
        Ok(VGamma { v, av, zp, rule, ari_cache: Mutex::new(HashMap::new()) })
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }

    pub fn p(&self) -> u32 {
        self.v.p()
    }

    /// The A_v component (π = v) in which values are returned.
    pub fn av(&self) -> &Arc<Component> {
        &self.av
    }

    /// The Z_p component (π = p) for arithmetic arguments.
    pub fn zp(&self) -> &Arc<Component> {
        &self.zp
    }

    pub fn rule(&self) -> TruncationRule {
        self.rule
    }

    fn converge(&self, m: usize, factor: impl Fn(usize, &Poly) -> Poly) -> Result<Factors> {
        let vm = self.v.pow(m as u32);
        let mut list = Vec::new();
        let mut run = 0;
        let mut tails = Vec::new();
        for i in 0..self.rule.max_index {
            let f = factor(i, &vm);
            if f.is_one() {
                run += 1;
                let diff = f.sub(&Poly::one(self.p()));
                tails.push(diff.valuation(&self.v).map_or(m, |d| d as usize).max(m));
            } else {
                run = 0;
                tails.clear();
            }
            list.push(f);
            if run >= self.rule.window {
                let index = list.len() - run;
                list.truncate(index);
                return Ok(Factors { list, cert: Certificate { index, modulus: m, tail_valuations: tails } });
            }
        }
        Err(Error::NonConvergence(format!(
            "no {} consecutive factors ≡ 1 mod v^{m} below index {}",
            self.rule.window, self.rule.max_index
        )))
    }

    fn ari_factors(&self, m: usize) -> Result<Arc<Factors>> {
        if let Some(f) = self.ari_cache.lock().expect("cache lock").get(&m) {
            return Ok(f.clone());
        }
        let p = self.p();
        let v = self.v.clone();
        let fs = Arc::new(self.converge(m, |i, vm| {
            let prod = enumerate_monic(p, i)
                .filter(|a| !a.rem(&v).expect("nonzero").is_zero())
                .fold(Poly::one(p), |acc, a| acc.mul_mod(&a, vm));
            prod.neg().rem(vm).expect("nonzero")
        })?);
        self.ari_cache.lock().expect("cache lock").insert(m, fs.clone());
        Ok(fs)
    }

    fn geo_factors(&self, x: &Poly, m: usize) -> Result<Factors> {
        let p = self.p();
        let v = &self.v;
        self.converge(m, |i, vm| {
            let mut num = Poly::one(p);
            let mut den = Poly::one(p);
            for a in enumerate_monic(p, i) {
                num = num.mul_mod(&flat_poly(&a, v), vm);
                den = den.mul_mod(&flat_poly(&x.add(&a), v), vm);
            }
            num.mul_mod(&den.inv_mod(vm).expect("unit"), vm)
        })
    }

    fn finish(&self, val: Poly, n: usize, cert: Certificate) -> GammaValue {
        let value = LocalElem::from_integral(self.av.clone(), &Integral::Poly(val), n);
        GammaValue { value, certificate: cert }
    }

    /// Digits y_0..y_{k−1} of y = arg − 1.
    fn y_digits(&self, arg: &LocalElem, k: usize) -> Result<Vec<u32>> {
        if arg.component() != &self.zp {
            return Err(Error::Domain(format!("argument must lie in {}", self.zp.id())));
        }
        if arg.precision() < k {
            return Err(Error::InsufficientPrecision { needed: k, available: arg.precision() });
        }
        let one = LocalElem::from_integral(self.zp.clone(), &self.zp.one(), arg.precision());
        Ok(arg.sub(&one)?.digits()[..k].to_vec())
    }

    fn av_poly(&self, x: &LocalElem, m: usize) -> Result<Poly> {
        if x.component() != &self.av {
            return Err(Error::Domain(format!("argument must lie in {}", self.av.id())));
        }
        if x.precision() < m {
            return Err(Error::InsufficientPrecision { needed: m, available: x.precision() });
        }
        match x.truncate(m).value() {
            Integral::Poly(f) => Ok(f),
            Integral::Int(_) => unreachable!(),
        }
    }

    /// Γ_v^ari(arg) = ∏_i (−∏_{a∈A_{+,i}} a^♭)^{y_i}, arg = y + 1 in Z_p.
    pub fn ari(&self, arg: &LocalElem, n: usize) -> Result<GammaValue> {
        let m = n + self.rule.guard;
        let fs = self.ari_factors(m)?;
        let ys = self.y_digits(arg, fs.cert.index)?;
        let vm = self.v.pow(m as u32);
        let mut r = Poly::one(self.p());
        for (f, &y) in fs.list.iter().zip(&ys) {
            if y > 0 {
                r = r.mul_mod(&f.pow_mod(y as u128, &vm), &vm);
            }
        }
        Ok(self.finish(r, n, fs.cert.clone()))
    }

    /// Γ_v^ari at a rational argument with p-unit denominator.
    pub fn ari_rat(&self, arg: &BigRational, n: usize) -> Result<GammaValue> {
        let x = LocalElem::digits_of(self.zp.clone(), &FracElem::Rat(arg.clone()), self.rule.max_index)?;
        self.ari(&x, n)
    }

    /// Γ_v^geo(x) = (1/x^♭)∏_i ∏_{a∈A_{+,i}} a^♭/(x+a)^♭.
    pub fn geo(&self, x: &LocalElem, n: usize) -> Result<GammaValue> {
        let m = n + self.rule.guard;
        let xp = self.av_poly(x, m)?;
        let vm = self.v.pow(m as u32);
        let fs = self.geo_factors(&xp, m)?;
        let mut r = flat_poly(&xp, &self.v).inv_mod(&vm)?;
        for f in &fs.list {
            r = r.mul_mod(f, &vm);
        }
        Ok(self.finish(r, n, fs.cert))
    }

    pub fn geo_frac(&self, x: &RatFunc, n: usize) -> Result<GammaValue> {
        let m = n + self.rule.guard;
        self.geo(&LocalElem::digits_of(self.av.clone(), &FracElem::Fun(x.clone()), m)?, n)
    }

    /// Γ_v^two(x, arg) = (1/x^♭)∏_i (∏_{a∈A_{+,i}} a^♭/(x+a)^♭)^{y_i}, arg = y + 1.
    pub fn two(&self, x: &LocalElem, arg: &LocalElem, n: usize) -> Result<GammaValue> {
        let m = n + self.rule.guard;
        let xp = self.av_poly(x, m)?;
        let vm = self.v.pow(m as u32);
        let fs = self.geo_factors(&xp, m)?;
        let ys = self.y_digits(arg, fs.cert.index)?;
        let mut r = flat_poly(&xp, &self.v).inv_mod(&vm)?;
        for (f, &y) in fs.list.iter().zip(&ys) {
            if y > 0 {
                r = r.mul_mod(&f.pow_mod(y as u128, &vm), &vm);
            }
        }
        Ok(self.finish(r, n, fs.cert))
    }

    pub fn two_frac(&self, x: &RatFunc, arg: &BigRational, n: usize) -> Result<GammaValue> {
        let m = n + self.rule.guard;
        let xl = LocalElem::digits_of(self.av.clone(), &FracElem::Fun(x.clone()), m)?;
        let al = LocalElem::digits_of(self.zp.clone(), &FracElem::Rat(arg.clone()), self.rule.max_index)?;
        self.two(&xl, &al, n)
    }
}

/// Largest p^N for which Morita's product is evaluated directly.
pub const MORITA_CAP: u128 = 1 << 26;

/// Γ_p(x) mod p^N via Γ_p(n) = (−1)^n ∏_{1≤t<n, p∤t} t for the least n ≥ 1 with n ≡ x mod p^N.
pub fn morita_gamma_p(x: &LocalElem, n: usize) -> Result<LocalElem> {
    let comp = x.component();
    let p = match comp.place() {
        Place::Z { p } if comp.e() == 1 && comp.is_canonical() => *p,
        _ => return Err(Error::Domain("Morita's Γ_p takes a canonical Z_p argument".into())),
    };
    if p == 2 {
        return Err(Error::Unsupported("Morita Γ_p for p = 2".into()));
    }
    if x.precision() < n {
        return Err(Error::InsufficientPrecision { needed: n, available: x.precision() });
    }
    let modulus = (p as u128)
        .checked_pow(n as u32)
        .filter(|&m| m <= MORITA_CAP)
        .ok_or(Error::EnumerationCap { count: (p as f64).powi(n as i32) as u128, cap: MORITA_CAP })?;
    let Integral::Int(xv) = x.truncate(n).value() else { unreachable!() };
    let mut k = xv.to_u128().expect("reduced value fits");
    if k == 0 {
        k = modulus;
    }
    let mut acc: u128 = 1;
    for t in 1..k {
        if t % p as u128 != 0 {
            acc = acc * t % modulus;
        }
    }
    if k % 2 == 1 {
        acc = (modulus - acc) % modulus;
    }
    Ok(LocalElem::from_integral(comp.clone(), &Integral::Int(BigInt::from(acc)), n))
}

/// Morita's Γ_p at a small positive integer, computed directly.
pub fn morita_at_integer(p: u32, k: u64, n: usize) -> Result<LocalElem> {
    let comp = Arc::new(Component::zp(p, 1)?);
    let x = LocalElem::digits_of(comp, &FracElem::Rat(BigRational::from_integer(k.into())), n)?;
    morita_gamma_p(&x, n)
}
