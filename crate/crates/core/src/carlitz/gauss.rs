use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::context::CarlitzContext;
use crate::algebra::{Poly, RatFunc};
use crate::error::{Error, Result};
use crate::local::TowerElem;

#[derive(Debug, Clone, PartialEq)]
pub enum GaussCase {
    Ari,
    Geo { x: RatFunc },
}

#[derive(Debug, Clone)]
pub struct GaussSum {
    pub case: GaussCase,
    /// (g)^{τ_q^s} for 0 ≤ s < dℓ; entry 0 is g itself.
    pub conjugates: Vec<TowerElem>,
}

impl GaussSum {
    pub fn value(&self) -> &TowerElem {
        &self.conjugates[0]
    }
}

/// (g^ari)^{τ_q^s} = −Σ_{z≠0} χ(z^{−1})^{q^s} ψ(z).
pub fn gauss_ari_conjugate(ctx: &CarlitzContext, s: usize) -> TowerElem {
    let f = ctx.residue_field();
    let mut r = TowerElem::zero(ctx.ari_tower(), ctx.ari_precision());
    for z in f.elements().skip(1) {
        let c = f.frobenius(f.inv(z).expect("z ≠ 0"), s);
        r = r.add(&ctx.psi(z).scale(c));
    }
    r.neg()
}

pub fn gauss_ari(ctx: &CarlitzContext) -> GaussSum {
    let conjugates = (0..ctx.d() * ctx.ell()).map(|s| gauss_ari_conjugate(ctx, s)).collect();
    GaussSum { case: GaussCase::Ari, conjugates }
}

/// q^{dℓ} − 1.
pub fn y_denominator(ctx: &CarlitzContext) -> u64 {
    (ctx.q() as u64).pow((ctx.d() * ctx.ell()) as u32) - 1
}

/// Y = y(q^{dℓ}−1) for admissible y.
pub fn y_numerator(ctx: &CarlitzContext, y: &BigRational) -> Result<u64> {
    let den = y_denominator(ctx);
    let scaled = y * BigRational::from_integer(BigInt::from(den));
    if y.is_negative() || *y >= BigRational::one() || !scaled.is_integer() {
        return Err(Error::Domain(format!("y = {y} is not in (q^dℓ−1)^−1·Z ∩ [0,1)")));
    }
    Ok(scaled.to_integer().to_u64().expect("below the denominator"))
}

/// Digits y_s of y = Σ y_s q^s/(q^{dℓ}−1), 0 ≤ s < dℓ.
pub fn y_digits(ctx: &CarlitzContext, y: &BigRational) -> Result<Vec<u32>> {
    let mut t = y_numerator(ctx, y)?;
    let q = ctx.q() as u64;
    Ok((0..ctx.d() * ctx.ell())
        .map(|_| {
            let r = (t % q) as u32;
            t /= q;
            r
        })
        .collect())
}

/// All admissible y, in increasing order.
pub fn admissible_y(ctx: &CarlitzContext) -> Vec<BigRational> {
    let den = y_denominator(ctx);
    (0..den).map(|k| BigRational::new(BigInt::from(k), BigInt::from(den))).collect()
}

fn conj_product(conj: &[TowerElem], ys: &[u32], one: TowerElem) -> TowerElem {
    ys.iter().zip(conj).fold(one, |acc, (&y, g)| if y == 0 { acc } else { acc.mul(&g.pow(y as u128)) })
}

/// G^ari(y) = (−1)^{ℓ(d−1)} ∏_s (g^ari)^{y_s τ_q^s}.
pub fn big_g_ari(ctx: &CarlitzContext, g: &GaussSum, y: &BigRational) -> Result<TowerElem> {
    let ys = y_digits(ctx, y)?;
    let mut one = TowerElem::one(ctx.ari_tower(), ctx.ari_precision());
    if (ctx.ell() * (ctx.d() - 1)) % 2 == 1 {
        one = one.neg();
    }
    Ok(conj_product(&g.conjugates, &ys, one))
}

/// m = x(𝔫−1) for x ∈ (𝔫−1)^{−1}A with |x| < 1.
pub fn x_numerator(ctx: &CarlitzContext, x: &RatFunc) -> Result<Poly> {
    let m = x.mul(&RatFunc::from_poly(ctx.n_minus_one().clone()));
    let bad = || Error::Domain(format!("x = {x} is not in (v^ℓ−1)^−1·A with |x| < 1"));
    if !m.is_integral() {
        return Err(bad());
    }
    let m = m.num().clone();
    if m.degree().is_some_and(|k| k >= ctx.d() * ctx.ell()) {
        return Err(bad());
    }
    Ok(m)
}

/// All admissible x = m/(𝔫−1), deg m < dℓ, in index order of m.
pub fn admissible_x(ctx: &CarlitzContext) -> Vec<RatFunc> {
    let q = ctx.q();
    let count = (q as u64).pow((ctx.d() * ctx.ell()) as u32);
    (0..count)
        .map(|k| RatFunc::new(Poly::from_index(q, k, ctx.d() * ctx.ell()), ctx.n_minus_one().clone()).expect("nonzero"))
        .collect()
}

/// (g^geo_x)^{τ_q^s} = 1 + Σ_{z≠0} ω(C_m(z^{−1})) ψ(z^{q^s}).
pub fn gauss_geo_conjugate(ctx: &CarlitzContext, x: &RatFunc, s: usize) -> Result<TowerElem> {
    let m = x_numerator(ctx, x)?;
    Ok(geo_conj(ctx, &m, s))
}

fn geo_conj(ctx: &CarlitzContext, m: &Poly, s: usize) -> TowerElem {
    let f = ctx.geo_field();
    let mut r = TowerElem::one(ctx.geo_tower(), ctx.geo_precision());
    for z in f.elements().skip(1) {
        let w = ctx.act_residue(m, f.inv(z).expect("z ≠ 0"));
        if w != 0 {
            r = r.add(&ctx.omega(w).scale(f.frobenius(z, s)));
        }
    }
    r
}

pub fn gauss_geo(ctx: &CarlitzContext, x: &RatFunc) -> Result<GaussSum> {
    let m = x_numerator(ctx, x)?;
    let conjugates = (0..ctx.d() * ctx.ell()).map(|s| geo_conj(ctx, &m, s)).collect();
    Ok(GaussSum { case: GaussCase::Geo { x: x.clone() }, conjugates })
}

/// G^geo(x, y) = ∏_s (g^geo_x)^{y_s τ_q^s}.
pub fn big_g_geo(ctx: &CarlitzContext, g: &GaussSum, y: &BigRational) -> Result<TowerElem> {
    let ys = y_digits(ctx, y)?;
    Ok(conj_product(&g.conjugates, &ys, TowerElem::one(ctx.geo_tower(), ctx.geo_precision())))
}

/// G^geo(x) = ∏_s (g^geo_x)^{τ_q^s}, taken as the full product for every q.
pub fn big_g_geo_default(ctx: &CarlitzContext, g: &GaussSum) -> TowerElem {
    let ys = vec![1; ctx.d() * ctx.ell()];
    conj_product(&g.conjugates, &ys, TowerElem::one(ctx.geo_tower(), ctx.geo_precision()))
}

/// Base-v digits x_0..x_{ℓ−1} of m = x(𝔫−1), each of degree < d.
pub fn x_digits(ctx: &CarlitzContext, x: &RatFunc) -> Result<Vec<Poly>> {
    let mut t = x_numerator(ctx, x)?;
    let mut out = Vec::with_capacity(ctx.ell());
    for _ in 0..ctx.ell() {
        let (q, r) = t.divmod(ctx.v())?;
        out.push(r);
        t = q;
    }
    Ok(out)
}

/// ⟨v^j x⟩ = (v^j m mod 𝔫−1)/(𝔫−1).
pub fn rotate_x(ctx: &CarlitzContext, x: &RatFunc, j: usize) -> Result<RatFunc> {
    let m = x_numerator(ctx, x)?;
    let r = ctx.v().pow(j as u32).mul(&m).rem(ctx.n_minus_one())?;
    RatFunc::new(r, ctx.n_minus_one().clone())
}

/// δ_{x,j} = v·⟨v^{ℓ−j−1}x⟩ if x_j is monic, else 1.
pub fn delta_factor(ctx: &CarlitzContext, x: &RatFunc, j: usize) -> Result<RatFunc> {
    let xs = x_digits(ctx, x)?;
    let xj = xs.get(j).ok_or(Error::Domain(format!("digit index {j} ≥ ℓ")))?;
    if xj.is_zero() || !xj.is_monic() {
        return Ok(RatFunc::from_poly(Poly::one(ctx.q())));
    }
    Ok(RatFunc::from_poly(ctx.v().clone()).mul(&rotate_x(ctx, x, ctx.ell() - j - 1)?))
}

/// ⟨q^{dj} y⟩.
pub fn rotate_y(ctx: &CarlitzContext, y: &BigRational, j: usize) -> Result<BigRational> {
    let den = y_denominator(ctx);
    let yn = y_numerator(ctx, y)? as u128;
    let qd = (ctx.q() as u128).pow((ctx.d() * j) as u32);
    Ok(BigRational::new(BigInt::from(yn * qd % den as u128), BigInt::from(den)))
}

/// (q^d−1)·Σ_j ⟨q^{dj} y⟩, asserted to be a non-negative integer.
pub fn varpi_exponent(ctx: &CarlitzContext, y: &BigRational) -> Result<u64> {
    let mut s = BigRational::zero();
    for j in 0..ctx.ell() {
        s += rotate_y(ctx, y, j)?;
    }
    let s = s * BigRational::from_integer(BigInt::from(ctx.e()));
    if !s.is_integer() || s.is_negative() {
        return Err(Error::Domain(format!("ϖ exponent {s} is not a non-negative integer")));
    }
    Ok(s.to_integer().to_u64().expect("small exponent"))
}
