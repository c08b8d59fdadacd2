use std::sync::Arc;

use num::BigRational;
use serde::Serialize;

use super::context::CarlitzContext;
use super::gauss::{
    admissible_x, admissible_y, big_g_ari, big_g_geo_default, delta_factor, gauss_ari, gauss_geo, rotate_x, rotate_y,
    varpi_exponent, x_digits, y_digits,
};
use super::varpi_v;
use crate::algebra::{Poly, RatFunc};
use crate::error::Result;
use crate::local::{Tower, TowerElem};
use crate::par::{self, Exec};

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub case: String,
    pub q: u32,
    pub v: String,
    pub d: usize,
    pub ell: usize,
    pub x: Option<String>,
    pub y: Option<String>,
    #[serde(rename = "N")]
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
    /// ord_v(lhs − rhs), capped by the working precision.
    pub diff_valuation: u64,
    pub pass: bool,
}

struct Sides {
    lhs: TowerElem,
    rhs: TowerElem,
}

impl Sides {
    fn diff_valuation(&self) -> u64 {
        let e = self.lhs.tower().e() as i64;
        (self.lhs.ord_diff(&self.rhs).max(0) / e) as u64
    }
}

fn series(tower: &Arc<Tower>, f: &RatFunc, prec: i64) -> Result<TowerElem> {
    TowerElem::from_poly(tower, f.num(), prec).div(&TowerElem::from_poly(tower, f.den(), prec))
}

fn unit_at_v(f: &RatFunc, v: &Poly) -> bool {
    !f.num().rem(v).expect("v ≠ 0").is_zero()
}

fn ari_sides(ctx: &CarlitzContext, y: &BigRational) -> Result<Sides> {
    let g = gauss_ari(ctx);
    let lhs = big_g_ari(ctx, &g, y)?;
    let tower = ctx.ari_tower();
    let n_gamma = ctx.precision() + 2;
    let gprec = n_gamma as i64 * ctx.e() as i64;
    let mut rhs = varpi_v(ctx).pow(varpi_exponent(ctx, y)? as u128);
    for j in 0..ctx.ell() {
        let gam = ctx.gamma().ari_rat(&rotate_y(ctx, y, j)?, n_gamma)?;
        rhs = rhs.mul(&TowerElem::from_poly(tower, &gam.poly(), gprec));
    }
    Ok(Sides { lhs, rhs })
}

/// Shared pieces of the geometric identities for one x.
struct GeoData {
    gx: TowerElem,
    conj: Vec<TowerElem>,
    flats: TowerElem,
    deltas: Vec<Option<(TowerElem, usize)>>,
    rotations: Vec<RatFunc>,
}

fn geo_data(ctx: &CarlitzContext, x: &RatFunc) -> Result<GeoData> {
    let g = gauss_geo(ctx, x)?;
    let gx = big_g_geo_default(ctx, &g);
    let tower = ctx.geo_tower();
    let prec = ctx.geo_precision();
    let xs = x_digits(ctx, x)?;
    let mut flats = TowerElem::one(tower, prec);
    let mut deltas = Vec::with_capacity(ctx.ell());
    let mut rotations = Vec::with_capacity(ctx.ell());
    for (j, xj) in xs.iter().enumerate() {
        let r = rotate_x(ctx, x, j)?;
        if unit_at_v(&r, ctx.v()) {
            flats = flats.mul(&series(tower, &r, prec)?);
        }
        rotations.push(r);
        deltas.push(if xj.is_monic() && !xj.is_zero() {
            let idx = ctx.d() * j + xj.degree().unwrap_or(0);
            Some((series(tower, &delta_factor(ctx, x, j)?, prec)?, idx))
        } else {
            None
        });
    }
    Ok(GeoData { gx, conj: g.conjugates, flats, deltas, rotations })
}

fn geo_sides(ctx: &CarlitzContext, x: &RatFunc) -> Result<Sides> {
    let data = geo_data(ctx, x)?;
    let tower = ctx.geo_tower();
    let n_gamma = ctx.precision() + 2;
    // G(x)·∏⟨v^j x⟩^♭·∏Γ^geo(⟨v^j x⟩) = ∏δ_j
    let mut lhs = data.gx.mul(&data.flats);
    for r in &data.rotations {
        let gam = ctx.gamma().geo_frac(r, n_gamma)?;
        lhs = lhs.mul(&TowerElem::from_poly(tower, &gam.poly(), n_gamma as i64));
    }
    let rhs = data.deltas.iter().flatten().fold(TowerElem::one(tower, ctx.geo_precision()), |acc, (d, _)| acc.mul(d));
    Ok(Sides { lhs, rhs })
}

fn two_sides(ctx: &CarlitzContext, x: &RatFunc, y: &BigRational) -> Result<Sides> {
    let data = geo_data(ctx, x)?;
    let ys = y_digits(ctx, y)?;
    let tower = ctx.geo_tower();
    let prec = ctx.geo_precision();
    let n_gamma = ctx.precision() + 2;
    let q = ctx.q();
    // G(x,y)·∏δ_j^{q−1−y_{dj+deg x_j}} = ∏⟨v^j x⟩^♭·G(x)^{q−1}·∏Γ^two(⟨v^j x⟩, ⟨q^{dj} y⟩)
    let mut lhs = TowerElem::one(tower, prec);
    for (c, &y) in data.conj.iter().zip(&ys) {
        lhs = lhs.mul(&c.pow(y as u128));
    }
    for (delta, idx) in data.deltas.iter().flatten() {
        lhs = lhs.mul(&delta.pow((q - 1 - ys[*idx]) as u128));
    }
    let mut rhs = data.flats.mul(&data.gx.pow((q - 1) as u128));
    for (j, r) in data.rotations.iter().enumerate() {
        let gam = ctx.gamma().two_frac(r, &rotate_y(ctx, y, j)?, n_gamma)?;
        rhs = rhs.mul(&TowerElem::from_poly(tower, &gam.poly(), n_gamma as i64));
    }
    Ok(Sides { lhs, rhs })
}

fn run(
    ctx: &CarlitzContext,
    case: &str,
    x: Option<&RatFunc>,
    y: Option<&BigRational>,
    sides: impl Fn(&CarlitzContext) -> Result<Sides>,
) -> Result<Report> {
    let n = ctx.precision();
    let mut s = sides(ctx)?;
    let mut diff = s.diff_valuation();
    // near-misses are recomputed at twice the precision before judging
    if diff + 2 >= n as u64 && diff < n as u64 {
        s = sides(&*ctx.refined()?)?;
        diff = s.diff_valuation();
    }
    Ok(Report {
        case: case.into(),
        q: ctx.q(),
        v: ctx.v().to_human(),
        d: ctx.d(),
        ell: ctx.ell(),
        x: x.map(|x| x.to_string()),
        y: y.map(|y| y.to_string()),
        n,
        lhs: s.lhs.to_text(),
        rhs: s.rhs.to_text(),
        diff_valuation: diff,
        pass: diff >= n as u64,
    })
}

/// G^ari(y) against ϖ^{(q^d−1)Σ⟨q^{dj}y⟩}·∏Γ^ari(⟨q^{dj}y⟩).
pub fn verify_gkt_ari(ctx: &CarlitzContext, y: &BigRational) -> Result<Report> {
    run(ctx, "ari", None, Some(y), |c| ari_sides(c, y))
}

/// G^geo(x) against ∏δ_{x,j}/⟨v^j x⟩^♭·∏Γ^geo(⟨v^j x⟩)^{−1}.
pub fn verify_gkt_geo(ctx: &CarlitzContext, x: &RatFunc) -> Result<Report> {
    run(ctx, "geo", Some(x), None, |c| geo_sides(c, x))
}

/// The two-variable identity, cross-multiplied by the δ powers.
pub fn verify_gkt_two(ctx: &CarlitzContext, x: &RatFunc, y: &BigRational) -> Result<Report> {
    run(ctx, "two", Some(x), Some(y), |c| two_sides(c, x, y))
}

pub fn sweep_ari(ctx: &CarlitzContext, exec: Exec) -> Result<Vec<Report>> {
    par::try_map(exec, &admissible_y(ctx), |y| verify_gkt_ari(ctx, y))
}

pub fn sweep_geo(ctx: &CarlitzContext, exec: Exec) -> Result<Vec<Report>> {
    par::try_map(exec, &admissible_x(ctx), |x| verify_gkt_geo(ctx, x))
}

pub fn sweep_two(ctx: &CarlitzContext, exec: Exec) -> Result<Vec<Report>> {
    let ys = admissible_y(ctx);
    let grid: Vec<(RatFunc, BigRational)> =
        admissible_x(ctx).into_iter().flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone()))).collect();
    par::try_map(exec, &grid, |(x, y)| verify_gkt_two(ctx, x, y))
}
