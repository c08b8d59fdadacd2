use std::sync::{Arc, Mutex};

use super::action::{carlitz_action, carlitz_coeffs, FieldAlgebra, ThetaAlgebra, TowerAlgebra};
use crate::algebra::{first_irreducible, is_irreducible, ExtField, ExtFieldElem, Poly};
use crate::error::{Error, Result};
use crate::gamma::VGamma;
use crate::local::{derivative, eval_poly, newton, Tower, TowerElem};

/// Extra working precision, in v-units, carried by both towers.
pub const GUARD: usize = 6;

/// Data for one (q, v, ℓ): the ramified tower holding Λ_v, the unramified tower with residue
/// field F_𝔓, and the torsion values used by the Gauss sums.
pub struct CarlitzContext {
    q: u32,
    v: Poly,
    d: usize,
    ell: usize,
    n: usize,
    residue: ExtField,
    ari: Arc<Tower>,
    ari_prec: i64,
    psi: Vec<TowerElem>,
    geo_field: ExtField,
    geo_zeta: u32,
    geo: Arc<Tower>,
    geo_prec: i64,
    n1: Poly,
    omega: Vec<TowerElem>,
    gamma: Arc<VGamma>,
    refined: Mutex<Option<Arc<CarlitzContext>>>,
}

impl std::fmt::Debug for CarlitzContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CarlitzContext(q={}, v={}, ell={}, N={})", self.q, self.v.to_human(), self.ell, self.n)
    }
}

impl CarlitzContext {
    pub fn new(v: &Poly, ell: usize, n: usize) -> Result<Arc<CarlitzContext>> {
        let gamma = Arc::new(VGamma::new(v.clone())?);
        CarlitzContext::build(v, ell, n, gamma)
    }

    fn build(v: &Poly, ell: usize, n: usize, gamma: Arc<VGamma>) -> Result<Arc<CarlitzContext>> {
        let q = v.p();
        if !v.is_monic() || !is_irreducible(v)? {
            return Err(Error::Domain(format!("v = {} must be monic irreducible", v.to_human())));
        }
        if ell == 0 || n == 0 {
            return Err(Error::Domain("ℓ and N must be positive".into()));
        }
        let d = v.degree().unwrap_or(0);
        let e = (q as u64).pow(d as u32) - 1;

        let residue = ExtField::new(v.clone())?;
        let zeta = residue.from_poly(&Poly::theta(q));
        let ari_prec = ((n + GUARD) as u64 * e) as i64;
        let ari = Tower::ramified(residue.clone(), v.clone(), zeta, e, ari_prec)?;
        let psi1 = psi_one(&ari, v, ari_prec)?;
        let alg = TowerAlgebra { tower: ari.clone(), prec: ari_prec };
        let psi: Vec<TowerElem> =
            residue.elements().map(|z| carlitz_action(&alg, &residue.to_poly(z), &psi1)).collect();

        let geo_field = ExtField::new(first_irreducible(q, d * ell))?;
        let geo_zeta = *geo_field.roots(v).first().ok_or(Error::Domain("v has no root in F_𝔓".into()))?;
        let geo_prec = (n + GUARD) as i64;
        let geo = Tower::unramified(geo_field.clone(), v.clone(), geo_zeta, geo_prec)?;
        let n1 = v.pow(ell as u32).sub(&Poly::one(q));
        let omega = omega_table(&geo, &n1, geo_prec)?;

        Ok(Arc::new(CarlitzContext {
            q,
            v: v.clone(),
            d,
            ell,
            n,
            residue,
            ari,
            ari_prec,
            psi,
            geo_field,
            geo_zeta,
            geo,
            geo_prec,
            n1,
            omega,
            gamma,
            refined: Mutex::new(None),
        }))
    }

    /// The same parameters at precision 2N, built once on demand.
    pub fn refined(&self) -> Result<Arc<CarlitzContext>> {
        let mut slot = self.refined.lock().expect("refined lock");
        if let Some(c) = slot.as_ref() {
            return Ok(c.clone());
        }
        let c = CarlitzContext::build(&self.v, self.ell, 2 * self.n, self.gamma.clone())?;
        *slot = Some(c.clone());
        Ok(c)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Target precision N in powers of v.
    pub fn precision(&self) -> usize {
        self.n
    }

    /// q^d − 1, the ramification index of the arithmetic tower.
    pub fn e(&self) -> u64 {
        self.ari.e()
    }

    /// 𝔫 − 1 = v^ℓ − 1.
    pub fn n_minus_one(&self) -> &Poly {
        &self.n1
    }

    /// A/v, identified with the residue field of the ramified tower.
    pub fn residue_field(&self) -> &ExtField {
        &self.residue
    }

    pub fn ari_tower(&self) -> &Arc<Tower> {
        &self.ari
    }

    pub fn ari_precision(&self) -> i64 {
        self.ari_prec
    }

    /// F_𝔓 = F_{q^{dℓ}}.
    pub fn geo_field(&self) -> &ExtField {
        &self.geo_field
    }

    /// The root of v in F_𝔓 giving θ's image.
    pub fn geo_zeta(&self) -> u32 {
        self.geo_zeta
    }

    pub fn geo_tower(&self) -> &Arc<Tower> {
        &self.geo
    }

    pub fn geo_precision(&self) -> i64 {
        self.geo_prec
    }

    pub fn gamma(&self) -> &VGamma {
        &self.gamma
    }

    /// ψ(z) for z ∈ A/v given by its residue-field code.
    pub fn psi(&self, z: u32) -> &TowerElem {
        &self.psi[z as usize]
    }

    /// ω(z) for z ∈ F_𝔓 given by its code.
    pub fn omega(&self, z: u32) -> &TowerElem {
        &self.omega[z as usize]
    }

    /// C_a on F_𝔓 with θ ↦ ζ′.
    pub fn act_residue(&self, a: &Poly, z: u32) -> u32 {
        carlitz_action(&FieldAlgebra { field: self.geo_field.clone(), zeta: self.geo_zeta }, a, &z)
    }

    /// C_a on the arithmetic tower.
    pub fn act_ari(&self, a: &Poly, x: &TowerElem) -> TowerElem {
        carlitz_action(&TowerAlgebra { tower: self.ari.clone(), prec: self.ari_prec }, a, x)
    }

    /// C_a on the geometric tower.
    pub fn act_geo(&self, a: &Poly, x: &TowerElem) -> TowerElem {
        carlitz_action(&TowerAlgebra { tower: self.geo.clone(), prec: self.geo_prec }, a, x)
    }
}

/// Root of C_v(X)/X in the ramified tower, Hensel-lifted from −ϖ.
fn psi_one(tower: &Arc<Tower>, v: &Poly, prec: i64) -> Result<TowerElem> {
    let alg = TowerAlgebra { tower: tower.clone(), prec };
    let q = v.p() as usize;
    let cs = carlitz_coeffs(v);
    let deg = q.pow(cs.len() as u32 - 1) - 1;
    let mut f = vec![alg.zero(); deg + 1];
    for (k, c) in cs.iter().enumerate() {
        f[q.pow(k as u32) - 1] = alg.embed(c);
    }
    let df = derivative(&f);
    let val_f = |x: &TowerElem| eval_poly(&f, x).valuation();
    let good = |x: &TowerElem| val_f(x) > 2 * eval_poly(&df, x).valuation();

    // a root of an Eisenstein polynomial of degree e is found once enough ϖ-digits are fixed
    let field = tower.field();
    let mut x = TowerElem::uniformizer(tower, prec).neg();
    let mut k = 2;
    while !good(&x) {
        if k as u64 > 2 * tower.e() + 4 {
            return Err(Error::NonConvergence("ψ(1) seed refinement".into()));
        }
        let mut best: Option<(i64, TowerElem)> = None;
        for c in field.elements() {
            let cand = x.add(&TowerElem::constant(tower, c, prec).shift(k));
            let vc = val_f(&cand);
            if best.as_ref().is_none_or(|(b, _)| vc > *b) {
                best = Some((vc, cand));
            }
        }
        x = best.expect("nonempty field").1;
        k += 1;
    }
    let target = prec - 2 * eval_poly(&df, &x).valuation();
    newton(|y| eval_poly(&f, y), |y| eval_poly(&df, y), &x, target)
}

/// ω(z) for every z ∈ F_𝔓: the (𝔫−1)-torsion point reducing to z.
fn omega_table(tower: &Arc<Tower>, n1: &Poly, prec: i64) -> Result<Vec<TowerElem>> {
    let alg = TowerAlgebra { tower: tower.clone(), prec };
    let dn = alg.embed(n1);
    tower
        .field()
        .elements()
        .map(|z| {
            let x0 = TowerElem::constant(tower, z, prec);
            newton(|x| carlitz_action(&alg, n1, x), |_| dn.clone(), &x0, prec)
        })
        .collect()
}

/// Λ_v through ψ on A/v, and the A-module C(F_𝔓) through the action of θ.
#[derive(Debug, Clone)]
pub struct TorsionTable {
    /// (z, ψ(z)) for z ∈ A/v.
    pub psi: Vec<(Poly, TowerElem)>,
    /// C_θ(z) for each code z of F_𝔓.
    pub theta_action: Vec<u32>,
}

pub fn torsion_module_structure(ctx: &CarlitzContext) -> TorsionTable {
    let psi = ctx.residue.elements().map(|z| (ctx.residue.to_poly(z), ctx.psi(z).clone())).collect();
    let theta = Poly::theta(ctx.q);
    let theta_action = ctx.geo_field.elements().map(|z| ctx.act_residue(&theta, z)).collect();
    TorsionTable { psi, theta_action }
}

/// ϖ_v: the uniformizer of the ramified tower, ϖ^{q^d−1} = −v.
pub fn varpi_v(ctx: &CarlitzContext) -> TowerElem {
    TowerElem::uniformizer(&ctx.ari, ctx.ari_prec)
}

/// χ: A/v → F_{q^d}; the residue field of the ramified tower is A/v itself.
pub fn chi_teich(ctx: &CarlitzContext, z: &Poly) -> ExtFieldElem {
    ExtFieldElem::from_poly(&ctx.residue, &z.rem(&ctx.v).expect("v ≠ 0"))
}
