use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::field::ValuedField;
use super::orbit::{check_product_identity, ProductReport};
use super::recover::{check_cocycle, recover_g, recover_g_minus, residual, ProofParams, RecoveryReport};
use super::stepfn::{build_h, coboundary, StepFn};
use crate::error::{Error, Result};
use crate::local::{Domain, DEFAULT_CAP};
use crate::par::Exec;

/// Valuation range of random table entries.
pub const RANDOM_VALS: std::ops::RangeInclusive<i64> = -2..=2;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForwardRun {
    pub seed: u64,
    pub gamma_level: usize,
    pub g_level: usize,
    pub periods: Vec<ProductReport>,
    pub pass: bool,
}

/// The seeded (Γ, G, H) of a forward run.
pub fn forward_functions(
    dom: &Domain,
    k: &Arc<ValuedField>,
    seed: u64,
    gamma_level: usize,
    g_level: usize,
    exec: Exec,
) -> Result<(StepFn, StepFn, StepFn)> {
    let mut rng = rng_for(seed);
    let gamma = StepFn::random(dom, gamma_level, k.clone(), &mut rng, RANDOM_VALS)?;
    let g = StepFn::random(dom, g_level, k.clone(), &mut rng, RANDOM_VALS)?;
    let h = build_h(&gamma, &g, exec)?;
    Ok((gamma, g, h))
}

/// Random Γ and G, H = Γ·G/G(−φ(−x)), and the product identity for every n ≤ n_max.
pub fn forward_run(
    dom: &Domain,
    k: &Arc<ValuedField>,
    seed: u64,
    gamma_level: usize,
    g_level: usize,
    n_max: usize,
    exec: Exec,
) -> Result<ForwardRun> {
    let (gamma, _, h) = forward_functions(dom, k, seed, gamma_level, g_level, exec)?;
    let periods =
        (1..=n_max).map(|n| check_product_identity(&h, &gamma, n, DEFAULT_CAP, exec)).collect::<Result<Vec<_>>>()?;
    let pass = periods.iter().all(|p| p.pass && p.forms_agree);
    Ok(ForwardRun { seed, gamma_level, g_level, periods, pass })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoverRun {
    pub seed: u64,
    pub g0_level: usize,
    pub recovery: RecoveryReport,
    /// ord(G_n − G_{n+1}) non-decreasing beyond n = level(F) + 2.
    pub monotone: bool,
    /// Residual of the minus-sign variant recovered through x ↦ −x.
    pub minus_residual: i64,
    /// The minus-sign path agrees with recovering F(−x) directly.
    pub minus_paths_agree: bool,
    /// Multiplying one value of F by 𝔱 is rejected by the cocycle scan.
    pub negative_rejected: bool,
    pub pass: bool,
}

/// Seeded coboundary F = G₀/G₀∘φ, recovery of G, the minus-sign variant and a negative control.
pub fn recover_run(
    dom: &Domain,
    k: &Arc<ValuedField>,
    seed: u64,
    g0_level: usize,
    r: i64,
    params: &ProofParams,
    exec: Exec,
) -> Result<RecoverRun> {
    let mut rng = rng_for(seed);
    let g0 = StepFn::random(dom, g0_level, k.clone(), &mut rng, RANDOM_VALS)?;
    let f = coboundary(&g0, exec)?;
    let rec = recover_g(&f, params, r, exec)?;
    let monotone = rec.report.monotone_from(f.level() + 2);

    // F(x) = G₁(x)/G₁(−φ(−x)) built the same way, through the change of variables
    let g1 = StepFn::random(dom, g0_level, k.clone(), &mut rng, RANDOM_VALS)?;
    let fm = build_h(&StepFn::one(dom, k.clone()), &g1, exec)?;
    let minus = recover_g_minus(&fm, params, r, exec)?;
    let direct = recover_g(&fm.negate_arg(), params, r, exec)?;
    let minus_paths_agree = minus.g.negate_arg().at_level(direct.g.level())? == direct.g;
    let minus_residual = minus_residual(&fm, &minus.g)?;

    let idx = rng.gen_range(0..f.table().len());
    let negative_rejected = matches!(check_cocycle(&f.perturb(idx), params, exec), Err(Error::CocycleViolation { .. }));
    let pass = rec.report.pass && monotone && minus_residual >= r && minus_paths_agree && negative_rejected;
    Ok(RecoverRun {
        seed,
        g0_level,
        recovery: rec.report,
        monotone,
        minus_residual,
        minus_paths_agree,
        negative_rejected,
        pass,
    })
}

/// Residual of F(x) = G(x)/G(−φ(−x)).
pub fn minus_residual(f: &StepFn, g: &StepFn) -> Result<i64> {
    residual(&f.negate_arg(), &g.negate_arg())
}
