//! Step-function models of F, G, H, Γ on a product of completions, the shift orbits of
//! periodic points, and the G_n limit construction.

mod field;
mod orbit;
mod pipeline;
mod recover;
mod stepfn;

pub use field::{KVal, KValText, Unit, ValuedField, DEFAULT_K_PRECISION};
pub use orbit::{check_product_identity, cocycle_scan, point_label, CocycleScan, OrbitKind, OrbitTable, ProductReport};
pub use pipeline::{
    forward_functions, forward_run, minus_residual, recover_run, rng_for, ForwardRun, RecoverRun, RANDOM_VALS,
};
pub use recover::{
    a_n_b_n, alpha_block, alpha_n, beta_block, beta_n, check_cocycle, fabg_holds, fabg_sides, g_n, g_n_level,
    g_n_table, recover_g, recover_g_minus, residual, ProofParams, Recovery, RecoveryReport, TraceRow, SCAN_CAP,
};
pub use stepfn::{build_h, class_sizes, coboundary, digits_of_residue, residue_of, StepFn, TABLE_CAP};
