//! Carlitz module, torsion, Gauss sums, and the Gross–Koblitz–Thakur identity checks.

mod action;
mod context;
mod gauss;
mod verify;

pub use action::{carlitz_action, carlitz_coeffs, FieldAlgebra, PolyAlgebra, ThetaAlgebra, TowerAlgebra};
pub use context::{chi_teich, torsion_module_structure, varpi_v, CarlitzContext, TorsionTable, GUARD};
pub use gauss::{
    admissible_x, admissible_y, big_g_ari, big_g_geo, big_g_geo_default, delta_factor, gauss_ari, gauss_ari_conjugate,
    gauss_geo, gauss_geo_conjugate, rotate_x, rotate_y, varpi_exponent, x_digits, x_numerator, y_denominator, y_digits,
    y_numerator, GaussCase, GaussSum,
};
pub use verify::{sweep_ari, sweep_geo, sweep_two, verify_gkt_ari, verify_gkt_geo, verify_gkt_two, Report};
