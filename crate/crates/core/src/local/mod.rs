//! Completions Z_p and A_v at finite precision: digit expansions, the shift φ,
//! periodic points, and towers F[[u]] over finite residue fields.

mod component;
mod elem;
mod frac;
mod periodic;
mod tower;

pub use component::{Component, Integral, Place};
pub use elem::{Domain, LocalElem, ProdElem};
pub use frac::{frac_part, FracElem};
pub use periodic::{
    component_blocks, orbit_sets, orbit_sets_equal, periodic_block, periodic_count, periodic_points, OrbitSet,
    PeriodicPoint, DEFAULT_CAP,
};
pub use tower::{
    convert_back, convert_rep, derivative, eval_poly, hensel_lift, newton, teichmuller_from, teichmuller_lift, Tower,
    TowerElem,
};

pub(crate) use elem::split_top_level;
