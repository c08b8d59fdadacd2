//! Exact arithmetic for v-adic gamma functions over A = F_q[θ], Carlitz-module Gauss sums,
//! Gross–Koblitz–Thakur identity checks, and the digit-shift uniqueness machinery.

pub mod algebra;
pub mod carlitz;
pub mod error;
pub mod gamma;
pub mod local;
pub mod par;
pub mod uniqueness;

pub use error::{Error, Result};
