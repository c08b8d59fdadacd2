use std::fmt;

use num::{BigRational, Signed, Zero};

use crate::algebra::{parse_ratfunc, parse_rational, RatFunc};
use crate::error::Result;

/// Element of Q or of F_p(θ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FracElem {
    Rat(BigRational),
    Fun(RatFunc),
}

impl FracElem {
    pub fn rat(n: i64, d: i64) -> FracElem {
        FracElem::Rat(BigRational::new(n.into(), d.into()))
    }

    pub fn parse_rat(s: &str) -> Result<FracElem> {
        Ok(FracElem::Rat(parse_rational(s)?))
    }

    pub fn parse_fun(p: u32, s: &str) -> Result<FracElem> {
        Ok(FracElem::Fun(parse_ratfunc(p, s)?))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FracElem::Rat(r) => r.is_zero(),
            FracElem::Fun(f) => f.is_zero(),
        }
    }

    pub fn neg(&self) -> FracElem {
        match self {
            FracElem::Rat(r) => FracElem::Rat(-r),
            FracElem::Fun(f) => FracElem::Fun(f.neg()),
        }
    }

    pub fn add(&self, o: &FracElem) -> FracElem {
        match (self, o) {
            (FracElem::Rat(a), FracElem::Rat(b)) => FracElem::Rat(a + b),
            (FracElem::Fun(a), FracElem::Fun(b)) => FracElem::Fun(a.add(b)),
            _ => panic!("mixed fraction kinds"),
        }
    }

    pub fn sub(&self, o: &FracElem) -> FracElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FracElem) -> FracElem {
        match (self, o) {
            (FracElem::Rat(a), FracElem::Rat(b)) => FracElem::Rat(a * b),
            (FracElem::Fun(a), FracElem::Fun(b)) => FracElem::Fun(a.mul(b)),
            _ => panic!("mixed fraction kinds"),
        }
    }

    /// ⟨x⟩: in [0, 1) for rationals (floor convention for negatives), |⟨x⟩| < 1 for F_p(θ).
    pub fn frac_part(&self) -> FracElem {
        match self {
            FracElem::Rat(r) => FracElem::Rat(r - r.floor()),
            FracElem::Fun(f) => FracElem::Fun(f.frac_part()),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, FracElem::Rat(r) if r.is_negative())
    }
}

impl fmt::Display for FracElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FracElem::Rat(r) => write!(f, "{r}"),
            FracElem::Fun(g) => write!(f, "{g}"),
        }
    }
}

impl fmt::Debug for FracElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Componentwise fractional part of a tuple.
pub fn frac_part(x: &[FracElem]) -> Vec<FracElem> {
    x.iter().map(FracElem::frac_part).collect()
}
