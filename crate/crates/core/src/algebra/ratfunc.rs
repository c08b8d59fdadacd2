use std::fmt;

use super::poly::Poly;
use crate::error::{Error, Result};

/// Reduced fraction num/den in F_p(θ) with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::PolyDivByZero);
        }
        let p = num.p();
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one(p) });
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divmod(&g)?;
        let (mut d, _) = den.divmod(&g)?;
        let lc = d.leading();
        let inv = super::poly::inv_mod_p(lc, p)?;
        n = n.scale(inv);
        d = d.scale(inv);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(f: Poly) -> RatFunc {
        let p = f.p();
        RatFunc { num: f, den: Poly::one(p) }
    }

    pub fn zero(p: u32) -> RatFunc {
        RatFunc::from_poly(Poly::zero(p))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn p(&self) -> u32 {
        self.num.p()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// deg num − deg den; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.num.degree().map(|d| d as i64 - self.den.degree().unwrap_or(0) as i64)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RatFunc::new(n, self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    /// Fractional part: the representative of x mod A with |·| < 1.
    pub fn frac_part(&self) -> RatFunc {
        let r = self.num.rem(&self.den).expect("nonzero denominator");
        RatFunc { num: r, den: self.den.clone() }
    }

    /// Integral part: x − ⟨x⟩.
    pub fn int_part(&self) -> Poly {
        self.num.divmod(&self.den).expect("nonzero denominator").0
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num.to_human())
        } else {
            let wrap = |p: &Poly| {
                let h = p.to_human();
                if h.contains('+') || h.contains('*') {
                    format!("({h})")
                } else {
                    h
                }
            };
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
