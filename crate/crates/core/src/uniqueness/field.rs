use std::fmt;

use num::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_poly, Poly};
use crate::error::{Error, Result};
use crate::local::{Component, Place};

/// Unit part of an element of K^×, reduced mod 𝔱^R.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Unit {
    Z(u64),
    A(Poly),
}

/// 𝔱^val · unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KVal {
    pub val: i64,
    pub unit: Unit,
}

#[derive(Clone, PartialEq, Eq)]
enum Modulus {
    Z { p: u64, m: u64 },
    A { v: Poly, m: Poly },
}

/// A completion K = Q_p or k_v used as a value field, with K^× modelled exactly as
/// Z × (O_K/𝔱^R)^×.
#[derive(Clone, PartialEq, Eq)]
pub struct ValuedField {
    place: Place,
    prec: usize,
    modulus: Modulus,
}

impl fmt::Debug for ValuedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// JSON form of a value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KValText {
    pub val: i64,
    pub unit: String,
}

pub const DEFAULT_K_PRECISION: usize = 20;

impl ValuedField {
    pub fn new(place: Place, prec: usize) -> Result<ValuedField> {
        if prec == 0 {
            return Err(Error::Domain("K precision must be positive".into()));
        }
        let modulus = match &place {
            Place::Z { p } => {
                let m = (*p as u64)
                    .checked_pow(prec as u32)
                    .filter(|&m| m < 1 << 62)
                    .ok_or_else(|| Error::Unsupported(format!("{p}^{prec} exceeds the word-size modulus")))?;
                Modulus::Z { p: *p as u64, m }
            }
            Place::A { v, .. } => Modulus::A { v: v.clone(), m: v.pow(prec as u32) },
        };
        Ok(ValuedField { place, prec, modulus })
    }

    /// The completion of a component's place.
    pub fn of_component(comp: &Component, prec: usize) -> Result<ValuedField> {
        ValuedField::new(comp.place().clone(), prec)
    }

    /// `Zp:<p>@R` or `Av:<q>:<v>@R`; `@R` defaults to 20.
    pub fn parse(s: &str) -> Result<ValuedField> {
        let (head, prec) = match s.split_once('@') {
            Some((h, r)) => (h, r.trim().parse().map_err(|_| Error::Parse(format!("bad K precision in {s:?}")))?),
            None => (s, DEFAULT_K_PRECISION),
        };
        let comp = Component::parse(head)?;
        if comp.e() != 1 || !comp.is_canonical() {
            return Err(Error::Parse(format!("K descriptor {s:?} takes a bare place")));
        }
        ValuedField::of_component(&comp, prec)
    }

    pub fn id(&self) -> String {
        match &self.place {
            Place::Z { p } => format!("Zp:{p}@{}", self.prec),
            Place::A { p, v } => format!("Av:{p}:{}@{}", v.to_human(), self.prec),
        }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    fn unit_one(&self) -> Unit {
        match &self.modulus {
            Modulus::Z { .. } => Unit::Z(1),
            Modulus::A { v, .. } => Unit::A(Poly::one(v.p())),
        }
    }

    pub fn one(&self) -> KVal {
        KVal { val: 0, unit: self.unit_one() }
    }

    /// The uniformizer 𝔱.
    pub fn t(&self) -> KVal {
        KVal { val: 1, unit: self.unit_one() }
    }

    fn unit_mul(&self, a: &Unit, b: &Unit) -> Unit {
        match (&self.modulus, a, b) {
            (Modulus::Z { m, .. }, Unit::Z(x), Unit::Z(y)) => Unit::Z(((*x as u128 * *y as u128) % *m as u128) as u64),
            (Modulus::A { m, .. }, Unit::A(x), Unit::A(y)) => Unit::A(x.mul_mod(y, m)),
            _ => panic!("unit kind does not match the field"),
        }
    }

    fn unit_inv(&self, a: &Unit) -> Unit {
        match (&self.modulus, a) {
            (Modulus::Z { m, .. }, Unit::Z(x)) => {
                let e = (*x as i128).extended_gcd(&(*m as i128));
                Unit::Z(e.x.mod_floor(&(*m as i128)) as u64)
            }
            (Modulus::A { m, .. }, Unit::A(x)) => Unit::A(x.inv_mod(m).expect("units are invertible")),
            _ => panic!("unit kind does not match the field"),
        }
    }

    pub fn mul(&self, a: &KVal, b: &KVal) -> KVal {
        KVal { val: a.val + b.val, unit: self.unit_mul(&a.unit, &b.unit) }
    }

    pub fn inv(&self, a: &KVal) -> KVal {
        KVal { val: -a.val, unit: self.unit_inv(&a.unit) }
    }

    pub fn div(&self, a: &KVal, b: &KVal) -> KVal {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &KVal, k: i64) -> KVal {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut r = self.one();
        for _ in 0..k.unsigned_abs() {
            r = self.mul(&r, &base);
        }
        r
    }

    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a KVal>) -> KVal {
        xs.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Builds 𝔱^val·u from an integer or polynomial u that is a unit at 𝔱.
    pub fn from_unit(&self, val: i64, u: Unit) -> Result<KVal> {
        let u = match (&self.modulus, u) {
            (Modulus::Z { p, m }, Unit::Z(x)) => {
                if x % p == 0 {
                    return Err(Error::VanishingValue(0));
                }
                Unit::Z(x % m)
            }
            (Modulus::A { v, m }, Unit::A(x)) => {
                if x.rem(v)?.is_zero() {
                    return Err(Error::VanishingValue(0));
                }
                Unit::A(x.rem(m)?)
            }
            _ => return Err(Error::Domain("unit kind does not match the field".into())),
        };
        Ok(KVal { val, unit: u })
    }

    /// ord_𝔱(a − b); `None` when a = b at the working precision.
    pub fn ord_diff(&self, a: &KVal, b: &KVal) -> Option<i64> {
        if a == b {
            return None;
        }
        if a.val != b.val {
            return Some(a.val.min(b.val));
        }
        let k = match (&self.modulus, &a.unit, &b.unit) {
            (Modulus::Z { p, m }, Unit::Z(x), Unit::Z(y)) => {
                let mut d = (*x as i128 - *y as i128).mod_floor(&(*m as i128)) as u64;
                let mut k = 0;
                while d.is_multiple_of(*p) {
                    d /= p;
                    k += 1;
                }
                k
            }
            (Modulus::A { v, .. }, Unit::A(x), Unit::A(y)) => x.sub(y).valuation(v).expect("distinct units") as i64,
            _ => panic!("unit kind does not match the field"),
        };
        Some(a.val + k)
    }

    pub fn random_unit<R: Rng>(&self, rng: &mut R) -> Unit {
        match &self.modulus {
            Modulus::Z { p, m } => loop {
                let x = rng.gen_range(1..*m);
                if x % p != 0 {
                    return Unit::Z(x);
                }
            },
            Modulus::A { v, m } => {
                let p = v.p();
                let len = m.degree().unwrap_or(0);
                loop {
                    let c: Vec<u32> = (0..len).map(|_| rng.gen_range(0..p)).collect();
                    let x = Poly::new(p, c);
                    if !x.rem(v).expect("v ≠ 0").is_zero() {
                        return Unit::A(x);
                    }
                }
            }
        }
    }

    pub fn random<R: Rng>(&self, rng: &mut R, vals: std::ops::RangeInclusive<i64>) -> KVal {
        let val = rng.gen_range(vals);
        KVal { val, unit: self.random_unit(rng) }
    }

    pub fn to_text(&self, a: &KVal) -> KValText {
        let unit = match &a.unit {
            Unit::Z(x) => x.to_string(),
            Unit::A(f) => f.to_string(),
        };
        KValText { val: a.val, unit }
    }

    pub fn from_text(&self, t: &KValText) -> Result<KVal> {
        let u = match &self.modulus {
            Modulus::Z { .. } => {
                Unit::Z(t.unit.trim().parse().map_err(|_| Error::Parse(format!("bad unit {:?}", t.unit)))?)
            }
            Modulus::A { v, .. } => Unit::A(parse_poly(v.p(), &t.unit)?),
        };
        self.from_unit(t.val, u)
    }

    pub fn display(&self, a: &KVal) -> String {
        let t = self.to_text(a);
        format!("t^{}*({})", t.val, t.unit)
    }
}
