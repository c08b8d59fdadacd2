use std::collections::HashMap;
use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::algebra::{is_irreducible, is_prime, parse_poly, Poly};
use crate::error::{Error, Result};

use super::frac::FracElem;

/// An element of Z or of A, used for digits and truncated values.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Integral {
    Int(BigInt),
    Poly(Poly),
}

impl Integral {
    pub fn add(&self, o: &Integral) -> Integral {
        match (self, o) {
            (Integral::Int(a), Integral::Int(b)) => Integral::Int(a + b),
            (Integral::Poly(a), Integral::Poly(b)) => Integral::Poly(a.add(b)),
            _ => panic!("mixed integral kinds"),
        }
    }

    pub fn sub(&self, o: &Integral) -> Integral {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Integral {
        match self {
            Integral::Int(a) => Integral::Int(-a),
            Integral::Poly(a) => Integral::Poly(a.neg()),
        }
    }

    pub fn mul(&self, o: &Integral) -> Integral {
        match (self, o) {
            (Integral::Int(a), Integral::Int(b)) => Integral::Int(a * b),
            (Integral::Poly(a), Integral::Poly(b)) => Integral::Poly(a.mul(b)),
            _ => panic!("mixed integral kinds"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Integral::Int(a) => a.is_zero(),
            Integral::Poly(a) => a.is_zero(),
        }
    }

    pub fn to_frac(&self) -> FracElem {
        match self {
            Integral::Int(a) => FracElem::Rat(BigRational::from_integer(a.clone())),
            Integral::Poly(a) => FracElem::Fun(crate::algebra::RatFunc::from_poly(a.clone())),
        }
    }

    /// Digit text: integers in decimal, polynomials as `[c0,c1,...]`.
    pub fn to_text(&self) -> String {
        match self {
            Integral::Int(a) => a.to_string(),
            Integral::Poly(a) => format!("[{a}]"),
        }
    }
}

impl fmt::Display for Integral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integral::Int(a) => write!(f, "{a}"),
            Integral::Poly(a) => write!(f, "{}", a.to_human()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Place {
    Z { p: u32 },
    A { p: u32, v: Poly },
}

impl Place {
    pub fn p(&self) -> u32 {
        match self {
            Place::Z { p } | Place::A { p, .. } => *p,
        }
    }

    pub fn is_poly(&self) -> bool {
        matches!(self, Place::A { .. })
    }
}

/// One completion Ō_t with uniformizer power π = p^e or v^e and a digit set.
#[derive(Clone)]
pub struct Component {
    place: Place,
    e: u32,
    pi: Integral,
    radix: u64,
    digits: Vec<Integral>,
    lookup: HashMap<u64, u32>,
    canonical: bool,
}

impl PartialEq for Component {
    fn eq(&self, o: &Component) -> bool {
        self.place == o.place && self.e == o.e && self.digits == o.digits
    }
}
impl Eq for Component {}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl Component {
    pub fn zp(p: u32, e: u32) -> Result<Component> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Domain("exponent e must be ≥ 1".into()));
        }
        let radix = (p as u64)
            .checked_pow(e)
            .filter(|&r| r < 1 << 31)
            .ok_or_else(|| Error::Unsupported(format!("π = {p}^{e} too large")))?;
        let digits = (0..radix).map(|i| Integral::Int(BigInt::from(i))).collect();
        Ok(Component {
            place: Place::Z { p },
            e,
            pi: Integral::Int(BigInt::from(radix)),
            radix,
            digits,
            lookup: HashMap::new(),
            canonical: true,
        })
    }

    pub fn av(v: Poly, e: u32) -> Result<Component> {
        let p = v.p();
        if !is_prime(p) {
            return Err(Error::Unsupported(format!("base field of size {p} (prime q only)")));
        }
        if !v.is_monic() || !is_irreducible(&v)? {
            return Err(Error::Domain(format!("{} is not monic irreducible", v.to_human())));
        }
        if e == 0 {
            return Err(Error::Domain("exponent e must be ≥ 1".into()));
        }
        let d = v.degree().unwrap_or(0) as u32 * e;
        let radix = (p as u64)
            .checked_pow(d)
            .filter(|&r| r < 1 << 31)
            .ok_or_else(|| Error::Unsupported("π too large".into()))?;
        let digits = (0..radix).map(|i| Integral::Poly(Poly::from_index(p, i, d as usize))).collect();
        Ok(Component {
            pi: Integral::Poly(v.pow(e)),
            place: Place::A { p, v },
            e,
            radix,
            digits,
            lookup: HashMap::new(),
            canonical: true,
        })
    }

    /// Replaces the canonical digits by a complete, duplicate-free set of representatives.
    pub fn with_digits(&self, digits: Vec<Integral>) -> Result<Component> {
        if digits.len() as u64 != self.radix {
            return Err(Error::InvalidDigitSet(format!(
                "{} digits given, {} residue classes",
                digits.len(),
                self.radix
            )));
        }
        let mut lookup = HashMap::new();
        for (i, d) in digits.iter().enumerate() {
            let ok =
                matches!((&self.place, d), (Place::Z { .. }, Integral::Int(_)) | (Place::A { .. }, Integral::Poly(_)));
            if !ok {
                return Err(Error::InvalidDigitSet("digit of the wrong kind".into()));
            }
            let key = self.canonical_key(d);
            if lookup.insert(key, i as u32).is_some() {
                return Err(Error::InvalidDigitSet(format!("two digits in residue class of {d}")));
            }
        }
        let canonical =
            digits.iter().enumerate().all(|(i, d)| self.canonical_key(d) == i as u64 && *d == self.digits[i]);
        Ok(Component { digits, lookup, canonical, ..self.clone() })
    }

    /// Default generalized set: Z gets balanced residues, A shifts each nonzero residue by π.
    pub fn shifted_digits(&self) -> Result<Component> {
        let ds = match &self.place {
            Place::Z { .. } => (0..self.radix)
                .map(|r| {
                    let r = BigInt::from(r);
                    let half = BigInt::from(self.radix / 2);
                    Integral::Int(if r > half { r - BigInt::from(self.radix) } else { r })
                })
                .collect(),
            Place::A { .. } => {
                self.digits.iter().map(|d| if d.is_zero() { d.clone() } else { d.add(&self.pi) }).collect()
            }
        };
        self.with_digits(ds)
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn p(&self) -> u32 {
        self.place.p()
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn pi(&self) -> &Integral {
        &self.pi
    }

    /// |π|: the number of residue classes mod π.
    pub fn radix(&self) -> u64 {
        self.radix
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn digit(&self, idx: u32) -> &Integral {
        &self.digits[idx as usize]
    }

    pub fn digits(&self) -> &[Integral] {
        &self.digits
    }

    fn canonical_key(&self, x: &Integral) -> u64 {
        match (x, &self.pi) {
            (Integral::Int(a), Integral::Int(m)) => a.mod_floor(m).to_u64().expect("fits"),
            (Integral::Poly(a), Integral::Poly(m)) => a.rem(m).expect("nonzero").to_index(),
            _ => panic!("mixed integral kinds"),
        }
    }

    /// Index of the digit congruent to x mod π.
    pub fn digit_index(&self, x: &Integral) -> u32 {
        let k = self.canonical_key(x);
        if self.canonical {
            k as u32
        } else {
            self.lookup[&k]
        }
    }

    pub fn zero_digit(&self) -> u32 {
        self.digit_index(&self.zero())
    }

    pub fn zero(&self) -> Integral {
        match &self.place {
            Place::Z { .. } => Integral::Int(BigInt::zero()),
            Place::A { p, .. } => Integral::Poly(Poly::zero(*p)),
        }
    }

    pub fn one(&self) -> Integral {
        match &self.place {
            Place::Z { .. } => Integral::Int(BigInt::one()),
            Place::A { p, .. } => Integral::Poly(Poly::one(*p)),
        }
    }

    pub fn pi_pow(&self, n: usize) -> Integral {
        match &self.pi {
            Integral::Int(a) => Integral::Int(num::pow(a.clone(), n)),
            Integral::Poly(a) => Integral::Poly(a.pow(n as u32)),
        }
    }

    /// Canonical representative of x mod π^n.
    pub fn reduce(&self, x: &Integral, n: usize) -> Integral {
        match (x, self.pi_pow(n)) {
            (Integral::Int(a), Integral::Int(m)) => Integral::Int(a.mod_floor(&m)),
            (Integral::Poly(a), Integral::Poly(m)) => Integral::Poly(a.rem(&m).expect("nonzero")),
            _ => panic!("mixed integral kinds"),
        }
    }

    /// First n digits of an integral element.
    pub fn expand(&self, x: &Integral, n: usize) -> Vec<u32> {
        let mut x = self.reduce(x, n);
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let d = self.digit_index(&x);
            out.push(d);
            x = match (x.sub(&self.digits[d as usize]), &self.pi) {
                (Integral::Int(a), Integral::Int(m)) => Integral::Int(a / m),
                (Integral::Poly(a), Integral::Poly(m)) => Integral::Poly(a.divmod(m).expect("nonzero").0),
                _ => unreachable!(),
            };
        }
        out
    }

    /// Σ d_i π^i.
    pub fn value(&self, digits: &[u32]) -> Integral {
        let mut acc = self.zero();
        for &d in digits.iter().rev() {
            acc = acc.mul(&self.pi).add(&self.digits[d as usize]);
        }
        acc
    }

    /// Representative of x mod π^n; errors when the denominator is not a unit.
    pub fn integral_of(&self, x: &FracElem, n: usize) -> Result<Integral> {
        match (x, &self.place) {
            (FracElem::Rat(r), Place::Z { p }) => {
                let pb = BigInt::from(*p);
                if r.denom().mod_floor(&pb).is_zero() {
                    return Err(Error::NotIntegral);
                }
                let Integral::Int(m) = self.pi_pow(n) else { unreachable!() };
                let den = r.denom().mod_floor(&m);
                let inv = mod_inverse(&den, &m).ok_or(Error::NotIntegral)?;
                Ok(Integral::Int((r.numer() * inv).mod_floor(&m)))
            }
            (FracElem::Fun(f), Place::A { v, .. }) => {
                if f.den().rem(v)?.is_zero() {
                    return Err(Error::NotIntegral);
                }
                let Integral::Poly(m) = self.pi_pow(n) else { unreachable!() };
                let inv = f.den().inv_mod(&m).map_err(|_| Error::NotIntegral)?;
                Ok(Integral::Poly(f.num().mul_mod(&inv, &m)))
            }
            _ => Err(Error::Domain("fraction kind does not match the component".into())),
        }
    }

    pub fn digits_of(&self, x: &FracElem, n: usize) -> Result<Vec<u32>> {
        Ok(self.expand(&self.integral_of(x, n)?, n))
    }

    /// Negation in value space, re-expanded at the same length.
    pub fn neg_digits(&self, digits: &[u32]) -> Vec<u32> {
        self.expand(&self.value(digits).neg(), digits.len())
    }

    pub fn id(&self) -> String {
        let mut s = match &self.place {
            Place::Z { p } => format!("Zp:{p}"),
            Place::A { p, v } => format!("Av:{p}:{}", v.to_human()),
        };
        if self.e != 1 {
            s.push_str(&format!(":{}", self.e));
        }
        if !self.canonical {
            let ds: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            s.push_str(&format!("{{{}}}", ds.join(",")));
        }
        s
    }

    /// Parses `Zp:<p>[:e]` or `Av:<q>:<v>[:e]`, optionally followed by `{d0,d1,...}`.
    pub fn parse(s: &str) -> Result<Component> {
        let s = s.trim();
        let (head, custom) = match s.find('{') {
            Some(i) => {
                let body = s[i + 1..]
                    .strip_suffix('}')
                    .ok_or_else(|| Error::Parse(format!("unterminated digit set in {s:?}")))?;
                (&s[..i], Some(body))
            }
            None => (s, None),
        };
        let parts: Vec<&str> = head.split(':').collect();
        let bad = || Error::Parse(format!("bad component descriptor {s:?}"));
        let comp = match parts.as_slice() {
            ["Zp", p] => Component::zp(p.parse().map_err(|_| bad())?, 1)?,
            ["Zp", p, e] => Component::zp(p.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?)?,
            ["Av", q, v] => {
                let q: u32 = q.parse().map_err(|_| bad())?;
                Component::av(parse_poly(q, v)?, 1)?
            }
            ["Av", q, v, e] => {
                let q: u32 = q.parse().map_err(|_| bad())?;
                Component::av(parse_poly(q, v)?, e.parse().map_err(|_| bad())?)?
            }
            _ => return Err(bad()),
        };
        match custom {
            None => Ok(comp),
            Some(body) => {
                let ds = body.split(',').map(|t| comp.parse_digit(t)).collect::<Result<Vec<_>>>()?;
                comp.with_digits(ds)
            }
        }
    }

    pub fn parse_digit(&self, t: &str) -> Result<Integral> {
        let t = t.trim();
        match &self.place {
            Place::Z { .. } => {
                t.parse::<BigInt>().map(Integral::Int).map_err(|_| Error::Parse(format!("bad digit {t:?}")))
            }
            Place::A { p, .. } => {
                let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).unwrap_or(t);
                Ok(Integral::Poly(parse_poly(*p, inner)?))
            }
        }
    }

    /// Absolute value comparison |x| < 1 used by the periodic-point condition.
    pub fn frac_in_unit_range(&self, x: &FracElem) -> bool {
        match x {
            FracElem::Rat(r) => !r.is_negative() && r < &BigRational::one(),
            FracElem::Fun(f) => f.is_zero() || f.degree().is_none_or(|d| d < 0),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}
