use std::fmt;
use std::sync::Arc;

use super::poly::{is_irreducible, is_prime, Poly};
use crate::error::{Error, Result};

const TABLE_LIMIT: u32 = 1 << 16;

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    m: usize,
    modulus: Poly,
    size: u32,
    tables: Option<Tables>,
}

/// F_{p^m} = F_p[ζ]/(modulus). Elements are `u32` codes: base-p coefficient vectors.
#[derive(Clone)]
pub struct ExtField(Arc<Inner>);

impl PartialEq for ExtField {
    fn eq(&self, o: &ExtField) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.p == o.0.p && self.0.modulus == o.0.modulus)
    }
}
impl Eq for ExtField {}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[z]/({})", self.0.p, self.0.modulus.to_human())
    }
}

impl ExtField {
    pub fn new(modulus: Poly) -> Result<ExtField> {
        let p = modulus.p();
        if !is_prime(p) {
            return Err(Error::Unsupported(format!("characteristic {p} is not prime")));
        }
        if !modulus.is_monic() {
            return Err(Error::Domain("modulus must be monic".into()));
        }
        let m = modulus.degree().unwrap_or(0);
        if m == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if !is_irreducible(&modulus)? {
            return Err(Error::Reducible);
        }
        let size = (p as u64).pow(m as u32);
        if size > u32::MAX as u64 / 2 {
            return Err(Error::Unsupported(format!("field of size {size}")));
        }
        let mut inner = Inner { p, m, modulus, size: size as u32, tables: None };
        if inner.size <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(ExtField(Arc::new(inner)))
    }

    pub fn prime(p: u32) -> Result<ExtField> {
        ExtField::new(Poly::theta(p))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.m
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.0.tables.is_some()
    }

    pub fn elem(&self, code: u32) -> ExtFieldElem {
        ExtFieldElem { field: self.clone(), code: code % self.size() }
    }

    pub fn from_poly(&self, f: &Poly) -> u32 {
        let r = f.rem(&self.0.modulus).expect("nonzero modulus");
        r.to_index() as u32
    }

    pub fn to_poly(&self, a: u32) -> Poly {
        Poly::from_index(self.0.p, a as u64, self.0.m)
    }

    pub fn constant(&self, c: u32) -> u32 {
        c % self.0.p
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut r = 0u32;
        let mut w = 1u32;
        while a > 0 || b > 0 {
            let s = (a % p + b % p) % p;
            r += s * w;
            a /= p;
            b /= p;
            w = w.wrapping_mul(p);
        }
        r
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut a = a;
        let mut r = 0u32;
        let mut w = 1u32;
        while a > 0 {
            r += ((p - a % p) % p) * w;
            a /= p;
            w = w.wrapping_mul(p);
        }
        r
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => {
                let n = self.0.size - 1;
                let s = t.log[a as usize] + t.log[b as usize];
                t.exp[(if s >= n { s - n } else { s }) as usize]
            }
            None => self.from_poly(&self.to_poly(a).mul(&self.to_poly(b))),
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        match &self.0.tables {
            Some(t) => {
                let n = self.0.size - 1;
                let l = t.log[a as usize];
                Ok(t.exp[((n - l) % n) as usize])
            }
            None => Ok(self.from_poly(&self.to_poly(a).inv_mod(&self.0.modulus)?)),
        }
    }

    pub fn pow(&self, a: u32, e: u128) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => {
                let n = (self.0.size - 1) as u128;
                let l = (t.log[a as usize] as u128 * (e % n)) % n;
                t.exp[l as usize]
            }
            None => {
                let mut r = 1;
                let mut b = a;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        r = self.mul(r, b);
                    }
                    b = self.mul(b, b);
                    e >>= 1;
                }
                r
            }
        }
    }

    /// z ↦ z^{p^k}.
    pub fn frobenius(&self, a: u32, k: usize) -> u32 {
        let k = k % self.0.m;
        self.pow(a, (self.0.p as u128).pow(k as u32))
    }

    /// Evaluates a polynomial over F_p at a field element.
    pub fn eval_poly(&self, f: &Poly, z: u32) -> u32 {
        f.coeffs().iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, z), self.constant(c)))
    }

    pub fn roots(&self, f: &Poly) -> Vec<u32> {
        (0..self.size()).filter(|&z| self.eval_poly(f, z) == 0).collect()
    }

    pub fn generator(&self) -> Option<u32> {
        self.0.tables.as_ref().map(|t| t.exp[1 % t.exp.len()])
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size()
    }
}

fn build_tables(f: &Inner) -> Tables {
    let n = f.size - 1;
    let slow_mul = |a: u32, b: u32| -> u32 {
        let pa = Poly::from_index(f.p, a as u64, f.m);
        let pb = Poly::from_index(f.p, b as u64, f.m);
        pa.mul(&pb).rem(&f.modulus).expect("nonzero modulus").to_index() as u32
    };
    let factors = prime_factors(n);
    let is_gen = |g: u32| {
        factors.iter().all(|&r| {
            let mut x = 1u32;
            let mut b = g;
            let mut e = n / r;
            while e > 0 {
                if e & 1 == 1 {
                    x = slow_mul(x, b);
                }
                b = slow_mul(b, b);
                e >>= 1;
            }
            x != 1
        })
    };
    let g = (1..f.size).find(|&g| is_gen(g)).unwrap_or(1);
    let mut exp = vec![0u32; n.max(1) as usize];
    let mut log = vec![0u32; f.size as usize];
    let mut x = 1u32;
    for i in 0..n {
        exp[i as usize] = x;
        log[x as usize] = i;
        x = slow_mul(x, g);
    }
    Tables { exp, log }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Field element carrying its field; mixing fields is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtFieldElem {
    field: ExtField,
    code: u32,
}

impl fmt::Debug for ExtFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.field.to_poly(self.code))
    }
}

impl ExtFieldElem {
    pub fn from_poly(field: &ExtField, f: &Poly) -> ExtFieldElem {
        ExtFieldElem { field: field.clone(), code: field.from_poly(f) }
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn to_poly(&self) -> Poly {
        self.field.to_poly(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn check(&self, o: &ExtFieldElem) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(format!("{:?}", self.field), format!("{:?}", o.field)));
        }
        Ok(())
    }

    fn with(&self, code: u32) -> ExtFieldElem {
        ExtFieldElem { field: self.field.clone(), code }
    }

    pub fn add(&self, o: &ExtFieldElem) -> Result<ExtFieldElem> {
        self.check(o)?;
        Ok(self.with(self.field.add(self.code, o.code)))
    }

    pub fn sub(&self, o: &ExtFieldElem) -> Result<ExtFieldElem> {
        self.check(o)?;
        Ok(self.with(self.field.sub(self.code, o.code)))
    }

    pub fn mul(&self, o: &ExtFieldElem) -> Result<ExtFieldElem> {
        self.check(o)?;
        Ok(self.with(self.field.mul(self.code, o.code)))
    }

    pub fn neg(&self) -> ExtFieldElem {
        self.with(self.field.neg(self.code))
    }

    pub fn inv(&self) -> Result<ExtFieldElem> {
        Ok(self.with(self.field.inv(self.code)?))
    }

    pub fn pow(&self, e: u128) -> ExtFieldElem {
        self.with(self.field.pow(self.code, e))
    }

    /// z ↦ z^p.
    pub fn frobenius(&self) -> ExtFieldElem {
        self.with(self.field.frobenius(self.code, 1))
    }
}
