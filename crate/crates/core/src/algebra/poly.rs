use std::fmt;

use crate::error::{Error, Result};

#[inline]
pub(crate) fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn inv_mod_p(a: u32, p: u32) -> Result<u32> {
    if a.is_multiple_of(p) {
        return Err(Error::DivisionByZero);
    }
    let mut r = 1u32;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    Ok(r)
}

/// Element of A = F_p[θ], coefficients little-endian in θ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u32,
    c: Vec<u32>,
}

impl Poly {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Poly {
        let mut c: Vec<u32> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { p, c }
    }

    pub fn from_i64(p: u32, coeffs: &[i64]) -> Poly {
        let pi = p as i64;
        Poly::new(p, coeffs.iter().map(|&x| x.rem_euclid(pi) as u32).collect())
    }

    pub fn zero(p: u32) -> Poly {
        Poly { p, c: Vec::new() }
    }

    pub fn one(p: u32) -> Poly {
        Poly::constant(p, 1)
    }

    pub fn constant(p: u32, a: u32) -> Poly {
        Poly::new(p, vec![a])
    }

    pub fn theta(p: u32) -> Poly {
        Poly::new(p, vec![0, 1])
    }

    pub fn monomial(p: u32, k: usize, a: u32) -> Poly {
        let mut c = vec![0; k + 1];
        c[k] = a;
        Poly::new(p, c)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn leading(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// |f| = q^{deg f}, as the exponent; zero gives `None`.
    pub fn abs_exponent(&self) -> Option<usize> {
        self.degree()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        debug_assert_eq!(self.p, o.p);
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let s = self.coeff(i) + o.coeff(i);
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            })
            .collect();
        Poly::new(self.p, c)
    }

    pub fn neg(&self) -> Poly {
        let p = self.p;
        Poly::new(p, self.c.iter().map(|&x| (p - x) % p).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: u32) -> Poly {
        let p = self.p;
        Poly::new(p, self.c.iter().map(|&x| mulmod(x, a, p)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        debug_assert_eq!(self.p, o.p);
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p as u64;
        let mut acc = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
            }
            if i % 64 == 63 {
                acc.iter_mut().for_each(|x| *x %= p);
            }
        }
        Poly::new(self.p, acc.into_iter().map(|x| (x % p) as u32).collect())
    }

    /// Product truncated to degree < `n`.
    pub fn mul_trunc(&self, o: &Poly, n: usize) -> Poly {
        if self.is_zero() || o.is_zero() || n == 0 {
            return Poly::zero(self.p);
        }
        let p = self.p as u64;
        let len = (self.c.len() + o.c.len() - 1).min(n);
        let mut acc = vec![0u64; len];
        for (i, &a) in self.c.iter().enumerate().take(len) {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate().take(len - i) {
                acc[i + j] += a as u64 * b as u64;
            }
            if i % 64 == 63 {
                acc.iter_mut().for_each(|x| *x %= p);
            }
        }
        Poly::new(self.p, acc.into_iter().map(|x| (x % p) as u32).collect())
    }

    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Poly { p: self.p, c }
    }

    pub fn truncate(&self, n: usize) -> Poly {
        Poly::new(self.p, self.c.iter().take(n).copied().collect())
    }

    pub fn divmod(&self, g: &Poly) -> Result<(Poly, Poly)> {
        if g.is_zero() {
            return Err(Error::PolyDivByZero);
        }
        let p = self.p;
        let dg = g.c.len() - 1;
        if self.c.len() <= dg {
            return Ok((Poly::zero(p), self.clone()));
        }
        let inv = inv_mod_p(g.leading(), p)?;
        let mut r = self.c.clone();
        let mut q = vec![0u32; r.len() - dg];
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + dg], inv, p);
            if c == 0 {
                continue;
            }
            q[k] = c;
            for (i, &gi) in g.c.iter().enumerate() {
                let t = mulmod(c, gi, p);
                r[k + i] = (r[k + i] + p - t) % p;
            }
        }
        r.truncate(dg);
        Ok((Poly::new(p, q), Poly::new(p, r)))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        Ok(self.divmod(g)?.1)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod_p(self.leading(), self.p).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s·self + t·o = g, g monic.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(p), Poly::zero(p));
        let (mut t0, mut t1) = (Poly::zero(p), Poly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod_p(r0.leading(), p).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo `m`; errors when not coprime.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        let (g, s, _) = self.ext_gcd(m);
        if !g.is_one() {
            return Err(Error::DivisionByZero);
        }
        s.rem(m)
    }

    pub fn mul_mod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut r = Poly::one(self.p).rem(m).expect("nonzero modulus");
        let mut b = self.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_mod(&b, m);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_mod(&b, m);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(self.p);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// v-adic valuation ord_v(self); `None` for zero.
    pub fn valuation(&self, v: &Poly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut f = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = f.divmod(v).expect("nonzero divisor");
            if !r.is_zero() {
                return Some(k);
            }
            f = q;
            k += 1;
        }
    }

    pub fn derivative(&self) -> Poly {
        let p = self.p;
        Poly::new(
            p,
            self.c.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, (i as u64 % p as u64) as u32, p)).collect(),
        )
    }

    /// Index of the polynomial in base p with the constant coefficient least significant.
    pub fn to_index(&self) -> u64 {
        self.c.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn from_index(p: u32, mut idx: u64, len: usize) -> Poly {
        let mut c = Vec::with_capacity(len);
        for _ in 0..len {
            c.push((idx % p as u64) as u32);
            idx /= p as u64;
        }
        Poly::new(p, c)
    }

    /// Human form such as `theta^2+theta+1`.
    pub fn to_human(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "theta".to_string(),
                _ => format!("theta^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        parts.join("+")
    }
}

impl fmt::Display for Poly {
    /// Coefficient form `c0,c1,...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_human())
    }
}

/// All monic polynomials of degree `i`, constant term varying fastest.
pub fn enumerate_monic(p: u32, i: usize) -> impl Iterator<Item = Poly> {
    let count = (p as u64).pow(i as u32);
    (0..count).map(move |k| {
        let mut c = Vec::with_capacity(i + 1);
        let mut t = k;
        for _ in 0..i {
            c.push((t % p as u64) as u32);
            t /= p as u64;
        }
        c.push(1);
        Poly { p, c }
    })
}

/// Distinct-degree irreducibility test.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    let x = Poly::theta(f.p);
    let mut t = x.rem(f)?;
    for _ in 1..=n / 2 {
        t = t.pow_mod(f.p as u128, f);
        if !f.gcd(&t.sub(&x)).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First monic irreducible of degree `n` in enumeration order.
pub fn first_irreducible(p: u32, n: usize) -> Poly {
    enumerate_monic(p, n)
        .find(|f| is_irreducible(f).unwrap_or(false))
        .expect("irreducible polynomials exist in every degree")
}

pub(crate) fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}
