use std::sync::Arc;

use crate::algebra::{ExtField, Poly};
use crate::local::{Tower, TowerElem};

/// Coefficients c_k(θ) of C_a = Σ c_k τ^k.
pub fn carlitz_coeffs(a: &Poly) -> Vec<Poly> {
    let p = a.p();
    let mut res: Vec<Poly> = Vec::new();
    for &aj in a.coeffs().iter().rev() {
        // res ← C_θ ∘ res + a_j, using τ·c = c(θ^q)·τ
        let mut next = vec![Poly::zero(p); res.len() + 1];
        for (k, c) in res.iter().enumerate() {
            next[k] = next[k].add(&c.shift(1));
            next[k + 1] = next[k + 1].add(&twist(c));
        }
        next[0] = next[0].add(&Poly::constant(p, aj));
        res = next;
    }
    while res.last().is_some_and(Poly::is_zero) {
        res.pop();
    }
    res
}

/// c(θ)^q = c(θ^q) over F_q.
fn twist(c: &Poly) -> Poly {
    let p = c.p() as usize;
    let mut out = vec![0u32; c.coeffs().len().saturating_sub(1) * p + 1];
    for (i, &x) in c.coeffs().iter().enumerate() {
        out[i * p] = x;
    }
    Poly::new(c.p(), out)
}

/// An F_q-algebra with a distinguished image of θ.
pub trait ThetaAlgebra {
    type Elem: Clone;
    fn embed(&self, a: &Poly) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// a^{q^k}
    fn frob(&self, a: &Self::Elem, k: usize) -> Self::Elem;
}

/// C_a(x) = Σ c_k(θ) x^{q^k}.
pub fn carlitz_action<R: ThetaAlgebra>(alg: &R, a: &Poly, x: &R::Elem) -> R::Elem {
    let mut r = alg.zero();
    for (k, c) in carlitz_coeffs(a).iter().enumerate() {
        if !c.is_zero() {
            r = alg.add(&r, &alg.mul(&alg.embed(c), &alg.frob(x, k)));
        }
    }
    r
}

/// A itself, θ ↦ θ.
pub struct PolyAlgebra(pub u32);

impl ThetaAlgebra for PolyAlgebra {
    type Elem = Poly;

    fn embed(&self, a: &Poly) -> Poly {
        a.clone()
    }

    fn zero(&self) -> Poly {
        Poly::zero(self.0)
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b)
    }

    fn frob(&self, a: &Poly, k: usize) -> Poly {
        a.pow(self.0.pow(k as u32))
    }
}

/// A finite field with θ ↦ ζ.
pub struct FieldAlgebra {
    pub field: ExtField,
    pub zeta: u32,
}

impl ThetaAlgebra for FieldAlgebra {
    type Elem = u32;

    fn embed(&self, a: &Poly) -> u32 {
        self.field.eval_poly(a, self.zeta)
    }

    fn zero(&self) -> u32 {
        0
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.field.add(*a, *b)
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.field.mul(*a, *b)
    }

    fn frob(&self, a: &u32, k: usize) -> u32 {
        self.field.frobenius(*a, k)
    }
}

/// A completed tower, θ ↦ its θ-series, at a fixed precision.
pub struct TowerAlgebra {
    pub tower: Arc<Tower>,
    pub prec: i64,
}

impl ThetaAlgebra for TowerAlgebra {
    type Elem = TowerElem;

    fn embed(&self, a: &Poly) -> TowerElem {
        TowerElem::from_poly(&self.tower, a, self.prec)
    }

    fn zero(&self) -> TowerElem {
        TowerElem::zero(&self.tower, self.prec)
    }

    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        a.add(b)
    }

    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        a.mul(b)
    }

    fn frob(&self, a: &TowerElem, k: usize) -> TowerElem {
        a.frob_pow(k as u32)
    }
}
