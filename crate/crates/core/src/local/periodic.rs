use std::collections::HashSet;

use num::BigRational;

use super::component::{Component, Integral, Place};
use super::elem::{Domain, LocalElem, ProdElem};
use super::frac::FracElem;
use crate::algebra::RatFunc;
use crate::error::{Error, Result};

pub const DEFAULT_CAP: u128 = 1_000_000;

/// A point x with φ^{(n)}(−x) = −x, stored by the repeating digit block of −x in each component.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PeriodicPoint {
    pub n: usize,
    pub blocks: Vec<Vec<u32>>,
}

fn block_fraction(comp: &Component, block: &[u32]) -> FracElem {
    // x = value(block) / (π^n − 1)
    let n = block.len();
    let num = comp.value(block);
    let den = comp.pi_pow(n).sub(&comp.one());
    frac_of(&num, &den)
}

fn frac_of(num: &Integral, den: &Integral) -> FracElem {
    match (num, den) {
        (Integral::Int(a), Integral::Int(b)) => FracElem::Rat(BigRational::new(a.clone(), b.clone())),
        (Integral::Poly(a), Integral::Poly(b)) => FracElem::Fun(RatFunc::new(a.clone(), b.clone()).expect("nonzero")),
        _ => panic!("mixed integral kinds"),
    }
}

/// Blocks admitted for one component: all digit blocks, except that a canonical Z component
/// drops the all-(π−1) block (x = 1 violates 0 ≤ x < 1).
pub fn component_blocks(comp: &Component, n: usize) -> Vec<Vec<u32>> {
    let r = comp.radix();
    let total = r.pow(n as u32);
    let skip_top = comp.is_canonical() && matches!(comp.place(), Place::Z { .. });
    let mut out = Vec::with_capacity(total as usize);
    for k in 0..total {
        if skip_top && k == total - 1 {
            continue;
        }
        let mut b = Vec::with_capacity(n);
        let mut t = k;
        for _ in 0..n {
            b.push((t % r) as u32);
            t /= r;
        }
        out.push(b);
    }
    out
}

pub fn periodic_count(dom: &Domain, n: usize) -> u128 {
    dom.components()
        .iter()
        .map(|c| {
            let t = (c.radix() as u128).saturating_pow(n as u32);
            if c.is_canonical() && matches!(c.place(), Place::Z { .. }) {
                t - 1
            } else {
                t
            }
        })
        .product()
}

/// All periodic points of period dividing n, in mixed-radix order (first component fastest).
pub fn periodic_points(dom: &Domain, n: usize, cap: u128) -> Result<Vec<PeriodicPoint>> {
    if n == 0 {
        return Err(Error::Domain("period must be ≥ 1".into()));
    }
    let count = periodic_count(dom, n);
    if count > cap {
        return Err(Error::EnumerationCap { count, cap });
    }
    let per: Vec<Vec<Vec<u32>>> = dom.components().iter().map(|c| component_blocks(c, n)).collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; per.len()];
    loop {
        out.push(PeriodicPoint { n, blocks: idx.iter().zip(&per).map(|(&i, bs)| bs[i].clone()).collect() });
        let mut t = 0;
        loop {
            if t == idx.len() {
                return Ok(out);
            }
            idx[t] += 1;
            if idx[t] < per[t].len() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

impl PeriodicPoint {
    pub fn fractions(&self, dom: &Domain) -> Vec<FracElem> {
        dom.components().iter().zip(&self.blocks).map(|(c, b)| block_fraction(c, b)).collect()
    }

    /// Digit expansion of x to precision `prec`.
    pub fn to_prod(&self, dom: &Domain, prec: usize) -> ProdElem {
        ProdElem::new(
            dom.components()
                .iter()
                .zip(&self.blocks)
                .map(|(c, b)| {
                    let neg: Vec<u32> = (0..prec).map(|i| b[i % b.len()]).collect();
                    LocalElem::from_digits_unchecked(c.clone(), neg).neg()
                })
                .collect(),
        )
    }

    /// Digits of −φ^{(j)}(−x), the j-th element of the shift orbit, to precision `prec`.
    pub fn shift_orbit_digits(&self, dom: &Domain, j: usize, prec: usize) -> Vec<Vec<u32>> {
        dom.components()
            .iter()
            .zip(&self.blocks)
            .map(|(c, b)| {
                let n = b.len();
                let neg: Vec<u32> = (0..prec).map(|i| b[(i + j) % n]).collect();
                c.neg_digits(&neg)
            })
            .collect()
    }

    pub fn label(&self, dom: &Domain) -> String {
        self.fractions(dom).iter().map(|f| f.to_string()).collect::<Vec<_>>().join(";")
    }
}

/// Repeating block of −x when x satisfies φ^{(n)}(−x) = −x; errors otherwise.
pub fn periodic_block(comp: &Component, x: &FracElem, n: usize) -> Result<Vec<u32>> {
    let negx = x.neg();
    let block = comp.digits_of(&negx, n).map_err(|_| Error::NotPeriodic(n))?;
    if block_fraction(comp, &block) != *x {
        return Err(Error::NotPeriodic(n));
    }
    if comp.is_canonical() && !comp.frac_in_unit_range(x) {
        return Err(Error::NotPeriodic(n));
    }
    Ok(block)
}

/// Checks {⟨π^j x⟩} = {−φ^{(j)}(−x)} for 0 ≤ j < n, computing both sets exactly.
pub fn orbit_sets_equal(dom: &Domain, x: &[FracElem], n: usize) -> Result<bool> {
    let (a, b) = orbit_sets(dom, x, n)?;
    Ok(a == b)
}

pub type OrbitSet = HashSet<Vec<FracElem>>;

pub fn orbit_sets(dom: &Domain, x: &[FracElem], n: usize) -> Result<(OrbitSet, OrbitSet)> {
    if !dom.is_canonical() {
        return Err(Error::Domain("fractional parts need canonical digit sets".into()));
    }
    if x.len() != dom.len() {
        return Err(Error::Domain("arity mismatch".into()));
    }
    let blocks: Vec<Vec<u32>> =
        dom.components().iter().zip(x).map(|(c, xi)| periodic_block(c, xi, n)).collect::<Result<_>>()?;
    let mut frac_set = HashSet::new();
    let mut shift_set = HashSet::new();
    for j in 0..n {
        let fp: Vec<FracElem> =
            dom.components().iter().zip(x).map(|(c, xi)| xi.mul(&c.pi_pow(j).to_frac()).frac_part()).collect();
        frac_set.insert(fp);
        let sh: Vec<FracElem> = dom
            .components()
            .iter()
            .zip(&blocks)
            .map(|(c, b)| {
                let rot: Vec<u32> = (0..n).map(|i| b[(i + j) % n]).collect();
                block_fraction(c, &rot)
            })
            .collect();
        shift_set.insert(sh);
    }
    Ok((frac_set, shift_set))
}
