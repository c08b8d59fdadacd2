use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::{KVal, KValText, ValuedField};
use crate::error::{Error, Result};
use crate::local::{Domain, ProdElem};
use crate::par::{self, Exec};

/// Largest table a step function may carry.
pub const TABLE_CAP: u128 = 4_000_000;

/// A function Ō → K^× constant on residue classes mod 𝛑^level.
#[derive(Clone, PartialEq)]
pub struct StepFn {
    dom: Domain,
    level: usize,
    k: Arc<ValuedField>,
    table: Vec<KVal>,
}

impl std::fmt::Debug for StepFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StepFn({:?}, level {}, K = {:?})", self.dom, self.level, self.k)
    }
}

/// Residue-class size |π_t|^level per component.
pub fn class_sizes(dom: &Domain, level: usize) -> Vec<u64> {
    dom.components().iter().map(|c| c.radix().pow(level as u32)).collect()
}

fn table_size(dom: &Domain, level: usize) -> Result<usize> {
    let n = dom.residue_count(level);
    if n > TABLE_CAP {
        return Err(Error::EnumerationCap { count: n, cap: TABLE_CAP });
    }
    Ok(n as usize)
}

/// r = Σ_{i<level} d_i |π|^i.
pub fn residue_of(radix: u64, digits: &[u32], level: usize) -> u64 {
    digits[..level].iter().rev().fold(0u64, |acc, &d| acc * radix + d as u64)
}

/// Inverse of [`residue_of`].
pub fn digits_of_residue(radix: u64, mut r: u64, level: usize) -> Vec<u32> {
    (0..level)
        .map(|_| {
            let d = (r % radix) as u32;
            r /= radix;
            d
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct StepFnJson {
    domain: String,
    level: usize,
    #[serde(rename = "K")]
    k: String,
    table: BTreeMap<String, KValText>,
}

impl StepFn {
    pub fn new(dom: Domain, level: usize, k: Arc<ValuedField>, table: Vec<KVal>) -> Result<StepFn> {
        let n = table_size(&dom, level)?;
        if table.len() != n {
            return Err(Error::Domain(format!("table has {} entries, expected {n}", table.len())));
        }
        Ok(StepFn { dom, level, k, table })
    }

    pub fn constant(dom: &Domain, k: Arc<ValuedField>, c: KVal) -> StepFn {
        StepFn { dom: dom.clone(), level: 0, k, table: vec![c] }
    }

    pub fn one(dom: &Domain, k: Arc<ValuedField>) -> StepFn {
        let c = k.one();
        StepFn::constant(dom, k, c)
    }

    /// Table from a function of the per-component residue digits.
    pub fn tabulate<F>(dom: &Domain, level: usize, k: Arc<ValuedField>, exec: Exec, f: F) -> Result<StepFn>
    where
        F: Fn(&[Vec<u32>]) -> KVal + Sync + Send,
    {
        let n = table_size(dom, level)?;
        let sizes = class_sizes(dom, level);
        let radices: Vec<u64> = dom.components().iter().map(|c| c.radix()).collect();
        let table = par::map_range(exec, n, |idx| {
            let mut rest = idx as u64;
            let digits: Vec<Vec<u32>> = sizes
                .iter()
                .zip(&radices)
                .map(|(&s, &r)| {
                    let d = digits_of_residue(r, rest % s, level);
                    rest /= s;
                    d
                })
                .collect();
            f(&digits)
        });
        Ok(StepFn { dom: dom.clone(), level, k, table })
    }

    /// Seeded random values with valuations in `vals`.
    pub fn random<R: Rng>(
        dom: &Domain,
        level: usize,
        k: Arc<ValuedField>,
        rng: &mut R,
        vals: std::ops::RangeInclusive<i64>,
    ) -> Result<StepFn> {
        let n = table_size(dom, level)?;
        let table = (0..n).map(|_| k.random(rng, vals.clone())).collect();
        Ok(StepFn { dom: dom.clone(), level, k, table })
    }

    pub fn domain(&self) -> &Domain {
        &self.dom
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn field(&self) -> &Arc<ValuedField> {
        &self.k
    }

    pub fn table(&self) -> &[KVal] {
        &self.table
    }

    /// Table index of the class of x given per-component digit slices (each ≥ level long).
    pub fn index_of(&self, digits: &[impl AsRef<[u32]>]) -> usize {
        let mut idx = 0u64;
        let mut stride = 1u64;
        for (c, d) in self.dom.components().iter().zip(digits) {
            let r = c.radix();
            idx += residue_of(r, d.as_ref(), self.level) * stride;
            stride *= r.pow(self.level as u32);
        }
        idx as usize
    }

    /// Table index from per-component residues taken at a level ≥ self.level.
    pub fn index_of_residues(&self, residues: &[u64]) -> usize {
        let mut idx = 0u64;
        let mut stride = 1u64;
        for (c, &r) in self.dom.components().iter().zip(residues) {
            let s = c.radix().pow(self.level as u32);
            idx += (r % s) * stride;
            stride *= s;
        }
        idx as usize
    }

    pub fn eval_digits(&self, digits: &[impl AsRef<[u32]>]) -> &KVal {
        &self.table[self.index_of(digits)]
    }

    pub fn eval(&self, x: &ProdElem) -> Result<KVal> {
        if x.parts().len() != self.dom.len() {
            return Err(Error::Domain("arity mismatch".into()));
        }
        if x.precision() < self.level {
            return Err(Error::InsufficientPrecision { needed: self.level, available: x.precision() });
        }
        for (p, c) in x.parts().iter().zip(self.dom.components()) {
            if p.component() != c {
                return Err(Error::Domain("argument lives in a different domain".into()));
            }
        }
        let ds: Vec<&[u32]> = x.parts().iter().map(|p| p.digits()).collect();
        Ok(self.eval_digits(&ds).clone())
    }

    /// Valuation bounds (δ₁, δ₂) over the table.
    pub fn bounds(&self) -> (i64, i64) {
        let lo = self.table.iter().map(|v| v.val).min().unwrap_or(0);
        let hi = self.table.iter().map(|v| v.val).max().unwrap_or(0);
        (lo, hi)
    }

    /// x ↦ F(−x).
    pub fn negate_arg(&self) -> StepFn {
        let comps = self.dom.components().to_vec();
        let k = self.k.clone();
        StepFn::tabulate(&self.dom, self.level, k, Exec::Sequential, |ds| {
            let neg: Vec<Vec<u32>> = comps.iter().zip(ds).map(|(c, d)| c.neg_digits(d)).collect();
            self.eval_digits(&neg).clone()
        })
        .expect("same size as self")
    }

    /// Copy with the value at table index `idx` multiplied by 𝔱.
    pub fn perturb(&self, idx: usize) -> StepFn {
        let mut out = self.clone();
        out.table[idx] = self.k.mul(&self.table[idx], &self.k.t());
        out
    }

    /// The same function tabulated at a finer level.
    pub fn at_level(&self, level: usize) -> Result<StepFn> {
        if level < self.level {
            return Err(Error::Domain("cannot coarsen a step function".into()));
        }
        StepFn::tabulate(&self.dom, level, self.k.clone(), Exec::Sequential, |ds| self.eval_digits(ds).clone())
    }

    /// Pointwise product.
    pub fn mul(&self, o: &StepFn) -> Result<StepFn> {
        self.check_compatible(o)?;
        let level = self.level.max(o.level);
        StepFn::tabulate(&self.dom, level, self.k.clone(), Exec::Sequential, |ds| {
            self.k.mul(self.eval_digits(ds), o.eval_digits(ds))
        })
    }

    pub(crate) fn check_compatible(&self, o: &StepFn) -> Result<()> {
        if self.dom != o.dom {
            return Err(Error::Domain("step functions on different domains".into()));
        }
        if self.k != o.k {
            return Err(Error::Domain("step functions with different value fields".into()));
        }
        Ok(())
    }

    /// Residue key: per-component digit values joined by `,`, components by `;`.
    fn key(&self, idx: usize) -> String {
        let sizes = class_sizes(&self.dom, self.level);
        let mut rest = idx as u64;
        let mut parts = Vec::new();
        for (c, s) in self.dom.components().iter().zip(sizes) {
            let ds = digits_of_residue(c.radix(), rest % s, self.level);
            rest /= s;
            parts.push(ds.iter().map(|&d| c.digit(d).to_text()).collect::<Vec<_>>().join(","));
        }
        parts.join(";")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let table = (0..self.table.len()).map(|i| (self.key(i), self.k.to_text(&self.table[i]))).collect();
        let j = StepFnJson { domain: self.dom.id(), level: self.level, k: self.k.id(), table };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<StepFn> {
        let j: StepFnJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let dom = Domain::parse(&j.domain)?;
        let k = Arc::new(ValuedField::parse(&j.k)?);
        let n = table_size(&dom, j.level)?;
        let mut table: Vec<Option<KVal>> = vec![None; n];
        let shell = StepFn { dom: dom.clone(), level: j.level, k: k.clone(), table: Vec::new() };
        for (key, val) in &j.table {
            let parts = crate::local::split_top_level(key, ';');
            if parts.len() != dom.len() {
                return Err(Error::Parse(format!("key {key:?} has the wrong arity")));
            }
            let mut ds = Vec::with_capacity(dom.len());
            for (c, part) in dom.components().iter().zip(parts) {
                let toks: Vec<&str> =
                    crate::local::split_top_level(part, ',').into_iter().filter(|t| !t.trim().is_empty()).collect();
                if toks.len() != j.level {
                    return Err(Error::Parse(format!("key {key:?} is not at level {}", j.level)));
                }
                let mut d = Vec::with_capacity(j.level);
                for t in toks {
                    let x = c.parse_digit(t)?;
                    let i = c.digit_index(&x);
                    if c.digit(i) != &x {
                        return Err(Error::Parse(format!("{t:?} is not a digit of {}", c.id())));
                    }
                    d.push(i);
                }
                ds.push(d);
            }
            let idx = shell.index_of(&ds);
            if table[idx].replace(k.from_text(val)?).is_some() {
                return Err(Error::Parse(format!("duplicate key {key:?}")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("missing table entry {}", shell.key(i)))))
            .collect::<Result<Vec<_>>>()?;
        StepFn::new(dom, j.level, k, table)
    }
}

/// H(x) = Γ(x)·G(x)/G(−φ(−x)).
pub fn build_h(gamma: &StepFn, g: &StepFn, exec: Exec) -> Result<StepFn> {
    gamma.check_compatible(g)?;
    let level = gamma.level.max(g.level + 1);
    let comps = gamma.dom.components().to_vec();
    let k = gamma.k.clone();
    StepFn::tabulate(&gamma.dom, level, k.clone(), exec, |ds| {
        let shifted: Vec<Vec<u32>> = comps
            .iter()
            .zip(ds)
            .map(|(c, d)| {
                let neg = c.neg_digits(d);
                c.neg_digits(&neg[1..])
            })
            .collect();
        k.mul(gamma.eval_digits(ds), &k.div(g.eval_digits(ds), g.eval_digits(&shifted)))
    })
}

/// F(x) = G(x)/G(φ(x)): a coboundary for the shift.
pub fn coboundary(g: &StepFn, exec: Exec) -> Result<StepFn> {
    let k = g.k.clone();
    StepFn::tabulate(&g.dom, g.level + 1, k.clone(), exec, |ds| {
        let shifted: Vec<&[u32]> = ds.iter().map(|d| &d[1..]).collect();
        k.div(g.eval_digits(ds), g.eval_digits(&shifted))
    })
}
