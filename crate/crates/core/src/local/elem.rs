use std::fmt;
use std::sync::Arc;

use super::component::{Component, Integral};
use super::frac::FracElem;
use crate::error::{Error, Result};

/// Truncated element Σ_{i<N} x_i π^i of one component; digits are indices into the digit set.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalElem {
    comp: Arc<Component>,
    digits: Vec<u32>,
}

impl LocalElem {
    pub fn from_digits(comp: Arc<Component>, digits: Vec<u32>) -> Result<LocalElem> {
        if digits.iter().any(|&d| d as u64 >= comp.radix()) {
            return Err(Error::Domain("digit index out of range".into()));
        }
        Ok(LocalElem { comp, digits })
    }

    pub(crate) fn from_digits_unchecked(comp: Arc<Component>, digits: Vec<u32>) -> LocalElem {
        LocalElem { comp, digits }
    }

    pub fn zero(comp: Arc<Component>, n: usize) -> LocalElem {
        let z = comp.zero_digit();
        LocalElem { comp, digits: vec![z; n] }
    }

    pub fn from_integral(comp: Arc<Component>, x: &Integral, n: usize) -> LocalElem {
        let digits = comp.expand(x, n);
        LocalElem { comp, digits }
    }

    /// Expansion of a fraction with unit denominator to absolute precision n.
    pub fn digits_of(comp: Arc<Component>, x: &FracElem, n: usize) -> Result<LocalElem> {
        let digits = comp.digits_of(x, n)?;
        Ok(LocalElem { comp, digits })
    }

    pub fn component(&self) -> &Arc<Component> {
        &self.comp
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn digit_values(&self) -> Vec<Integral> {
        self.digits.iter().map(|&d| self.comp.digit(d).clone()).collect()
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    /// Representative of the element mod π^N.
    pub fn value(&self) -> Integral {
        self.comp.value(&self.digits)
    }

    pub fn truncate(&self, n: usize) -> LocalElem {
        LocalElem { comp: self.comp.clone(), digits: self.digits[..n.min(self.digits.len())].to_vec() }
    }

    pub fn neg(&self) -> LocalElem {
        LocalElem { comp: self.comp.clone(), digits: self.comp.neg_digits(&self.digits) }
    }

    fn binop(&self, o: &LocalElem, f: impl Fn(&Integral, &Integral) -> Integral) -> Result<LocalElem> {
        if self.comp != o.comp {
            return Err(Error::Domain("component mismatch".into()));
        }
        let n = self.precision().min(o.precision());
        let v = f(&self.truncate(n).value(), &o.truncate(n).value());
        Ok(LocalElem::from_integral(self.comp.clone(), &v, n))
    }

    pub fn add(&self, o: &LocalElem) -> Result<LocalElem> {
        self.binop(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &LocalElem) -> Result<LocalElem> {
        self.binop(o, |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &LocalElem) -> Result<LocalElem> {
        self.binop(o, |a, b| a.mul(b))
    }

    /// x_(0): the leading digit as an element.
    pub fn first_digit(&self) -> Result<Integral> {
        self.digits.first().map(|&d| self.comp.digit(d).clone()).ok_or(Error::PrecisionExhausted)
    }

    /// Digit shift φ; precision drops by one.
    pub fn phi(&self) -> Result<LocalElem> {
        if self.digits.is_empty() {
            return Err(Error::PrecisionExhausted);
        }
        Ok(LocalElem { comp: self.comp.clone(), digits: self.digits[1..].to_vec() })
    }

    pub fn neg_phi_neg(&self) -> Result<LocalElem> {
        Ok(self.neg().phi()?.neg())
    }

    /// Valuation in powers of π, capped at the precision.
    pub fn valuation(&self) -> usize {
        let z = self.comp.zero_digit();
        if self.comp.is_canonical() {
            return self.digits.iter().position(|&d| d != z).unwrap_or(self.digits.len());
        }
        let v = self.value();
        (0..self.digits.len()).find(|&k| !self.comp.reduce(&v, k + 1).is_zero()).unwrap_or(self.digits.len())
    }

    /// `component-id : digit,digit,... : N`.
    pub fn to_text(&self) -> String {
        let ds: Vec<String> = self.digit_values().iter().map(Integral::to_text).collect();
        format!("{} : {} : {}", self.comp.id(), ds.join(","), self.precision())
    }

    pub fn parse(s: &str) -> Result<LocalElem> {
        let parts: Vec<&str> = s.rsplitn(3, " : ").collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected `id : digits : N`, got {s:?}")));
        }
        let (id, body, n) = (parts[2], parts[1], parts[0]);
        let comp = Arc::new(Component::parse(id)?);
        let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad precision {n:?}")))?;
        let toks = split_top_level(body.trim(), ',');
        let toks: Vec<&str> = toks.into_iter().filter(|t| !t.trim().is_empty()).collect();
        if toks.len() != n {
            return Err(Error::Parse(format!("{} digits but precision {n}", toks.len())));
        }
        let mut digits = Vec::with_capacity(n);
        for t in toks {
            let d = comp.parse_digit(t)?;
            let idx = comp.digit_index(&d);
            if comp.digit(idx) != &d {
                return Err(Error::Parse(format!("{t:?} is not in the digit set")));
            }
            digits.push(idx);
        }
        Ok(LocalElem { comp, digits })
    }
}

impl fmt::Debug for LocalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '{' | '(' => depth += 1,
            ']' | '}' | ')' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// The product space Ō = Π Ō_t.
#[derive(Clone, PartialEq, Eq)]
pub struct Domain {
    comps: Vec<Arc<Component>>,
}

impl Domain {
    pub fn new(comps: Vec<Component>) -> Result<Domain> {
        if comps.is_empty() {
            return Err(Error::Domain("empty product".into()));
        }
        Ok(Domain { comps: comps.into_iter().map(Arc::new).collect() })
    }

    /// Comma-separated component descriptors, e.g. `Zp:3,Av:2:theta`.
    pub fn parse(s: &str) -> Result<Domain> {
        Domain::new(split_top_level(s, ',').into_iter().map(Component::parse).collect::<Result<_>>()?)
    }

    pub fn components(&self) -> &[Arc<Component>] {
        &self.comps
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.comps.iter().all(|c| c.is_canonical())
    }

    /// Number of residue classes mod 𝛑^m.
    pub fn residue_count(&self, m: usize) -> u128 {
        self.comps.iter().map(|c| (c.radix() as u128).pow(m as u32)).product()
    }

    pub fn with_shifted_digits(&self) -> Result<Domain> {
        Ok(Domain { comps: self.comps.iter().map(|c| c.shifted_digits().map(Arc::new)).collect::<Result<_>>()? })
    }

    pub fn id(&self) -> String {
        self.comps.iter().map(|c| c.id()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// A point of Ō given componentwise.
#[derive(Clone, PartialEq, Eq)]
pub struct ProdElem {
    parts: Vec<LocalElem>,
}

impl ProdElem {
    pub fn new(parts: Vec<LocalElem>) -> ProdElem {
        ProdElem { parts }
    }

    pub fn from_fracs(dom: &Domain, xs: &[FracElem], n: usize) -> Result<ProdElem> {
        if xs.len() != dom.len() {
            return Err(Error::Domain("arity mismatch".into()));
        }
        Ok(ProdElem {
            parts: dom
                .components()
                .iter()
                .zip(xs)
                .map(|(c, x)| LocalElem::digits_of(c.clone(), x, n))
                .collect::<Result<_>>()?,
        })
    }

    pub fn zero(dom: &Domain, n: usize) -> ProdElem {
        ProdElem { parts: dom.components().iter().map(|c| LocalElem::zero(c.clone(), n)).collect() }
    }

    pub fn parts(&self) -> &[LocalElem] {
        &self.parts
    }

    pub fn precision(&self) -> usize {
        self.parts.iter().map(LocalElem::precision).min().unwrap_or(0)
    }

    pub fn phi(&self) -> Result<ProdElem> {
        Ok(ProdElem { parts: self.parts.iter().map(LocalElem::phi).collect::<Result<_>>()? })
    }

    pub fn neg(&self) -> ProdElem {
        ProdElem { parts: self.parts.iter().map(LocalElem::neg).collect() }
    }

    pub fn neg_phi_neg(&self) -> Result<ProdElem> {
        Ok(ProdElem { parts: self.parts.iter().map(LocalElem::neg_phi_neg).collect::<Result<_>>()? })
    }

    pub fn to_text(&self) -> String {
        self.parts.iter().map(LocalElem::to_text).collect::<Vec<_>>().join("; ")
    }

    pub fn parse(s: &str) -> Result<ProdElem> {
        Ok(ProdElem {
            parts: split_top_level(s, ';').into_iter().map(|t| LocalElem::parse(t.trim())).collect::<Result<_>>()?,
        })
    }
}

impl fmt::Debug for ProdElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}
