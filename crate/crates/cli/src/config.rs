//! Session settings: command-line flags layered over an optional TOML file.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;
use vadic::algebra::{is_irreducible, parse_poly, Poly};
use vadic::local::{Component, Domain, Place, DEFAULT_CAP};
use vadic::uniqueness::{ProofParams, ValuedField, DEFAULT_K_PRECISION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

/// Every setting is optional here; flags win over the config file, which wins over defaults.
#[derive(Debug, Clone, Default, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Size of the constant field (a prime)
    #[arg(long)]
    pub q: Option<u32>,
    /// The place v, as `theta^2+theta+1` or `1,1,1`
    #[arg(long)]
    pub v: Option<String>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Working precision in digits of v
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n_prec: Option<usize>,
    /// Prime for Morita's gamma
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Product domain, e.g. `Zp:3,Av:2:theta`
    #[arg(long)]
    pub components: Option<String>,
    /// Step-function levels: one value, or `gamma,g` for forward runs
    #[arg(long)]
    pub levels: Option<String>,
    /// Largest period checked
    #[arg(long)]
    pub n: Option<usize>,
    /// Target residual for recovery
    #[arg(long)]
    pub r: Option<i64>,
    /// Digit tuple b, semicolon separated
    #[arg(long)]
    pub b: Option<String>,
    /// Value field K, e.g. `Zp:5@12`; defaults to the first component
    #[arg(long)]
    pub k: Option<String>,
    /// File with one digit set per line, one line per component
    #[arg(long)]
    pub digits: Option<PathBuf>,
    /// Enumeration cap for periodic points and sweeps
    #[arg(long)]
    pub cap: Option<u128>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! layer {
    ($a:ident, $b:ident, $($f:ident),*) => {
        Settings { $($f: $a.$f.or($b.$f)),* }
    };
}

impl Settings {
    pub fn layered(self, file: Settings) -> Settings {
        layer!(self, file, q, v, ell, n_prec, p, seed, components, levels, n, r, b, k, digits, cap, format)
    }

    pub fn load(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn q(&self) -> u32 {
        self.q.unwrap_or(2)
    }

    pub fn v(&self) -> Result<Poly> {
        let v = parse_poly(self.q(), self.v.as_deref().unwrap_or("theta"))?;
        if v.degree().unwrap_or(0) == 0 || !is_irreducible(&v)? {
            bail!("v = {} is not irreducible over F_{}", v.to_human(), self.q());
        }
        Ok(v)
    }

    pub fn ell(&self) -> usize {
        self.ell.unwrap_or(1)
    }

    pub fn precision(&self) -> usize {
        self.n_prec.unwrap_or(20)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn cap(&self) -> u128 {
        self.cap.unwrap_or(DEFAULT_CAP)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn levels(&self) -> Result<(usize, usize)> {
        let s = self.levels.as_deref().unwrap_or("2");
        let parse = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad level {t:?}"));
        match s.split_once(',') {
            Some((a, b)) => Ok((parse(a)?, parse(b)?)),
            None => {
                let l = parse(s)?;
                Ok((l, l))
            }
        }
    }

    pub fn domain(&self) -> Result<Domain> {
        let dom = Domain::parse(self.components.as_deref().unwrap_or("Zp:3"))?;
        let Some(path) = &self.digits else { return Ok(dom) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        if lines.len() != dom.len() {
            bail!("{} lists {} digit sets for {} components", path.display(), lines.len(), dom.len());
        }
        let comps = dom
            .components()
            .iter()
            .zip(lines)
            .map(|(c, line)| {
                let ds = line.split(',').map(|t| c.parse_digit(t)).collect::<vadic::Result<Vec<_>>>()?;
                Ok(c.with_digits(ds)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Domain::new(comps)?)
    }

    pub fn value_field(&self, dom: &Domain) -> Result<Arc<ValuedField>> {
        let k = match &self.k {
            Some(s) => ValuedField::parse(s)?,
            None => ValuedField::of_component(&dom.components()[0], DEFAULT_K_PRECISION)?,
        };
        Ok(Arc::new(k))
    }

    pub fn params(&self, dom: &Domain) -> Result<ProofParams> {
        Ok(match &self.b {
            Some(s) => ProofParams::parse(dom, s)?,
            None => ProofParams::zero(dom),
        })
    }
}

/// The same components with canonical digits.
pub fn canonical(dom: &Domain) -> Result<Domain> {
    let comps = dom
        .components()
        .iter()
        .map(|c| match c.place() {
            Place::Z { p } => Component::zp(*p, c.e()),
            Place::A { v, .. } => Component::av(v.clone(), c.e()),
        })
        .collect::<vadic::Result<Vec<_>>>()?;
    Ok(Domain::new(comps)?)
}
