use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use vadic::algebra::{parse_ratfunc, parse_rational};
use vadic::gamma::{carlitz_factorial, morita_gamma_p, Certificate, GammaValue, VGamma};
use vadic::local::{Component, FracElem, LocalElem};

use crate::config::Settings;
use crate::out::Out;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaKind {
    Ari,
    Geo,
    Two,
    Carlitz,
    Morita,
}

#[derive(Serialize)]
struct Row<'a> {
    kind: &'a str,
    x: Option<&'a str>,
    y: Option<&'a str>,
    #[serde(rename = "N")]
    n: Option<usize>,
    value: String,
    certificate: Option<Certificate>,
}

/// LocalElem text (`id : digits : N`) when it has the separators, else a fraction.
fn is_local(s: &str) -> bool {
    s.contains(" : ")
}

fn local(s: &str) -> Result<LocalElem> {
    Ok(LocalElem::parse(s)?)
}

pub fn run(kind: GammaKind, x: Option<&str>, y: Option<&str>, s: &Settings, out: &mut Out) -> Result<bool> {
    let need = |a: Option<&str>, name: &str| a.map(str::to_owned).with_context(|| format!("--{name} is required"));
    let n = s.precision();
    let (value, cert, prec) = match kind {
        GammaKind::Carlitz => {
            let y: u64 = need(y, "y")?.trim().parse().context("--y must be a natural number")?;
            (carlitz_factorial(s.q(), y).to_string(), None, None)
        }
        GammaKind::Morita => {
            let x = need(x, "x")?;
            let arg = if is_local(&x) {
                local(&x)?
            } else {
                let p = s.p.or(s.q).context("--p is required")?;
                LocalElem::digits_of(Arc::new(Component::zp(p, 1)?), &FracElem::parse_rat(&x)?, n)?
            };
            (morita_gamma_p(&arg, n)?.value().to_text(), None, Some(n))
        }
        GammaKind::Ari | GammaKind::Geo | GammaKind::Two => {
            let g = VGamma::new(s.v()?)?;
            let v: GammaValue = match kind {
                GammaKind::Ari => {
                    let y = need(y.or(x), "y")?;
                    if is_local(&y) {
                        g.ari(&local(&y)?, n)?
                    } else {
                        g.ari_rat(&parse_rational(&y)?, n)?
                    }
                }
                GammaKind::Geo => {
                    let x = need(x, "x")?;
                    if is_local(&x) {
                        g.geo(&local(&x)?, n)?
                    } else {
                        g.geo_frac(&parse_ratfunc(s.q(), &x)?, n)?
                    }
                }
                _ => {
                    let (x, y) = (need(x, "x")?, need(y, "y")?);
                    match (is_local(&x), is_local(&y)) {
                        (true, true) => g.two(&local(&x)?, &local(&y)?, n)?,
                        (false, false) => g.two_frac(&parse_ratfunc(s.q(), &x)?, &parse_rational(&y)?, n)?,
                        _ => bail!("--x and --y must both be fractions or both be digit expansions"),
                    }
                }
            };
            (v.poly().to_string(), Some(v.certificate), Some(n))
        }
    };
    let kind_name = format!("{kind:?}").to_lowercase();
    let tsv = vec![
        kind_name.clone(),
        x.unwrap_or("-").to_owned(),
        y.unwrap_or("-").to_owned(),
        prec.map_or("-".into(), |n| n.to_string()),
        value.clone(),
        cert.as_ref().map_or("-".into(), |c| c.index.to_string()),
        cert.as_ref().map_or("-".into(), |c| c.modulus.to_string()),
        cert.as_ref()
            .map_or("-".into(), |c| c.tail_valuations.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")),
    ];
    out.header(&["kind", "x", "y", "N", "value", "cut_index", "cut_modulus", "tail_valuations"]);
    out.row(&tsv, &Row { kind: &kind_name, x, y, n: prec, value, certificate: cert });
    Ok(true)
}
