use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use vadic::algebra::{parse_ratfunc, parse_rational};
use vadic::carlitz::{
    admissible_x, admissible_y, big_g_ari, big_g_geo, big_g_geo_default, gauss_ari, gauss_geo, sweep_ari, sweep_geo,
    sweep_two, verify_gkt_ari, verify_gkt_geo, verify_gkt_two, CarlitzContext, Report,
};
use vadic::par::Exec;

use crate::config::Settings;
use crate::out::Out;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Ari,
    Geo,
    Two,
}

fn context(s: &Settings) -> Result<std::sync::Arc<CarlitzContext>> {
    Ok(CarlitzContext::new(&s.v()?, s.ell(), s.precision())?)
}

#[derive(Serialize)]
struct GaussRow {
    case: &'static str,
    q: u32,
    v: String,
    d: usize,
    ell: usize,
    x: Option<String>,
    y: Option<String>,
    #[serde(rename = "N")]
    n: usize,
    g: String,
    big_g: String,
}

/// The Gauss sum g (and G(y) = ∏ conjugates) for the arithmetic or geometric case.
pub fn gauss(case: Case, x: Option<&str>, y: Option<&str>, s: &Settings, out: &mut Out) -> Result<bool> {
    let ctx = context(s)?;
    let y = y.map(parse_rational).transpose()?;
    let (name, g, big) = match case {
        Case::Ari => {
            let g = gauss_ari(&ctx);
            let y = y.clone().context("--y is required for the arithmetic Gauss sum")?;
            let big = big_g_ari(&ctx, &g, &y)?;
            ("ari", g, big)
        }
        Case::Geo => {
            let x = parse_ratfunc(s.q(), x.context("--x is required for the geometric Gauss sum")?)?;
            let g = gauss_geo(&ctx, &x)?;
            let big = match &y {
                Some(y) => big_g_geo(&ctx, &g, y)?,
                None => big_g_geo_default(&ctx, &g),
            };
            ("geo", g, big)
        }
        Case::Two => bail!("gauss takes ari or geo"),
    };
    let row = GaussRow {
        case: name,
        q: ctx.q(),
        v: ctx.v().to_string(),
        d: ctx.d(),
        ell: ctx.ell(),
        x: x.map(str::to_owned),
        y: y.map(|y| y.to_string()),
        n: ctx.precision(),
        g: g.value().to_text(),
        big_g: big.to_text(),
    };
    out.header(&["case", "q", "v", "d", "ell", "x", "y", "N", "g", "G"]);
    let tsv = vec![
        row.case.to_owned(),
        row.q.to_string(),
        row.v.clone(),
        row.d.to_string(),
        row.ell.to_string(),
        row.x.clone().unwrap_or("-".into()),
        row.y.clone().unwrap_or("-".into()),
        row.n.to_string(),
        row.g.clone(),
        row.big_g.clone(),
    ];
    out.row(&tsv, &row);
    Ok(true)
}

#[derive(Serialize)]
struct Summary {
    rows: usize,
    passed: usize,
    failed: usize,
}

pub fn gkt(case: Case, all: bool, x: Option<&str>, y: Option<&str>, s: &Settings, out: &mut Out) -> Result<bool> {
    let ctx = context(s)?;
    let reports: Vec<Report> = if all {
        let count = match case {
            Case::Ari => admissible_y(&ctx).len(),
            Case::Geo => admissible_x(&ctx).len(),
            Case::Two => admissible_x(&ctx).len() * admissible_y(&ctx).len(),
        };
        if count as u128 > s.cap() {
            bail!("sweep of {count} rows exceeds cap {}", s.cap());
        }
        match case {
            Case::Ari => sweep_ari(&ctx, Exec::Parallel)?,
            Case::Geo => sweep_geo(&ctx, Exec::Parallel)?,
            Case::Two => sweep_two(&ctx, Exec::Parallel)?,
        }
    } else {
        let x = || -> Result<_> { Ok(parse_ratfunc(s.q(), x.context("--x is required (or pass --all)")?)?) };
        let y = || -> Result<_> { Ok(parse_rational(y.context("--y is required (or pass --all)")?)?) };
        vec![match case {
            Case::Ari => verify_gkt_ari(&ctx, &y()?)?,
            Case::Geo => verify_gkt_geo(&ctx, &x()?)?,
            Case::Two => verify_gkt_two(&ctx, &x()?, &y()?)?,
        }]
    };
    out.header(&["case", "q", "v", "d", "ell", "x", "y", "N", "diff_valuation", "pass", "lhs", "rhs"]);
    for r in &reports {
        let tsv = vec![
            r.case.clone(),
            r.q.to_string(),
            r.v.clone(),
            r.d.to_string(),
            r.ell.to_string(),
            r.x.clone().unwrap_or("-".into()),
            r.y.clone().unwrap_or("-".into()),
            r.n.to_string(),
            r.diff_valuation.to_string(),
            r.pass.to_string(),
            r.lhs.clone(),
            r.rhs.clone(),
        ];
        out.row(&tsv, r);
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    let sum = Summary { rows: reports.len(), passed, failed: reports.len() - passed };
    out.summary(&format!("rows={} pass={} fail={}", sum.rows, sum.passed, sum.failed), &sum);
    Ok(sum.failed == 0)
}
