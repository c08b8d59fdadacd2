use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use vadic::local::{periodic_points, Domain};
use vadic::par::Exec;
use vadic::uniqueness::{
    check_product_identity, forward_functions, point_label, recover_run, KVal, OrbitKind, OrbitTable, ProductReport,
    RecoverRun, ValuedField,
};

use crate::config::{canonical, Format, Settings};
use crate::out::Out;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Forward,
    Recover,
    Section3,
}

fn kval(k: &ValuedField, a: &KVal) -> String {
    let t = k.to_text(a);
    format!("t^{}*({})", t.val, t.unit)
}

#[derive(Serialize)]
struct PointRow<'a> {
    n: usize,
    point: &'a str,
    gamma: &'a str,
    h: &'a str,
    equal: bool,
}

#[derive(Serialize)]
struct Period<'a> {
    domain: &'a str,
    #[serde(flatten)]
    report: &'a ProductReport,
}

/// Per-point products of Γ and H over every period-n orbit, n ≤ n_max.
fn forward(dom: &Domain, s: &Settings, out: &mut Out) -> Result<bool> {
    let k = s.value_field(dom)?;
    let (gl, hl) = s.levels()?;
    let (gamma, _, h) = forward_functions(dom, &k, s.seed(), gl, hl, Exec::Parallel)?;
    let level = gamma.level().max(h.level());
    let id = dom.id();
    let mut pass = true;
    out.header(&["n", "point", "prod_gamma", "prod_h", "equal"]);
    for n in 1..=s.n.unwrap_or(4) {
        let table = OrbitTable::new(dom, n, level, OrbitKind::Minus, s.cap())?;
        for i in 0..table.point_count() {
            let pg = table.product(&gamma, i, false);
            let ph = table.product(&h, i, false);
            let label = point_label(dom, &table.point(i), OrbitKind::Minus);
            let (a, b) = (kval(&k, &pg), kval(&k, &ph));
            let equal = pg == ph;
            out.row(
                &[n.to_string(), label.clone(), a.clone(), b.clone(), equal.to_string()],
                &PointRow { n, point: &label, gamma: &a, h: &b, equal },
            );
        }
        let rep = check_product_identity(&h, &gamma, n, s.cap(), Exec::Parallel)?;
        pass &= rep.pass && rep.forms_agree;
        out.summary(
            &format!(
                "domain={id} n={} points={} failures={} frac_form={} forms_agree={} pass={}",
                rep.n, rep.points, rep.failures, rep.frac_form_checked, rep.forms_agree, rep.pass
            ),
            &Period { domain: &id, report: &rep },
        );
    }
    Ok(pass)
}

#[derive(Serialize)]
struct Recovered<'a> {
    domain: &'a str,
    k: String,
    #[serde(flatten)]
    run: &'a RecoverRun,
}

fn recover(dom: &Domain, s: &Settings, out: &mut Out) -> Result<bool> {
    let k = s.value_field(dom)?;
    let params = s.params(dom)?;
    let run = recover_run(dom, &k, s.seed(), s.levels()?.0, s.r.unwrap_or(12), &params, Exec::Parallel)?;
    let rep = &run.recovery;
    let id = dom.id();
    if out.format() == Format::Tsv {
        out.header(&["n", "ord_diff"]);
        for t in &rep.trace {
            out.row(&[t.n.to_string(), t.ord.map_or("exact".into(), |o| o.to_string())], t);
        }
        out.summary(
                &format!(
                    "domain={id} k={} level_f={} target={} final_n={} residual={} monotone={} minus_residual={} minus_paths_agree={} negative_rejected={} pass={}",
                    k.id(),
                    rep.level_f,
                    rep.target,
                    rep.final_n,
                    rep.residual,
                    run.monotone,
                    run.minus_residual,
                    run.minus_paths_agree,
                    run.negative_rejected,
                    run.pass
                ),
            &(),
        );
    } else {
        out.row(&[], &Recovered { domain: &id, k: k.id(), run: &run });
    }
    Ok(run.pass)
}

#[derive(Serialize)]
struct DigitSets {
    domain: String,
    canonical: String,
    n: usize,
    points: usize,
    canonical_points: usize,
    differ: bool,
}

pub fn run(mode: Mode, s: &Settings, out: &mut Out) -> Result<bool> {
    let dom = s.domain()?;
    match mode {
        Mode::Forward => forward(&dom, s, out),
        Mode::Recover => recover(&dom, s, out),
        Mode::Section3 => {
            // the same pipeline on the given digit sets, next to the canonical periodic points
            let canon = canonical(&dom)?;
            for n in 1..=s.n.unwrap_or(4) {
                let labels = |d: &Domain| -> Result<Vec<String>> {
                    Ok(periodic_points(d, n, s.cap())?.iter().map(|p| point_label(d, p, OrbitKind::Minus)).collect())
                };
                let (a, b) = (labels(&dom)?, labels(&canon)?);
                let row = DigitSets {
                    domain: dom.id(),
                    canonical: canon.id(),
                    n,
                    points: a.len(),
                    canonical_points: b.len(),
                    differ: a != b,
                };
                out.summary(
                    &format!(
                        "digit sets {} vs {} n={} points={} canonical_points={} differ={}",
                        row.domain, row.canonical, n, row.points, row.canonical_points, row.differ
                    ),
                    &row,
                );
            }
            let f = forward(&dom, s, out)?;
            let r = recover(&dom, s, out)?;
            Ok(f && r)
        }
    }
}
