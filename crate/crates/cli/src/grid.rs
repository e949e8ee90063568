//! Parameter-grid runner: builds a tower per (p, alpha, n) cell, runs the
//! requested property verifications, and aggregates a deterministic report.
//!
//! Cells are processed (and always emitted) in lexicographic (p, alpha, n)
//! order; per-cell errors are recorded and the run continues. Opt-in
//! parallel fan-out computes cells on scoped threads but assembles the
//! report in input order, so output bytes do not depend on scheduling.

use serde_json::{json, Value};

use qforge_core::tower::{
    build_tower, default_bound_b, default_bound_c, verify_a, verify_b, verify_c,
    verify_d_and_lift, GammaTower, Property, VerificationReport, VerifyStatus,
};
use qforge_core::PrimeContext;

use crate::report::{status_string, verification_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PropertySelector {
    A,
    B,
    C,
    D,
    Lift,
}

impl PropertySelector {
    pub fn parse_list(s: &str) -> Result<Vec<PropertySelector>, String> {
        if s == "all" {
            return Ok(vec![
                PropertySelector::A,
                PropertySelector::B,
                PropertySelector::C,
                PropertySelector::D,
                PropertySelector::Lift,
            ]);
        }
        let mut out = Vec::new();
        for part in s.split(',') {
            out.push(match part.trim() {
                "a" => PropertySelector::A,
                "b" => PropertySelector::B,
                "c" => PropertySelector::C,
                "d" => PropertySelector::D,
                "lift" => PropertySelector::Lift,
                other => return Err(format!("unknown property '{other}'")),
            });
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn name(&self) -> &'static str {
        match self {
            PropertySelector::A => "a",
            PropertySelector::B => "b",
            PropertySelector::C => "c",
            PropertySelector::D => "d",
            PropertySelector::Lift => "lift",
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridSpec {
    pub primes: Vec<u32>,
    pub alphas: Vec<u32>,
    pub levels: Vec<u32>,
    pub trunc: u32,
    pub depth: u32,
    pub bound: Option<u64>,
    pub properties: Vec<PropertySelector>,
    pub parallel: bool,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CellReport {
    pub p: u32,
    pub alpha: u32,
    pub n: u32,
    pub reports: Vec<VerificationReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub verified: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub errors: usize,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub cells: Vec<CellReport>,
    pub summary: Summary,
    pub tool_version: String,
    pub params: GridSpec,
}

fn run_cell(p: u32, alpha: u32, n: u32, spec: &GridSpec) -> CellReport {
    let mut cell = CellReport { p, alpha, n, reports: Vec::new(), error: None };
    let ctx = match PrimeContext::new(p, spec.trunc, spec.depth) {
        Ok(c) => c,
        Err(e) => {
            cell.error = Some(e.to_string());
            return cell;
        }
    };
    let tower: GammaTower = match build_tower(ctx, alpha, n) {
        Ok(t) => t,
        Err(e) => {
            cell.error = Some(e.to_string());
            return cell;
        }
    };
    // d and lift share the computation of gamma~; cache the pair
    let mut d_lift_cache: Option<(VerificationReport, VerificationReport)> = None;
    let d_lift = |tower: &GammaTower,
                      cache: &mut Option<(VerificationReport, VerificationReport)>|
     -> Result<(VerificationReport, VerificationReport), qforge_core::Error> {
        if cache.is_none() {
            let (d, l, _) = verify_d_and_lift(tower, n)?;
            *cache = Some((d, l));
        }
        Ok(cache.clone().expect("just filled"))
    };
    for prop in &spec.properties {
        let outcome: Result<Vec<VerificationReport>, qforge_core::Error> = match prop {
            PropertySelector::A => verify_a(&tower, n).map(|r| vec![r]),
            PropertySelector::B => {
                let mut rs = Vec::new();
                let mut err = None;
                for i in 1..n {
                    let bound = match spec.bound {
                        Some(b) => Ok(b),
                        None => default_bound_b(&tower, n, i),
                    };
                    match bound.and_then(|b| verify_b(&tower, n, i, b)) {
                        Ok(r) => rs.push(r),
                        Err(e) => {
                            err = Some(e);
                            break;
                        }
                    }
                }
                match err {
                    Some(e) => Err(e),
                    None => Ok(rs),
                }
            }
            PropertySelector::C => {
                let bound = match spec.bound {
                    Some(b) => Ok(b),
                    None => default_bound_c(&tower, n),
                };
                bound.and_then(|b| verify_c(&tower, n, b)).map(|r| vec![r])
            }
            PropertySelector::D => {
                d_lift(&tower, &mut d_lift_cache).map(|(d, _)| vec![d])
            }
            PropertySelector::Lift => {
                d_lift(&tower, &mut d_lift_cache).map(|(_, l)| vec![l])
            }
        };
        match outcome {
            Ok(rs) => cell.reports.extend(rs),
            Err(e) => {
                cell.error = Some(format!("property {}: {e}", prop.name()));
                break;
            }
        }
    }
    cell
}

/// Execute the grid. Cell order (and output order) is lexicographic in
/// (p, alpha, n) regardless of the parallel flag.
pub fn run_grid(spec: &GridSpec) -> RunReport {
    let mut points: Vec<(u32, u32, u32)> = Vec::new();
    let mut primes = spec.primes.clone();
    let mut alphas = spec.alphas.clone();
    let mut levels = spec.levels.clone();
    primes.sort();
    primes.dedup();
    alphas.sort();
    alphas.dedup();
    levels.sort();
    levels.dedup();
    for &p in &primes {
        for &a in &alphas {
            for &n in &levels {
                points.push((p, a, n));
            }
        }
    }

    let cells: Vec<CellReport> = if spec.parallel {
        let mut slots: Vec<Option<CellReport>> = (0..points.len()).map(|_| None).collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = points
                .iter()
                .map(|&(p, a, n)| scope.spawn(move || run_cell(p, a, n, spec)))
                .collect();
            for (slot, h) in slots.iter_mut().zip(handles) {
                *slot = Some(h.join().expect("cell worker panicked"));
            }
        });
        slots.into_iter().map(|s| s.expect("filled")).collect()
    } else {
        points.iter().map(|&(p, a, n)| run_cell(p, a, n, spec)).collect()
    };

    let mut summary = Summary::default();
    for cell in &cells {
        if cell.error.is_some() {
            summary.errors += 1;
        }
        for r in &cell.reports {
            match r.status {
                VerifyStatus::Verified => summary.verified += 1,
                VerifyStatus::Refuted => summary.refuted += 1,
                VerifyStatus::Inconclusive => summary.inconclusive += 1,
            }
        }
    }
    RunReport {
        cells,
        summary,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        params: spec.clone(),
    }
}

/// Exit code contract: 0 all verified (inconclusive only with the explicit
/// allowance), 1 any refutation, 2 errors or disallowed inconclusives.
pub fn exit_code(report: &RunReport, allow_inconclusive: bool) -> i32 {
    if report.summary.refuted > 0 {
        return 1;
    }
    if report.summary.errors > 0 {
        return 2;
    }
    if report.summary.inconclusive > 0 && !allow_inconclusive {
        return 2;
    }
    0
}

pub fn emit_json(report: &RunReport, print_q: bool) -> Value {
    let cells: Vec<Value> = report
        .cells
        .iter()
        .map(|c| {
            let mut m = serde_json::Map::new();
            m.insert("p".into(), json!(c.p));
            m.insert("alpha".into(), json!(c.alpha));
            m.insert("n".into(), json!(c.n));
            m.insert(
                "reports".into(),
                Value::Array(c.reports.iter().map(|r| verification_json(r, print_q)).collect()),
            );
            if let Some(e) = &c.error {
                m.insert("error".into(), Value::String(e.clone()));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "tool": "qforge",
        "version": report.tool_version,
        "op": "grid",
        "params": {
            "primes": report.params.primes,
            "alphas": report.params.alphas,
            "levels": report.params.levels,
            "trunc": report.params.trunc,
            "depth": report.params.depth,
            "bound": report.params.bound,
            "properties": report.params.properties.iter().map(|p| p.name()).collect::<Vec<_>>(),
            "parallel": report.params.parallel,
            "seed": report.params.seed,
        },
        "cells": cells,
        "summary": {
            "verified": report.summary.verified,
            "refuted": report.summary.refuted,
            "inconclusive": report.summary.inconclusive,
            "errors": report.summary.errors,
        },
    })
}

/// Fixed-width text table, one line per property report.
pub fn emit_text(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "qforge {} grid: trunc={} depth={} properties={}\n",
        report.tool_version,
        report.params.trunc,
        report.params.depth,
        report
            .params
            .properties
            .iter()
            .map(|p| p.name())
            .collect::<Vec<_>>()
            .join(",")
    ));
    out.push_str(&format!(
        "{:<4} {:<6} {:<3} {:<8} {:<13} detail\n",
        "p", "alpha", "n", "prop", "status"
    ));
    for cell in &report.cells {
        if let Some(e) = &cell.error {
            out.push_str(&format!(
                "{:<4} {:<6} {:<3} {:<8} {:<13} {}\n",
                cell.p, cell.alpha, cell.n, "-", "error", e
            ));
        }
        for r in &cell.reports {
            let prop = match r.property {
                Property::A => "a".to_string(),
                Property::B { i } => format!("b(i={i})"),
                Property::C => "c".to_string(),
                Property::D => "d".to_string(),
                Property::Lift => "lift".to_string(),
            };
            out.push_str(&format!(
                "{:<4} {:<6} {:<3} {:<8} {:<13} {}\n",
                cell.p,
                cell.alpha,
                cell.n,
                prop,
                status_string(r.status),
                r.detail
            ));
        }
    }
    out.push_str(&format!(
        "summary: verified={} refuted={} inconclusive={} errors={}\n",
        report.summary.verified,
        report.summary.refuted,
        report.summary.inconclusive,
        report.summary.errors
    ));
    out
}
