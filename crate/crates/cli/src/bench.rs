//! Benchmark grids: run an algorithm over every (n, M, B, seed) point, write
//! one CSV row per run and fit miss counts against each axis.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::{bail, Context, Result};
use iomodel::fit::{loglog_fit, Fit};
use iomodel::harness::{bench_instance, measure};
use iomodel::Mode;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const HEADER: &str = "algo,n,M,B,seed,misses,writebacks,logical_accesses,answer_digest";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchPlan {
    pub algo: String,
    pub n: Vec<usize>,
    #[serde(rename = "M")]
    pub m: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    pub seeds: u64,
    #[serde(default)]
    pub first_seed: u64,
    #[serde(default)]
    pub mode: Option<Mode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algo: String,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub seed: u64,
    pub misses: u64,
    pub writebacks: u64,
    pub logical_accesses: u64,
    pub answer_digest: String,
}

impl BenchPlan {
    fn points(&self) -> Vec<(usize, usize, usize, u64)> {
        let mut pts = Vec::new();
        for &n in &self.n {
            for &m in &self.m {
                for &b in &self.b {
                    for s in 0..self.seeds {
                        pts.push((n, m, b, self.first_seed + s));
                    }
                }
            }
        }
        pts
    }
}

/// Every point is run; any point whose configuration or instance is
/// rejected fails the whole plan with all such points listed.
pub fn run(plan: &BenchPlan) -> Result<Vec<BenchRow>> {
    if plan.n.is_empty() || plan.m.is_empty() || plan.b.is_empty() || plan.seeds == 0 {
        bail!("bench plan needs at least one n, M, B and seed");
    }
    let results: Vec<_> = plan
        .points()
        .into_par_iter()
        .map(|(n, m, b, seed)| {
            let run = bench_instance(&plan.algo, n, seed).and_then(|inst| measure(&plan.algo, m, b, plan.mode, &inst));
            (n, m, b, seed, run)
        })
        .collect();
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for (n, m, b, seed, r) in results {
        match r {
            Ok(meas) => rows.push(BenchRow {
                algo: plan.algo.clone(),
                n,
                m,
                b,
                seed,
                misses: meas.stats.misses,
                writebacks: meas.stats.writebacks,
                logical_accesses: meas.stats.logical_accesses,
                answer_digest: meas.answer.digest(),
            }),
            Err(e) => bad.push(format!("n={n} M={m} B={b} seed={seed}: {e}")),
        }
    }
    if !bad.is_empty() {
        bail!("{} grid point(s) rejected:\n  {}", bad.len(), bad.join("\n  "));
    }
    rows.sort_by_key(|x| (x.n, x.m, x.b, x.seed));
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().context("writing CSV")?;
    Ok(())
}

/// Slope of mean misses against one axis for one setting of the others.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisFit {
    pub axis: &'static str,
    pub fixed: String,
    pub fit: Option<Fit>,
}

pub fn fits(rows: &[BenchRow]) -> Vec<AxisFit> {
    let mut mean: BTreeMap<(usize, usize, usize), (f64, usize)> = BTreeMap::new();
    for r in rows {
        let e = mean.entry((r.n, r.m, r.b)).or_insert((0.0, 0));
        e.0 += r.misses as f64;
        e.1 += 1;
    }
    let mean: BTreeMap<(usize, usize, usize), f64> = mean.into_iter().map(|(k, (s, c))| (k, s / c as f64)).collect();
    let mut out = Vec::new();
    for axis in ["n", "M", "B"] {
        let mut groups: BTreeMap<(usize, usize), Vec<(f64, f64)>> = BTreeMap::new();
        for (&(n, m, b), &y) in &mean {
            let (x, key) = match axis {
                "n" => (n, (m, b)),
                "M" => (m, (n, b)),
                _ => (b, (n, m)),
            };
            groups.entry(key).or_default().push((x as f64, y));
        }
        for ((p, q), pts) in groups {
            let fixed = match axis {
                "n" => format!("M={p}, B={q}"),
                "M" => format!("n={p}, B={q}"),
                _ => format!("n={p}, M={q}"),
            };
            let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            let fit = if xs.len() >= 2 { loglog_fit(&xs, &ys).ok() } else { None };
            out.push(AxisFit { axis, fixed, fit });
        }
    }
    out
}

pub fn render_fits(fits: &[AxisFit]) -> String {
    let mut s = String::new();
    for f in fits {
        match &f.fit {
            Some(fit) => s.push_str(&format!("slope vs {} ({}): {}\n", f.axis, f.fixed, fit)),
            None => s.push_str(&format!("slope vs {} ({}): skipped, one point on this axis\n", f.axis, f.fixed)),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_grid_is_linear_in_n() {
        let plan = BenchPlan {
            algo: "scan".into(),
            n: vec![1024, 2048, 4096, 8192],
            m: vec![256],
            b: vec![16],
            seeds: 2,
            first_seed: 0,
            mode: None,
        };
        let rows = run(&plan).unwrap();
        assert_eq!(rows.len(), 8);
        let f = fits(&rows);
        let n_fit = f.iter().find(|a| a.axis == "n").unwrap().fit.unwrap();
        assert!((n_fit.slope - 1.0).abs() < 0.05, "{n_fit}");
        assert!(f.iter().filter(|a| a.axis == "M").all(|a| a.fit.is_none()));
    }
}
