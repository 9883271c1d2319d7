//! Acceptance run: each criterion prints one PASS or FAIL line with its
//! measured values and wall time. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use iomodel::algos::apsp_repeated_squaring;
use iomodel::fit::loglog_fit;
use iomodel::formats::Instance;
use iomodel::gen;
use iomodel::harness::{bench_instance, measure, random_instance, run_oracle, OracleCost, ALGORITHMS, BENCH_DIM};
use iomodel::oracles;
use iomodel::recurrence::{classify, parse_recurrence, slope_check, CORPUS};
use iomodel::reductions::Ctx;
use iomodel::verify::{expected_answer, random_case, run_reduction, verify, Case, Solvers, REDUCTIONS};
use iomodel::{Machine, MachineConfig};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Mean misses over `seeds` worst-case instances at one grid point.
fn mean_misses(algo: &str, n: usize, m: usize, b: usize, seeds: u64) -> Result<f64, String> {
    let mut total = 0.0;
    for seed in 0..seeds {
        let inst = bench_instance(algo, n, seed).map_err(err)?;
        total += measure(algo, m, b, None, &inst).map_err(err)?.stats.misses as f64;
    }
    Ok(total / seeds as f64)
}

/// Log-log slope of misses over (x, n, M, B) points. Every axis gets at
/// least four points.
fn slope(algo: &str, pts: &[(f64, usize, usize, usize)], seeds: u64) -> Result<f64, String> {
    assert!(pts.len() >= 4, "{algo}: fit needs four points");
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(x, n, m, b) in pts {
        xs.push(x);
        ys.push(mean_misses(algo, n, m, b, seeds)?);
    }
    Ok(loglog_fit(&xs, &ys).map_err(err)?.slope)
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<String, String> {
    let s = format!("{name} {got:.3} (want {want:.3} ± {tol})");
    if (got - want).abs() <= tol {
        Ok(s)
    } else {
        Err(s)
    }
}

fn scan_is_exact() -> Outcome {
    let ns = [1, 7, 64, 100, 999, 1000, 4097, 10_000, 65_536, 100_003];
    let mb = [(64, 1), (64, 4), (256, 8), (1024, 16), (4096, 64)];
    let mut points = 0;
    for (i, &n) in ns.iter().enumerate() {
        let inst = Instance::Words { a: gen::random_words(n, -100, 100, i as u64) };
        for &(m, b) in &mb {
            let got = measure("scan", m, b, None, &inst).map_err(err)?.stats.misses;
            let want = n.div_ceil(b) as u64;
            ensure(got == want, || format!("n={n} M={m} B={b}: {got} misses, want {want}"))?;
            points += 1;
        }
    }
    Ok(format!("{points} grid points, misses = ceil(n/B) at each"))
}

fn algorithms_match_oracles() -> Outcome {
    let configs = [(256, 8), (1024, 16), (4096, 32)];
    let mut runs = 0;
    for spec in ALGORITHMS {
        let sizes: &[usize] = match spec.oracle {
            OracleCost::Linear => &[16, 256, 4096],
            OracleCost::Quadratic => &[16, 64, 256],
            OracleCost::Cubic => &[8, 16, 32],
        };
        for &n in sizes {
            for seed in 0..100u64 {
                let inst = random_instance(spec.name, n, seed).map_err(err)?;
                let (m, b) = configs[(seed % 3) as usize];
                let got = measure(spec.name, m, b, None, &inst).map_err(err)?.answer;
                let want = run_oracle(spec.name, &inst).map_err(err)?;
                ensure(got == want, || format!("{} n={n} seed={seed}: got {got}, oracle {want}", spec.name))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{} algorithms, {runs} instances agree with their oracles", ALGORITHMS.len()))
}

fn reductions_verify() -> Outcome {
    let mut cases = 0;
    let names: Vec<_> = REDUCTIONS.iter().filter(|r| !r.control).map(|r| r.name).collect();
    for name in &names {
        let r = verify(name, &[6, 10, 14], 100, 7, true).map_err(err)?;
        ensure(r.passed, || format!("{name} fails: {:?}", r.counterexample))?;
        cases += r.randomized + r.exhaustive;
    }
    Ok(format!("{} reductions, {cases} cases", names.len()))
}

fn ov_slopes() -> Outcome {
    let d = BENCH_DIM;
    for &(n, m, b) in &[(1024, 1024, 16), (2048, 2048, 16), (2048, 1024, 32)] {
        ensure(n * n * d >= 16 * m * b, || format!("n={n} M={m} B={b} is below n^2 d >= 16MB"))?;
    }
    let sn = slope("ov_recursive", &[(1024.0, 1024, 1024, 16), (2048.0, 2048, 1024, 16), (4096.0, 4096, 1024, 16), (8192.0, 8192, 1024, 16)], 2)?;
    let sm = slope("ov_recursive", &[(256.0, 2048, 256, 16), (512.0, 2048, 512, 16), (1024.0, 2048, 1024, 16), (2048.0, 2048, 2048, 16)], 2)?;
    let sb = slope("ov_recursive", &[(4.0, 2048, 1024, 4), (8.0, 2048, 1024, 8), (16.0, 2048, 1024, 16), (32.0, 2048, 1024, 32)], 2)?;
    Ok([within("n", sn, 2.0, 0.15)?, within("M", sm, -1.0, 0.15)?, within("B", sb, -1.0, 0.15)?].join(", "))
}

fn cubic_slopes() -> Outcome {
    let mut out = Vec::new();
    for algo in ["minplus_blocked", "zero_triangle_blocked"] {
        let sn = slope(algo, &[(128.0, 128, 64, 8), (256.0, 256, 64, 8), (512.0, 512, 64, 8), (1024.0, 1024, 64, 8)], 1)?;
        let sm = slope(algo, &[(64.0, 1024, 64, 8), (256.0, 1024, 256, 8), (1024.0, 1024, 1024, 8), (4096.0, 1024, 4096, 8)], 1)?;
        out.push(format!("{algo}: {}, {}", within("n", sn, 3.0, 0.2)?, within("M", sm, -0.5, 0.15)?));
    }
    Ok(out.join("; "))
}

fn diameter_slopes() -> Outcome {
    let algo = "diameter_2v3_cache_aware";
    let edges = |n: usize| -> Result<f64, String> {
        match bench_instance(algo, n, 0).map_err(err)? {
            Instance::Graph(g) => Ok(g.m() as f64),
            _ => Err("not a graph".into()),
        }
    };
    let mut pts = Vec::new();
    for n in [2048, 4096, 8192, 16384] {
        let e = edges(n)?;
        ensure(e == 4.0 * n as f64, || format!("|V|={n} has {e} edges, want 4|V|"))?;
        ensure(e * e >= 32.0 * 2048.0 * 8.0, || format!("|E|={e} is below |E|^2 >= 32MB"))?;
        pts.push((e, n, 256, 8));
    }
    let se = slope(algo, &pts, 1)?;
    let sm = slope(algo, &[(256.0, 8192, 256, 8), (512.0, 8192, 512, 8), (1024.0, 8192, 1024, 8), (2048.0, 8192, 2048, 8)], 1)?;
    let mut agreed = 0;
    for n in [16, 64, 256] {
        for seed in 0..30 {
            let inst = random_instance(algo, n, seed).map_err(err)?;
            let got = measure(algo, 256, 8, None, &inst).map_err(err)?.answer;
            let want = run_oracle(algo, &inst).map_err(err)?;
            ensure(got == want, || format!("n={n} seed={seed}: got {got}, BFS says {want}"))?;
            agreed += 1;
        }
    }
    for n in [4096, 8192] {
        let inst = bench_instance(algo, n, 0).map_err(err)?;
        let got = measure(algo, 256, 8, None, &inst).map_err(err)?.answer;
        let want = run_oracle(algo, &inst).map_err(err)?;
        ensure(got == want, || format!("sparse n={n}: got {got}, BFS says {want}"))?;
        agreed += 1;
    }
    Ok(format!("{}, {}, {agreed} classifications agree with BFS", within("|E|", se, 2.0, 0.25)?, within("M", sm, -1.0, 0.25)?))
}

fn recurrence_corpus() -> Outcome {
    ensure(CORPUS.len() >= 12, || format!("corpus has {} entries", CORPUS.len()))?;
    let mut worst: f64 = 0.0;
    for src in CORPUS {
        let spec = parse_recurrence(src).map_err(err)?;
        let res = classify(&spec).map_err(err)?;
        for a in slope_check(&spec, &res.bound, 2f64.powi(40), 65536.0, 16.0, 4).map_err(err)? {
            ensure(a.gap() <= 0.1, || {
                format!("{src}: slope vs {} bound {:.3} unrolled {:.3}", a.axis, a.bound, a.unrolled)
            })?;
            worst = worst.max(a.gap());
        }
    }
    Ok(format!("{} recurrences, largest slope gap {worst:.4}", CORPUS.len()))
}

fn strassen() -> Outcome {
    let algo = "mm_strassen";
    let l7 = 7f64.log2();
    let sn = slope(algo, &[(64.0, 64, 256, 8), (128.0, 128, 256, 8), (256.0, 256, 256, 8), (512.0, 512, 256, 8)], 1)?;
    let sm = slope(algo, &[(64.0, 512, 64, 8), (256.0, 512, 256, 8), (1024.0, 512, 1024, 8), (4096.0, 512, 4096, 8)], 1)?;
    let inst = random_instance(algo, 64, 1).map_err(err)?;
    let h1 = measure(algo, 256, 8, None, &inst).map_err(err)?.trace_hash;
    let h2 = measure(algo, 4096, 32, None, &inst).map_err(err)?.trace_hash;
    ensure(h1 == h2, || format!("trace hash differs across (M,B): {h1:x} vs {h2:x}"))?;
    Ok(format!("{}, {}, trace hash {h1:016x} at both (M,B)", within("n", sn, l7, 0.1)?, within("M", sm, -(l7 / 2.0 - 1.0), 0.1)?))
}

fn call_budgets() -> Outcome {
    let r = verify("wiener_subset_sum", &[6, 10, 14], 100, 3, true).map_err(err)?;
    ensure(r.passed && r.max_calls == 4 && r.mean_calls == 4.0, || {
        format!("wiener_subset_sum: max {} mean {} calls", r.max_calls, r.mean_calls)
    })?;

    for n in 2..=40usize {
        let g = gen::gnp_weighted(n, 0.3, true, 1, 9, n as u64);
        let mut m = Machine::new(MachineConfig::explicit(1024, 16).map_err(err)?);
        let res = apsp_repeated_squaring(&mut m, &g).map_err(err)?;
        let want = ((n - 1) as f64).log2().ceil() as usize;
        ensure(res.squarings == want, || format!("apsp n={n}: {} squarings, want {want}", res.squarings))?;
        let d = oracles::distances(&g).map_err(err)?;
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                ensure(res.dist.get(i, j) == x, || format!("apsp n={n}: wrong distance {i}->{j}"))?;
            }
        }
    }

    let name = "girth_vertex_via_stsp_undirected";
    let mut checked = 0;
    for n in [6, 10, 14, 24] {
        for seed in 0..100 {
            let c = random_case(name, n, seed).map_err(err)?;
            let Instance::Graph(g) = &c.instance else { return Err("not a graph".into()) };
            let v = c.params.node.unwrap_or(0);
            let deg = g.edges().iter().filter(|e| e.u == v || e.v == v).count();
            let mut cx = Ctx::new();
            run_reduction(&mut cx, name, &c.instance, &c.params, Solvers::Oracle).map_err(err)?;
            let budget = if deg < 2 { 0 } else { (deg as f64).log2().ceil() as usize };
            ensure(cx.calls() <= budget, || format!("n={n} seed={seed}: {} calls for degree {deg}", cx.calls()))?;
            checked += 1;
        }
    }
    Ok(format!("subset Wiener 4 calls, apsp squarings n=2..40, girth-vertex within budget on {checked} cases"))
}

fn controls_caught() -> Outcome {
    let mut out = Vec::new();
    for r in REDUCTIONS.iter().filter(|r| r.control) {
        let rep = verify(r.name, &[6, 10, 14], 100, 11, true).map_err(err)?;
        let cex = rep.counterexample.ok_or_else(|| format!("{} passed verification", r.name))?;
        let json = serde_json::to_string(&cex.case).map_err(err)?;
        let case: Case = serde_json::from_str(&json).map_err(err)?;
        let got = run_reduction(&mut Ctx::new(), r.name, &case.instance, &case.params, Solvers::Oracle).map_err(err)?;
        let want = expected_answer(r.name, &case.instance, &case.params).map_err(err)?;
        ensure(got != want, || format!("{}: replayed counterexample no longer fails", r.name))?;
        out.push(format!("{} ({} bytes, got {got} want {want})", r.name, json.len()));
    }
    ensure(out.len() == 3, || format!("{} controls, want 3", out.len()))?;
    Ok(out.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("cold scan costs ceil(n/B)", Duration::from_secs(1), scan_is_exact),
        ("algorithms agree with oracles", Duration::from_secs(300), algorithms_match_oracles),
        ("reductions verify", Duration::from_secs(600), reductions_verify),
        ("OV miss slopes", Duration::MAX, ov_slopes),
        ("blocked cubic miss slopes", Duration::MAX, cubic_slopes),
        ("sparse 2v3 diameter slopes", Duration::MAX, diameter_slopes),
        ("recurrence corpus slopes", Duration::MAX, recurrence_corpus),
        ("Strassen slopes and trace", Duration::MAX, strassen),
        ("solver call budgets", Duration::MAX, call_budgets),
        ("broken reductions caught", Duration::MAX, controls_caught),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut res = f();
        let took = t.elapsed();
        if res.is_ok() && took > *limit {
            res = Err(format!("took {took:.2?}, limit {limit:?}"));
        }
        match res {
            Ok(s) => println!("PASS {:>2} {name}: {s} [{took:.2?}]", i + 1),
            Err(s) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {s} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
