//! Divide-and-conquer recurrences `T(n) = α T(n/β) + f(n, M, B)` with base
//! `T(x) = t(x, M, B)`: symbolic case analysis plus a numeric unroller to check
//! it against.
//!
//! Asymptotic comparisons substitute `M = n^μ`, `B = n^χ` and look at the
//! exponent of `n` over the triangle `0 ≤ χ`, `2χ ≤ μ ≤ 1` (tall cache, input
//! at least cache-sized). Exponent differences are linear in (μ, χ), so it is
//! enough to check the three corners.

mod expr;
mod parse;

pub use expr::{CostExpr, LogKind, Monomial};
pub use parse::{parse_cost, parse_recurrence};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EPS: f64 = 1e-9;

/// Corners of the (μ, χ) region.
pub const VERTICES: [(f64, f64); 3] = [(0.0, 0.0), (1.0, 0.0), (1.0, 0.5)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Greater,
    Less,
    Equal,
    Incomparable,
}

/// Compare two monomials over the whole region. `Greater` needs a strictly
/// larger exponent at every corner; identical exponents fall back to the log
/// factors.
pub fn dominates(a: &Monomial, b: &Monomial) -> Order {
    let gaps = VERTICES.map(|(mu, chi)| a.exponent_at(mu, chi) - b.exponent_at(mu, chi));
    if gaps.iter().all(|&g| g > EPS) {
        Order::Greater
    } else if gaps.iter().all(|&g| g < -EPS) {
        Order::Less
    } else if gaps.iter().all(|&g| g.abs() <= EPS) {
        match a.logs.cmp(&b.logs) {
            std::cmp::Ordering::Greater => Order::Greater,
            std::cmp::Ordering::Less => Order::Less,
            std::cmp::Ordering::Equal => Order::Equal,
        }
    } else {
        Order::Incomparable
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BaseScale {
    M,
    SqrtM,
    Const(f64),
}

impl BaseScale {
    /// x as a monomial in M.
    pub fn monomial(self) -> Monomial {
        match self {
            BaseScale::M => Monomial::new(1.0, 0.0, 1.0, 0.0),
            BaseScale::SqrtM => Monomial::new(1.0, 0.0, 0.5, 0.0),
            BaseScale::Const(c) => Monomial::constant(c),
        }
    }

    pub fn value(self, m: f64) -> f64 {
        match self {
            BaseScale::M => m,
            BaseScale::SqrtM => m.sqrt(),
            BaseScale::Const(c) => c,
        }
    }

    /// Exponent of n in n/x at μ.
    fn ratio_exponent(self, mu: f64) -> f64 {
        match self {
            BaseScale::M => 1.0 - mu,
            BaseScale::SqrtM => 1.0 - mu / 2.0,
            BaseScale::Const(_) => 1.0,
        }
    }

    fn log_kind(self) -> LogKind {
        match self {
            BaseScale::M => LogKind::NOverM,
            BaseScale::SqrtM => LogKind::NOverSqrtM,
            BaseScale::Const(_) => LogKind::N,
        }
    }
}

impl fmt::Display for BaseScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseScale::M => write!(f, "M"),
            BaseScale::SqrtM => write!(f, "sqrtM"),
            BaseScale::Const(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    pub alpha: f64,
    pub beta: f64,
    pub f: CostExpr,
    pub base: BaseScale,
    pub base_cost: CostExpr,
}

impl RecurrenceSpec {
    pub fn new(alpha: f64, beta: f64, f: CostExpr, base: BaseScale, base_cost: CostExpr) -> Result<Self> {
        if alpha < 1.0 || beta <= 1.0 {
            return Err(Error::Precondition(format!("need α ≥ 1 and β > 1 (got α={alpha}, β={beta})")));
        }
        Ok(RecurrenceSpec { alpha, beta, f, base, base_cost })
    }

    /// log_β α
    pub fn critical_exponent(&self) -> f64 {
        self.alpha.ln() / self.beta.ln()
    }

    /// The leaf cost `(n/x)^{log_β α} · t(x)`.
    pub fn leaf_cost(&self) -> CostExpr {
        let x = self.base.monomial();
        let l = self.critical_exponent();
        let scale = Monomial::new(1.0, l, 0.0, 0.0).mul(&x.pow(-l));
        // t evaluated at n = x
        let t_at_x = CostExpr::new(self.base_cost.terms().iter().map(|t| {
            let mut s = t.mul(&x.pow(t.n));
            s.n = 0.0;
            s
        }));
        t_at_x.mul_mono(&scale)
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T(n)={}T(n/{})+{}; base({})={}",
            self.alpha, self.beta, self.f, self.base, self.base_cost
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tightness {
    Theta,
    BigO,
}

/// Which branch of case 4 applied, by comparing α with f′(β).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case4Sub {
    Greater,
    Equal,
    Less,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub case: u8,
    pub bound: CostExpr,
    pub tightness: Tightness,
    pub subcase: Option<Case4Sub>,
}

impl fmt::Display for SolveResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.tightness {
            Tightness::Theta => "Θ",
            Tightness::BigO => "O",
        };
        write!(f, "Case {}", self.case)?;
        if let Some(s) = self.subcase {
            let tag = match s {
                Case4Sub::Greater => ">1",
                Case4Sub::Equal => "=1",
                Case4Sub::Less => "<1",
            };
            write!(f, " (α/f′(β) {tag})")?;
        }
        write!(f, ", {sym}({})", self.bound)
    }
}

fn n_over_b() -> Monomial {
    Monomial::new(1.0, 1.0, 0.0, -1.0)
}

/// `small · (n/x)^ε ≤ big` for some ε > 0 across the region (strict), or
/// `small ≤ big` (non-strict).
fn below(small: &Monomial, big: &Monomial, base: BaseScale, strict: bool) -> bool {
    VERTICES.iter().all(|&(mu, chi)| {
        let gap = big.exponent_at(mu, chi) - small.exponent_at(mu, chi);
        if gap < -EPS {
            return false;
        }
        !(strict && base.ratio_exponent(mu) > EPS && gap <= EPS)
    })
}

fn same_growth(a: &Monomial, b: &Monomial) -> bool {
    VERTICES
        .iter()
        .all(|&(mu, chi)| (a.exponent_at(mu, chi) - b.exponent_at(mu, chi)).abs() <= EPS)
        && a.logs == b.logs
}

/// Terms of `e` not dominated by any other term. Ties keep the larger
/// n-exponent first.
pub fn dominant_terms(e: &CostExpr) -> Vec<Monomial> {
    let ts = e.terms();
    let mut out: Vec<Monomial> = ts
        .iter()
        .filter(|a| !ts.iter().any(|b| dominates(b, a) == Order::Greater))
        .cloned()
        .collect();
    out.sort_by(|a, b| b.n.total_cmp(&a.n));
    out
}

fn check_monotone(f: &CostExpr) -> Result<()> {
    if f.is_zero() {
        return Err(Error::Precondition("f is empty".into()));
    }
    if let Some(t) = f.terms().iter().find(|t| t.n < -EPS || t.coef < 0.0) {
        return Err(Error::Precondition(format!("f is not non-decreasing in n (term {t})")));
    }
    Ok(())
}

/// Decide which of the four cases applies and return its bound (always
/// carrying the `n/B` input-reading term).
pub fn classify(spec: &RecurrenceSpec) -> Result<SolveResult> {
    check_monotone(&spec.f)?;
    let a = spec.leaf_cost();
    let f = &spec.f;
    let nb = CostExpr::mono(n_over_b());
    let base = spec.base;

    let case1 = f.terms().iter().all(|fi| a.terms().iter().any(|aj| below(fi, aj, base, true)));
    if case1 {
        return Ok(SolveResult { case: 1, bound: a.add(&nb).unit_coefficients(), tightness: Tightness::Theta, subcase: None });
    }

    let (sub, _) = ratio_branch(spec);
    let case2 = f.terms().iter().any(|fi| a.terms().iter().all(|aj| below(aj, fi, base, true)));
    if case2 && sub == Case4Sub::Less {
        return Ok(SolveResult { case: 2, bound: f.add(&nb).unit_coefficients(), tightness: Tightness::Theta, subcase: None });
    }

    let all_below = f.terms().iter().all(|fi| a.terms().iter().any(|aj| below(fi, aj, base, false)));
    let some_equal = f.terms().iter().any(|fi| a.terms().iter().any(|aj| same_growth(fi, aj)));
    if all_below && some_equal {
        let log = Monomial::constant(1.0).with_log(base.log_kind(), 1);
        return Ok(SolveResult {
            case: 3,
            bound: a.mul_mono(&log).add(&nb).unit_coefficients(),
            tightness: Tightness::Theta,
            subcase: None,
        });
    }

    let (sub, bound) = case4_bound(spec)?;
    Ok(SolveResult { case: 4, bound, tightness: Tightness::BigO, subcase: Some(sub) })
}

/// α against f′(β) = β^{p*}, with p* the n-exponent of the leading term of f.
fn ratio_branch(spec: &RecurrenceSpec) -> (Case4Sub, f64) {
    let p_star = dominant_terms(&spec.f).first().map_or(0.0, |t| t.n);
    let ratio = spec.alpha / spec.beta.powf(p_star);
    let sub = if ratio > 1.0 + EPS {
        Case4Sub::Greater
    } else if ratio < 1.0 - EPS {
        Case4Sub::Less
    } else {
        Case4Sub::Equal
    };
    (sub, p_star)
}

/// The per-branch case-4 bound, regardless of whether an earlier case applies.
pub fn case4_bound(spec: &RecurrenceSpec) -> Result<(Case4Sub, CostExpr)> {
    check_monotone(&spec.f)?;
    let a = spec.leaf_cost();
    let f = &spec.f;
    let nb = CostExpr::mono(n_over_b());
    let (sub, p_star) = ratio_branch(spec);
    let extra = match sub {
        Case4Sub::Greater => {
            let e = spec.critical_exponent() - p_star;
            let growth = Monomial::new(1.0, e, 0.0, 0.0).mul(&spec.base.monomial().pow(-e));
            f.mul_mono(&growth)
        }
        Case4Sub::Equal => f.mul_mono(&Monomial::constant(1.0).with_log(spec.base.log_kind(), 1)),
        Case4Sub::Less => CostExpr::default(),
    };
    Ok((sub, a.add(&extra).add(f).add(&nb).unit_coefficients()))
}

/// `g(n/M) · T(M, M, B) + f`, where `g` is written in terms of n (standing for
/// n/M) and `per` in terms of n (evaluated at n = M).
pub fn solve_one_layer(g: &CostExpr, per: &CostExpr, f: &CostExpr) -> Result<CostExpr> {
    let nb = n_over_b();
    let covers_input = f.terms().iter().any(|t| {
        VERTICES.iter().all(|&(mu, chi)| t.exponent_at(mu, chi) - nb.exponent_at(mu, chi) >= -EPS)
    });
    if !covers_input {
        return Err(Error::Precondition("overhead f must be Ω(n/B)".into()));
    }
    let m = Monomial::new(1.0, 0.0, 1.0, 0.0);
    let count = g.subst_n_over(&m);
    let per_at_m = CostExpr::new(per.terms().iter().map(|t| {
        let mut s = t.mul(&m.pow(t.n));
        s.n = 0.0;
        s
    }));
    Ok(count.mul(&per_at_m).add(f))
}

/// Evaluate the recurrence directly with real-valued n/β until n ≤ x.
pub fn numeric_unroll(spec: &RecurrenceSpec, n: f64, m: f64, b: f64) -> f64 {
    let x = spec.base.value(m);
    let mut size = n;
    let mut mult = 1.0;
    let mut total = 0.0;
    while size > x * (1.0 + 1e-12) {
        total += mult * spec.f.eval(size, m, b);
        mult *= spec.alpha;
        size /= spec.beta;
    }
    total + mult * spec.base_cost.eval(size, m, b)
}


/// Recurrences covering every case of the solver, used by tests and the
/// acceptance run.
pub const CORPUS: &[&str] = &[
    "T(n)=4T(n/2)+n/B; base(M)=M/B",
    "T(n)=8T(n/2)+n^2/B; base(sqrtM)=M/B",
    "T(n)=7T(n/2)+n^2/B; base(sqrtM)=M/B",
    "T(n)=2T(n/2)+n/B; base(M)=M/B",
    "T(n)=2T(n/2)+n^2/B; base(M)=M/B",
    "T(n)=3T(n/2)+n/B; base(M)=M/B",
    "T(n)=2T(n/4)+n/B; base(M)=M/B",
    "T(n)=4T(n/2)+n^2/B; base(M)=M/B",
    "T(n)=8T(n/2)+n^3/B; base(sqrtM)=M/B",
    "T(n)=16T(n/2)+n^2/B; base(sqrtM)=M/B",
    "T(n)=T(n/2)+n/B; base(M)=M/B",
    "T(n)=8T(n/2)+n^2/B; base(M)=M/B",
    "T(n)=4T(n/2)+n^2/(M*B); base(M)=M/B",
    "T(n)=2T(n/2)+1; base(M)=M/B",
];

/// Log–log slopes of a bound and of the unrolled recurrence along one axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisSlope {
    pub axis: char,
    pub bound: f64,
    pub unrolled: f64,
}

impl AxisSlope {
    pub fn gap(&self) -> f64 {
        (self.bound - self.unrolled).abs()
    }
}

/// Fit both `bound` and [`numeric_unroll`] along n, M and B, doubling each
/// axis `steps` times from (n, M, B) with the other two held fixed.
pub fn slope_check(spec: &RecurrenceSpec, bound: &CostExpr, n: f64, m: f64, b: f64, steps: u32) -> Result<Vec<AxisSlope>> {
    let mut out = Vec::new();
    for axis in ['n', 'M', 'B'] {
        let pts: Vec<(f64, f64, f64)> = (0..=steps)
            .map(|i| {
                let f = 2f64.powi(i as i32);
                match axis {
                    'n' => (n * f, m, b),
                    'M' => (n, m * f, b),
                    _ => (n, m, b * f),
                }
            })
            .collect();
        let xs: Vec<f64> = pts.iter().map(|&(pn, pm, pb)| match axis {
            'n' => pn,
            'M' => pm,
            _ => pb,
        }).collect();
        let by: Vec<f64> = pts.iter().map(|&(pn, pm, pb)| bound.eval(pn, pm, pb)).collect();
        let uy: Vec<f64> = pts.iter().map(|&(pn, pm, pb)| numeric_unroll(spec, pn, pm, pb)).collect();
        out.push(AxisSlope {
            axis,
            bound: crate::fit::loglog_fit(&xs, &by)?.slope,
            unrolled: crate::fit::loglog_fit(&xs, &uy)?.slope,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(n: f64, m: f64, b: f64) -> Monomial {
        Monomial::new(1.0, n, m, b)
    }

    fn spec(alpha: f64, beta: f64, f: Monomial, base: BaseScale) -> RecurrenceSpec {
        RecurrenceSpec::new(alpha, beta, CostExpr::mono(f), base, CostExpr::mono(mono(0.0, 1.0, -1.0))).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(dominates(&mono(3.0, -0.5, -1.0), &mono(2.0, 0.0, -1.0)), Order::Greater);
        assert_eq!(dominates(&mono(2.0, -1.0, -1.0), &mono(2.0, -1.0, -1.0)), Order::Equal);
        assert_eq!(dominates(&mono(1.0, 0.0, -1.0), &mono(2.0, -1.0, -1.0)), Order::Incomparable);
    }

    #[test]
    fn ov_is_case_1() {
        let r = classify(&spec(4.0, 2.0, mono(1.0, 0.0, -1.0), BaseScale::M)).unwrap();
        assert_eq!(r.case, 1);
        assert_eq!(r.bound.to_string(), "n^2/(M·B) + n/B");
    }

    #[test]
    fn scan_recurrence_is_case_3() {
        let r = classify(&spec(2.0, 2.0, mono(1.0, 0.0, -1.0), BaseScale::M)).unwrap();
        assert_eq!(r.case, 3);
        assert_eq!(r.bound.to_string(), "n·log(n/M)/B + n/B");
    }

    #[test]
    fn quadratic_overhead_is_case_2() {
        let r = classify(&spec(2.0, 2.0, mono(2.0, 0.0, -1.0), BaseScale::M)).unwrap();
        assert_eq!(r.case, 2);
    }

    #[test]
    fn classical_mm_bound() {
        let s = spec(8.0, 2.0, mono(2.0, 0.0, -1.0), BaseScale::SqrtM);
        let r = classify(&s).unwrap();
        assert_eq!(r.bound.to_string(), "n^3/(√M·B) + n/B");
        let (sub, b4) = case4_bound(&s).unwrap();
        assert_eq!(sub, Case4Sub::Greater);
        assert_eq!(b4.to_string(), "n^3/(√M·B) + n^2/B + n/B");
    }

    #[test]
    fn equal_branch() {
        let r = classify(&spec(4.0, 2.0, mono(2.0, 0.0, -1.0), BaseScale::M)).unwrap();
        assert_eq!(r.case, 4);
        assert_eq!(r.subcase, Some(Case4Sub::Equal));
    }

    #[test]
    fn non_monotone_rejected() {
        let s = spec(2.0, 2.0, mono(-1.0, 0.0, 0.0), BaseScale::M);
        assert!(matches!(classify(&s), Err(Error::Precondition(_))));
    }

    #[test]
    fn unroll_examples() {
        let ov = spec(4.0, 2.0, mono(1.0, 0.0, -1.0), BaseScale::M);
        assert_eq!(numeric_unroll(&ov, 1024.0, 1024.0, 16.0), 64.0);
        assert_eq!(numeric_unroll(&ov, 2048.0, 1024.0, 16.0), 6.0 * 64.0);
        let mm = spec(8.0, 2.0, mono(2.0, 0.0, -1.0), BaseScale::SqrtM);
        let (m, b): (f64, f64) = (4096.0, 16.0);
        let n = 4.0 * m.sqrt() * 64.0;
        let r = numeric_unroll(&mm, 2.0 * n, m, b) / numeric_unroll(&mm, n, m, b);
        assert!((r - 8.0).abs() < 0.8, "{r}");
    }

    #[test]
    fn one_layer_examples() {
        let f = CostExpr::mono(mono(1.0, 0.0, -1.0));
        let per = CostExpr::mono(mono(0.0, 1.0, -1.0));
        let sq = solve_one_layer(&CostExpr::mono(mono(2.0, 0.0, 0.0)), &per, &f).unwrap();
        assert_eq!(sq.to_string(), "n^2/(M·B) + n/B");
        let cube = solve_one_layer(&CostExpr::mono(mono(3.0, 0.0, 0.0)), &per, &f).unwrap();
        assert_eq!(cube.to_string(), "n^3/(M^2·B) + n/B");
        let one = solve_one_layer(&CostExpr::mono(Monomial::constant(1.0)), &per, &f).unwrap();
        assert_eq!(one.to_string(), "n/B + M/B");
        let bad = solve_one_layer(&per, &per, &CostExpr::mono(mono(0.0, 0.0, 0.0)));
        assert!(bad.is_err());
    }
}
