//! Sums of monomials `c · n^p · M^q · B^r · Π log-factors`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Logarithmic factors a monomial may carry, in tie-break priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogKind {
    /// log n
    N,
    /// log_{M/B} n
    NBaseMB,
    /// log (n/M)
    NOverM,
    /// log (n/√M)
    NOverSqrtM,
}

impl LogKind {
    pub const ALL: [LogKind; 4] = [LogKind::N, LogKind::NBaseMB, LogKind::NOverM, LogKind::NOverSqrtM];

    fn idx(self) -> usize {
        self as usize
    }

    /// Value at a point, floored at 1 so factors never vanish.
    pub fn eval(self, n: f64, m: f64, b: f64) -> f64 {
        let v = match self {
            LogKind::N => n.log2(),
            LogKind::NBaseMB => n.ln() / (m / b).ln(),
            LogKind::NOverM => (n / m).log2(),
            LogKind::NOverSqrtM => (n / m.sqrt()).log2(),
        };
        if v.is_finite() {
            v.max(1.0)
        } else {
            1.0
        }
    }

    fn label(self) -> &'static str {
        match self {
            LogKind::N => "log n",
            LogKind::NBaseMB => "log_{M/B} n",
            LogKind::NOverM => "log(n/M)",
            LogKind::NOverSqrtM => "log(n/√M)",
        }
    }
}

fn snap(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coef: f64,
    pub n: f64,
    pub m: f64,
    pub b: f64,
    pub logs: [u32; 4],
}

impl Monomial {
    pub fn new(coef: f64, n: f64, m: f64, b: f64) -> Self {
        Monomial { coef, n: snap(n), m: snap(m), b: snap(b), logs: [0; 4] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(c, 0.0, 0.0, 0.0)
    }

    pub fn with_log(mut self, k: LogKind, power: u32) -> Self {
        self.logs[k.idx()] += power;
        self
    }

    pub fn log_power(&self, k: LogKind) -> u32 {
        self.logs[k.idx()]
    }

    pub fn has_logs(&self) -> bool {
        self.logs.iter().any(|&l| l > 0)
    }

    /// Same exponents and log factors, coefficient aside.
    pub fn same_shape(&self, o: &Monomial) -> bool {
        self.n == o.n && self.m == o.m && self.b == o.b && self.logs == o.logs
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut logs = self.logs;
        for (l, r) in logs.iter_mut().zip(o.logs) {
            *l += r;
        }
        Monomial { logs, ..Monomial::new(self.coef * o.coef, self.n + o.n, self.m + o.m, self.b + o.b) }
    }

    pub fn pow(&self, e: f64) -> Monomial {
        let logs = self.logs.map(|l| (l as f64 * e).round().max(0.0) as u32);
        Monomial { logs, ..Monomial::new(self.coef.powf(e), self.n * e, self.m * e, self.b * e) }
    }

    /// Exponent of n after substituting M = n^μ, B = n^χ.
    pub fn exponent_at(&self, mu: f64, chi: f64) -> f64 {
        self.n + self.m * mu + self.b * chi
    }

    pub fn eval(&self, n: f64, m: f64, b: f64) -> f64 {
        let mut v = self.coef * n.powf(self.n) * m.powf(self.m) * b.powf(self.b);
        for k in LogKind::ALL {
            let p = self.logs[k.idx()];
            if p > 0 {
                v *= k.eval(n, m, b).powi(p as i32);
            }
        }
        v
    }

    /// Replace n by n/s, where s is the monomial `s`; log factors are kept.
    pub fn subst_n_over(&self, s: &Monomial) -> Monomial {
        let scaled = s.pow(-self.n);
        let mut out = self.mul(&Monomial { coef: scaled.coef, logs: [0; 4], ..scaled });
        out.n = snap(self.n);
        out
    }
}

fn fmt_exp(e: f64) -> String {
    if (e - e.round()).abs() < 1e-9 {
        format!("{}", e.round() as i64)
    } else {
        let s = format!("{e:.3}");
        s.trim_end_matches('0').to_string()
    }
}

fn fmt_factor(var: &str, e: f64) -> Option<String> {
    let e = e.abs();
    if e == 0.0 {
        None
    } else if e == 1.0 {
        Some(var.to_string())
    } else if e == 0.5 && var == "M" {
        Some("√M".to_string())
    } else {
        Some(format!("{var}^{}", fmt_exp(e)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = Vec::new();
        let mut den = Vec::new();
        if (self.coef - 1.0).abs() > 1e-12 {
            num.push(fmt_exp(self.coef));
        }
        for (var, e) in [("n", self.n), ("M", self.m), ("B", self.b)] {
            if let Some(s) = fmt_factor(var, e) {
                if e > 0.0 {
                    num.push(s);
                } else {
                    den.push(s);
                }
            }
        }
        for k in LogKind::ALL {
            match self.logs[k.idx()] {
                0 => {}
                1 => num.push(k.label().to_string()),
                p => num.push(format!("({})^{p}", k.label())),
            }
        }
        let top = if num.is_empty() { "1".to_string() } else { num.join("·") };
        match den.len() {
            0 => write!(f, "{top}"),
            1 => write!(f, "{top}/{}", den[0]),
            _ => write!(f, "{top}/({})", den.join("·")),
        }
    }
}

/// Canonical sum of monomials: like terms merged, zero terms dropped, sorted.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostExpr {
    terms: Vec<Monomial>,
}

impl CostExpr {
    pub fn new(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut out: Vec<Monomial> = Vec::new();
        for t in terms {
            if t.coef == 0.0 {
                continue;
            }
            match out.iter_mut().find(|o| o.same_shape(&t)) {
                Some(o) => o.coef += t.coef,
                None => out.push(t),
            }
        }
        out.retain(|t| t.coef.abs() > 1e-12);
        out.sort_by(|a, b| {
            b.n.total_cmp(&a.n)
                .then(b.m.total_cmp(&a.m))
                .then(b.b.total_cmp(&a.b))
                .then(b.logs.cmp(&a.logs))
        });
        CostExpr { terms: out }
    }

    pub fn mono(m: Monomial) -> Self {
        Self::new([m])
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &CostExpr) -> CostExpr {
        Self::new(self.terms.iter().chain(o.terms.iter()).cloned())
    }

    pub fn mul(&self, o: &CostExpr) -> CostExpr {
        Self::new(self.terms.iter().flat_map(|a| o.terms.iter().map(move |b| a.mul(b))))
    }

    pub fn mul_mono(&self, m: &Monomial) -> CostExpr {
        Self::new(self.terms.iter().map(|a| a.mul(m)))
    }

    pub fn eval(&self, n: f64, m: f64, b: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(n, m, b)).sum()
    }

    pub fn subst_n_over(&self, s: &Monomial) -> CostExpr {
        Self::new(self.terms.iter().map(|t| t.subst_n_over(s)))
    }

    /// Same terms with every coefficient set to 1 (asymptotic form).
    pub fn unit_coefficients(&self) -> CostExpr {
        Self::new(self.terms.iter().map(|t| Monomial { coef: 1.0, ..t.clone() }))
    }
}

impl fmt::Display for CostExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_merge() {
        let e = CostExpr::new([
            Monomial::new(1.0, 1.0, 0.0, -1.0),
            Monomial::new(2.0, 1.0, 0.0, -1.0),
            Monomial::new(0.0, 2.0, 0.0, 0.0),
        ]);
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.terms()[0].coef, 3.0);
    }

    #[test]
    fn display() {
        let m = Monomial::new(1.0, 3.0, -0.5, -1.0);
        assert_eq!(m.to_string(), "n^3/(√M·B)");
        assert_eq!(Monomial::new(1.0, 2.0, -1.0, -1.0).to_string(), "n^2/(M·B)");
        assert_eq!(Monomial::new(1.0, 1.0, 0.0, -1.0).with_log(LogKind::NOverM, 1).to_string(), "n·log(n/M)/B");
    }

    #[test]
    fn substitution() {
        // (n/M)^2 · M/B = n^2/(MB)
        let g = Monomial::new(1.0, 2.0, 0.0, 0.0).subst_n_over(&Monomial::new(1.0, 0.0, 1.0, 0.0));
        let r = g.mul(&Monomial::new(1.0, 0.0, 1.0, -1.0));
        assert_eq!((r.n, r.m, r.b), (2.0, -1.0, -1.0));
    }
}
