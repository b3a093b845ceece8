//! The Skellam distribution over signed span distances.

use serde::{Deserialize, Serialize};

/// Parameters are clamped to at least this value.
pub const MIN_RATE: f64 = 0.01;
/// Probability assigned beyond [`MAX_DISTANCE`].
pub const PMF_FLOOR: f64 = 1e-12;
pub const MAX_DISTANCE: i64 = 10_000;

/// Difference of two Poisson variables with rates `mu1` and `mu2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Skellam {
    pub mu1: f64,
    pub mu2: f64,
}

impl Default for Skellam {
    fn default() -> Self {
        Skellam { mu1: 1.0, mu2: 1.0 }
    }
}

impl Skellam {
    /// Returns `None` unless both rates are finite and positive.
    pub fn new(mu1: f64, mu2: f64) -> Option<Self> {
        (mu1.is_finite() && mu2.is_finite() && mu1 > 0.0 && mu2 > 0.0).then_some(Skellam { mu1, mu2 })
    }

    pub fn mean(&self) -> f64 {
        self.mu1 - self.mu2
    }

    pub fn variance(&self) -> f64 {
        self.mu1 + self.mu2
    }

    pub fn ln_pmf(&self, d: i64) -> f64 {
        if d.unsigned_abs() > MAX_DISTANCE as u64 {
            return PMF_FLOOR.ln();
        }
        let x = 2.0 * (self.mu1 * self.mu2).sqrt();
        -(self.mu1 + self.mu2) + 0.5 * d as f64 * (self.mu1 / self.mu2).ln() + ln_bessel_i(d.unsigned_abs(), x)
    }

    pub fn pmf(&self, d: i64) -> f64 {
        if d.unsigned_abs() > MAX_DISTANCE as u64 {
            return PMF_FLOOR;
        }
        self.ln_pmf(d).exp()
    }

    /// Method-of-moments fit. Too few samples give the default.
    pub fn estimate(samples: &[i64]) -> Self {
        if samples.is_empty() {
            return Skellam::default();
        }
        let n = samples.len() as f64;
        let mean = samples.iter().map(|&d| d as f64).sum::<f64>() / n;
        let var = samples.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / n;
        Skellam {
            mu1: ((var + mean) / 2.0).max(MIN_RATE),
            mu2: ((var - mean) / 2.0).max(MIN_RATE),
        }
    }
}

/// `ln I_nu(x)` for integer order. Uses the power series, switching to the
/// large-argument expansion when the series would need too many terms.
pub fn ln_bessel_i(nu: u64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let nu_f = nu as f64;
    if x > 1e4 && x > nu_f * nu_f {
        let mu = 4.0 * nu_f * nu_f;
        let mut corr = 1.0;
        let mut term = 1.0;
        for k in 1..8 {
            let k_f = k as f64;
            term *= -(mu - (2.0 * k_f - 1.0).powi(2)) / (k_f * 8.0 * x);
            corr += term;
        }
        return x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + corr.ln();
    }
    // sum_k (x/2)^(2k+nu) / (k! (k+nu)!)
    let half = (x / 2.0).ln();
    let mut ln_term = nu_f * half - ln_factorial(nu);
    let mut max = ln_term;
    let mut terms = vec![ln_term];
    let q = 2.0 * half;
    let mut k: u64 = 0;
    loop {
        k += 1;
        ln_term += q - (k as f64).ln() - ((k + nu) as f64).ln();
        terms.push(ln_term);
        max = max.max(ln_term);
        // Terms decrease once k(k+nu) > (x/2)^2.
        if (k * (k + nu)) as f64 > x * x / 4.0 && ln_term < max - 40.0 {
            break;
        }
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n < 256 {
        return (2..=n).map(|i| (i as f64).ln()).sum();
    }
    // Stirling series
    let n = n as f64;
    n * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI * n).ln() + 1.0 / (12.0 * n) - 1.0 / (360.0 * n.powi(3))
}
