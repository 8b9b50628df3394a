//! Quantitative inequalities feeding the certificates.
//!
//! All functions here are plain binary64 arithmetic; `0^0 = 1` throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A modulus of uniform continuity `ω`: `|x - y| < ω(ε)` implies
/// `|f(x) - f(y)| < ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModulusOfContinuity {
    /// `|f(x) - f(y)| <= constant · |x - y|`, so `ω(ε) = ε / constant`.
    Lipschitz { constant: f64 },
    /// `|f(x) - f(y)| <= constant · |x - y|^exponent`.
    Hoelder { constant: f64, exponent: f64 },
    /// Sampled `(ε, ω(ε))` pairs, completed by the monotone step envelope
    /// (see [`ModulusOfContinuity::eval`]).
    Table { points: Vec<[f64; 2]> },
}

impl ModulusOfContinuity {
    pub fn lipschitz(constant: f64) -> Result<Self> {
        let m = Self::Lipschitz { constant };
        m.validate()?;
        Ok(m)
    }

    pub fn hoelder(constant: f64, exponent: f64) -> Result<Self> {
        let m = Self::Hoelder { constant, exponent };
        m.validate()?;
        Ok(m)
    }

    pub fn table(mut points: Vec<[f64; 2]>) -> Result<Self> {
        points.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let m = Self::Table { points };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidModulus(msg.into()));
        match *self {
            Self::Lipschitz { constant } => {
                if !(constant.is_finite() && constant >= 0.0) {
                    return bad("Lipschitz constant must be finite and nonnegative");
                }
            }
            Self::Hoelder { constant, exponent } => {
                if !(constant.is_finite() && constant >= 0.0) {
                    return bad("Hoelder constant must be finite and nonnegative");
                }
                if !(exponent > 0.0 && exponent <= 1.0) {
                    return bad("Hoelder exponent must lie in (0, 1]");
                }
            }
            Self::Table { ref points } => {
                if points.is_empty() {
                    return bad("table needs at least one sample");
                }
                if points.iter().any(|&[e, w]| !(e.is_finite() && e > 0.0 && w.is_finite() && w > 0.0)) {
                    return bad("table samples must be finite and positive");
                }
                if points.windows(2).any(|w| w[0][0] >= w[1][0]) {
                    return bad("table epsilons must be distinct and sorted");
                }
            }
        }
        Ok(())
    }

    /// `ω(ε)` for `ε > 0`. A zero Lipschitz or Hoelder constant yields `+∞`
    /// (constant functions).
    ///
    /// For tables, `ω(ε)` is the largest sampled `ω(ε_k)` with `ε_k <= ε`,
    /// which is monotone and valid whenever each sample is. Below the first
    /// sample the value is scaled linearly towards the origin.
    pub fn eval(&self, eps: f64) -> f64 {
        match *self {
            Self::Lipschitz { constant } => eps / constant,
            Self::Hoelder { constant, exponent } => (eps / constant).powf(1.0 / exponent),
            Self::Table { ref points } => {
                let [e0, w0] = points[0];
                if eps < e0 {
                    return w0 * eps / e0;
                }
                points
                    .iter()
                    .take_while(|p| p[0] <= eps)
                    .fold(0.0, |acc, p| f64::max(acc, p[1]))
            }
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// `(2n^2)^k · sup_norm`, an upper bound for `‖p^{(k)}‖` on `[0, 1]` when
/// `deg p <= n` and `‖p‖ <= sup_norm`.
pub fn markov_derivative_cap(n: usize, k: usize, sup_norm: f64) -> f64 {
    (2.0 * (n * n) as f64).powi(k as i32) * sup_norm
}

/// `(2n^2)^k / k! · sup_norm`, an upper bound for the `k`-th coefficient.
pub fn coefficient_cap(n: usize, k: usize, sup_norm: f64) -> f64 {
    markov_derivative_cap(n, k, sup_norm) / factorial(k)
}

/// `χ_{ω,n,M}(ε) = min(1, ε / (4 n^2 M + 1), ω(ε/2))`, a modulus of uniform
/// continuity for `p - f` whenever `‖p‖ <= M`, `deg p <= n` and `ω` serves `f`.
pub fn chi(omega: &ModulusOfContinuity, n: usize, m_cap: f64, eps: f64) -> f64 {
    let n2 = (n * n) as f64;
    1f64.min(eps / (4.0 * n2 * m_cap + 1.0)).min(omega.eval(eps / 2.0))
}

/// `F_n = 3/2 · max_{0 <= i <= n} (2n^2)^i / i!`.
pub fn f_constant(n: usize) -> f64 {
    1.5 * (0..=n).map(|i| coefficient_cap(n, i, 1.0)).fold(0.0, f64::max)
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must lie in (0, 1], got {v}")))
    }
}

/// `β^{n + n²/4} / (N_n (n + 1)) · γ`: if an interpolant with allowed degrees
/// is bounded by this at `β`-spaced nodes, its sup norm is at most `γ`.
pub fn beta_bound_threshold(n: usize, beta: f64, gamma: f64, schur_cap: f64) -> Result<f64> {
    unit_interval("beta", beta)?;
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    let n = n as f64;
    Ok(beta.powf(n + n * n / 4.0) / (schur_cap * (n + 1.0)) * gamma)
}

/// `α^{n²/4 + n}`, the floor of the oscillator on points at distance `>= α`
/// from all of its interior nodes.
pub fn oscillator_floor(n: usize, alpha: f64) -> Result<f64> {
    unit_interval("alpha", alpha)?;
    let n = n as f64;
    Ok(alpha.powf(n * n / 4.0 + n))
}
