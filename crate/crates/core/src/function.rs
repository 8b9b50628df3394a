//! Closed-form target functions on `[0, 1]`, each with a provable Lipschitz
//! modulus and a guaranteed upper bound on its sup norm.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::ModulusOfContinuity;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

// relative inflation applied to computed constants so rounding never makes
// them too small
const UPWARD: f64 = 1.0 + 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `x ↦ a · e^{b x}`
    ExpScale { a: f64, b: f64 },
    /// `x ↦ |x - c|`
    AbsShift { c: f64 },
    /// `x ↦ Σ coeffs[k] x^k`
    Poly { coeffs: Vec<f64> },
    /// `x ↦ sin(a x + phase)`
    Sine { a: f64, phase: f64 },
    /// Linear interpolation through `[x, y]` breakpoints, `x` running from 0
    /// to 1.
    PiecewiseLinear { breakpoints: Vec<[f64; 2]> },
}

impl FunctionSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidFunction(msg.into()));
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Self::ExpScale { a, b } => {
                if !finite(&[*a, *b]) {
                    return bad("exp_scale parameters must be finite");
                }
            }
            Self::AbsShift { c } => {
                if !c.is_finite() {
                    return bad("abs_shift parameter must be finite");
                }
            }
            Self::Poly { coeffs } => {
                if coeffs.is_empty() || !finite(coeffs) {
                    return bad("poly needs at least one finite coefficient");
                }
            }
            Self::Sine { a, phase } => {
                if !finite(&[*a, *phase]) {
                    return bad("sine parameters must be finite");
                }
            }
            Self::PiecewiseLinear { breakpoints } => {
                if breakpoints.len() < 2 {
                    return bad("piecewise_linear needs at least two breakpoints");
                }
                if !breakpoints.iter().all(|p| finite(p)) {
                    return bad("breakpoints must be finite");
                }
                if breakpoints[0][0] != 0.0 || breakpoints[breakpoints.len() - 1][0] != 1.0 {
                    return bad("breakpoints must start at x = 0 and end at x = 1");
                }
                if breakpoints.windows(2).any(|w| w[0][0] >= w[1][0]) {
                    return bad("breakpoint abscissae must be strictly increasing");
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::ExpScale { a, b } => a * (b * x).exp(),
            Self::AbsShift { c } => (x - c).abs(),
            Self::Poly { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Self::Sine { a, phase } => (a * x + phase).sin(),
            Self::PiecewiseLinear { breakpoints } => {
                let i = breakpoints
                    .windows(2)
                    .position(|w| x <= w[1][0])
                    .unwrap_or(breakpoints.len() - 2);
                let ([x0, y0], [x1, y1]) = (breakpoints[i], breakpoints[i + 1]);
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    pub fn eval_many(&self, points: &[f64]) -> Vec<f64> {
        points.par_iter().map(|&x| self.eval(x)).collect()
    }

    /// A Lipschitz constant on `[0, 1]`.
    pub fn lipschitz_constant(&self) -> f64 {
        let raw = match self {
            Self::ExpScale { a, b } => (a * b).abs() * b.max(0.0).exp(),
            Self::AbsShift { .. } => 1.0,
            Self::Poly { coeffs } => coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| k as f64 * c.abs())
                .sum(),
            Self::Sine { a, .. } => a.abs(),
            Self::PiecewiseLinear { breakpoints } => breakpoints
                .windows(2)
                .map(|w| ((w[1][1] - w[0][1]) / (w[1][0] - w[0][0])).abs())
                .fold(0.0, f64::max),
        };
        raw * UPWARD
    }

    /// The family's own modulus, `ω(ε) = ε / Λ`.
    pub fn natural_modulus(&self) -> ModulusOfContinuity {
        ModulusOfContinuity::Lipschitz {
            constant: self.lipschitz_constant(),
        }
    }

    /// A guaranteed upper bound on `max_{[0,1]} |f|`, closed-form for every
    /// family.
    pub fn sup_norm_bound(&self) -> f64 {
        let raw = match self {
            // monotone: extremes at the endpoints
            Self::ExpScale { a, b } => a.abs().max((a * b.exp()).abs()),
            // convex: extremes at the endpoints
            Self::AbsShift { c } => c.abs().max((1.0 - c).abs()),
            Self::Poly { coeffs } => Polynomial::new(coeffs.clone()).sup_norm_bound(),
            Self::Sine { a, phase } => {
                let (lo, hi) = if *a >= 0.0 {
                    (*phase, a + phase)
                } else {
                    (a + phase, *phase)
                };
                // a peak of |sin| lies at π/2 + kπ
                let k = ((lo - FRAC_PI_2) / PI).ceil();
                if FRAC_PI_2 + k * PI <= hi {
                    1.0
                } else {
                    lo.sin().abs().max(hi.sin().abs())
                }
            }
            Self::PiecewiseLinear { breakpoints } => breakpoints.iter().fold(0.0, |m: f64, p| m.max(p[1].abs())),
        };
        raw * UPWARD
    }
}
