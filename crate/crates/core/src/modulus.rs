//! Effective uniqueness certificates.
//!
//! For the feasible class `K` of polynomials of degree `<= n` whose
//! coefficients `c_{k_i}` lie in boxes `[a_i, b_i]`, with `M = 5/2 ‖f‖ + 3/2 ‖p_0‖`
//! and any `L` in `(0, E]`:
//!
//! ```text
//! Ψ(δ, L) = (χ_{ω,n,M}(L/2) / 2)^{n²/2 + 2n} / (10 · N_n² · (n+1) · (n F_n + 1)) · δ
//! ```
//!
//! Any two `p_1, p_2 ∈ K` with `‖f - p_i‖ <= E + Ψ(δ, L)` satisfy
//! `‖p_1 - p_2‖ <= δ`. The slope of `Ψ` in `δ` is a strong unicity constant,
//! and `Ψ*(δ) = min(δ/4, Ψ(δ, δ/4))` drops the dependence on `L`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, ModulusOfContinuity};
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::poly::Polynomial;
use crate::schur;

/// One box `lower <= c_k <= upper`; `None` stands for an infinite bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientBox {
    pub k: usize,
    #[serde(default)]
    pub lower: Option<f64>,
    #[serde(default)]
    pub upper: Option<f64>,
}

impl CoefficientBox {
    pub fn new(k: usize, lower: Option<f64>, upper: Option<f64>) -> Self {
        Self { k, lower, upper }
    }

    pub fn contains(&self, c: f64) -> bool {
        self.lower.is_none_or(|a| a <= c) && self.upper.is_none_or(|b| c <= b)
    }

    pub fn clamp(&self, c: f64) -> f64 {
        let c = self.lower.map_or(c, |a| c.max(a));
        self.upper.map_or(c, |b| c.min(b))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintSetRepr {
    n: usize,
    #[serde(default)]
    entries: Vec<CoefficientBox>,
}

/// The feasible class `K`: degree `<= n`, boxes on coefficients
/// `0 < k_1 < ... < k_m <= n`. The constant term is never constrained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConstraintSetRepr")]
pub struct ConstraintSet {
    n: usize,
    entries: Vec<CoefficientBox>,
}

impl TryFrom<ConstraintSetRepr> for ConstraintSet {
    type Error = Error;

    fn try_from(repr: ConstraintSetRepr) -> Result<Self> {
        Self::new(repr.n, repr.entries)
    }
}

impl ConstraintSet {
    pub fn new(n: usize, entries: Vec<CoefficientBox>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidConstraints(msg));
        if entries.windows(2).any(|w| w[0].k >= w[1].k) {
            return bad("constrained degrees must be strictly increasing".into());
        }
        for e in &entries {
            if e.k == 0 {
                return bad("the constant term cannot be constrained".into());
            }
            if e.k > n {
                return bad(format!("constrained degree {} exceeds n = {n}", e.k));
            }
            if e.lower.is_some_and(|a| !a.is_finite()) || e.upper.is_some_and(|b| !b.is_finite()) {
                return bad(format!("bounds of c_{} must be finite or absent", e.k));
            }
            if let (Some(a), Some(b)) = (e.lower, e.upper) {
                if a > b {
                    return bad(format!("empty box for c_{}: {a} > {b}", e.k));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn unconstrained(n: usize) -> Self {
        Self { n, entries: vec![] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[CoefficientBox] {
        &self.entries
    }

    pub fn contains(&self, coeffs: &[f64]) -> bool {
        coeffs.len() == self.n + 1 && self.entries.iter().all(|e| e.contains(coeffs[e.k]))
    }

    pub fn check(&self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.n + 1 {
            return Err(Error::Infeasible(format!(
                "expected {} coefficients, got {}",
                self.n + 1,
                coeffs.len()
            )));
        }
        match self.entries.iter().find(|e| !e.contains(coeffs[e.k])) {
            Some(e) => Err(Error::Infeasible(format!(
                "c_{} = {} outside [{:?}, {:?}]",
                e.k, coeffs[e.k], e.lower, e.upper
            ))),
            None => Ok(()),
        }
    }

    /// Projects each constrained coefficient into its box.
    pub fn clamp(&self, coeffs: &mut [f64]) {
        for e in &self.entries {
            coeffs[e.k] = e.clamp(coeffs[e.k]);
        }
    }
}

/// A target `f` with its modulus `ω`, the class `K`, and a feasible `p_0`.
#[derive(Clone, Debug)]
pub struct ApproximationInstance {
    f: FunctionSpec,
    omega: ModulusOfContinuity,
    constraints: ConstraintSet,
    p0: Polynomial<f64>,
    f_norm: f64,
    p0_norm: f64,
}

impl ApproximationInstance {
    pub fn new(
        f: FunctionSpec,
        omega: ModulusOfContinuity,
        constraints: ConstraintSet,
        p0: Vec<f64>,
    ) -> Result<Self> {
        f.validate()?;
        omega.validate()?;
        constraints.check(&p0)?;
        let f_norm = f.sup_norm_bound();
        let p0 = Polynomial::new(p0);
        let p0_norm = p0.sup_norm_bound();
        Ok(Self {
            f,
            omega,
            constraints,
            p0,
            f_norm,
            p0_norm,
        })
    }

    /// Uses the function family's own Lipschitz modulus.
    pub fn with_natural_modulus(f: FunctionSpec, constraints: ConstraintSet, p0: Vec<f64>) -> Result<Self> {
        let omega = f.natural_modulus();
        Self::new(f, omega, constraints, p0)
    }

    pub fn f(&self) -> &FunctionSpec {
        &self.f
    }

    pub fn omega(&self) -> &ModulusOfContinuity {
        &self.omega
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    pub fn p0(&self) -> &Polynomial<f64> {
        &self.p0
    }

    pub fn n(&self) -> usize {
        self.constraints.n()
    }

    /// Guaranteed upper bound on `‖f‖`.
    pub fn f_norm(&self) -> f64 {
        self.f_norm
    }

    /// Guaranteed upper bound on `‖p_0‖`.
    pub fn p0_norm(&self) -> f64 {
        self.p0_norm
    }
}

/// `M = 5/2 ‖f‖ + 3/2 ‖p_0‖`.
pub fn norm_cap(f_norm: f64, p0_norm: f64) -> f64 {
    2.5 * f_norm + 1.5 * p0_norm
}

pub fn norm_cap_m(instance: &ApproximationInstance) -> f64 {
    norm_cap(instance.f_norm(), instance.p0_norm())
}

/// Rounds a nonnegative certificate quantity one ulp towards zero, so the
/// binary64 result never exceeds the exact value.
fn round_down(x: f64) -> f64 {
    if x > 0.0 {
        x.next_down()
    } else {
        x
    }
}

/// The `Ψ` slope from its ingredients:
/// `(χ/2)^{n²/2 + 2n} / (10 N_n² (n+1)(n F_n + 1))`.
pub fn psi_coefficient_from_parts(n: usize, chi_half_l: f64, schur_cap: f64, f_n: f64) -> f64 {
    let nf = n as f64;
    let exponent = nf * nf / 2.0 + 2.0 * nf;
    let denominator = 10.0 * schur_cap * schur_cap * (nf + 1.0) * (nf * f_n + 1.0);
    round_down((chi_half_l / 2.0).powf(exponent) / denominator)
}

/// Everything `Ψ` and `Ψ*` depend on besides `L` and `δ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateParams {
    pub n: usize,
    pub m_cap: f64,
    pub schur_cap: f64,
    pub schur_cap_exact: String,
    pub f_n: f64,
    pub omega: ModulusOfContinuity,
}

impl CertificateParams {
    pub fn for_instance(instance: &ApproximationInstance) -> Result<Self> {
        let n = instance.n();
        let cap: BigUint = schur::schur_cap(n)?;
        Ok(Self {
            n,
            m_cap: norm_cap_m(instance),
            schur_cap: cap.to_f64().unwrap_or(f64::INFINITY),
            schur_cap_exact: cap.to_string(),
            f_n: bounds::f_constant(n),
            omega: instance.omega().clone(),
        })
    }

    pub fn exponent(&self) -> f64 {
        let n = self.n as f64;
        n * n / 2.0 + 2.0 * n
    }

    pub fn denominator(&self) -> f64 {
        let n = self.n as f64;
        10.0 * self.schur_cap * self.schur_cap * (n + 1.0) * (n * self.f_n + 1.0)
    }

    pub fn chi_half(&self, l: f64) -> f64 {
        bounds::chi(&self.omega, self.n, self.m_cap, l / 2.0)
    }

    pub fn psi_coefficient(&self, l: f64) -> Result<f64> {
        if !(l > 0.0) {
            return Err(Error::NonPositiveL(l));
        }
        Ok(psi_coefficient_from_parts(self.n, self.chi_half(l), self.schur_cap, self.f_n))
    }

    pub fn psi(&self, l: f64, delta: f64) -> Result<f64> {
        check_delta(delta)?;
        Ok(round_down(self.psi_coefficient(l)? * delta))
    }

    pub fn psi_star(&self, delta: f64) -> Result<f64> {
        check_delta(delta)?;
        if delta == 0.0 {
            return Ok(0.0);
        }
        Ok((delta / 4.0).min(self.psi(delta / 4.0, delta)?))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta >= 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("delta must be finite and nonnegative, got {delta}")))
    }
}

/// `Ψ(δ, L)`; guaranteed for `0 < L <= E`.
pub fn psi(instance: &ApproximationInstance, l: f64, delta: f64) -> Result<f64> {
    CertificateParams::for_instance(instance)?.psi(l, delta)
}

/// `γ = Ψ(1, L)`: `‖f - p‖ >= E + γ ‖p - p*‖` for every `p ∈ K`.
pub fn strong_unicity_gamma(instance: &ApproximationInstance, l: f64) -> Result<f64> {
    psi(instance, l, 1.0)
}

/// `Ψ*(δ) = min(δ/4, Ψ(δ, δ/4))`, `Ψ*(0) = 0`; needs no lower bound on `E`.
pub fn psi_star(instance: &ApproximationInstance, delta: f64) -> Result<f64> {
    CertificateParams::for_instance(instance)?.psi_star(delta)
}

/// `⌊2 / ω(1)⌋ + 1`, an upper bound on `‖f - f(0)‖` for any `f` served by `ω`.
pub fn f_norm_bound_from_omega(omega: &ModulusOfContinuity) -> f64 {
    (2.0 / omega.eval(1.0)).floor() + 1.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub quantity: &'static str,
    pub value: f64,
    pub source: &'static str,
    pub formula: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiStarEntry {
    pub delta: f64,
    pub psi_star: f64,
}

/// Certificate for one instance. `l`, `chi_half_l` and `gamma` are absent for
/// `L`-free certificates, which only carry `Ψ*`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniquenessCertificate {
    #[serde(flatten)]
    pub params: CertificateParams,
    pub exponent: f64,
    pub denominator: f64,
    pub l: Option<f64>,
    pub chi_half_l: Option<f64>,
    pub gamma: Option<f64>,
    pub psi_star_table: Vec<PsiStarEntry>,
    pub provenance: Vec<Provenance>,
}

impl UniquenessCertificate {
    pub fn issue(instance: &ApproximationInstance, l: Option<f64>, deltas: &[f64]) -> Result<Self> {
        let params = CertificateParams::for_instance(instance)?;
        let (chi_half_l, gamma) = match l {
            Some(l) => (Some(params.chi_half(l)), Some(params.psi(l, 1.0)?)),
            None => (None, None),
        };
        let psi_star_table = deltas
            .iter()
            .map(|&delta| {
                Ok(PsiStarEntry {
                    delta,
                    psi_star: params.psi_star(delta)?,
                })
            })
            .collect::<Result<_>>()?;
        let mut provenance = vec![
            Provenance {
                quantity: "M",
                value: params.m_cap,
                source: "norm_cap_m",
                formula: "5/2 ‖f‖ + 3/2 ‖p0‖ (guaranteed sup-norm upper bounds)",
            },
            Provenance {
                quantity: "N_n",
                value: params.schur_cap,
                source: "schur::schur_cap",
                formula: "max N_{λ^h} over strictly decreasing h ⊆ {0..n}",
            },
            Provenance {
                quantity: "F_n",
                value: params.f_n,
                source: "bounds::f_constant",
                formula: "3/2 max_i (2n²)^i / i!",
            },
            Provenance {
                quantity: "exponent",
                value: params.exponent(),
                source: "modulus::CertificateParams::exponent",
                formula: "n²/2 + 2n",
            },
            Provenance {
                quantity: "denominator",
                value: params.denominator(),
                source: "modulus::CertificateParams::denominator",
                formula: "10 N_n² (n+1)(n F_n + 1)",
            },
        ];
        if let (Some(l), Some(chi), Some(g)) = (l, chi_half_l, gamma) {
            provenance.extend([
                Provenance {
                    quantity: "L",
                    value: l,
                    source: "solver::certify_uniqueness",
                    formula: "E_low - grid_eps (certified lower bound on E)",
                },
                Provenance {
                    quantity: "chi(L/2)",
                    value: chi,
                    source: "bounds::chi",
                    formula: "min(1, (L/2) / (4n²M + 1), ω(L/4))",
                },
                Provenance {
                    quantity: "gamma",
                    value: g,
                    source: "modulus::strong_unicity_gamma",
                    formula: "(χ(L/2)/2)^exponent / denominator, rounded down",
                },
            ]);
        }
        Ok(Self {
            exponent: params.exponent(),
            denominator: params.denominator(),
            params,
            l,
            chi_half_l,
            gamma,
            psi_star_table,
            provenance,
        })
    }

    /// `Ψ(δ) = γ δ`; `None` for `L`-free certificates.
    pub fn psi(&self, delta: f64) -> Option<f64> {
        self.gamma.map(|g| round_down(g * delta))
    }

    pub fn psi_star(&self, delta: f64) -> Result<f64> {
        self.params.psi_star(delta)
    }
}
