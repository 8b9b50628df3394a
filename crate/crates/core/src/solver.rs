//! Discretized best approximation over `K`, active-constraint detection,
//! alternation extraction and the end-to-end certification pipeline.
//!
//! `E = min_{q ∈ K} ‖f - q‖` is bracketed by solving the minimax problem on a
//! uniform grid whose step is below `χ_{ω,n,M}(grid_eps)`, so the grid sup of
//! `|f - q|` underestimates the true sup by less than `grid_eps` for every `q`
//! with `‖q‖ <= M`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::lp::LinearProgram;
use crate::modulus::{self, ApproximationInstance, CertificateParams, ConstraintSet, UniquenessCertificate};
use crate::poly::Polynomial;

/// Upper limit on the grid step regardless of `χ`.
pub const MAX_GRID_STEP: f64 = 1e-3;
pub const MAX_GRID_POINTS: usize = 50_000_001;
const MAX_LP_ROUNDS: usize = 200;

/// Uniform grid on `[0, 1]` including both endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    step: f64,
    points: Vec<f64>,
}

impl Grid {
    pub fn uniform(intervals: usize) -> Result<Self> {
        if intervals == 0 || intervals >= MAX_GRID_POINTS {
            return Err(Error::InvalidArgument(format!(
                "grid needs between 1 and {} intervals, got {intervals}",
                MAX_GRID_POINTS - 1
            )));
        }
        let step = 1.0 / intervals as f64;
        let points = (0..=intervals).map(|i| i as f64 / intervals as f64).collect();
        Ok(Self { step, points })
    }

    /// The coarsest uniform grid whose step is strictly below `bound`.
    pub fn with_step_below(bound: f64) -> Result<Self> {
        if !(bound > 0.0) {
            return Err(Error::InvalidArgument(format!("grid step bound must be positive, got {bound}")));
        }
        let intervals = (1.0 / bound).floor();
        if intervals >= MAX_GRID_POINTS as f64 {
            return Err(Error::InvalidArgument(format!(
                "grid step below {bound:e} needs more than {MAX_GRID_POINTS} points"
            )));
        }
        Self::uniform(intervals as usize + 1)
    }

    /// Step `< min(χ_{ω,n,M}(grid_eps), MAX_GRID_STEP)`.
    pub fn for_instance(instance: &ApproximationInstance, grid_eps: f64) -> Result<Self> {
        check_grid_eps(grid_eps)?;
        let chi = bounds::chi(instance.omega(), instance.n(), modulus::norm_cap_m(instance), grid_eps);
        Self::with_step_below(chi.min(MAX_GRID_STEP))
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn info(&self) -> GridInfo {
        GridInfo {
            step: self.step,
            count: self.len(),
        }
    }
}

fn check_grid_eps(grid_eps: f64) -> Result<()> {
    if grid_eps > 0.0 && grid_eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("grid_eps must be positive, got {grid_eps}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridInfo {
    pub step: f64,
    pub count: usize,
}

/// One round of constraint generation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpRound {
    pub subset_size: usize,
    pub objective: f64,
    pub grid_max_error: f64,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlternationPoint {
    pub x: f64,
    /// Sign of `f - p` required at this point, `ν (-1)^i`.
    pub sign: i8,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Alternation {
    pub points: Vec<AlternationPoint>,
    pub nu: i8,
    pub both_signs_complete: bool,
    pub e: f64,
    pub eps: f64,
    /// Grid sup of `|f - p|` and the bound `E + (χ(E/2)/2)^{n²/4+n} / N_n · ε`
    /// under which the existence of the sequence is guaranteed.
    pub grid_max_error: f64,
    pub hypothesis_bound: f64,
    pub hypotheses_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestApproxResult {
    pub p_star: Vec<f64>,
    pub e_low: f64,
    pub e_high: f64,
    pub grid_eps: f64,
    pub grid: GridInfo,
    pub grid_max_error: f64,
    pub p_star_norm_bound: f64,
    pub norm_cap_m: f64,
    pub mu: f64,
    pub active_set: Vec<usize>,
    pub alternation: Option<Alternation>,
    pub lp_trace: Vec<LpRound>,
}

impl BestApproxResult {
    pub fn polynomial(&self) -> Polynomial<f64> {
        Polynomial::new(self.p_star.clone())
    }
}

/// A coefficient `c_k = base_k + sign · u` with `u >= 0`.
struct Column {
    k: usize,
    sign: f64,
}

/// Solves `min_{q ∈ K} max_{τ ∈ points} |f(τ) - q(τ)|` as an LP. Returns the
/// coefficients, the optimal value and the pivot count.
fn minimax_on_subset(k: &ConstraintSet, points: &[f64], fvals: &[f64]) -> Result<(Vec<f64>, f64, usize)> {
    let n = k.n();
    let mut base = vec![0.0; n + 1];
    let mut columns = vec![];
    let mut box_rows = vec![];
    for deg in 0..=n {
        let entry = k.entries().iter().find(|e| e.k == deg);
        match entry.map(|e| (e.lower, e.upper)) {
            Some((Some(a), Some(b))) => {
                base[deg] = a;
                columns.push(Column { k: deg, sign: 1.0 });
                box_rows.push((columns.len() - 1, b - a));
            }
            Some((Some(a), None)) => {
                base[deg] = a;
                columns.push(Column { k: deg, sign: 1.0 });
            }
            Some((None, Some(b))) => {
                base[deg] = b;
                columns.push(Column { k: deg, sign: -1.0 });
            }
            _ => {
                columns.push(Column { k: deg, sign: 1.0 });
                columns.push(Column { k: deg, sign: -1.0 });
            }
        }
    }
    let base_poly = Polynomial::new(base.clone());
    let residual: Vec<f64> = points.iter().zip(fvals).map(|(x, f)| f - base_poly.eval(x)).collect();
    // t = t0 - w with w >= 0 keeps every right-hand side positive
    let t0 = residual.iter().fold(0.0, |m: f64, r| m.max(r.abs())) + 1.0;

    let w = columns.len();
    let mut objective = vec![0.0; w + 1];
    objective[w] = 1.0;
    let mut lp = LinearProgram::new(objective);
    for (x, r) in points.iter().zip(&residual) {
        let powers: Vec<f64> = (0..=n).scan(1.0, |acc, _| {
            let v = *acc;
            *acc *= x;
            Some(v)
        })
        .collect();
        for s in [1.0, -1.0] {
            let mut row: Vec<f64> = columns.iter().map(|c| -s * c.sign * powers[c.k]).collect();
            row.push(1.0);
            lp.add_row(row, t0 - s * r)?;
        }
    }
    for (col, width) in box_rows {
        let mut row = vec![0.0; w + 1];
        row[col] = 1.0;
        lp.add_row(row, width)?;
    }
    let mut row = vec![0.0; w + 1];
    row[w] = 1.0;
    lp.add_row(row, t0)?;

    let sol = lp.solve()?;
    let mut coeffs = base;
    for (c, u) in columns.iter().zip(&sol.x) {
        coeffs[c.k] += c.sign * u;
    }
    k.clamp(&mut coeffs);
    Ok((coeffs, t0 - sol.x[w], sol.iterations))
}

fn grid_errors(points: &[f64], fvals: &[f64], p: &Polynomial<f64>) -> Vec<f64> {
    points.par_iter().zip(fvals).map(|(x, f)| f - p.eval(x)).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.par_iter().map(|e| e.abs()).reduce(|| 0.0, f64::max)
}

/// Minimax fit on the whole grid by constraint generation: solve on a subset,
/// add the grid's local maxima of `|f - p|` that exceed the subset optimum,
/// repeat.
fn minimax_on_grid(k: &ConstraintSet, grid: &Grid, fvals: &[f64]) -> Result<(Vec<f64>, f64, Vec<LpRound>)> {
    let n = k.n();
    let last = grid.len() - 1;
    let initial = (4 * (n + 1) + 1).min(last);
    let mut subset: BTreeSet<usize> = (0..=initial).map(|i| i * last / initial.max(1)).collect();
    let scale = fvals.par_iter().map(|v| v.abs()).reduce(|| 0.0, f64::max).max(1.0);
    let tol = 1e-10 * scale;
    let mut trace = vec![];

    for _ in 0..MAX_LP_ROUNDS {
        let idx: Vec<usize> = subset.iter().copied().collect();
        let pts: Vec<f64> = idx.iter().map(|&i| grid.points[i]).collect();
        let fv: Vec<f64> = idx.iter().map(|&i| fvals[i]).collect();
        let (coeffs, t, pivots) = minimax_on_subset(k, &pts, &fv)?;
        let errs = grid_errors(&grid.points, fvals, &Polynomial::new(coeffs.clone()));
        let g = max_abs(&errs);
        trace.push(LpRound {
            subset_size: idx.len(),
            objective: t,
            grid_max_error: g,
            pivots,
        });
        if g <= t + tol {
            return Ok((coeffs, t, trace));
        }
        let mut peaks: Vec<(f64, usize)> = (0..grid.len())
            .filter(|&i| {
                let a = errs[i].abs();
                a > t + tol
                    && (i == 0 || a >= errs[i - 1].abs())
                    && (i == last || a >= errs[i + 1].abs())
                    && !subset.contains(&i)
            })
            .map(|i| (errs[i].abs(), i))
            .collect();
        if peaks.is_empty() {
            break;
        }
        peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
        subset.extend(peaks.iter().take(2 * (n + 2) + 4).map(|p| p.1));
    }
    let summary: Vec<String> = trace
        .iter()
        .map(|r| format!("|S|={} t={:.3e} grid={:.3e}", r.subset_size, r.objective, r.grid_max_error))
        .collect();
    Err(Error::LpFailure(format!(
        "constraint generation stalled after {} rounds: {}",
        trace.len(),
        summary.join("; ")
    )))
}

/// Indices `i` (1-based into the constraint entries) with
/// `c_{k_i} <= a_i + μ` or `c_{k_i} >= b_i - μ`.
pub fn active_constraints(p: &Polynomial<f64>, k: &ConstraintSet, mu: f64) -> Result<Vec<usize>> {
    if !(mu >= 0.0) {
        return Err(Error::InvalidArgument(format!("mu must be nonnegative, got {mu}")));
    }
    let coeffs = padded(p, k.n())?;
    k.check(&coeffs)?;
    Ok(k.entries()
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            let c = coeffs[e.k];
            e.lower.is_some_and(|a| c <= a + mu) || e.upper.is_some_and(|b| c >= b - mu)
        })
        .map(|(i, _)| i + 1)
        .collect())
}

fn padded(p: &Polynomial<f64>, n: usize) -> Result<Vec<f64>> {
    p.clone()
        .with_degree_bound(n)
        .map(Polynomial::into_coeffs)
        .ok_or_else(|| Error::Infeasible(format!("degree exceeds n = {n}")))
}

/// The factor `(χ(E/2)/2)^{n²/4+n} / N_n` multiplying `ε` in the hypothesis
/// `‖f - p‖ <= E + factor · ε`.
fn alternation_hypothesis_factor(params: &CertificateParams, e: f64) -> f64 {
    if !(e > 0.0) {
        return 0.0;
    }
    let n = params.n as f64;
    (params.chi_half(e) / 2.0).powf(n * n / 4.0 + n) / params.schur_cap
}

fn alternation_scan(errs: &[f64], points: &[f64], e: f64, eps: f64, count: usize, nu: i8) -> Option<Vec<AlternationPoint>> {
    let mut out = Vec::with_capacity(count);
    let mut start = 0;
    for i in 1..=count {
        let sign = if i % 2 == 0 { nu } else { -nu };
        let s = sign as f64;
        let pos = (start..errs.len()).find(|&j| (s * errs[j] - e).abs() <= eps)?;
        out.push(AlternationPoint {
            x: points[pos],
            sign,
            error: errs[pos],
        });
        start = pos + 1;
    }
    Some(out)
}

/// Greedy left-to-right search for `x_1 < ... < x_count` on the grid with
/// `|ν (-1)^i (f(x_i) - p(x_i)) - E| <= ε`. Both signs of `ν` are tried;
/// `ν = +1` wins when both complete. `None` means no sequence exists on this
/// grid.
pub fn find_alternation(
    instance: &ApproximationInstance,
    p: &Polynomial<f64>,
    e: f64,
    eps: f64,
    count: usize,
    grid: &Grid,
) -> Result<Option<Alternation>> {
    let fvals = instance.f().eval_many(grid.points());
    alternation_with_values(instance, p, e, eps, count, grid, &fvals)
}

fn alternation_with_values(
    instance: &ApproximationInstance,
    p: &Polynomial<f64>,
    e: f64,
    eps: f64,
    count: usize,
    grid: &Grid,
    fvals: &[f64],
) -> Result<Option<Alternation>> {
    if count > grid.len() {
        return Err(Error::CountExceedsGrid {
            count,
            grid: grid.len(),
        });
    }
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be nonnegative, got {eps}")));
    }
    let errs = grid_errors(grid.points(), fvals, p);
    let plus = alternation_scan(&errs, grid.points(), e, eps, count, 1);
    let minus = alternation_scan(&errs, grid.points(), e, eps, count, -1);
    let both = plus.is_some() && minus.is_some();
    let (nu, points) = match (plus, minus) {
        (Some(pts), _) => (1, pts),
        (None, Some(pts)) => (-1, pts),
        (None, None) => return Ok(None),
    };
    let params = CertificateParams::for_instance(instance)?;
    let grid_max_error = max_abs(&errs);
    let hypothesis_bound = e + alternation_hypothesis_factor(&params, e) * eps;
    Ok(Some(Alternation {
        points,
        nu,
        both_signs_complete: both,
        e,
        eps,
        grid_max_error,
        hypothesis_bound,
        hypotheses_verified: grid_max_error <= hypothesis_bound,
    }))
}

/// Brackets `E` on the grid `Grid::for_instance(instance, grid_eps)`.
pub fn solve_best_approx(instance: &ApproximationInstance, grid_eps: f64) -> Result<BestApproxResult> {
    let grid = Grid::for_instance(instance, grid_eps)?;
    let fvals = instance.f().eval_many(grid.points());
    solve_on_grid(instance, grid_eps, &grid, &fvals)
}

/// As [`solve_best_approx`] on a caller-supplied grid; the bracket is only
/// certified when the grid step is below `χ_{ω,n,M}(grid_eps)`.
pub fn solve_best_approx_on(instance: &ApproximationInstance, grid_eps: f64, grid: &Grid) -> Result<BestApproxResult> {
    check_grid_eps(grid_eps)?;
    let fvals = instance.f().eval_many(grid.points());
    solve_on_grid(instance, grid_eps, grid, &fvals)
}

fn solve_on_grid(instance: &ApproximationInstance, grid_eps: f64, grid: &Grid, fvals: &[f64]) -> Result<BestApproxResult> {
    let k = instance.constraints();
    let (p_star, e_low, lp_trace) = minimax_on_grid(k, grid, fvals)?;
    let poly = Polynomial::new(p_star.clone());
    let grid_max_error = lp_trace.last().map_or(e_low, |r| r.grid_max_error);
    let e_low = e_low.max(0.0);

    let n = instance.n();
    let eps = 2.0 * grid_eps;
    let mu = bounds::f_constant(n) * eps;
    let active_set = active_constraints(&poly, k, mu)?;
    let count = n + 1 - active_set.len();
    let alternation = alternation_with_values(instance, &poly, e_low, eps, count, grid, fvals)?;

    Ok(BestApproxResult {
        p_star_norm_bound: poly.sup_norm_bound(),
        p_star,
        e_low,
        e_high: e_low + grid_eps,
        grid_eps,
        grid: grid.info(),
        grid_max_error,
        norm_cap_m: modulus::norm_cap_m(instance),
        mu,
        active_set,
        alternation,
        lp_trace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifyMode {
    WithL,
    LFree,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    pub grid_eps: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            grid_eps: 1e-3,
            samples: 500,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateSample {
    pub amplitude: f64,
    pub grid_error: f64,
    /// `threshold - grid_error`; admitted iff nonnegative.
    pub margin: f64,
    pub admitted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCheck {
    pub first: usize,
    pub second: usize,
    pub distance: f64,
    /// `δ - distance`; a violation iff negative.
    pub margin: f64,
}

/// Near-optimal pairs: candidates with grid error at most
/// `E_low + Ψ - grid_eps` must lie within `δ` of each other.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairTest {
    pub psi: f64,
    pub threshold: f64,
    pub candidates: Vec<CandidateSample>,
    pub admitted: usize,
    pub pairs: Vec<PairCheck>,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnicitySample {
    pub amplitude: f64,
    pub grid_error: f64,
    pub distance: f64,
    /// `grid_error + 2 grid_eps - (E_low + γ distance)`.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongUnicityTest {
    pub gamma: f64,
    pub samples: Vec<UnicitySample>,
    pub worst_margin: f64,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiStarCheck {
    pub psi_star: f64,
    pub quarter_delta: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificationReport {
    pub mode: CertifyMode,
    pub delta: f64,
    pub seed: u64,
    pub grid_eps: f64,
    pub best: BestApproxResult,
    pub certificate: UniquenessCertificate,
    pub psi_star_check: PsiStarCheck,
    pub pair_test: PairTest,
    pub strong_unicity: Option<StrongUnicityTest>,
    pub violations: usize,
    pub passed: bool,
}

/// Samples `q ∈ K` around `center`: each coefficient moves by up to
/// `amplitude · cap_k / Σ cap`, so the sup norm moves by at most `amplitude`,
/// and the result is projected into `K`.
fn perturb(center: &[f64], weights: &[f64], amplitude: f64, k: &ConstraintSet, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut q: Vec<f64> = center
        .iter()
        .zip(weights)
        .map(|(c, w)| c + amplitude * w * rng.random_range(-1.0..=1.0))
        .collect();
    k.clamp(&mut q);
    q
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

/// `(‖f - q‖_grid, ‖q - p*‖_grid)` in one pass.
fn grid_norms(points: &[f64], fvals: &[f64], pvals: &[f64], q: &Polynomial<f64>) -> (f64, f64) {
    points
        .par_iter()
        .zip(fvals.par_iter().zip(pvals))
        .map(|(x, (f, p))| {
            let v = q.eval(x);
            ((f - v).abs(), (v - p).abs())
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)))
}

/// Brackets `E`, issues a certificate and stress-tests it by sampling.
///
/// `WithL` uses `L = E_low - grid_eps` (rejected when not positive), checks
/// near-optimal pairs against `Ψ(δ, L)` and random `q ∈ K` against the
/// strong unicity inequality. `LFree` checks pairs against `Ψ*(δ)` only.
/// A failed check is reported through `passed = false`; the seed reproduces
/// the run.
pub fn certify_uniqueness(
    instance: &ApproximationInstance,
    delta: f64,
    mode: CertifyMode,
    opts: &CertifyOptions,
) -> Result<CertificationReport> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be finite and nonnegative, got {delta}")));
    }
    let grid_eps = opts.grid_eps;
    let grid = Grid::for_instance(instance, grid_eps)?;
    let fvals = instance.f().eval_many(grid.points());
    let best = solve_on_grid(instance, grid_eps, &grid, &fvals)?;

    let l = match mode {
        CertifyMode::WithL => {
            let l = best.e_low - grid_eps;
            if !(l > 0.0) {
                return Err(Error::NonPositiveL(l));
            }
            Some(l)
        }
        CertifyMode::LFree => None,
    };
    let certificate = UniquenessCertificate::issue(instance, l, &[delta])?;
    let psi_star = certificate.psi_star(delta)?;
    let psi_star_check = PsiStarCheck {
        psi_star,
        quarter_delta: delta / 4.0,
        holds: psi_star <= delta / 4.0,
    };
    let psi = certificate.psi(delta).unwrap_or(psi_star);

    let n = instance.n();
    let k = instance.constraints();
    let caps: Vec<f64> = (0..=n).map(|i| bounds::coefficient_cap(n, i, 1.0)).collect();
    let total: f64 = caps.iter().sum();
    let weights: Vec<f64> = caps.iter().map(|c| c / total).collect();
    let p_star = best.polynomial();
    let pvals: Vec<f64> = grid.points().par_iter().map(|x| p_star.eval(x)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    // pair test; p* itself is candidate 0
    let threshold = best.e_low + psi - grid_eps;
    let mut candidates = vec![];
    let mut admitted_polys = vec![];
    for s in 0..=opts.samples {
        let amplitude = if s == 0 {
            0.0
        } else {
            log_uniform(&mut rng, 1e-12, delta.max(1e-9))
        };
        let q = if s == 0 {
            best.p_star.clone()
        } else {
            perturb(&best.p_star, &weights, amplitude, k, &mut rng)
        };
        let qp = Polynomial::new(q);
        let (grid_error, _) = grid_norms(grid.points(), &fvals, &pvals, &qp);
        let admitted = grid_error <= threshold;
        if admitted {
            admitted_polys.push((candidates.len(), qp));
        }
        candidates.push(CandidateSample {
            amplitude,
            grid_error,
            margin: threshold - grid_error,
            admitted,
        });
    }
    let mut pairs = vec![];
    for (i, (a, pa)) in admitted_polys.iter().enumerate() {
        for (b, pb) in &admitted_polys[i + 1..] {
            let distance = pa.sup_distance_on(pb, grid.points());
            pairs.push(PairCheck {
                first: *a,
                second: *b,
                distance,
                margin: delta - distance,
            });
        }
    }
    let pair_violations = pairs.iter().filter(|p| p.margin < 0.0).count();
    let pair_test = PairTest {
        psi,
        threshold,
        admitted: admitted_polys.len(),
        candidates,
        pairs,
        violations: pair_violations,
    };

    let strong_unicity = certificate.gamma.map(|gamma| {
        let hi = 10.0 * best.norm_cap_m.max(1.0);
        let samples: Vec<UnicitySample> = (0..opts.samples)
            .map(|_| {
                let amplitude = log_uniform(&mut rng, 1e-9, hi);
                let q = Polynomial::new(perturb(&best.p_star, &weights, amplitude, k, &mut rng));
                let (grid_error, distance) = grid_norms(grid.points(), &fvals, &pvals, &q);
                UnicitySample {
                    amplitude,
                    grid_error,
                    distance,
                    margin: grid_error + 2.0 * grid_eps - (best.e_low + gamma * distance),
                }
            })
            .collect();
        let violations = samples.iter().filter(|s| s.margin < 0.0).count();
        let worst_margin = samples.iter().map(|s| s.margin).fold(f64::INFINITY, f64::min);
        StrongUnicityTest {
            gamma,
            samples,
            worst_margin,
            violations,
        }
    });

    let violations = pair_test.violations
        + strong_unicity.as_ref().map_or(0, |s| s.violations)
        + usize::from(!psi_star_check.holds);
    Ok(CertificationReport {
        mode,
        delta,
        seed: opts.seed,
        grid_eps,
        best,
        certificate,
        psi_star_check,
        pair_test,
        strong_unicity,
        violations,
        passed: violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::FunctionSpec;
    use crate::modulus::CoefficientBox;

    fn instance(f: FunctionSpec, k: ConstraintSet, p0: Vec<f64>) -> ApproximationInstance {
        ApproximationInstance::with_natural_modulus(f, k, p0).unwrap()
    }

    fn x2() -> FunctionSpec {
        FunctionSpec::Poly { coeffs: vec![0.0, 0.0, 1.0] }
    }

    #[test]
    fn grid_step_is_strictly_below_bound() {
        let g = Grid::with_step_below(0.25).unwrap();
        assert_eq!(g.len(), 6);
        assert!(g.step() < 0.25);
        assert_eq!(g.points()[0], 0.0);
        assert_eq!(*g.points().last().unwrap(), 1.0);
        assert!(Grid::with_step_below(0.0).is_err());
    }

    #[test]
    fn x_squared_unconstrained() {
        let inst = instance(x2(), ConstraintSet::unconstrained(1), vec![0.0, 0.0]);
        let r = solve_best_approx(&inst, 1e-3).unwrap();
        assert!((r.e_low - 0.125).abs() < 1e-6, "{}", r.e_low);
        assert!(r.e_low <= 0.125 + 1e-9 && 0.125 <= r.e_high);
        assert!((r.p_star[0] + 0.125).abs() < 1e-6 && (r.p_star[1] - 1.0).abs() < 1e-6);
        assert!(r.active_set.is_empty());
        let alt = r.alternation.unwrap();
        assert_eq!(alt.points.len(), 2);
        assert_eq!(alt.points[0].sign, -alt.points[1].sign);
    }

    #[test]
    fn x_squared_with_capped_slope() {
        let k = ConstraintSet::new(1, vec![CoefficientBox::new(1, None, Some(0.5))]).unwrap();
        let inst = instance(x2(), k, vec![0.0, 0.0]);
        let r = solve_best_approx(&inst, 1e-3).unwrap();
        assert!((r.e_low - 9.0 / 32.0).abs() < 1e-6, "{}", r.e_low);
        assert!((r.p_star[1] - 0.5).abs() < 1e-12 && (r.p_star[0] - 7.0 / 32.0).abs() < 1e-6);
        assert_eq!(r.active_set, vec![1]);
    }

    #[test]
    fn zero_error_when_f_is_feasible() {
        let f = FunctionSpec::Poly { coeffs: vec![0.3, -1.0, 0.5] };
        let inst = instance(f, ConstraintSet::unconstrained(2), vec![0.0; 3]);
        let r = solve_best_approx(&inst, 1e-3).unwrap();
        assert!(r.e_low < 1e-9);
        assert!((r.p_star[1] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn active_constraint_examples() {
        let free = ConstraintSet::new(2, vec![CoefficientBox::new(1, None, None)]).unwrap();
        let p = Polynomial::new(vec![0.0, 1.0, 2.0]);
        assert!(active_constraints(&p, &free, 1.0).unwrap().is_empty());

        let mu = 0.1;
        let k = ConstraintSet::new(2, vec![CoefficientBox::new(1, Some(0.0), Some(1.0))]).unwrap();
        let near = Polynomial::new(vec![0.0, 1.0 - mu / 2.0, 0.0]);
        assert_eq!(active_constraints(&near, &k, mu).unwrap(), vec![1]);
        let inside = Polynomial::new(vec![0.0, 0.5, 0.0]);
        assert!(active_constraints(&inside, &k, 0.0).unwrap().is_empty());
        let outside = Polynomial::new(vec![0.0, 1.5, 0.0]);
        assert!(matches!(active_constraints(&outside, &k, 0.0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn alternation_on_classical_error() {
        let inst = instance(x2(), ConstraintSet::unconstrained(1), vec![0.0, 0.0]);
        let grid = Grid::uniform(1000).unwrap();
        let p = Polynomial::new(vec![-0.125, 1.0]);
        let alt = find_alternation(&inst, &p, 0.125, 1e-6, 2, &grid).unwrap().unwrap();
        // error x^2 - x + 1/8 is +1/8 at 0 and 1, -1/8 at 1/2; ν = +1 asks
        // for a negative first slot
        assert_eq!(alt.nu, 1);
        assert!(alt.both_signs_complete);
        assert_eq!((alt.points[0].x, alt.points[1].x), (0.5, 1.0));
        assert_eq!((alt.points[0].sign, alt.points[1].sign), (-1, 1));
        assert!(alt.hypotheses_verified);

        let three = find_alternation(&inst, &p, 0.125, 1e-6, 3, &grid).unwrap().unwrap();
        let xs: Vec<f64> = three.points.iter().map(|a| a.x).collect();
        assert_eq!(three.nu, -1);
        assert!(!three.both_signs_complete);
        assert_eq!(xs, vec![0.0, 0.5, 1.0]);

        let far = Polynomial::new(vec![1.0, 0.0]);
        assert!(find_alternation(&inst, &far, 0.125, 1e-6, 2, &grid).unwrap().is_none());
        assert!(matches!(
            find_alternation(&inst, &p, 0.125, 1e-6, 5000, &grid),
            Err(Error::CountExceedsGrid { .. })
        ));
    }

    #[test]
    fn alternation_degenerate_zero() {
        let inst = instance(FunctionSpec::Poly { coeffs: vec![0.0] }, ConstraintSet::unconstrained(1), vec![0.0, 0.0]);
        let grid = Grid::uniform(10).unwrap();
        let p = Polynomial::new(vec![0.0, 0.0]);
        let alt = find_alternation(&inst, &p, 0.0, 0.0, 4, &grid).unwrap().unwrap();
        assert_eq!(alt.points.len(), 4);
        assert!(alt.both_signs_complete);
        assert_eq!(alt.nu, 1);
    }

    #[test]
    fn certify_x_squared_passes() {
        let inst = instance(x2(), ConstraintSet::unconstrained(1), vec![0.0, 0.0]);
        let opts = CertifyOptions {
            samples: 50,
            ..Default::default()
        };
        let r = certify_uniqueness(&inst, 0.1, CertifyMode::WithL, &opts).unwrap();
        assert!(r.passed);
        assert!(r.certificate.gamma.unwrap() > 0.0);
        assert_eq!(r.strong_unicity.as_ref().unwrap().samples.len(), 50);
        let again = certify_uniqueness(&inst, 0.1, CertifyMode::WithL, &opts).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn certify_rejects_zero_error_with_l() {
        let inst = instance(
            FunctionSpec::Poly { coeffs: vec![1.0, 2.0] },
            ConstraintSet::unconstrained(1),
            vec![0.0, 0.0],
        );
        let opts = CertifyOptions {
            samples: 20,
            ..Default::default()
        };
        assert!(matches!(
            certify_uniqueness(&inst, 0.1, CertifyMode::WithL, &opts),
            Err(Error::NonPositiveL(_))
        ));
        let free = certify_uniqueness(&inst, 0.1, CertifyMode::LFree, &opts).unwrap();
        assert!(free.passed);
        assert!(free.psi_star_check.psi_star <= 0.025);
        assert!(free.strong_unicity.is_none());
    }
}
