//! Seeded property suites over every module, used by `uniqmod validate`.
//!
//! Each suite draws its random instances from a ChaCha stream seeded by the
//! caller, so a given `(suite, seed)` always runs the same checks.

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::interp::{self, InterpolationProblem};
use crate::modulus::{ApproximationInstance, CoefficientBox, ConstraintSet};
use crate::poly::Polynomial;
use crate::scalar::{Rational, Scalar};
use crate::schur::{self, DegreeSequence, Partition};
use crate::solver::{self, CertifyMode, CertifyOptions};

pub const SUITES: [&str; 5] = ["schur", "interp", "bounds", "certify", "all"];

/// Inequality checks allow this relative slack.
pub const RELATIVE_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    /// Smallest relative margin over the inequality checks; exact identity
    /// checks carry no margin.
    pub worst_margin: Option<f64>,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self {
            suite: suite.into(),
            checks: 0,
            passed: 0,
            failed: 0,
            worst_margin: None,
            failures: vec![],
        }
    }

    fn exact(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(what());
        }
    }

    /// Records `lhs <= rhs` up to the relative slack.
    fn at_most(&mut self, lhs: f64, rhs: f64, what: impl FnOnce() -> String) {
        let margin = (rhs - lhs) / rhs.abs().max(f64::MIN_POSITIVE);
        self.worst_margin = Some(self.worst_margin.map_or(margin, |m| m.min(margin)));
        self.exact(lhs <= rhs + RELATIVE_SLACK * rhs.abs(), || format!("{}: {lhs:e} > {rhs:e}", what()));
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn run_suite(suite: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    let one = |name: &str| -> Result<SuiteReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match name {
            "schur" => Ok(schur_suite(&mut rng)),
            "interp" => interp_suite(&mut rng),
            "bounds" => bounds_suite(&mut rng),
            "certify" => certify_suite(seed),
            _ => unreachable!(),
        }
    };
    match suite {
        "all" => ["schur", "interp", "bounds", "certify"].into_iter().map(one).collect(),
        s if SUITES.contains(&s) => Ok(vec![one(s)?]),
        s => Err(Error::InvalidArgument(format!(
            "unknown suite {s:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

/// `count` distinct rationals in `[0, 1]`.
fn random_rationals(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let den = rng.random_range(1..=64i64);
        let q = Rational::ratio(rng.random_range(0..=den), den);
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

/// Strictly decreasing `h ⊆ {0..n}` of length `r + 1` containing 0.
fn random_degrees_with_zero(rng: &mut ChaCha8Rng, n: usize) -> DegreeSequence {
    let r = rng.random_range(0..=n);
    let mut pool: Vec<usize> = (1..=n).collect();
    pool.shuffle(rng);
    let mut exps: Vec<usize> = pool[..r].to_vec();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps.push(0);
    DegreeSequence::new(exps, n).expect("valid by construction")
}

/// `count` points in `[0, 1]` with consecutive gaps `>= gap`.
fn spaced_points(rng: &mut ChaCha8Rng, count: usize, gap: f64) -> Vec<f64> {
    let slack = 1.0 - gap * count.saturating_sub(1) as f64;
    let mut u: Vec<f64> = (0..count).map(|_| rng.random_range(0.0..=slack)).collect();
    u.sort_by(f64::total_cmp);
    u.iter().enumerate().map(|(j, v)| v + j as f64 * gap).collect()
}

fn schur_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut rep = SuiteReport::new("schur");

    for mask in 1u32..64 {
        let exps: Vec<usize> = (0..6).rev().filter(|b| mask & (1 << b) != 0).collect();
        let h = DegreeSequence::tight(exps).expect("nonempty subset");
        let shape = h.to_partition();
        for _ in 0..3 {
            let y = random_rationals(rng, h.len());
            let comb = schur::schur_eval(&shape, &y);
            let alt = schur::schur_eval_bialternant(&h, &y);
            rep.exact(comb.is_ok() && comb == alt, || format!("bialternant identity, h = {:?}", h.exponents()));
        }
    }

    for parts in partitions_up_to(8, 4) {
        let shape = Partition::new(parts.clone()).expect("generated partition");
        let enumerated = schur::enumerate_ssyt(&shape).map(|it| it.count());
        let formula = schur::tableau_count(&shape);
        rep.exact(enumerated.is_ok_and(|c| formula == c.into()), || format!("tableau count, λ = {parts:?}"));
    }

    for _ in 0..20 {
        let len = rng.random_range(1..=4);
        let h = random_degrees_with_zero(rng, 5);
        let shape = Partition::new(h.to_partition().parts().iter().copied().take(len).collect()).expect("prefix");
        let y = random_rationals(rng, shape.len());
        let base = schur::schur_eval(&shape, &y).expect("small shape");
        for perm in permutations(shape.len()) {
            let py: Vec<Rational> = perm.iter().map(|&i| y[i].clone()).collect();
            rep.exact(schur::schur_eval(&shape, &py).is_ok_and(|v| v == base), || {
                format!("symmetry, λ = {:?}, permutation {perm:?}", shape.parts())
            });
        }
    }

    for _ in 0..200 {
        let n = rng.random_range(0..=8);
        let h = random_degrees_with_zero(rng, n);
        let shape = h.to_partition();
        let cap = schur::schur_cap(n).expect("n <= 8").to_f64().expect("finite");

        let y: Vec<f64> = (0..h.len()).map(|_| rng.random_range(0.0..=1.0)).collect();
        let s = schur::schur_value(&shape, &y).expect("budget");
        rep.exact(s >= 0.0, || format!("schur value negative: {s}"));
        rep.at_most(s, cap, || format!("upper bound N_{n}, h = {:?}", h.exponents()));

        // at most one coordinate below delta
        let delta = rng.random_range(1e-3f64..=1.0);
        let mut y: Vec<f64> = (0..h.len()).map(|_| rng.random_range(delta..=1.0)).collect();
        y[rng.random_range(0..h.len())] = rng.random_range(0.0..=1.0);
        let s = schur::schur_value(&shape, &y).expect("budget");
        let floor = delta.powf((n * n) as f64 / 4.0);
        rep.at_most(floor, s, || format!("delta floor, h = {:?}, δ = {delta}", h.exponents()));

        // alpha-spaced companions, free point in the admissible set
        let r = h.len() - 1;
        let alpha = rng.random_range(1e-3..=1.0 / (r.max(1) as f64));
        let ys = spaced_points(rng, r, alpha);
        if let Some(x) = admissible_point(rng, &ys, alpha) {
            let mut all = vec![x];
            all.extend(&ys);
            let s = schur::schur_value(&shape, &all).expect("budget");
            let floor = alpha.powf((n * n) as f64 / 4.0);
            rep.at_most(floor, s, || format!("alpha floor, h = {:?}, α = {alpha}", h.exponents()));
        }
    }
    rep
}

fn admissible_point(rng: &mut ChaCha8Rng, centers: &[f64], alpha: f64) -> Option<f64> {
    (0..200)
        .map(|_| rng.random_range(0.0..=1.0))
        .find(|x: &f64| centers.iter().all(|z| (z - x).abs() >= alpha))
}

/// Weakly decreasing sequences of length `len <= max_len` (trailing zeros
/// allowed) with at most `max_cells` cells.
fn partitions_up_to(max_cells: usize, max_len: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, left: usize, max_part: usize, len: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for p in 0..=max_part.min(left) {
            prefix.push(p);
            rec(prefix, left - p, p, len, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    for len in 1..=max_len {
        rec(&mut vec![], max_cells, max_cells, len, &mut out);
    }
    out
}

fn permutations(len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(len - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, len - 1);
            out.push(q);
        }
    }
    out
}

fn random_forbidden(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut f: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.4)).collect();
    f.sort_unstable();
    f
}

fn interp_suite(rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("interp");

    for _ in 0..100 {
        let n = rng.random_range(0..=6);
        let forbidden = random_forbidden(rng, n);
        let count = n + 1 - forbidden.len();
        let mut nodes = random_rationals(rng, count);
        nodes.sort();
        let values: Vec<Rational> = (0..count).map(|_| Rational::ratio(rng.random_range(-20..=20), rng.random_range(1..=9))).collect();
        let prob = InterpolationProblem::new(n, forbidden.clone(), nodes.clone(), values.clone())?;
        let p = interp::constrained_interpolate(&prob)?;
        let oracle = interp::solve_linear_system_oracle(&prob)?;
        rep.exact(p == oracle, || format!("oracle equivalence, n = {n}, forbidden = {forbidden:?}"));
        rep.exact(forbidden.iter().all(|&g| p.coeff(g) == Rational::from_usize(0)), || {
            format!("forbidden coefficients nonzero, n = {n}, forbidden = {forbidden:?}")
        });
        rep.exact(nodes.iter().zip(&values).all(|(x, a)| &p.eval(x) == a), || {
            format!("interpolation conditions, n = {n}")
        });
        if forbidden.is_empty() {
            let mut lagrange = Polynomial::zero(n);
            for (j, a) in values.iter().enumerate() {
                lagrange = lagrange.add(&interp::lagrange_basis_poly(j + 1, &nodes).scale(a));
            }
            rep.exact(lagrange == p, || format!("plain Lagrange reduction, n = {n}"));
        }
    }

    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let forbidden = random_forbidden(rng, n - 1);
        let r = n - forbidden.len();
        let z = random_interior_rationals(rng, r);
        let p = interp::oscillator(n, &forbidden, &z)?;
        let mut edges = vec![Rational::from_usize(0)];
        edges.extend(z.iter().cloned());
        edges.push(Rational::from_usize(1));
        for (j, w) in edges.windows(2).enumerate() {
            let want = if j % 2 == 0 { 1 } else { -1 };
            for _ in 0..20 {
                let t = Rational::ratio(rng.random_range(1..1000), 1000);
                let x = &w[0] + (&w[1] - &w[0]) * t;
                let v = p.eval(&x);
                let sign = if v > Rational::from_usize(0) { 1 } else if v < Rational::from_usize(0) { -1 } else { 0 };
                rep.exact(sign == want, || format!("oscillator sign on interval {j}, n = {n}, forbidden = {forbidden:?}"));
            }
        }
    }
    Ok(rep)
}

/// `count` distinct sorted rationals in `(0, 1)`.
fn random_interior_rationals(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let mut z: Vec<Rational> = Vec::with_capacity(count);
    while z.len() < count {
        let den = rng.random_range(2..=64i64);
        let q = Rational::ratio(rng.random_range(1..den), den);
        if !z.contains(&q) {
            z.push(q);
        }
    }
    z.sort();
    z
}

fn chebyshev_shifted(n: usize) -> Polynomial<f64> {
    // T_{k+1} = 2(2x - 1) T_k - T_{k-1}
    let s = Polynomial::new(vec![-1.0, 2.0]);
    let mut prev = Polynomial::new(vec![1.0]);
    if n == 0 {
        return prev;
    }
    let mut cur = s.clone();
    for _ in 1..n {
        let next = s.mul(&cur).scale(&2.0).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

fn bounds_suite(rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("bounds");
    let grid: Vec<f64> = (0..=10_000).map(|i| i as f64 / 10_000.0).collect();

    for trial in 0..200 {
        let n = rng.random_range(1..=8);
        let p = if trial % 10 == 0 {
            chebyshev_shifted(n)
        } else {
            Polynomial::new((0..=n).map(|_| rng.random_range(-1.0..=1.0)).collect())
        };
        let sup = p.grid_sup(&grid);
        let mut d = p.clone();
        for k in 1..=n {
            d = d.derivative();
            rep.at_most(d.grid_sup(&grid), bounds::markov_derivative_cap(n, k, sup), || {
                format!("derivative cap, n = {n}, k = {k}")
            });
            rep.at_most(p.coeff(k).abs(), bounds::coefficient_cap(n, k, sup), || {
                format!("coefficient cap, n = {n}, k = {k}")
            });
        }
    }

    let families = [
        FunctionSpec::ExpScale { a: 1.0, b: 1.0 },
        FunctionSpec::AbsShift { c: 0.5 },
        FunctionSpec::Sine { a: 3.0, phase: 0.3 },
        FunctionSpec::Poly { coeffs: vec![0.0, 0.0, 1.0] },
    ];
    for _ in 0..100 {
        let f = &families[rng.random_range(0..families.len())];
        let n = rng.random_range(0..=5);
        let m_cap = rng.random_range(0.5..=5.0);
        let raw = Polynomial::new((0..=n).map(|_| rng.random_range(-1.0..=1.0)).collect());
        let p = raw.scale(&(m_cap / raw.sup_norm_bound().max(1e-12)));
        let eps = rng.random_range(1e-3..=1.0);
        let chi = bounds::chi(&f.natural_modulus(), n, m_cap, eps);
        for _ in 0..10 {
            let x = rng.random_range(0.0..=1.0);
            let y = (x + rng.random_range(-1.0..=1.0) * chi * 0.999_999).clamp(0.0, 1.0);
            let diff = ((p.eval(&x) - f.eval(x)) - (p.eval(&y) - f.eval(y))).abs();
            rep.at_most(diff, eps, || format!("chi contract, {f:?}, n = {n}"));
        }
    }

    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let forbidden = random_forbidden(rng, n);
        let count = n + 1 - forbidden.len();
        let beta = rng.random_range(0.05..=1.0 / (count.saturating_sub(1).max(1) as f64));
        let gamma = rng.random_range(0.1..=10.0);
        let cap = schur::schur_cap(n)?.to_f64().expect("finite");
        let tau = bounds::beta_bound_threshold(n, beta, gamma, cap)?;
        let nodes = spaced_points(rng, count, beta);
        let values: Vec<f64> = (0..count).map(|_| rng.random_range(-tau..=tau)).collect();
        let exact = |v: &[f64]| -> Vec<Rational> { v.iter().map(|&x| <Rational as Scalar>::from_float(x)).collect() };
        let prob = InterpolationProblem::new(n, forbidden, exact(&nodes), exact(&values))?;
        let p = interp::constrained_interpolate(&prob)?.to_f64();
        rep.at_most(p.grid_sup(&grid), gamma, || format!("interpolant bound, n = {n}, β = {beta}"));
    }

    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let h = random_degrees_with_zero(rng, n);
        let r = h.len() - 1;
        let alpha = rng.random_range(0.02..=1.0 / (r.max(1) as f64));
        let z = spaced_points(rng, r, alpha);
        let Some(x) = admissible_point(rng, &z, alpha) else { continue };
        let mut all = vec![x];
        all.extend(&z);
        // the oscillator in factored form
        let value = z.iter().map(|zj| zj - x).product::<f64>() * schur::schur_value(&h.to_partition(), &all)?;
        rep.at_most(bounds::oscillator_floor(n, alpha)?, value.abs(), || {
            format!("oscillator floor, h = {:?}, α = {alpha}", h.exponents())
        });
    }
    Ok(rep)
}

fn certify_suite(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("certify");
    let x2 = FunctionSpec::Poly { coeffs: vec![0.0, 0.0, 1.0] };
    let cases = [
        (x2.clone(), ConstraintSet::unconstrained(1), vec![0.0, 0.0], 0.1, CertifyMode::WithL),
        (
            x2,
            ConstraintSet::new(1, vec![CoefficientBox::new(1, None, Some(0.5))])?,
            vec![0.0, 0.0],
            0.5,
            CertifyMode::WithL,
        ),
        (
            FunctionSpec::AbsShift { c: 0.5 },
            ConstraintSet::new(2, vec![CoefficientBox::new(2, None, Some(1.0))])?,
            vec![0.0; 3],
            0.5,
            CertifyMode::LFree,
        ),
    ];
    let opts = CertifyOptions {
        grid_eps: 1e-3,
        samples: 100,
        seed,
    };
    for (f, k, p0, delta, mode) in cases {
        let inst = ApproximationInstance::with_natural_modulus(f.clone(), k, p0)?;
        let report = solver::certify_uniqueness(&inst, delta, mode, &opts)?;
        rep.exact(report.passed, || format!("certificate stress, {f:?}, {mode:?}"));
        rep.at_most(report.psi_star_check.psi_star, delta / 4.0, || format!("psi_star cap, {f:?}"));
        rep.exact(report.best.alternation.is_some(), || format!("alternation, {f:?}"));
        if let Some(su) = &report.strong_unicity {
            rep.worst_margin = Some(rep.worst_margin.map_or(su.worst_margin, |m| m.min(su.worst_margin)));
        }
    }
    Ok(rep)
}
