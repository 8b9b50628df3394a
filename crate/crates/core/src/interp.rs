//! Interpolation with coefficients forced to zero at prescribed degrees.
//!
//! With the allowed degrees `d_1 > ... > d_{r+1} = 0`, the unique interpolant
//! through `(x_j, α_j)` is
//!
//! ```text
//! p = Σ_j l_j(X; x) · α_j · s_{λ^d}(X, x_1, .., x̂_j, .., x_{r+1}) / s_{λ^d}(x_1, .., x_{r+1})
//! ```
//!
//! i.e. the Lagrange formula with an extra Schur factor per node.

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::schur::{self, DegreeSequence};

/// Below this magnitude a binary64 Schur denominator is not trusted.
pub const FLOAT_DENOMINATOR_FLOOR: f64 = 1e-30;

/// Degrees `{0, ..., n} \ forbidden` in decreasing order. The forbidden set
/// must be strictly increasing, exclude 0, and stay within `n`.
pub fn allowed_degrees(n: usize, forbidden: &[usize]) -> Result<DegreeSequence> {
    if forbidden.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidProblem("forbidden degrees must be strictly increasing".into()));
    }
    if forbidden.first() == Some(&0) {
        return Err(Error::InvalidProblem("the constant term cannot be forbidden".into()));
    }
    if forbidden.last().is_some_and(|&g| g > n) {
        return Err(Error::InvalidProblem(format!("forbidden degree exceeds n = {n}")));
    }
    let exps = (0..=n).rev().filter(|k| !forbidden.contains(k)).collect();
    DegreeSequence::new(exps, n)
}

#[derive(Clone, Debug)]
pub struct InterpolationProblem<T> {
    n: usize,
    forbidden: Vec<usize>,
    nodes: Vec<T>,
    values: Vec<T>,
    degrees: DegreeSequence,
}

impl<T: Scalar> InterpolationProblem<T> {
    pub fn new(n: usize, forbidden: Vec<usize>, nodes: Vec<T>, values: Vec<T>) -> Result<Self> {
        let degrees = allowed_degrees(n, &forbidden)?;
        if nodes.len() != degrees.len() {
            return Err(Error::InvalidProblem(format!(
                "expected {} nodes (n + 1 - l), got {}",
                degrees.len(),
                nodes.len()
            )));
        }
        if values.len() != nodes.len() {
            return Err(Error::InvalidProblem("one value per node".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProblem("nodes must be strictly increasing".into()));
        }
        if nodes.iter().any(|x| *x < T::zero() || *x > T::one()) {
            return Err(Error::InvalidProblem("nodes must lie in [0, 1]".into()));
        }
        Ok(Self {
            n,
            forbidden,
            nodes,
            values,
            degrees,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn forbidden(&self) -> &[usize] {
        &self.forbidden
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// The allowed degrees `d`, decreasing and ending in 0.
    pub fn degrees(&self) -> &DegreeSequence {
        &self.degrees
    }
}

fn check_distinct<T: Scalar>(nodes: &[T]) -> Result<()> {
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::InvalidProblem("repeated node".into()));
            }
        }
    }
    Ok(())
}

/// `l_j(x; nodes) = Π_{i≠j} (x - x_i) / (x_j - x_i)` with 1-based `j`.
pub fn lagrange_basis<T: Scalar>(j: usize, x: &T, nodes: &[T]) -> Result<T> {
    if j == 0 || j > nodes.len() {
        return Err(Error::InvalidArgument(format!("basis index {j} outside 1..={}", nodes.len())));
    }
    check_distinct(nodes)?;
    let xj = &nodes[j - 1];
    Ok(nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j - 1)
        .fold(T::one(), |acc, (_, xi)| {
            acc * (x.clone() - xi.clone()) / (xj.clone() - xi.clone())
        }))
}

/// `l_j(X; nodes)` as a polynomial, 1-based `j`.
pub fn lagrange_basis_poly<T: Scalar>(j: usize, nodes: &[T]) -> Polynomial<T> {
    let xj = &nodes[j - 1];
    nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j - 1)
        .fold(Polynomial::constant(T::one()), |acc, (_, xi)| {
            let scale = T::one() / (xj.clone() - xi.clone());
            // (X - x_i) / (x_j - x_i)
            let factor = Polynomial::new(vec![-xi.clone() * scale.clone(), scale]);
            acc.mul(&factor)
        })
}

fn schur_denominator<T: Scalar>(degrees: &DegreeSequence, nodes: &[T]) -> Result<T> {
    let denom = schur::schur_value(&degrees.to_partition(), nodes)?;
    if denom.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if !T::EXACT && denom.as_f64().abs() < FLOAT_DENOMINATOR_FLOOR {
        return Err(Error::IllConditioned(denom.as_f64()));
    }
    Ok(denom)
}

/// The interpolant of `prob` with zero coefficients at every forbidden
/// degree, assembled from Lagrange and Schur factors.
pub fn constrained_interpolate<T: Scalar>(prob: &InterpolationProblem<T>) -> Result<Polynomial<T>> {
    let nodes = prob.nodes();
    check_distinct(nodes)?;
    let shape = prob.degrees().to_partition();
    let denom = schur_denominator(prob.degrees(), nodes)?;
    let mut p = Polynomial::zero(prob.n());
    for (j, alpha) in prob.values().iter().enumerate() {
        if alpha.is_zero() {
            continue;
        }
        let others: Vec<T> = nodes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, x)| x.clone())
            .collect();
        let schur_factor = schur::schur_in_first_variable(&shape, &others)?;
        let term = lagrange_basis_poly(j + 1, nodes)
            .mul(&schur_factor)
            .scale(&(alpha.clone() / denom.clone()));
        p = p.add(&term);
    }
    Ok(p.with_degree_bound(prob.n()).expect("interpolant degree is at most d_1 <= n"))
}

/// `Π_i (z_i - X) · s_{λ^d}(X, z_1, ..., z_r)`: vanishes exactly at the `z_i`
/// inside `(0, 1)`, has zero coefficients at the forbidden degrees, and has
/// sign `(-1)^j` on the `j`-th gap `(z_j, z_{j+1})` with `z_0 = 0`,
/// `z_{r+1} = 1`.
pub fn oscillator<T: Scalar>(n: usize, forbidden: &[usize], z: &[T]) -> Result<Polynomial<T>> {
    let degrees = allowed_degrees(n, forbidden)?;
    if z.len() + 1 != degrees.len() {
        return Err(Error::InvalidProblem(format!(
            "expected {} interior nodes (n - l), got {}",
            degrees.len() - 1,
            z.len()
        )));
    }
    if z.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidProblem("interior nodes must be strictly increasing".into()));
    }
    if z.iter().any(|x| *x <= T::zero() || *x >= T::one()) {
        return Err(Error::InvalidProblem("interior nodes must lie in (0, 1)".into()));
    }
    let schur_factor = schur::schur_in_first_variable(&degrees.to_partition(), z)?;
    let p = z
        .iter()
        .fold(schur_factor, |acc, zi| acc.mul(&Polynomial::root_factor(zi.clone())));
    Ok(p.with_degree_bound(n).expect("oscillator degree is at most d_1 <= n"))
}

/// Independent route to the same interpolant: solve
/// `Σ_i η_i x_j^{d_i} = α_j` by elimination.
pub fn solve_linear_system_oracle<T: Scalar>(prob: &InterpolationProblem<T>) -> Result<Polynomial<T>> {
    let exps = prob.degrees().exponents();
    let matrix = prob
        .nodes()
        .iter()
        .map(|x| exps.iter().map(|&d| x.powu(d)).collect())
        .collect();
    let eta = linalg::solve(matrix, prob.values().to_vec()).ok_or(Error::SingularSystem)?;
    let mut coeffs = vec![T::zero(); prob.n() + 1];
    for (&d, e) in exps.iter().zip(eta) {
        coeffs[d] = e;
    }
    Ok(Polynomial::new(coeffs))
}
