//! Partitions, semistandard Young tableaux and Schur polynomials.
//!
//! A strictly decreasing exponent list `h = (h_1 > ... > h_{r+1})` corresponds
//! to the partition `λ^h_i = h_i + i - r - 1`. The Schur polynomial `s_λ` is
//! the sum of `y^T` over all semistandard tableaux `T` of shape `λ` with
//! entries in `{1, ..., r+1}`, and it equals the ratio of the generalized
//! Vandermonde determinant `V(h; y)` to the ordinary one `V(y)`.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Largest shape (in cells) that [`enumerate_ssyt`] and [`schur_eval`] accept.
pub const ENUMERATION_CELL_BUDGET: usize = 24;

/// Largest `n` accepted by [`schur_cap`]; the cap enumerates `2^{n+1} - 1`
/// exponent sets.
pub const SCHUR_CAP_MAX_N: usize = 20;

/// Strictly decreasing exponents `h_1 > ... > h_{r+1}` with `h_1 <= n_cap`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    exps: Vec<usize>,
    n_cap: usize,
}

impl DegreeSequence {
    pub fn new(exps: Vec<usize>, n_cap: usize) -> Result<Self> {
        if exps.is_empty() {
            return Err(Error::InvalidDegrees(exps, "empty sequence"));
        }
        if exps.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidDegrees(exps, "not strictly decreasing"));
        }
        if exps[0] > n_cap {
            return Err(Error::InvalidDegrees(exps, "leading exponent exceeds the degree bound"));
        }
        Ok(Self { exps, n_cap })
    }

    /// Degree bound taken as the leading exponent.
    pub fn tight(exps: Vec<usize>) -> Result<Self> {
        let n_cap = exps.first().copied().unwrap_or(0);
        Self::new(exps, n_cap)
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exps
    }

    pub fn n_cap(&self) -> usize {
        self.n_cap
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn to_partition(&self) -> Partition {
        partition_from_degrees(self)
    }
}

/// A weakly decreasing shape `λ_1 >= ... >= λ_{r+1} >= 0`. Trailing zeros are
/// significant: the length fixes the number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition(parts, "a shape has at least one row"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts, "not weakly decreasing"));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of rows, `r + 1`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn cells(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Inverse of [`partition_from_degrees`]; the degree bound is `h_1`.
    pub fn to_degrees(&self) -> DegreeSequence {
        let r = self.parts.len() - 1;
        let exps = self.parts.iter().enumerate().map(|(i, &l)| l + r - i).collect();
        DegreeSequence::tight(exps).expect("partition maps to a strictly decreasing sequence")
    }
}

/// `λ^h_i = h_i + i - r - 1` (1-based `i`).
pub fn partition_from_degrees(h: &DegreeSequence) -> Partition {
    let r = h.exps.len() - 1;
    Partition {
        parts: h.exps.iter().enumerate().map(|(i, &e)| e + i - r).collect(),
    }
}

/// A semistandard filling. Entries are 1-based, in `{1, ..., r+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
    shape: Partition,
}

impl Tableau {
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// `t_i`, the number of occurrences of `i` (index `i - 1`).
    pub fn content(&self) -> Vec<usize> {
        let mut t = vec![0; self.shape.len()];
        for &v in self.rows.iter().flatten() {
            t[v - 1] += 1;
        }
        t
    }

    /// The monomial `y^T`.
    pub fn monomial<T: Scalar>(&self, y: &[T]) -> T {
        self.rows
            .iter()
            .flatten()
            .fold(T::one(), |acc, &v| acc * y[v - 1].clone())
    }

    pub fn is_semistandard(&self) -> bool {
        let max = self.shape.len();
        let rows_ok = self.rows.iter().zip(self.shape.parts()).all(|(row, &len)| {
            row.len() == len
                && row.iter().all(|&v| (1..=max).contains(&v))
                && row.windows(2).all(|w| w[0] <= w[1])
        });
        let cols_ok = self
            .rows
            .windows(2)
            .all(|pair| pair[1].iter().zip(&pair[0]).all(|(below, above)| below > above));
        rows_ok && cols_ok
    }
}

/// Streams every semistandard tableau of a shape, in lexicographic order of
/// the row-major reading word.
pub struct SsytIter {
    shape: Partition,
    cells: Vec<(usize, usize)>,
    // index into `cells` of the cell directly above, if any
    above: Vec<Option<usize>>,
    upper: Vec<usize>,
    values: Vec<usize>,
    started: bool,
    done: bool,
}

impl SsytIter {
    fn new(shape: Partition) -> Self {
        let max = shape.len();
        let col_height = |c: usize| shape.parts().iter().take_while(|&&l| l > c).count();
        let mut cells = Vec::with_capacity(shape.cells());
        let mut row_start = Vec::with_capacity(shape.len());
        for (i, &l) in shape.parts().iter().enumerate() {
            row_start.push(cells.len());
            cells.extend((0..l).map(|c| (i, c)));
        }
        let above = cells
            .iter()
            .map(|&(i, c)| (i > 0).then(|| row_start[i - 1] + c))
            .collect();
        // column strictness below cell (i, c) forces room for the rows beneath
        let upper = cells.iter().map(|&(i, c)| max - (col_height(c) - 1 - i)).collect();
        let len = cells.len();
        Self {
            shape,
            cells,
            above,
            upper,
            values: vec![0; len],
            started: false,
            done: false,
        }
    }

    fn min_value(&self, k: usize) -> usize {
        let left = match self.cells[k] {
            (_, 0) => 1,
            _ => self.values[k - 1],
        };
        let above = self.above[k].map_or(1, |a| self.values[a] + 1);
        left.max(above)
    }

    fn fill_from(&mut self, start: usize) {
        for k in start..self.cells.len() {
            self.values[k] = self.min_value(k);
        }
    }

    /// Advances to the next filling and exposes it as a flat row-major slice.
    fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_from(0);
            return Some(&self.values);
        }
        for k in (0..self.cells.len()).rev() {
            if self.values[k] < self.upper[k] {
                self.values[k] += 1;
                self.fill_from(k + 1);
                return Some(&self.values);
            }
        }
        self.done = true;
        None
    }

    fn to_tableau(&self) -> Tableau {
        let mut rows: Vec<Vec<usize>> = self.shape.parts().iter().map(|&l| Vec::with_capacity(l)).collect();
        for (&(i, _), &v) in self.cells.iter().zip(&self.values) {
            rows[i].push(v);
        }
        Tableau {
            rows,
            shape: self.shape.clone(),
        }
    }
}

impl Iterator for SsytIter {
    type Item = Tableau;

    fn next(&mut self) -> Option<Tableau> {
        self.advance()?;
        Some(self.to_tableau())
    }
}

fn check_budget(shape: &Partition) -> Result<()> {
    let cells = shape.cells();
    if cells > ENUMERATION_CELL_BUDGET {
        return Err(Error::EnumerationBudget {
            cells,
            budget: ENUMERATION_CELL_BUDGET,
        });
    }
    Ok(())
}

pub fn enumerate_ssyt(shape: &Partition) -> Result<SsytIter> {
    check_budget(shape)?;
    Ok(SsytIter::new(shape.clone()))
}

/// `s_λ(y) = Σ_T y^T` by tableau enumeration.
pub fn schur_eval<T: Scalar>(shape: &Partition, y: &[T]) -> Result<T> {
    if y.len() != shape.len() {
        return Err(Error::PointCount {
            expected: shape.len(),
            got: y.len(),
        });
    }
    check_budget(shape)?;
    let cells = shape.cells();
    // powers[i][e] = y_i^e
    let powers: Vec<Vec<T>> = y
        .iter()
        .map(|yi| {
            let mut row = Vec::with_capacity(cells + 1);
            row.push(T::one());
            for e in 0..cells {
                row.push(row[e].clone() * yi.clone());
            }
            row
        })
        .collect();
    let mut iter = SsytIter::new(shape.clone());
    let mut content = vec![0usize; y.len()];
    let mut total = T::zero();
    while let Some(values) = iter.advance() {
        content.iter_mut().for_each(|t| *t = 0);
        for &v in values {
            content[v - 1] += 1;
        }
        let term = content
            .iter()
            .enumerate()
            .fold(T::one(), |acc, (i, &t)| acc * powers[i][t].clone());
        total = total + term;
    }
    Ok(total)
}

/// `V(y) = Π_{i<j} (y_i - y_j)`.
pub fn vandermonde<T: Scalar>(y: &[T]) -> T {
    let mut v = T::one();
    for i in 0..y.len() {
        for j in i + 1..y.len() {
            v = v * (y[i].clone() - y[j].clone());
        }
    }
    v
}

/// The generalized Vandermonde determinant `V(h; y) = det[y_i^{h_j}]`.
pub fn generalized_vandermonde<T: Scalar>(h: &DegreeSequence, y: &[T]) -> Result<T> {
    if y.len() != h.len() {
        return Err(Error::PointCount {
            expected: h.len(),
            got: y.len(),
        });
    }
    let rows = y
        .iter()
        .map(|yi| h.exponents().iter().map(|&e| yi.powu(e)).collect())
        .collect();
    Ok(T::determinant(rows))
}

/// `s_{λ^h}(y) = V(h; y) / V(y)`; requires pairwise distinct points.
pub fn schur_eval_bialternant<T: Scalar>(h: &DegreeSequence, y: &[T]) -> Result<T> {
    let numerator = generalized_vandermonde(h, y)?;
    let denominator = vandermonde(y);
    if denominator.is_zero() {
        return Err(Error::SingularVandermonde);
    }
    Ok(numerator / denominator)
}

/// Picks the evaluation route: enumeration inside the budget (always for
/// binary64, where the all-positive tableau sum is the stable choice), the
/// bialternant for large exact shapes over distinct points.
pub fn schur_value<T: Scalar>(shape: &Partition, y: &[T]) -> Result<T> {
    const EXACT_ENUMERATION_LIMIT: u32 = 2000;
    let within_budget = shape.cells() <= ENUMERATION_CELL_BUDGET;
    let prefer_bialternant = T::EXACT && tableau_count(shape) > BigUint::from(EXACT_ENUMERATION_LIMIT);
    if within_budget && !prefer_bialternant {
        return schur_eval(shape, y);
    }
    match schur_eval_bialternant(&shape.to_degrees(), y) {
        Err(Error::SingularVandermonde) if within_budget => schur_eval(shape, y),
        other => other,
    }
}

/// `s_λ(X, y_1, ..., y_r)` as a polynomial in `X`, via the branching rule
/// `s_λ(y, X) = Σ_μ X^{|λ| - |μ|} s_μ(y)` over the `μ` interlacing `λ`.
pub fn schur_in_first_variable<T: Scalar>(shape: &Partition, rest: &[T]) -> Result<Polynomial<T>> {
    if rest.len() + 1 != shape.len() {
        return Err(Error::PointCount {
            expected: shape.len() - 1,
            got: rest.len(),
        });
    }
    let parts = shape.parts();
    let total = shape.cells();
    let mut coeffs = vec![T::zero(); parts[0] + 1];
    if rest.is_empty() {
        coeffs[parts[0]] = T::one();
        return Ok(Polynomial::new(coeffs));
    }
    let r = rest.len();
    let mut mu: Vec<usize> = (0..r).map(|i| parts[i + 1]).collect();
    loop {
        let value = schur_value(&Partition { parts: mu.clone() }, rest)?;
        let k = total - mu.iter().sum::<usize>();
        coeffs[k] = coeffs[k].clone() + value;
        // odometer over μ_i ∈ [λ_{i+1}, λ_i]
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(Polynomial::new(coeffs));
            }
            i -= 1;
            if mu[i] < parts[i] {
                mu[i] += 1;
                for (j, m) in mu.iter_mut().enumerate().skip(i + 1) {
                    *m = parts[j + 1];
                }
                break;
            }
        }
    }
}

/// `N_λ = Π_{i<j} (λ_i - λ_j + j - i) / (j - i)`, the number of tableaux.
pub fn tableau_count(shape: &Partition) -> BigUint {
    let parts = shape.parts();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            num *= (parts[i] - parts[j] + j - i) as u64;
            den *= (j - i) as u64;
        }
    }
    num / den
}

/// `N_n`: the largest `N_{λ^h}` over all strictly decreasing `h` drawn from
/// `{0, ..., n}`.
pub fn schur_cap(n: usize) -> Result<BigUint> {
    static CACHE: [OnceLock<BigUint>; SCHUR_CAP_MAX_N + 1] = [const { OnceLock::new() }; SCHUR_CAP_MAX_N + 1];
    if n > SCHUR_CAP_MAX_N {
        return Err(Error::CapTooLarge {
            n,
            max: SCHUR_CAP_MAX_N,
        });
    }
    Ok(CACHE[n].get_or_init(|| compute_schur_cap(n)).clone())
}

fn compute_schur_cap(n: usize) -> BigUint {
    let mut best = BigUint::zero();
    let mut h = Vec::with_capacity(n + 1);
    for mask in 1u32..(1u32 << (n + 1)) {
        h.clear();
        h.extend((0..=n).rev().filter(|&e| mask & (1 << e) != 0));
        // λ_i - λ_j + j - i = h_i - h_j
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for i in 0..h.len() {
            for j in i + 1..h.len() {
                num *= (h[i] - h[j]) as u64;
                den *= (j - i) as u64;
            }
        }
        let count = num / den;
        if count > best {
            best = count;
        }
    }
    best
}
