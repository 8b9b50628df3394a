//! Dense univariate polynomials in the monomial basis.

use rayon::prelude::*;

use crate::scalar::Scalar;

/// `coeffs[k]` is the coefficient of `X^k`. The length is the declared
/// degree bound plus one and is kept fixed by the arithmetic helpers below
/// (products grow it).
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial carries at least one coefficient");
        Self { coeffs }
    }

    pub fn zero(degree_bound: usize) -> Self {
        Self::new(vec![T::zero(); degree_bound + 1])
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c - X`.
    pub fn root_factor(c: T) -> Self {
        Self::new(vec![c, -T::one()])
    }

    pub fn monomial(k: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Actual degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_usize(k))
                .collect(),
        )
    }

    /// Pads or truncates to `degree_bound + 1` coefficients. Returns `None`
    /// if truncation would drop a nonzero coefficient.
    pub fn with_degree_bound(mut self, degree_bound: usize) -> Option<Self> {
        if self.coeffs.len() > degree_bound + 1 {
            if self.coeffs[degree_bound + 1..].iter().any(|c| !c.is_zero()) {
                return None;
            }
            self.coeffs.truncate(degree_bound + 1);
        } else {
            self.coeffs.resize(degree_bound + 1, T::zero());
        }
        Some(self)
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        Polynomial::new(self.coeffs.iter().map(Scalar::as_f64).collect())
    }
}

impl Polynomial<f64> {
    /// `max_j |p(t_j)|` over the given points.
    pub fn grid_sup(&self, points: &[f64]) -> f64 {
        points
            .par_iter()
            .map(|x| self.eval(x).abs())
            .reduce(|| 0.0, f64::max)
    }

    /// A guaranteed upper bound for `max_{[0,1]} |p|`.
    ///
    /// Every point of `[0,1]` lies within `h/2` of a node of the uniform grid
    /// with step `h`, and `|p'| <= 2 n^2 ‖p‖` on `[0,1]`, so
    /// `‖p‖ <= grid_sup + h n^2 ‖p‖`. The grid is refined until `h n^2 <= 1/2`.
    pub fn sup_norm_bound(&self) -> f64 {
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return self.coeff(0).abs();
        }
        let n2 = (n * n) as f64;
        let intervals = ((64.0 * n2).ceil() as usize).max(1024);
        let h = 1.0 / intervals as f64;
        let points: Vec<f64> = (0..=intervals).map(|i| i as f64 * h).collect();
        let sup = self.grid_sup(&points);
        let bound = sup / (1.0 - h * n2);
        // absorb evaluation rounding
        bound * (1.0 + 1e-12) + f64::MIN_POSITIVE
    }

    pub fn sup_distance_on(&self, other: &Self, points: &[f64]) -> f64 {
        self.sub(other).grid_sup(points)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn horner_evaluation() {
        let p = Polynomial::new(vec![q(1, 4), q(0, 1), q(-1, 1)]);
        assert_eq!(p.eval(&q(1, 2)), q(0, 1));
        assert_eq!(p.eval(&q(1, 1)), q(-3, 4));
    }

    #[test]
    fn product_and_derivative() {
        let a = Polynomial::root_factor(q(1, 2));
        let b = Polynomial::new(vec![q(1, 2), q(1, 1)]);
        let p = a.mul(&b);
        assert_eq!(p.coeffs(), &[q(1, 4), q(0, 1), q(-1, 1)]);
        assert_eq!(p.derivative().coeffs(), &[q(0, 1), q(-2, 1)]);
    }

    #[test]
    fn degree_bound_padding() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0]);
        assert_eq!(p.clone().with_degree_bound(4).unwrap().coeffs().len(), 5);
        assert_eq!(p.clone().with_degree_bound(1).unwrap().coeffs(), &[1.0, 2.0]);
        assert!(p.with_degree_bound(0).is_none());
    }

    #[test]
    fn sup_norm_bound_is_an_upper_bound() {
        // T_3(2x - 1) = 32x^3 - 48x^2 + 18x - 1, sup norm 1
        let t3 = Polynomial::new(vec![-1.0, 18.0, -48.0, 32.0]);
        let b = t3.sup_norm_bound();
        assert!(b >= 1.0 && b < 1.01, "{b}");
        assert_eq!(Polynomial::new(vec![-2.5]).sup_norm_bound(), 2.5);
    }
}
