//! Dense determinants and linear solves for the two arithmetic backends.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Bareiss fraction-free elimination over the integers.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                // exact by Sylvester's identity
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Exact determinant of a rational matrix: each row is scaled to integers by
/// the lcm of its denominators, then Bareiss runs on the integer matrix.
pub fn det_rational(rows: Vec<Vec<BigRational>>) -> BigRational {
    let mut scale = BigInt::one();
    let int_rows: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &lcm;
            row.into_iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect()
        })
        .collect();
    BigRational::new(det_bareiss(int_rows), scale)
}

/// Gaussian elimination with partial pivoting in binary64.
pub fn det_partial_pivot(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs()))
            .unwrap();
        if m[pivot][k] == 0.0 {
            return 0.0;
        }
        if pivot != k {
            m.swap(pivot, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let factor = m[i][k] / m[k][k];
            for j in k + 1..n {
                m[i][j] -= factor * m[k][j];
            }
        }
    }
    det
}

/// Solves `a · x = b` by Gaussian elimination, pivoting on the entry of
/// largest magnitude. Returns `None` for a singular system.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
        a.swap(pivot, k);
        b.swap(pivot, k);
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = a[i][k].clone() / a[k][k].clone();
            for j in k..n {
                let delta = factor.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
            let delta = factor * b[k].clone();
            b[i] = b[i].clone() - delta;
        }
    }
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut acc = b[k].clone();
        for j in k + 1..n {
            acc = acc - a[k][j].clone() * x[j].clone();
        }
        x[k] = acc / a[k][k].clone();
    }
    Some(x)
}
