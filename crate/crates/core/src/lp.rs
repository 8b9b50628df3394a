//! Dense primal simplex for small linear programs of the form
//!
//! ```text
//! maximize c·x  subject to  A x <= b,  x >= 0,  with b >= 0
//! ```
//!
//! `b >= 0` makes the origin feasible, so the slack basis is a valid start and
//! no phase one is needed. Pivoting uses the largest reduced cost and falls
//! back to Bland's rule after a run of degenerate pivots.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const DEGENERATE_RUN: usize = 32;
const MAX_ITERATIONS: usize = 100_000;

#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            rows: vec![],
            rhs: vec![],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row · x <= rhs`; `rhs` must be nonnegative.
    pub fn add_row(&mut self, row: Vec<f64>, rhs: f64) -> Result<()> {
        if row.len() != self.num_vars() {
            return Err(Error::LpFailure(format!(
                "row has {} entries, expected {}",
                row.len(),
                self.num_vars()
            )));
        }
        if !(rhs >= 0.0 && rhs.is_finite()) || row.iter().any(|v| !v.is_finite()) {
            return Err(Error::LpFailure(format!("row must be finite with rhs >= 0, got rhs {rhs}")));
        }
        self.rows.push(row);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn solve(&self) -> Result<LpSolution> {
        let (m, n) = (self.num_rows(), self.num_vars());
        let width = n + m + 1;
        // rows 0..m are constraints, row m is the objective (reduced costs)
        let mut t = vec![0.0; (m + 1) * width];
        for (i, row) in self.rows.iter().enumerate() {
            t[i * width..i * width + n].copy_from_slice(row);
            t[i * width + n + i] = 1.0;
            t[i * width + width - 1] = self.rhs[i];
        }
        for (j, c) in self.objective.iter().enumerate() {
            t[m * width + j] = -c;
        }
        let mut basis: Vec<usize> = (n..n + m).collect();

        let mut degenerate = 0;
        for iterations in 0..MAX_ITERATIONS {
            let obj = &t[m * width..m * width + width - 1];
            let entering = if degenerate >= DEGENERATE_RUN {
                obj.iter().position(|&v| v < -PIVOT_EPS)
            } else {
                obj.iter()
                    .enumerate()
                    .filter(|(_, &v)| v < -PIVOT_EPS)
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(j, _)| j)
            };
            let Some(col) = entering else {
                let mut x = vec![0.0; n];
                for (i, &b) in basis.iter().enumerate() {
                    if b < n {
                        x[b] = t[i * width + width - 1];
                    }
                }
                let objective = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                return Ok(LpSolution {
                    x,
                    objective,
                    iterations,
                });
            };

            // ratio test; ties go to the smallest basic index (Bland)
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = t[i * width + col];
                if a > PIVOT_EPS {
                    let ratio = t[i * width + width - 1] / a;
                    let better = match leave {
                        None => true,
                        Some((r, best)) => ratio < best - 1e-14 || (ratio <= best + 1e-14 && basis[i] < basis[r]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, ratio)) = leave else {
                return Err(Error::LpFailure(format!("unbounded along column {col}")));
            };
            degenerate = if ratio <= 1e-14 { degenerate + 1 } else { 0 };

            let p = t[row * width + col];
            for v in &mut t[row * width..(row + 1) * width] {
                *v /= p;
            }
            let pivot_row = t[row * width..(row + 1) * width].to_vec();
            for i in 0..=m {
                if i == row {
                    continue;
                }
                let factor = t[i * width + col];
                if factor != 0.0 {
                    for (v, pv) in t[i * width..(i + 1) * width].iter_mut().zip(&pivot_row) {
                        *v -= factor * pv;
                    }
                    t[i * width + col] = 0.0;
                }
            }
            // clean tiny negative right-hand sides left by cancellation
            for i in 0..m {
                let b = &mut t[i * width + width - 1];
                if *b < 0.0 && *b > -1e-12 {
                    *b = 0.0;
                }
            }
            basis[row] = col;
        }
        Err(Error::LpFailure(format!(
            "no convergence after {MAX_ITERATIONS} pivots ({m} rows, {n} columns)"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[f64], rows: &[(&[f64], f64)]) -> LinearProgram {
        let mut p = LinearProgram::new(c.to_vec());
        for (r, b) in rows {
            p.add_row(r.to_vec(), *b).unwrap();
        }
        p
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18: optimum (2, 6) -> 36
        let s = lp(&[3.0, 5.0], &[(&[1.0, 0.0], 4.0), (&[0.0, 2.0], 12.0), (&[3.0, 2.0], 18.0)])
            .solve()
            .unwrap();
        assert!((s.objective - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_vertex() {
        // several constraints meet at the origin
        let s = lp(
            &[1.0, 1.0],
            &[(&[1.0, -1.0], 0.0), (&[-1.0, 1.0], 0.0), (&[1.0, 1.0], 2.0), (&[1.0, 0.0], 5.0)],
        )
        .solve()
        .unwrap();
        assert!((s.objective - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_is_reported() {
        let r = lp(&[1.0, 1.0], &[(&[1.0, -1.0], 1.0)]).solve();
        assert!(matches!(r, Err(Error::LpFailure(_))));
    }

    #[test]
    fn rejects_negative_rhs() {
        let mut p = LinearProgram::new(vec![1.0]);
        assert!(p.add_row(vec![1.0], -1.0).is_err());
        assert!(p.add_row(vec![1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn agrees_with_vertex_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let c = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let mut rows: Vec<([f64; 2], f64)> = (0..4)
                .map(|_| ([rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)], rng.random_range(0.0..2.0)))
                .collect();
            // keep the region bounded
            rows.push(([1.0, 1.0], 3.0));
            let mut prog = LinearProgram::new(c.to_vec());
            for (r, b) in &rows {
                prog.add_row(r.to_vec(), *b).unwrap();
            }
            let got = prog.solve().unwrap().objective;

            // every vertex is the intersection of two of the lines, x = 0 and y = 0 included
            let mut lines: Vec<([f64; 2], f64)> = rows.clone();
            lines.push(([-1.0, 0.0], 0.0));
            lines.push(([0.0, -1.0], 0.0));
            let mut best = f64::NEG_INFINITY;
            for i in 0..lines.len() {
                for j in i + 1..lines.len() {
                    let ([a, b], e) = lines[i];
                    let ([c2, d], f) = lines[j];
                    let det = a * d - b * c2;
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let x = (e * d - b * f) / det;
                    let y = (a * f - e * c2) / det;
                    if lines.iter().all(|([p, q], r)| p * x + q * y <= r + 1e-9) {
                        best = best.max(c[0] * x + c[1] * y);
                    }
                }
            }
            assert!((got - best).abs() < 1e-9, "{got} vs {best}");
        }
    }
}
