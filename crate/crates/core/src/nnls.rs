//! Lawson–Hanson active-set solver for `min ‖A x − b‖₂` subject to `x ≥ 0`.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Dense column-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ColMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ColMatrix {
    pub fn from_columns(rows: usize, columns: impl IntoIterator<Item = Vec<f64>>) -> Self {
        let mut data = Vec::new();
        let mut cols = 0;
        for c in columns {
            assert_eq!(c.len(), rows, "column length");
            data.extend(c);
            cols += 1;
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (o, a) in out.iter_mut().zip(self.column(j)) {
                    *o += a * xj;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    /// False when the iteration cap stopped the solver before the KKT conditions held.
    pub converged: bool,
}

/// Least squares on the columns in `set` by Householder QR; `None` if rank deficient.
fn least_squares(a: &ColMatrix, set: &[usize], b: &[f64]) -> Option<Vec<f64>> {
    let m = a.rows();
    let k = set.len();
    let mut q: Vec<Vec<f64>> = set.iter().map(|&j| a.column(j).to_vec()).collect();
    let mut rhs = b.to_vec();
    let col_scale = q
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    for i in 0..k {
        if i >= m {
            return None;
        }
        let norm = q[i][i..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-13 * col_scale.max(f64::MIN_POSITIVE) {
            return None;
        }
        let alpha = if q[i][i] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = q[i][i..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for col in q.iter_mut().skip(i) {
                let dotp: f64 = v.iter().zip(&col[i..]).map(|(a, b)| a * b).sum();
                let f = 2.0 * dotp / vnorm2;
                for (c, vv) in col[i..].iter_mut().zip(&v) {
                    *c -= f * vv;
                }
            }
            let dotp: f64 = v.iter().zip(&rhs[i..]).map(|(a, b)| a * b).sum();
            let f = 2.0 * dotp / vnorm2;
            for (c, vv) in rhs[i..].iter_mut().zip(&v) {
                *c -= f * vv;
            }
        }
    }
    let mut z = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = rhs[i];
        for j in i + 1..k {
            s -= q[j][i] * z[j];
        }
        z[i] = s / q[i][i];
    }
    Some(z)
}

fn residual(a: &ColMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let ax = a.mul_vec(x);
    b.iter().zip(ax).map(|(bi, ai)| bi - ai).collect()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Lawson–Hanson NNLS. `max_iterations` bounds the number of outer (column-adding) steps.
pub fn nnls(a: &ColMatrix, b: &[f64], max_iterations: usize) -> NnlsSolution {
    let n = a.cols();
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    // columns whose addition failed to produce a positive coefficient
    let mut blocked = vec![false; n];
    let a_scale = (0..n)
        .map(|j| norm2(a.column(j)))
        .fold(0.0f64, f64::max);
    let tol = 10.0 * f64::EPSILON * a_scale * (a.rows().max(n) as f64) * norm2(b).max(1.0);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        let r = residual(a, &x, b);
        let (mut best, mut best_j) = (tol, None);
        for j in 0..n {
            if passive[j] || blocked[j] {
                continue;
            }
            let w: f64 = a.column(j).iter().zip(&r).map(|(p, q)| p * q).sum();
            if w > best {
                best = w;
                best_j = Some(j);
            }
        }
        let Some(j) = best_j else {
            converged = true;
            break;
        };
        iterations += 1;
        passive[j] = true;

        let mut first_pass = true;
        loop {
            let set: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let z = least_squares(a, &set, b);
            let rejected = match &z {
                None => true,
                Some(z) => first_pass && z[set.iter().position(|&i| i == j).unwrap()] <= 0.0,
            };
            if rejected {
                // dependent or immediately infeasible column: undo, skip until x changes
                passive[j] = false;
                blocked[j] = true;
                break;
            }
            let z = z.unwrap();
            first_pass = false;
            if z.iter().all(|&v| v > 0.0) {
                for (&i, &v) in set.iter().zip(&z) {
                    x[i] = v;
                }
                blocked.iter_mut().for_each(|f| *f = false);
                break;
            }
            let mut step = f64::INFINITY;
            let mut blocking = j;
            for (&i, &v) in set.iter().zip(&z) {
                if v <= 0.0 {
                    let t = x[i] / (x[i] - v);
                    if t < step {
                        step = t;
                        blocking = i;
                    }
                }
            }
            for (&i, &v) in set.iter().zip(&z) {
                x[i] += step * (v - x[i]);
                if i == blocking || x[i] <= 0.0 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
    let residual_norm = norm2(&residual(a, &x, b));
    NnlsSolution {
        x,
        residual_norm,
        iterations,
        converged,
    }
}
