//! Implicit-shift QL iteration for symmetric tridiagonal matrices, tracking only the
//! first component of each eigenvector (all Golub–Welsch needs).

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Deflation threshold relative to the neighbouring diagonal entries.
const DEFLATION: f64 = 1e2 * f64::EPSILON;
const MAX_SWEEPS: usize = 60;

/// On return `diag` holds the eigenvalues (unsorted) and `first[i]` the first component
/// of the unit eigenvector for `diag[i]`. `off[i]` couples rows `i` and `i + 1`;
/// `off[n - 1]` is ignored. `first` must start as the first row of the identity.
pub(crate) fn eigen_first_components(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    debug_assert_eq!(off.len(), n);
    debug_assert_eq!(first.len(), n);
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= DEFLATION * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: sweeps - 1,
                });
            }
            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let f = first[i + 1];
                first[i + 1] = s * first[i] + c * f;
                first[i] = c * first[i] - s * f;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3 with eigenvectors (1, ∓1)/√2.
        let mut d = [2.0, 2.0];
        let mut e = [1.0, 0.0];
        let mut z = [1.0, 0.0];
        eigen_first_components(&mut d, &mut e, &mut z).unwrap();
        let mut pairs: alloc::vec::Vec<_> = d.iter().zip(z.iter()).map(|(a, b)| (*a, b * b)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!((pairs[0].0 - 1.0).abs() < 1e-14 && (pairs[1].0 - 3.0).abs() < 1e-14);
        assert!((pairs[0].1 - 0.5).abs() < 1e-14 && (pairs[1].1 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn diagonal_matrix_is_left_alone() {
        let mut d = [3.0, -1.0, 4.0];
        let mut e = [0.0; 3];
        let mut z = [1.0, 0.0, 0.0];
        eigen_first_components(&mut d, &mut e, &mut z).unwrap();
        assert_eq!(d, [3.0, -1.0, 4.0]);
        assert_eq!(z, [1.0, 0.0, 0.0]);
    }
}
