//! Reproducible probe poles on `S^d`.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::sphere::SpherePoint;

const PRIMES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
    109, 113, 127, 131,
];

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    acc
}

/// Halton points of the cube `[-1, 1]^{d+1}`, radially projected onto `S^d`.
///
/// The sequence starts at index `seed + 1`; points too close to the origin are skipped.
/// Supports `d + 1 ≤ 32`.
pub fn probe_poles(d: usize, count: usize, seed: u64) -> Vec<SpherePoint> {
    assert!(d < PRIMES.len(), "probe poles support d <= {}", PRIMES.len() - 1);
    let mut out = Vec::with_capacity(count);
    let mut index = seed.wrapping_add(1);
    while out.len() < count {
        let v: Vec<f64> = PRIMES[..=d]
            .iter()
            .map(|&b| 2.0 * radical_inverse(index, b) - 1.0)
            .collect();
        index = index.wrapping_add(1);
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        out.push(SpherePoint::new(v).expect("nonzero vector"));
    }
    out
}

/// Uniform point on `S^d` from `d + 1` standard normal draws.
pub fn uniform_point<R: RngCore>(d: usize, rng: &mut R) -> SpherePoint {
    loop {
        let v: Vec<f64> = (0..=d).map(|_| StandardNormal.sample(rng)).collect();
        if let Ok(p) = SpherePoint::new(v) {
            return p;
        }
    }
}

/// `count` independent uniform poles from a seeded ChaCha stream.
pub fn random_poles(d: usize, count: usize, seed: u64) -> Vec<SpherePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| uniform_point(d, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_probes_are_unit_and_deterministic() {
        let a = probe_poles(3, 50, 11);
        let b = probe_poles(3, 50, 11);
        assert_eq!(a, b);
        assert_ne!(a, probe_poles(3, 50, 12));
        for p in &a {
            let n: f64 = p.coords().iter().map(|c| c * c).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(4, 2), 0.125);
    }
}
