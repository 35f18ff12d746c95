//! Seeded random complex matrices for sweeps and benchmarks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::ComplexMatrix;

/// Entries with independent standard normal real and imaginary parts.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, nrows: usize, ncols: usize) -> ComplexMatrix {
    let m = DMatrix::from_fn(nrows, ncols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    ComplexMatrix::new(m).expect("normal samples are finite")
}

/// An `n × n` matrix of rank `min(r, n)`, as a product of `n × r` and `r × n` Gaussian factors.
pub fn gaussian_rank<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize) -> ComplexMatrix {
    if r == 0 {
        return ComplexMatrix::zeros(n, n);
    }
    &gaussian(rng, n, r) * &gaussian(rng, r, n)
}

/// A Haar-like random unitary, the `Q` factor of a Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix(gaussian(rng, n, n).into_inner().qr().q())
}

/// `U diag(s_1, ..., s_r, 0, ...) V*` with unitary `U`, `V` and `s_i` uniform in `[lo, hi]`.
///
/// Unlike [`gaussian_rank`], the nonzero singular values stay in a known band.
pub fn banded_rank<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    r: usize,
    lo: f64,
    hi: f64,
) -> ComplexMatrix {
    let u = unitary(rng, n);
    let v = unitary(rng, n);
    let d = DMatrix::from_fn(n, n, |i, j| {
        if i == j && i < r {
            Complex64::new(rng.random_range(lo..=hi), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    &(&u * &ComplexMatrix(d)) * &v.adjoint()
}

/// A vector of `n` standard complex normal entries.
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rank;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn banded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = unitary(&mut rng, 4);
        assert!((&q.adjoint() * &q).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        let m = banded_rank(&mut rng, 5, 3, 0.5, 2.0);
        let p = rank(&m, None).unwrap();
        assert_eq!(p.rank, 3);
        assert!(p.singular_values[0] <= 2.0 + 1e-12 && p.singular_values[2] >= 0.5 - 1e-12);
    }

    #[test]
    fn prescribed_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in 0..=4 {
            assert_eq!(rank(&gaussian_rank(&mut rng, 4, r), None).unwrap().rank, r);
        }
    }

    #[test]
    fn seeded_is_reproducible() {
        let a = gaussian(&mut ChaCha8Rng::seed_from_u64(1), 3, 3);
        let b = gaussian(&mut ChaCha8Rng::seed_from_u64(1), 3, 3);
        assert_eq!(a, b);
    }
}
