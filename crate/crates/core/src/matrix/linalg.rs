use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, MatrixError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankProfile {
    pub rank: usize,
    /// Nonincreasing.
    pub singular_values: Vec<f64>,
    pub tolerance: f64,
}

struct Svd {
    u: DMatrix<Complex64>,
    sigma: DVector<f64>,
    v_t: DMatrix<Complex64>,
}

// nalgebra's complex SVD can lose most of its accuracy on small
// rank-deficient inputs, so the factorization itself goes through faer.
fn svd(a: &ComplexMatrix) -> Svd {
    let m = a.inner();
    let f = faer::Mat::<faer::c64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let d = f.svd().expect("SVD of a finite matrix");
    let (u, s, v) = (d.U(), d.S(), d.V());
    let r = m.nrows().min(m.ncols());
    // Singular values come back nonincreasing.
    Svd {
        u: DMatrix::from_fn(m.nrows(), m.nrows(), |i, j| u[(i, j)]),
        sigma: DVector::from_fn(r, |i, _| s[i].re),
        v_t: DMatrix::from_fn(m.ncols(), m.ncols(), |i, j| v[(j, i)].conj()),
    }
}

fn default_cut(a: &ComplexMatrix, sigma_max: f64) -> f64 {
    let dim = a.nrows().max(a.ncols()) as f64;
    (dim * f64::EPSILON * sigma_max).max(f64::MIN_POSITIVE)
}

fn resolve_cut(
    a: &ComplexMatrix,
    sigma: &DVector<f64>,
    tol: Option<f64>,
) -> Result<f64, MatrixError> {
    match tol {
        Some(t) if t.is_finite() && t > 0.0 => Ok(t),
        Some(t) => Err(MatrixError::BadTolerance(t)),
        None => Ok(default_cut(a, sigma.iter().copied().fold(0.0, f64::max))),
    }
}

/// Numerical rank: the number of singular values above `tol`.
///
/// Without `tol` the cut is `max(rows, cols) · ε · σ_max`.
pub fn rank(a: &ComplexMatrix, tol: Option<f64>) -> Result<RankProfile, MatrixError> {
    let sigma = svd(a).sigma;
    let cut = resolve_cut(a, &sigma, tol)?;
    let mut singular_values: Vec<f64> = sigma.iter().copied().collect();
    singular_values.sort_by(|x, y| y.total_cmp(x));
    Ok(RankProfile {
        rank: singular_values.iter().filter(|&&s| s > cut).count(),
        singular_values,
        tolerance: cut,
    })
}

pub(crate) fn rank_of(a: &ComplexMatrix, tol: Option<f64>) -> Result<usize, MatrixError> {
    rank(a, tol).map(|p| p.rank)
}

/// Moore–Penrose inverse, dropping singular values at or below the rank cut.
pub fn pinv(a: &ComplexMatrix, tol: Option<f64>) -> Result<ComplexMatrix, MatrixError> {
    let Svd { u, sigma, v_t } = svd(a);
    let cut = resolve_cut(a, &sigma, tol)?;
    let mut out = DMatrix::<Complex64>::zeros(a.ncols(), a.nrows());
    for (i, &s) in sigma.iter().enumerate() {
        if s > cut {
            let v = v_t.row(i).adjoint();
            let u_i = u.column(i).adjoint();
            out += (v * u_i).map(|z| z / s);
        }
    }
    Ok(ComplexMatrix(out))
}

/// The canonical `{1,3}`-inverse, which is the pseudoinverse.
pub fn i13(a: &ComplexMatrix, tol: Option<f64>) -> Result<ComplexMatrix, MatrixError> {
    pinv(a, tol)
}

/// The member `A† + (I − A†A)Z` of the `{1,3}`-inverse family of `A`.
///
/// Every `{1,3}`-inverse has this form; `z` must be `cols(A) × rows(A)`.
pub fn i13_family(
    a: &ComplexMatrix,
    z: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<ComplexMatrix, MatrixError> {
    if z.nrows() != a.ncols() || z.ncols() != a.nrows() {
        return Err(MatrixError::Dimension(format!(
            "parameter is {}x{}, expected {}x{}",
            z.nrows(),
            z.ncols(),
            a.ncols(),
            a.nrows()
        )));
    }
    let p = pinv(a, tol)?;
    let comp = &ComplexMatrix::identity(a.ncols()) - &(&p * a);
    Ok(&p + &(&comp * z))
}

/// Orthogonal projector `M M†` onto the column space of `M`.
pub fn projector(m: &ComplexMatrix, tol: Option<f64>) -> Result<ComplexMatrix, MatrixError> {
    Ok(m * &pinv(m, tol)?)
}

/// `‖P_X − P_Y‖_F` between the dominant `r`-dimensional column spaces of
/// `X` and `Y`, where `r = rk(Y)` under `tol`.
///
/// Zero exactly when `X` has rank `r` and the same column space as `Y`.
/// Fixing `r` from the reference keeps rounding noise in `X` from counting
/// as extra rank.
pub fn range_residual(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<f64, MatrixError> {
    if x.nrows() != y.nrows() {
        return Err(MatrixError::Dimension(format!(
            "{} rows vs {} rows",
            x.nrows(),
            y.nrows()
        )));
    }
    let sy = svd(y);
    let cut = resolve_cut(y, &sy.sigma, tol)?;
    let r = sy.sigma.iter().filter(|&&s| s > cut).count();
    let top = |u: &DMatrix<Complex64>| {
        let u = u.columns(0, r);
        u * u.adjoint()
    };
    Ok((top(&svd(x).u) - top(&sy.u)).norm())
}

/// Largest singular value.
pub(crate) fn spectral_norm(a: &ComplexMatrix) -> f64 {
    svd(a).sigma.iter().copied().fold(0.0, f64::max)
}

/// Orthonormal basis of the null space of `a`, as columns.
pub(crate) fn null_basis(
    a: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<DMatrix<Complex64>, MatrixError> {
    // Pad to square so that the SVD yields a full set of right vectors.
    let n = a.ncols();
    let padded = if a.nrows() < n {
        a.vstack(&ComplexMatrix::zeros(n - a.nrows(), n))
    } else {
        a.clone()
    };
    let Svd { sigma, v_t, .. } = svd(&padded);
    let cut = resolve_cut(a, &sigma, tol)?;
    let cols: Vec<DVector<Complex64>> = (0..n)
        .filter(|&i| sigma.get(i).is_none_or(|&s| s <= cut))
        .map(|i| v_t.row(i).adjoint())
        .collect();
    Ok(if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    })
}

/// Orthonormal basis of the column space of `a`.
pub(crate) fn range_basis(
    a: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<DMatrix<Complex64>, MatrixError> {
    let Svd { u, sigma, .. } = svd(a);
    let cut = resolve_cut(a, &sigma, tol)?;
    let cols: Vec<DVector<Complex64>> = sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cut)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    Ok(if cols.is_empty() {
        DMatrix::zeros(a.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift3() -> ComplexMatrix {
        &ComplexMatrix::unit(3, 0, 1) + &ComplexMatrix::unit(3, 1, 2)
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&ComplexMatrix::identity(3), None).unwrap().rank, 3);
        assert_eq!(rank(&shift3(), None).unwrap().rank, 2);
        let z = rank(&ComplexMatrix::zeros(3, 3), None).unwrap();
        assert_eq!(z.rank, 0);
        assert!(z.tolerance > 0.0);
        assert!(matches!(
            rank(&shift3(), Some(-1.0)),
            Err(MatrixError::BadTolerance(_))
        ));
    }

    #[test]
    fn singular_values_sorted() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 5.0]).unwrap();
        let p = rank(&a, None).unwrap();
        assert!((p.singular_values[0] - 5.0).abs() < 1e-12);
        assert!((p.singular_values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pinv_known_values() {
        let i = ComplexMatrix::identity(3);
        assert!(pinv(&i, None).unwrap().max_abs_diff(&i) < 1e-14);
        let e13 = ComplexMatrix::unit(3, 0, 2);
        assert!(
            pinv(&e13, None)
                .unwrap()
                .max_abs_diff(&ComplexMatrix::unit(3, 2, 0))
                < 1e-14
        );
        assert_eq!(
            pinv(&ComplexMatrix::zeros(2, 3), None).unwrap(),
            ComplexMatrix::zeros(3, 2)
        );
    }

    #[test]
    fn rectangular_pinv() {
        let a =
            ComplexMatrix::from_rows(&[vec![Complex64::new(1.0, 1.0), Complex64::new(2.0, 0.0)]])
                .unwrap();
        let p = pinv(&a, None).unwrap();
        assert_eq!((p.nrows(), p.ncols()), (2, 1));
        assert!((&(&a * &p) * &a).max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn projectors() {
        let i = ComplexMatrix::identity(3);
        assert!(projector(&i, None).unwrap().max_abs_diff(&i) < 1e-14);
        let p = projector(&ComplexMatrix::unit(3, 0, 2), None).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::unit(3, 0, 0)) < 1e-14);
        assert_eq!(
            projector(&ComplexMatrix::zeros(3, 3), None).unwrap(),
            ComplexMatrix::zeros(3, 3)
        );
    }

    #[test]
    fn family_members_are_one_three_inverses() {
        let a = shift3();
        let z = ComplexMatrix::from_real(3, 3, &[1.0, -2.0, 0.5, 3.0, 0.0, 1.0, -1.0, 2.0, 4.0])
            .unwrap();
        let g = i13_family(&a, &z, None).unwrap();
        assert!((&(&a * &g) * &a).max_abs_diff(&a) < 1e-12);
        let ag = &a * &g;
        assert!(ag.max_abs_diff(&ag.adjoint()) < 1e-12);
        assert!(g.max_abs_diff(&pinv(&a, None).unwrap()) > 0.1);
        assert!(i13_family(&a, &ComplexMatrix::zeros(2, 3), None).is_err());
    }

    #[test]
    fn bases() {
        let a = shift3();
        assert_eq!(null_basis(&a, None).unwrap().ncols(), 1);
        assert_eq!(range_basis(&a, None).unwrap().ncols(), 2);
        assert_eq!(
            null_basis(&ComplexMatrix::identity(2), None)
                .unwrap()
                .ncols(),
            0
        );
        assert!(
            range_residual(
                &a,
                &ComplexMatrix::unit(3, 0, 0).hstack(&ComplexMatrix::unit(3, 1, 1)),
                None
            )
            .unwrap()
                < 1e-12
        );
    }
}
