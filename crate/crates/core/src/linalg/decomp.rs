//! Eigen- and singular-value decompositions, delegated to `nalgebra` and
//! converted back into [`ComplexMatrix`].

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{c64, ComplexMatrix};
use crate::error::{bail, Result};
use crate::TOLERANCE;

fn to_na(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

fn from_na(m: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and a unitary whose columns are
/// the matching eigenvectors.
pub fn eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_hermitian(1e-8) {
        bail!(Contract, "eigh needs a Hermitian matrix");
    }
    let eig = nalgebra::SymmetricEigen::new(to_na(&m.hermitian_part()));
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors =
        ComplexMatrix::from_fn(m.rows(), m.rows(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigh(m)?.0)
}

/// Thin singular-value decomposition `m = U · diag(s) · V†` with `s`
/// descending. Ties keep the order in which the solver produced them.
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v_adjoint: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    let dec = nalgebra::SVD::new_unordered(to_na(m), true, true);
    let u = dec.u.expect("requested U");
    let v_t = dec.v_t.expect("requested V†");
    let k = dec.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    // stable sort: equal values keep first-occurrence order
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    Svd {
        u: ComplexMatrix::from_fn(u.nrows(), k, |r, c| u[(r, order[c])]),
        singular_values: order.iter().map(|&i| dec.singular_values[i]).collect(),
        v_adjoint: ComplexMatrix::from_fn(k, v_t.ncols(), |r, c| v_t[(order[r], c)]),
    }
}

/// `exp(i·t·H)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let (vals, vecs) = eigh(h)?;
    let phases: Vec<Complex64> = vals
        .iter()
        .map(|&v| c64(libm::cos(v * t), libm::sin(v * t)))
        .collect();
    Ok(ComplexMatrix::from_diagonal(&phases).conjugate_by(&vecs))
}

/// Largest |eigenvalue| of a Hermitian matrix.
pub fn hermitian_spectral_norm(h: &ComplexMatrix) -> Result<f64> {
    Ok(eigvalsh(h)?.iter().fold(0.0, |acc, v| acc.max(v.abs())))
}

/// Trace norm `Σ|λᵢ|` of a Hermitian matrix.
pub fn hermitian_trace_norm(h: &ComplexMatrix) -> Result<f64> {
    Ok(eigvalsh(h)?.iter().map(|v| v.abs()).sum())
}

/// Unitary factor of the QR decomposition, with the phases of `R`'s
/// diagonal absorbed so that the map from Ginibre input is Haar.
pub fn qr_unitary(m: &ComplexMatrix) -> ComplexMatrix {
    let qr = nalgebra::QR::new(to_na(m));
    let q = from_na(&qr.q());
    let r = qr.r();
    let n = q.cols();
    ComplexMatrix::from_fn(q.rows(), n, |row, col| {
        let d = r[(col, col)];
        let phase = if d.norm() > TOLERANCE * TOLERANCE {
            d / d.norm()
        } else {
            c64(1.0, 0.0)
        };
        q[(row, col)] * phase
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_reconstructs() {
        let h = ComplexMatrix::from_rows(&[
            &[c64(2.0, 0.0), c64(0.0, 1.0), c64(0.5, 0.0)],
            &[c64(0.0, -1.0), c64(1.0, 0.0), c64(0.0, 0.0)],
            &[c64(0.5, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)],
        ]);
        let (vals, vecs) = eigh(&h).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!(vecs.is_unitary(1e-12));
        let diag = ComplexMatrix::from_real_diagonal(&vals);
        assert!(diag.conjugate_by(&vecs).approx_eq(&h, 1e-12));
        assert!(eigh(&ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])).is_err());
    }

    #[test]
    fn svd_descending_and_reconstructs() {
        let m = ComplexMatrix::from_fn(3, 2, |r, c| c64(r as f64 - c as f64, (r * c) as f64));
        let dec = svd(&m);
        assert!(dec.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let s = ComplexMatrix::from_real_diagonal(&dec.singular_values);
        let back = dec.u.matmul(&s).matmul(&dec.v_adjoint);
        assert!(back.approx_eq(&m, 1e-12));
    }

    #[test]
    fn exponential_is_unitary() {
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let u = exp_i_hermitian(&h, 0.7).unwrap();
        assert!(u.is_unitary(1e-12));
        // exp(iθX) = cos θ I + i sin θ X
        assert!((u[(0, 1)] - c64(0.0, libm::sin(0.7))).norm() < 1e-12);
    }
}
