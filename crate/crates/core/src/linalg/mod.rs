//! Dense complex linear algebra with composite-system structure.

pub mod decomp;
mod matrix;
mod tensor;

pub(crate) use matrix::require_hermitian;
pub use matrix::{basis_vector, c64, inner, kron_vec, norm, normalized, ComplexMatrix};
pub use num_complex::Complex64;
pub use tensor::{apply_local, embed, kron, kron_all, partial_trace, DimList};

/// Pauli matrices and spin-½ operators (ħ = 1).
pub mod pauli {
    use super::{c64, ComplexMatrix};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            &[c64(0.0, 0.0), c64(0.0, -1.0)],
            &[c64(0.0, 1.0), c64(0.0, 0.0)],
        ])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    /// `σ·d` for a (not necessarily unit) direction `d`.
    pub fn along(d: [f64; 3]) -> ComplexMatrix {
        &(&x().scale_real(d[0]) + &y().scale_real(d[1])) + &z().scale_real(d[2])
    }
}
