use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::{c64, ComplexMatrix};
use crate::error::{bail, Result};

/// Ordered subsystem dimensions of a composite Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimList(Vec<usize>);

impl DimList {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            bail!(Dimension, "a dimension list needs at least one factor");
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            bail!(Dimension, "factor {} has dimension 0", pos + 1);
        }
        Ok(Self(dims))
    }

    /// A single factor of dimension `n`.
    pub fn single(n: usize) -> Self {
        assert!(n > 0);
        Self(vec![n])
    }

    /// `count` copies of a factor of dimension `d`.
    pub fn uniform(d: usize, count: usize) -> Self {
        assert!(d > 0 && count > 0);
        Self(vec![d; count])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension of the ambient space.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn factor(&self, index: usize) -> usize {
        self.0[index]
    }

    /// Row-major strides: the last factor varies fastest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.0.len()];
        for i in (0..self.0.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.0[i + 1];
        }
        strides
    }

    /// Dimension list restricted to the given (sorted) factors.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self(indices.iter().map(|&i| self.0[i]).collect())
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.0.len() {
            bail!(
                Dimension,
                "subsystem index {index} out of range for {} factors",
                self.0.len()
            );
        }
        Ok(())
    }

    /// Sorted, deduplicated copy of `keep`, validated against this list.
    pub(crate) fn normalize_selection(&self, keep: &[usize]) -> Result<Vec<usize>> {
        if keep.is_empty() {
            bail!(Dimension, "the kept subsystem set is empty");
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                bail!(Dimension, "subsystem {} listed twice", w[0]);
            }
        }
        for &k in &sorted {
            self.check_index(k)?;
        }
        Ok(sorted)
    }

    /// Full-space offsets for every multi-index over `factors`.
    fn offsets(&self, factors: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offsets = vec![0usize];
        for &f in factors {
            let d = self.0[f];
            let s = strides[f];
            let mut next = Vec::with_capacity(offsets.len() * d);
            for &o in &offsets {
                for digit in 0..d {
                    next.push(o + digit * s);
                }
            }
            offsets = next;
        }
        offsets
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(a.rows() * br, a.cols() * bc);
    for ar in 0..a.rows() {
        for ac in 0..a.cols() {
            let x = a[(ar, ac)];
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for r in 0..br {
                for c in 0..bc {
                    out[(ar * br + r, ac * bc + c)] = x * b[(r, c)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    let mut iter = factors.iter();
    let first = iter.next().expect("kron_all of an empty list").clone();
    iter.fold(first, |acc, f| kron(&acc, f))
}

fn check_square_total(rho: &ComplexMatrix, dims: &DimList) -> Result<()> {
    if !rho.is_square() || rho.rows() != dims.total() {
        bail!(
            Dimension,
            "operator is {}x{} but the subsystem dimensions {:?} give {}",
            rho.rows(),
            rho.cols(),
            dims.dims(),
            dims.total()
        );
    }
    Ok(())
}

/// Traces out every factor not listed in `keep` (0-based indices).
///
/// Kept factors appear in ascending order in the result regardless of the
/// order given in `keep`.
pub fn partial_trace(rho: &ComplexMatrix, dims: &DimList, keep: &[usize]) -> Result<ComplexMatrix> {
    check_square_total(rho, dims)?;
    let kept = dims.normalize_selection(keep)?;
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let keep_off = dims.offsets(&kept);
    let trace_off = dims.offsets(&traced);
    let n = keep_off.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (r, &ro) in keep_off.iter().enumerate() {
        for (c, &co) in keep_off.iter().enumerate() {
            let mut acc = c64(0.0, 0.0);
            for &t in &trace_off {
                acc += rho[(ro + t, co + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` in slot `target` (0-based).
pub fn embed(op: &ComplexMatrix, dims: &DimList, target: usize) -> Result<ComplexMatrix> {
    dims.check_index(target)?;
    if !op.is_square() || op.rows() != dims.factor(target) {
        bail!(
            Dimension,
            "operator of size {}x{} cannot act on factor {} of dimension {}",
            op.rows(),
            op.cols(),
            target + 1,
            dims.factor(target)
        );
    }
    let left: usize = dims.dims()[..target].iter().product();
    let right: usize = dims.dims()[target + 1..].iter().product();
    let mut m = op.clone();
    if left > 1 {
        m = kron(&ComplexMatrix::identity(left), &m);
    }
    if right > 1 {
        m = kron(&m, &ComplexMatrix::identity(right));
    }
    Ok(m)
}

/// Applies `op` to factor `target` of a state vector without forming the
/// full embedded operator. `op` may be rectangular only if it is square;
/// the factor dimension is preserved.
pub fn apply_local(
    state: &[Complex64],
    dims: &DimList,
    target: usize,
    op: &ComplexMatrix,
) -> Result<Vec<Complex64>> {
    dims.check_index(target)?;
    let d = dims.factor(target);
    if state.len() != dims.total() || !op.is_square() || op.rows() != d {
        bail!(
            Dimension,
            "local operator {}x{} on factor {} (dim {d}) of a length-{} state with dims {:?}",
            op.rows(),
            op.cols(),
            target + 1,
            state.len(),
            dims.dims()
        );
    }
    let right: usize = dims.dims()[target + 1..].iter().product();
    let block = d * right;
    let mut out = vec![c64(0.0, 0.0); state.len()];
    for base in (0..state.len()).step_by(block) {
        for inner in 0..right {
            for r in 0..d {
                let mut acc = c64(0.0, 0.0);
                for c in 0..d {
                    let a = op[(r, c)];
                    if a.re != 0.0 || a.im != 0.0 {
                        acc += a * state[base + c * right + inner];
                    }
                }
                out[base + r * right + inner] = acc;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TOLERANCE;

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn kron_identity_and_dimension_law() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        assert_eq!(
            kron(&pauli_z(), &i2),
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0])
        );
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(4, 5);
        let k = kron(&a, &b);
        assert_eq!((k.rows(), k.cols()), (8, 15));
    }

    #[test]
    fn embed_places_operator() {
        let dims = DimList::new([2, 2]).unwrap();
        let e = embed(&pauli_z(), &dims, 1).unwrap();
        assert_eq!(e, kron(&ComplexMatrix::identity(2), &pauli_z()));
        let dims3 = DimList::new([2, 3, 2]).unwrap();
        for t in 0..3 {
            let id = ComplexMatrix::identity(dims3.factor(t));
            assert_eq!(embed(&id, &dims3, t).unwrap(), ComplexMatrix::identity(12));
        }
        assert!(embed(&pauli_z(), &dims3, 1).is_err());
        assert!(embed(&pauli_z(), &dims3, 3).is_err());
    }

    #[test]
    fn partial_trace_errors() {
        let dims = DimList::new([2, 2]).unwrap();
        let rho = ComplexMatrix::identity(3);
        assert!(partial_trace(&rho, &dims, &[0]).is_err());
        let rho = ComplexMatrix::identity(4);
        assert!(partial_trace(&rho, &dims, &[]).is_err());
        assert!(partial_trace(&rho, &dims, &[2]).is_err());
        assert!(partial_trace(&rho, &dims, &[0, 0]).is_err());
        let full = partial_trace(&rho, &dims, &[1, 0]).unwrap();
        assert!(full.approx_eq(&rho, TOLERANCE));
    }

    #[test]
    fn apply_local_matches_embed() {
        let dims = DimList::new([2, 3, 2]).unwrap();
        let op = ComplexMatrix::from_fn(3, 3, |r, c| c64(r as f64 + 0.5, c as f64 - 1.0));
        let v: Vec<Complex64> = (0..12).map(|i| c64(i as f64, -(i as f64) * 0.3)).collect();
        let direct = apply_local(&v, &dims, 1, &op).unwrap();
        let via = embed(&op, &dims, 1).unwrap().apply(&v);
        for (a, b) in direct.iter().zip(&via) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
