use ndarray::Array1;
use num_complex::Complex64;
use sprs::{CsMat, TriMat};

pub type SparseMatrix = CsMat<Complex64>;

/// Sparse (CSR) operator on the truncated Fock space.
#[derive(Debug, Clone)]
pub struct FockOperator {
    pub matrix: SparseMatrix,
    pub label: String,
    /// Hermitian by construction; [`FockOperator::hermiticity_residual`] measures it.
    pub hermitian: bool,
}

impl FockOperator {
    pub fn new(matrix: SparseMatrix, label: impl Into<String>, hermitian: bool) -> Self {
        Self {
            matrix,
            label: label.into(),
            hermitian,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        max_abs(&sub(&self.matrix, &adjoint(&self.matrix)))
    }

    /// ⟨0|O|0⟩
    pub fn vacuum_expectation(&self) -> Complex64 {
        self.get(0, 0)
    }

    /// O|0⟩
    pub fn on_vacuum(&self) -> Array1<Complex64> {
        on_vacuum(&self.matrix)
    }
}

pub fn zeros(dim: usize) -> SparseMatrix {
    CsMat::zero((dim, dim))
}

pub fn identity(dim: usize) -> SparseMatrix {
    CsMat::eye(dim)
}

pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, Complex64)>) -> SparseMatrix {
    let mut tri = TriMat::new((dim, dim));
    for (i, j, v) in triplets {
        tri.add_triplet(i, j, v);
    }
    tri.to_csr()
}

pub fn adjoint(m: &SparseMatrix) -> SparseMatrix {
    m.transpose_view().to_csr().map(|v| v.conj())
}

pub fn scale(m: &SparseMatrix, s: Complex64) -> SparseMatrix {
    m.map(|v| v * s)
}

pub fn add(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    a + b
}

pub fn sub(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    a - b
}

pub fn product(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    a * b
}

/// AB + BA
pub fn anticommutator(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    add(&product(a, b), &product(b, a))
}

pub fn max_abs(m: &SparseMatrix) -> f64 {
    m.data().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Maximum entry of |A − B|.
pub fn max_abs_diff(a: &SparseMatrix, b: &SparseMatrix) -> f64 {
    max_abs(&sub(a, b))
}

/// M|0⟩, the first column.
pub fn on_vacuum(m: &SparseMatrix) -> Array1<Complex64> {
    let mut e0 = Array1::zeros(m.cols());
    e0[0] = Complex64::new(1.0, 0.0);
    m * &e0
}

/// ⟨0|AB|0⟩ from the first row of A and the first column of B.
pub fn vacuum_product(a: &SparseMatrix, b: &SparseMatrix) -> Complex64 {
    let column = on_vacuum(b);
    match a.outer_view(0) {
        Some(row) => row.iter().map(|(k, v)| v * column[k]).sum(),
        None => Complex64::new(0.0, 0.0),
    }
}

/// ⟨0|[A, B]|0⟩
pub fn vacuum_commutator_of(a: &SparseMatrix, b: &SparseMatrix) -> Complex64 {
    vacuum_product(a, b) - vacuum_product(b, a)
}
