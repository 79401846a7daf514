//! Exact linear algebra over ℤ, ℚ and 𝔽_p.

pub mod field;
pub mod snf;
pub mod sparse;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::space::Grade;

pub use field::{dense_kernel, dense_rank, rref, solve, Field, FieldKind, PrimeField, Rationals};
pub use snf::{integer_kernel, invariant_factors_of_diagonal, rank_over_field, snf};
pub use sparse::{FieldMatrix, SparseIntMatrix};

/// A finitely generated abelian group `ℤ^betti ⊕ ⊕ ℤ/t_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homology {
    pub betti: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl Homology {
    pub fn zero() -> Self {
        Homology { betti: 0, torsion: Vec::new() }
    }

    pub fn free(betti: usize) -> Self {
        Homology { betti, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Homology of a graded complex at bidegree `(n, grade)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologySummary {
    pub n: usize,
    pub grade: Grade,
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologySummary {
    pub fn new(n: usize, grade: Grade, h: Homology) -> Self {
        HomologySummary { n, grade, betti: h.betti, torsion: h.torsion }
    }

    pub fn homology(&self) -> Homology {
        Homology { betti: self.betti, torsion: self.torsion.clone() }
    }
}

/// `H_n = ker ∂_n / im ∂_{n+1}` for free chain groups on explicit bases.
///
/// `boundary` is `∂_n : C_n → C_{n-1}` and `next` is `∂_{n+1} : C_{n+1} → C_n`.
pub fn homology_at(boundary: &SparseIntMatrix, next: &SparseIntMatrix, dim: usize) -> Result<Homology> {
    check_shapes(boundary, next, dim)?;
    if !boundary.mul(next).is_zero() {
        return Err(Error::NotAComplex);
    }
    let rank_out = rank_over_field(boundary, FieldKind::Rationals)?;
    let factors = snf(next);
    let rank_in = factors.len();
    let torsion = factors.into_iter().filter(|f| !f.is_one()).collect();
    Ok(Homology { betti: dim - rank_out - rank_in, torsion })
}

/// Dimension of `H_n` over a field.
pub fn homology_dim_over(
    boundary: &SparseIntMatrix,
    next: &SparseIntMatrix,
    dim: usize,
    field: FieldKind,
) -> Result<usize> {
    check_shapes(boundary, next, dim)?;
    Ok(dim - rank_over_field(boundary, field)? - rank_over_field(next, field)?)
}

fn check_shapes(boundary: &SparseIntMatrix, next: &SparseIntMatrix, dim: usize) -> Result<()> {
    if boundary.cols() != dim || next.rows() != dim {
        return Err(Error::ShapeMismatch(format!(
            "boundaries {:?} and {:?} do not meet a chain group of rank {dim}",
            boundary.shape(),
            next.shape()
        )));
    }
    Ok(())
}
