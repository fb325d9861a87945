//! Finitely generated abelian groups, homology classes, and homology of
//! chain complexes over ℤ and ℤ/2.

mod complex;
pub mod matrix;
pub mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json::JsonInt;

pub use complex::{class_of_cycle, homology_of_complex, ChainComplex, HomologyComputation, Ring};
pub use matrix::{Coeff, F2Matrix, IntMatrix, Matrix, F2, MAX_DENSE_DIM};
pub use snf::{smith, smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomologyError {
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch { context: &'static str, left: usize, right: usize },
    #[error("matrix of shape {rows}x{cols} exceeds the dense limit {limit}")]
    TooLarge { rows: usize, cols: usize, limit: usize },
    #[error("sparse entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    EntryOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("boundary maps in degrees {degree} and {} do not compose to zero", degree + 1)]
    NotAComplex { degree: i64 },
    #[error("rank of chain group in degree {0} cannot be determined")]
    UnknownChainGroup(i64),
    #[error("vector is not a cycle in degree {degree}: boundary is {boundary:?}")]
    NotACycle { degree: i64, boundary: Vec<BigInt> },
    #[error("invalid group presentation: {0}")]
    InvalidPresentation(String),
    #[error("class has {found} coordinates, group needs {expected}")]
    CoordinateCount { expected: usize, found: usize },
    #[error("classes live in different groups: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("reduction map is not well defined: {0}")]
    BadReduction(String),
}

/// ℤ^free_rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/dₖ with d₁ | d₂ | … and every dᵢ ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PresentationRepr", into = "PresentationRepr")]
pub struct AbelianGroupPresentation {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl AbelianGroupPresentation {
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self, HomologyError> {
        for (i, d) in invariant_factors.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(HomologyError::InvalidPresentation(format!(
                    "invariant factor {d} at position {i} must be at least 2"
                )));
            }
            if i > 0 && !d.is_multiple_of(&invariant_factors[i - 1]) {
                return Err(HomologyError::InvalidPresentation(format!(
                    "invariant factors must form a divisibility chain, {} does not divide {d}",
                    invariant_factors[i - 1]
                )));
            }
        }
        Ok(AbelianGroupPresentation {
            free_rank,
            invariant_factors,
        })
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupPresentation {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// The 𝔽₂-vector space of the given dimension.
    pub fn f2(dim: usize) -> Self {
        AbelianGroupPresentation {
            free_rank: 0,
            invariant_factors: vec![BigInt::from(2); dim],
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn from_i64(free_rank: usize, factors: &[i64]) -> Result<Self, HomologyError> {
        Self::new(free_rank, factors.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// Number of coordinates of an element: free coordinates first, then
    /// one per invariant factor.
    pub fn coordinate_len(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Dimension as an 𝔽₂-vector space, if the group is one.
    pub fn f2_dim(&self) -> Option<usize> {
        let two = BigInt::from(2);
        (self.free_rank == 0 && self.invariant_factors.iter().all(|d| *d == two))
            .then_some(self.invariant_factors.len())
    }

    pub fn is_trivial(&self) -> bool {
        self.coordinate_len() == 0
    }

    /// Number of even invariant factors (the 2-primary cyclic summands).
    pub fn even_factor_count(&self) -> usize {
        self.invariant_factors.iter().filter(|d| d.is_even()).count()
    }

    fn canonical_coord(&self, index: usize, value: &BigInt) -> BigInt {
        if index < self.free_rank {
            value.clone()
        } else {
            value.mod_floor(&self.invariant_factors[index - self.free_rank])
        }
    }
}

impl fmt::Display for AbelianGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum PresentationRepr {
    F2 {
        f2_dim: usize,
    },
    Full {
        #[serde(default)]
        free_rank: usize,
        #[serde(default)]
        invariant_factors: Vec<JsonInt>,
    },
}

impl TryFrom<PresentationRepr> for AbelianGroupPresentation {
    type Error = HomologyError;
    fn try_from(repr: PresentationRepr) -> Result<Self, HomologyError> {
        match repr {
            PresentationRepr::Full {
                free_rank,
                invariant_factors,
            } => Self::new(free_rank, invariant_factors.into_iter().map(|d| d.0).collect()),
            PresentationRepr::F2 { f2_dim } => Ok(Self::f2(f2_dim)),
        }
    }
}

impl From<AbelianGroupPresentation> for PresentationRepr {
    fn from(g: AbelianGroupPresentation) -> Self {
        PresentationRepr::Full {
            free_rank: g.free_rank,
            invariant_factors: g.invariant_factors.into_iter().map(JsonInt).collect(),
        }
    }
}

/// An element of a presented group, in canonical coordinates: torsion
/// coordinates lie in `[0, dᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    group: AbelianGroupPresentation,
    coords: Vec<BigInt>,
}

impl HomologyClass {
    pub fn new(group: AbelianGroupPresentation, coords: Vec<BigInt>) -> Result<Self, HomologyError> {
        if coords.len() != group.coordinate_len() {
            return Err(HomologyError::CoordinateCount {
                expected: group.coordinate_len(),
                found: coords.len(),
            });
        }
        let coords = coords
            .iter()
            .enumerate()
            .map(|(i, c)| group.canonical_coord(i, c))
            .collect();
        Ok(HomologyClass { group, coords })
    }

    pub fn from_i64(group: &AbelianGroupPresentation, coords: &[i64]) -> Result<Self, HomologyError> {
        Self::new(group.clone(), coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(group: &AbelianGroupPresentation) -> Self {
        HomologyClass {
            group: group.clone(),
            coords: vec![<BigInt as Zero>::zero(); group.coordinate_len()],
        }
    }

    pub fn group(&self) -> &AbelianGroupPresentation {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_same_group(&self, other: &Self) -> Result<(), HomologyError> {
        if self.group != other.group {
            return Err(HomologyError::GroupMismatch(
                self.group.to_string(),
                other.group.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, HomologyError> {
        self.check_same_group(other)?;
        Self::new(
            self.group.clone(),
            self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.group.clone(), self.coords.iter().map(|c| -c).collect())
            .expect("same coordinate count")
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        Self::new(self.group.clone(), self.coords.iter().map(|c| c * &k).collect())
            .expect("same coordinate count")
    }

    /// True when the class has order dividing 2 in its group.
    pub fn is_two_torsion(&self) -> bool {
        self.scale(2).is_zero()
    }
}

/// Equality after canonical reduction. Errors when the groups differ.
pub fn classes_equal(a: &HomologyClass, b: &HomologyClass) -> Result<bool, HomologyError> {
    a.check_same_group(b)?;
    Ok(a.coords == b.coords)
}

/// A homomorphism from an integral group to an 𝔽₂ group, given on
/// coordinates by a 0/1 matrix (target rows, source columns).
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionMap {
    source: AbelianGroupPresentation,
    target: AbelianGroupPresentation,
    matrix: F2Matrix,
}

impl ReductionMap {
    pub fn new(
        source: AbelianGroupPresentation,
        target: AbelianGroupPresentation,
        matrix: &IntMatrix,
    ) -> Result<Self, HomologyError> {
        let Some(dim) = target.f2_dim() else {
            return Err(HomologyError::BadReduction(format!(
                "target {target} is not an F2 vector space"
            )));
        };
        if matrix.shape() != (dim, source.coordinate_len()) {
            return Err(HomologyError::DimensionMismatch {
                context: "reduction matrix shape",
                left: matrix.rows() * 1000 + matrix.cols(),
                right: dim * 1000 + source.coordinate_len(),
            });
        }
        let matrix = matrix.reduce_mod2();
        // A cyclic summand of odd order admits only the zero map to 𝔽₂.
        for (k, d) in source.invariant_factors().iter().enumerate() {
            let col = source.free_rank() + k;
            if d.is_odd() && (0..dim).any(|i| matrix[(i, col)] == F2::ONE) {
                return Err(HomologyError::BadReduction(format!(
                    "nonzero image of the Z/{d} summand (coordinate {col})"
                )));
            }
        }
        Ok(ReductionMap { source, target, matrix })
    }

    /// Entrywise reduction on free coordinates, for ℤⁿ → 𝔽₂ⁿ.
    pub fn identity(rank: usize) -> Self {
        ReductionMap {
            source: AbelianGroupPresentation::free(rank),
            target: AbelianGroupPresentation::f2(rank),
            matrix: F2Matrix::identity(rank),
        }
    }

    pub fn source(&self) -> &AbelianGroupPresentation {
        &self.source
    }

    pub fn target(&self) -> &AbelianGroupPresentation {
        &self.target
    }

    pub fn matrix(&self) -> IntMatrix {
        self.matrix.lift()
    }
}

/// Image of an integral class under a mod-2 reduction map.
pub fn mod2_reduce(c: &HomologyClass, map: &ReductionMap) -> Result<HomologyClass, HomologyError> {
    if c.group != map.source {
        return Err(HomologyError::GroupMismatch(
            c.group.to_string(),
            map.source.to_string(),
        ));
    }
    let v: Vec<F2> = c.coords.iter().map(F2::from_bigint).collect();
    let image = map.matrix.mul_vec(&v)?;
    HomologyClass::new(map.target.clone(), image.iter().map(F2::to_bigint).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentation_validation() {
        assert!(AbelianGroupPresentation::from_i64(1, &[2, 4]).is_ok());
        assert!(AbelianGroupPresentation::from_i64(0, &[2, 3]).is_err());
        assert!(AbelianGroupPresentation::from_i64(0, &[1]).is_err());
        assert!(AbelianGroupPresentation::from_i64(0, &[0]).is_err());
    }

    #[test]
    fn f2_dimension_accessor() {
        assert_eq!(AbelianGroupPresentation::f2(3).f2_dim(), Some(3));
        assert_eq!(AbelianGroupPresentation::free(1).f2_dim(), None);
        assert_eq!(AbelianGroupPresentation::from_i64(0, &[2, 4]).unwrap().f2_dim(), None);
        let parsed: AbelianGroupPresentation = serde_json::from_str(r#"{"f2_dim": 2}"#).unwrap();
        assert_eq!(parsed, AbelianGroupPresentation::f2(2));
    }

    #[test]
    fn class_equality_reduces_torsion() {
        let g = AbelianGroupPresentation::from_i64(0, &[2]).unwrap();
        let a = HomologyClass::from_i64(&g, &[1]).unwrap();
        let b = HomologyClass::from_i64(&g, &[3]).unwrap();
        assert!(classes_equal(&a, &b).unwrap());
        assert!(classes_equal(&a, &a).unwrap());
    }

    #[test]
    fn distinct_basis_vectors_differ() {
        let g = AbelianGroupPresentation::f2(2);
        let a = HomologyClass::from_i64(&g, &[1, 0]).unwrap();
        let b = HomologyClass::from_i64(&g, &[0, 1]).unwrap();
        assert!(!classes_equal(&a, &b).unwrap());
    }

    #[test]
    fn group_mismatch_is_an_error() {
        let a = HomologyClass::zero(&AbelianGroupPresentation::f2(1));
        let b = HomologyClass::zero(&AbelianGroupPresentation::free(1));
        assert!(matches!(classes_equal(&a, &b), Err(HomologyError::GroupMismatch(..))));
    }

    #[test]
    fn wrong_coordinate_count_rejected() {
        let g = AbelianGroupPresentation::free(2);
        assert!(matches!(
            HomologyClass::from_i64(&g, &[1]),
            Err(HomologyError::CoordinateCount { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn reduction_examples() {
        let map = ReductionMap::identity(2);
        let z = AbelianGroupPresentation::free(2);
        let c = HomologyClass::from_i64(&z, &[3, -1]).unwrap();
        let r = mod2_reduce(&c, &map).unwrap();
        assert_eq!(r.coords(), &[BigInt::from(1), BigInt::from(1)]);
        assert!(mod2_reduce(&HomologyClass::zero(&z), &map).unwrap().is_zero());
        assert!(mod2_reduce(&c.scale(2), &map).unwrap().is_zero());
    }

    #[test]
    fn reduction_rejects_odd_torsion_image() {
        let src = AbelianGroupPresentation::from_i64(0, &[3]).unwrap();
        let m = IntMatrix::from_i64_rows(&[vec![1]]).unwrap();
        assert!(ReductionMap::new(src, AbelianGroupPresentation::f2(1), &m).is_err());
    }

    #[test]
    fn reduction_dimension_mismatch() {
        let map = ReductionMap::identity(2);
        let c = HomologyClass::zero(&AbelianGroupPresentation::free(3));
        assert!(mod2_reduce(&c, &map).is_err());
    }
}
