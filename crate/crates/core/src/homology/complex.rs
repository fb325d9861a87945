use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::matrix::{Coeff, IntMatrix, Matrix, F2};
use super::snf::smith;
use super::{AbelianGroupPresentation, HomologyClass, HomologyError, ReductionMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "F2")]
    F2,
}

/// Boundary maps `∂ₙ : Cₙ → Cₙ₋₁` stored as `dim Cₙ₋₁ × dim Cₙ` matrices.
/// Degrees with no listed map have the zero differential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexRepr", into = "ComplexRepr")]
pub struct ChainComplex {
    ring: Ring,
    maps: BTreeMap<i64, IntMatrix>,
    dims: BTreeMap<i64, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexRepr {
    ring: Ring,
    boundary_maps: BTreeMap<String, IntMatrix>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    dims: BTreeMap<String, usize>,
}

fn parse_degree(key: &str) -> Result<i64, HomologyError> {
    key.trim()
        .parse()
        .map_err(|_| HomologyError::InvalidPresentation(format!("degree key {key:?} is not an integer")))
}

impl TryFrom<ComplexRepr> for ChainComplex {
    type Error = HomologyError;
    fn try_from(repr: ComplexRepr) -> Result<Self, HomologyError> {
        let maps = repr
            .boundary_maps
            .into_iter()
            .map(|(k, m)| Ok((parse_degree(&k)?, m)))
            .collect::<Result<_, HomologyError>>()?;
        let dims = repr
            .dims
            .into_iter()
            .map(|(k, d)| Ok((parse_degree(&k)?, d)))
            .collect::<Result<_, HomologyError>>()?;
        ChainComplex::with_dims(repr.ring, maps, dims)
    }
}

impl From<ChainComplex> for ComplexRepr {
    fn from(c: ChainComplex) -> Self {
        ComplexRepr {
            ring: c.ring,
            boundary_maps: c.maps.into_iter().map(|(k, m)| (k.to_string(), m)).collect(),
            dims: c.dims.into_iter().map(|(k, d)| (k.to_string(), d)).collect(),
        }
    }
}

impl ChainComplex {
    pub fn new(ring: Ring, maps: BTreeMap<i64, IntMatrix>) -> Result<Self, HomologyError> {
        Self::with_dims(ring, maps, BTreeMap::new())
    }

    /// `dims` fixes chain-group ranks that no boundary map determines.
    pub fn with_dims(
        ring: Ring,
        maps: BTreeMap<i64, IntMatrix>,
        dims: BTreeMap<i64, usize>,
    ) -> Result<Self, HomologyError> {
        let maps = match ring {
            Ring::Integers => maps,
            Ring::F2 => maps.into_iter().map(|(k, m)| (k, m.reduce_mod2().lift())).collect(),
        };
        let c = ChainComplex { ring, maps, dims };
        c.validate()?;
        Ok(c)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn boundary_map(&self, n: i64) -> Option<&IntMatrix> {
        self.maps.get(&n)
    }

    fn validate(&self) -> Result<(), HomologyError> {
        for (&n, m) in &self.maps {
            if let Some(&d) = self.dims.get(&n) {
                if d != m.cols() {
                    return Err(HomologyError::DimensionMismatch {
                        context: "declared rank vs boundary map columns",
                        left: d,
                        right: m.cols(),
                    });
                }
            }
            if let Some(&d) = self.dims.get(&(n - 1)) {
                if d != m.rows() {
                    return Err(HomologyError::DimensionMismatch {
                        context: "declared rank vs boundary map rows",
                        left: d,
                        right: m.rows(),
                    });
                }
            }
            if let Some(lower) = self.maps.get(&(n - 1)) {
                if lower.cols() != m.rows() {
                    return Err(HomologyError::DimensionMismatch {
                        context: "consecutive boundary maps",
                        left: lower.cols(),
                        right: m.rows(),
                    });
                }
                let composite = lower.mul(m)?;
                let vanishes = match self.ring {
                    Ring::Integers => composite.is_zero(),
                    Ring::F2 => composite.reduce_mod2().is_zero(),
                };
                if !vanishes {
                    return Err(HomologyError::NotAComplex { degree: n - 1 });
                }
            }
        }
        Ok(())
    }

    /// Rank of the chain group in degree `n`.
    pub fn chain_rank(&self, n: i64) -> Result<usize, HomologyError> {
        if let Some(&d) = self.dims.get(&n) {
            return Ok(d);
        }
        if let Some(m) = self.maps.get(&n) {
            return Ok(m.cols());
        }
        if let Some(m) = self.maps.get(&(n + 1)) {
            return Ok(m.rows());
        }
        Err(HomologyError::UnknownChainGroup(n))
    }

    /// `∂ₙ`, with the zero map substituted when none is listed.
    fn differential(&self, n: i64) -> Result<IntMatrix, HomologyError> {
        match self.maps.get(&n) {
            Some(m) => Ok(m.clone()),
            None => {
                let cols = self.chain_rank(n)?;
                let rows = self.chain_rank(n - 1).unwrap_or(0);
                Ok(IntMatrix::zeros(rows, cols))
            }
        }
    }

    /// Same complex with coefficients reduced to 𝔽₂.
    pub fn mod2(&self) -> ChainComplex {
        ChainComplex {
            ring: Ring::F2,
            maps: self
                .maps
                .iter()
                .map(|(&k, m)| (k, m.reduce_mod2().lift()))
                .collect(),
            dims: self.dims.clone(),
        }
    }

    /// The coefficient map `Hₙ(C; ℤ) → Hₙ(C; 𝔽₂)` in the coordinates both
    /// computations report.
    pub fn reduction_map(&self, n: i64) -> Result<ReductionMap, HomologyError> {
        if self.ring != Ring::Integers {
            return Err(HomologyError::BadReduction(
                "reduction map needs an integral complex".into(),
            ));
        }
        let z = HomologyComputation::new(self, n)?;
        let f2 = HomologyComputation::new(&self.mod2(), n)?;
        let target_dim = f2.group().coordinate_len();
        let mut m = IntMatrix::zeros(target_dim, z.group().coordinate_len());
        for (j, g) in z.generators().iter().enumerate() {
            let image = f2.class_of(g)?;
            for (i, c) in image.coords().iter().enumerate() {
                m[(i, j)] = c.clone();
            }
        }
        ReductionMap::new(z.group().clone(), f2.group().clone(), &m)
    }
}

/// Result of computing `Hₙ` of a complex, retaining what is needed to put
/// cycles into coordinates.
#[derive(Clone, Debug)]
pub struct HomologyComputation {
    ring: Ring,
    degree: n_type::Degree,
    boundary: IntMatrix,
    group: AbelianGroupPresentation,
    // Rows of `V_A` from the kernel rank onward: cycle ↦ kernel coordinates.
    to_kernel: IntMatrix,
    // `U'⁻¹`: kernel coordinates ↦ quotient coordinates before pruning.
    to_quotient: IntMatrix,
    // Which rows of the quotient coordinates survive, with their modulus
    // (`None` for free coordinates).
    kept: Vec<(usize, Option<BigInt>)>,
    generators: Vec<Vec<BigInt>>,
}

mod n_type {
    pub type Degree = i64;
}

impl HomologyComputation {
    pub fn new(c: &ChainComplex, n: i64) -> Result<Self, HomologyError> {
        let a = c.differential(n)?;
        let rank_n = c.chain_rank(n)?;
        let b = match c.maps.get(&(n + 1)) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(rank_n, 0),
        };
        match c.ring {
            Ring::Integers => Self::compute::<BigInt>(c.ring, n, a.clone(), &a, &b),
            Ring::F2 => Self::compute::<F2>(
                c.ring,
                n,
                a.clone(),
                &a.reduce_mod2(),
                &b.reduce_mod2(),
            ),
        }
    }

    fn compute<R: Coeff>(
        ring: Ring,
        degree: i64,
        boundary: IntMatrix,
        a: &Matrix<R>,
        b: &Matrix<R>,
    ) -> Result<Self, HomologyError> {
        let fa = smith(a);
        let r = fa.rank;
        let c = a.cols();
        let to_kernel = fa.v.row_slice(r, c);
        let kernel_basis = fa.v_inv.col_slice(r, c);
        let b_kernel = to_kernel.mul(b)?;
        let fb = smith(&b_kernel);

        let k = c - r;
        let diag = fb.diagonal();
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if !d.is_unit() {
                torsion.push((i, Some(d.to_bigint())));
            }
        }
        for i in fb.rank..k {
            free.push((i, None));
        }

        let is_f2 = ring == Ring::F2;
        let free_count = free.len();
        let factors: Vec<BigInt> = torsion.iter().map(|(_, d)| d.clone().unwrap()).collect();
        let group = if is_f2 {
            AbelianGroupPresentation::f2(free_count)
        } else {
            AbelianGroupPresentation::new(free_count, factors)?
        };
        let kept: Vec<(usize, Option<BigInt>)> = if is_f2 {
            free.into_iter().map(|(i, _)| (i, Some(BigInt::from(2)))).collect()
        } else {
            free.into_iter().chain(torsion).collect()
        };

        // Representative of coordinate j: kernel_basis · U' · e_j.
        let reps = kernel_basis.mul(&fb.u)?;
        let generators = kept
            .iter()
            .map(|&(i, _)| reps.column(i).iter().map(Coeff::to_bigint).collect())
            .collect();

        Ok(HomologyComputation {
            ring,
            degree,
            boundary,
            group,
            to_kernel: to_kernel.map(|x| x.to_bigint()),
            to_quotient: fb.u_inv.map(|x| x.to_bigint()),
            kept,
            generators,
        })
    }

    pub fn group(&self) -> &AbelianGroupPresentation {
        &self.group
    }

    /// One cycle representative per coordinate of the group.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn class_of(&self, z: &[BigInt]) -> Result<HomologyClass, HomologyError> {
        if z.len() != self.boundary.cols() {
            return Err(HomologyError::DimensionMismatch {
                context: "cycle length vs chain rank",
                left: z.len(),
                right: self.boundary.cols(),
            });
        }
        let z: Vec<BigInt> = match self.ring {
            Ring::Integers => z.to_vec(),
            Ring::F2 => z.iter().map(|x| x.mod_floor(&BigInt::from(2))).collect(),
        };
        let mut bd = self.boundary.mul_vec(&z)?;
        if self.ring == Ring::F2 {
            bd = bd.iter().map(|x| x.mod_floor(&BigInt::from(2))).collect();
        }
        if bd.iter().any(|x| !Coeff::is_zero(x)) {
            return Err(HomologyError::NotACycle {
                degree: self.degree,
                boundary: bd,
            });
        }
        let w = self.to_kernel.mul_vec(&z)?;
        let y = self.to_quotient.mul_vec(&w)?;
        HomologyClass::new(
            self.group.clone(),
            self.kept.iter().map(|(i, _)| y[*i].clone()).collect(),
        )
    }
}

/// `Hₙ = ker ∂ₙ / im ∂ₙ₊₁`. Over 𝔽₂ every invariant factor is 2.
pub fn homology_of_complex(c: &ChainComplex, n: i64) -> Result<AbelianGroupPresentation, HomologyError> {
    Ok(HomologyComputation::new(c, n)?.group)
}

/// Coordinates of the class of the cycle `z ∈ Cₙ`.
pub fn class_of_cycle(c: &ChainComplex, z: &[BigInt], n: i64) -> Result<HomologyClass, HomologyError> {
    HomologyComputation::new(c, n)?.class_of(z)
}
