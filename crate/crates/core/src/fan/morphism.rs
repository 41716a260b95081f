use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{cone_interior_point, weyl_chamber_fan, Cone, Fan, WeylFan};
use crate::error::{Error, Result};
use crate::lattice::{dual_basis, kernel_basis, lattices_equal, rational_rank, solve_left, IntMatrix, IntVector};
use crate::par::{self, Strategy};
use crate::root_system::{RootSystem, Subsystem};

/// A map of fans: a lattice map `ν` (applied to column vectors) and, for
/// each maximal cone of the source, the smallest target cone containing
/// its image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanMorphism {
    pub lattice_map: IntMatrix,
    pub cone_image: Vec<Cone>,
}

impl FanMorphism {
    /// Induces the cone map from `map`; the target must be simplicial.
    pub fn induced(source: &Fan, target: &Fan, map: IntMatrix, strategy: Strategy) -> Result<Self> {
        if map.ncols() != source.rank() || map.nrows() != target.rank() {
            return Err(Error::DimensionMismatch {
                expected: source.rank(),
                got: map.ncols(),
            });
        }
        let cones: Vec<Cone> = source
            .max_cones()
            .iter()
            .map(|m| Cone::new(m.clone()))
            .collect();
        let cone_image = par::map(strategy, &cones, |c| {
            let v = map.apply(&cone_interior_point(source, c));
            target.minimal_containing_cone(&v.to_rational())
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok(FanMorphism {
            lattice_map: map,
            cone_image,
        })
    }

    /// Every ray of every source cone maps into the recorded image cone.
    pub fn is_compatible(&self, source: &Fan, target: &Fan) -> bool {
        source.max_cones().iter().zip(&self.cone_image).all(|(m, img)| {
            m.iter().all(|&i| {
                let w = self.lattice_map.apply(&source.rays()[i]);
                target.cone_contains(img, &w.to_rational())
            })
        })
    }

    /// Number of source maximal cones mapped onto each target maximal cone.
    pub fn fiber_counts(&self, target: &Fan) -> Vec<usize> {
        target
            .max_cones()
            .iter()
            .map(|m| {
                self.cone_image
                    .iter()
                    .filter(|c| &c.ray_indices == m)
                    .count()
            })
            .collect()
    }
}

/// The morphism `Σ(R) → Σ(R')` for the subsystem `R' = R ∩ E'`.
#[derive(Clone, Debug)]
pub struct SubsystemMorphism {
    pub subsystem: Subsystem,
    pub source: WeylFan,
    pub target: WeylFan,
    pub morphism: FanMorphism,
}

/// `E'` is the rational span of the rows of `subspace_basis` (ambient
/// coordinates). `ν(v)` pairs `v` with the base simple roots of `R'`.
pub fn subsystem_morphism(
    r: &RootSystem,
    subspace_basis: &IntMatrix,
    strategy: Strategy,
) -> Result<SubsystemMorphism> {
    if subspace_basis.ncols() != r.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: r.ambient_dim(),
            got: subspace_basis.ncols(),
        });
    }
    let dim = subspace_basis.rank();
    let in_span = |i: usize| {
        let rows = subspace_basis.rows();
        solve_left(rows, &r.root(i).to_rational()).is_some()
    };
    let sub = r.subsystem(in_span)?;
    if sub.system.rank() != dim {
        return Err(Error::NotRootSpan);
    }
    let mu = IntMatrix::new(
        sub.system
            .base()
            .iter()
            .map(|&i| r.mcoords(sub.parent_index[i]).clone())
            .collect(),
        r.rank(),
    )?;
    let source = weyl_chamber_fan(r, strategy);
    let target = weyl_chamber_fan(&sub.system, strategy);
    let morphism = FanMorphism::induced(&source.fan, &target.fan, mu, strategy)?;
    Ok(SubsystemMorphism {
        subsystem: sub,
        source,
        target,
        morphism,
    })
}

/// The map `M(R') → M(R)` (rows: images of the base simple roots of `R'` in
/// root lattice coordinates of `R`) induced by an ambient linear map whose
/// rows are the images of the ambient unit vectors of `R'`.
pub fn lattice_map_from_ambient(r_prime: &RootSystem, r: &RootSystem, ambient: &IntMatrix) -> Result<IntMatrix> {
    if ambient.nrows() != r_prime.ambient_dim() || ambient.ncols() != r.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: r_prime.ambient_dim(),
            got: ambient.nrows(),
        });
    }
    let base: Vec<IntVector> = r.base().iter().map(|&i| r.root(i).clone()).collect();
    let rows = r_prime
        .base()
        .iter()
        .map(|&i| {
            let image = ambient.left_mul(r_prime.root(i));
            solve_left(&base, &image.to_rational())
                .and_then(|x| x.to_integer())
                .ok_or_else(|| Error::NotRootCompatible(format!("{image} is not in the root lattice")))
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::new(rows, r.rank())
}

/// `x^{lhs} = x^{rhs}`, exponents keyed by root index of `R'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binomial {
    pub lhs: Vec<(usize, BigInt)>,
    pub rhs: Vec<(usize, BigInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartEquations {
    /// The chart of `X(R')`, as sorted root indices of `R'`.
    pub chart: Vec<usize>,
    pub equations: Vec<Binomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingEquations {
    /// Basis of `ker(μ) ∩ M(R')`, in root lattice coordinates of `R'`.
    pub kernel: IntMatrix,
    pub charts: Vec<ChartEquations>,
}

impl EmbeddingEquations {
    /// Homogeneous equations when `R'` is a product of copies of `A_1`: a
    /// kernel vector `c` gives `∏ z_{±α_i}^{|c_i|} = ∏ z_{∓α_i}^{|c_i|}` with
    /// the upper sign where `c_i > 0`.
    pub fn homogeneous(&self, r_prime: &RootSystem) -> Option<Vec<Binomial>> {
        let base = r_prime.base();
        let orthogonal = base
            .iter()
            .enumerate()
            .all(|(a, &i)| base[a + 1..].iter().all(|&j| r_prime.inner(i, j).is_zero()));
        if !orthogonal || r_prime.num_roots() != 2 * base.len() {
            return None;
        }
        Some(
            self.kernel
                .rows()
                .iter()
                .map(|k| {
                    let mut lhs = Vec::new();
                    let mut rhs = Vec::new();
                    for (c, &s) in k.0.iter().zip(base) {
                        if c.is_zero() {
                            continue;
                        }
                        let (plus, minus) = if c.is_positive() {
                            (s, r_prime.negation(s))
                        } else {
                            (r_prime.negation(s), s)
                        };
                        lhs.push((plus, c.abs()));
                        rhs.push((minus, c.abs()));
                    }
                    Binomial { lhs, rhs }
                })
                .collect(),
        )
    }
}

/// Equations of the closed embedding `X(R) → X(R')` for `μ: M(R') → M(R)`
/// given by the images of the base simple roots of `R'`.
pub fn projection_embedding_equations(
    r: &RootSystem,
    r_prime: &RootSystem,
    mu: &IntMatrix,
) -> Result<EmbeddingEquations> {
    if mu.nrows() != r_prime.rank() || mu.ncols() != r.rank() {
        return Err(Error::DimensionMismatch {
            expected: r_prime.rank(),
            got: mu.nrows(),
        });
    }
    let mut hit = vec![false; r.num_roots()];
    for i in 0..r_prime.num_roots() {
        let image = mu.left_mul(r_prime.mcoords(i));
        if image.is_zero() {
            continue;
        }
        let g = image.content();
        let primitive = IntVector(image.0.iter().map(|x| x / &g).collect());
        let j = r
            .index_of_mcoords(&primitive)
            .ok_or_else(|| Error::NotRootCompatible(format!("image {image} of a root is not a multiple of a root")))?;
        if g == BigInt::from(1) {
            hit[j] = true;
        }
    }
    if !lattices_equal(mu, &IntMatrix::identity(r.rank()))? {
        return Err(Error::NotSurjective);
    }
    if let Some(j) = hit.iter().position(|h| !h) {
        return Err(Error::NotRootCompatible(format!(
            "root {} is not the image of a root",
            r.root(j)
        )));
    }
    let kernel = kernel_basis(mu);
    debug_assert_eq!(
        kernel.nrows(),
        r_prime.rank() - rational_rank(
            mu.rows()
                .iter()
                .map(|row| row.to_rational().0)
                .collect()
        )
    );
    let charts = r_prime
        .enumerate_simple_root_sets()
        .into_iter()
        .map(|s| {
            let rays = dual_basis(&r_prime.simple_set_matrix(&s)).expect("simple sets are unimodular");
            let equations = kernel
                .rows()
                .iter()
                .map(|k| {
                    let coeffs = rays.apply(k);
                    let mut lhs = Vec::new();
                    let mut rhs = Vec::new();
                    for (c, &root) in coeffs.0.iter().zip(&s.root_indices) {
                        if c.is_positive() {
                            lhs.push((root, c.clone()));
                        } else if c.is_negative() {
                            rhs.push((root, -c));
                        }
                    }
                    Binomial { lhs, rhs }
                })
                .collect();
            ChartEquations {
                chart: s.root_indices,
                equations,
            }
        })
        .collect();
    Ok(EmbeddingEquations { kernel, charts })
}
