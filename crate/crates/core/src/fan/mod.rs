//! Fans in `N(R)`, the fan of Weyl chambers, and fan morphisms.

mod morphism;
mod orbit;

pub use morphism::{
    lattice_map_from_ambient, projection_embedding_equations, subsystem_morphism, Binomial,
    ChartEquations, EmbeddingEquations, FanMorphism, SubsystemMorphism,
};
pub use orbit::{opposite_sections, orbit_closure, OppositeSections, OrbitChart, OrbitClosure};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{kernel_basis, solve_left, IntMatrix, IntVector, RatVector};
use crate::par::{self, Strategy};
use crate::root_system::{RootSystem, SimpleRootSet};

/// A cone of a fan, as a sorted set of ray indices. The empty set is the
/// zero cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    pub ray_indices: Vec<usize>,
}

impl Cone {
    pub fn new(mut ray_indices: Vec<usize>) -> Self {
        ray_indices.sort_unstable();
        ray_indices.dedup();
        Cone { ray_indices }
    }

    pub fn zero() -> Self {
        Cone {
            ray_indices: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.ray_indices.len()
    }

    pub fn is_face_of(&self, other: &[usize]) -> bool {
        self.ray_indices
            .iter()
            .all(|i| other.binary_search(i).is_ok())
    }
}

/// A fan given by primitive rays and maximal cones, in canonical order:
/// rays sorted lexicographically, each cone sorted, cone list sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    rank: usize,
    rays: Vec<IntVector>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Validates and canonicalizes. Rays must be primitive and distinct.
    pub fn new(rank: usize, rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_permutation(rank, rays, max_cones).map(|(f, _)| f)
    }

    /// As [`Fan::new`], also returning for each input cone its position in
    /// the canonical cone list.
    pub(crate) fn with_permutation(
        rank: usize,
        rays: Vec<IntVector>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<(Self, Vec<usize>)> {
        for r in &rays {
            if r.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: r.len(),
                });
            }
            if !r.is_primitive() {
                return Err(Error::InvalidInput(format!("ray {r} is not primitive")));
            }
        }
        let mut order: Vec<usize> = (0..rays.len()).collect();
        order.sort_by(|&a, &b| rays[a].cmp(&rays[b]));
        if order.windows(2).any(|w| rays[w[0]] == rays[w[1]]) {
            return Err(Error::InvalidInput("repeated ray".into()));
        }
        let mut new_index = vec![0; rays.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for c in &max_cones {
            let mut mapped = c
                .iter()
                .map(|&i| {
                    new_index
                        .get(i)
                        .copied()
                        .ok_or_else(|| Error::InvalidInput(format!("ray index {i} out of range")))
                })
                .collect::<Result<Vec<_>>>()?;
            mapped.sort_unstable();
            mapped.dedup();
            cones.push(mapped);
        }
        let mut cone_order: Vec<usize> = (0..cones.len()).collect();
        cone_order.sort_by(|&a, &b| cones[a].cmp(&cones[b]));
        let mut position = vec![0; cones.len()];
        for (new, &old) in cone_order.iter().enumerate() {
            position[old] = new;
        }
        let rays = order.iter().map(|&i| rays[i].clone()).collect();
        let max_cones = cone_order.iter().map(|&i| cones[i].clone()).collect();
        Ok((
            Fan {
                rank,
                rays,
                max_cones,
            },
            position,
        ))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn ray_index(&self, v: &IntVector) -> Option<usize> {
        self.rays.binary_search(v).ok()
    }

    pub(crate) fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        IntMatrix::new(cone.iter().map(|&i| self.rays[i].clone()).collect(), self.rank)
            .expect("rays have the fan's rank")
    }

    pub fn is_simplicial(&self, cone: &[usize]) -> bool {
        self.cone_matrix(cone).rank() == cone.len()
    }

    /// Whether `cone` is a face of some maximal cone (exact for simplicial
    /// fans, where every subset of a maximal cone is a face).
    pub fn contains_cone(&self, cone: &Cone) -> bool {
        self.max_cones.iter().any(|m| cone.is_face_of(m))
    }

    /// All cones of a simplicial fan, zero cone included, sorted by
    /// dimension then lexicographically.
    pub fn all_cones(&self) -> Result<Vec<Cone>> {
        let mut out = BTreeSet::new();
        for (i, m) in self.max_cones.iter().enumerate() {
            if !self.is_simplicial(m) {
                return Err(Error::NotSimplicial(i));
            }
            if m.len() > 63 {
                return Err(Error::InvalidInput("cone too large".into()));
            }
            for mask in 0u64..(1u64 << m.len()) {
                let face: Vec<usize> = (0..m.len())
                    .filter(|k| mask >> k & 1 == 1)
                    .map(|k| m[k])
                    .collect();
                out.insert((face.len(), face));
            }
        }
        Ok(out.into_iter().map(|(_, f)| Cone { ray_indices: f }).collect())
    }

    /// Coefficients of `v` in the rays of a simplicial cone, if it lies in
    /// the linear span of the cone.
    pub fn cone_coefficients(&self, cone: &[usize], v: &RatVector) -> Option<RatVector> {
        let rows: Vec<IntVector> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        solve_left(&rows, v)
    }

    pub fn cone_contains(&self, cone: &Cone, v: &RatVector) -> bool {
        self.cone_coefficients(&cone.ray_indices, v)
            .is_some_and(|c| c.0.iter().all(|x| !x.is_negative()))
    }

    /// The cone containing `v` in its relative interior. Requires simplicial
    /// maximal cones; fails if `v` is outside the support.
    pub fn minimal_containing_cone(&self, v: &RatVector) -> Result<Cone> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: v.len(),
            });
        }
        for (i, m) in self.max_cones.iter().enumerate() {
            if !self.is_simplicial(m) {
                return Err(Error::NotSimplicial(i));
            }
            if let Some(c) = self.cone_coefficients(m, v) {
                if c.0.iter().all(|x| !x.is_negative()) {
                    return Ok(Cone::new(
                        m.iter()
                            .zip(&c.0)
                            .filter(|(_, x)| x.is_positive())
                            .map(|(&r, _)| r)
                            .collect(),
                    ));
                }
            }
        }
        Err(Error::InvalidInput("vector outside the support of the fan".into()))
    }

    /// Facets of a full-dimensional maximal cone, as sorted ray sets.
    pub(crate) fn facets(&self, cone: &[usize]) -> Vec<Vec<usize>> {
        let d = self.rank;
        if d == 0 {
            return Vec::new();
        }
        if cone.len() == d {
            return (0..d)
                .map(|skip| {
                    cone.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &r)| r)
                        .collect()
                })
                .collect();
        }
        let mut out = BTreeSet::new();
        for subset in combinations(cone.len(), d - 1) {
            let rows: Vec<IntVector> = subset.iter().map(|&k| self.rays[cone[k]].clone()).collect();
            let m = IntMatrix::new(rows, d).expect("rank checked").transpose();
            let normal = kernel_basis(&m);
            if normal.nrows() != 1 {
                continue;
            }
            let w = normal.row(0);
            let signs: Vec<BigInt> = cone.iter().map(|&r| self.rays[r].dot(w)).collect();
            let supporting = signs.iter().all(|s| !s.is_negative()) || signs.iter().all(|s| !s.is_positive());
            if supporting {
                let facet: Vec<usize> = cone
                    .iter()
                    .zip(&signs)
                    .filter(|(_, s)| s.is_zero())
                    .map(|(&r, _)| r)
                    .collect();
                out.insert(facet);
            }
        }
        out.into_iter().collect()
    }

    /// Every maximal cone is full-dimensional and every facet lies in
    /// exactly two maximal cones.
    pub fn check_complete(&self) -> bool {
        if self.max_cones.is_empty() {
            return false;
        }
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for m in &self.max_cones {
            if self.cone_matrix(m).rank() != self.rank {
                return false;
            }
            for f in self.facets(m) {
                *count.entry(f).or_default() += 1;
            }
        }
        count.values().all(|&c| c == 2)
    }

    /// Every maximal cone is generated by part of a lattice basis.
    pub fn check_smooth(&self) -> bool {
        self.max_cones.iter().all(|m| {
            let a = self.cone_matrix(m);
            if a.rank() != m.len() {
                return false;
            }
            if m.len() == self.rank {
                return a.determinant().map(|d| d.abs().is_one()).unwrap_or(false);
            }
            // Saturated iff the maximal minors are coprime.
            let mut g = BigInt::zero();
            for cols in combinations(self.rank, m.len()) {
                let sub = IntMatrix::new(
                    a.rows()
                        .iter()
                        .map(|r| IntVector(cols.iter().map(|&c| r[c].clone()).collect()))
                        .collect(),
                    m.len(),
                )
                .expect("square");
                g = g.gcd(&sub.determinant().expect("square"));
            }
            g.is_one()
        })
    }

    /// The fan with the maximal cone at `index` removed.
    pub fn without_cone(&self, index: usize) -> Fan {
        let mut f = self.clone();
        f.max_cones.remove(index);
        f
    }
}

/// All `k`-subsets of `0..n`, lexicographically.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// The fan `Σ(R)` together with the simple root set of each chamber.
#[derive(Clone, Debug)]
pub struct WeylFan {
    pub fan: Fan,
    /// `chambers[c]` is the simple set whose dual cone is `fan.max_cones()[c]`.
    pub chambers: Vec<SimpleRootSet>,
    /// `dual_rays[c][k]` is the ray dual to the `k`-th root of `chambers[c]`.
    pub dual_rays: Vec<Vec<usize>>,
}

/// Builds `Σ(R)`: one chamber per set of simple roots, with the dual basis
/// as rays.
pub fn weyl_chamber_fan(r: &RootSystem, strategy: Strategy) -> WeylFan {
    let sets = r.enumerate_simple_root_sets();
    let duals = par::map(strategy, &sets, |s| {
        r.chamber_rays(s)
            .expect("simple sets are bases of the root lattice")
            .into_rows()
    });
    let mut ray_index: BTreeMap<IntVector, usize> = BTreeMap::new();
    for rows in &duals {
        for v in rows {
            let next = ray_index.len();
            ray_index.entry(v.clone()).or_insert(next);
        }
    }
    let mut rays = vec![IntVector::zeros(0); ray_index.len()];
    for (v, &i) in &ray_index {
        rays[i] = v.clone();
    }
    let ordered: Vec<Vec<usize>> = duals
        .iter()
        .map(|rows| rows.iter().map(|v| ray_index[v]).collect())
        .collect();
    let (fan, position) = Fan::with_permutation(r.rank(), rays.clone(), ordered.clone())
        .expect("dual bases consist of primitive vectors");
    let mut chambers = vec![SimpleRootSet::new(Vec::new()); sets.len()];
    let mut dual_rays = vec![Vec::new(); sets.len()];
    for (old, &new) in position.iter().enumerate() {
        chambers[new] = sets[old].clone();
        dual_rays[new] = ordered[old]
            .iter()
            .map(|&i| fan.ray_index(&rays[i]).expect("ray present"))
            .collect();
    }
    WeylFan {
        fan,
        chambers,
        dual_rays,
    }
}

impl WeylFan {
    /// Coefficients of `v` in the rays of chamber `c`: the pairings with the
    /// chamber's simple roots.
    fn chamber_coefficients(&self, r: &RootSystem, c: usize, v: &RatVector) -> Vec<BigRational> {
        self.chambers[c]
            .root_indices
            .iter()
            .map(|&s| v.dot_int(r.mcoords(s)))
            .collect()
    }

    /// The cone of `Σ(R)` containing `v` in its relative interior.
    pub fn minimal_containing_cone(&self, r: &RootSystem, v: &RatVector, strategy: Strategy) -> Result<Cone> {
        if v.len() != self.fan.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.fan.rank(),
                got: v.len(),
            });
        }
        let idx: Vec<usize> = (0..self.chambers.len()).collect();
        let c = par::position_first(strategy, &idx, |&c| {
            self.chamber_coefficients(r, c, v)
                .iter()
                .all(|x| !x.is_negative())
        })
        .ok_or_else(|| Error::InvalidInput("vector outside every chamber".into()))?;
        let coeffs = self.chamber_coefficients(r, c, v);
        Ok(Cone::new(
            coeffs
                .iter()
                .zip(&self.dual_rays[c])
                .filter(|(x, _)| x.is_positive())
                .map(|(_, &ray)| ray)
                .collect(),
        ))
    }

    /// Chambers having `tau` as a face.
    pub fn chambers_containing(&self, tau: &Cone) -> Vec<usize> {
        (0..self.chambers.len())
            .filter(|&c| tau.is_face_of(&self.fan.max_cones()[c]))
            .collect()
    }

    /// Sum of the rays of a cone: a lattice point in its relative interior.
    pub fn interior_point(&self, tau: &Cone) -> IntVector {
        cone_interior_point(&self.fan, tau)
    }
}

pub(crate) fn cone_interior_point(fan: &Fan, tau: &Cone) -> IntVector {
    tau.ray_indices
        .iter()
        .fold(IntVector::zeros(fan.rank()), |acc, &i| &acc + &fan.rays()[i])
}
