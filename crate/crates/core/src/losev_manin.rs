//! Chains of projective lines with two poles and marked points, and their
//! correspondence with points of `X(A_n)` via `A_n`-data.
//!
//! Marked points are labelled by positive integers. Data for `n+1` points
//! uses the roots `β_ij = u_i − u_j` of `A_n` after relabelling the points
//! in increasing order.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fan::{lattice_map_from_ambient, subsystem_morphism, FanMorphism, SubsystemMorphism};
use crate::lattice::{kernel_basis, IntMatrix, IntVector};
use crate::par::{self, Strategy};
use crate::rdata::{random_chart_point, universal_rdata_at_with, validate_rdata, ChartAtlas, ProjectiveRatio, RData};
use crate::root_system::RootSystem;
use crate::type_a::{GoodMonomial, SubsetA};

/// Ordered partition `P_1 | … | P_m` of the marked points; `P_1` lies on
/// the component through `s₋`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombType {
    pub blocks: Vec<Vec<usize>>,
}

impl CombType {
    /// Sorts each block and checks that the blocks are nonempty and disjoint.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        for b in blocks.iter_mut() {
            b.sort_unstable();
            if b.is_empty() {
                return Err(Error::InvalidInput("empty component".into()));
            }
        }
        let all: Vec<usize> = blocks.iter().flatten().copied().sorted().collect();
        if all.windows(2).any(|w| w[0] == w[1]) || all.first() == Some(&0) {
            return Err(Error::InvalidInput("marked points must be distinct positive labels".into()));
        }
        Ok(CombType { blocks })
    }

    pub fn labels(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().sorted().collect()
    }

    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&i))
    }
}

impl fmt::Display for CombType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|i| format!("s{i}")).join(""))
            .join("|");
        f.write_str(&s)
    }
}

/// A stable marked chain over ℚ. Each point sits at `(p : q)` on its
/// component, with `s₋`-side pole `(1:0)` and `s₊`-side pole `(0:1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedChain {
    pub ctype: CombType,
    pub coords: BTreeMap<usize, ProjectiveRatio>,
}

impl MarkedChain {
    pub fn new(ctype: CombType, coords: BTreeMap<usize, ProjectiveRatio>) -> Result<Self> {
        if coords.keys().copied().collect::<Vec<_>>() != ctype.labels() {
            return Err(Error::InvalidInput("coordinates must be given for exactly the marked points".into()));
        }
        if let Some((i, _)) = coords.iter().find(|(_, c)| !c.is_finite_nonzero()) {
            return Err(Error::InvalidInput(format!("point s{i} lies on a pole")));
        }
        Ok(MarkedChain { ctype, coords })
    }

    /// `(t_{β_ij} : t_{−β_ij})` read off the chain.
    pub fn pair_ratio(&self, i: usize, j: usize) -> ProjectiveRatio {
        let (bi, bj) = (self.ctype.block_of(i), self.ctype.block_of(j));
        match bi.cmp(&bj) {
            std::cmp::Ordering::Less => ProjectiveRatio::one_zero(),
            std::cmp::Ordering::Greater => ProjectiveRatio::zero_one(),
            std::cmp::Ordering::Equal => {
                let (si, sj) = (&self.coords[&i], &self.coords[&j]);
                ProjectiveRatio::new(si.numer() * sj.denom(), si.denom() * sj.numer()).expect("points avoid poles")
            }
        }
    }

    /// Rescales each component so that its smallest label sits at `(1:1)`.
    pub fn normalized(&self) -> MarkedChain {
        let mut coords = BTreeMap::new();
        for block in &self.ctype.blocks {
            let anchor = block[0];
            for &i in block {
                coords.insert(i, self.pair_ratio(i, anchor));
            }
        }
        MarkedChain {
            ctype: self.ctype.clone(),
            coords,
        }
    }

    /// Isomorphism of marked chains.
    pub fn isomorphic(&self, other: &MarkedChain) -> bool {
        self.normalized() == other.normalized()
    }
}

fn beta_index(r: &RootSystem, n: usize, i: usize, j: usize) -> usize {
    let mut v = IntVector::zeros(n + 1);
    v.0[i - 1] = BigInt::one();
    v.0[j - 1] = -BigInt::one();
    r.index_of(&v).expect("u_i - u_j is a root of A_n")
}

/// `(t_{β_ij} : t_{−β_ij})` for `1 ≤ i ≠ j ≤ n+1`.
pub fn an_ratio(r: &RootSystem, d: &RData, i: usize, j: usize) -> ProjectiveRatio {
    let n = r.rank();
    d.ratio(r, beta_index(r, n, i, j))
}

/// Blocks of the preorder `i ≺ j ⇔ (t_{β_ij} : t_{−β_ij}) = (1:0)`.
pub fn comb_type_from_data(r: &RootSystem, d: &RData) -> Result<CombType> {
    let n = r.rank();
    let labels: Vec<usize> = (1..=n + 1).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &i in &labels {
        match blocks.iter_mut().find(|b| {
            let t = an_ratio(r, d, i, b[0]);
            !t.is_one_zero() && !t.is_zero_one()
        }) {
            Some(b) => b.push(i),
            None => blocks.push(vec![i]),
        }
    }
    // Within a block every pair must be equivalent; across blocks every
    // pair must be strictly ordered, the same way for all members.
    for b in &blocks {
        for (&i, &j) in b.iter().tuple_combinations() {
            if !an_ratio(r, d, i, j).is_finite_nonzero() {
                return Err(Error::NotPreorder(format!("s{i} ~ s{} but not s{i} ~ s{j}", b[0])));
            }
        }
    }
    let before = |x: &Vec<usize>, y: &Vec<usize>| -> Result<bool> {
        let first = an_ratio(r, d, x[0], y[0]).is_one_zero();
        for &i in x {
            for &j in y {
                if an_ratio(r, d, i, j).is_one_zero() != first {
                    return Err(Error::NotPreorder(format!("s{i} and s{j} are ordered inconsistently")));
                }
            }
        }
        Ok(first)
    };
    let mut sorted: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
    for b in blocks {
        let mut pos = sorted.len();
        for (k, s) in sorted.iter().enumerate() {
            if before(&b, s)? {
                pos = k;
                break;
            }
        }
        sorted.insert(pos, b);
    }
    for (x, y) in sorted.iter().tuple_combinations() {
        if !before(x, y)? {
            return Err(Error::NotPreorder("precedence is not transitive".into()));
        }
    }
    CombType::new(sorted)
}

/// The chain carrying the given data; on each component the smallest label
/// sits at `(1:1)`.
pub fn chain_from_data(r: &RootSystem, d: &RData) -> Result<MarkedChain> {
    if let Some(t) = validate_rdata(r, d)?.first() {
        return Err(Error::NotPreorder(format!(
            "triple {} + {} = {} violated",
            r.root(t.alpha),
            r.root(t.beta),
            r.root(t.gamma)
        )));
    }
    let ctype = comb_type_from_data(r, d)?;
    let mut coords = BTreeMap::new();
    for block in &ctype.blocks {
        let anchor = block[0];
        coords.insert(anchor, ProjectiveRatio::from_ints(1, 1).expect("nonzero"));
        for &i in &block[1..] {
            coords.insert(i, an_ratio(r, d, i, anchor));
        }
    }
    MarkedChain::new(ctype, coords)
}

/// `A_m`-data of a chain with `m+1` points, labels relabelled in increasing
/// order; returns the root system with the data.
pub fn data_from_chain(c: &MarkedChain) -> Result<(RootSystem, RData)> {
    let labels = c.ctype.labels();
    if labels.len() < 2 {
        return Err(Error::InvalidInput("A_n-data needs at least two marked points".into()));
    }
    let n = labels.len() - 1;
    let r = RootSystem::type_a(n);
    let entries = (1..=n + 1)
        .tuple_combinations()
        .map(|(i, j)| (beta_index(&r, n, i, j), c.pair_ratio(labels[i - 1], labels[j - 1])))
        .collect();
    let d = RData::new(&r, entries)?;
    Ok((r, d))
}

/// Forgets the points outside `keep` and contracts the components left
/// without marked points.
pub fn contract(c: &MarkedChain, keep: &[usize]) -> Result<MarkedChain> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    if let Some(i) = keep.iter().find(|i| !c.coords.contains_key(i)) {
        return Err(Error::InvalidInput(format!("s{i} is not a marked point")));
    }
    let blocks: Vec<Vec<usize>> = c
        .ctype
        .blocks
        .iter()
        .map(|b| b.iter().copied().filter(|i| keep.contains(i)).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect();
    let coords = blocks.iter().flatten().map(|&i| (i, c.coords[&i].clone())).collect();
    Ok(MarkedChain::new(CombType::new(blocks)?, coords)?.normalized())
}

/// Where a point `z` of `(P¹)^{n+1}` lies relative to the embedded curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveMembership {
    pub on_curve: bool,
    /// 1-based components containing `z` (two at a node).
    pub components: Vec<usize>,
}

/// `z[i−1] = (z_{−α_i} : z_{α_i})`; tests the equations
/// `t_{β_ij} z_{α_j} z_{−α_i} = t_{−β_ij} z_{−α_j} z_{α_i}`.
pub fn curve_membership(r: &RootSystem, d: &RData, z: &[ProjectiveRatio]) -> Result<CurveMembership> {
    let n = r.rank();
    if z.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            got: z.len(),
        });
    }
    let ctype = chain_from_data(r, d)?.ctype;
    let on_curve = (1..=n + 1).tuple_combinations().all(|(i, j)| {
        let t = an_ratio(r, d, i, j);
        let (ai, bi) = (z[i - 1].numer(), z[i - 1].denom());
        let (aj, bj) = (z[j - 1].numer(), z[j - 1].denom());
        t.numer() * bj * ai == t.denom() * aj * bi
    });
    if !on_curve {
        return Ok(CurveMembership {
            on_curve,
            components: Vec::new(),
        });
    }
    let components = (0..ctype.blocks.len())
        .filter(|&k| {
            ctype.blocks.iter().enumerate().all(|(h, b)| {
                b.iter().all(|&i| match h.cmp(&k) {
                    std::cmp::Ordering::Less => z[i - 1].is_zero_one(),
                    std::cmp::Ordering::Greater => z[i - 1].is_one_zero(),
                    std::cmp::Ordering::Equal => true,
                })
            })
        })
        .map(|k| k + 1)
        .collect();
    Ok(CurveMembership { on_curve, components })
}

/// The image of the marked point `s_i` in `(P¹)^{n+1}`.
pub fn marked_point_image(r: &RootSystem, d: &RData, i: usize) -> Vec<ProjectiveRatio> {
    let n = r.rank();
    (1..=n + 1)
        .map(|j| {
            if j == i {
                ProjectiveRatio::from_ints(1, 1).expect("nonzero")
            } else {
                an_ratio(r, d, i, j)
            }
        })
        .collect()
}

/// A section `s_i` of the universal curve at the level of lattices.
#[derive(Clone, Debug)]
pub struct SectionMap {
    pub i: usize,
    /// `M(A_{n+1}) → M(A_n)`, `u_{n+2} ↦ u_i`.
    pub lattice_map: IntMatrix,
    /// Generated by `α_i = u_i − u_{n+2}` in simple-root coordinates.
    pub kernel: IntMatrix,
    pub morphism: FanMorphism,
}

#[derive(Clone, Debug)]
pub struct UniversalCurve {
    pub n: usize,
    /// `X(A_{n+1}) → X(A_n)`.
    pub projection: SubsystemMorphism,
    /// `M(A_n) → M(A_{n+1})`.
    pub inclusion: IntMatrix,
    pub sections: Vec<SectionMap>,
    /// Rays `−v_{n+2}` and `v_{n+2}` of the pole sections `s₋`, `s₊`.
    pub pole_rays: (IntVector, IntVector),
    /// Maximal cones over each maximal cone of `Σ(A_n)`.
    pub fiber_counts: Vec<usize>,
}

pub fn universal_curve_structure(n: usize, strategy: Strategy) -> Result<UniversalCurve> {
    let big = RootSystem::type_a(n + 1);
    let small = RootSystem::type_a(n);
    let basis = IntMatrix::new(
        (1..=n)
            .map(|k| {
                let mut v = IntVector::zeros(n + 2);
                v.0[k - 1] = BigInt::one();
                v.0[k] = -BigInt::one();
                v
            })
            .collect(),
        n + 2,
    )?;
    let projection = subsystem_morphism(&big, &basis, strategy)?;
    let inclusion = projection.morphism.lattice_map.clone();
    let mut sections = Vec::new();
    for i in 1..=n + 1 {
        let ambient = IntMatrix::new(
            (1..=n + 2)
                .map(|k| IntVector::unit(n + 1, if k == n + 2 { i - 1 } else { k - 1 }))
                .collect(),
            n + 1,
        )?;
        let lattice_map = lattice_map_from_ambient(&big, &small, &ambient)?;
        let kernel = kernel_basis(&lattice_map);
        let morphism = FanMorphism::induced(&projection.target.fan, &projection.source.fan, lattice_map.clone(), strategy)?;
        sections.push(SectionMap {
            i,
            lattice_map,
            kernel,
            morphism,
        });
    }
    let v = crate::type_a::ray(n + 1, SubsetA::from_members(&[n + 2]));
    let fiber_counts = projection.morphism.fiber_counts(&projection.target.fan);
    Ok(UniversalCurve {
        n,
        projection,
        inclusion,
        sections,
        pole_rays: (-&v, v),
        fiber_counts,
    })
}

/// Combinatorial type of the fibres over the orbit of the cone spanned by
/// `v_{A(1)}, …, v_{A(m)}`: `I ∖ A(m) | A(m) ∖ A(m−1) | … | A(1)`.
pub fn comb_type_over_cone(n: usize, chain: &GoodMonomial) -> Result<CombType> {
    let y = GoodMonomial::new(n, chain.chain.clone())?;
    let blocks = y.partition(n).into_iter().rev().map(|p| p.members()).collect();
    CombType::new(blocks)
}

/// Data at a generic point of the orbit of the cone with interior point
/// `v`: `(0:1)` or `(1:0)` where `⟨β_ij, v⟩` is positive or negative, and
/// `(x_i : x_j)` with distinct primes `x_i` otherwise.
pub fn generic_orbit_data(r: &RootSystem, v: &IntVector) -> Result<RData> {
    let n = r.rank();
    let primes = primes(n + 1);
    let entries = (1..=n + 1)
        .tuple_combinations()
        .map(|(i, j)| {
            let b = beta_index(r, n, i, j);
            let p = r.pairing(b, v);
            let t = if p > BigInt::zero() {
                ProjectiveRatio::zero_one()
            } else if p < BigInt::zero() {
                ProjectiveRatio::one_zero()
            } else {
                ProjectiveRatio::from_ints(primes[i - 1], primes[j - 1]).expect("nonzero")
            };
            (b, t)
        })
        .collect();
    RData::new(r, entries)
}

fn primes(k: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(k);
    let mut c = 2i64;
    while out.len() < k {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

fn random_nonzero(rng: &mut impl Rng) -> BigRational {
    let p: i64 = rng.gen_range(1..=9) * if rng.gen() { 1 } else { -1 };
    BigRational::new(p.into(), rng.gen_range(1..=9i64).into())
}

/// A random chain on the points `1..=n+1` with a random combinatorial type.
pub fn random_chain(n: usize, rng: &mut impl Rng) -> MarkedChain {
    let m = rng.gen_range(1..=n + 1);
    let mut labels: Vec<usize> = (1..=n + 1).collect();
    for k in (1..labels.len()).rev() {
        labels.swap(k, rng.gen_range(0..=k));
    }
    // Every block gets one point, the rest are spread at random.
    let mut blocks: Vec<Vec<usize>> = labels[..m].iter().map(|&i| vec![i]).collect();
    for &i in &labels[m..] {
        blocks[rng.gen_range(0..m)].push(i);
    }
    let ctype = CombType::new(blocks).expect("valid partition");
    let coords = ctype
        .labels()
        .into_iter()
        .map(|i| {
            let t = ProjectiveRatio::new(random_nonzero(rng), BigRational::one()).expect("nonzero");
            (i, t)
        })
        .collect();
    MarkedChain::new(ctype, coords).expect("valid chain")
}

fn sample_rng(seed: u64, k: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Round trips over random points of `X(A_n)`: data → chain → data must
/// reproduce the data, and chain → data → chain the chain up to isomorphism.
/// Returns the number of samples that passed both.
pub fn roundtrip_batch(n: usize, samples: usize, seed: u64, strategy: Strategy) -> usize {
    let r = RootSystem::type_a(n);
    let atlas = ChartAtlas::new(&r, strategy);
    let ok = par::map_range(strategy, samples, |k| {
        let mut rng = sample_rng(seed, k);
        let p = random_chart_point(&atlas, r.rank(), &mut rng);
        let d = universal_rdata_at_with(&r, &atlas, &p).expect("chart point");
        let a = chain_from_data(&r, &d)
            .and_then(|c| data_from_chain(&c))
            .map(|(_, back)| back == d)
            .unwrap_or(false);
        let c = random_chain(n, &mut rng);
        let b = data_from_chain(&c)
            .and_then(|(r2, d2)| chain_from_data(&r2, &d2))
            .map(|back| back.isomorphic(&c))
            .unwrap_or(false);
        a && b
    });
    ok.into_iter().filter(|&x| x).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(p: i64, q: i64) -> ProjectiveRatio {
        ProjectiveRatio::from_ints(p, q).unwrap()
    }

    fn a1(t: ProjectiveRatio) -> (RootSystem, RData) {
        let r = RootSystem::type_a(1);
        let d = RData::new(&r, vec![(beta_index(&r, 1, 1, 2), t)]).unwrap();
        (r, d)
    }

    fn a2(t12: ProjectiveRatio, t13: ProjectiveRatio, t23: ProjectiveRatio) -> (RootSystem, RData) {
        let r = RootSystem::type_a(2);
        let e = vec![
            (beta_index(&r, 2, 1, 2), t12),
            (beta_index(&r, 2, 1, 3), t13),
            (beta_index(&r, 2, 2, 3), t23),
        ];
        let d = RData::new(&r, e).unwrap();
        (r, d)
    }

    #[test]
    fn a1_types() {
        let (r, d) = a1(ProjectiveRatio::one_zero());
        assert_eq!(comb_type_from_data(&r, &d).unwrap().blocks, vec![vec![1], vec![2]]);
        let (r, d) = a1(ProjectiveRatio::zero_one());
        assert_eq!(comb_type_from_data(&r, &d).unwrap().to_string(), "s2|s1");
        let (r, d) = a1(ratio(3, 5));
        assert_eq!(comb_type_from_data(&r, &d).unwrap().blocks, vec![vec![1, 2]]);
    }

    #[test]
    fn a2_chain() {
        let (r, d) = a2(ratio(1, 1), ratio(2, 1), ratio(2, 1));
        let c = chain_from_data(&r, &d).unwrap();
        assert_eq!(c.ctype.blocks, vec![vec![1, 2, 3]]);
        assert_eq!(c.coords[&1], ratio(1, 1));
        assert_eq!(c.coords[&2], ratio(1, 1));
        assert_eq!(c.coords[&3], ratio(1, 2));
        assert_eq!(data_from_chain(&c).unwrap().1, d);
    }

    #[test]
    fn pair_formula() {
        let ctype = CombType::new(vec![vec![1, 2]]).unwrap();
        let c = MarkedChain::new(ctype, [(1, ratio(1, 2)), (2, ratio(1, 1))].into()).unwrap();
        assert_eq!(c.pair_ratio(1, 2), ratio(1, 2));
    }

    #[test]
    fn contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let c = random_chain(4, &mut rng);
            assert!(contract(&c, &[1, 2, 3, 4, 5]).unwrap().isomorphic(&c));
            let one = contract(&c, &[3]).unwrap();
            assert_eq!(one.coords[&3], ratio(1, 1));
            let pair = contract(&c, &[2, 4]).unwrap();
            let (_, d) = data_from_chain(&pair).unwrap();
            assert_eq!(d.positive_ratios()[0], c.pair_ratio(2, 4));
            let k1 = [1, 2, 4, 5];
            let k2 = [2, 5];
            assert_eq!(contract(&contract(&c, &k1).unwrap(), &k2).unwrap(), contract(&c, &k2).unwrap());
        }
        let c = random_chain(2, &mut rng);
        assert_eq!(contract(&c, &[]), Err(Error::EmptyKeep));
    }

    #[test]
    fn membership() {
        let (r, d) = a2(ratio(1, 1), ratio(2, 1), ratio(2, 1));
        for i in 1..=3 {
            let z = marked_point_image(&r, &d, i);
            assert!(curve_membership(&r, &d, &z).unwrap().on_curve);
        }
        let minus = vec![ProjectiveRatio::one_zero(); 3];
        assert!(curve_membership(&r, &d, &minus).unwrap().on_curve);
        let z = vec![ratio(2, 7), ratio(3, 1), ratio(5, 11)];
        assert!(!curve_membership(&r, &d, &z).unwrap().on_curve);
    }

    #[test]
    fn universal_curve_small() {
        let u = universal_curve_structure(1, Strategy::Sequential).unwrap();
        assert_eq!(u.projection.source.fan.max_cones().len(), 6);
        assert_eq!(u.fiber_counts, vec![3, 3]);
        for s in &u.sections {
            assert!(u.inclusion.mul(&s.lattice_map).unwrap().is_identity());
            assert_eq!(s.kernel.nrows(), 1);
            let big = RootSystem::type_a(2);
            let mut alpha = IntVector::zeros(3);
            alpha.0[s.i - 1] = BigInt::one();
            alpha.0[2] = -BigInt::one();
            let m = big.mcoords(big.index_of(&alpha).unwrap());
            assert!(s.kernel.row(0) == m || s.kernel.row(0) == &-m);
        }
        let u0 = universal_curve_structure(0, Strategy::Sequential).unwrap();
        assert_eq!(u0.projection.source.fan.max_cones().len(), 2);
    }

    #[test]
    fn types_over_cones() {
        let v1 = GoodMonomial::new(2, vec![SubsetA::from_members(&[1])]).unwrap();
        assert_eq!(comb_type_over_cone(2, &v1).unwrap().blocks, vec![vec![2, 3], vec![1]]);
        assert_eq!(comb_type_over_cone(2, &GoodMonomial::unit()).unwrap().blocks, vec![vec![1, 2, 3]]);
        let top = GoodMonomial::new(2, vec![SubsetA::from_members(&[1]), SubsetA::from_members(&[1, 2])]).unwrap();
        assert_eq!(comb_type_over_cone(2, &top).unwrap().to_string(), "s3|s2|s1");
    }

    #[test]
    fn batch() {
        assert_eq!(roundtrip_batch(3, 40, 5, Strategy::Sequential), 40);
    }
}
