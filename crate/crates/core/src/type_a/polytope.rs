//! The polytope `Δ(A_n) = conv{roots}`, its normal fan `Σ_Δ` and the
//! crepant subdivision of `Σ_Δ` into `Σ(A_n)`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;

use super::{check_n, proper_subsets, ray, SubsetA};
use crate::error::Result;
use crate::fan::Fan;
use crate::lattice::{rational_rank, IntVector};

/// Points are in simple-root coordinates of `M(A_n)`, so `⟨m, v_A⟩` is a
/// dot product with [`ray`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPolytope {
    pub n: usize,
    pub vertices: Vec<IntVector>,
    pub lattice_points: Vec<IntVector>,
    pub interior_points: Vec<IntVector>,
    pub is_reflexive: bool,
}

/// `x_1 u_1 + … + x_{n+1} u_{n+1}` (with `Σ x_i = 0`) in the basis
/// `u_k − u_{k+1}`.
fn to_simple_coords(x: &[i64]) -> IntVector {
    IntVector(
        x[..x.len() - 1]
            .iter()
            .scan(0i64, |acc, &v| {
                *acc += v;
                Some(BigInt::from(*acc))
            })
            .collect(),
    )
}

fn affine_rank(points: &[&Vec<i64>]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    rational_rank(
        rest.iter()
            .map(|p| p.iter().zip(first.iter()).map(|(a, b)| BigRational::from_integer((a - b).into())).collect())
            .collect(),
    )
}

/// `Δ(A_n) = {m : ⟨m, v_A⟩ ≥ −1 for all A}`, enumerated in `{−1,0,1}^{n+1}`
/// (ambient coordinates are bounded by the inequalities for `{i}` and
/// `I ∖ {i}`).
pub fn delta_polytope(n: usize) -> Result<DeltaPolytope> {
    check_n(n)?;
    let subsets = proper_subsets(n);
    let pairing = |x: &[i64], a: SubsetA| -> i64 { a.members().iter().map(|&i| x[i - 1]).sum() };
    let points: Vec<Vec<i64>> = (0..n + 1)
        .map(|_| -1i64..=1)
        .multi_cartesian_product()
        .filter(|x| x.iter().sum::<i64>() == 0 && subsets.iter().all(|&a| pairing(x, a) >= -1))
        .collect();
    let tight = |x: &[i64]| -> Vec<SubsetA> { subsets.iter().copied().filter(|&a| pairing(x, a) == -1).collect() };
    let mut vertices = Vec::new();
    let mut interior = Vec::new();
    for x in &points {
        let t = tight(x);
        if t.is_empty() {
            interior.push(to_simple_coords(x));
            continue;
        }
        let rows = t
            .iter()
            .map(|&a| (1..=n + 1).map(|i| BigRational::from_integer((a.contains(i) as i64).into())).collect())
            .chain(std::iter::once(vec![BigRational::from_integer(1.into()); n + 1]))
            .collect();
        if rational_rank(rows) == n + 1 {
            vertices.push(to_simple_coords(x));
        }
    }
    // Every inequality must cut out a facet.
    let all_facets = subsets.iter().all(|&a| {
        let on: Vec<&Vec<i64>> = points.iter().filter(|x| pairing(x, a) == -1).collect();
        affine_rank(&on) == n - 1
    });
    let origin = IntVector::zeros(n);
    let is_reflexive = all_facets && interior == vec![origin];
    let mut lattice_points: Vec<IntVector> = points.iter().map(|x| to_simple_coords(x)).collect();
    lattice_points.sort();
    vertices.sort();
    Ok(DeltaPolytope {
        n,
        vertices,
        lattice_points,
        interior_points: interior,
        is_reflexive,
    })
}

/// The fan over the faces of the polar polytope: one maximal cone
/// `σ_{a,b} = ⟨v_A : a ∈ A, b ∉ A⟩` for each ordered pair `a ≠ b`.
pub fn sigma_delta_fan(n: usize) -> Result<Fan> {
    check_n(n)?;
    let subsets = proper_subsets(n);
    let rays = subsets.iter().map(|&a| ray(n, a)).collect();
    let cones = (1..=n + 1)
        .permutations(2)
        .map(|ab| {
            let (lo, hi) = (SubsetA::from_members(&[ab[0]]), SubsetA(SubsetA::full(n).0 & !(1 << (ab[1] - 1))));
            subsets
                .iter()
                .enumerate()
                .filter(|(_, &a)| lo.is_subset(a) && a.is_subset(hi))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    Fan::new(n, rays, cones)
}

/// The chains `B₁ ⊊ B₁ ∪ {c₁} ⊊ … ⊊ B₂`, one per ordering of `B₂ ∖ B₁`;
/// these simplicial cones subdivide `σ_{B₁,B₂}`.
pub fn subdivide_cone(b1: SubsetA, b2: SubsetA) -> Vec<Vec<SubsetA>> {
    let free = SubsetA(b2.0 & !b1.0).members();
    free.iter()
        .copied()
        .permutations(free.len())
        .map(|order| {
            let mut cur = b1;
            let mut chain = vec![cur];
            for i in order {
                cur = SubsetA(cur.0 | 1 << (i - 1));
                chain.push(cur);
            }
            chain
        })
        .collect()
}

/// `Σ_Δ` with every maximal cone subdivided by [`subdivide_cone`].
pub fn crepant_subdivision(n: usize) -> Result<Fan> {
    check_n(n)?;
    let rays = proper_subsets(n).iter().map(|&a| ray(n, a)).collect();
    let full = SubsetA::full(n).0;
    let mut cones = Vec::new();
    for ab in (1..=n + 1).permutations(2) {
        let b1 = SubsetA::from_members(&[ab[0]]);
        let b2 = SubsetA(full & !(1 << (ab[1] - 1)));
        for chain in subdivide_cone(b1, b2) {
            cones.push(chain.iter().map(|a| (a.0 - 1) as usize).collect());
        }
    }
    Fan::new(n, rays, cones)
}
