//! The type A case: subsets of `I = {1, …, n+1}`, the chain description of
//! `Σ(A_n)`, homology, primitive collections and the polytope `Δ(A_n)`.

mod cohomology;
mod polytope;
mod primitive;

pub use cohomology::{
    d_statistic, descent_basis, good_monomials, multiply, multiply_classes, prec_key, reduce_to_basis,
    reduce_with, relation_generators, relation_terms, Certificate, CohomClass, GoodMonomial, Rewrite,
    RewriteStrategy,
};
pub use polytope::{crepant_subdivision, delta_polytope, sigma_delta_fan, subdivide_cone, DeltaPolytope};
pub use primitive::{
    ample_oracle, is_ample, is_nef, nef_oracle, primitive_collections, PrimitiveKind, PrimitiveRelation, TorusDivisor,
};

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::IntVector;

/// Largest `n` for which subsets of `{1, …, n+1}` fit in a bitmask.
pub const MAX_N: usize = 62;

pub fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidInput(format!("n must lie in 1..={MAX_N}, got {n}")));
    }
    Ok(())
}

/// A subset of `{1, …, n+1}`; element `i` is bit `i − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetA(pub u64);

impl SubsetA {
    pub fn full(n: usize) -> Self {
        SubsetA((1u64 << (n + 1)) - 1)
    }

    pub fn from_members(members: &[usize]) -> Self {
        SubsetA(members.iter().fold(0, |m, &i| m | 1 << (i - 1)))
    }

    /// Parses and checks `∅ ≠ A ⊊ I`.
    pub fn checked(n: usize, members: &[usize]) -> Result<Self> {
        if let Some(&bad) = members.iter().find(|&&i| i == 0 || i > n + 1) {
            return Err(Error::InvalidSubset(format!("{bad} is not in 1..={}", n + 1)));
        }
        let s = Self::from_members(members);
        if s.0 == 0 || s == Self::full(n) {
            return Err(Error::InvalidSubset(format!("{members:?} is empty or everything")));
        }
        Ok(s)
    }

    pub fn members(self) -> Vec<usize> {
        (0..64).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> (i - 1) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: SubsetA) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn comparable(self, other: SubsetA) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    pub fn min(self) -> usize {
        self.0.trailing_zeros() as usize + 1
    }

    pub fn max(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }
}

impl fmt::Display for SubsetA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members().iter().join(","))
    }
}

/// All `A` with `∅ ≠ A ⊊ I`, by increasing mask.
pub fn proper_subsets(n: usize) -> Vec<SubsetA> {
    (1..SubsetA::full(n).0).map(SubsetA).collect()
}

/// `v_A = Σ_{i∈A} v_i` in `N(A_n)`-coordinates (pairings with `u_k − u_{k+1}`).
pub fn ray(n: usize, a: SubsetA) -> IntVector {
    IntVector(
        (1..=n)
            .map(|k| BigInt::from(a.contains(k) as i64 - a.contains(k + 1) as i64))
            .collect(),
    )
}

/// `Σ(A_n)` from its chain description: one maximal cone per maximal chain
/// `{σ(1)} ⊂ {σ(1), σ(2)} ⊂ …` of proper subsets.
pub fn chain_fan(n: usize) -> Result<Fan> {
    check_n(n)?;
    let subsets = proper_subsets(n);
    let rays = subsets.iter().map(|&a| ray(n, a)).collect();
    let cones = (1..=n + 1)
        .permutations(n + 1)
        .map(|sigma| {
            let mut mask = 0u64;
            sigma[..n]
                .iter()
                .map(|&i| {
                    mask |= 1 << (i - 1);
                    (mask - 1) as usize
                })
                .collect()
        })
        .collect();
    Fan::new(n, rays, cones)
}

/// `(f_0, …, f_d)`: number of cones of each dimension of a simplicial fan.
pub fn f_vector(fan: &Fan) -> Result<Vec<u128>> {
    let mut f = vec![0u128; fan.rank() + 1];
    for c in fan.all_cones()? {
        f[c.dim()] += 1;
    }
    Ok(f)
}

/// Even Betti numbers `b_0, b_2, …, b_{2n}` of `X(A_n)`: the h-vector of
/// the complete simplicial fan `Σ(A_n)`.
pub fn betti_numbers(n: usize) -> Result<Vec<u128>> {
    let f = f_vector(&chain_fan(n)?)?;
    Ok(h_vector(&f))
}

/// `h_k = Σ_{i≥k} (−1)^{i−k} C(i,k) f_{d−i}`.
pub fn h_vector(f: &[u128]) -> Vec<u128> {
    let d = f.len() - 1;
    let binom = |a: usize, b: usize| -> i128 {
        (0..b).fold(1i128, |acc, t| acc * (a - t) as i128 / (t + 1) as i128)
    };
    (0..=d)
        .map(|k| {
            let h: i128 = (k..=d)
                .map(|i| {
                    let sign = if (i - k) % 2 == 0 { 1 } else { -1 };
                    sign * binom(i, k) * f[d - i] as i128
                })
                .sum();
            h as u128
        })
        .collect()
}
