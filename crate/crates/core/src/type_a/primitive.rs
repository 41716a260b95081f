//! Primitive collections of `Σ(A_n)` and the nef/ample criterion for torus
//! invariant divisors.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{chain_fan, check_n, proper_subsets, ray, SubsetA};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{solve_left, RatVector};

/// `D = Σ a_A D_A`; missing subsets have coefficient 0, as do `∅` and `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusDivisor {
    pub n: usize,
    pub coeffs: BTreeMap<SubsetA, BigInt>,
}

impl TorusDivisor {
    pub fn new(n: usize, coeffs: BTreeMap<SubsetA, BigInt>) -> Result<Self> {
        check_n(n)?;
        for a in coeffs.keys() {
            SubsetA::checked(n, &a.members())?;
        }
        Ok(TorusDivisor { n, coeffs })
    }

    pub fn zero(n: usize) -> Self {
        TorusDivisor {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// `−K = Σ D_A`.
    pub fn anticanonical(n: usize) -> Self {
        TorusDivisor {
            n,
            coeffs: proper_subsets(n).into_iter().map(|a| (a, BigInt::from(1))).collect(),
        }
    }

    pub fn a(&self, s: SubsetA) -> BigInt {
        self.coeffs.get(&s).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimitiveKind {
    /// `A ∪ A' = I`, `A ∩ A' = ∅`: `v_A + v_A' = 0`.
    Opposite,
    /// `A ∩ A' = ∅` only: `v_A + v_A' = v_{A∪A'}`.
    Union,
    /// `A ∪ A' = I` only: `v_A + v_A' = v_{A∩A'}`.
    Intersection,
    /// Neither: `v_A + v_A' = v_{A∩A'} + v_{A∪A'}`.
    Both,
}

impl PrimitiveKind {
    pub fn name(self) -> &'static str {
        match self {
            PrimitiveKind::Opposite => "opposite",
            PrimitiveKind::Union => "union",
            PrimitiveKind::Intersection => "intersection",
            PrimitiveKind::Both => "both",
        }
    }
}

/// A primitive collection `{v_A, v_A'}` and the cone generators on the
/// right-hand side of its relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveRelation {
    pub pair: (SubsetA, SubsetA),
    pub kind: PrimitiveKind,
    pub rhs: Vec<SubsetA>,
}

/// All incomparable pairs `A < A'` (by mask) with their relations.
pub fn primitive_collections(n: usize) -> Result<Vec<PrimitiveRelation>> {
    check_n(n)?;
    let full = SubsetA::full(n).0;
    let subsets = proper_subsets(n);
    let mut out = Vec::new();
    for (k, &a) in subsets.iter().enumerate() {
        for &b in &subsets[k + 1..] {
            if a.comparable(b) {
                continue;
            }
            let (cap, cup) = (a.0 & b.0, a.0 | b.0);
            let kind = match (cup == full, cap == 0) {
                (true, true) => PrimitiveKind::Opposite,
                (false, true) => PrimitiveKind::Union,
                (true, false) => PrimitiveKind::Intersection,
                (false, false) => PrimitiveKind::Both,
            };
            let rhs = [cap, cup]
                .into_iter()
                .filter(|&m| m != 0 && m != full)
                .map(SubsetA)
                .collect();
            out.push(PrimitiveRelation {
                pair: (a, b),
                kind,
                rhs,
            });
        }
    }
    Ok(out)
}

fn pair_margins(d: &TorusDivisor) -> Result<Vec<BigInt>> {
    Ok(primitive_collections(d.n)?
        .iter()
        .map(|p| {
            let (a, b) = p.pair;
            d.a(a) + d.a(b) - d.a(SubsetA(a.0 & b.0)) - d.a(SubsetA(a.0 | b.0))
        })
        .collect())
}

/// `a_A + a_A' ≥ a_{A∩A'} + a_{A∪A'}` for every incomparable pair.
pub fn is_nef(d: &TorusDivisor) -> Result<bool> {
    Ok(pair_margins(d)?.iter().all(|m| *m >= BigInt::zero()))
}

/// As [`is_nef`] with strict inequalities.
pub fn is_ample(d: &TorusDivisor) -> Result<bool> {
    Ok(pair_margins(d)?.iter().all(|m| *m > BigInt::zero()))
}

/// Convexity of the piecewise linear function `φ` with `φ(v_ρ) = values[ρ]`
/// across every wall: `(convex, strictly convex)`.
pub(crate) fn pl_wall_convexity(fan: &Fan, values: &[BigInt]) -> Result<(bool, bool)> {
    let m: Vec<RatVector> = fan
        .max_cones()
        .iter()
        .enumerate()
        .map(|(c, cone)| {
            let cols = fan.cone_matrix(cone).transpose().into_rows();
            let target = RatVector(cone.iter().map(|&r| BigRational::from_integer(values[r].clone())).collect());
            solve_left(&cols, &target).ok_or(Error::InconsistentPL(c))
        })
        .collect::<Result<_>>()?;
    let mut walls: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (c, cone) in fan.max_cones().iter().enumerate() {
        for f in fan.facets(cone) {
            walls.entry(f).or_default().push(c);
        }
    }
    let (mut convex, mut strict) = (true, true);
    for cones in walls.values() {
        let [c1, c2] = cones[..] else { continue };
        for (x, y) in [(c1, c2), (c2, c1)] {
            for &w in &fan.max_cones()[y] {
                if fan.max_cones()[x].contains(&w) {
                    continue;
                }
                let lhs = m[x].dot_int(&fan.rays()[w]);
                let rhs = BigRational::from_integer(values[w].clone());
                convex &= lhs <= rhs;
                strict &= lhs < rhs;
            }
        }
    }
    Ok((convex, strict && convex))
}

fn divisor_values(d: &TorusDivisor, fan: &Fan) -> Vec<BigInt> {
    let mut values = vec![BigInt::zero(); fan.rays().len()];
    for a in proper_subsets(d.n) {
        let idx: Option<usize> = fan.ray_index(&ray(d.n, a));
        values[idx.expect("every v_A is a ray")] = d.a(a);
    }
    values
}

/// Nefness decided from the support function on `Σ(A_n)` directly.
pub fn nef_oracle(d: &TorusDivisor) -> Result<bool> {
    check_n(d.n)?;
    let fan = chain_fan(d.n)?;
    pl_wall_convexity(&fan, &divisor_values(d, &fan)).map(|(c, _)| c)
}

/// Ampleness decided from the support function on `Σ(A_n)` directly.
pub fn ample_oracle(d: &TorusDivisor) -> Result<bool> {
    check_n(d.n)?;
    let fan = chain_fan(d.n)?;
    pl_wall_convexity(&fan, &divisor_values(d, &fan)).map(|(_, s)| s)
}
