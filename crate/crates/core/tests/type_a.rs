use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootfan::fan::weyl_chamber_fan;
use rootfan::lattice::{rational_rank, IntVector};
use rootfan::root_system::RootSystem;
use rootfan::type_a::*;
use rootfan::Strategy;

fn s(m: &[usize]) -> SubsetA {
    SubsetA::from_members(m)
}

fn mono(n: usize, chain: &[&[usize]]) -> GoodMonomial {
    GoodMonomial::new(n, chain.iter().map(|m| s(m)).collect()).unwrap()
}

/// Eulerian numbers A(m, k) by the recurrence A(m,k) = (k+1)A(m-1,k) + (m-k)A(m-1,k-1).
fn eulerian(m: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for len in 2..=m {
        let mut next = vec![0u128; len];
        for k in 0..len {
            let stay = if k < row.len() { (k as u128 + 1) * row[k] } else { 0 };
            let grow = if k >= 1 { (len - k) as u128 * row[k - 1] } else { 0 };
            next[k] = stay + grow;
        }
        row = next;
    }
    row
}

#[test]
fn betti_numbers_are_eulerian() {
    for n in 1..=6 {
        let b = betti_numbers(n).unwrap();
        assert_eq!(b, eulerian(n + 1), "n = {n}");
        assert_eq!(b.iter().sum::<u128>(), (1..=n as u128 + 1).product());
    }
    assert_eq!(betti_numbers(2).unwrap(), vec![1, 4, 1]);
}

#[test]
fn chain_fan_matches_weyl_fan() {
    for n in 1..=5 {
        let f = chain_fan(n).unwrap();
        assert_eq!(f, weyl_chamber_fan(&RootSystem::type_a(n), Strategy::default()).fan);
        assert_eq!(f.rays().len(), (1 << (n + 1)) - 2);
    }
}

#[test]
fn descent_basis_by_degree() {
    for n in 1..=5 {
        let basis = descent_basis(n).unwrap();
        let mut by_degree = vec![0u128; n + 1];
        for y in &basis {
            assert_eq!(d_statistic(n, y), 0);
            by_degree[y.degree()] += 1;
        }
        assert_eq!(by_degree, betti_numbers(n).unwrap());
        let distinct: BTreeSet<&GoodMonomial> = basis.iter().collect();
        assert_eq!(distinct.len(), basis.len());
    }
    let two: BTreeSet<GoodMonomial> = descent_basis(2).unwrap().into_iter().collect();
    let expected: BTreeSet<GoodMonomial> = [
        GoodMonomial::unit(),
        mono(2, &[&[1]]),
        mono(2, &[&[2]]),
        mono(2, &[&[1, 2]]),
        mono(2, &[&[1, 3]]),
        mono(2, &[&[1], &[1, 2]]),
    ]
    .into_iter()
    .collect();
    assert_eq!(two, expected);
}

#[test]
fn good_monomials_are_exactly_the_chains() {
    // Brute force: strictly nested chains of proper subsets, counted by length.
    for n in 1..=3 {
        let subsets = proper_subsets(n);
        let mut count = 1; // the unit
        for len in 1..=n {
            for combo in subsets.iter().combinations(len) {
                // Subsets come by increasing mask, so a chain is listed in order.
                if combo.iter().tuple_windows().all(|(a, b)| a.is_subset(**b)) {
                    count += 1;
                }
            }
        }
        assert_eq!(good_monomials(n).unwrap().len(), count);
    }
}

fn relation_matrix(n: usize) -> (Vec<GoodMonomial>, Vec<Vec<BigRational>>) {
    let g = good_monomials(n).unwrap();
    let pos: BTreeMap<&GoodMonomial, usize> = g.iter().enumerate().map(|(k, y)| (y, k)).collect();
    let rows = relation_generators(n)
        .unwrap()
        .into_iter()
        .map(|rel| {
            let mut row = vec![BigRational::zero(); g.len()];
            for (y, c) in rel {
                row[pos[&y]] += BigRational::from_integer(c.into());
            }
            row
        })
        .collect();
    (g, rows)
}

#[test]
fn homology_rank_identity() {
    for (n, expected) in [(1, 2), (2, 6), (3, 24)] {
        let (g, rows) = relation_matrix(n);
        assert_eq!(g.len() - rational_rank(rows), expected, "n = {n}");
    }
}

fn class_vector(g: &[GoodMonomial], c: &CohomClass) -> Vec<BigRational> {
    g.iter()
        .map(|y| BigRational::from_integer(c.terms.get(y).cloned().unwrap_or_default()))
        .collect()
}

#[test]
fn reduction_is_sound_and_confluent() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in 1..=3 {
        let basis: BTreeSet<GoodMonomial> = descent_basis(n).unwrap().into_iter().collect();
        let (g, rows) = relation_matrix(n);
        let rank_u = rational_rank(rows.clone());
        for y in good_monomials(n).unwrap() {
            let c = CohomClass::monomial(n, y.clone());
            let (red, cert) = reduce_with::<ChaCha8Rng>(&c, RewriteStrategy::Canonical).unwrap();
            assert!(red.terms.keys().all(|z| basis.contains(z)));
            assert!(cert.verify(&c, &red));
            if basis.contains(&y) {
                assert_eq!(red, c);
                assert!(cert.steps.is_empty());
            }
            // Independent check: original - reduced lies in the span of U.
            let mut ext = rows.clone();
            ext.push(class_vector(&g, &c.sub(&red)));
            assert_eq!(rational_rank(ext), rank_u);
            for _ in 0..3 {
                let (r2, c2) = reduce_with(&c, RewriteStrategy::Random(&mut rng)).unwrap();
                assert_eq!(r2, red);
                assert!(c2.verify(&c, &r2));
            }
        }
    }
}

#[test]
fn reduction_examples() {
    let c = CohomClass::monomial(1, mono(1, &[&[2]]));
    assert_eq!(reduce_to_basis(&c).unwrap(), CohomClass::monomial(1, mono(1, &[&[1]])));
    let mut expected = CohomClass::zero(2);
    expected.add(mono(2, &[&[2]]), BigInt::one());
    expected.add(mono(2, &[&[1, 2]]), BigInt::one());
    expected.add(mono(2, &[&[1, 3]]), -BigInt::one());
    assert_eq!(reduce_to_basis(&CohomClass::monomial(2, mono(2, &[&[3]]))).unwrap(), expected);
    assert_eq!(d_statistic(1, &mono(1, &[&[2]])), 1);
    assert_eq!(d_statistic(2, &mono(2, &[&[1, 3]])), 0);
    assert_eq!(d_statistic(2, &GoodMonomial::unit()), 0);
}

#[test]
fn multiplication_is_commutative_and_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 2..=3 {
        let g = good_monomials(n).unwrap();
        for _ in 0..40 {
            let a = g.choose(&mut rng).unwrap();
            let b = g.choose(&mut rng).unwrap();
            let c = g.choose(&mut rng).unwrap();
            let ab = multiply(n, a, b).unwrap();
            assert_eq!(ab, multiply(n, b, a).unwrap());
            let left = multiply_classes(&ab, &CohomClass::monomial(n, c.clone())).unwrap();
            let bc = multiply(n, b, c).unwrap();
            let right = multiply_classes(&CohomClass::monomial(n, a.clone()), &bc).unwrap();
            assert_eq!(left, right);
            // Degrees add; anything above the top degree vanishes.
            for y in ab.terms.keys() {
                assert_eq!(y.degree(), a.degree() + b.degree());
            }
            if a.degree() + b.degree() > n {
                assert!(ab.is_zero());
            }
        }
        let unit = GoodMonomial::unit();
        for y in &g {
            let expected = reduce_to_basis(&CohomClass::monomial(n, y.clone())).unwrap();
            assert_eq!(multiply(n, &unit, y).unwrap(), expected);
        }
    }
    assert!(multiply(2, &mono(2, &[&[1]]), &mono(2, &[&[2]])).unwrap().is_zero());
    assert_eq!(
        multiply(2, &mono(2, &[&[1]]), &mono(2, &[&[1, 2]])).unwrap(),
        CohomClass::monomial(2, mono(2, &[&[1], &[1, 2]]))
    );
}

#[test]
fn top_degree_is_one_dimensional() {
    // The product of n generators along a maximal chain is the point class,
    // which generates the top degree.
    for n in 1..=3 {
        let top: Vec<GoodMonomial> = descent_basis(n).unwrap().into_iter().filter(|y| y.degree() == n).collect();
        assert_eq!(top.len(), 1);
        let chain: Vec<SubsetA> = (1..=n).map(|k| s(&(1..=k).collect::<Vec<_>>())).collect();
        let mut acc = CohomClass::monomial(n, GoodMonomial::unit());
        for a in chain {
            acc = multiply_classes(&acc, &CohomClass::monomial(n, GoodMonomial::new(n, vec![a]).unwrap())).unwrap();
        }
        assert_eq!(acc.terms.len(), 1);
        assert_eq!(acc.terms.keys().next().unwrap(), &top[0]);
    }
}

#[test]
fn primitive_collections_are_minimal_non_faces() {
    for n in 1..=5 {
        let fan = chain_fan(n).unwrap();
        let subsets = proper_subsets(n);
        let index: BTreeMap<SubsetA, usize> =
            subsets.iter().map(|&a| (a, fan.ray_index(&ray(n, a)).unwrap())).collect();
        let cones: BTreeSet<Vec<usize>> = fan.all_cones().unwrap().into_iter().map(|c| c.ray_indices).collect();
        let is_face = |set: &[SubsetA]| {
            let mut idx: Vec<usize> = set.iter().map(|a| index[a]).collect();
            idx.sort_unstable();
            cones.contains(&idx)
        };
        let mut brute = BTreeSet::new();
        for (&a, &b) in subsets.iter().tuple_combinations() {
            if !is_face(&[a, b]) {
                brute.insert((a, b));
            }
        }
        let prim = primitive_collections(n).unwrap();
        let got: BTreeSet<(SubsetA, SubsetA)> = prim.iter().map(|p| p.pair).collect();
        assert_eq!(got, brute, "n = {n}");
        // No minimal non-face of size three: pairwise faces span a cone.
        if n <= 4 {
            for t in subsets.iter().copied().combinations(3) {
                let pairwise = t.iter().tuple_combinations().all(|(&a, &b)| is_face(&[a, b]));
                if pairwise {
                    assert!(is_face(&t));
                }
            }
        }
        // The relation v_A + v_A' = v_{A∩A'} + v_{A∪A'} holds with v_∅ = v_I = 0.
        for p in &prim {
            let (a, b) = p.pair;
            let lhs = &ray(n, a) + &ray(n, b);
            let rhs = p.rhs.iter().fold(IntVector::zeros(n), |acc, &c| &acc + &ray(n, c));
            assert_eq!(lhs, rhs);
            assert!(!a.comparable(b));
        }
    }
}

#[test]
fn primitive_kinds() {
    let find = |n: usize, a: &[usize], b: &[usize]| {
        primitive_collections(n)
            .unwrap()
            .into_iter()
            .find(|p| p.pair == (s(a), s(b)))
            .unwrap()
    };
    assert_eq!(find(1, &[1], &[2]).kind, PrimitiveKind::Opposite);
    let p = find(2, &[1], &[2]);
    assert_eq!((p.kind, p.rhs), (PrimitiveKind::Union, vec![s(&[1, 2])]));
    let p = find(3, &[1, 2], &[2, 3]);
    assert_eq!((p.kind, p.rhs.clone()), (PrimitiveKind::Both, vec![s(&[2]), s(&[1, 2, 3])]));
    assert_eq!(find(3, &[1, 2, 3], &[2, 3, 4]).kind, PrimitiveKind::Intersection);
}

fn random_divisor(n: usize, rng: &mut impl Rng) -> TorusDivisor {
    let coeffs = proper_subsets(n)
        .into_iter()
        .map(|a| (a, BigInt::from(rng.gen_range(-5i64..=5))))
        .collect();
    TorusDivisor::new(n, coeffs).unwrap()
}

/// Mixes in divisors with a nonzero convex part so nef cases are exercised.
fn biased_divisor(n: usize, rng: &mut impl Rng) -> TorusDivisor {
    let base = TorusDivisor::anticanonical(n);
    let k = rng.gen_range(0i64..=3);
    let coeffs: BTreeMap<SubsetA, BigInt> = proper_subsets(n)
        .into_iter()
        .map(|a| {
            // A linear function m plus k times -K stays nef.
            let m: i64 = a.members().iter().map(|&i| [2, -1, 0, 1, -2, 3][(i - 1) % 6]).sum();
            let noise = if rng.gen_ratio(1, 4) { rng.gen_range(-1i64..=1) } else { 0 };
            (a, base.a(a) * k + m + noise)
        })
        .collect();
    TorusDivisor::new(n, coeffs).unwrap()
}

#[test]
fn nef_criterion_matches_oracle() {
    for n in 1..=4 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
        let mut nef_seen = 0;
        for k in 0..200 {
            let d = if k % 2 == 0 { random_divisor(n, &mut rng) } else { biased_divisor(n, &mut rng) };
            let nef = is_nef(&d).unwrap();
            assert_eq!(nef, nef_oracle(&d).unwrap(), "n = {n}: {d:?}");
            assert_eq!(is_ample(&d).unwrap(), ample_oracle(&d).unwrap(), "n = {n}: {d:?}");
            nef_seen += nef as usize;
        }
        assert!(nef_seen > 0);
    }
}

#[test]
fn anticanonical_divisor() {
    for n in 1..=4 {
        let k = TorusDivisor::anticanonical(n);
        assert!(is_nef(&k).unwrap() && nef_oracle(&k).unwrap());
        assert_eq!(is_ample(&k).unwrap(), n <= 2);
        assert_eq!(ample_oracle(&k).unwrap(), n <= 2);
    }
    let z = TorusDivisor::zero(2);
    assert!(is_nef(&z).unwrap() && !is_ample(&z).unwrap());
    let d = TorusDivisor::new(2, BTreeMap::from([(s(&[1]), BigInt::from(-1))])).unwrap();
    assert!(!is_nef(&d).unwrap() && !nef_oracle(&d).unwrap());
}

/// Σ x⁺ ≤ 1 characterizes conv{u_i − u_j} on the hyperplane Σ x = 0:
/// moving mass from the positive to the negative coordinates.
fn in_root_polytope(x: &[i64]) -> bool {
    x.iter().sum::<i64>() == 0 && x.iter().filter(|&&v| v > 0).sum::<i64>() <= 1
}

fn simple_coords(x: &[i64]) -> IntVector {
    let mut acc = 0;
    IntVector::from_i64s(
        &x[..x.len() - 1]
            .iter()
            .map(|&v| {
                acc += v;
                acc
            })
            .collect::<Vec<_>>(),
    )
}

#[test]
fn delta_polytope_matches_oracle() {
    for n in 1..=4 {
        let p = delta_polytope(n).unwrap();
        let mut oracle_points = BTreeSet::new();
        for x in (0..=n).map(|_| -2i64..=2).multi_cartesian_product() {
            if in_root_polytope(&x) {
                oracle_points.insert(simple_coords(&x));
            }
        }
        let got: BTreeSet<IntVector> = p.lattice_points.iter().cloned().collect();
        assert_eq!(got, oracle_points, "n = {n}");
        assert_eq!(p.lattice_points.len(), n * (n + 1) + 1);
        // Vertices: the roots, each the unique maximizer of its own functional.
        let r = RootSystem::type_a(n);
        let roots: BTreeSet<IntVector> = (0..r.num_roots()).map(|i| r.mcoords(i).clone()).collect();
        let verts: BTreeSet<IntVector> = p.vertices.iter().cloned().collect();
        assert_eq!(verts, roots);
        assert_eq!(p.interior_points, vec![IntVector::zeros(n)]);
        assert!(p.is_reflexive);
        // Polar check: every v_A has min over the polytope exactly -1.
        for a in proper_subsets(n) {
            let v = ray(n, a);
            let min = p.vertices.iter().map(|m| m.dot(&v)).min().unwrap();
            assert_eq!(min, BigInt::from(-1));
        }
    }
}

#[test]
fn sigma_delta_and_crepant_resolution() {
    for n in 1..=4 {
        let sd = sigma_delta_fan(n).unwrap();
        assert!(sd.check_complete(), "n = {n}");
        assert_eq!(sd.check_smooth(), n <= 2, "n = {n}");
        assert_eq!(crepant_subdivision(n).unwrap(), chain_fan(n).unwrap());
        // Σ_Δ has one maximal cone per facet of Δ: ordered pairs (a, b).
        assert_eq!(sd.max_cones().len(), n * (n + 1));
    }
    assert_eq!(sigma_delta_fan(2).unwrap(), chain_fan(2).unwrap());
    let pieces = subdivide_cone(s(&[1]), s(&[1, 2, 3]));
    assert_eq!(pieces.len(), 2);
}

#[test]
fn invalid_inputs() {
    assert!(SubsetA::checked(2, &[]).is_err());
    assert!(SubsetA::checked(2, &[1, 2, 3]).is_err());
    assert!(SubsetA::checked(2, &[4]).is_err());
    assert!(GoodMonomial::new(2, vec![s(&[1]), s(&[2])]).is_err());
    assert!(check_n(0).is_err());
    assert!(check_n(MAX_N + 1).is_err());
}
