//! Points of `X(R)` over ℚ as R-data: one projective ratio `(t_α : t_{−α})`
//! per pair of opposite roots.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{kernel_basis, lattices_equal, IntMatrix, IntVector};
use crate::par::{self, Strategy};
use crate::root_system::{AdditiveTriple, RootSystem, SimpleRootSet};

/// A point `(numer : denom)` of `P^1(ℚ)`, kept in canonical form `(1 : x)`
/// or `(x : 1)` with `|x| ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectiveRatio {
    numer: BigRational,
    denom: BigRational,
}

impl ProjectiveRatio {
    pub fn new(numer: BigRational, denom: BigRational) -> Result<Self> {
        if numer.is_zero() && denom.is_zero() {
            return Err(Error::ZeroRatio);
        }
        Ok(if numer.abs() >= denom.abs() {
            ProjectiveRatio {
                denom: &denom / &numer,
                numer: BigRational::one(),
            }
        } else {
            ProjectiveRatio {
                numer: &numer / &denom,
                denom: BigRational::one(),
            }
        })
    }

    pub fn from_ints(numer: i64, denom: i64) -> Result<Self> {
        Self::new(BigRational::from_integer(numer.into()), BigRational::from_integer(denom.into()))
    }

    /// `(x : 1)`.
    pub fn affine(x: BigRational) -> Self {
        Self::new(x, BigRational::one()).expect("denominator is one")
    }

    pub fn zero_one() -> Self {
        ProjectiveRatio {
            numer: BigRational::zero(),
            denom: BigRational::one(),
        }
    }

    pub fn one_zero() -> Self {
        ProjectiveRatio {
            numer: BigRational::one(),
            denom: BigRational::zero(),
        }
    }

    pub fn numer(&self) -> &BigRational {
        &self.numer
    }

    pub fn denom(&self) -> &BigRational {
        &self.denom
    }

    pub fn is_zero_one(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_one_zero(&self) -> bool {
        self.denom.is_zero()
    }

    /// Both coordinates nonzero.
    pub fn is_finite_nonzero(&self) -> bool {
        !self.numer.is_zero() && !self.denom.is_zero()
    }

    pub fn swap(&self) -> Self {
        // Re-canonicalize: (1 : -1) swaps to (-1 : 1), which is not canonical.
        Self::new(self.denom.clone(), self.numer.clone()).expect("not both zero")
    }

    /// `numer / denom`, if `denom ≠ 0`.
    pub fn value(&self) -> Option<BigRational> {
        (!self.denom.is_zero()).then(|| &self.numer / &self.denom)
    }

    /// Parses `"p/q"` or `"p"` for each coordinate.
    pub fn parse(numer: &str, denom: &str) -> Result<Self> {
        Self::new(parse_rational(numer)?, parse_rational(denom)?)
    }
}

impl fmt::Display for ProjectiveRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.numer, self.denom)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// R-data: one ratio per positive root of the base simple set; the ratio
/// of a negative root is the swapped ratio of its negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RData {
    roots: Vec<usize>,
    ratios: Vec<ProjectiveRatio>,
}

impl RData {
    /// Builds R-data from ratios keyed by root index in either orientation.
    pub fn new(r: &RootSystem, entries: Vec<(usize, ProjectiveRatio)>) -> Result<Self> {
        let roots = r.positive_roots();
        let mut ratios: Vec<Option<ProjectiveRatio>> = vec![None; roots.len()];
        for (root, ratio) in entries {
            if root >= r.num_roots() {
                return Err(Error::InvalidInput(format!("root index {root} out of range")));
            }
            let (pos, oriented) = if r.is_positive(root) {
                (root, ratio)
            } else {
                (r.negation(root), ratio.swap())
            };
            let k = roots.binary_search(&pos).expect("positive roots are sorted");
            match &ratios[k] {
                Some(old) if *old != oriented => {
                    return Err(Error::InvalidInput(format!(
                        "conflicting ratios for root {}",
                        r.root(pos)
                    )))
                }
                _ => ratios[k] = Some(oriented),
            }
        }
        let ratios = ratios
            .into_iter()
            .zip(&roots)
            .map(|(t, &i)| t.ok_or_else(|| Error::MissingPair(r.root(i).to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(RData { roots, ratios })
    }

    /// Positive root indices, aligned with [`RData::positive_ratios`].
    pub fn positive_roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn positive_ratios(&self) -> &[ProjectiveRatio] {
        &self.ratios
    }

    /// `(t_α : t_{−α})` for any root `α`.
    pub fn ratio(&self, r: &RootSystem, root: usize) -> ProjectiveRatio {
        match self.roots.binary_search(&root) {
            Ok(k) => self.ratios[k].clone(),
            Err(_) => {
                let k = self
                    .roots
                    .binary_search(&r.negation(root))
                    .expect("data built for this root system");
                self.ratios[k].swap()
            }
        }
    }

    /// `(t_α, t_{−α})` as the two coordinates of the stored ratio.
    fn sections(&self, r: &RootSystem, root: usize) -> (BigRational, BigRational) {
        let t = self.ratio(r, root);
        (t.numer, t.denom)
    }
}

/// A point of the chart `U_S ≅ A^{rank}`: `coords[k]` is the value of
/// `x^s` for the `k`-th root `s` of the chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPoint {
    pub chart: SimpleRootSet,
    pub coords: Vec<BigRational>,
}

/// Per-chart data of `R` reused across many points.
#[derive(Clone, Debug)]
pub struct ChartAtlas {
    pub sets: Vec<SimpleRootSet>,
    /// `in_span[c][i]`: root `i` lies in `⟨S_c⟩`.
    in_span: Vec<Vec<bool>>,
    /// `expansion[c][i]`: coefficients of root `i` in the roots of `S_c`.
    expansion: Vec<Vec<IntVector>>,
}

impl ChartAtlas {
    pub fn new(r: &RootSystem, strategy: Strategy) -> Self {
        let sets = r.enumerate_simple_root_sets();
        let per_chart = par::map(strategy, &sets, |s| {
            let rays = r.chamber_rays(s).expect("simple sets are unimodular");
            let expansion: Vec<IntVector> = (0..r.num_roots())
                .map(|i| r.expansion_with_rays(&rays, i).expect("every root is signed"))
                .collect();
            let in_span = expansion
                .iter()
                .map(|c| c.0.iter().all(|x| !x.is_negative()))
                .collect();
            (in_span, expansion)
        });
        let (in_span, expansion) = per_chart.into_iter().unzip();
        ChartAtlas {
            sets,
            in_span,
            expansion,
        }
    }

    pub fn chart_index(&self, s: &SimpleRootSet) -> Option<usize> {
        self.sets.binary_search(s).ok()
    }
}

/// Triples `γ = α + β` whose equation `t_α t_β t_{−γ} = t_{−α} t_{−β} t_γ`
/// fails; empty means the data is valid.
pub fn validate_rdata(r: &RootSystem, d: &RData) -> Result<Vec<AdditiveTriple>> {
    if d.roots != r.positive_roots() {
        return Err(Error::MissingPair("data belongs to another root system".into()));
    }
    Ok(r.additive_triples()
        .into_iter()
        .filter(|t| {
            let (a, na) = d.sections(r, t.alpha);
            let (b, nb) = d.sections(r, t.beta);
            let (g, ng) = d.sections(r, t.gamma);
            a * b * ng != na * nb * g
        })
        .collect())
}

fn monomial(coords: &[BigRational], exponents: &IntVector) -> BigRational {
    coords
        .iter()
        .zip(&exponents.0)
        .fold(BigRational::one(), |acc, (x, e)| {
            let e = e.to_u32().expect("small exponent");
            acc * Pow::pow(x, e)
        })
}

pub fn universal_rdata_at_with(r: &RootSystem, atlas: &ChartAtlas, p: &ChartPoint) -> Result<RData> {
    let c = atlas
        .chart_index(&p.chart)
        .ok_or_else(|| Error::InvalidInput("not a set of simple roots".into()))?;
    if p.coords.len() != r.rank() {
        return Err(Error::DimensionMismatch {
            expected: r.rank(),
            got: p.coords.len(),
        });
    }
    let roots = r.positive_roots();
    let ratios = roots
        .iter()
        .map(|&a| {
            let e = &atlas.expansion[c][a];
            if atlas.in_span[c][a] {
                ProjectiveRatio::affine(monomial(&p.coords, e))
            } else {
                ProjectiveRatio::new(BigRational::one(), monomial(&p.coords, &-e)).expect("first entry is one")
            }
        })
        .collect();
    Ok(RData { roots, ratios })
}

/// The universal R-data at a point of a chart.
pub fn universal_rdata_at(r: &RootSystem, p: &ChartPoint) -> Result<RData> {
    universal_rdata_at_with(r, &ChartAtlas::new(r, Strategy::Sequential), p)
}

pub fn rdata_to_point_with(r: &RootSystem, atlas: &ChartAtlas, d: &RData, strategy: Strategy) -> Result<ChartPoint> {
    if !validate_rdata(r, d)?.is_empty() {
        return Err(Error::NoChartFound);
    }
    let one_zero: Vec<bool> = (0..r.num_roots()).map(|i| d.ratio(r, i).is_one_zero()).collect();
    let idx: Vec<usize> = (0..atlas.sets.len()).collect();
    let c = par::position_first(strategy, &idx, |&c| {
        !(0..r.num_roots()).any(|i| atlas.in_span[c][i] && one_zero[i])
    })
    .ok_or(Error::NoChartFound)?;
    let chart = atlas.sets[c].clone();
    let coords = chart
        .root_indices
        .iter()
        .map(|&s| d.ratio(r, s).value().expect("checked not (1:0)"))
        .collect();
    let p = ChartPoint { chart, coords };
    assert_eq!(
        &universal_rdata_at_with(r, atlas, &p)?,
        d,
        "universal data at the recovered point differs from the input"
    );
    Ok(p)
}

/// The chart point represented by validated R-data: the first chart in
/// canonical order on which no `α ∈ ⟨S⟩` has ratio `(1:0)`.
pub fn rdata_to_point(r: &RootSystem, d: &RData, strategy: Strategy) -> Result<ChartPoint> {
    rdata_to_point_with(r, &ChartAtlas::new(r, strategy), d, strategy)
}

/// Whether `ker(μ)` for `μ: ⊕_{α>0} ℤu_α → M(R)` is spanned by the
/// relations `u_α + u_β − u_γ` of positive additive triples.
pub fn verify_relation_generation(r: &RootSystem) -> bool {
    let pos = r.positive_roots();
    let k = pos.len();
    let mu = IntMatrix::new(pos.iter().map(|&i| r.mcoords(i).clone()).collect(), r.rank())
        .expect("root lattice coordinates");
    let kernel = kernel_basis(&mu);
    let at = |i: usize| pos.binary_search(&i).ok();
    let relations: Vec<IntVector> = r
        .additive_triples()
        .into_iter()
        .filter_map(|t| Some((at(t.alpha)?, at(t.beta)?, at(t.gamma)?)))
        .map(|(a, b, g)| {
            let mut v = vec![BigInt::zero(); k];
            v[a] += 1;
            v[b] += 1;
            v[g] -= 1;
            IntVector(v)
        })
        .collect();
    let relations = IntMatrix::new(relations, k).expect("rows of length k");
    lattices_equal(&kernel, &relations).expect("same width")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RatioPattern {
    /// `(0:1)`
    ZeroOne,
    /// `(1:0)`
    OneZero,
    Free,
}

impl RatioPattern {
    pub fn name(self) -> &'static str {
        match self {
            RatioPattern::ZeroOne => "zero_one",
            RatioPattern::OneZero => "one_zero",
            RatioPattern::Free => "free",
        }
    }
}

/// Forced ratios over the orbit of the cone containing `v` in its relative
/// interior, per positive root.
pub fn orbit_rdata_pattern(r: &RootSystem, v: &IntVector) -> Vec<(usize, RatioPattern)> {
    r.positive_roots()
        .into_iter()
        .map(|a| {
            let p = r.pairing(a, v);
            let pat = if p.is_positive() {
                RatioPattern::ZeroOne
            } else if p.is_negative() {
                RatioPattern::OneZero
            } else {
                RatioPattern::Free
            };
            (a, pat)
        })
        .collect()
}

/// Small random rational, zero with probability about one fifth.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    if rng.gen_ratio(1, 5) {
        return BigRational::zero();
    }
    let p: i64 = rng.gen_range(1..=9) * if rng.gen() { 1 } else { -1 };
    let q: i64 = rng.gen_range(1..=9);
    BigRational::new(p.into(), q.into())
}

pub fn random_chart_point(atlas: &ChartAtlas, rank: usize, rng: &mut impl Rng) -> ChartPoint {
    let chart = atlas.sets[rng.gen_range(0..atlas.sets.len())].clone();
    let coords = (0..rank).map(|_| random_rational(rng)).collect();
    ChartPoint { chart, coords }
}

/// Runs the chart point / R-data round trip on `samples` seeded points;
/// sample `k` uses its own generator seeded from `seed` and `k`. Returns the
/// number of samples that round-tripped.
pub fn roundtrip_batch(r: &RootSystem, atlas: &ChartAtlas, samples: usize, seed: u64, strategy: Strategy) -> usize {
    par::map_range(strategy, samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let p = random_chart_point(atlas, r.rank(), &mut rng);
        let ok = (|| -> Result<bool> {
            let d = universal_rdata_at_with(r, atlas, &p)?;
            if !validate_rdata(r, &d)?.is_empty() {
                return Ok(false);
            }
            let q = rdata_to_point_with(r, atlas, &d, Strategy::Sequential)?;
            let same_point = universal_rdata_at_with(r, atlas, &q)? == d;
            let same_chart_coords = q.chart != p.chart || q.coords == p.coords;
            Ok(same_point && same_chart_coords)
        })();
        ok.unwrap_or(false)
    })
    .into_iter()
    .filter(|&ok| ok)
    .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::RootSystemSpec;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn a2_data(r: &RootSystem, tg: (i64, i64)) -> RData {
        let idx = |v: &[i64]| r.index_of(&IntVector::from_i64s(v)).unwrap();
        RData::new(
            r,
            vec![
                (idx(&[1, -1, 0]), ProjectiveRatio::from_ints(1, 1).unwrap()),
                (idx(&[0, 1, -1]), ProjectiveRatio::from_ints(2, 1).unwrap()),
                (idx(&[1, 0, -1]), ProjectiveRatio::from_ints(tg.0, tg.1).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn canonical_ratios() {
        let a = ProjectiveRatio::from_ints(4, 2).unwrap();
        assert_eq!(a, ProjectiveRatio::new(q(1), BigRational::new(1.into(), 2.into())).unwrap());
        assert_eq!(ProjectiveRatio::from_ints(0, 5).unwrap(), ProjectiveRatio::zero_one());
        assert_eq!(ProjectiveRatio::from_ints(-3, 0).unwrap(), ProjectiveRatio::one_zero());
        assert_eq!(ProjectiveRatio::from_ints(0, 0), Err(Error::ZeroRatio));
        assert_eq!(a.swap().swap(), a);
        assert_eq!(ProjectiveRatio::parse("2/3", "-4").unwrap(), ProjectiveRatio::from_ints(2, -12).unwrap());
    }

    #[test]
    fn validate_examples() {
        let r = RootSystem::type_a(2);
        assert!(validate_rdata(&r, &a2_data(&r, (2, 1))).unwrap().is_empty());
        let bad = validate_rdata(&r, &a2_data(&r, (1, 1))).unwrap();
        assert!(!bad.is_empty());
        let a1 = RootSystem::type_a(1);
        let d = RData::new(&a1, vec![(0, ProjectiveRatio::from_ints(7, 3).unwrap())]).unwrap();
        assert!(validate_rdata(&a1, &d).unwrap().is_empty());
        assert!(matches!(RData::new(&r, vec![]), Err(Error::MissingPair(_))));
    }

    #[test]
    fn universal_and_back() {
        let r = RootSystem::type_a(2);
        let atlas = ChartAtlas::new(&r, Strategy::Sequential);
        let base = r.base_simple_set();
        let p = ChartPoint {
            chart: base.clone(),
            coords: vec![q(2), q(3)],
        };
        let d = universal_rdata_at(&r, &p).unwrap();
        let gamma = r.index_of(&IntVector::from_i64s(&[1, 0, -1])).unwrap();
        assert_eq!(d.ratio(&r, gamma), ProjectiveRatio::from_ints(6, 1).unwrap());
        assert_eq!(d.ratio(&r, r.negation(gamma)), ProjectiveRatio::from_ints(1, 6).unwrap());
        let back = rdata_to_point_with(&r, &atlas, &d, Strategy::Parallel).unwrap();
        assert_eq!(universal_rdata_at(&r, &back).unwrap(), d);

        let fixed = ChartPoint {
            chart: base,
            coords: vec![q(0), q(0)],
        };
        let d = universal_rdata_at(&r, &fixed).unwrap();
        assert!(d.positive_ratios().iter().all(|t| t.is_zero_one()));
        assert_eq!(rdata_to_point(&r, &d, Strategy::Sequential).unwrap(), fixed);

        let ones = RData::new(
            &r,
            (0..r.num_roots()).map(|i| (i, ProjectiveRatio::from_ints(1, 1).unwrap())).collect(),
        )
        .unwrap();
        let p = rdata_to_point(&r, &ones, Strategy::Sequential).unwrap();
        assert!(p.coords.iter().all(|x| x.is_one()));
    }

    #[test]
    fn invalid_data_has_no_chart() {
        let r = RootSystem::type_a(2);
        assert_eq!(
            rdata_to_point(&r, &a2_data(&r, (1, 1)), Strategy::Sequential),
            Err(Error::NoChartFound)
        );
    }

    #[test]
    fn relation_generation() {
        for s in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2"] {
            let r = RootSystem::build(&RootSystemSpec::parse(s).unwrap()).unwrap();
            assert!(verify_relation_generation(&r), "{s}");
        }
    }

    #[test]
    fn patterns() {
        let r = RootSystem::type_a(2);
        let zero = orbit_rdata_pattern(&r, &IntVector::zeros(2));
        assert!(zero.iter().all(|(_, p)| *p == RatioPattern::Free));
        // v1 pairs positively with u1 - u2 and u1 - u3.
        let v1 = orbit_rdata_pattern(&r, &IntVector::from_i64s(&[1, 0]));
        let forced: Vec<_> = v1.iter().filter(|(_, p)| *p == RatioPattern::ZeroOne).map(|(a, _)| r.root(*a).to_i64s()).collect();
        assert_eq!(forced, vec![vec![1, -1, 0], vec![1, 0, -1]]);
    }

    #[test]
    fn small_batch_roundtrips() {
        let r = RootSystem::build(&RootSystemSpec::parse("B3").unwrap()).unwrap();
        let atlas = ChartAtlas::new(&r, Strategy::default());
        assert_eq!(roundtrip_batch(&r, &atlas, 50, 1, Strategy::default()), 50);
        assert_eq!(roundtrip_batch(&r, &atlas, 50, 1, Strategy::Sequential), 50);
    }
}
