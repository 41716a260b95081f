//! Classical root systems in integer ambient coordinates, their root lattice
//! coordinates, and the enumeration of sets of simple roots.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{dual_basis, solve_left, IntMatrix, IntVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FactorSpec {
    pub family: Family,
    pub rank: usize,
}

/// A product of irreducible classical root systems.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSystemSpec {
    pub factors: Vec<FactorSpec>,
}

impl RootSystemSpec {
    pub fn single(family: Family, rank: usize) -> Self {
        RootSystemSpec {
            factors: vec![FactorSpec { family, rank }],
        }
    }

    /// Parses `"A2"`, `"A2xB3"` or `"A2,B3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let factors = s
            .split(|c| c == 'x' || c == ',' || c == '*')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                let p = p.trim();
                let family: Family = p[..1].parse()?;
                let rank = p[1..]
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSpec(format!("bad rank in {p:?}")))?;
                Ok(FactorSpec { family, rank })
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::InvalidSpec("no factors".into()));
        }
        Ok(RootSystemSpec { factors })
    }

    pub fn validate(&self) -> Result<()> {
        for f in &self.factors {
            let ok = match f.family {
                Family::A | Family::B | Family::C => f.rank >= 1,
                Family::D => f.rank >= 2,
                Family::G => f.rank == 2,
                Family::E | Family::F => {
                    return Err(Error::UnsupportedFamily(format!("{}{}", f.family, f.rank)))
                }
            };
            if !ok {
                return Err(Error::InvalidSpec(format!(
                    "rank {} not allowed for family {}",
                    f.rank, f.family
                )));
            }
        }
        Ok(())
    }

    /// Order of the Weyl group from the classical formulas.
    pub fn weyl_group_order(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        self.factors
            .iter()
            .map(|f| match f.family {
                Family::A => fact(f.rank + 1),
                Family::B | Family::C => (1u128 << f.rank) * fact(f.rank),
                Family::D => (1u128 << (f.rank - 1)) * fact(f.rank),
                Family::G => 12,
                Family::E | Family::F => 0,
            })
            .product()
    }

    pub fn label(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("{}{}", f.family, f.rank))
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// A set of simple roots, as sorted indices into [`RootSystem::roots`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleRootSet {
    pub root_indices: Vec<usize>,
}

impl SimpleRootSet {
    pub fn new(mut root_indices: Vec<usize>) -> Self {
        root_indices.sort_unstable();
        SimpleRootSet { root_indices }
    }

    pub fn len(&self) -> usize {
        self.root_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.root_indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.root_indices.binary_search(&i).is_ok()
    }
}

/// An additive relation `gamma = alpha + beta` between roots, `alpha < beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdditiveTriple {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
}

/// A reduced crystallographic root system.
///
/// Roots are kept in ambient integer coordinates, sorted lexicographically.
/// The root lattice `M(R)` has the base simple set as its basis, so
/// `mcoords(i)` are the coefficients of root `i` in the base simple roots,
/// and `N(R)` uses the dual basis: pairing is the plain dot product of
/// `M`- and `N`-coordinates.
#[derive(Clone, Debug)]
pub struct RootSystem {
    label: String,
    ambient_dim: usize,
    roots: Vec<IntVector>,
    base: Vec<usize>,
    mcoords: Vec<IntVector>,
    negation: Vec<usize>,
    index: HashMap<IntVector, usize>,
}

/// A root subsystem together with the indices of its roots in the parent.
#[derive(Clone, Debug)]
pub struct Subsystem {
    pub system: RootSystem,
    pub parent_index: Vec<usize>,
}

fn a_roots(dim: usize, offset: usize, n: usize, roots: &mut Vec<IntVector>, base: &mut Vec<IntVector>) {
    let unit = |i: usize| IntVector::unit(dim, offset + i);
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                roots.push(&unit(i) - &unit(j));
            }
        }
    }
    for i in 0..n {
        base.push(&unit(i) - &unit(i + 1));
    }
}

fn bcd_roots(
    family: Family,
    dim: usize,
    offset: usize,
    n: usize,
    roots: &mut Vec<IntVector>,
    base: &mut Vec<IntVector>,
) {
    let unit = |i: usize| IntVector::unit(dim, offset + i);
    let two = BigInt::from(2);
    for i in 0..n {
        for j in i + 1..n {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let v = &unit(i).scale(&BigInt::from(si)) + &unit(j).scale(&BigInt::from(sj));
                roots.push(v);
            }
        }
        match family {
            Family::B => {
                roots.push(unit(i));
                roots.push(-&unit(i));
            }
            Family::C => {
                roots.push(unit(i).scale(&two));
                roots.push(-&unit(i).scale(&two));
            }
            _ => {}
        }
    }
    for i in 0..n.saturating_sub(1) {
        base.push(&unit(i) - &unit(i + 1));
    }
    match family {
        Family::B => base.push(unit(n - 1)),
        Family::C => base.push(unit(n - 1).scale(&two)),
        Family::D => base.push(&unit(n - 2) + &unit(n - 1)),
        _ => unreachable!(),
    }
}

fn g2_roots(dim: usize, offset: usize, roots: &mut Vec<IntVector>, base: &mut Vec<IntVector>) {
    let v = |xs: [i64; 3]| {
        let mut out = IntVector::zeros(dim);
        for (k, x) in xs.iter().enumerate() {
            out.0[offset + k] = BigInt::from(*x);
        }
        out
    };
    // Short roots u_i - u_j and long roots ±(2u_i - u_j - u_k) in the plane
    // of coordinate sum zero.
    let table: [[i64; 3]; 12] = [
        [1, -1, 0],
        [-1, 1, 0],
        [1, 0, -1],
        [-1, 0, 1],
        [0, 1, -1],
        [0, -1, 1],
        [2, -1, -1],
        [-2, 1, 1],
        [-1, 2, -1],
        [1, -2, 1],
        [-1, -1, 2],
        [1, 1, -2],
    ];
    roots.extend(table.iter().map(|&r| v(r)));
    base.push(v([1, -1, 0]));
    base.push(v([-2, 1, 1]));
}

impl RootSystem {
    /// Builds the standard realization of a (product) root system.
    pub fn build(spec: &RootSystemSpec) -> Result<Self> {
        spec.validate()?;
        let dims: Vec<usize> = spec
            .factors
            .iter()
            .map(|f| match f.family {
                Family::A => f.rank + 1,
                Family::G => 3,
                _ => f.rank,
            })
            .collect();
        let dim: usize = dims.iter().sum();
        let mut roots = Vec::new();
        let mut base = Vec::new();
        let mut offset = 0;
        for (f, d) in spec.factors.iter().zip(&dims) {
            match f.family {
                Family::A => a_roots(dim, offset, f.rank, &mut roots, &mut base),
                Family::B | Family::C | Family::D => {
                    bcd_roots(f.family, dim, offset, f.rank, &mut roots, &mut base)
                }
                Family::G => g2_roots(dim, offset, &mut roots, &mut base),
                Family::E | Family::F => unreachable!("rejected by validate"),
            }
            offset += d;
        }
        Self::from_base(spec.label(), dim, roots, &base)
    }

    /// The type A system `A_n` in `ℤ^{n+1}`.
    pub fn type_a(n: usize) -> Self {
        if n == 0 {
            return Self::from_base("A0".into(), 1, Vec::new(), &[]).expect("empty system");
        }
        Self::build(&RootSystemSpec::single(Family::A, n)).expect("valid A_n")
    }

    /// Builds a root system from its roots and a chosen base of simple roots.
    pub fn from_base(
        label: String,
        ambient_dim: usize,
        mut roots: Vec<IntVector>,
        base_vectors: &[IntVector],
    ) -> Result<Self> {
        roots.sort();
        roots.dedup();
        for r in &roots {
            if r.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: r.len(),
                });
            }
            if r.is_zero() {
                return Err(Error::InvalidSpec("zero root".into()));
            }
        }
        let index: HashMap<IntVector, usize> =
            roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let negation = roots
            .iter()
            .map(|r| {
                index
                    .get(&-r)
                    .copied()
                    .ok_or_else(|| Error::InvalidSpec(format!("{r} has no negative")))
            })
            .collect::<Result<Vec<_>>>()?;
        let base = base_vectors
            .iter()
            .map(|b| {
                index
                    .get(b)
                    .copied()
                    .ok_or_else(|| Error::InvalidSpec(format!("simple root {b} is not a root")))
            })
            .collect::<Result<Vec<_>>>()?;
        if IntMatrix::new(base_vectors.to_vec(), ambient_dim)?.rank() != base.len() {
            return Err(Error::InvalidSpec("simple roots are dependent".into()));
        }
        let mcoords = roots
            .iter()
            .map(|r| {
                let x = solve_left(base_vectors, &r.to_rational())
                    .and_then(|x| x.to_integer())
                    .ok_or_else(|| Error::InvalidSpec(format!("{r} not an integer combination of the base")))?;
                let pos = x.0.iter().all(|c| !c.is_negative());
                let neg = x.0.iter().all(|c| !c.is_positive());
                if !(pos || neg) {
                    return Err(Error::InvalidSpec(format!("{r} has mixed signs")));
                }
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RootSystem {
            label,
            ambient_dim,
            roots,
            base,
            mcoords,
            negation,
            index,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[IntVector] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &IntVector {
        &self.roots[i]
    }

    /// Root lattice coordinates of root `i` (coefficients in the base).
    pub fn mcoords(&self, i: usize) -> &IntVector {
        &self.mcoords[i]
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn base_simple_set(&self) -> SimpleRootSet {
        SimpleRootSet::new(self.base.clone())
    }

    /// Basis of `M(R)` inside the ambient lattice (rows are the base roots).
    pub fn root_lattice_basis(&self) -> IntMatrix {
        IntMatrix::new(
            self.base.iter().map(|&i| self.roots[i].clone()).collect(),
            self.ambient_dim,
        )
        .expect("consistent dimensions")
    }

    pub fn negation(&self, i: usize) -> usize {
        self.negation[i]
    }

    pub fn index_of(&self, v: &IntVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Index of the root with the given root lattice coordinates.
    pub fn index_of_mcoords(&self, m: &IntVector) -> Option<usize> {
        self.mcoords.iter().position(|x| x == m)
    }

    /// Positive with respect to the base simple set.
    pub fn is_positive(&self, i: usize) -> bool {
        self.mcoords[i].0.iter().all(|c| !c.is_negative())
    }

    pub fn positive_roots(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| self.is_positive(i)).collect()
    }

    /// `⟨root i, v⟩` for `v` in `N(R)`-coordinates.
    pub fn pairing(&self, i: usize, v: &IntVector) -> BigInt {
        self.mcoords[i].dot(v)
    }

    pub fn inner(&self, i: usize, j: usize) -> BigInt {
        self.roots[i].dot(&self.roots[j])
    }

    /// The Cartan integer `⟨β, α∨⟩ = 2(β·α)/(α·α)` for `β = j`, `α = i`.
    pub fn cartan(&self, i: usize, j: usize) -> BigInt {
        let num = self.inner(i, j) * 2;
        num / self.inner(i, i)
    }

    /// Index of `s_α(β)` for `α = i`, `β = j`.
    pub fn reflect(&self, i: usize, j: usize) -> usize {
        let c = self.cartan(i, j);
        let image = &self.roots[j] - &self.roots[i].scale(&c);
        self.index[&image]
    }

    /// Checks the root system axioms; used by tests and on untrusted input.
    pub fn check_axioms(&self) -> Result<()> {
        for i in 0..self.roots.len() {
            for j in 0..self.roots.len() {
                let num: BigInt = self.inner(i, j) * 2;
                let den: BigInt = self.inner(i, i);
                if !(&num % &den).is_zero() {
                    return Err(Error::InvalidSpec("not crystallographic".into()));
                }
                let image = &self.roots[j] - &self.roots[i].scale(&(num / den));
                if !self.index.contains_key(&image) {
                    return Err(Error::InvalidSpec("not closed under reflections".into()));
                }
                if i != j && j != self.negation[i] {
                    // Reduced: no other multiple of root i is a root.
                    let (a, b) = (&self.roots[i], &self.roots[j]);
                    let parallel = (0..self.ambient_dim).all(|k| {
                        (0..self.ambient_dim).all(|l| &a[k] * &b[l] == &a[l] * &b[k])
                    });
                    if parallel {
                        return Err(Error::InvalidSpec("not reduced".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Simple roots of `s`, as rows in `M(R)`-coordinates.
    pub fn simple_set_matrix(&self, s: &SimpleRootSet) -> IntMatrix {
        IntMatrix::new(
            s.root_indices.iter().map(|&i| self.mcoords[i].clone()).collect(),
            self.rank(),
        )
        .expect("consistent dimensions")
    }

    /// Rays of the Weyl chamber `σ_S`: the basis of `N(R)` dual to `S`,
    /// row `k` pairing to one with the `k`-th root of `s`.
    pub fn chamber_rays(&self, s: &SimpleRootSet) -> Result<IntMatrix> {
        dual_basis(&self.simple_set_matrix(s))
    }

    /// All sets of simple roots, as the orbit of the base under the simple
    /// reflections of each visited set. Sorted canonically.
    pub fn enumerate_simple_root_sets(&self) -> Vec<SimpleRootSet> {
        let start = self.base_simple_set();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(start.root_indices.clone());
        let mut queue = VecDeque::from([start]);
        let mut out = Vec::new();
        while let Some(s) = queue.pop_front() {
            for &a in &s.root_indices {
                let next = SimpleRootSet::new(s.root_indices.iter().map(|&b| self.reflect(a, b)).collect());
                if seen.insert(next.root_indices.clone()) {
                    queue.push_back(next);
                }
            }
            out.push(s);
        }
        out.sort();
        out
    }

    /// Coefficients of root `root` in the simple roots of `s` (in the order of
    /// `s.root_indices`); all `≥ 0` or all `≤ 0`.
    pub fn positive_root_expansion(&self, s: &SimpleRootSet, root: usize) -> Result<IntVector> {
        let rays = self.chamber_rays(s)?;
        self.expansion_with_rays(&rays, root)
    }

    pub(crate) fn expansion_with_rays(&self, rays: &IntMatrix, root: usize) -> Result<IntVector> {
        let c = rays.apply(&self.mcoords[root]);
        let pos = c.0.iter().all(|x| !x.is_negative());
        let neg = c.0.iter().all(|x| !x.is_positive());
        if pos || neg {
            Ok(c)
        } else {
            Err(Error::NotInSpan)
        }
    }

    /// All relations `gamma = alpha + beta` with each unordered pair listed once.
    pub fn additive_triples(&self) -> Vec<AdditiveTriple> {
        let mut out = Vec::new();
        for a in 0..self.roots.len() {
            for b in a + 1..self.roots.len() {
                if let Some(&g) = self.index.get(&(&self.roots[a] + &self.roots[b])) {
                    out.push(AdditiveTriple {
                        alpha: a,
                        beta: b,
                        gamma: g,
                    });
                }
            }
        }
        out
    }

    /// Connected components of the Dynkin diagram on the given simple roots
    /// (adjacency: nonzero inner product). Components are sorted.
    pub fn dynkin_components(&self, simple: &[usize]) -> Vec<Vec<usize>> {
        let mut comp: Vec<usize> = (0..simple.len()).collect();
        fn find(comp: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while comp[r] != r {
                r = comp[r];
            }
            comp[x] = r;
            r
        }
        for i in 0..simple.len() {
            for j in i + 1..simple.len() {
                if !self.inner(simple[i], simple[j]).is_zero() {
                    let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                    comp[a] = b;
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..simple.len() {
            let r = find(&mut comp, i);
            groups.entry(r).or_default().push(simple[i]);
        }
        let mut out: Vec<Vec<usize>> = groups
            .into_values()
            .map(|mut g| {
                g.sort_unstable();
                g
            })
            .collect();
        out.sort();
        out
    }

    /// Cartan type of a connected set of simple roots.
    pub fn component_type(&self, simple: &[usize]) -> FactorSpec {
        let n = simple.len();
        let mut degree = vec![0usize; n];
        let mut max_bond = 0u32;
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.inner(simple[i], simple[j]).is_zero() {
                    degree[i] += 1;
                    let bond = (self.cartan(simple[i], simple[j]) * self.cartan(simple[j], simple[i]))
                        .to_u32()
                        .unwrap_or(0);
                    max_bond = max_bond.max(bond);
                }
            }
        }
        let family = match max_bond {
            3 => Family::G,
            2 => {
                let norms: Vec<BigInt> = simple.iter().map(|&i| self.inner(i, i)).collect();
                let min = norms.iter().min().cloned().unwrap_or_default();
                let short = norms.iter().filter(|&x| *x == min).count();
                if short == 1 {
                    Family::B
                } else {
                    Family::C
                }
            }
            _ if degree.iter().any(|&d| d >= 3) => Family::D,
            _ => Family::A,
        };
        FactorSpec { family, rank: n }
    }

    /// The subsystem of roots satisfying `keep`, with positivity inherited
    /// from this system.
    pub fn subsystem(&self, keep: impl Fn(usize) -> bool) -> Result<Subsystem> {
        let parent_index: Vec<usize> = (0..self.roots.len()).filter(|&i| keep(i)).collect();
        let kept: BTreeSet<usize> = parent_index.iter().copied().collect();
        let positive: Vec<usize> = parent_index
            .iter()
            .copied()
            .filter(|&i| self.is_positive(i))
            .collect();
        let mut simple: Vec<usize> = positive
            .iter()
            .copied()
            .filter(|&g| {
                !positive.iter().any(|&a| {
                    self.index
                        .get(&(&self.roots[g] - &self.roots[a]))
                        .is_some_and(|b| kept.contains(b) && self.is_positive(*b))
                })
            })
            .collect();
        // Descending root lattice coordinates: the parent base keeps its order.
        simple.sort_by(|&a, &b| self.mcoords[b].cmp(&self.mcoords[a]));
        let base: Vec<IntVector> = simple.iter().map(|&i| self.roots[i].clone()).collect();
        let roots: Vec<IntVector> = parent_index.iter().map(|&i| self.roots[i].clone()).collect();
        let system = RootSystem::from_base(
            format!("sub({})", self.label),
            self.ambient_dim,
            roots,
            &base,
        )?;
        let parent_index = system
            .roots
            .iter()
            .map(|r| self.index[r])
            .collect();
        Ok(Subsystem {
            system,
            parent_index,
        })
    }

    /// Label of the Cartan type of the whole system, e.g. `"A1xA2"`.
    pub fn cartan_label(&self) -> String {
        let comps = self.dynkin_components(&self.base);
        if comps.is_empty() {
            return "A0".into();
        }
        let mut parts: Vec<(Family, usize)> = comps
            .iter()
            .map(|c| {
                let t = self.component_type(c);
                (t.family, t.rank)
            })
            .collect();
        parts.sort();
        parts
            .iter()
            .map(|(f, r)| format!("{f}{r}"))
            .collect::<Vec<_>>()
            .join("x")
    }
}
