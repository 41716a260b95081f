//! Homology of `X(A_n)` as good monomials modulo relations, and the
//! rewriting of any class onto the descent monomials `l^σ`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{check_n, SubsetA};
use crate::error::{Error, Result};

/// A product `l_{A(1)} ⋯ l_{A(m)}` over a strict chain `A(1) ⊊ … ⊊ A(m)`;
/// the empty chain is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoodMonomial {
    pub chain: Vec<SubsetA>,
}

impl GoodMonomial {
    pub fn unit() -> Self {
        GoodMonomial { chain: Vec::new() }
    }

    /// Sorts the given subsets and checks that they form a strict chain of
    /// proper nonempty subsets of `{1, …, n+1}`.
    pub fn new(n: usize, mut chain: Vec<SubsetA>) -> Result<Self> {
        chain.sort_by_key(|a| (a.len(), a.0));
        for a in &chain {
            if a.is_empty() || !a.is_subset(SubsetA::full(n)) || *a == SubsetA::full(n) {
                return Err(Error::InvalidSubset(a.to_string()));
            }
        }
        for w in chain.windows(2) {
            if w[0] == w[1] || !w[0].is_subset(w[1]) {
                return Err(Error::InvalidSubset(format!("{} and {} do not form a strict chain", w[0], w[1])));
            }
        }
        Ok(GoodMonomial { chain })
    }

    pub fn degree(&self) -> usize {
        self.chain.len()
    }

    /// Blocks `P_1 = A(1), P_k = A(k) ∖ A(k−1), P_{m+1} = I ∖ A(m)`.
    pub fn partition(&self, n: usize) -> Vec<SubsetA> {
        let mut prev = 0u64;
        let mut out: Vec<SubsetA> = self
            .chain
            .iter()
            .map(|a| {
                let p = SubsetA(a.0 & !prev);
                prev = a.0;
                p
            })
            .collect();
        out.push(SubsetA(SubsetA::full(n).0 & !prev));
        out
    }

    /// The chain with `a` inserted, if `a` is comparable with every member
    /// and not already present.
    fn insert(&self, a: SubsetA) -> Option<GoodMonomial> {
        if self.chain.iter().any(|&b| b == a || !b.comparable(a)) {
            return None;
        }
        let pos = self.chain.iter().position(|b| a.is_subset(*b)).unwrap_or(self.chain.len());
        let mut chain = self.chain.clone();
        chain.insert(pos, a);
        Some(GoodMonomial { chain })
    }
}

/// Positions `k` (1-based) with `min P_k > max P_{k+1}`.
fn witnesses(n: usize, y: &GoodMonomial) -> Vec<usize> {
    let p = y.partition(n);
    (0..y.degree())
        .filter(|&k| p[k].min() > p[k + 1].max())
        .map(|k| k + 1)
        .collect()
}

/// Number of descents `min P_k > max P_{k+1}` of the associated partition.
pub fn d_statistic(n: usize, y: &GoodMonomial) -> usize {
    witnesses(n, y).len()
}

/// Sort key for `≺`: the elements of `P_{m+1}`, then `P_m`, …, then `P_1`,
/// each block ascending.
pub fn prec_key(n: usize, y: &GoodMonomial) -> Vec<u8> {
    y.partition(n)
        .iter()
        .rev()
        .flat_map(|p| p.members())
        .map(|i| i as u8)
        .collect()
}

/// The monomials `l^σ = ∏_{k ∉ Desc(σ)} l_{{σ(1), …, σ(k)}}`, one per
/// permutation in lexicographic order.
pub fn descent_basis(n: usize) -> Result<Vec<GoodMonomial>> {
    check_n(n)?;
    Ok((1..=n + 1)
        .permutations(n + 1)
        .map(|sigma| {
            let mut mask = 0u64;
            let mut chain = Vec::new();
            for k in 1..=n {
                mask |= 1 << (sigma[k - 1] - 1);
                if sigma[k - 1] < sigma[k] {
                    chain.push(SubsetA(mask));
                }
            }
            GoodMonomial { chain }
        })
        .collect())
}

/// All good monomials for `n`, unit included.
pub fn good_monomials(n: usize) -> Result<Vec<GoodMonomial>> {
    check_n(n)?;
    let full = SubsetA::full(n).0;
    let mut out = vec![GoodMonomial::unit()];
    let mut frontier = vec![GoodMonomial::unit()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for y in &frontier {
            let top = y.chain.last().map_or(0, |a| a.0);
            // Extend upwards only, so each chain is produced once.
            let free = full & !top;
            let mut t = free;
            while t != 0 {
                let a = top | t;
                if a != full {
                    let mut chain = y.chain.clone();
                    chain.push(SubsetA(a));
                    next.push(GoodMonomial { chain });
                }
                t = (t - 1) & free;
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    Ok(out)
}

/// The terms of `r_{i,j}(rest, k)`: for each `A` strictly between the
/// `(k−1)`-th and `k`-th member of `rest` (with `∅` and `I` at the ends),
/// `+ l_A·rest` if `i ∈ A ∌ j` and `− l_A·rest` if `j ∈ A ∌ i`.
pub fn relation_terms(n: usize, rest: &GoodMonomial, k: usize, i: usize, j: usize) -> Vec<(GoodMonomial, i64)> {
    let lower = if k >= 2 { rest.chain[k - 2].0 } else { 0 };
    let upper = rest.chain.get(k - 1).map_or(SubsetA::full(n).0, |a| a.0);
    let d = upper & !lower;
    debug_assert!(i != j && d >> (i - 1) & 1 == 1 && d >> (j - 1) & 1 == 1);
    let mut out = Vec::new();
    let mut t = (d - 1) & d;
    while t != 0 {
        let a = SubsetA(lower | t);
        let sign = match (a.contains(i), a.contains(j)) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        };
        if sign != 0 {
            let mut chain = rest.chain.clone();
            chain.insert(k - 1, a);
            out.push((GoodMonomial { chain }, sign));
        }
        t = (t - 1) & d;
    }
    out.sort();
    out
}

/// Every generator `r_{i,j}(chain, k)` of the relation module `U`.
pub fn relation_generators(n: usize) -> Result<Vec<Vec<(GoodMonomial, i64)>>> {
    let mut out = Vec::new();
    for rest in good_monomials(n)? {
        for (k, gap) in rest.partition(n).iter().enumerate() {
            let members = gap.members();
            for (&i, &j) in members.iter().tuple_combinations() {
                out.push(relation_terms(n, &rest, k + 1, i, j));
            }
        }
    }
    Ok(out)
}

/// An integer combination of good monomials for a fixed `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomClass {
    pub n: usize,
    pub terms: BTreeMap<GoodMonomial, BigInt>,
}

impl CohomClass {
    pub fn zero(n: usize) -> Self {
        CohomClass {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(n: usize, y: GoodMonomial) -> Self {
        let mut c = Self::zero(n);
        c.add(y, BigInt::one());
        c
    }

    pub fn add(&mut self, y: GoodMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(y) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, other: &CohomClass) -> CohomClass {
        let mut out = self.clone();
        for (y, c) in &other.terms {
            out.add(y.clone(), -c);
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n)?;
        for y in self.terms.keys() {
            GoodMonomial::new(self.n, y.chain.clone())?;
        }
        Ok(())
    }
}

/// One application of a relation: the class was replaced by
/// `class − coeff · r_{i,j}(rest, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub rest: GoodMonomial,
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub coeff: BigInt,
}

/// The relations applied while reducing; `original − reduced` equals their
/// combination.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub steps: Vec<Rewrite>,
}

impl Certificate {
    /// Checks that `original − reduced = Σ coeff · r_{i,j}(rest, k)` and that
    /// every step uses a generator of `U`.
    pub fn verify(&self, original: &CohomClass, reduced: &CohomClass) -> bool {
        let n = original.n;
        let mut combo = CohomClass::zero(n);
        for s in &self.steps {
            let gap = s.rest.partition(n)[s.k - 1];
            if s.i == s.j || !gap.contains(s.i) || !gap.contains(s.j) {
                return false;
            }
            for (y, sign) in relation_terms(n, &s.rest, s.k, s.i, s.j) {
                combo.add(y, &s.coeff * sign);
            }
        }
        original.sub(reduced) == combo
    }
}

pub enum RewriteStrategy<'a, R: Rng> {
    /// Always the `≺`-smallest term with `d > 0` and its first witness.
    Canonical,
    /// A random term with `d > 0` and a random witness.
    Random(&'a mut R),
}

/// Replaces `c·y` using the relation of witness `k`; returns the step.
fn rewrite_step(n: usize, y: &GoodMonomial, c: &BigInt, k: usize, mut emit: impl FnMut(GoodMonomial, BigInt)) -> Rewrite {
    let p = y.partition(n);
    let (i, j) = (p[k - 1].min(), p[k].max());
    let mut rest = y.clone();
    rest.chain.remove(k - 1);
    let key = prec_key(n, y);
    let mut seen_self = false;
    for (z, sign) in relation_terms(n, &rest, k, i, j) {
        if &z == y {
            assert_eq!(sign, 1);
            seen_self = true;
            continue;
        }
        assert!(prec_key(n, &z) > key, "rewrite did not increase the order");
        emit(z, -c * sign);
    }
    assert!(seen_self, "relation does not contain the rewritten monomial");
    Rewrite {
        rest,
        k,
        i,
        j,
        coeff: c.clone(),
    }
}

/// Rewrites `c` onto descent monomials, recording the relations used.
pub fn reduce_with<R: Rng>(c: &CohomClass, strategy: RewriteStrategy<'_, R>) -> Result<(CohomClass, Certificate)> {
    c.validate()?;
    let n = c.n;
    let mut cert = Certificate::default();
    let mut done = CohomClass::zero(n);
    match strategy {
        RewriteStrategy::Canonical => {
            let mut pending: BTreeMap<(Vec<u8>, GoodMonomial), BigInt> = BTreeMap::new();
            let push = |pending: &mut BTreeMap<(Vec<u8>, GoodMonomial), BigInt>, done: &mut CohomClass, y: GoodMonomial, v: BigInt| {
                if d_statistic(n, &y) == 0 {
                    done.add(y, v);
                } else {
                    *pending.entry((prec_key(n, &y), y)).or_insert_with(BigInt::zero) += v;
                }
            };
            for (y, v) in &c.terms {
                push(&mut pending, &mut done, y.clone(), v.clone());
            }
            while let Some(((_, y), v)) = pending.pop_first() {
                if v.is_zero() {
                    continue;
                }
                let k = witnesses(n, &y)[0];
                let mut out = Vec::new();
                cert.steps.push(rewrite_step(n, &y, &v, k, |z, w| out.push((z, w))));
                for (z, w) in out {
                    push(&mut pending, &mut done, z, w);
                }
            }
        }
        RewriteStrategy::Random(rng) => {
            let mut terms: HashMap<GoodMonomial, BigInt> = c.terms.clone().into_iter().collect();
            loop {
                let mut open: Vec<&GoodMonomial> = terms
                    .iter()
                    .filter(|(y, v)| !v.is_zero() && d_statistic(n, y) > 0)
                    .map(|(y, _)| y)
                    .collect();
                if open.is_empty() {
                    break;
                }
                open.sort();
                let y = (*open.choose(rng).expect("nonempty")).clone();
                let v = terms.remove(&y).expect("present");
                let ks = witnesses(n, &y);
                let k = ks[rng.gen_range(0..ks.len())];
                let mut out = Vec::new();
                cert.steps.push(rewrite_step(n, &y, &v, k, |z, w| out.push((z, w))));
                for (z, w) in out {
                    *terms.entry(z).or_insert_with(BigInt::zero) += w;
                }
            }
            for (y, v) in terms {
                done.add(y, v);
            }
        }
    }
    Ok((done, cert))
}

/// Canonical reduction onto the descent basis.
pub fn reduce_to_basis(c: &CohomClass) -> Result<CohomClass> {
    reduce_with::<rand_chacha::ChaCha8Rng>(c, RewriteStrategy::Canonical).map(|(r, _)| r)
}

/// `l_a · y` as a combination of good monomials (not yet reduced).
fn times_generator(n: usize, cls: &CohomClass, a: SubsetA) -> CohomClass {
    let mut out = CohomClass::zero(n);
    for (y, c) in &cls.terms {
        if let Some(z) = y.insert(a) {
            out.add(z, c.clone());
            continue;
        }
        let Some(p) = y.chain.iter().position(|&b| b == a) else {
            // Some member is incomparable with `a`.
            continue;
        };
        // l_a² · rest: replace one factor l_a using r_{i,j}(rest, p+1)
        // with i ∈ a ∖ prev and j ∈ next ∖ a.
        let prev = if p > 0 { y.chain[p - 1].0 } else { 0 };
        let next = y.chain.get(p + 1).map_or(SubsetA::full(n).0, |b| b.0);
        let i = SubsetA(a.0 & !prev).min();
        let j = SubsetA(next & !a.0).min();
        let mut rest = y.clone();
        rest.chain.remove(p);
        for (z, sign) in relation_terms(n, &rest, p + 1, i, j) {
            if z == *y {
                continue;
            }
            if let Some(w) = z.insert(a) {
                out.add(w, c * -sign);
            }
        }
    }
    out
}

/// Product of two classes, reduced onto the descent basis.
pub fn multiply_classes(x: &CohomClass, y: &CohomClass) -> Result<CohomClass> {
    if x.n != y.n {
        return Err(Error::InvalidInput("classes for different n".into()));
    }
    x.validate()?;
    y.validate()?;
    let n = x.n;
    let mut total = CohomClass::zero(n);
    for (b, cb) in &y.terms {
        let mut cls = x.clone();
        for &a in &b.chain {
            cls = times_generator(n, &cls, a);
        }
        for (z, c) in cls.terms {
            total.add(z, c * cb);
        }
    }
    reduce_to_basis(&total)
}

pub fn multiply(n: usize, a: &GoodMonomial, b: &GoodMonomial) -> Result<CohomClass> {
    multiply_classes(&CohomClass::monomial(n, a.clone()), &CohomClass::monomial(n, b.clone()))
}
