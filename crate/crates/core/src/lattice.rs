//! Exact integer and rational linear algebra.
//!
//! Vectors are row vectors throughout: a matrix acts on the right of a row
//! vector (`x·M`) for lattice spans, and on a column vector (`M·v`) when a
//! matrix is used as a linear map between coordinate lattices.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A vector of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<BigInt>);

/// A vector of exact rationals (always reduced, positive denominators).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatVector(pub Vec<BigRational>);

/// A rectangular integer matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<IntVector>,
    ncols: usize,
}

impl IntVector {
    pub fn zeros(len: usize) -> Self {
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = BigInt::one();
        v
    }

    pub fn from_i64s(xs: &[i64]) -> Self {
        IntVector(xs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn check_len(&self, other: &IntVector) {
        assert_eq!(
            self.len(),
            other.len(),
            "integer vectors of different lengths"
        );
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        self.check_len(other);
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Gcd of the entries (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn to_rational(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| BigRational::from_integer(a.clone())).collect())
    }

    /// Entries as `i64`; panics if one does not fit.
    pub fn to_i64s(&self) -> Vec<i64> {
        self.0
            .iter()
            .map(|a| i64::try_from(a).expect("entry exceeds i64"))
            .collect()
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        self.check_len(rhs);
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        self.check_len(rhs);
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl RatVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot_int(&self, other: &IntVector) -> BigRational {
        assert_eq!(self.len(), other.len(), "vectors of different lengths");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .sum()
    }

    /// The integer vector, if every entry is integral.
    pub fn to_integer(&self) -> Option<IntVector> {
        self.0
            .iter()
            .map(|a| a.is_integer().then(|| a.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntVector)
    }
}

impl IntMatrix {
    pub fn new(rows: Vec<IntVector>, ncols: usize) -> Result<Self> {
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: r.len(),
                });
            }
        }
        Ok(IntMatrix { rows, ncols })
    }

    /// Builds a matrix from nonempty rows; panics on ragged input.
    pub fn from_rows(rows: Vec<IntVector>) -> Self {
        let ncols = rows.first().map_or(0, IntVector::len);
        Self::new(rows, ncols).expect("ragged matrix")
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| IntVector::from_i64s(r)).collect())
    }

    pub fn empty(ncols: usize) -> Self {
        IntMatrix {
            rows: Vec::new(),
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix {
            rows: (0..n).map(|i| IntVector::unit(n, i)).collect(),
            ncols: n,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<IntVector> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &IntVector {
        &self.rows[i]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.nrows())
    }

    pub fn transpose(&self) -> IntMatrix {
        let rows = (0..self.ncols)
            .map(|j| IntVector(self.rows.iter().map(|r| r.0[j].clone()).collect()))
            .collect();
        IntMatrix {
            rows,
            ncols: self.nrows(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.ncols != other.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: other.nrows(),
            });
        }
        let rows = self.rows.iter().map(|r| other.left_mul(r)).collect();
        Ok(IntMatrix {
            rows,
            ncols: other.ncols,
        })
    }

    /// `x·M` for a row vector `x` of length `nrows`.
    pub fn left_mul(&self, x: &IntVector) -> IntVector {
        assert_eq!(x.len(), self.nrows(), "row vector length mismatch");
        let mut out = IntVector::zeros(self.ncols);
        for (xi, row) in x.0.iter().zip(&self.rows) {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.0.iter_mut().zip(&row.0) {
                *o += xi * a;
            }
        }
        out
    }

    /// `M·v` for a column vector `v` of length `ncols`.
    pub fn apply(&self, v: &IntVector) -> IntVector {
        IntVector(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    /// `M·v` for a rational column vector.
    pub fn apply_rational(&self, v: &RatVector) -> RatVector {
        RatVector(self.rows.iter().map(|r| v.dot_int(r)).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        let n = self.nrows();
        if n != self.ncols {
            return Err(Error::NotSquare {
                rows: n,
                cols: self.ncols,
            });
        }
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * a[n - 1][n - 1].clone())
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        hermite_normal_form(self)
            .0
            .rows
            .iter()
            .filter(|r| !r.is_zero())
            .count()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

fn row_axpy(rows: &mut [Vec<BigInt>], target: usize, factor: &BigInt, source: usize) {
    if factor.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        *t -= factor * s;
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `u·m = h`, where `h` is in row
/// echelon form with positive pivots, every entry above a pivot reduced into
/// `[0, pivot)`, and zero rows at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let nrows = m.nrows();
    let ncols = m.ncols();
    let mut h: Vec<Vec<BigInt>> = m.rows.iter().map(|r| r.0.clone()).collect();
    let mut u: Vec<Vec<BigInt>> = IntMatrix::identity(nrows)
        .rows
        .into_iter()
        .map(|r| r.0)
        .collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let mut found = false;
        loop {
            let pivot = (r..nrows)
                .filter(|&p| !h[p][c].is_zero())
                .min_by(|&p, &q| h[p][c].abs().cmp(&h[q][c].abs()));
            let Some(p) = pivot else { break };
            found = true;
            h.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for q in r + 1..nrows {
                if h[q][c].is_zero() {
                    continue;
                }
                let f = h[q][c].div_floor(&h[r][c]);
                row_axpy(&mut h, q, &f, r);
                row_axpy(&mut u, q, &f, r);
                if !h[q][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for q in 0..r {
            let f = h[q][c].div_floor(&h[r][c]);
            row_axpy(&mut h, q, &f, r);
            row_axpy(&mut u, q, &f, r);
        }
        r += 1;
    }
    let to_matrix = |rows: Vec<Vec<BigInt>>, ncols| IntMatrix {
        rows: rows.into_iter().map(IntVector).collect(),
        ncols,
    };
    (to_matrix(h, ncols), to_matrix(u, nrows))
}

/// A ℤ-basis (as rows) of the left kernel `{x : x·m = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(m);
    let rows = h
        .rows
        .iter()
        .zip(u.rows)
        .filter(|(hr, _)| hr.is_zero())
        .map(|(_, ur)| ur)
        .collect();
    IntMatrix {
        rows,
        ncols: m.nrows(),
    }
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row span.
pub fn lattice_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(m);
    IntMatrix {
        rows: h.rows.into_iter().filter(|r| !r.is_zero()).collect(),
        ncols: m.ncols(),
    }
}

/// Whether two generating sets span the same sublattice.
pub fn lattices_equal(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    if a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.ncols(),
            got: b.ncols(),
        });
    }
    Ok(lattice_basis(a) == lattice_basis(b))
}

/// The dual basis `d` of a unimodular `b`, i.e. `b·dᵀ = 1`.
pub fn dual_basis(b: &IntMatrix) -> Result<IntMatrix> {
    if b.nrows() != b.ncols() {
        return Err(Error::NotSquare {
            rows: b.nrows(),
            cols: b.ncols(),
        });
    }
    let (h, u) = hermite_normal_form(b);
    if !h.is_identity() {
        return Err(Error::NotUnimodular);
    }
    Ok(u.transpose())
}

/// Solves `x·rows = target` over ℚ. Returns `None` when the system is
/// inconsistent; when the rows are dependent one solution is returned.
pub fn solve_left(rows: &[IntVector], target: &RatVector) -> Option<RatVector> {
    let k = rows.len();
    let d = target.len();
    // Augmented system: d equations in k unknowns.
    let mut a: Vec<Vec<BigRational>> = (0..d)
        .map(|j| {
            let mut eq: Vec<BigRational> = rows
                .iter()
                .map(|r| BigRational::from_integer(r.0[j].clone()))
                .collect();
            eq.push(target.0[j].clone());
            eq
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..d).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..d {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let src = a[r].clone();
                for (x, s) in a[i].iter_mut().zip(&src) {
                    *x -= &f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == d {
            break;
        }
    }
    if a[r..].iter().any(|eq| !eq[k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][k].clone();
    }
    Some(RatVector(x))
}

/// Rank over ℚ of a list of rational rows, by exact Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for c in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot[c];
            for (x, s) in row.iter_mut().zip(&pivot) {
                *x -= &f * s;
            }
        }
        rank += 1;
    }
    rank
}
