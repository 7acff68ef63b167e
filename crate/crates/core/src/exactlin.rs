//! Exact rational arithmetic and the integer linear algebra behind every
//! d-invariant computation.
//!
//! Rationals are [`num_rational::BigRational`], which is always kept in lowest
//! terms with a positive denominator. Intersection forms are small dense
//! integer matrices; all determinants and minors are computed fraction-free
//! over [`BigInt`] so nothing here ever rounds.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact arbitrary-precision fraction. Every d-invariant is one of these.
pub type Rational = BigRational;

/// Shorthand for the rational `num / den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Errors from the linear algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinError {
    #[error("intersection form is singular")]
    SingularForm,
    #[error("matrix is not square: row {row} has {len} entries, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entry {index} = {value} does not match the parity of the diagonal")]
    NotCharacteristic { index: usize, value: i64 },
    #[error("initial box has more than 2^64 vectors")]
    BoxTooLarge,
}

/// Symmetric integer matrix of an intersection pairing, indexed by graph
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    size: usize,
    entries: Vec<i64>,
}

impl IntersectionForm {
    /// Builds a form from its rows, checking that it is square and symmetric.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, LinError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != size {
                return Err(LinError::NotSquare { row, len: r.len(), size });
            }
            entries.extend(r);
        }
        let form = Self { size, entries };
        for i in 0..size {
            for j in (i + 1)..size {
                if form.get(i, j) != form.get(j, i) {
                    return Err(LinError::NotSymmetric(i, j));
                }
            }
        }
        Ok(form)
    }

    pub(crate) fn from_entries(size: usize, entries: Vec<i64>) -> Self {
        debug_assert_eq!(entries.len(), size * size);
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    /// The self-intersections `e_i = Q(Σ_i, Σ_i)`.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.size).map(|i| self.get(i, i)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.size).map(|i| self.row(i).to_vec()).collect()
    }

    /// `Q · v` over the integers.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.size);
        (0..self.size)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn big_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.size)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self) -> BigInt {
        let n = self.size;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.big_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Leading principal minors `M_1, ..., M_r`, stopping early at the first
    /// vanishing minor (Bareiss without pivoting yields them as pivots).
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let n = self.size;
        let mut a = self.big_rows();
        let mut prev = BigInt::one();
        let mut minors = Vec::with_capacity(n);
        for k in 0..n {
            minors.push(a[k][k].clone());
            if a[k][k].is_zero() {
                break;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        minors
    }

    /// Sylvester's criterion for `-Q`: the leading minors alternate in sign,
    /// starting negative.
    pub fn is_negative_definite(&self) -> bool {
        if self.size == 0 {
            return false;
        }
        let minors = self.leading_minors();
        minors.len() == self.size
            && minors.iter().enumerate().all(|(k, m)| {
                if k % 2 == 0 {
                    m.is_negative()
                } else {
                    m.is_positive()
                }
            })
    }

    /// Exact inverse by Gauss-Jordan elimination over the rationals.
    pub fn invert_exact(&self) -> Result<RationalMatrix, LinError> {
        let n = self.size;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        let mut inv: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(LinError::SingularForm)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].recip();
            for j in 0..n {
                a[col][j] = &a[col][j] * &p;
                inv[col][j] = &inv[col][j] * &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
        Ok(RationalMatrix { size: n, entries: inv.into_iter().flatten().collect() })
    }
}

/// Square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    size: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let size = rows.len();
        let entries: Vec<Rational> = rows.into_iter().flatten().collect();
        assert_eq!(entries.len(), size * size, "rows must form a square matrix");
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.size + j]
    }

    /// `self · Q`
    pub fn mul_form(&self, q: &IntersectionForm) -> RationalMatrix {
        let n = self.size;
        assert_eq!(n, q.size());
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += self.get(i, k) * Rational::from_integer(q.get(k, j).into());
                }
                out.push(acc);
            }
        }
        RationalMatrix { size: n, entries: out }
    }

    /// `M · v` for an integer vector.
    pub fn apply(&self, v: &[i64]) -> Vec<Rational> {
        assert_eq!(v.len(), self.size);
        (0..self.size)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, &x) in v.iter().enumerate() {
                    if x != 0 {
                        acc += self.get(i, j) * Rational::from_integer(x.into());
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.size).all(|i| {
            (0..self.size).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }
}

/// An element of `Char(G)`: `⟨w, Σ_i⟩ ≡ Q_ii (mod 2)` for every vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharVector(Vec<i64>);

impl CharVector {
    /// Checks the parity condition against `form`.
    pub fn new(entries: Vec<i64>, form: &IntersectionForm) -> Result<Self, LinError> {
        if entries.len() != form.size() {
            return Err(LinError::DimensionMismatch { expected: form.size(), got: entries.len() });
        }
        for (index, (&value, e)) in entries.iter().zip(form.diagonal()).enumerate() {
            if (value - e).rem_euclid(2) != 0 {
                return Err(LinError::NotCharacteristic { index, value });
            }
        }
        Ok(Self(entries))
    }

    /// Caller guarantees parity; checked in debug builds by the callers that
    /// hold the form.
    pub(crate) fn new_unchecked(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The conjugate Spin^c structure is carried by `-w`.
    pub fn conjugate(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for CharVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// The box `e_i + 2 <= w_i <= -e_i`, `w_i ≡ e_i (mod 2)` of starting vectors
/// for the push-down algorithm, enumerated lexicographically (vertex 0 most
/// significant).
#[derive(Debug, Clone)]
pub struct InitialBox {
    lows: Vec<i64>,
    counts: Vec<u64>,
    total: u64,
}

impl InitialBox {
    pub fn new(form: &IntersectionForm) -> Result<Self, LinError> {
        let diag = form.diagonal();
        let lows: Vec<i64> = diag.iter().map(|e| e + 2).collect();
        let counts: Vec<u64> = diag.iter().map(|&e| if e < 0 { (-e) as u64 } else { 0 }).collect();
        let mut total: u64 = 1;
        for &c in &counts {
            total = total.checked_mul(c).ok_or(LinError::BoxTooLarge)?;
        }
        Ok(Self { lows, counts, total })
    }

    /// Number of vectors in the box.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// The vector at lexicographic position `index`.
    pub fn nth_entries(&self, mut index: u64) -> Vec<i64> {
        assert!(index < self.total);
        let mut out = vec![0; self.lows.len()];
        for i in (0..self.lows.len()).rev() {
            let c = self.counts[i];
            out[i] = self.lows[i] + 2 * (index % c) as i64;
            index /= c;
        }
        out
    }

    /// Iterator over positions `start..end` of the box.
    pub fn range(&self, start: u64, end: u64) -> InitialVectors<'_> {
        let end = end.min(self.total);
        let current = if start < end { Some(self.nth_entries(start)) } else { None };
        InitialVectors { bx: self, remaining: end.saturating_sub(start), current }
    }

    pub fn iter(&self) -> InitialVectors<'_> {
        self.range(0, self.total)
    }
}

/// Odometer over a slice of an [`InitialBox`]; yields raw entry vectors.
pub struct InitialVectors<'a> {
    bx: &'a InitialBox,
    remaining: u64,
    current: Option<Vec<i64>>,
}

impl Iterator for InitialVectors<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let cur = self.current.as_mut()?;
        let out = cur.clone();
        if self.remaining > 0 {
            for i in (0..cur.len()).rev() {
                let top = self.bx.lows[i] + 2 * (self.bx.counts[i] as i64 - 1);
                if cur[i] < top {
                    cur[i] += 2;
                    break;
                }
                cur[i] = self.bx.lows[i];
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

/// All starting vectors of the push-down algorithm, as characteristic vectors.
pub fn initial_char_vectors(form: &IntersectionForm) -> Result<impl Iterator<Item = CharVector> + '_, LinError> {
    let bx = InitialBox::new(form)?;
    let total = bx.total();
    let mut odometer = None::<Vec<i64>>;
    let mut pos = 0u64;
    Ok(core::iter::from_fn(move || {
        if pos >= total {
            return None;
        }
        let next = match odometer.take() {
            None => bx.nth_entries(0),
            Some(mut cur) => {
                for i in (0..cur.len()).rev() {
                    let top = bx.lows[i] + 2 * (bx.counts[i] as i64 - 1);
                    if cur[i] < top {
                        cur[i] += 2;
                        break;
                    }
                    cur[i] = bx.lows[i];
                }
                cur
            }
        };
        pos += 1;
        odometer = Some(next.clone());
        Some(CharVector::new_unchecked(next))
    }))
}

/// Decides Spin^c class equality straight from the definition:
/// `Q⁻¹(w − w2) ∈ 2ℤⁿ`.
pub fn same_spinc_class(w: &CharVector, w2: &CharVector, form: &IntersectionForm) -> Result<bool, LinError> {
    let n = form.size();
    for v in [w, w2] {
        if v.len() != n {
            return Err(LinError::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let inv = form.invert_exact()?;
    let diff: Vec<i64> = w.entries().iter().zip(w2.entries()).map(|(a, b)| a - b).collect();
    let two = BigInt::from(2);
    Ok(inv.apply(&diff).iter().all(|x| x.is_integer() && x.numer().is_multiple_of(&two)))
}

/// Canonical label of a Spin^c class on the boundary: the residues of
/// `|det Q| · Q⁻¹ w` modulo `2 |det Q|`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey(Vec<BigInt>);

impl ClassKey {
    pub fn residues(&self) -> &[BigInt] {
        &self.0
    }
}

/// A Spin^c structure on the boundary, carried by one of its characteristic
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpincClass {
    pub representative: CharVector,
    pub key: ClassKey,
}

/// Precomputed `Q⁻¹` data for fast class keys and squares `wᵀQ⁻¹w`.
#[derive(Debug, Clone)]
pub struct SpincClassifier {
    size: usize,
    // sign(det) · adj(Q), so that Q⁻¹ = adj / det_abs
    adj: Vec<BigInt>,
    det_abs: BigInt,
    modulus: BigInt,
}

impl SpincClassifier {
    pub fn new(form: &IntersectionForm) -> Result<Self, LinError> {
        let det = form.determinant();
        if det.is_zero() {
            return Err(LinError::SingularForm);
        }
        let det_abs = det.abs();
        let inv = form.invert_exact()?;
        let scale = Rational::from_integer(det_abs.clone());
        let adj = inv
            .entries
            .iter()
            .map(|x| {
                let y = x * &scale;
                debug_assert!(y.is_integer());
                y.to_integer()
            })
            .collect();
        let modulus = &det_abs * BigInt::from(2);
        Ok(Self { size: form.size(), adj, det_abs, modulus })
    }

    /// `|det Q|`, which is also the number of Spin^c classes.
    pub fn det_abs(&self) -> &BigInt {
        &self.det_abs
    }

    fn adj_apply(&self, w: &[i64]) -> Vec<BigInt> {
        (0..self.size)
            .map(|i| {
                let row = &self.adj[i * self.size..(i + 1) * self.size];
                let mut acc = BigInt::zero();
                for (a, &x) in row.iter().zip(w) {
                    if x != 0 {
                        acc += a * BigInt::from(x);
                    }
                }
                acc
            })
            .collect()
    }

    fn check_len(&self, w: &[i64]) -> Result<(), LinError> {
        if w.len() != self.size {
            return Err(LinError::DimensionMismatch { expected: self.size, got: w.len() });
        }
        Ok(())
    }

    pub fn key(&self, w: &CharVector) -> Result<ClassKey, LinError> {
        self.check_len(w.entries())?;
        Ok(ClassKey(self.adj_apply(w.entries()).into_iter().map(|x| x.mod_floor(&self.modulus)).collect()))
    }

    pub fn class_of(&self, w: &CharVector) -> Result<SpincClass, LinError> {
        Ok(SpincClass { key: self.key(w)?, representative: w.clone() })
    }

    pub fn same_class(&self, w: &CharVector, w2: &CharVector) -> Result<bool, LinError> {
        Ok(self.key(w)? == self.key(w2)?)
    }

    /// `Q⁻¹ w`
    pub fn solve(&self, w: &[i64]) -> Result<Vec<Rational>, LinError> {
        self.check_len(w)?;
        Ok(self
            .adj_apply(w)
            .into_iter()
            .map(|x| Rational::new(x, self.det_abs.clone()))
            .collect())
    }

    /// `wᵀ Q⁻¹ w`
    pub fn square(&self, w: &[i64]) -> Result<Rational, LinError> {
        self.check_len(w)?;
        let aw = self.adj_apply(w);
        let dot: BigInt = aw.iter().zip(w).map(|(a, &x)| a * BigInt::from(x)).sum();
        Ok(Rational::new(dot, self.det_abs.clone()))
    }

    /// True when `w` lies in the image of `Q`, i.e. `Q⁻¹ w` is integral.
    pub fn in_image(&self, w: &[i64]) -> Result<bool, LinError> {
        self.check_len(w)?;
        Ok(self.adj_apply(w).iter().all(|x| x.is_multiple_of(&self.det_abs)))
    }
}
