//! The Seifert fibered spaces `M = M(0,0;(m-k,1),(n-k,1),(k,1))`.
//!
//! `M` arises from `m`-surgery on a winding number `k` knot in `L(n,1)`
//! after a distance one surgery. For `m <= k - 3` it bounds the plumbing
//!
//! ```text
//!   [-2]-...-[-2] ──┐
//!     (k-1)         ├─ [-2] ─ [m-k]
//!   [-2]-...-[-2] ──┘
//!     (n-k-1)
//! ```
//!
//! with vertices ordered block 1, block 2, the `m-k` vertex, then the
//! trivalent `-2` vertex.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::exactlin::{CharVector, LinError, Rational};
use crate::lens::{LensError, LensSpace, SpincLabel};
use crate::plumbing::{PlumbedDinv, PlumbingError, PlumbingGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeifertError {
    #[error("n = {0} must be odd and at least 5")]
    InvalidN(i64),
    #[error("k = {k} must satisfy 1 < k <= (n-1)/2 for n = {n}")]
    InvalidK { n: i64, k: i64 },
    #[error("m = {m} is outside the modeled range for k = {k}: {need}")]
    OutOfModeledRange { k: i64, m: i64, need: &'static str },
    #[error("k = {k} and m = {m} have the same parity, so |H_1| is even")]
    ParityClash { k: i64, m: i64 },
    #[error("k odd with m = -1 is not covered by any closed form")]
    NotCovered,
    #[error(transparent)]
    Plumbing(#[from] PlumbingError),
    #[error(transparent)]
    Lens(#[from] LensError),
}

impl From<LinError> for SeifertError {
    fn from(e: LinError) -> Self {
        SeifertError::Plumbing(e.into())
    }
}

/// The triple `(n, k, m)` describing `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeifertParams {
    pub n: i64,
    pub k: i64,
    pub m: i64,
}

impl SeifertParams {
    pub fn new(n: i64, k: i64, m: i64) -> Result<Self, SeifertError> {
        if n < 5 || n % 2 == 0 {
            return Err(SeifertError::InvalidN(n));
        }
        if k <= 1 || k > (n - 1) / 2 {
            return Err(SeifertError::InvalidK { n, k });
        }
        Ok(Self { n, k, m })
    }

    /// `|H_1(M)| = |nm - k^2|`.
    pub fn h1_order(&self) -> u64 {
        (self.n * self.m - self.k * self.k).unsigned_abs()
    }

    /// Index of the `m - k` vertex.
    pub fn mk_vertex(&self) -> usize {
        (self.n - 2) as usize
    }

    fn require_opposite_parity(&self) -> Result<(), SeifertError> {
        if (self.k + self.m) % 2 == 0 {
            return Err(SeifertError::ParityClash { k: self.k, m: self.m });
        }
        Ok(())
    }

    fn require_nonpositive_m(&self) -> Result<(), SeifertError> {
        if self.m > 0 || self.m > self.k - 3 {
            return Err(SeifertError::OutOfModeledRange { k: self.k, m: self.m, need: "m <= 0 and m <= k-3" });
        }
        Ok(())
    }
}

/// The plumbing graph bounded by `M`, for `m <= k - 3`.
pub fn seifert_plumbing(p: &SeifertParams) -> Result<PlumbingGraph, SeifertError> {
    let SeifertParams { n, k, m } = *p;
    if m > k - 3 {
        return Err(SeifertError::OutOfModeledRange { k, m, need: "m <= k-3" });
    }
    let n = n as usize;
    let k = k as usize;
    let mut weights = vec![-2; n];
    weights[n - 2] = m - k as i64;
    let mut edges = Vec::with_capacity(n);
    edges.extend((1..k - 1).map(|i| (i - 1, i)));
    edges.extend((k..n - 2).map(|i| (i - 1, i)));
    edges.push((k - 2, n - 1));
    edges.push((n - 3, n - 1));
    edges.push((n - 2, n - 1));
    Ok(PlumbingGraph::from_weights(weights, &edges)?)
}

/// L-space criterion for `M` in the range `m <= k - 3`.
pub fn is_lspace_m(p: &SeifertParams) -> bool {
    p.m <= 0 || (p.m == 1 && 3 * p.k >= p.n + 1)
}

/// Which of the four maximiser families a vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// A single `2` at position `i` of block 1.
    W1 { i: i64, j: i64 },
    /// A single `2` at position `i` of block 2.
    W2 { i: i64, j: i64 },
    /// A `2` on the trivalent vertex.
    W3 { j: i64 },
    /// Zero everywhere except the `m - k` vertex.
    W4 { j: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub family: Family,
    pub vector: CharVector,
}

fn check_family_range(p: &SeifertParams) -> Result<(), SeifertError> {
    if p.n < 9 {
        return Err(SeifertError::InvalidN(p.n));
    }
    p.require_nonpositive_m()
}

/// The starting vectors that support maximising paths, listed family by
/// family. Positions `i` are 1-based within their block; `j` is the entry on
/// the `m - k` vertex.
pub fn maximiser_families(p: &SeifertParams) -> Result<Vec<FamilyMember>, SeifertError> {
    check_family_range(p)?;
    let SeifertParams { n, k, m } = *p;
    let form = seifert_plumbing(p)?.intersection_form();
    let nn = n as usize;
    let b1 = (k - 1) as usize;
    let make = |family: Family| -> Result<FamilyMember, SeifertError> {
        let mut v = vec![0; nn];
        let j = match family {
            Family::W1 { i, j } => {
                v[(i - 1) as usize] = 2;
                j
            }
            Family::W2 { i, j } => {
                v[b1 + (i - 1) as usize] = 2;
                j
            }
            Family::W3 { j } => {
                v[nn - 1] = 2;
                j
            }
            Family::W4 { j } => j,
        };
        v[nn - 2] = j;
        Ok(FamilyMember { family, vector: CharVector::new(v, &form)? })
    };
    let js = |hi: i64| (m - k + 2..=hi).step_by(2);

    let mut out = Vec::new();
    for i in 1..k {
        for j in js(-m + k - 2 * i) {
            out.push(make(Family::W1 { i, j })?);
        }
    }
    let block2_top = if m < 0 { n - k - 1 } else { k - 1 };
    for i in 1..=block2_top {
        let hi = if i <= k - 1 { -m + k - 2 * i } else { -m - k };
        for j in js(hi) {
            out.push(make(Family::W2 { i, j })?);
        }
    }
    if m < 0 {
        for j in js(-m - k) {
            out.push(make(Family::W3 { j })?);
        }
    }
    for j in js(-m + k) {
        out.push(make(Family::W4 { j })?);
    }
    Ok(out)
}

/// The integer vector `v` with `Q·v` equal to the self-conjugate
/// representative.
fn tm_preimage(p: &SeifertParams) -> Vec<i64> {
    let SeifertParams { n, k, .. } = *p;
    let mut v = vec![0; n as usize];
    if k % 2 == 0 {
        for i in 1..k {
            v[(i - 1) as usize] = i.min(k - i);
        }
    } else {
        let len = n - k;
        for i in 1..len {
            v[(k - 1 + i - 1) as usize] = i.min(len - i);
        }
    }
    v[(n - 2) as usize] = -1;
    v
}

/// A characteristic vector in `Im Q` carrying the self-conjugate structure
/// `t_M`.
pub fn tm_representative(p: &SeifertParams) -> Result<CharVector, SeifertError> {
    check_family_range(p)?;
    let SeifertParams { n, k, m } = *p;
    let form = seifert_plumbing(p)?.intersection_form();
    let mut w = vec![0; n as usize];
    if k % 2 == 0 {
        w[(k / 2 - 1) as usize] = -2;
    } else {
        w[(k - 1 + (n - k) / 2 - 1) as usize] = -2;
    }
    w[(n - 2) as usize] = k - m;
    assert_eq!(form.apply(&tm_preimage(p)), w, "representative must equal Q·v");
    Ok(CharVector::new(w, &form)?)
}

/// Adds `±2` to the entry of the `m - k` vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuShift {
    pub direction: i64,
    pub vertex: usize,
}

impl MuShift {
    pub fn new(p: &SeifertParams, direction: i64) -> Self {
        assert!(direction == 1 || direction == -1);
        Self { direction, vertex: p.mk_vertex() }
    }

    pub fn apply(&self, w: &CharVector) -> CharVector {
        let mut e = w.entries().to_vec();
        e[self.vertex] += 2 * self.direction;
        CharVector::new_unchecked(e)
    }
}

fn closed_form_range(p: &SeifertParams) -> Result<(), SeifertError> {
    p.require_nonpositive_m()?;
    p.require_opposite_parity()
}

/// `d(M, t_M)`: `m/4` for `k` odd, `(m - 2k + n)/4` for `k` even.
pub fn dinv_closed_tm(p: &SeifertParams) -> Result<Rational, SeifertError> {
    closed_form_range(p)?;
    let SeifertParams { n, k, m } = *p;
    let num = if k % 2 == 1 { m } else { m - 2 * k + n };
    Ok(frac(num, 4))
}

/// `d(M, t_M + PD[μ])`, up to conjugation.
pub fn dinv_closed_tm_mu(p: &SeifertParams) -> Result<Rational, SeifertError> {
    let SeifertParams { n, k, m } = *p;
    if k % 2 == 1 && m == -1 {
        return Err(SeifertError::NotCovered);
    }
    closed_form_range(p)?;
    let h = n * m - k * k;
    Ok(if k % 2 == 0 {
        frac(
            n * m * m + (4 * n + n * n - 2 * k * n - k * k) * m + 2 * k * k * k - 4 * k * k + 4 * n - n * k * k,
            4 * h,
        )
    } else if m <= -2 {
        frac(n * m * m + (4 * n - k * k) * m + 4 * n - 4 * k * k, 4 * h)
    } else {
        let i = ((n - k) / 2).rem_euclid(k);
        frac(2 * k * i + n - k * n, -k * k)
    })
}

fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// For `m = k ± 1`, `M` is a lens space; these are its two relevant labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LensCase {
    pub lens: LensSpace,
    pub tm_label: SpincLabel,
    pub tm_mu_label: SpincLabel,
}

impl LensCase {
    pub fn d_tm(&self) -> Rational {
        self.lens.d(self.tm_label)
    }

    pub fn d_tm_mu(&self) -> Rational {
        self.lens.d(self.tm_mu_label)
    }
}

/// `L(nk - n - k², k - 1)` for `m = k - 1` and `L(nk + n - k², k + 1)` for
/// `m = k + 1`, with the labels of `t_M` and `t_M + PD[μ]`.
pub fn lens_case_labels(n: i64, k: i64, m: i64) -> Result<LensCase, SeifertError> {
    SeifertParams::new(n, k, m)?;
    let (p, q, a, b) = if m == k - 1 {
        let p = n * k - n - k * k;
        if k % 2 == 0 {
            (p, k - 1, (k - 2) / 2, (3 * k - 2) / 2)
        } else {
            (p, k - 1, (p + k - 2) / 2, (p - k - 2) / 2)
        }
    } else if m == k + 1 {
        let p = n * k + n - k * k;
        if k % 2 == 0 {
            (p, k + 1, k / 2, 3 * k / 2)
        } else {
            (p, k + 1, (p + k) / 2, (p - k) / 2)
        }
    } else {
        return Err(SeifertError::OutOfModeledRange { k, m, need: "m = k-1 or m = k+1" });
    };
    let lens = LensSpace::new(p as u64, q)?;
    Ok(LensCase { lens, tm_label: lens.label(a), tm_mu_label: lens.label(b) })
}

/// The algorithm's values at `t_M` and at both μ-shifts of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmValues {
    pub tm: Option<Rational>,
    pub tm_mu_plus: Option<Rational>,
    pub tm_mu_minus: Option<Rational>,
}

/// Reads the `t_M` values off a finished maximisation.
pub fn tm_values(p: &SeifertParams, d: &PlumbedDinv) -> Result<TmValues, SeifertError> {
    let rep = tm_representative(p)?;
    let at = |w: &CharVector| -> Result<Option<Rational>, SeifertError> { Ok(d.d_at(w)?.cloned()) };
    Ok(TmValues {
        tm: at(&rep)?,
        tm_mu_plus: at(&MuShift::new(p, 1).apply(&rep))?,
        tm_mu_minus: at(&MuShift::new(p, -1).apply(&rep))?,
    })
}
