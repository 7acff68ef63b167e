//! d-invariants of lens spaces.
//!
//! `L(p,q)` is `p/q` surgery on the unknot, and its Spin^c structures are
//! labelled by `ℤ_p`. The correction terms satisfy
//!
//! ```text
//! d(L(p,q), i) = -1/4 + (2i + 1 - p - q)^2 / (4pq) - d(L(q, r), j)
//! ```
//!
//! with `r = p mod q`, `j = i mod q`, bottoming out at `L(1,·) = S³`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::exactlin::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LensError {
    #[error("lens space order must be positive")]
    ZeroOrder,
    #[error("L({p},{q}) is not a lens space: gcd({p},{q}) = {gcd}")]
    NotCoprime { p: u64, q: i64, gcd: u64 },
}

/// A lens space `L(p,q)` with `0 <= q < p` (`q = 0` only for `p = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LensSpace {
    p: u64,
    q: u64,
}

/// A Spin^c structure on `L(p,q)`, as a residue in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpincLabel(pub u64);

impl fmt::Display for SpincLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

impl LensSpace {
    /// Normalizes `q` into `[0, p)` and checks coprimality.
    pub fn new(p: u64, q: i64) -> Result<Self, LensError> {
        if p == 0 {
            return Err(LensError::ZeroOrder);
        }
        let qn = q.rem_euclid(p as i64) as u64;
        let g = p.gcd(&qn);
        if g != 1 {
            return Err(LensError::NotCoprime { p, q, gcd: g });
        }
        Ok(Self { p, q: qn })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Reduces an arbitrary integer label mod `p`.
    pub fn label(&self, i: i64) -> SpincLabel {
        SpincLabel(i.rem_euclid(self.p as i64) as u64)
    }

    /// `L(p, p - q)`, i.e. the same space with its orientation reversed.
    pub fn mirror(&self) -> Self {
        if self.p == 1 {
            return *self;
        }
        Self { p: self.p, q: self.p - self.q }
    }

    /// `d(L(p,q), i)`, unrolling the recursion into an alternating sum.
    pub fn d(&self, i: SpincLabel) -> Rational {
        let (mut p, mut q, mut i) = (self.p as i128, self.q as i128, (i.0 % self.p) as i128);
        let mut acc = Rational::zero();
        let mut positive = true;
        while p > 1 {
            let num = (2 * i + 1 - p - q).pow(2) - p * q;
            let term = Rational::new(BigInt::from(num), BigInt::from(4 * p * q));
            if positive {
                acc += term;
            } else {
                acc -= term;
            }
            positive = !positive;
            let r = p % q;
            i %= q;
            p = q;
            q = r;
        }
        acc
    }

    /// Labels of the self-conjugate Spin^c structures: the integral members
    /// of `{(p+q-1)/2, (q-1)/2}`, reduced mod `p`.
    pub fn self_conjugate_labels(&self) -> BTreeSet<SpincLabel> {
        let (p, q) = (self.p as i64, self.q as i64);
        let q = if p == 1 { 1 } else { q };
        [p + q - 1, q - 1]
            .into_iter()
            .filter(|x| x % 2 == 0)
            .map(|x| self.label(x / 2))
            .collect()
    }

    /// All `p` d-invariants, sorted.
    pub fn d_multiset(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = (0..self.p).map(|i| self.d(SpincLabel(i))).collect();
        out.sort();
        out
    }
}

/// `d(L(p,q), i)` for raw integers; `q` and `i` are reduced mod `p`.
pub fn lens_d(p: u64, q: i64, i: i64) -> Result<Rational, LensError> {
    let l = LensSpace::new(p, q)?;
    Ok(l.d(l.label(i)))
}

/// `d(L(n,1), i) = -1/4 + (2i - n)^2 / (4n)`.
pub fn lens_d_q1(n: u64, i: i64) -> Rational {
    assert!(n > 0, "lens space order must be positive");
    let n = n as i128;
    let i = i as i128;
    Rational::new(BigInt::from((2 * i - n).pow(2) - n), BigInt::from(4 * n))
}

pub fn self_conjugate_labels(p: u64, q: i64) -> Result<BTreeSet<SpincLabel>, LensError> {
    Ok(LensSpace::new(p, q)?.self_conjugate_labels())
}

/// The sorted multiset `{ d(L(p,q), i) : 0 <= i < p }`.
pub fn lens_d_multiset(p: u64, q: i64) -> Result<Vec<Rational>, LensError> {
    Ok(LensSpace::new(p, q)?.d_multiset())
}

/// Sorted negation of a sorted multiset.
pub fn negate_multiset(values: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = values.iter().map(|x| -x).collect();
    out.sort();
    out
}
