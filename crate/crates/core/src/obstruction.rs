//! Obstructing distance one surgeries `L(n,1) → L(s,1)` for odd `n`.
//!
//! A distance one surgery is `m`-surgery on a knot `K ⊂ L(n,1)` of winding
//! number `k`, landing in `L(s,1)` with `|s| = |nm − k²|`. Comparing the
//! d-invariants of the Seifert space `M` and of `L(s,1)` pins down the
//! integer `V` of the surgery formula; when `V` is negative, fractional, or
//! admits no consistent value one Spin^c structure over, the surgery cannot
//! exist.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::exactlin::Rational;
use crate::lens::{lens_d_q1, LensSpace};
use crate::plumbing::dinv_plumbed;
use crate::seifert::{
    dinv_closed_tm, dinv_closed_tm_mu, is_lspace_m, lens_case_labels, seifert_plumbing, tm_values,
    SeifertError, SeifertParams,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObstructionError {
    #[error("n = {0} must be odd and at least 3")]
    InvalidN(i64),
    #[error("winding number k = {k} must lie in [0, (n-1)/2] for n = {n}")]
    InvalidK { n: i64, k: i64 },
    #[error("sign must be +1 or -1, got {0}")]
    InvalidSign(i64),
    #[error("nm = k^2, so the surgered manifold is not a rational homology sphere")]
    ZeroSurgery,
    #[error("H_1 of the surgered manifold is even or non-cyclic")]
    NotOddCyclic,
    #[error("d(M, t_M) is not computable for m = 1")]
    DNotComputable,
    #[error("(n, k, m) = ({n}, {k}, {m}) is outside the modeled range")]
    OutOfModeledRange { n: i64, k: i64, m: i64 },
    #[error("inconclusive verdict at the edge of the slope sweep: (n, k, m, s) = ({n}, {k}, {m}, {s})")]
    SweepEdge { n: i64, k: i64, m: i64, s: i64 },
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

/// `H_1 = ℤ_first ⊕ ℤ_second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Homology {
    pub first: u64,
    pub second: u64,
}

impl Homology {
    pub fn order(&self) -> u64 {
        self.first * self.second
    }

    pub fn is_cyclic(&self) -> bool {
        self.first.gcd(&self.second) == 1
    }
}

/// First homology of `m`-surgery on a winding number `k` knot in `L(n,1)`.
pub fn surgered_homology(n: i64, k: i64, m: i64) -> Homology {
    if k == 0 {
        return Homology { first: (m * n).unsigned_abs(), second: 1 };
    }
    let d = n.gcd(&k).unsigned_abs();
    Homology { first: (n * m - k * k).unsigned_abs() / d, second: d }
}

/// One surgery hypothesis `L(n,1) → L(s,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SurgeryCase {
    pub n: i64,
    pub k: i64,
    pub m: i64,
    pub s_sign: i64,
}

impl SurgeryCase {
    pub fn new(n: i64, k: i64, m: i64, s_sign: i64) -> Result<Self, ObstructionError> {
        if n < 3 || n % 2 == 0 {
            return Err(ObstructionError::InvalidN(n));
        }
        if k < 0 || k > (n - 1) / 2 {
            return Err(ObstructionError::InvalidK { n, k });
        }
        if s_sign != 1 && s_sign != -1 {
            return Err(ObstructionError::InvalidSign(s_sign));
        }
        if n * m == k * k {
            return Err(ObstructionError::ZeroSurgery);
        }
        Ok(Self { n, k, m, s_sign })
    }

    /// `|s| = |nm − k²|`
    pub fn order(&self) -> u64 {
        (self.n * self.m - self.k * self.k).unsigned_abs()
    }

    pub fn s(&self) -> i64 {
        self.s_sign * self.order() as i64
    }

    /// `+1` when `m > k²/n`, else `-1`.
    pub fn epsilon(&self) -> i64 {
        if self.n * self.m > self.k * self.k {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictKind {
    Obstructed,
    Inconclusive,
    KnownRealized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictReason {
    NonCyclicHomology,
    NotLSpace,
    VNegative,
    VNonInteger,
    SecondLevelNoRoot,
    PriorWork,
    EvenCaseRule,
    SymmetryPruned,
    BandSurgeryConstruction,
    FormulaInconclusive,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::Obstructed => "Obstructed",
            VerdictKind::Inconclusive => "Inconclusive",
            VerdictKind::KnownRealized => "KnownRealized",
        }
    }
}

impl VerdictReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictReason::NonCyclicHomology => "NonCyclicHomology",
            VerdictReason::NotLSpace => "NotLSpace",
            VerdictReason::VNegative => "VNegative",
            VerdictReason::VNonInteger => "VNonInteger",
            VerdictReason::SecondLevelNoRoot => "SecondLevelNoRoot",
            VerdictReason::PriorWork => "PriorWork",
            VerdictReason::EvenCaseRule => "EvenCaseRule",
            VerdictReason::SymmetryPruned => "SymmetryPruned",
            VerdictReason::BandSurgeryConstruction => "BandSurgeryConstruction",
            VerdictReason::FormulaInconclusive => "FormulaInconclusive",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Short names for the rule that decided a verdict.
pub mod tags {
    pub const EVEN_ORDER: &str = "even-order rule";
    pub const HOMOLOGY: &str = "surgered homology";
    pub const NULL_HOMOLOGOUS: &str = "prior:null-homologous";
    pub const WINDING_ONE: &str = "prior:winding-one";
    pub const SMALL_N_TABLE: &str = "prior:small-n-table";
    pub const STEEP_SLOPE: &str = "prior:m>=k+3";
    pub const LSPACE: &str = "L-space criterion";
    pub const M_EQUALS_ONE: &str = "d(M) unknown at m=1";
    pub const V_EXTRACTION: &str = "V from d(M,t_M) and d(L(s,1),0)";
    pub const SECOND_LEVEL: &str = "quadratic/second-level";
    pub const BAND_SURGERY: &str = "band-surgery construction";
    pub const SYMMETRY: &str = "reverse-surgery symmetry";
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub case: SurgeryCase,
    pub kind: VerdictKind,
    pub reason: VerdictReason,
    pub equation_tag: &'static str,
    pub details: String,
}

impl Verdict {
    fn new(case: SurgeryCase, kind: VerdictKind, reason: VerdictReason, tag: &'static str, details: String) -> Self {
        Self { case, kind, reason, equation_tag: tag, details }
    }

    pub fn s(&self) -> i64 {
        self.case.s()
    }

    pub fn is_obstructed(&self) -> bool {
        self.kind == VerdictKind::Obstructed
    }
}

/// Candidate `V` values; a genuine one is a non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VValue(pub Rational);

impl VValue {
    pub fn is_valid(&self) -> bool {
        self.0.is_integer() && !self.0.is_negative()
    }
}

impl fmt::Display for VValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Where `d(M, t_M)` and `d(M, t_M + PD[μ])` come from in the plumbed range.
pub trait SeifertD {
    fn d_tm(&self, p: &SeifertParams) -> Result<Rational, SeifertError>;
    fn d_tm_mu(&self, p: &SeifertParams) -> Result<Rational, SeifertError>;
}

/// The closed forms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForms;

impl SeifertD for ClosedForms {
    fn d_tm(&self, p: &SeifertParams) -> Result<Rational, SeifertError> {
        dinv_closed_tm(p)
    }

    fn d_tm_mu(&self, p: &SeifertParams) -> Result<Rational, SeifertError> {
        dinv_closed_tm_mu(p)
    }
}

/// Brute-force maximisation over the plumbing. Slow; meant for cross-checks.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlumbedAlgorithm;

impl PlumbedAlgorithm {
    fn values(p: &SeifertParams) -> Result<crate::seifert::TmValues, SeifertError> {
        let d = dinv_plumbed(&seifert_plumbing(p)?)?;
        tm_values(p, &d)
    }
}

impl SeifertD for PlumbedAlgorithm {
    fn d_tm(&self, p: &SeifertParams) -> Result<Rational, SeifertError> {
        Self::values(p)?.tm.ok_or(SeifertError::NotCovered)
    }

    fn d_tm_mu(&self, p: &SeifertParams) -> Result<Rational, SeifertError> {
        let v = Self::values(p)?;
        v.tm_mu_plus.or(v.tm_mu_minus).ok_or(SeifertError::NotCovered)
    }
}

/// Which route yields `d(M, ·)` for a case.
enum DRoute {
    Lens(crate::seifert::LensCase),
    Plumbed(SeifertParams),
}

fn d_route(c: &SurgeryCase) -> Result<DRoute, ObstructionError> {
    let SurgeryCase { n, k, m, .. } = *c;
    let out_of_range = ObstructionError::OutOfModeledRange { n, k, m };
    if k < 2 || n < 5 {
        return Err(out_of_range);
    }
    if m == k - 1 || m == k + 1 {
        return Ok(DRoute::Lens(lens_case_labels(n, k, m)?));
    }
    let p = SeifertParams::new(n, k, m)?;
    if m <= k - 3 && m <= 0 {
        return Ok(DRoute::Plumbed(p));
    }
    if m == 1 && m <= k - 3 && is_lspace_m(&p) {
        return Err(ObstructionError::DNotComputable);
    }
    Err(out_of_range)
}

fn require_odd_cyclic(c: &SurgeryCase) -> Result<(), ObstructionError> {
    let h = surgered_homology(c.n, c.k, c.m);
    if h.order() % 2 == 0 || !h.is_cyclic() {
        return Err(ObstructionError::NotOddCyclic);
    }
    Ok(())
}

fn d_tm_with(c: &SurgeryCase, src: &dyn SeifertD) -> Result<Rational, ObstructionError> {
    Ok(match d_route(c)? {
        DRoute::Lens(l) => l.d_tm(),
        DRoute::Plumbed(p) => src.d_tm(&p)?,
    })
}

fn d_tm_mu_with(c: &SurgeryCase, src: &dyn SeifertD) -> Result<Rational, ObstructionError> {
    Ok(match d_route(c)? {
        DRoute::Lens(l) => l.d_tm_mu(),
        DRoute::Plumbed(p) => src.d_tm_mu(&p)?,
    })
}

fn two() -> Rational {
    Rational::from_integer(BigInt::from(2))
}

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `V = ε₁ (d(M, t_M) − sign(s)·d(L(|s|,1), 0)) / 2`.
pub fn v_xi0(n: i64, k: i64, m: i64, s_sign: i64) -> Result<VValue, ObstructionError> {
    v_xi0_with(&SurgeryCase::new(n, k, m, s_sign)?, &ClosedForms)
}

pub fn v_xi0_with(c: &SurgeryCase, src: &dyn SeifertD) -> Result<VValue, ObstructionError> {
    require_odd_cyclic(c)?;
    let dt = d_tm_with(c, src)?;
    let target = lens_d_q1(c.order(), 0) * int(c.s_sign);
    Ok(VValue((dt - target) * int(c.epsilon()) / two()))
}

/// Outcome of the second-level test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecondLevel {
    /// `j` is the label on `L(|s|,1)` and `v_prime` the value of `V` one
    /// Spin^c structure over.
    RootExists { j: u64, v_prime: Rational },
    NoRoot,
}

/// Labels `j` with `sign(s)·d(L(N,1), j) = target`, ascending.
fn q1_preimages(order: u64, s_sign: i64, target: &Rational) -> Vec<u64> {
    // d(L(N,1), j) = ((2j − N)² − N) / 4N
    let big_n = BigInt::from(order);
    let t = (target * int(s_sign) * Rational::from_integer(BigInt::from(4) * &big_n))
        + Rational::from_integer(big_n.clone());
    if !t.is_integer() || t.is_negative() {
        return Vec::new();
    }
    let t = t.to_integer();
    let r = t.sqrt();
    if &r * &r != t {
        return Vec::new();
    }
    let mut out = Vec::new();
    for x in [&big_n - &r, &big_n + &r] {
        if x.is_even() {
            let j: BigInt = x / 2;
            if !j.is_negative() && j < big_n {
                let j = u64::try_from(j).expect("label fits in u64");
                if !out.contains(&j) {
                    out.push(j);
                }
            }
        }
    }
    out
}

/// Looks for `j ∈ [0, |s|)` and `V' ∈ {V, V−1}` with
/// `sign(s)·d(L(|s|,1), j) = d(M, t_M + PD[μ]) − 2ε₁V'`, solving the
/// quadratic in `j` exactly.
pub fn second_level_check(n: i64, k: i64, m: i64, s_sign: i64, v: &VValue) -> Result<SecondLevel, ObstructionError> {
    second_level_check_with(&SurgeryCase::new(n, k, m, s_sign)?, v, &ClosedForms)
}

pub fn second_level_check_with(c: &SurgeryCase, v: &VValue, src: &dyn SeifertD) -> Result<SecondLevel, ObstructionError> {
    let roots = second_level_roots(c, v, src, q1_preimages)?;
    Ok(roots
        .into_iter()
        .next()
        .map_or(SecondLevel::NoRoot, |(j, v_prime)| SecondLevel::RootExists { j, v_prime }))
}

/// Every root `(j, V')`, found by trying each label in turn.
pub fn second_level_search(n: i64, k: i64, m: i64, s_sign: i64, v: &VValue) -> Result<Vec<(u64, Rational)>, ObstructionError> {
    let c = SurgeryCase::new(n, k, m, s_sign)?;
    second_level_roots(&c, v, &ClosedForms, |order, sign, target| {
        (0..order)
            .filter(|&j| lens_d_q1(order, j as i64) * int(sign) == *target)
            .collect()
    })
}

fn second_level_roots<F>(c: &SurgeryCase, v: &VValue, src: &dyn SeifertD, solve: F) -> Result<Vec<(u64, Rational)>, ObstructionError>
where
    F: Fn(u64, i64, &Rational) -> Vec<u64>,
{
    require_odd_cyclic(c)?;
    let dmu = d_tm_mu_with(c, src)?;
    let mut out = Vec::new();
    for drop in [0, 1] {
        let v_prime = &v.0 - int(drop);
        let target = &dmu - &v_prime * int(2 * c.epsilon());
        for j in solve(c.order(), c.s_sign, &target) {
            out.push((j, v_prime.clone()));
        }
    }
    Ok(out)
}

/// Published rows for `n ∈ {3, 5, 7}`: the `s` that prior work leaves open.
pub fn published_row(n: i64) -> Option<&'static [i64]> {
    match n {
        3 => Some(&[-6, -2, -1, 1, 2, 3, 4, 7]),
        5 => Some(&[-9, -5, -1, 1, 4, 5, 6, 9]),
        7 => Some(&[-1, 1, 3, 6, 7, 8, 11]),
        _ => None,
    }
}

/// Pairs realized by explicit band surgeries.
pub fn band_realized(n: i64, s: i64) -> bool {
    [1, -1, n, n - 1, n + 1, n - 4, n + 4].contains(&s) || (n, s) == (5, -5)
}

/// Pairs that no d-invariant argument here can settle.
pub fn open_pair(n: i64, s: i64) -> bool {
    matches!((n, s), (5, -9) | (9, -5))
}

/// Decides one surgery hypothesis using the closed forms.
pub fn check_case(c: &SurgeryCase) -> Verdict {
    check_case_with(c, &ClosedForms)
}

/// Decides one surgery hypothesis; gates are tried in a fixed order and the
/// first one that applies wins.
pub fn check_case_with(c: &SurgeryCase, src: &dyn SeifertD) -> Verdict {
    use VerdictKind::*;
    use VerdictReason::*;
    let SurgeryCase { n, k, m, .. } = *c;
    let s = c.s();
    let verdict = |kind, reason, tag, details: String| Verdict::new(*c, kind, reason, tag, details);
    let h = surgered_homology(n, k, m);

    if h.order() % 2 == 0 {
        return if s == n - 1 || s == n + 1 {
            verdict(KnownRealized, EvenCaseRule, tags::EVEN_ORDER, format!("|H_1| = {} even, s = n±1", h.order()))
        } else {
            verdict(Obstructed, EvenCaseRule, tags::EVEN_ORDER, format!("|H_1| = {} even, s ≠ n±1", h.order()))
        };
    }
    if !h.is_cyclic() {
        return verdict(
            Obstructed,
            NonCyclicHomology,
            tags::HOMOLOGY,
            format!("H_1 = Z_{} + Z_{}", h.first, h.second),
        );
    }
    if k == 0 {
        return if s == n || (n, s) == (5, -5) {
            verdict(KnownRealized, PriorWork, tags::NULL_HOMOLOGOUS, String::from("null-homologous knot, realized"))
        } else {
            verdict(Obstructed, PriorWork, tags::NULL_HOMOLOGOUS, String::from("null-homologous knot"))
        };
    }
    if k == 1 {
        return if s == 1 || s == -1 {
            verdict(KnownRealized, PriorWork, tags::WINDING_ONE, String::from("winding number one, s = ±1"))
        } else if (n, s) == (5, -9) {
            verdict(Inconclusive, PriorWork, tags::WINDING_ONE, String::from("winding number one, left open"))
        } else {
            verdict(Obstructed, PriorWork, tags::WINDING_ONE, String::from("winding number one"))
        };
    }
    if let Some(row) = published_row(n) {
        return if row.contains(&s) {
            let kind = if band_realized(n, s) { KnownRealized } else { Inconclusive };
            verdict(kind, PriorWork, tags::SMALL_N_TABLE, format!("s = {s} listed for n = {n}"))
        } else {
            verdict(Obstructed, PriorWork, tags::SMALL_N_TABLE, format!("s = {s} not listed for n = {n}"))
        };
    }
    if m >= k + 3 {
        return verdict(Obstructed, PriorWork, tags::STEEP_SLOPE, String::from("m >= k+3"));
    }
    if m <= k - 3 && m >= 1 {
        let p = SeifertParams::new(n, k, m).expect("validated above");
        if !is_lspace_m(&p) {
            return verdict(Obstructed, NotLSpace, tags::LSPACE, String::from("M is not an L-space"));
        }
        return verdict(
            Inconclusive,
            FormulaInconclusive,
            tags::M_EQUALS_ONE,
            format!("m = 1, candidate s = {s}"),
        );
    }

    let v = match v_xi0_with(c, src) {
        Ok(v) => v,
        Err(e) => {
            return verdict(Inconclusive, FormulaInconclusive, tags::V_EXTRACTION, format!("{e}"));
        }
    };
    if v.0.is_negative() {
        return verdict(Obstructed, VNegative, tags::V_EXTRACTION, format!("V = {v}"));
    }
    if !v.0.is_integer() {
        return verdict(Obstructed, VNonInteger, tags::V_EXTRACTION, format!("V = {v}"));
    }
    if v.0 < int(2) {
        return verdict(Inconclusive, FormulaInconclusive, tags::V_EXTRACTION, format!("V = {v} < 2"));
    }
    match second_level_check_with(c, &v, src) {
        Ok(SecondLevel::RootExists { j, v_prime }) => verdict(
            Inconclusive,
            FormulaInconclusive,
            tags::SECOND_LEVEL,
            format!("V = {v}, root j = {j} with V' = {v_prime}"),
        ),
        Ok(SecondLevel::NoRoot) => verdict(Obstructed, SecondLevelNoRoot, tags::SECOND_LEVEL, format!("V = {v}, no root")),
        Err(e) => verdict(Inconclusive, FormulaInconclusive, tags::SECOND_LEVEL, format!("{e}")),
    }
}

/// Does an even-order target pass the spin-cobordism d-difference test?
/// True iff some self-conjugate `t'` on `L(|s|,1)` and sign `ε` give
/// `ε (sign(s)·d(L(|s|,1), t') − d(L(n,1), 0)) = −1/4`.
pub fn even_spin_check(n: i64, s: i64) -> bool {
    assert!(n > 0 && n % 2 == 1 && s != 0 && s % 2 == 0);
    let order = s.unsigned_abs();
    let base = lens_d_q1(n as u64, 0);
    let quarter = Rational::new(BigInt::from(-1), BigInt::from(4));
    let lens = LensSpace::new(order, 1).expect("q = 1 is always valid");
    lens.self_conjugate_labels().into_iter().any(|t| {
        let diff = lens_d_q1(order, t.0 as i64) * int(s.signum()) - &base;
        diff == quarter || -diff == quarter
    })
}

/// Lowest slope swept for a given `n`.
pub fn sweep_floor(n: i64) -> i64 {
    -(n + 7)
}

/// For each non-obstructed `s`, the first verdict (in sweep order) that left
/// it open.
pub fn candidate_table(n: i64) -> Result<BTreeMap<i64, Verdict>, ObstructionError> {
    if n < 3 || n % 2 == 0 {
        return Err(ObstructionError::InvalidN(n));
    }
    let mut out = BTreeMap::new();
    for k in 0..=(n - 1) / 2 {
        for m in sweep_floor(n)..=k + 1 {
            for s_sign in [1, -1] {
                let Ok(c) = SurgeryCase::new(n, k, m, s_sign) else { continue };
                let v = check_case(&c);
                if v.is_obstructed() {
                    continue;
                }
                if m == sweep_floor(n) {
                    return Err(ObstructionError::SweepEdge { n, k, m, s: c.s() });
                }
                out.entry(c.s()).or_insert(v);
            }
        }
    }
    Ok(out)
}

/// The `s` for which no distance one surgery `L(n,1) → L(s,1)` is ruled out
/// before symmetry pruning.
pub fn candidates_for(n: i64) -> Result<BTreeSet<i64>, ObstructionError> {
    if let Some(row) = published_row(n) {
        return Ok(row.iter().copied().collect());
    }
    let mut set: BTreeSet<i64> = candidate_table(n)?.into_keys().collect();
    set.insert(n - 1);
    set.insert(n + 1);
    Ok(set)
}

/// A pair dropped by symmetry pruning and the reverse pair that was missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pruned {
    pub n: i64,
    pub s: i64,
    pub missing_reverse: (i64, i64),
}

#[derive(Debug, Clone, Default)]
pub struct PruneOutcome {
    pub kept: BTreeMap<i64, BTreeSet<i64>>,
    pub removed: Vec<Pruned>,
}

fn protected(n: i64, s: i64) -> bool {
    band_realized(n, s) || open_pair(n, s)
}

/// Removes `(n, s)` whenever the reverse surgery `L(|s|,1) → L(sign(s)·n,1)`
/// is itself impossible, repeating until nothing changes. Reverse lookups
/// outside the map use the unpruned candidates.
pub fn symmetry_prune(candidates: &BTreeMap<i64, BTreeSet<i64>>) -> Result<PruneOutcome, ObstructionError> {
    let mut kept = candidates.clone();
    let mut removed = Vec::new();
    let mut outside: BTreeMap<i64, BTreeSet<i64>> = BTreeMap::new();
    loop {
        let mut changed = false;
        let ns: Vec<i64> = kept.keys().copied().collect();
        for n in ns {
            if published_row(n).is_some() {
                continue;
            }
            let ss: Vec<i64> = kept[&n].iter().copied().collect();
            for s in ss {
                let a = s.abs();
                if protected(n, s) || a % 2 == 0 || a < 3 {
                    continue;
                }
                let want = s.signum() * n;
                let present = match kept.get(&a) {
                    Some(set) => set.contains(&want),
                    None => {
                        if !outside.contains_key(&a) {
                            outside.insert(a, candidates_for(a)?);
                        }
                        outside[&a].contains(&want)
                    }
                };
                if !present {
                    kept.get_mut(&n).unwrap().remove(&s);
                    removed.push(Pruned { n, s, missing_reverse: (a, want) });
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(PruneOutcome { kept, removed });
        }
    }
}

/// Why a surviving or pruned pair has its status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairStatus {
    /// A band surgery realizes it.
    Realized,
    /// Nothing here rules it out, and no construction is known.
    Open,
    /// Removed by symmetry pruning.
    Pruned,
}

impl PairStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairStatus::Realized => "realized",
            PairStatus::Open => "open",
            PairStatus::Pruned => "pruned",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedPair {
    pub n: i64,
    pub s: i64,
    pub status: PairStatus,
    pub reason: VerdictReason,
    pub provenance: &'static str,
    pub citation: String,
}

/// Classification for every odd `n` in `lo..=hi` (`lo >= 5`), including
/// the pairs removed by pruning.
pub fn classify_range(lo: i64, hi: i64) -> Result<BTreeMap<i64, Vec<ClassifiedPair>>, ObstructionError> {
    if lo < 5 || lo % 2 == 0 {
        return Err(ObstructionError::InvalidN(lo));
    }
    let mut cands = BTreeMap::new();
    let mut n = 3;
    while n <= hi {
        cands.insert(n, candidates_for(n)?);
        n += 2;
    }
    let pruned = symmetry_prune(&cands)?;
    let mut out = BTreeMap::new();
    let mut n = lo;
    while n <= hi {
        let mut rows = Vec::new();
        for &s in &pruned.kept[&n] {
            let (status, reason, provenance, citation) = if band_realized(n, s) {
                (PairStatus::Realized, VerdictReason::BandSurgeryConstruction, "prior-work", String::from(tags::BAND_SURGERY))
            } else if published_row(n).is_some() {
                (PairStatus::Open, VerdictReason::PriorWork, "prior-work", String::from(tags::SMALL_N_TABLE))
            } else {
                let table = candidate_table(n)?;
                let v = &table[&s];
                let prov = if v.reason == VerdictReason::PriorWork { "prior-work" } else { "computed" };
                (PairStatus::Open, v.reason, prov, format!("{} (k={}, m={})", v.equation_tag, v.case.k, v.case.m))
            };
            rows.push(ClassifiedPair { n, s, status, reason, provenance, citation });
        }
        for p in pruned.removed.iter().filter(|p| p.n == n) {
            rows.push(ClassifiedPair {
                n,
                s: p.s,
                status: PairStatus::Pruned,
                reason: VerdictReason::SymmetryPruned,
                provenance: "computed",
                citation: format!(
                    "{}: no surgery L({},1) -> L({},1)",
                    tags::SYMMETRY,
                    p.missing_reverse.0,
                    p.missing_reverse.1
                ),
            });
        }
        rows.sort_by_key(|r| (r.status == PairStatus::Pruned, r.s));
        out.insert(n, rows);
        n += 2;
    }
    Ok(out)
}

/// The `s` for which a distance one surgery `L(n,1) → L(s,1)` survives every
/// obstruction.
pub fn classify(n: i64) -> Result<BTreeSet<i64>, ObstructionError> {
    let rows = classify_range(n, n)?;
    Ok(rows[&n].iter().filter(|r| r.status != PairStatus::Pruned).map(|r| r.s).collect())
}
