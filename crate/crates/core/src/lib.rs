//! Exact Heegaard Floer correction terms for lens spaces and negative-definite
//! plumbed 3-manifolds, together with the distance one surgery obstruction
//! pipeline for the lens spaces `L(n,1)` with `n >= 5` odd.
//!
//! Everything here is pure and allocation-only: the crate is `no_std` and
//! needs nothing beyond `alloc`. File formats, the command-line surface and
//! parallel drivers live in the `lensurg` companion crate.
//!
//! * [`exactlin`]: rationals, intersection forms, characteristic vectors and
//!   Spin^c class partitioning.
//! * [`lens`]: the recursive d-invariant of `L(p,q)`.
//! * [`plumbing`]: the push-down algorithm and the maximisation formula for
//!   plumbings with at most one bad vertex.
//! * [`seifert`]: the plumbings of `M(0,0;(m-k,1),(n-k,1),(k,1))` and their
//!   closed forms.
//! * [`obstruction`]: V-extraction, second-level quadratic checks, verdicts,
//!   symmetry pruning and the final classification.
#![no_std]

extern crate alloc;

pub mod exactlin;
pub mod lens;
pub mod obstruction;
pub mod plumbing;
pub mod seifert;

pub use exactlin::{rat, CharVector, ClassKey, IntersectionForm, Rational, SpincClass};
pub use lens::{LensSpace, SpincLabel};
pub use obstruction::{SurgeryCase, Verdict, VerdictKind, VerdictReason};
pub use plumbing::{PathOutcome, PlumbingGraph};
pub use seifert::SeifertParams;
