//! Plumbing graphs and the Ozsváth–Szabó push-down algorithm.
//!
//! For a negative-definite plumbing with at most one bad vertex,
//!
//! ```text
//! d(Y, t) = max { (wᵀ Q⁻¹ w + |G|) / 4 : w characteristic, [w] = t }
//! ```
//!
//! and the maximum is attained among the starting vectors of the box
//! `e_i + 2 <= w_i <= -e_i` that support a maximising push-down path.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::exactlin::{
    CharVector, ClassKey, InitialBox, IntersectionForm, LinError, Rational, SpincClassifier,
};

/// Why the push-down algorithm may not be applied to a graph.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Inapplicable {
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("graph has {0} bad vertices, at most one is allowed")]
    TooManyBadVertices(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlumbingError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex ids must be exactly 0..{expected}, found {found}")]
    BadVertexId { found: usize, expected: usize },
    #[error("vertex {0} listed twice")]
    DuplicateVertex(usize),
    #[error("edge mentions unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} listed twice")]
    MultiEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("algorithm inapplicable: {0}")]
    AlgorithmInapplicable(Inapplicable),
    #[error("push-down exceeded its budget of {0} steps")]
    StepBudgetExceeded(u64),
    #[error("entry {index} lies below the weight of its vertex")]
    BelowBox { index: usize },
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// A connected simple graph of weighted spheres, vertices `0..|G|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
    neighbours: Vec<Vec<usize>>,
}

impl PlumbingGraph {
    /// `vertices` are `(id, weight)` pairs in any order; ids must be dense.
    pub fn new(vertices: &[(usize, i64)], edges: &[(usize, usize)]) -> Result<Self, PlumbingError> {
        let n = vertices.len();
        if n == 0 {
            return Err(PlumbingError::Empty);
        }
        let mut weights = vec![None; n];
        for &(id, w) in vertices {
            let slot = weights
                .get_mut(id)
                .ok_or(PlumbingError::BadVertexId { found: id, expected: n })?;
            if slot.replace(w).is_some() {
                return Err(PlumbingError::DuplicateVertex(id));
            }
        }
        let weights: Vec<i64> = weights.into_iter().map(|w| w.unwrap()).collect();
        Self::from_weights(weights, edges)
    }

    /// Vertex `i` gets `weights[i]`.
    pub fn from_weights(weights: Vec<i64>, edges: &[(usize, usize)]) -> Result<Self, PlumbingError> {
        let n = weights.len();
        if n == 0 {
            return Err(PlumbingError::Empty);
        }
        let mut neighbours = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(PlumbingError::UnknownVertex(v));
                }
            }
            if a == b {
                return Err(PlumbingError::SelfLoop(a));
            }
            if neighbours[a].contains(&b) {
                return Err(PlumbingError::MultiEdge(a.min(b), a.max(b)));
            }
            neighbours[a].push(b);
            neighbours[b].push(a);
            normalized.push((a.min(b), a.max(b)));
        }
        for list in &mut neighbours {
            list.sort_unstable();
        }
        normalized.sort_unstable();

        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &neighbours[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(PlumbingError::Disconnected);
        }
        Ok(Self { weights, edges: normalized, neighbours })
    }

    /// A linear chain with the given weights.
    pub fn chain(weights: &[i64]) -> Result<Self, PlumbingError> {
        let edges: Vec<(usize, usize)> = (1..weights.len()).map(|i| (i - 1, i)).collect();
        Self::from_weights(weights.to_vec(), &edges)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.neighbours[v].len()
    }

    pub fn intersection_form(&self) -> IntersectionForm {
        let n = self.len();
        let mut entries = vec![0; n * n];
        for (i, &w) in self.weights.iter().enumerate() {
            entries[i * n + i] = w;
        }
        for &(a, b) in &self.edges {
            entries[a * n + b] = 1;
            entries[b * n + a] = 1;
        }
        IntersectionForm::from_entries(n, entries)
    }

    /// Vertices whose weight exceeds minus their valence.
    pub fn count_bad_vertices(&self) -> usize {
        (0..self.len())
            .filter(|&v| self.weights[v] > -(self.valence(v) as i64))
            .count()
    }

    /// Checks the hypotheses of the push-down algorithm.
    pub fn check_applicable(&self) -> Result<(), PlumbingError> {
        if !self.intersection_form().is_negative_definite() {
            return Err(PlumbingError::AlgorithmInapplicable(Inapplicable::NotNegativeDefinite));
        }
        let bad = self.count_bad_vertices();
        if bad > 1 {
            return Err(PlumbingError::AlgorithmInapplicable(Inapplicable::TooManyBadVertices(bad)));
        }
        Ok(())
    }

    /// `64 · |G| · (1 + max|e_i|) · |det Q|`, saturating.
    pub fn default_step_budget(&self) -> u64 {
        let det = self.intersection_form().determinant();
        let det = det.magnitude().to_u64().unwrap_or(u64::MAX);
        let emax = self.weights.iter().map(|w| w.unsigned_abs()).max().unwrap_or(0);
        64u64
            .saturating_mul(self.len() as u64)
            .saturating_mul(1 + emax)
            .saturating_mul(det)
    }

    /// Maximal runs of weight -2 vertices of valence at most 2, in path order.
    fn minus_two_chains(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let member = |v: usize| self.weights[v] == -2 && self.valence(v) <= 2;
        let mut seen = vec![false; n];
        let mut chains = Vec::new();
        for start in 0..n {
            if seen[start] || !member(start) {
                continue;
            }
            let inner = |v: usize| self.neighbours[v].iter().copied().filter(|&u| member(u)).count();
            if inner(start) > 1 {
                continue;
            }
            let mut chain = vec![start];
            seen[start] = true;
            let mut cur = start;
            while let Some(&next) = self.neighbours[cur].iter().find(|&&u| member(u) && !seen[u]) {
                seen[next] = true;
                chain.push(next);
                cur = next;
            }
            if chain.len() > 1 {
                chains.push(chain);
            }
        }
        chains
    }
}

/// Whether a push-down path ended inside the target box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathKind {
    Maximising,
    NonMaximising,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathOutcome {
    pub kind: PathKind,
    pub terminal: CharVector,
    pub steps: u64,
}

/// Runs the push-down procedure in place on raw entries. `choose` picks a
/// vertex among the (sorted, nonempty) candidates with `w_j = -e_j`.
fn run_push<F>(g: &PlumbingGraph, w: &mut [i64], max_steps: u64, mut choose: F) -> Result<(PathKind, u64), PlumbingError>
where
    F: FnMut(&[usize]) -> usize,
{
    let e = &g.weights;
    let mut candidates = Vec::new();
    let mut steps = 0u64;
    loop {
        candidates.clear();
        let mut in_box = true;
        for i in 0..w.len() {
            if w[i] > -e[i] {
                return Ok((PathKind::NonMaximising, steps));
            }
            if w[i] == -e[i] {
                candidates.push(i);
                in_box = false;
            }
        }
        if in_box {
            debug_assert!(w.iter().zip(e).all(|(x, e)| *e <= *x && *x <= -e - 2));
            return Ok((PathKind::Maximising, steps));
        }
        if steps >= max_steps {
            return Err(PlumbingError::StepBudgetExceeded(max_steps));
        }
        let j = choose(&candidates);
        // Adding 2·Q e_j changes wᵀQ⁻¹w by 4(w_j + e_j), which is zero here.
        assert_eq!(w[j], -e[j], "push-down chose a vertex off the boundary");
        w[j] += 2 * e[j];
        for &u in &g.neighbours[j] {
            w[u] += 2;
        }
        steps += 1;
    }
}

fn check_start(g: &PlumbingGraph, w: &CharVector) -> Result<(), PlumbingError> {
    if w.len() != g.len() {
        return Err(LinError::DimensionMismatch { expected: g.len(), got: w.len() }.into());
    }
    if let Some(index) = w.entries().iter().zip(&g.weights).position(|(x, e)| x < e) {
        return Err(PlumbingError::BelowBox { index });
    }
    Ok(())
}

/// Push-down from `w`, always pushing the smallest eligible vertex.
pub fn push_down(w: &CharVector, g: &PlumbingGraph, max_steps: u64) -> Result<PathOutcome, PlumbingError> {
    push_down_with(w, g, max_steps, |c| c[0])
}

/// Push-down with a caller-supplied vertex choice. `choose` receives the
/// sorted candidate vertices and returns one of them.
pub fn push_down_with<F>(w: &CharVector, g: &PlumbingGraph, max_steps: u64, mut choose: F) -> Result<PathOutcome, PlumbingError>
where
    F: FnMut(&[usize]) -> usize,
{
    check_start(g, w)?;
    let mut cur = w.entries().to_vec();
    let (kind, steps) = run_push(g, &mut cur, max_steps, |c| {
        let j = choose(c);
        assert!(c.contains(&j), "vertex choice must be one of the candidates");
        j
    })?;
    Ok(PathOutcome { kind, terminal: CharVector::new_unchecked(cur), steps })
}

/// Every vector visited by the deterministic push-down path, start included.
pub fn push_down_path(w: &CharVector, g: &PlumbingGraph, max_steps: u64) -> Result<Vec<CharVector>, PlumbingError> {
    check_start(g, w)?;
    let e = &g.weights;
    let mut cur = w.entries().to_vec();
    let mut path = vec![w.clone()];
    loop {
        if cur.iter().zip(e).any(|(x, e)| *x > -e) {
            return Ok(path);
        }
        let Some(j) = cur.iter().zip(e).position(|(x, e)| *x == -e) else {
            return Ok(path);
        };
        if path.len() as u64 > max_steps {
            return Err(PlumbingError::StepBudgetExceeded(max_steps));
        }
        cur[j] += 2 * e[j];
        for &u in &g.neighbours[j] {
            cur[u] += 2;
        }
        path.push(CharVector::new_unchecked(cur.clone()));
    }
}

/// Knobs for a supporter scan.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScanOptions {
    /// Skip starting vectors with `2, 0, ..., 0, 2` inside a -2 chain; such
    /// vectors never support a maximising path.
    pub prune_substrings: bool,
    /// Per-path step budget; `None` uses [`PlumbingGraph::default_step_budget`].
    pub max_steps: Option<u64>,
}

/// A starting vector whose push-down path is maximising.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Supporter {
    pub initial: CharVector,
    pub terminal: CharVector,
    pub steps: u64,
}

/// The supporter search split into independent index ranges of the initial
/// box, so callers can fan it out over threads and merge in order.
#[derive(Debug, Clone)]
pub struct SupporterScan {
    graph: PlumbingGraph,
    classifier: SpincClassifier,
    bx: InitialBox,
    chains: Vec<Vec<usize>>,
    options: ScanOptions,
    budget: u64,
}

impl SupporterScan {
    pub fn new(graph: &PlumbingGraph, options: ScanOptions) -> Result<Self, PlumbingError> {
        graph.check_applicable()?;
        let form = graph.intersection_form();
        let classifier = SpincClassifier::new(&form)?;
        let bx = InitialBox::new(&form)?;
        let chains = if options.prune_substrings { graph.minus_two_chains() } else { Vec::new() };
        let budget = options.max_steps.unwrap_or_else(|| graph.default_step_budget());
        Ok(Self { graph: graph.clone(), classifier, bx, chains, options, budget })
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    pub fn classifier(&self) -> &SpincClassifier {
        &self.classifier
    }

    pub fn options(&self) -> ScanOptions {
        self.options
    }

    /// Size of the initial box.
    pub fn total(&self) -> u64 {
        self.bx.total()
    }

    fn pruned(&self, w: &[i64]) -> bool {
        self.chains.iter().any(|chain| {
            let mut open = false;
            for &v in chain {
                match w[v] {
                    2 if open => return true,
                    2 => open = true,
                    0 => {}
                    _ => open = false,
                }
            }
            false
        })
    }

    /// Supporters among box positions `start..end`, in box order.
    pub fn scan_range(&self, start: u64, end: u64) -> Result<Vec<Supporter>, PlumbingError> {
        let mut out = Vec::new();
        for w in self.bx.range(start, end) {
            if self.options.prune_substrings && self.pruned(&w) {
                continue;
            }
            let mut cur = w.clone();
            let (kind, steps) = run_push(&self.graph, &mut cur, self.budget, |c| c[0])?;
            if kind == PathKind::Maximising {
                out.push(Supporter {
                    initial: CharVector::new_unchecked(w),
                    terminal: CharVector::new_unchecked(cur),
                    steps,
                });
            }
        }
        Ok(out)
    }

    /// `(wᵀQ⁻¹w + |G|) / 4`
    pub fn value(&self, w: &CharVector) -> Result<Rational, PlumbingError> {
        let sq = self.classifier.square(w.entries())?;
        Ok((sq + Rational::from_integer(BigInt::from(self.graph.len()))) / Rational::from_integer(BigInt::from(4)))
    }

    /// Folds supporters (in box order) into per-class maxima.
    pub fn assemble<'a, I>(&self, supporters: I) -> Result<PlumbedDinv, PlumbingError>
    where
        I: IntoIterator<Item = &'a Supporter>,
    {
        let mut classes: BTreeMap<ClassKey, ClassValue> = BTreeMap::new();
        for s in supporters {
            let key = self.classifier.key(&s.initial)?;
            let value = self.value(&s.initial)?;
            match classes.get_mut(&key) {
                Some(entry) => {
                    entry.supporters += 1;
                    if value > entry.value {
                        entry.value = value;
                        entry.representative = s.initial.clone();
                    }
                }
                None => {
                    classes.insert(key, ClassValue { representative: s.initial.clone(), value, supporters: 1 });
                }
            }
        }
        Ok(PlumbedDinv { classifier: self.classifier.clone(), classes })
    }

    /// Sequential scan over the whole box.
    pub fn run(&self) -> Result<PlumbedDinv, PlumbingError> {
        let supporters = self.scan_range(0, self.total())?;
        self.assemble(&supporters)
    }
}

/// The d-invariant found for one Spin^c class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassValue {
    /// The first supporter (in box order) attaining the maximum.
    pub representative: CharVector,
    pub value: Rational,
    /// How many supporters landed in this class.
    pub supporters: usize,
}

/// Result of the maximisation formula: one value per class that has a
/// supporter. Classes without one are counted by [`PlumbedDinv::missing`].
#[derive(Debug, Clone)]
pub struct PlumbedDinv {
    classifier: SpincClassifier,
    classes: BTreeMap<ClassKey, ClassValue>,
}

impl PlumbedDinv {
    pub fn classes(&self) -> &BTreeMap<ClassKey, ClassValue> {
        &self.classes
    }

    pub fn classifier(&self) -> &SpincClassifier {
        &self.classifier
    }

    /// `|det Q|` minus the number of classes found.
    pub fn missing(&self) -> BigInt {
        self.classifier.det_abs() - BigInt::from(self.classes.len())
    }

    /// The d-invariant of the class of `w`, if that class had a supporter.
    pub fn d_at(&self, w: &CharVector) -> Result<Option<&Rational>, PlumbingError> {
        let key = self.classifier.key(w)?;
        Ok(self.classes.get(&key).map(|c| &c.value))
    }

    /// All values, sorted.
    pub fn values(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.classes.values().map(|c| c.value.clone()).collect();
        v.sort();
        v
    }
}

/// d-invariants of the boundary of `g`, one per Spin^c class.
pub fn dinv_plumbed(g: &PlumbingGraph) -> Result<PlumbedDinv, PlumbingError> {
    SupporterScan::new(g, ScanOptions::default())?.run()
}
