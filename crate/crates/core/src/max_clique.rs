//! Exact maximum clique search on gcd-graphs.
//!
//! Branch and bound over bit-packed candidate sets. Every node greedily
//! colors its candidate set (vertices taken by descending degree inside the
//! set, ties by label) and branches from the highest color class down; a
//! branch is cut as soon as `|clique| + color <= |best|`. The divisor-class
//! bound acts as a global cutoff: once a clique of that size is found the
//! search stops, since nothing larger exists.
//!
//! Gcd-graphs are circulant, hence vertex-transitive, so by default the
//! search only explores cliques through vertex 0. Multiplication by a unit
//! of `Z_n` fixes 0 and permutes each class `{x : gcd(x, n) = d}`, so the
//! second vertex only needs one representative per divisor.

use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::gcd_graph::{DivisorSet, GcdGraph};
use crate::numtheory::{factorize, gcd};

/// Vertex labels of a clique, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CliqueWitness {
    vertices: Vec<u64>,
}

impl CliqueWitness {
    pub fn new(mut vertices: Vec<u64>) -> Self {
        vertices.sort_unstable();
        CliqueWitness { vertices }
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Translate by `c` in `Z_n`.
    pub fn shifted(&self, c: u64, n: u64) -> Self {
        Self::new(self.vertices.iter().map(|&v| (v + c) % n).collect())
    }

    /// Image under `v ↦ v·g + r`, embedding a quotient-graph clique into
    /// the component of residue `r` modulo `g`.
    pub fn lifted(&self, g: u64, r: u64) -> Self {
        Self::new(self.vertices.iter().map(|&v| v * g + r).collect())
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.vertices
    }
}

/// Checks every pair of the witness directly with gcds, independently of any
/// adjacency rows. Duplicate labels fail (`gcd(0, n) = n ∉ D`).
pub fn verify_clique(ds: &DivisorSet, w: &CliqueWitness) -> Result<bool> {
    let n = ds.n();
    if let Some(&v) = w.vertices.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let vs = &w.vertices;
    Ok(vs
        .iter()
        .enumerate()
        .all(|(i, &a)| vs[i + 1..].iter().all(|&b| ds.adjacent(a, b))))
}

/// Smallest prime `p | n` dividing no `d ∈ D`, or `n` when there is none.
///
/// Two vertices congruent mod such a `p` have a difference whose gcd with `n`
/// is a multiple of `p`, hence outside `D`; so a clique holds at most one
/// vertex per residue class mod `p`.
pub fn residue_class_bound(ds: &DivisorSet) -> u64 {
    let f = factorize(ds.n()).expect("n >= 2");
    let bound = f
        .primes()
        .find(|&p| ds.divisors().iter().all(|&d| d % p != 0))
        .unwrap_or(ds.n());
    bound
}

/// Smallest divisor `m > 1` of `n` that divides no `d ∈ D`; `n` always
/// qualifies. Vertices congruent mod `m` are never adjacent, so `ω <= m`.
/// Never larger than [`residue_class_bound`].
pub fn divisor_class_bound(ds: &DivisorSet) -> u64 {
    let n = ds.n();
    (2..=n)
        .filter(|m| n.is_multiple_of(*m))
        .find(|&m| ds.divisors().iter().all(|&d| d % m != 0))
        .unwrap_or(n)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            time_limit: None,
        }
    }
}

/// Which vertex, if any, the search forces into the clique.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Root {
    Vertex(u64),
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    LabelAscending,
    LabelDescending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub budget: Budget,
    pub root: Root,
    pub tie_break: TieBreak,
    /// Stop once a clique this large is found. Combined (min) with
    /// [`divisor_class_bound`]; must be a valid upper bound on ω.
    pub upper_cutoff: Option<u64>,
    /// Branch on one second vertex per divisor class instead of every
    /// neighbour of the root. Ignored with [`Root::Free`].
    pub unit_orbits: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            budget: Budget::unlimited(),
            root: Root::Vertex(0),
            tie_break: TieBreak::LabelAscending,
            upper_cutoff: None,
            unit_orbits: true,
        }
    }
}

impl SolverOptions {
    /// Same problem, different traversal: root at `n/2`, reversed tie-break.
    pub fn alternate(&self, n: u64) -> Self {
        SolverOptions {
            root: Root::Vertex(n / 2),
            tie_break: match self.tie_break {
                TieBreak::LabelAscending => TieBreak::LabelDescending,
                TieBreak::LabelDescending => TieBreak::LabelAscending,
            },
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    /// Size of the best clique found; the clique number when `optimal`.
    pub omega: u64,
    pub witness: CliqueWitness,
    pub nodes_explored: u64,
    pub wall_time: Duration,
    /// `false` when the budget ran out: `omega` is then only a lower bound.
    pub optimal: bool,
}

const BUDGET_CHECK_INTERVAL: u64 = 1024;

struct Search<'g> {
    graph: &'g GcdGraph,
    budget: Budget,
    descending_labels: bool,
    cutoff: usize,
    start: Instant,
    nodes: u64,
    aborted: bool,
    current: Vec<usize>,
    best: Vec<usize>,
}

impl Search<'_> {
    fn tick(&mut self) {
        self.nodes += 1;
        if !self.nodes.is_multiple_of(BUDGET_CHECK_INTERVAL) {
            return;
        }
        if self.budget.max_nodes.is_some_and(|m| self.nodes >= m)
            || self
                .budget
                .time_limit
                .is_some_and(|t| self.start.elapsed() >= t)
        {
            self.aborted = true;
        }
    }

    fn record(&mut self) {
        if self.current.len() > self.best.len() {
            self.best.clone_from(&self.current);
        }
    }

    fn done(&self) -> bool {
        self.aborted || self.best.len() >= self.cutoff
    }

    /// Greedy sequential coloring of `cands`. Returns `(vertex, color)` pairs
    /// sorted by color (1-based), stable in the coloring order.
    fn color(&self, cands: &FixedBitSet) -> Vec<(usize, usize)> {
        let mut order: Vec<(usize, usize)> = cands
            .ones()
            .map(|v| (self.graph.row(v).intersection_count(cands), v))
            .collect();
        if self.descending_labels {
            order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
        } else {
            order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        }

        let mut classes: Vec<FixedBitSet> = Vec::new();
        let mut colored: Vec<(usize, usize)> = Vec::with_capacity(order.len());
        for &(_, v) in &order {
            let row = self.graph.row(v);
            let c = match classes.iter().position(|cls| cls.is_disjoint(row)) {
                Some(c) => c,
                None => {
                    classes.push(FixedBitSet::with_capacity(cands.len()));
                    classes.len() - 1
                }
            };
            classes[c].insert(v);
            colored.push((v, c + 1));
        }
        colored.sort_by_key(|&(_, c)| c);
        colored
    }

    fn expand(&mut self, mut cands: FixedBitSet) {
        self.tick();
        if self.aborted {
            return;
        }
        let colored = self.color(&cands);
        for &(v, c) in colored.iter().rev() {
            if self.current.len() + c <= self.best.len() || self.done() {
                return;
            }
            let mut next = cands.clone();
            next.intersect_with(self.graph.row(v));
            self.current.push(v);
            if next.is_clear() {
                self.record();
            } else {
                self.expand(next);
            }
            self.current.pop();
            cands.remove(v);
        }
    }
}

/// Exact clique number of `g` with a witness clique.
pub fn max_clique_exact(g: &GcdGraph, opts: &SolverOptions) -> SolveReport {
    let n = g.n() as usize;
    let class_bound = divisor_class_bound(g.divisor_set());
    let cutoff = opts
        .upper_cutoff
        .map_or(class_bound, |u| u.min(class_bound)) as usize;
    let mut search = Search {
        graph: g,
        budget: opts.budget,
        descending_labels: opts.tie_break == TieBreak::LabelDescending,
        cutoff,
        start: Instant::now(),
        nodes: 0,
        aborted: false,
        current: Vec::new(),
        best: Vec::new(),
    };

    match opts.root {
        Root::Vertex(r) if opts.unit_orbits => {
            let r = r % g.n();
            search.current.push(r as usize);
            search.record();
            let mut remaining = g.row(r as usize).clone();
            let mut divisors = g.divisor_set().divisors().to_vec();
            if search.descending_labels {
                divisors.reverse();
            }
            for d in divisors {
                if search.done() {
                    break;
                }
                let v = ((r + d) % g.n()) as usize;
                let mut cands = remaining.clone();
                cands.intersect_with(g.row(v));
                search.current.push(v);
                if cands.is_clear() {
                    search.record();
                } else {
                    search.expand(cands);
                }
                search.current.pop();
                for x in g.symbols().iter().filter(|&x| gcd(x, g.n()) == d) {
                    remaining.remove(((r + x) % g.n()) as usize);
                }
            }
        }
        Root::Vertex(r) => {
            let r = (r % g.n()) as usize;
            search.current.push(r);
            let cands = g.row(r).clone();
            if cands.is_clear() {
                search.record();
            } else {
                search.expand(cands);
            }
        }
        Root::Free => {
            let mut all = FixedBitSet::with_capacity(n);
            all.insert_range(..);
            search.expand(all);
        }
    }

    let witness = CliqueWitness::new(search.best.iter().map(|&v| v as u64).collect());
    SolveReport {
        omega: witness.len() as u64,
        witness,
        nodes_explored: search.nodes,
        wall_time: search.start.elapsed(),
        optimal: !search.aborted,
    }
}
