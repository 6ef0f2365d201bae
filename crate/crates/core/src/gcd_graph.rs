//! The gcd-graph `X_n(D)`: vertices `Z_n`, with `a ~ b` iff `gcd(a - b, n) ∈ D`.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::numtheory::{gcd, gcd_all};

/// Default bound on `n` for graphs with materialized adjacency rows.
pub const DEFAULT_VERTEX_CAP: u64 = 16_384;

/// Environment variable overriding [`DEFAULT_VERTEX_CAP`].
pub const VERTEX_CAP_ENV: &str = "ICG_VERTEX_CAP";

pub fn vertex_cap_from_env() -> u64 {
    std::env::var(VERTEX_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_VERTEX_CAP)
}

/// A validated set of proper divisors of `n`, stored ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorSet {
    n: u64,
    divisors: Vec<u64>,
}

impl DivisorSet {
    pub fn new(n: u64, candidates: &[u64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall {
                what: "n",
                value: n,
                min: 2,
            });
        }
        if candidates.is_empty() {
            return Err(Error::EmptyDivisorSet);
        }
        let mut divisors = Vec::with_capacity(candidates.len());
        for &d in candidates {
            if d == 0 {
                return Err(Error::TooSmall {
                    what: "divisor",
                    value: 0,
                    min: 1,
                });
            }
            if !n.is_multiple_of(d) {
                return Err(Error::NotADivisor { n, d });
            }
            if d == n {
                return Err(Error::ImproperDivisor { n, d });
            }
            divisors.push(d);
        }
        divisors.sort_unstable();
        if let Some(w) = divisors.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateDivisor(w[0]));
        }
        Ok(DivisorSet { n, divisors })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Number of divisors `k = |D|`.
    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn contains(&self, d: u64) -> bool {
        self.divisors.binary_search(&d).is_ok()
    }

    /// `gcd(d_1, ..., d_k)`.
    pub fn gcd(&self) -> u64 {
        gcd_all(&self.divisors)
    }

    pub fn is_connected(&self) -> bool {
        self.gcd() == 1
    }

    /// Whether two vertices at signed distance `diff` are adjacent.
    pub fn joins_difference(&self, diff: i64) -> bool {
        let r = diff.rem_euclid(self.n as i64) as u64;
        self.contains(gcd(r, self.n))
    }

    /// Gcd-based adjacency test that needs no materialized graph.
    pub fn adjacent(&self, a: u64, b: u64) -> bool {
        let (a, b) = (a % self.n, b % self.n);
        self.contains(gcd((a + self.n - b) % self.n, self.n))
    }

    /// `(g, D/g)` as a divisor set of `n/g`, where `g = gcd(D)`.
    pub fn quotient(&self) -> (u64, DivisorSet) {
        let g = self.gcd();
        let divisors = self.divisors.iter().map(|&d| d / g).collect();
        (
            g,
            DivisorSet {
                n: self.n / g,
                divisors,
            },
        )
    }

    /// Regular degree `Σ_{d ∈ D} φ(n/d)`.
    pub fn degree(&self) -> u64 {
        self.divisors
            .iter()
            .map(|&d| crate::numtheory::totient(self.n / d))
            .sum()
    }
}

impl std::fmt::Display for DivisorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "X_{}(", self.n)?;
        for (i, d) in self.divisors.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// The symbol (connection) set `S = ⋃_{d ∈ D} G_n(d)` over `{1, ..., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSet {
    n: u64,
    members: FixedBitSet,
}

impl SymbolSet {
    pub fn new(ds: &DivisorSet) -> Self {
        let n = ds.n();
        let mut members = FixedBitSet::with_capacity(n as usize);
        for s in 1..n {
            if ds.contains(gcd(s, n)) {
                members.insert(s as usize);
            }
        }
        SymbolSet { n, members }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn contains(&self, s: u64) -> bool {
        s < self.n && self.members.contains(s as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.ones().map(|s| s as u64)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }
}

/// `X_n(D)` with bit-packed adjacency rows.
#[derive(Debug, Clone)]
pub struct GcdGraph {
    divisor_set: DivisorSet,
    symbols: SymbolSet,
    rows: Vec<FixedBitSet>,
}

impl GcdGraph {
    /// Builds the graph under the cap from [`vertex_cap_from_env`].
    pub fn build(ds: &DivisorSet) -> Result<Self> {
        Self::build_with_cap(ds, vertex_cap_from_env())
    }

    pub fn build_with_cap(ds: &DivisorSet, cap: u64) -> Result<Self> {
        let n = ds.n();
        if n > cap {
            return Err(Error::VertexCapExceeded { n, cap });
        }
        let symbols = SymbolSet::new(ds);
        let size = n as usize;
        // u ∈ row v iff (u - v) mod n ∈ S, so row v is the window
        // [n - v, 2n - v) of S repeated twice
        let mut doubled = FixedBitSet::with_capacity(2 * size);
        for s in symbols.members.ones() {
            doubled.insert(s);
            doubled.insert(s + size);
        }
        let rows = (0..size)
            .map(|v| bit_window(doubled.as_slice(), size - v, size))
            .collect();
        Ok(GcdGraph {
            divisor_set: ds.clone(),
            symbols,
            rows,
        })
    }

    pub fn n(&self) -> u64 {
        self.divisor_set.n()
    }

    pub fn divisor_set(&self) -> &DivisorSet {
        &self.divisor_set
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    pub fn row(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    pub fn adjacent(&self, a: u64, b: u64) -> bool {
        self.rows[a as usize].contains(b as usize)
    }

    pub fn degree(&self, v: u64) -> usize {
        self.rows[v as usize].count_ones(..)
    }

    pub fn neighbors(&self, v: u64) -> impl Iterator<Item = u64> + '_ {
        self.rows[v as usize].ones().map(|u| u as u64)
    }

    /// Undirected edges `(a, b)` with `a < b`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(a, row)| {
            row.ones()
                .filter(move |&b| b > a)
                .map(move |b| (a as u64, b as u64))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Connected components found by union-find over the adjacency rows.
    pub fn union_find_components(&self) -> Vec<Vec<u64>> {
        let n = self.rows.len();
        let mut uf = UnionFind::<usize>::new(n);
        for (a, b) in self.edges() {
            uf.union(a as usize, b as usize);
        }
        group_by_root(&mut uf, n)
    }
}

/// Bits `[offset, offset + len)` of `words` as a new set.
fn bit_window(words: &[usize], offset: usize, len: usize) -> FixedBitSet {
    const W: usize = usize::BITS as usize;
    let (skip, shift) = (offset / W, offset % W);
    let blocks = (0..len.div_ceil(W)).map(|i| {
        let lo = words.get(skip + i).copied().unwrap_or(0);
        if shift == 0 {
            lo
        } else {
            let hi = words.get(skip + i + 1).copied().unwrap_or(0);
            (lo >> shift) | (hi << (W - shift))
        }
    });
    let mut out = FixedBitSet::with_capacity_and_blocks(len, blocks);
    // with_capacity_and_blocks keeps stray bits past len in the last block
    let tail = len % W;
    if tail != 0 {
        if let Some(last) = out.as_mut_slice().last_mut() {
            *last &= (1usize << tail) - 1;
        }
    }
    out
}

fn group_by_root(uf: &mut UnionFind<usize>, n: usize) -> Vec<Vec<u64>> {
    let mut slot = vec![usize::MAX; n];
    let mut comps: Vec<Vec<u64>> = Vec::new();
    for v in 0..n {
        let root = uf.find_mut(v);
        if slot[root] == usize::MAX {
            slot[root] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[root]].push(v as u64);
    }
    comps
}

/// The `g = gcd(D)` residue-class components of `X_n(D)`, each isomorphic to
/// `X_{n/g}(D/g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub component_count: u64,
    /// Component `r` holds the vertices `≡ r (mod g)`, ascending.
    pub components: Vec<Vec<u64>>,
    pub quotient: DivisorSet,
}

impl ComponentDecomposition {
    /// Map from a vertex of the quotient graph into component `residue`.
    pub fn lift(&self, residue: u64, v: u64) -> u64 {
        v * self.component_count + residue
    }
}

/// Splits `X_n(D)` into components by `gcd(D)` and checks the count against
/// union-find over the symbol set. A disagreement is an error.
pub fn decompose_components(ds: &DivisorSet) -> Result<ComponentDecomposition> {
    let n = ds.n();
    let (g, quotient) = ds.quotient();

    let size = n as usize;
    let mut uf = UnionFind::<usize>::new(size);
    let symbols = SymbolSet::new(ds);
    for v in 0..size {
        for s in symbols.members.ones() {
            uf.union(v, (v + s) % size);
        }
    }
    let found = group_by_root(&mut uf, size);
    if found.len() as u64 != g {
        return Err(Error::ComponentMismatch {
            predicted: g,
            found: found.len() as u64,
        });
    }

    let components: Vec<Vec<u64>> = (0..g)
        .map(|r| (r..n).step_by(g as usize).collect())
        .collect();
    let mut sorted = found;
    sorted.sort();
    if sorted != components {
        return Err(Error::Internal(format!(
            "components of {ds} are not the residue classes mod {g}"
        )));
    }

    Ok(ComponentDecomposition {
        component_count: g,
        components,
        quotient,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeList,
    Dot,
}

/// Text export; each undirected edge appears once as `a < b`.
pub fn export_graph(g: &GcdGraph, format: ExportFormat) -> String {
    let mut out = String::new();
    match format {
        ExportFormat::EdgeList => {
            for (a, b) in g.edges() {
                let _ = writeln!(out, "{a} {b}");
            }
        }
        ExportFormat::Dot => {
            let _ = writeln!(out, "graph \"{}\" {{", g.divisor_set());
            for v in 0..g.n() {
                let _ = writeln!(out, "  {v};");
            }
            for (a, b) in g.edges() {
                let _ = writeln!(out, "  {a} -- {b};");
            }
            out.push_str("}\n");
        }
    }
    out
}
