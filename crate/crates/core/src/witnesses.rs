//! Explicit cliques and colorings certifying the closed-form clique numbers.
//!
//! The two-divisor constructions place vertices at `a·d + r` where the
//! multipliers `a` are pinned down prime by prime with CRT. Every object is
//! checked against the gcd adjacency rule before it is returned.

use crate::clique_theory::{TwoDivisorAnalysis, TwoDivisorCase};
use crate::error::{Error, Result};
use crate::gcd_graph::{DivisorSet, SymbolSet};
use crate::max_clique::{verify_clique, CliqueWitness};
use crate::numtheory::{crt_solve, linear_congruence_solve, smallest_prime_factor, Congruence};

/// A vertex coloring of `X_n(D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u64>,
    num_colors: u64,
}

impl Coloring {
    pub fn color(&self, v: u64) -> u64 {
        self.colors[v as usize]
    }

    pub fn colors(&self) -> &[u64] {
        &self.colors
    }

    pub fn num_colors(&self) -> u64 {
        self.num_colors
    }

    /// No edge of `X_n(D)` joins two vertices of the same color.
    pub fn is_proper(&self, ds: &DivisorSet) -> bool {
        let n = ds.n() as usize;
        if self.colors.len() != n {
            return false;
        }
        let symbols = SymbolSet::new(ds);
        (0..n).all(|v| {
            symbols
                .iter()
                .all(|s| self.colors[v] != self.colors[(v + s as usize) % n])
        })
    }
}

fn checked(ds: &DivisorSet, w: CliqueWitness, expected: u64, what: &str) -> Result<CliqueWitness> {
    if w.len() as u64 != expected || !verify_clique(ds, &w)? {
        return Err(Error::Internal(format!(
            "{what} for {ds} is not a clique of size {expected}: {:?}",
            w.vertices()
        )));
    }
    Ok(w)
}

fn one_and(n: u64, d: u64) -> Result<DivisorSet> {
    DivisorSet::new(n, &[1, d])
}

/// Solves for a multiplier `a` from per-prime congruences. An empty system
/// leaves `a` free; `fallback` is used then.
fn solve_multiplier(system: &[Congruence], fallback: u64) -> Result<u64> {
    if system.is_empty() {
        return Ok(fallback);
    }
    Ok(crt_solve(system)?.residue())
}

/// Clique of size `p1·pi` in `X_n(1, d)` when `Q` is empty or `q > p1·pi`.
///
/// Vertices `a_s·d + r` for `0 <= s < pi`, `0 <= r < p1`, where
/// `a_s ≡ s (mod p)` for `p ∈ R` and `a_s·d ≡ s·p1 (mod p)` for `p ∈ Q`.
pub fn build_clique_case_large_q(a: &TwoDivisorAnalysis) -> Result<CliqueWitness> {
    if a.case != TwoDivisorCase::QEmptyOrLargeQ {
        return Err(Error::Hypothesis(format!(
            "X_{}(1,{}) needs Q empty or q > p1·pi = {}",
            a.n,
            a.d,
            a.p1 * a.p_i
        )));
    }
    let mut vertices = Vec::with_capacity((a.p1 * a.p_i) as usize);
    for s in 0..a.p_i {
        let mut system = Vec::with_capacity(a.r_primes.len() + a.q_primes.len());
        for &p in &a.r_primes {
            system.push(Congruence::new(s, p)?);
        }
        for &p in &a.q_primes {
            system.push(linear_congruence_solve(a.d, s * a.p1, p)?);
        }
        let a_s = solve_multiplier(&system, s)?;
        for r in 0..a.p1 {
            vertices.push(((a_s as u128 * a.d as u128 + r as u128) % a.n as u128) as u64);
        }
    }
    checked(
        &one_and(a.n, a.d)?,
        CliqueWitness::new(vertices),
        a.p1 * a.p_i,
        "large-q construction",
    )
}

/// Clique of size `q` in `X_n(1, d)` when `q < p1·pi`.
///
/// Vertices `x_k = a_k·d + b_k` for `0 <= k < q` with `b_k = k mod p1`,
/// `x_k ≡ k (mod p)` for `p ∈ Q` and `a_k ≡ ⌊k/p1⌋ (mod p)` for `p ∈ R`.
pub fn build_clique_case_small_q(a: &TwoDivisorAnalysis) -> Result<CliqueWitness> {
    let q = match (a.case, a.q) {
        (TwoDivisorCase::SmallQ, Some(q)) => q,
        _ => {
            return Err(Error::Hypothesis(format!(
                "X_{}(1,{}) needs q < p1·pi = {}",
                a.n,
                a.d,
                a.p1 * a.p_i
            )))
        }
    };
    let mut vertices = Vec::with_capacity(q as usize);
    for k in 0..q {
        let b_k = k % a.p1;
        let mut system = Vec::with_capacity(a.r_primes.len() + a.q_primes.len());
        for &p in &a.q_primes {
            let rhs = (k + p - b_k % p) % p;
            system.push(linear_congruence_solve(a.d, rhs, p)?);
        }
        for &p in &a.r_primes {
            system.push(Congruence::new(k / a.p1, p)?);
        }
        let a_k = solve_multiplier(&system, k / a.p1)?;
        vertices.push(((a_k as u128 * a.d as u128 + b_k as u128) % a.n as u128) as u64);
    }
    checked(
        &one_and(a.n, a.d)?,
        CliqueWitness::new(vertices),
        q,
        "small-q construction",
    )
}

/// Clique of `X_n(1, d)` of the size given by the two-divisor formula.
pub fn build_clique_with_one(a: &TwoDivisorAnalysis) -> Result<CliqueWitness> {
    match a.case {
        TwoDivisorCase::QEmptyOrLargeQ => build_clique_case_large_q(a),
        TwoDivisorCase::SmallQ => build_clique_case_small_q(a),
    }
}

/// `{0, d, 2d, ..., (p-1)d}` with `p = f(n/d)`.
pub fn build_clique_k1(n: u64, d: u64) -> Result<CliqueWitness> {
    let ds = DivisorSet::new(n, &[d])?;
    let p = smallest_prime_factor(n / d)?;
    checked(
        &ds,
        CliqueWitness::new((0..p).map(|i| i * d).collect()),
        p,
        "arithmetic-progression clique",
    )
}

/// Proper coloring of `X_n(d)` with `f(n/d)` colors: `v ↦ ⌊v/d⌋ mod f(n/d)`.
pub fn build_coloring_k1(n: u64, d: u64) -> Result<Coloring> {
    let ds = DivisorSet::new(n, &[d])?;
    let p = smallest_prime_factor(n / d)?;
    let coloring = Coloring {
        colors: (0..n).map(|v| (v / d) % p).collect(),
        num_colors: p,
    };
    if !coloring.is_proper(&ds) {
        return Err(Error::Internal(format!("coloring of {ds} is not proper")));
    }
    Ok(coloring)
}

/// Clique of `X_n(d_hi, d_lo)` (`d_hi > d_lo`) of the formula's size.
pub fn build_clique_k2(n: u64, d_hi: u64, d_lo: u64) -> Result<CliqueWitness> {
    let ds = DivisorSet::new(n, &[d_lo, d_hi])?;
    let w = if d_lo == 1 {
        build_clique_with_one(&crate::clique_theory::analyze_two_divisor(n, d_hi)?)?
    } else if d_hi.is_multiple_of(d_lo) {
        let a = crate::clique_theory::analyze_two_divisor(n / d_lo, d_hi / d_lo)?;
        build_clique_with_one(&a)?.lifted(d_lo, 0)
    } else {
        let f_hi = smallest_prime_factor(n / d_hi)?;
        let f_lo = smallest_prime_factor(n / d_lo)?;
        if f_hi >= f_lo {
            build_clique_k1(n, d_hi)?
        } else {
            build_clique_k1(n, d_lo)?
        }
    };
    let size = w.len() as u64;
    checked(&ds, w, size, "two-divisor clique")
}
