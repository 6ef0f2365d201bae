//! Closed forms for the clique number of `X_n(D)` with one or two divisors,
//! general bounds for any `|D|`, the large-prime scaling reduction and the
//! dispatcher that picks between formula and exact search.
//!
//! Divisor sets are stored ascending; the two-divisor formulas take the
//! larger divisor first (`d_hi > d_lo`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcd_graph::{decompose_components, vertex_cap_from_env, DivisorSet, GcdGraph};
use crate::max_clique::{
    max_clique_exact, residue_class_bound, verify_clique, CliqueWitness, SolverOptions,
};
use crate::numtheory::{factorize, smallest_prime_factor};
use crate::witnesses::{build_clique_k1, build_clique_k2, build_coloring_k1, Coloring};

/// ω(X_n(d)) = f(n/d).
pub fn omega_k1(n: u64, d: u64) -> Result<u64> {
    DivisorSet::new(n, &[d])?;
    smallest_prime_factor(n / d)
}

/// χ(X_n(d)) = f(n/d), returned with a proper coloring. The coloring is
/// matched by a clique of the same size, which certifies optimality.
pub fn chi_k1(n: u64, d: u64) -> Result<(u64, Coloring)> {
    let coloring = build_coloring_k1(n, d)?;
    let clique = build_clique_k1(n, d)?;
    if clique.len() as u64 != coloring.num_colors() {
        return Err(Error::Internal(format!(
            "X_{n}({d}): clique of {} vs {} colors",
            clique.len(),
            coloring.num_colors()
        )));
    }
    Ok((coloring.num_colors(), coloring))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoDivisorCase {
    /// `Q = ∅` or `q > p1·pi`: ω = p1·pi.
    QEmptyOrLargeQ,
    /// `q < p1·pi`: ω = q.
    SmallQ,
}

/// Prime data of `X_n(1, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoDivisorAnalysis {
    pub n: u64,
    pub d: u64,
    /// f(n)
    pub p1: u64,
    /// f(n/d): the least prime whose exponent in `d` falls short of `n`.
    pub p_i: u64,
    /// Primes of `n` not dividing `d`, ascending.
    pub q_primes: Vec<u64>,
    /// Primes dividing both `d` and `n/d`, ascending.
    pub r_primes: Vec<u64>,
    /// min of `q_primes`.
    pub q: Option<u64>,
    /// Product of the primes in `R ∪ Q`.
    pub m: u64,
    pub case: TwoDivisorCase,
}

impl TwoDivisorAnalysis {
    pub fn omega(&self) -> u64 {
        match self.case {
            TwoDivisorCase::QEmptyOrLargeQ => self.p1 * self.p_i,
            TwoDivisorCase::SmallQ => self.q.expect("small-q case has q"),
        }
    }
}

pub fn analyze_two_divisor(n: u64, d: u64) -> Result<TwoDivisorAnalysis> {
    if d < 2 {
        return Err(Error::TooSmall {
            what: "divisor",
            value: d,
            min: 2,
        });
    }
    DivisorSet::new(n, &[1, d])?;
    let fac = factorize(n)?;
    let cofactor = n / d;
    let p1 = fac.smallest_prime().expect("n >= 2");
    let p_i = smallest_prime_factor(cofactor)?;
    let q_primes: Vec<u64> = fac.primes().filter(|&p| !d.is_multiple_of(p)).collect();
    let r_primes: Vec<u64> = fac
        .primes()
        .filter(|&p| d.is_multiple_of(p) && cofactor.is_multiple_of(p))
        .collect();
    let q = q_primes.first().copied();
    let m = q_primes.iter().chain(&r_primes).product();
    let case = match q {
        None => TwoDivisorCase::QEmptyOrLargeQ,
        Some(q) if q > p1 * p_i => TwoDivisorCase::QEmptyOrLargeQ,
        Some(q) if q < p1 * p_i => TwoDivisorCase::SmallQ,
        Some(q) => {
            return Err(Error::Internal(format!(
                "prime q = {q} equals the composite p1·pi"
            )))
        }
    };
    Ok(TwoDivisorAnalysis {
        n,
        d,
        p1,
        p_i,
        q_primes,
        r_primes,
        q,
        m,
        case,
    })
}

/// ω(X_n(1, d)) = min(q, f(n)·f(n/d)), with `q = ∞` when every prime of
/// `n` divides `d`.
pub fn omega_k2_with_one(n: u64, d: u64) -> Result<u64> {
    Ok(analyze_two_divisor(n, d)?.omega())
}

/// ω(X_n(d_hi, d_lo)) for `d_hi > d_lo`.
pub fn omega_k2_general(n: u64, d_hi: u64, d_lo: u64) -> Result<u64> {
    if d_hi == d_lo {
        return Err(Error::DuplicateDivisor(d_hi));
    }
    if d_hi < d_lo {
        return Err(Error::Hypothesis(format!(
            "expected d_hi > d_lo, got {d_hi} <= {d_lo}"
        )));
    }
    DivisorSet::new(n, &[d_lo, d_hi])?;
    if d_lo == 1 {
        omega_k2_with_one(n, d_hi)
    } else if d_hi.is_multiple_of(d_lo) {
        omega_k2_with_one(n / d_lo, d_hi / d_lo)
    } else {
        Ok(smallest_prime_factor(n / d_hi)?.max(smallest_prime_factor(n / d_lo)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub lower: u64,
    pub upper: u64,
}

impl Bounds {
    pub fn contains(&self, omega: u64) -> bool {
        self.lower <= omega && omega <= self.upper
    }
}

/// `max f(n/d) <= ω <= min(n, Π f(n/d), residue_class_bound)`.
pub fn omega_bounds(ds: &DivisorSet) -> Bounds {
    let n = ds.n();
    let fs: Vec<u64> = ds
        .divisors()
        .iter()
        .map(|&d| smallest_prime_factor(n / d).expect("proper divisor"))
        .collect();
    let lower = fs.iter().copied().max().expect("nonempty divisor set");
    let product = fs.iter().fold(1u64, |acc, &f| acc.saturating_mul(f));
    Bounds {
        lower,
        upper: n.min(product).min(residue_class_bound(ds)),
    }
}

/// Strips primes `p` with `p ∥ n`, `p > n/p`, `p` dividing no `d ∈ D` and every
/// `d < n/p`; ω is unchanged by each step.
pub fn scaling_reduce(ds: &DivisorSet) -> DivisorSet {
    let mut current = ds.clone();
    loop {
        let n = current.n();
        let fac = factorize(n).expect("n >= 2");
        let qualifying = fac.primes().find(|&p| {
            let rest = n / p;
            p > rest && current.divisors().iter().all(|&d| d % p != 0 && d < rest)
        });
        match qualifying {
            Some(p) => {
                current = DivisorSet::new(n / p, current.divisors())
                    .expect("divisors coprime to p divide n/p");
            }
            None => return current,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Policy {
    Auto,
    FormulaOnly,
    ExactOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FormulaK1,
    FormulaK2,
    Exact,
    BoundsOnly,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::FormulaK1 => "formula-k1",
            Method::FormulaK2 => "formula-k2",
            Method::Exact => "exact",
            Method::BoundsOnly => "bounds-only",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DispatchOptions {
    pub policy: Policy,
    pub solver: SolverOptions,
    /// Largest `n` for which adjacency rows are materialized.
    pub vertex_cap: u64,
    /// Cross-check formula values with the exact solver up to this `n`.
    pub verify_cap: Option<u64>,
}

impl Default for DispatchOptions {
    fn default() -> Self {
        DispatchOptions {
            policy: Policy::Auto,
            solver: SolverOptions::default(),
            vertex_cap: vertex_cap_from_env(),
            verify_cap: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueOutcome {
    /// `None` for bounds-only outcomes.
    pub omega: Option<u64>,
    pub method: Method,
    pub lower_bound: u64,
    pub upper_bound: u64,
    pub witness: Option<CliqueWitness>,
    /// Whether ω divides `n`; only set when ω is known.
    pub divides_n: Option<bool>,
    /// Formula against exact solver, when both ran.
    pub formula_exact_agree: Option<bool>,
    /// The solver stopped on its budget; `lower_bound` is the best clique found.
    pub budget_exhausted: bool,
}

/// Result on the fully reduced core instance, before lifting.
struct CoreResult {
    omega: Option<u64>,
    method: Method,
    witness: Option<CliqueWitness>,
    agree: Option<bool>,
    exhausted: bool,
}

fn exact_on(ds: &DivisorSet, opts: &DispatchOptions) -> Result<Option<CoreResult>> {
    if ds.n() > opts.vertex_cap {
        return Ok(None);
    }
    let g = GcdGraph::build_with_cap(ds, opts.vertex_cap)?;
    let report = max_clique_exact(&g, &opts.solver);
    Ok(Some(CoreResult {
        omega: report.optimal.then_some(report.omega),
        method: if report.optimal {
            Method::Exact
        } else {
            Method::BoundsOnly
        },
        witness: Some(report.witness),
        agree: None,
        exhausted: !report.optimal,
    }))
}

fn bounds_only() -> CoreResult {
    CoreResult {
        omega: None,
        method: Method::BoundsOnly,
        witness: None,
        agree: None,
        exhausted: false,
    }
}

fn formula_on(core: &DivisorSet) -> Result<Option<(u64, Method, CliqueWitness)>> {
    let n = core.n();
    Ok(match *core.divisors() {
        [d] => Some((omega_k1(n, d)?, Method::FormulaK1, build_clique_k1(n, d)?)),
        [d_lo, d_hi] => Some((
            omega_k2_general(n, d_hi, d_lo)?,
            Method::FormulaK2,
            build_clique_k2(n, d_hi, d_lo)?,
        )),
        _ => None,
    })
}

/// Clique number of `X_n(D)` under `opts.policy`.
///
/// `Auto` and `FormulaOnly` first apply [`scaling_reduce`], then pass to the
/// connected quotient `X_{n/g}(D/g)`; one or two divisors are settled by
/// formula, more by exact search (`Auto` only, within the vertex cap).
/// `ExactOnly` searches the given graph as is.
pub fn omega(ds: &DivisorSet, opts: &DispatchOptions) -> Result<CliqueOutcome> {
    let bounds = omega_bounds(ds);

    let (core_result, lift_g) = match opts.policy {
        Policy::ExactOnly => (exact_on(ds, opts)?.unwrap_or_else(bounds_only), 1),
        Policy::Auto | Policy::FormulaOnly => {
            let reduced = scaling_reduce(ds);
            let (g, core) = if reduced.n() <= opts.vertex_cap {
                let dec = decompose_components(&reduced)?;
                (dec.component_count, dec.quotient)
            } else {
                reduced.quotient()
            };
            let result = match formula_on(&core)? {
                Some((value, method, witness)) => {
                    let agree = match opts.verify_cap {
                        Some(cap) if core.n() <= cap => exact_on(&core, opts)?
                            .and_then(|r| r.omega)
                            .map(|exact| exact == value),
                        _ => None,
                    };
                    CoreResult {
                        omega: Some(value),
                        method,
                        witness: Some(witness),
                        agree,
                        exhausted: false,
                    }
                }
                None if opts.policy == Policy::Auto => {
                    exact_on(&core, opts)?.unwrap_or_else(bounds_only)
                }
                None => bounds_only(),
            };
            (result, g)
        }
    };

    // vertices of the reduced graph stay below n/p < p, so lifting through
    // the scaling step is the identity
    let witness = core_result.witness.map(|w| w.lifted(lift_g, 0));
    if let Some(w) = &witness {
        if !verify_clique(ds, w)? {
            return Err(Error::Internal(format!(
                "witness {:?} is not a clique of {ds}",
                w.vertices()
            )));
        }
    }

    let found = witness.as_ref().map_or(0, |w| w.len() as u64);
    let (lower_bound, upper_bound) = match core_result.omega {
        Some(_) => (bounds.lower, bounds.upper),
        None => (bounds.lower.max(found), bounds.upper),
    };
    Ok(CliqueOutcome {
        omega: core_result.omega,
        method: core_result.method,
        lower_bound,
        upper_bound,
        witness,
        divides_n: core_result.omega.map(|w| ds.n().is_multiple_of(w)),
        formula_exact_agree: core_result.agree,
        budget_exhausted: core_result.exhausted,
    })
}
