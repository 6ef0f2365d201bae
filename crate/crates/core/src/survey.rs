//! Conjecture scanning: enumerate `(n, D)` instances, compute ω, and record
//! whether ω divides `n`.

use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::clique_theory::{omega, scaling_reduce, CliqueOutcome, DispatchOptions, Method};
use crate::error::{Error, Result};
use crate::gcd_graph::{DivisorSet, GcdGraph};
use crate::max_clique::{max_clique_exact, verify_clique, CliqueWitness};
use crate::numtheory::{divisors_proper, is_prime};

/// One instance's result. Serializes to the JSON-lines schema; absent
/// optional fields are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub n: u64,
    pub divisors: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<u64>,
    pub method: Method,
    pub lower: u64,
    pub upper: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divides_n: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip)]
    pub budget_exhausted: bool,
}

impl ScanRecord {
    fn from_outcome(ds: &DivisorSet, outcome: CliqueOutcome, elapsed: Option<Duration>) -> Self {
        ScanRecord {
            n: ds.n(),
            divisors: ds.divisors().to_vec(),
            omega: outcome.omega,
            method: outcome.method,
            lower: outcome.lower_bound,
            upper: outcome.upper_bound,
            divides_n: outcome.divides_n,
            agree: outcome.formula_exact_agree,
            witness: outcome.witness.map(CliqueWitness::into_vec),
            elapsed_ms: elapsed.map(|e| e.as_millis() as u64),
            budget_exhausted: outcome.budget_exhausted,
        }
    }

    /// Exact ω that does not divide `n`.
    pub fn is_counterexample(&self) -> bool {
        self.omega.is_some() && self.divides_n == Some(false)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "n",
        "divisors",
        "omega",
        "method",
        "lower",
        "upper",
        "divides_n",
        "agree",
        "witness",
        "elapsed_ms",
    ];

    pub fn csv_fields(&self) -> [String; 10] {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        fn join(v: &[u64]) -> String {
            v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        }
        [
            self.n.to_string(),
            join(&self.divisors),
            opt(&self.omega),
            self.method.as_str().to_string(),
            self.lower.to_string(),
            self.upper.to_string(),
            opt(&self.divides_n),
            opt(&self.agree),
            self.witness.as_deref().map(join).unwrap_or_default(),
            opt(&self.elapsed_ms),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    JsonLines,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub n_min: u64,
    pub n_max: u64,
    pub k_min: usize,
    pub k_max: usize,
    /// Only divisor sets with `gcd(D) = 1`.
    pub connected_only: bool,
    /// Emit only counterexample records.
    pub counterexamples_only: bool,
    pub dispatch: DispatchOptions,
    /// Include witnesses in every record; counterexamples always carry one.
    pub witnesses: bool,
    /// Include `elapsed_ms`; off for byte-reproducible output.
    pub timing: bool,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            n_min: 2,
            n_max: 100,
            k_min: 1,
            k_max: 4,
            connected_only: false,
            counterexamples_only: false,
            dispatch: DispatchOptions::default(),
            witnesses: false,
            timing: false,
            jobs: 0,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 2 {
            return Err(Error::TooSmall {
                what: "n-min",
                value: self.n_min,
                min: 2,
            });
        }
        if self.n_max < self.n_min {
            return Err(Error::TooSmall {
                what: "n-max",
                value: self.n_max,
                min: self.n_min,
            });
        }
        if self.k_min < 1 || self.k_max < self.k_min {
            return Err(Error::TooSmall {
                what: "k-max",
                value: self.k_max as u64,
                min: self.k_min.max(1) as u64,
            });
        }
        if self.dispatch.solver.budget.max_nodes == Some(0) {
            return Err(Error::TooSmall {
                what: "budget",
                value: 0,
                min: 1,
            });
        }
        Ok(())
    }
}

/// Nonempty subsets of the proper divisors of `n` with size in
/// `k_min..=k_max`, in lexicographic order.
pub fn divisor_subsets(
    n: u64,
    k_min: usize,
    k_max: usize,
    connected_only: bool,
) -> Vec<DivisorSet> {
    fn extend(
        pool: &[u64],
        start: usize,
        k_max: usize,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        for i in start..pool.len() {
            cur.push(pool[i]);
            out.push(cur.clone());
            if cur.len() < k_max {
                extend(pool, i + 1, k_max, cur, out);
            }
            cur.pop();
        }
    }
    let pool = divisors_proper(n).expect("n >= 2");
    let mut subsets = Vec::new();
    extend(&pool, 0, k_max, &mut Vec::new(), &mut subsets);
    // depth-first extension of an ascending pool is already lexicographic
    subsets
        .into_iter()
        .filter(|s| s.len() >= k_min)
        .map(|s| DivisorSet::new(n, &s).expect("proper divisors"))
        .filter(|ds| !connected_only || ds.is_connected())
        .collect()
}

/// Every instance of the scan in enumeration order.
pub fn enumerate_instances(config: &ScanConfig) -> Vec<DivisorSet> {
    (config.n_min..=config.n_max)
        .flat_map(|n| divisor_subsets(n, config.k_min, config.k_max, config.connected_only))
        .collect()
}

/// Re-derives a counterexample's ω: the witness must verify and a second
/// search with a different root and tie-break must reach the same value.
pub fn confirm_counterexample(record: &ScanRecord, dispatch: &DispatchOptions) -> Result<bool> {
    let ds = DivisorSet::new(record.n, &record.divisors)?;
    let Some(omega) = record.omega else {
        return Ok(false);
    };
    if let Some(w) = &record.witness {
        let w = CliqueWitness::new(w.clone());
        if w.len() as u64 != omega || !verify_clique(&ds, &w)? {
            return Ok(false);
        }
    }
    let core = scaling_reduce(&ds);
    let (_, core) = core.quotient();
    if core.n() > dispatch.vertex_cap {
        return Ok(false);
    }
    let g = GcdGraph::build_with_cap(&core, dispatch.vertex_cap)?;
    let report = max_clique_exact(&g, &dispatch.solver.alternate(core.n()));
    Ok(report.optimal && report.omega == omega)
}

/// Computes the record for a single instance.
pub fn check_instance(n: u64, divisors: &[u64], dispatch: &DispatchOptions) -> Result<ScanRecord> {
    let ds = DivisorSet::new(n, divisors)?;
    let start = Instant::now();
    let outcome = omega(&ds, dispatch)?;
    Ok(ScanRecord::from_outcome(
        &ds,
        outcome,
        Some(start.elapsed()),
    ))
}

fn run_instance(ds: &DivisorSet, config: &ScanConfig) -> Result<ScanRecord> {
    let start = Instant::now();
    let outcome = omega(ds, &config.dispatch)?;
    let mut record = ScanRecord::from_outcome(ds, outcome, config.timing.then(|| start.elapsed()));
    if record.is_counterexample() && !confirm_counterexample(&record, &config.dispatch)? {
        return Err(Error::Internal(format!(
            "counterexample {ds} with ω = {:?} did not re-verify",
            record.omega
        )));
    }
    if !config.witnesses && !record.is_counterexample() {
        record.witness = None;
    }
    Ok(record)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub instances: usize,
    pub emitted: usize,
    pub counterexamples: Vec<ScanRecord>,
    pub budget_exhausted: usize,
    pub disagreements: usize,
}

/// Runs the scan, handing records to `sink` in enumeration order.
///
/// Instances of each `n` are solved in parallel and re-serialized in order,
/// so output does not depend on the worker count.
pub fn scan_with<F>(config: &ScanConfig, mut sink: F) -> Result<ScanSummary>
where
    F: FnMut(&ScanRecord) -> Result<()>,
{
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let mut summary = ScanSummary::default();
    for n in config.n_min..=config.n_max {
        let instances = divisor_subsets(n, config.k_min, config.k_max, config.connected_only);
        let records: Vec<Result<ScanRecord>> = pool.install(|| {
            instances
                .par_iter()
                .map(|ds| run_instance(ds, config))
                .collect()
        });
        for record in records {
            let record = record?;
            summary.instances += 1;
            if record.budget_exhausted {
                summary.budget_exhausted += 1;
            }
            if record.agree == Some(false) {
                summary.disagreements += 1;
            }
            let counter = record.is_counterexample();
            if counter {
                summary.counterexamples.push(record.clone());
            }
            if counter || !config.counterexamples_only {
                summary.emitted += 1;
                sink(&record)?;
            }
        }
    }
    Ok(summary)
}

/// Collects the full scan in memory.
pub fn scan(config: &ScanConfig) -> Result<(Vec<ScanRecord>, ScanSummary)> {
    let mut records = Vec::new();
    let summary = scan_with(config, |r| {
        records.push(r.clone());
        Ok(())
    })?;
    Ok((records, summary))
}

/// Streams records to `out` in the chosen format.
pub fn write_scan<W: Write>(
    config: &ScanConfig,
    format: OutputFormat,
    out: W,
) -> Result<ScanSummary> {
    let io_err = |e: std::io::Error| Error::Internal(format!("write failed: {e}"));
    match format {
        OutputFormat::JsonLines => {
            let mut out = std::io::BufWriter::new(out);
            let summary = scan_with(config, |r| {
                writeln!(out, "{}", r.to_json_line()).map_err(io_err)
            })?;
            out.flush().map_err(io_err)?;
            Ok(summary)
        }
        OutputFormat::Csv => {
            let csv_err = |e: csv::Error| Error::Internal(format!("csv: {e}"));
            let mut w = csv::Writer::from_writer(out);
            w.write_record(ScanRecord::CSV_HEADER).map_err(csv_err)?;
            let summary = scan_with(config, |r| w.write_record(r.csv_fields()).map_err(csv_err))?;
            w.flush().map_err(io_err)?;
            Ok(summary)
        }
    }
}

/// Base instance of the scaled counterexample family.
pub const FAMILY_BASE_N: u64 = 20;
pub const FAMILY_DIVISORS: [u64; 3] = [1, 4, 10];

/// Records for `X_{20p}(1, 4, 10)`, one per prime `p > 20`.
///
/// Each instance must reduce to `X_20(1, 4, 10)`, whose value comes from one
/// exact search; the base witness is re-verified in every scaled graph.
pub fn counterexample_family(
    primes: &[u64],
    dispatch: &DispatchOptions,
) -> Result<Vec<ScanRecord>> {
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p <= FAMILY_BASE_N {
            return Err(Error::TooSmall {
                what: "family prime",
                value: p,
                min: FAMILY_BASE_N + 1,
            });
        }
    }
    let base = DivisorSet::new(FAMILY_BASE_N, &FAMILY_DIVISORS)?;
    let base_graph = GcdGraph::build_with_cap(&base, dispatch.vertex_cap)?;
    let report = max_clique_exact(&base_graph, &dispatch.solver);
    if !report.optimal {
        return Err(Error::Internal("base instance exceeded the budget".into()));
    }

    primes
        .iter()
        .map(|&p| {
            let start = Instant::now();
            let ds = DivisorSet::new(FAMILY_BASE_N * p, &FAMILY_DIVISORS)?;
            if scaling_reduce(&ds) != base {
                return Err(Error::Internal(format!("{ds} does not reduce to {base}")));
            }
            if !verify_clique(&ds, &report.witness)? {
                return Err(Error::Internal(format!("base witness fails in {ds}")));
            }
            let outcome = CliqueOutcome {
                omega: Some(report.omega),
                method: Method::Exact,
                lower_bound: crate::clique_theory::omega_bounds(&ds).lower,
                upper_bound: crate::clique_theory::omega_bounds(&ds).upper,
                witness: Some(report.witness.clone()),
                divides_n: Some(ds.n() % report.omega == 0),
                formula_exact_agree: None,
                budget_exhausted: false,
            };
            Ok(ScanRecord::from_outcome(
                &ds,
                outcome,
                Some(start.elapsed()),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        let sets: Vec<Vec<u64>> = divisor_subsets(12, 1, 2, false)
            .into_iter()
            .map(|d| d.divisors().to_vec())
            .collect();
        let mut sorted = sets.clone();
        sorted.sort();
        assert_eq!(sets, sorted);
        assert_eq!(sets.len(), 5 + 10);
        assert_eq!(sets[0], vec![1]);
        assert_eq!(sets[1], vec![1, 2]);

        let connected = divisor_subsets(12, 1, 3, true);
        assert!(connected.iter().all(DivisorSet::is_connected));
    }

    #[test]
    fn json_schema() {
        let r = check_instance(20, &[1, 4, 10], &DispatchOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in &keys {
            assert!(ScanRecord::CSV_HEADER.contains(k), "unexpected key {k}");
        }
        assert_eq!(v["omega"], 6);
        assert_eq!(v["method"], "exact");
        assert_eq!(v["divides_n"], false);
        assert!(v.get("agree").is_none());
        assert_eq!(v["witness"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn check_instance_examples() {
        let opts = DispatchOptions::default();
        let r = check_instance(20, &[1, 10], &opts).unwrap();
        assert_eq!((r.omega, r.method), (Some(4), Method::FormulaK2));
        let r = check_instance(9, &[3], &opts).unwrap();
        assert_eq!((r.omega, r.method), (Some(3), Method::FormulaK1));
        assert!(check_instance(20, &[3], &opts).is_err());
    }

    #[test]
    fn small_scan_has_no_counterexamples_for_k_up_to_two() {
        let config = ScanConfig {
            n_max: 20,
            k_max: 2,
            ..ScanConfig::default()
        };
        let (records, summary) = scan(&config).unwrap();
        assert!(summary.counterexamples.is_empty());
        assert_eq!(records.len(), summary.instances);
    }

    #[test]
    fn scan_finds_known_counterexamples() {
        let config = ScanConfig {
            n_min: 20,
            n_max: 20,
            k_min: 3,
            k_max: 3,
            ..ScanConfig::default()
        };
        let (records, _) = scan(&config).unwrap();
        let hit = records.iter().find(|r| r.divisors == [1, 4, 10]).unwrap();
        assert_eq!(hit.omega, Some(6));
        assert_eq!(hit.divides_n, Some(false));

        let config = ScanConfig {
            n_min: 30,
            n_max: 30,
            k_min: 4,
            k_max: 4,
            counterexamples_only: true,
            ..ScanConfig::default()
        };
        let (records, _) = scan(&config).unwrap();
        let hit = records
            .iter()
            .find(|r| r.divisors == [1, 2, 6, 15])
            .unwrap();
        assert_eq!(hit.omega, Some(7));
        assert!(records.iter().all(ScanRecord::is_counterexample));
    }

    #[test]
    fn family_examples() {
        let opts = DispatchOptions::default();
        let r = counterexample_family(&[23], &opts).unwrap();
        assert_eq!(r[0].n, 460);
        assert_eq!(r[0].omega, Some(6));
        assert_eq!(r[0].divides_n, Some(false));
        assert_eq!(counterexample_family(&[29, 31], &opts).unwrap().len(), 2);
        assert!(matches!(
            counterexample_family(&[19], &opts),
            Err(Error::TooSmall { .. })
        ));
        assert_eq!(
            counterexample_family(&[25], &opts),
            Err(Error::NotPrime(25))
        );
    }

    #[test]
    fn rejects_bad_config() {
        let bad = ScanConfig {
            n_min: 10,
            n_max: 5,
            ..ScanConfig::default()
        };
        assert!(scan(&bad).is_err());
    }
}
