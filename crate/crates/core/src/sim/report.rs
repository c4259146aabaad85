use std::collections::BTreeMap;

use serde::Serialize;

use super::campaign::Algorithm;
use super::cases::WrapCase;
use crate::robust::Branch;
use crate::scalar::Int;

/// At most this many failure witnesses are kept per algorithm; the failure
/// count itself is always exact.
pub const MAX_WITNESSES: usize = 100;

/// A replayable failing trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Witness<T> {
    pub trial: u64,
    pub n: T,
    pub deltas: Vec<T>,
    pub rbar: Vec<T>,
    pub n_hat: Option<T>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub(crate) struct AlgoTally<T> {
    pub successes: u64,
    pub errors: u64,
    pub max_abs_error: Option<T>,
    pub quotient_exact: u64,
    pub branches: BTreeMap<Branch, u64>,
    pub failure_count: u64,
    pub failures: Vec<Witness<T>>,
}

impl<T: Int> AlgoTally<T> {
    fn new() -> Self {
        Self {
            successes: 0,
            errors: 0,
            max_abs_error: None,
            quotient_exact: 0,
            branches: BTreeMap::new(),
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn observe_error(&mut self, err: &T) {
        match &self.max_abs_error {
            Some(m) if m >= err => {}
            _ => self.max_abs_error = Some(err.clone()),
        }
    }

    pub fn push_failure(&mut self, w: Witness<T>) {
        self.failure_count += 1;
        self.failures.push(w);
        if self.failures.len() > 2 * MAX_WITNESSES {
            self.trim();
        }
    }

    fn trim(&mut self) {
        self.failures.sort_by_key(|w| w.trial);
        self.failures.truncate(MAX_WITNESSES);
    }

    fn merge(&mut self, other: Self) {
        self.successes += other.successes;
        self.errors += other.errors;
        if let Some(e) = other.max_abs_error {
            self.observe_error(&e);
        }
        self.quotient_exact += other.quotient_exact;
        for (b, c) in other.branches {
            *self.branches.entry(b).or_default() += c;
        }
        self.failure_count += other.failure_count;
        self.failures.extend(other.failures);
        self.trim();
    }
}

/// Order-independent accumulator behind [`CampaignReport`].
#[derive(Debug, Clone)]
pub(crate) struct Tally<T> {
    pub total: u64,
    pub clamped: u64,
    pub algos: Vec<AlgoTally<T>>,
    pub cases: BTreeMap<WrapCase, u64>,
    pub quotient_wang_xia_mismatches: u64,
    pub case_identity_violations: u64,
    pub digit_shift_violations: u64,
}

impl<T: Int> Tally<T> {
    pub fn new(algorithms: usize) -> Self {
        Self {
            total: 0,
            clamped: 0,
            algos: (0..algorithms).map(|_| AlgoTally::new()).collect(),
            cases: BTreeMap::new(),
            quotient_wang_xia_mismatches: 0,
            case_identity_violations: 0,
            digit_shift_violations: 0,
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.total += other.total;
        self.clamped += other.clamped;
        for (mine, theirs) in self.algos.iter_mut().zip(other.algos) {
            mine.merge(theirs);
        }
        for (c, n) in other.cases {
            *self.cases.entry(c).or_default() += n;
        }
        self.quotient_wang_xia_mismatches += other.quotient_wang_xia_mismatches;
        self.case_identity_violations += other.case_identity_violations;
        self.digit_shift_violations += other.digit_shift_violations;
        self
    }

    pub fn finish(
        mut self,
        header: ReportHeader,
        algorithms: &[Algorithm],
        duration_ms: u64,
    ) -> CampaignReport {
        let has = |a: Algorithm| algorithms.contains(&a);
        let algos = algorithms
            .iter()
            .zip(self.algos.iter_mut())
            .map(|(algo, t)| {
                t.trim();
                AlgorithmReport {
                    algorithm: algo.as_str().to_string(),
                    successes: t.successes,
                    success_rate: if self.total == 0 {
                        0.0
                    } else {
                        t.successes as f64 / self.total as f64
                    },
                    errors: t.errors,
                    max_abs_error: t.max_abs_error.as_ref().map(|e| e.to_string()),
                    quotient_exact: algo.recovers_quotients().then_some(t.quotient_exact),
                    branch_histogram: t
                        .branches
                        .iter()
                        .map(|(b, c)| (b.as_str().to_string(), *c))
                        .collect(),
                    failure_count: t.failure_count,
                    failures: t
                        .failures
                        .iter()
                        .map(FailureWitness::from_witness)
                        .collect(),
                }
            })
            .collect();
        CampaignReport {
            generator: header.generator,
            mode: header.mode,
            moduli: header.moduli,
            d: header.d,
            error_bound: header.error_bound,
            seed: header.seed,
            total_trials: self.total,
            clamped_trials: self.clamped,
            algorithms: algos,
            checks: CheckReport {
                case_histogram: self
                    .cases
                    .iter()
                    .map(|(c, n)| (c.as_str().to_string(), *n))
                    .collect(),
                quotient_wang_xia_mismatches: (has(Algorithm::Quotient) && has(Algorithm::WangXia))
                    .then_some(self.quotient_wang_xia_mismatches),
                case_identity_violations: has(Algorithm::Extremes)
                    .then_some(self.case_identity_violations),
                digit_shift_violations: has(Algorithm::Extremes)
                    .then_some(self.digit_shift_violations),
            },
            duration_ms,
        }
    }
}

pub(crate) struct ReportHeader {
    pub generator: Option<String>,
    pub mode: String,
    pub moduli: Vec<String>,
    pub d: String,
    pub error_bound: String,
    pub seed: Option<u64>,
}

/// Serializable campaign summary. Integers are decimal strings.
///
/// Everything except `duration_ms` is a pure function of the configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub generator: Option<String>,
    pub mode: String,
    pub moduli: Vec<String>,
    pub d: String,
    pub error_bound: String,
    pub seed: Option<u64>,
    pub total_trials: u64,
    /// Trials where injection had to clamp a remainder into range.
    pub clamped_trials: u64,
    pub algorithms: Vec<AlgorithmReport>,
    pub checks: CheckReport,
    pub duration_ms: u64,
}

impl CampaignReport {
    pub fn algorithm(&self, algo: Algorithm) -> Option<&AlgorithmReport> {
        self.algorithms
            .iter()
            .find(|a| a.algorithm == algo.as_str())
    }

    /// The report with the wall-clock field zeroed, for reproducibility checks.
    pub fn without_duration(&self) -> Self {
        Self {
            duration_ms: 0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmReport {
    pub algorithm: String,
    /// Trials with `4|N - n_hat| < d`.
    pub successes: u64,
    pub success_rate: f64,
    /// Trials where the algorithm returned an error.
    pub errors: u64,
    pub max_abs_error: Option<String>,
    pub quotient_exact: Option<u64>,
    pub branch_histogram: BTreeMap<String, u64>,
    pub failure_count: u64,
    pub failures: Vec<FailureWitness>,
}

/// Cross-checks computed on every trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    /// Trials per ground-truth wrap case.
    pub case_histogram: BTreeMap<String, u64>,
    /// Trials where the two quotient routes disagree on `n_hat`.
    pub quotient_wang_xia_mismatches: Option<u64>,
    /// Extremes trials whose output differs from the closed form of its case.
    pub case_identity_violations: Option<u64>,
    /// Extremes trials whose digit shift is not the case's constant.
    pub digit_shift_violations: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureWitness {
    pub trial: u64,
    pub n: String,
    pub deltas: Vec<String>,
    pub rbar: Vec<String>,
    pub n_hat: Option<String>,
    pub error: Option<String>,
}

impl FailureWitness {
    fn from_witness<T: Int>(w: &Witness<T>) -> Self {
        Self {
            trial: w.trial,
            n: w.n.to_string(),
            deltas: w.deltas.iter().map(ToString::to_string).collect(),
            rbar: w.rbar.iter().map(ToString::to_string).collect(),
            n_hat: w.n_hat.as_ref().map(ToString::to_string),
            error: w.error.clone(),
        }
    }
}
