use std::time::Instant;

use num_bigint::{BigInt, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::cases::{classify, WrapCase};
use super::report::{CampaignReport, ReportHeader, Tally, Witness};
use super::{effective_errors, inject_errors, ErrorVector};
use crate::error::{CrtError, Result};
use crate::exact::{CleanInstance, RobustModuliSet};
use crate::robust::{
    reconstruct_extremes, reconstruct_quotient, Branch, Reconstruction, WangXiaTables,
};
use crate::scalar::{times, Int};

/// Identity of the random stream. Trial `t` of a campaign seeded with `s`
/// draws from `ChaCha8Rng::seed_from_u64(s)` with stream `t`: first `N`,
/// then each error in index order, all via `RandBigInt::gen_bigint_range`.
pub const GENERATOR: &str =
    "chacha8(seed_from_u64(seed), stream=trial_index) / num-bigint gen_bigint_range";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Quotient,
    WangXia,
    Extremes,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Quotient, Algorithm::WangXia, Algorithm::Extremes];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Quotient => "quotient",
            Algorithm::WangXia => "wang_xia",
            Algorithm::Extremes => "extremes",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "quotient" => Some(Algorithm::Quotient),
            "wang_xia" | "wangxia" => Some(Algorithm::WangXia),
            "extremes" => Some(Algorithm::Extremes),
            _ => None,
        }
    }

    pub(crate) fn recovers_quotients(self) -> bool {
        !matches!(self, Algorithm::Extremes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorBound<T> {
    /// The largest integer strictly below `d/4`, i.e. `ceil(d/4) - 1`.
    BelowQuarter,
    Explicit(T),
}

impl<T: Int> ErrorBound<T> {
    pub fn resolve(&self, d: &T) -> T {
        match self {
            ErrorBound::BelowQuarter => {
                let four = times(4, &T::one());
                num_integer::Integer::div_ceil(d, &four) - T::one()
            }
            ErrorBound::Explicit(b) => b.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CampaignConfig<T> {
    pub moduli: Vec<T>,
    pub d: T,
    pub mode: Mode,
    /// Random mode only.
    pub trials: u64,
    pub seed: u64,
    pub error_bound: ErrorBound<T>,
    pub algorithms: Vec<Algorithm>,
    /// Worker cap; `None` uses rayon's default pool.
    pub threads: Option<usize>,
}

impl<T: Int> CampaignConfig<T> {
    pub fn exhaustive(moduli: Vec<T>, d: T) -> Self {
        Self {
            moduli,
            d,
            mode: Mode::Exhaustive,
            trials: 0,
            seed: 0,
            error_bound: ErrorBound::BelowQuarter,
            algorithms: Algorithm::ALL.to_vec(),
            threads: None,
        }
    }

    pub fn random(moduli: Vec<T>, d: T, trials: u64, seed: u64) -> Self {
        Self {
            mode: Mode::Random,
            trials,
            seed,
            ..Self::exhaustive(moduli, d)
        }
    }

    pub fn with_bound(mut self, bound: ErrorBound<T>) -> Self {
        self.error_bound = bound;
        self
    }

    pub fn with_algorithms(mut self, algorithms: Vec<Algorithm>) -> Self {
        self.algorithms = algorithms;
        self
    }

    /// Runs the campaign in whichever mode it is configured for.
    pub fn run(&self) -> Result<CampaignReport> {
        Ok(Campaign::new(self)?.run(false)?.0)
    }

    /// As [`run`](Self::run), also returning one record per trial and algorithm
    /// in trial order.
    pub fn run_with_records(&self) -> Result<(CampaignReport, Vec<TrialRecord<T>>)> {
        Campaign::new(self)?.run(true)
    }
}

pub fn exhaustive_sweep<T: Int>(cfg: &CampaignConfig<T>) -> Result<CampaignReport> {
    if cfg.mode != Mode::Exhaustive {
        return Err(CrtError::InvalidParams(
            "exhaustive_sweep needs exhaustive mode".into(),
        ));
    }
    cfg.run()
}

pub fn random_campaign<T: Int>(cfg: &CampaignConfig<T>) -> Result<CampaignReport> {
    if cfg.mode != Mode::Random {
        return Err(CrtError::InvalidParams(
            "random_campaign needs random mode".into(),
        ));
    }
    cfg.run()
}

/// One algorithm's result on one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord<T> {
    pub trial: u64,
    pub n: T,
    pub deltas: Vec<T>,
    pub algorithm: Algorithm,
    pub n_hat: Option<T>,
    pub abs_error: Option<T>,
    pub success: bool,
}

struct Campaign<'c, T> {
    cfg: &'c CampaignConfig<T>,
    mods: RobustModuliSet<T>,
    wang_xia: Option<WangXiaTables<T>>,
    bound: T,
    total: u64,
    // exhaustive enumeration: 2B+1 and (2B+1)^k
    width: u64,
    block: u64,
}

struct Outcome<T> {
    trial: u64,
    inst: CleanInstance<T>,
    deltas: Vec<T>,
    rbar: Vec<T>,
    clamped: bool,
    case: WrapCase,
    results: Vec<Result<Reconstruction<T>>>,
    wang_xia_mismatch: bool,
    case_identity_ok: Option<bool>,
    digit_shift_ok: Option<bool>,
}

impl<'c, T: Int> Campaign<'c, T> {
    fn new(cfg: &'c CampaignConfig<T>) -> Result<Self> {
        if cfg.algorithms.is_empty() {
            return Err(CrtError::InvalidParams("no algorithms selected".into()));
        }
        let mods = RobustModuliSet::from_moduli(cfg.moduli.clone(), cfg.d.clone())?;
        let wang_xia = if cfg.algorithms.contains(&Algorithm::WangXia) {
            Some(WangXiaTables::new(&mods)?)
        } else {
            None
        };
        let bound = cfg.error_bound.resolve(&cfg.d);
        if bound.is_negative() {
            return Err(CrtError::InvalidParams(
                "error bound must be non-negative".into(),
            ));
        }
        let (total, width, block) = match cfg.mode {
            Mode::Random => {
                if cfg.trials == 0 {
                    return Err(CrtError::InvalidParams(
                        "random mode needs trials >= 1".into(),
                    ));
                }
                (cfg.trials, 0, 0)
            }
            Mode::Exhaustive => {
                let too_large = || CrtError::InvalidParams("exhaustive sweep is too large".into());
                let range = mods.range().to_u64().ok_or_else(too_large)?;
                let width = times(2, &bound)
                    .to_u64()
                    .and_then(|w| w.checked_add(1))
                    .ok_or_else(too_large)?;
                let block = (0..mods.len())
                    .try_fold(1u64, |acc, _| acc.checked_mul(width))
                    .ok_or_else(too_large)?;
                (
                    range.checked_mul(block).ok_or_else(too_large)?,
                    width,
                    block,
                )
            }
        };
        Ok(Self {
            cfg,
            mods,
            wang_xia,
            bound,
            total,
            width,
            block,
        })
    }

    fn header(&self) -> ReportHeader {
        let random = self.cfg.mode == Mode::Random;
        ReportHeader {
            generator: random.then(|| GENERATOR.to_string()),
            mode: if random { "random" } else { "exhaustive" }.to_string(),
            moduli: self.cfg.moduli.iter().map(ToString::to_string).collect(),
            d: self.cfg.d.to_string(),
            error_bound: self.bound.to_string(),
            seed: random.then_some(self.cfg.seed),
        }
    }

    fn run(&self, want_records: bool) -> Result<(CampaignReport, Vec<TrialRecord<T>>)> {
        let start = Instant::now();
        let body = || -> Result<(Tally<T>, Vec<TrialRecord<T>>)> {
            let k = self.cfg.algorithms.len();
            if want_records {
                let outcomes = (0..self.total)
                    .into_par_iter()
                    .map(|t| self.trial(t))
                    .collect::<Result<Vec<_>>>()?;
                let mut tally = Tally::new(k);
                let mut records = Vec::with_capacity(outcomes.len() * k);
                for o in outcomes {
                    records.extend(self.records(&o));
                    self.absorb(&mut tally, o);
                }
                Ok((tally, records))
            } else {
                let tally = (0..self.total)
                    .into_par_iter()
                    .try_fold(
                        || Tally::new(k),
                        |mut acc, t| {
                            self.absorb(&mut acc, self.trial(t)?);
                            Ok::<_, CrtError>(acc)
                        },
                    )
                    .try_reduce(|| Tally::new(k), |a, b| Ok(a.merge(b)))?;
                Ok((tally, Vec::new()))
            }
        };
        let (tally, records) = match self.cfg.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CrtError::InvalidParams(e.to_string()))?
                .install(body)?,
            None => body()?,
        };
        let duration_ms = start.elapsed().as_millis() as u64;
        Ok((
            tally.finish(self.header(), &self.cfg.algorithms, duration_ms),
            records,
        ))
    }

    fn draw(&self, t: u64) -> Result<(T, Vec<T>)> {
        match self.cfg.mode {
            Mode::Exhaustive => {
                let n = T::from_u64(t / self.block).expect("fits");
                let mut rest = t % self.block;
                let mut deltas = Vec::with_capacity(self.mods.len());
                for _ in 0..self.mods.len() {
                    let digit = T::from_u64(rest % self.width).expect("fits");
                    deltas.push(digit - self.bound.clone());
                    rest /= self.width;
                }
                Ok((n, deltas))
            }
            Mode::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
                rng.set_stream(t);
                let n = rng.gen_bigint_range(&BigInt::from(0), &self.mods.range().to_big());
                let lo = -self.bound.to_big();
                let hi = self.bound.to_big() + 1;
                let deltas = (0..self.mods.len())
                    .map(|_| T::from_big(rng.gen_bigint_range(&lo, &hi)))
                    .collect();
                Ok((T::from_big(n), deltas))
            }
        }
    }

    fn trial(&self, t: u64) -> Result<Outcome<T>> {
        let (n, deltas) = self.draw(t)?;
        let inst = self.mods.instance_from_n(n)?;
        let obs = inject_errors(&self.mods, &inst, &ErrorVector::new(deltas.clone()))?;
        let eff = effective_errors(&inst, &obs);
        let d = self.mods.d();
        let case = classify(&inst.a, d, &eff.delta);

        let results: Vec<Result<Reconstruction<T>>> = self
            .cfg
            .algorithms
            .iter()
            .map(|algo| match algo {
                Algorithm::Quotient => reconstruct_quotient(&obs),
                Algorithm::WangXia => self
                    .wang_xia
                    .as_ref()
                    .expect("tables built")
                    .reconstruct(&obs),
                Algorithm::Extremes => reconstruct_extremes(&obs),
            })
            .collect();

        let find = |a: Algorithm| {
            self.cfg
                .algorithms
                .iter()
                .position(|x| *x == a)
                .map(|i| &results[i])
        };
        let wang_xia_mismatch = match (find(Algorithm::Quotient), find(Algorithm::WangXia)) {
            (Some(q), Some(w)) => match (q, w) {
                (Ok(q), Ok(w)) => q.n_hat != w.n_hat,
                (Err(a), Err(b)) => a != b,
                _ => true,
            },
            _ => false,
        };

        let (case_identity_ok, digit_shift_ok) = match find(Algorithm::Extremes) {
            Some(Ok(rec)) => (
                Some(case_identity_holds(&inst, d, &eff.delta, case, rec)),
                Some(digit_shift_holds(&inst, case, rec)),
            ),
            Some(Err(_)) => (Some(false), Some(false)),
            None => (None, None),
        };

        Ok(Outcome {
            trial: t,
            deltas,
            rbar: obs.rbar().to_vec(),
            clamped: obs.clamped(),
            inst,
            case,
            results,
            wang_xia_mismatch,
            case_identity_ok,
            digit_shift_ok,
        })
    }

    fn is_success(&self, inst: &CleanInstance<T>, n_hat: &T) -> (T, bool) {
        let err = (inst.n.clone() - n_hat.clone()).abs();
        let ok = &times(4, &err) < self.mods.d();
        (err, ok)
    }

    fn absorb(&self, tally: &mut Tally<T>, o: Outcome<T>) {
        tally.total += 1;
        tally.clamped += o.clamped as u64;
        *tally.cases.entry(o.case).or_default() += 1;
        tally.quotient_wang_xia_mismatches += o.wang_xia_mismatch as u64;
        tally.case_identity_violations += (o.case_identity_ok == Some(false)) as u64;
        tally.digit_shift_violations += (o.digit_shift_ok == Some(false)) as u64;

        for (slot, result) in tally.algos.iter_mut().zip(&o.results) {
            let witness = |n_hat: Option<T>, error: Option<String>| Witness {
                trial: o.trial,
                n: o.inst.n.clone(),
                deltas: o.deltas.clone(),
                rbar: o.rbar.clone(),
                n_hat,
                error,
            };
            match result {
                Ok(rec) => {
                    *slot.branches.entry(rec.branch).or_default() += 1;
                    if rec.q_hat.as_ref() == Some(&o.inst.q) {
                        slot.quotient_exact += 1;
                    }
                    let (err, ok) = self.is_success(&o.inst, &rec.n_hat);
                    slot.observe_error(&err);
                    if ok {
                        slot.successes += 1;
                    } else {
                        slot.push_failure(witness(Some(rec.n_hat.clone()), None));
                    }
                }
                Err(e) => {
                    slot.errors += 1;
                    slot.push_failure(witness(None, Some(e.to_string())));
                }
            }
        }
    }

    fn records(&self, o: &Outcome<T>) -> Vec<TrialRecord<T>> {
        self.cfg
            .algorithms
            .iter()
            .zip(&o.results)
            .map(|(algo, result)| {
                let (n_hat, abs_error, success) = match result {
                    Ok(rec) => {
                        let (err, ok) = self.is_success(&o.inst, &rec.n_hat);
                        (Some(rec.n_hat.clone()), Some(err), ok)
                    }
                    Err(_) => (None, None, false),
                };
                TrialRecord {
                    trial: o.trial,
                    n: o.inst.n.clone(),
                    deltas: o.deltas.clone(),
                    algorithm: *algo,
                    n_hat,
                    abs_error,
                    success,
                }
            })
            .collect()
    }
}

/// Closed form of the extremes output for each wrap case:
/// `N + floor(sum(delta)/k)` for (a)/(b)/(c) on the low-spread branch,
/// `N - a` for (d) and `N + d - a` for (e) on the high-spread branch.
fn case_identity_holds<T: Int>(
    inst: &CleanInstance<T>,
    d: &T,
    delta: &[T],
    case: WrapCase,
    rec: &Reconstruction<T>,
) -> bool {
    let expected_branch = if case.is_low_spread() {
        Branch::LowSpread
    } else {
        Branch::HighSpread
    };
    if rec.branch != expected_branch {
        return false;
    }
    let expected = match case {
        WrapCase::A | WrapCase::B | WrapCase::C => {
            let sum = delta.iter().fold(T::zero(), |acc, e| acc + e.clone());
            let k = T::from_usize_exact(delta.len());
            inst.n.clone() + num_integer::Integer::div_floor(&sum, &k)
        }
        WrapCase::D => inst.n.clone() - inst.a.clone(),
        WrapCase::E => inst.n.clone() + d.clone() - inst.a.clone(),
    };
    rec.n_hat == expected
}

fn digit_shift_holds<T: Int>(
    inst: &CleanInstance<T>,
    case: WrapCase,
    rec: &Reconstruction<T>,
) -> bool {
    let Some(gamma_hat) = &rec.gamma_hat else {
        return false;
    };
    let shift = T::from_i32(case.digit_shift()).expect("small");
    gamma_hat
        .iter()
        .zip(&inst.gamma)
        .all(|(gh, g)| gh.clone() - g.clone() == shift)
}
