use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use num_bigint::BigInt;
use robust_crt::robust::general_recover_quotient;
use robust_crt::sim::{self, Algorithm, CampaignConfig, ErrorBound, Mode, SharpnessWitness};
use robust_crt::{
    reconstruct_extremes, reconstruct_quotient, reconstruct_wang_xia, BigCleanInstance,
    BigGeneralModuliSet, BigRobustModuliSet, ExtremeStats, Observation,
};
use serde_json::{json, Value};

use crate::output::{int, ints, opt_int, opt_ints, CliError};
use crate::{Algo, SimMode};

const THREADS_ENV: &str = "CRT_THREADS";

pub fn solve(moduli: Vec<BigInt>, d: BigInt, remainders: &[BigInt]) -> Result<Value, CliError> {
    let mods = BigRobustModuliSet::from_moduli(moduli, d)?;
    let inst = mods.solve_exact(remainders)?;
    Ok(json!({
        "n": int(&inst.n),
        "a": int(&inst.a),
        "n0": int(&inst.n0),
        "gamma": ints(&inst.gamma),
        "q": ints(&inst.q),
    }))
}

fn stats_json(s: &ExtremeStats<BigInt>) -> Value {
    json!({
        "alpha": int(&s.alpha),
        "beta": int(&s.beta),
        "mu": opt_int(s.mu.as_ref()),
        "nu": opt_int(s.nu.as_ref()),
    })
}

pub fn reconstruct(
    moduli: Vec<BigInt>,
    d: BigInt,
    remainders: Vec<BigInt>,
    algo: Algo,
) -> Result<Value, CliError> {
    let mods = BigRobustModuliSet::from_moduli(moduli, d)?;
    let obs = Observation::new(&mods, remainders)?;
    if obs.clamped() {
        eprintln!("note: remainders outside [0, d*m_i) were clamped");
    }
    let rec = match algo {
        Algo::Quotient => reconstruct_quotient(&obs)?,
        Algo::Wangxia => reconstruct_wang_xia(&obs)?,
        Algo::Extremes => reconstruct_extremes(&obs)?,
    };
    Ok(json!({
        "n_hat": int(&rec.n_hat),
        "method": rec.method.as_str(),
        "branch": rec.branch.as_str(),
        "q_hat": opt_ints(rec.q_hat.as_ref()),
        "gamma_hat": opt_ints(rec.gamma_hat.as_ref()),
        "n0_hat": opt_int(rec.n0_hat.as_ref()),
        "per_modulus": opt_ints(rec.per_modulus.as_ref()),
        "stats": rec.stats.as_ref().map_or(Value::Null, stats_json),
    }))
}

pub struct SimArgs {
    pub mode: SimMode,
    pub moduli: Vec<BigInt>,
    pub d: BigInt,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub bound: String,
    pub algos: String,
    pub csv: Option<PathBuf>,
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

pub fn simulate(args: SimArgs) -> Result<Value, CliError> {
    let algorithms = args
        .algos
        .split(',')
        .map(|s| {
            Algorithm::parse(s.trim())
                .ok_or_else(|| CliError::Usage(format!("unknown algorithm {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let error_bound = match args.bound.as_str() {
        "paper" | "quarter" => ErrorBound::BelowQuarter,
        other => ErrorBound::Explicit(
            other
                .parse::<BigInt>()
                .map_err(|_| CliError::Usage(format!("invalid --bound {other:?}")))?,
        ),
    };
    let (mode, trials, seed) = match args.mode {
        SimMode::Exhaustive => (Mode::Exhaustive, 0, 0),
        SimMode::Random => {
            let need = |what: &str| CliError::Usage(format!("random mode requires --{what}"));
            (
                Mode::Random,
                args.trials.ok_or_else(|| need("trials"))?,
                args.seed.ok_or_else(|| need("seed"))?,
            )
        }
    };
    let cfg = CampaignConfig {
        moduli: args.moduli,
        d: args.d,
        mode,
        trials,
        seed,
        error_bound,
        algorithms,
        threads: threads_from_env()?,
    };

    let report = match &args.csv {
        None => cfg.run()?,
        Some(path) => {
            let (report, records) = cfg.run_with_records()?;
            write_csv(path, &records)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            report
        }
    };
    Ok(serde_json::to_value(&report).expect("report serializes"))
}

fn write_csv(path: &PathBuf, records: &[sim::TrialRecord<BigInt>]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "trial_index,N,deltas,algo,n_hat,abs_err,success")?;
    for r in records {
        let deltas: Vec<String> = r.deltas.iter().map(ToString::to_string).collect();
        let show = |x: &Option<BigInt>| x.as_ref().map(ToString::to_string).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.trial,
            r.n,
            deltas.join(";"),
            r.algorithm.as_str(),
            show(&r.n_hat),
            show(&r.abs_error),
            r.success
        )?;
    }
    out.flush()
}

fn instance_json(inst: &BigCleanInstance, deltas: &[BigInt]) -> Value {
    json!({
        "n": int(&inst.n),
        "r": ints(&inst.r),
        "a": int(&inst.a),
        "gamma": ints(&inst.gamma),
        "q": ints(&inst.q),
        "n0": int(&inst.n0),
        "deltas": ints(deltas),
    })
}

pub fn sharpness(p: BigInt, q: BigInt, d: BigInt) -> Result<Value, CliError> {
    let w: SharpnessWitness<BigInt> = sim::sharpness_witness(p, q, d)?;
    let outcomes: Vec<Value> = w
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "algorithm": o.algorithm.as_str(),
                "n_hat": opt_int(o.n_hat.as_ref()),
                "error": o.error,
                "within_bound_of_n1": o.within_bound_of_n1,
                "within_bound_of_n2": o.within_bound_of_n2,
            })
        })
        .collect();
    Ok(json!({
        "p": int(&w.p),
        "q": int(&w.q),
        "d": int(&w.d),
        "v": int(&w.v),
        "n1": int(&w.instance1.n),
        "n2": int(&w.instance2.n),
        "gap": int(&w.gap),
        "observation": ints(&w.observation),
        "residues": ints(&w.stats.residues),
        "alpha_minus_beta": int(&w.stats.spread()),
        "instance1": instance_json(&w.instance1, &w.deltas1),
        "instance2": instance_json(&w.instance2, &w.deltas2),
        "outcomes": outcomes,
    }))
}

pub fn gen_recover(moduli: Vec<BigInt>, remainders: &[BigInt]) -> Result<Value, CliError> {
    let gm = BigGeneralModuliSet::new(moduli)?;
    let rec = general_recover_quotient(&gm, remainders)?;
    Ok(json!({
        "ref_index": rec.ref_index + 1,
        "tau4": int(gm.tau4()),
        "q_hat": int(&rec.q_hat),
        "n_hat": int(&rec.n_hat),
    }))
}
