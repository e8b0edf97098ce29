//! Monte Carlo experiments and theory tables.
//!
//! Every trial draws from its own stream `(seed, point << 32 | (trial + 1))`;
//! stream `point << 32` is reserved for data shared by a whole grid point.
//! Trials may run on a thread pool; results are gathered in trial order and
//! reduced by counting, so the output does not depend on scheduling.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use pnn::dpnn::{capacity_exponent, dpnn_capacity, k_critical, Dpnn};
use pnn::identifier::IdentifierNet;
use pnn::patterns::{
    apply_binary_noise, apply_qnary_noise, correlated_binary_patterns, random_qnary_patterns, NoiseSpec,
};
use pnn::theory::{capacity_pnn2, capacity_pnn3, perr_pnn2, perr_pnn3};
use pnn::{Memory, NetworkKind, SeededRng, UpdateOrder};

use crate::config::{Command, ExperimentConfig};
use crate::CliError;

/// Fixed CSV column order shared by every command.
pub const HEADER: [&str; 26] = [
    "experiment",
    "N",
    "q",
    "M",
    "a",
    "b",
    "k",
    "trials",
    "seed",
    "coord_err",
    "pattern_err",
    "avg_sweeps",
    "theory_perr",
    "vacuous_flag",
    "sign_flip",
    "onestep_coord_err",
    "onestep_pattern_err",
    "kind",
    "c",
    "max_sweeps",
    "baseline_pattern_err",
    "field_evals",
    "theory_capacity",
    "k_c",
    "exponent_r",
    "note",
];

/// One CSV row. Columns a command does not produce stay empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub n: usize,
    pub q: u32,
    pub m: usize,
    pub a: f64,
    pub b: f64,
    pub k: Option<u32>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub coord_err: Option<f64>,
    pub pattern_err: Option<f64>,
    pub avg_sweeps: Option<f64>,
    pub theory_perr: Option<f64>,
    pub vacuous: Option<bool>,
    pub sign_flip: Option<f64>,
    pub onestep_coord_err: Option<f64>,
    pub onestep_pattern_err: Option<f64>,
    pub kind: Option<NetworkKind>,
    pub c: Option<f64>,
    pub max_sweeps: Option<usize>,
    pub baseline_pattern_err: Option<f64>,
    pub field_evals: Option<f64>,
    pub theory_capacity: Option<f64>,
    pub k_c: Option<u32>,
    pub exponent_r: Option<f64>,
    pub note: String,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl Row {
    fn base(experiment: &str, cfg: &ExperimentConfig) -> Self {
        Row {
            experiment: experiment.to_string(),
            n: cfg.n,
            q: cfg.q,
            m: cfg.patterns(),
            a: cfg.a,
            b: cfg.b,
            seed: cfg.seed,
            ..Row::default()
        }
    }

    pub fn record(&self) -> Vec<String> {
        vec![
            self.experiment.clone(),
            self.n.to_string(),
            self.q.to_string(),
            self.m.to_string(),
            self.a.to_string(),
            self.b.to_string(),
            opt(&self.k),
            opt(&self.trials),
            self.seed.to_string(),
            opt(&self.coord_err),
            opt(&self.pattern_err),
            opt(&self.avg_sweeps),
            opt(&self.theory_perr),
            opt(&self.vacuous.map(u8::from)),
            opt(&self.sign_flip),
            opt(&self.onestep_coord_err),
            opt(&self.onestep_pattern_err),
            opt(&self.kind),
            opt(&self.c),
            opt(&self.max_sweeps),
            opt(&self.baseline_pattern_err),
            opt(&self.field_evals),
            opt(&self.theory_capacity),
            opt(&self.k_c),
            opt(&self.exponent_r),
            self.note.clone(),
        ]
    }
}

/// Rows plus diagnostics meant for stderr (timings, warnings). Diagnostics
/// never enter the CSV, which stays a pure function of the configuration.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub rows: Vec<Row>,
    pub diagnostics: Vec<String>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let mut report = Report::default();
    for (p, point) in cfg.points()?.iter().enumerate() {
        match cfg.command {
            Command::Sweep => report.rows.push(sweep_point(point, p as u64, &pool)?),
            Command::DpnnBench => report.rows.push(dpnn_point(point, p as u64, &pool, &mut report.diagnostics)?),
            Command::IdentifyBench => {
                report.rows.push(identify_point(point, p as u64, &pool, &mut report.diagnostics)?)
            }
            Command::TheoryTable => report.rows.extend(theory_rows(point)),
        }
    }
    Ok(report)
}

/// Writes the header and rows as CSV.
pub fn write_csv<W: std::io::Write>(rows: &[Row], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(HEADER).map_err(CliError::from_csv)?;
    for row in rows {
        w.write_record(row.record()).map_err(CliError::from_csv)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

fn trial_stream(cfg: &ExperimentConfig, point: u64, trial: usize) -> SeededRng {
    SeededRng::new(cfg.seed, (point << 32) | (trial as u64 + 1))
}

fn point_stream(cfg: &ExperimentConfig, point: u64) -> SeededRng {
    SeededRng::new(cfg.seed, point << 32)
}

fn run_trials<T, F>(pool: &rayon::ThreadPool, trials: usize, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(usize) -> Result<T, CliError> + Sync + Send,
{
    if pool.current_num_threads() <= 1 {
        (0..trials).map(f).collect()
    } else {
        pool.install(|| (0..trials).into_par_iter().map(f).collect())
    }
}

fn mean(values: impl Iterator<Item = f64>, count: usize) -> f64 {
    values.sum::<f64>() / count as f64
}

fn fraction(flags: impl Iterator<Item = bool>, count: usize) -> f64 {
    flags.filter(|&f| f).count() as f64 / count as f64
}

#[derive(Debug, Clone, Copy)]
struct SweepTrial {
    coord_err: f64,
    failed: bool,
    sign_flip: bool,
    onestep_coord_err: f64,
    onestep_failed: bool,
    sweeps: usize,
}

fn sweep_trial(cfg: &ExperimentConfig, point: u64, trial: usize) -> Result<SweepTrial, CliError> {
    let mut rng = trial_stream(cfg, point, trial).rng();
    let m = cfg.patterns();
    let patterns = random_qnary_patterns(m, cfg.n, cfg.q, cfg.kind, &mut rng)?;
    let target = rng.gen_range(0..m);
    let memory = Memory::build(patterns, cfg.kind, cfg.q)?;
    let target = &memory.patterns()[target];
    let noise = match cfg.kind {
        NetworkKind::Pnn2 => NoiseSpec::new(cfg.a, cfg.b)?,
        NetworkKind::Pnn3 => NoiseSpec::new(0.0, cfg.b)?,
    };
    let noisy = apply_qnary_noise(target, noise, cfg.q, &mut rng);

    let one = memory.synchronous_step(&noisy)?;
    let full = memory.retrieve(&noisy, cfg.max_sweeps, UpdateOrder::Sequential)?;
    let n = cfg.n as f64;
    let wrong = full.final_state.hamming(target);
    Ok(SweepTrial {
        coord_err: wrong as f64 / n,
        failed: wrong > 0,
        sign_flip: cfg.kind == NetworkKind::Pnn2 && full.final_state == target.negated(),
        onestep_coord_err: one.hamming(target) as f64 / n,
        onestep_failed: one != *target,
        sweeps: full.sweeps_used,
    })
}

fn sweep_point(cfg: &ExperimentConfig, point: u64, pool: &rayon::ThreadPool) -> Result<Row, CliError> {
    let results = run_trials(pool, cfg.trials, |t| sweep_trial(cfg, point, t))?;
    let t = cfg.trials;
    let m = cfg.patterns();
    let mut row = Row::base("sweep", cfg);
    row.trials = Some(t);
    row.kind = Some(cfg.kind);
    row.max_sweeps = Some(cfg.max_sweeps);
    row.coord_err = Some(mean(results.iter().map(|r| r.coord_err), t));
    row.pattern_err = Some(fraction(results.iter().map(|r| r.failed), t));
    row.avg_sweeps = Some(mean(results.iter().map(|r| r.sweeps as f64), t));
    row.sign_flip = Some(fraction(results.iter().map(|r| r.sign_flip), t));
    row.onestep_coord_err = Some(mean(results.iter().map(|r| r.onestep_coord_err), t));
    row.onestep_pattern_err = Some(fraction(results.iter().map(|r| r.onestep_failed), t));
    let (bound, capacity) = match cfg.kind {
        NetworkKind::Pnn2 => {
            (perr_pnn2(cfg.n, m, cfg.q, cfg.a, cfg.b).ok(), capacity_pnn2(cfg.n, cfg.q, cfg.a, cfg.b).ok())
        }
        NetworkKind::Pnn3 => (perr_pnn3(cfg.n, m, cfg.q, cfg.b).ok(), capacity_pnn3(cfg.n, cfg.q, cfg.b).ok()),
    };
    row.theory_perr = bound.map(|b| b.value);
    row.vacuous = bound.map(|b| b.vacuous);
    row.theory_capacity = capacity;
    Ok(row)
}

#[derive(Debug, Clone, Copy)]
struct DpnnTrial {
    bit_err: f64,
    failed: bool,
    baseline_failed: bool,
    sweeps: usize,
}

fn dpnn_trial(cfg: &ExperimentConfig, point: u64, trial: usize) -> Result<DpnnTrial, CliError> {
    let mut rng = trial_stream(cfg, point, trial).rng();
    let m = cfg.patterns();
    let patterns = correlated_binary_patterns(m, cfg.n, cfg.c, &mut rng)?;
    let target = rng.gen_range(0..m);
    let noisy = apply_binary_noise(&patterns[target], cfg.a, &mut rng);

    let net = Dpnn::build(&patterns, cfg.k)?;
    let (bits, result) = net.retrieve_detailed(&noisy, cfg.max_sweeps)?;
    let wrong = bits.iter().zip(&patterns[target]).filter(|(x, y)| x != y).count();
    let baseline_failed = if cfg.k == 0 {
        wrong > 0
    } else {
        Dpnn::build(&patterns, 0)?.retrieve(&noisy, cfg.max_sweeps)? != patterns[target]
    };
    Ok(DpnnTrial {
        bit_err: wrong as f64 / cfg.n as f64,
        failed: wrong > 0,
        baseline_failed,
        sweeps: result.sweeps_used,
    })
}

fn dpnn_point(
    cfg: &ExperimentConfig,
    point: u64,
    pool: &rayon::ThreadPool,
    diagnostics: &mut Vec<String>,
) -> Result<Row, CliError> {
    let kc = k_critical(cfg.n, cfg.a).map_err(CliError::from)?;
    let results = run_trials(pool, cfg.trials, |t| dpnn_trial(cfg, point, t))?;
    let t = cfg.trials;
    let mut row = Row::base("dpnn-bench", cfg);
    row.k = Some(cfg.k);
    row.trials = Some(t);
    row.kind = Some(NetworkKind::Pnn2);
    row.c = Some(cfg.c);
    row.max_sweeps = Some(cfg.max_sweeps);
    row.coord_err = Some(mean(results.iter().map(|r| r.bit_err), t));
    row.pattern_err = Some(fraction(results.iter().map(|r| r.failed), t));
    row.baseline_pattern_err = Some(fraction(results.iter().map(|r| r.baseline_failed), t));
    row.avg_sweeps = Some(mean(results.iter().map(|r| r.sweeps as f64), t));
    row.theory_capacity = dpnn_capacity(cfg.n, cfg.a, cfg.k).ok();
    row.k_c = Some(kc.k);
    row.exponent_r = capacity_exponent(cfg.n, cfg.a).ok();
    if cfg.k > kc.k {
        row.note = format!("warning: k = {} exceeds k_c = {}", cfg.k, kc.k);
        diagnostics.push(row.note.clone());
    }
    Ok(row)
}

fn identify_point(
    cfg: &ExperimentConfig,
    point: u64,
    pool: &rayon::ThreadPool,
    diagnostics: &mut Vec<String>,
) -> Result<Row, CliError> {
    let m = cfg.patterns();
    let patterns = random_qnary_patterns(m, cfg.n, cfg.q, NetworkKind::Pnn3, &mut point_stream(cfg, point).rng())?;
    let net = IdentifierNet::build(patterns, cfg.q)?;
    let noise = NoiseSpec::new(0.0, cfg.b)?;
    let started = Instant::now();
    let results = run_trials(pool, cfg.trials, |t| {
        let mut rng = trial_stream(cfg, point, t).rng();
        let mu = rng.gen_range(0..m);
        let noisy = apply_qnary_noise(&net.patterns()[mu], noise, cfg.q, &mut rng);
        let seed: Vec<u32> = (0..net.digits()).map(|_| rng.gen_range(0..cfg.q)).collect();
        Ok(match net.identify_traced(&noisy, Some(&seed)) {
            Ok(r) => (r.id.0 == mu, r.field_evaluations),
            Err(pnn::Error::UnknownPattern { .. }) => (false, net.digits()),
            Err(e) => return Err(e.into()),
        })
    })?;
    let elapsed = started.elapsed();
    let t = cfg.trials;
    let mut row = Row::base("identify-bench", cfg);
    row.trials = Some(t);
    row.kind = Some(NetworkKind::Pnn3);
    row.pattern_err = Some(fraction(results.iter().map(|r| !r.0), t));
    row.field_evals = Some(mean(results.iter().map(|r| r.1 as f64), t));
    row.k = None;
    row.theory_capacity = capacity_pnn3(cfg.n + net.digits(), cfg.q, cfg.b).ok();
    diagnostics.push(format!(
        "identify-bench N={} q={} M={} b={}: {:.3} us/query",
        cfg.n,
        cfg.q,
        m,
        cfg.b,
        per_query_micros(elapsed, t)
    ));
    Ok(row)
}

fn per_query_micros(elapsed: Duration, queries: usize) -> f64 {
    elapsed.as_secs_f64() * 1e6 / queries as f64
}

fn theory_rows(cfg: &ExperimentConfig) -> Vec<Row> {
    let m = cfg.patterns();
    let mut rows = Vec::new();

    let mut pnn2 = Row::base("theory-pnn2", cfg);
    pnn2.kind = Some(NetworkKind::Pnn2);
    if let Ok(bound) = perr_pnn2(cfg.n, m, cfg.q, cfg.a, cfg.b) {
        pnn2.theory_perr = Some(bound.value);
        pnn2.vacuous = Some(bound.vacuous);
    }
    pnn2.theory_capacity = capacity_pnn2(cfg.n, cfg.q, cfg.a, cfg.b).ok();
    rows.push(pnn2);

    if cfg.q >= 2 {
        let mut pnn3 = Row::base("theory-pnn3", cfg);
        pnn3.kind = Some(NetworkKind::Pnn3);
        match (perr_pnn3(cfg.n, m, cfg.q, cfg.b), capacity_pnn3(cfg.n, cfg.q, cfg.b)) {
            (Ok(bound), Ok(cap)) => {
                pnn3.theory_perr = Some(bound.value);
                pnn3.vacuous = Some(bound.vacuous);
                pnn3.theory_capacity = Some(cap);
            }
            (Err(e), _) | (_, Err(e)) => pnn3.note = e.to_string(),
        }
        rows.push(pnn3);
    }

    let mut dpnn = Row::base("theory-dpnn", cfg);
    dpnn.k = Some(cfg.k);
    if cfg.a < 0.5 {
        dpnn.theory_capacity = dpnn_capacity(cfg.n, cfg.a, cfg.k).ok();
        match k_critical(cfg.n, cfg.a) {
            Ok(kc) => {
                dpnn.k_c = Some(kc.k);
                dpnn.exponent_r = capacity_exponent(cfg.n, cfg.a).ok();
                dpnn.note = format!("binding: {:?}", kc.binding);
            }
            Err(e) => dpnn.note = e.to_string(),
        }
    } else {
        dpnn.note = "a >= 0.5".into();
    }
    rows.push(dpnn);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(command: Command) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(command);
        c.n = 60;
        c.q = 4;
        c.m = 20;
        c.b = 0.3;
        c.trials = 12;
        c
    }

    #[test]
    fn rows_have_header_width() {
        let report = run(&small(Command::Sweep)).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].record().len(), HEADER.len());
    }

    #[test]
    fn empty_grid_gives_header_only() {
        let mut c = small(Command::TheoryTable);
        c.sweep = Some(crate::config::SweepVar::N);
        let report = run(&c).unwrap();
        assert!(report.rows.is_empty());
        let mut buf = Vec::new();
        write_csv(&report.rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), HEADER.join(",") + "\n");
    }

    #[test]
    fn theory_row_values() {
        let mut c = small(Command::TheoryTable);
        c.n = 1000;
        c.q = 1;
        c.a = 0.0;
        c.b = 0.0;
        let rows = run(&c).unwrap().rows;
        assert_eq!(rows.len(), 2);
        let cap = rows[0].theory_capacity.unwrap();
        assert!((cap - 72.38).abs() < 0.005);
        assert_eq!(rows[1].k_c, Some(9));
    }

    #[test]
    fn parallel_matches_serial() {
        let mut c = small(Command::Sweep);
        let serial = run(&c).unwrap().rows;
        c.threads = 4;
        let parallel = run(&c).unwrap().rows;
        assert_eq!(serial, parallel);
    }

    #[test]
    fn k0_dpnn_baseline_is_itself() {
        let mut c = small(Command::DpnnBench);
        c.n = 200;
        c.m = 10;
        c.a = 0.1;
        c.k = 0;
        let row = run(&c).unwrap().rows.remove(0);
        assert_eq!(row.pattern_err, row.baseline_pattern_err);
    }

    #[test]
    fn infeasible_k_exits_3() {
        let mut c = small(Command::DpnnBench);
        c.n = 60;
        c.k = 1;
        let err = run(&c).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
