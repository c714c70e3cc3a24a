//! Subcommand definitions and handlers. Each handler writes its artifacts and
//! returns the one-line summary printed on success.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use oja_regret::eig::{run_eigen_oja, EigRunConfig};
use oja_regret::experts::{check_mw_regret_bound, mw_trace, run_mw, LossVector, MwConfig, MwState};
use oja_regret::instance::{
    family_from_json, family_to_json, matrix_from_json, matrix_to_json, problem_from_json,
    problem_to_json,
};
use oja_regret::linalg::{
    normalize_spectral, random_symmetric, random_unit_vector, CommutingFamily,
};
use oja_regret::oja::{
    check_regret_bound_common_ev, check_regret_bound_full_basis, mw_equivalence_check, oja_trace,
    potential_lower_bound, potential_upper_bound, run_oja, OjaConfig,
};
use oja_regret::quadform::{quadform_step_size, run_quadopt, GFunction};
use oja_regret::simplex::simplex_baseline;
use oja_regret::{CommutingFamily64, SymmetricMatrix64, UnitVector64};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::adversary::{
    commuting_control_bound, game_step_size, generate_adversary, run_online_game_from,
    AdversarySpec,
};
use crate::output::{read_text, real, write_meta, write_text, CsvOut};
use crate::seeds::{resolve_seed, rng_from, trial_seed};
use crate::CliError;

const EQUIV_TOL: f64 = 1e-9;
const POTENTIAL_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "oja-regret",
    version,
    about = "Oja's algorithm as an online learner: experiments and certificates"
)]
pub struct Cli {
    /// JSON object whose keys are used as flags not given on the command line.
    #[arg(long, global = true, value_name = "JSON")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Leading-eigenvalue approximation trials.
    Eig(EigArgs),
    /// Sweep random instances through the multiplicative weights regret bound.
    MwCheck(MwCheckArgs),
    /// Check that Oja's overlaps follow multiplicative weights on one instance.
    Equiv(EquivArgs),
    /// Minimize g over quadratic forms on the unit sphere.
    Quadopt(QuadoptArgs),
    /// Play Oja against oblivious adversarial sequences.
    Adversary(AdversaryArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum GenKind {
    /// Commuting family `{"n", "T", "basis", "eigenvalues"}`.
    Family,
    /// Symmetric matrix normalized to spectral norm one.
    Matrix,
    /// Quadratic-form problem with an l1 objective that vanishes at a planted point.
    PlantedL1,
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "family")]
    pub kind: GenKind,
    #[arg(long)]
    pub n: usize,
    /// Family length (`family`) or number of matrices (`planted_l1`).
    #[arg(long = "T", default_value_t = 1)]
    pub horizon: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct EigArgs {
    /// Path to a matrix JSON file, or `random:n=<n>[,seed=<s>]`.
    #[arg(long)]
    pub matrix: String,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Override the iteration count.
    #[arg(long = "T")]
    pub horizon: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Rescale a loaded matrix to spectral norm one.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct MwCheckArgs {
    #[arg(long, default_value_t = 1000)]
    pub instances: usize,
    #[arg(long = "n-max", default_value_t = 8)]
    pub n_max: usize,
    #[arg(long = "T-max", default_value_t = 50)]
    pub t_max: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-instance summary CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Trajectory CSV of the first instance.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EquivArgs {
    /// Family JSON; a random family is drawn when absent.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long = "T", default_value_t = 200)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct QuadoptArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long = "T")]
    pub horizon: usize,
    #[arg(long)]
    pub delta: f64,
    /// Use this step size instead of the tuned one.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum AdversaryKind {
    FixedBasisRankOne,
    RotatingBasis,
    BlockOrthogonal,
    CommutingControl,
}

#[derive(Debug, clap::Args)]
pub struct AdversaryArgs {
    #[arg(long, value_enum)]
    pub kind: AdversaryKind,
    /// 0-based column schedule for `fixed_basis_rank_one`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub block: usize,
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Horizons to sweep, comma separated.
    #[arg(
        long = "T",
        value_delimiter = ',',
        default_value = "256,512,1024,2048,4096,8192,16384"
    )]
    pub horizons: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn dispatch(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Eig(a) => eig(a),
        Command::MwCheck(a) => mw_check(a),
        Command::Equiv(a) => equiv(a),
        Command::Quadopt(a) => quadopt(a),
        Command::Adversary(a) => adversary(a),
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn gen(a: GenArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    let mut rng = rng_from(seed);
    let (text, what) = match a.kind {
        GenKind::Family => {
            let fam = CommutingFamily::<f64>::random(a.n, a.horizon, &mut rng)?;
            (family_to_json(&fam), "family")
        }
        GenKind::Matrix => {
            let (m, _) = normalize_spectral(&random_symmetric::<f64, _>(a.n, &mut rng)?);
            (matrix_to_json(&m), "matrix")
        }
        GenKind::PlantedL1 => {
            let fam = CommutingFamily::<f64>::random(a.n, a.horizon, &mut rng)?;
            let (g, lipschitz) = planted_l1(&fam, &mut rng)?;
            (problem_to_json(&fam, &g, lipschitz), "planted l1 problem")
        }
    };
    write_text(&a.out, &text)?;
    write_meta(
        &a.out,
        json!({"command": "gen", "kind": what, "n": a.n, "T": a.horizon, "seed": seed}),
    )?;
    Ok(format!(
        "gen: wrote {what} n={} T={} to {} seed={seed}",
        a.n,
        a.horizon,
        a.out.display()
    ))
}

/// `g(y) = sum_i |y_i - x0^T A_i x0|` for a uniformly random unit `x0`, so the
/// optimum is zero; `G = m`.
pub fn planted_l1<R: Rng + ?Sized>(
    family: &CommutingFamily64,
    rng: &mut R,
) -> oja_regret::Result<(GFunction<f64>, f64)> {
    let x0: UnitVector64 = random_unit_vector(family.dim(), rng)?;
    let targets = family
        .materialize_all()?
        .iter()
        .map(|a| a.quad_form(x0.as_slice()))
        .collect::<oja_regret::Result<Vec<_>>>()?;
    let m = targets.len() as f64;
    Ok((GFunction::L1System { targets }, m))
}

fn load_matrix(spec: &str, normalize: bool, seed: u64) -> Result<SymmetricMatrix64, CliError> {
    if let Some(params) = spec.strip_prefix("random:") {
        let mut n = None;
        let mut mseed = seed;
        for part in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| invalid(format!("--matrix: expected key=value, got {part:?}")))?;
            match k {
                "n" => {
                    n = Some(
                        v.parse()
                            .map_err(|_| invalid(format!("--matrix: bad n {v:?}")))?,
                    )
                }
                "seed" => {
                    mseed = v
                        .parse()
                        .map_err(|_| invalid(format!("--matrix: bad seed {v:?}")))?
                }
                _ => return Err(invalid(format!("--matrix: unknown key {k:?}"))),
            }
        }
        let n = n.ok_or_else(|| invalid("--matrix: random spec needs n"))?;
        let raw = random_symmetric::<f64, _>(n, &mut rng_from(mseed))?;
        return Ok(normalize_spectral(&raw).0);
    }
    let path = Path::new(spec);
    let m = matrix_from_json(&read_text(path)?)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok(if normalize {
        normalize_spectral(&m).0
    } else {
        m
    })
}

fn eig(a: EigArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    if a.trials == 0 {
        return Err(invalid("--trials must be positive"));
    }
    let matrix = load_matrix(&a.matrix, a.normalize, seed)?;
    let mut cfg = EigRunConfig::new(a.epsilon, a.delta);
    if let Some(mu) = a.mu {
        cfg = cfg.with_mu(mu);
    }
    if let Some(h) = a.horizon {
        cfg = cfg.with_horizon(h);
    }
    let (horizon, mu) = cfg.schedule(matrix.dim())?;
    let results: Vec<_> = (0..a.trials)
        .into_par_iter()
        .map(|trial| {
            let s = trial_seed(seed, trial);
            let init = random_unit_vector(matrix.dim(), &mut rng_from(s))?;
            Ok((s, run_eigen_oja(&matrix, mu, horizon, init)?.0))
        })
        .collect::<oja_regret::Result<_>>()?;

    let mut csv = CsvOut::create(
        &a.out,
        &[
            "trial",
            "seed",
            "T",
            "mu",
            "best_value",
            "lambda1",
            "gap",
            "success",
        ],
    )?;
    let mut successes = 0;
    for (trial, (s, r)) in results.iter().enumerate() {
        let ok = r.gap <= a.epsilon;
        successes += usize::from(ok);
        csv.row([
            trial.to_string(),
            s.to_string(),
            horizon.to_string(),
            real(mu),
            real(r.best_value),
            real(r.lambda1_oracle),
            real(r.gap),
            u8::from(ok).to_string(),
        ])?;
    }
    csv.finish()?;
    write_meta(
        &a.out,
        json!({"command": "eig", "matrix": a.matrix, "n": matrix.dim(), "epsilon": a.epsilon, "delta": a.delta,
               "T": horizon, "mu": mu, "trials": a.trials, "seed": seed}),
    )?;
    Ok(format!(
        "eig: n={} T={horizon} mu={} success {successes}/{} seed={seed}",
        matrix.dim(),
        real(mu),
        a.trials
    ))
}

struct MwRow {
    seed: u64,
    n: usize,
    horizon: usize,
    eta: f64,
    worst_slack: f64,
    satisfied: bool,
}

fn random_mw_instance<R: Rng + ?Sized>(
    rng: &mut R,
    n_max: usize,
    t_max: usize,
) -> oja_regret::Result<(MwConfig<f64>, MwState<f64>, Vec<LossVector<f64>>)> {
    let n = rng.random_range(1..=n_max);
    let horizon = rng.random_range(1..=t_max);
    let eta = rng.random_range(0.0..=0.5);
    let weights = (0..n)
        .map(|_| rng.random_range(-5.0f64..5.0).exp())
        .collect();
    let losses = (0..horizon)
        .map(|_| {
            LossVector::new(
                (0..n)
                    .map(|_| {
                        if rng.random_bool(0.2) {
                            if rng.random_bool(0.5) {
                                1.0
                            } else {
                                -1.0
                            }
                        } else {
                            rng.random_range(-1.0..=1.0)
                        }
                    })
                    .collect(),
            )
        })
        .collect::<oja_regret::Result<Vec<_>>>()?;
    Ok((MwConfig::new(eta, n)?, MwState::new(weights)?, losses))
}

fn mw_check(a: MwCheckArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    if a.n_max == 0 || a.t_max == 0 {
        return Err(invalid("--n-max and --T-max must be positive"));
    }
    let rows: Vec<MwRow> = (0..a.instances)
        .into_par_iter()
        .map(|i| {
            let s = trial_seed(seed, i);
            let (cfg, init, losses) = random_mw_instance(&mut rng_from(s), a.n_max, a.t_max)?;
            let traj = run_mw(init, &losses, &cfg)?;
            let mut worst = f64::INFINITY;
            let mut satisfied = true;
            for expert in 0..cfg.experts() {
                let r = check_mw_regret_bound(&traj, &cfg, expert)?;
                satisfied &= r.satisfied;
                worst = worst.min(r.slack());
            }
            Ok(MwRow {
                seed: s,
                n: cfg.experts(),
                horizon: losses.len(),
                eta: cfg.eta(),
                worst_slack: worst,
                satisfied,
            })
        })
        .collect::<oja_regret::Result<_>>()?;

    let mut csv = CsvOut::create(
        &a.out,
        &[
            "instance",
            "seed",
            "n",
            "T",
            "eta",
            "worst_slack",
            "satisfied",
        ],
    )?;
    for (i, r) in rows.iter().enumerate() {
        csv.row([
            i.to_string(),
            r.seed.to_string(),
            r.n.to_string(),
            r.horizon.to_string(),
            real(r.eta),
            real(r.worst_slack),
            u8::from(r.satisfied).to_string(),
        ])?;
    }
    csv.finish()?;
    if let Some(path) = &a.trajectory {
        let (cfg, init, losses) =
            random_mw_instance(&mut rng_from(trial_seed(seed, 0)), a.n_max, a.t_max)?;
        let traj = run_mw(init, &losses, &cfg)?;
        let mut csv = CsvOut::create(
            path,
            &[
                "t",
                "play_loss",
                "best_expert_loss_to_date",
                "regret",
                "bound_rhs",
            ],
        )?;
        for r in mw_trace(&traj, &cfg) {
            csv.row([
                r.t.to_string(),
                real(r.play_loss),
                real(r.best_expert_loss_to_date),
                real(r.regret),
                real(r.bound_rhs),
            ])?;
        }
        csv.finish()?;
    }
    write_meta(
        &a.out,
        json!({"command": "mw-check", "instances": a.instances, "n_max": a.n_max, "T_max": a.t_max, "seed": seed}),
    )?;
    let failures = rows.iter().filter(|r| !r.satisfied).count();
    if failures > 0 {
        return Err(CliError::Bound(format!(
            "multiplicative weights bound failed on {failures}/{} instances (seed={seed})",
            rows.len()
        )));
    }
    Ok(format!(
        "mw-check: {} instances, all bounds hold seed={seed}",
        rows.len()
    ))
}

fn equiv(a: EquivArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    let mut rng = rng_from(seed);
    let family = match &a.instance {
        Some(path) => family_from_json(&read_text(path)?)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?,
        None => CommutingFamily::<f64>::random(a.n, a.horizon, &mut rng)?,
    };
    let cfg = OjaConfig::new(a.mu)?;
    let init: UnitVector64 = random_unit_vector(family.dim(), &mut rng)?;
    let deviation = mw_equivalence_check(&family, &cfg, &init)?;

    let seq = family.materialize_all()?;
    let states = run_oja(&seq, &cfg, init)?;
    let n = family.dim();
    let totals: Vec<f64> = (0..n)
        .map(|j| (0..family.len()).map(|t| family.eigenvalues(t)[j]).sum())
        .collect();
    let best = (0..n).fold(0, |b, j| if totals[j] > totals[b] { j } else { b });
    let comparator = UnitVector64::new(family.basis().column(best).to_vec())?;

    let mut csv = CsvOut::create(
        &a.out,
        &[
            "t",
            "quadform_value",
            "comparator_value",
            "cumulative_regret",
            "log_magnitude",
        ],
    )?;
    for r in oja_trace(&seq, &states, &comparator)? {
        csv.row([
            r.t.to_string(),
            real(r.quadform_value),
            real(r.comparator_value),
            real(r.cumulative_regret),
            real(r.log_magnitude),
        ])?;
    }
    csv.finish()?;
    write_meta(
        &a.out,
        json!({"command": "equiv", "instance": a.instance, "n": n, "T": family.len(), "mu": a.mu, "seed": seed,
               "deviation": deviation}),
    )?;

    let mut violations = Vec::new();
    if deviation > EQUIV_TOL {
        violations.push(format!(
            "overlap deviation {deviation:e} exceeds {EQUIV_TOL:e}"
        ));
    }
    if a.mu > 0.0 && a.mu <= 1.0 / 6.0 {
        for i in 0..n {
            let r = check_regret_bound_full_basis(&family, &states, &cfg, i)?;
            if !r.satisfied {
                violations.push(format!("full-basis regret bound for column {i}"));
            }
        }
    }
    if a.mu > 0.0 && a.mu <= 0.5 {
        if !check_regret_bound_common_ev(&seq, &comparator, &states, &cfg)?.satisfied {
            violations.push("common-eigenvector regret bound".into());
        }
        let two_l = 2.0 * states[seq.len()].log_magnitude();
        let upper = potential_upper_bound(&seq, &states, &cfg)?;
        let lower = potential_lower_bound(&seq, &comparator, &states, &cfg)?;
        if two_l > upper + POTENTIAL_TOL || two_l < lower - POTENTIAL_TOL {
            violations.push("potential bounds".into());
        }
    }
    if !violations.is_empty() {
        return Err(CliError::Bound(format!(
            "{} (seed={seed})",
            violations.join("; ")
        )));
    }
    Ok(format!(
        "equiv: n={n} T={} mu={} deviation={deviation:e} seed={seed}",
        family.len(),
        real(a.mu)
    ))
}

fn quadopt(a: QuadoptArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    let path = &a.problem;
    let (problem, _) = problem_from_json(&read_text(path)?)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let mu = match a.mu {
        Some(mu) => mu,
        None => quadform_step_size(a.horizon, a.delta, problem.dim())?,
    };
    let init = random_unit_vector(problem.dim(), &mut rng_from(seed))?;
    let (result, _) = run_quadopt(&problem, mu, a.horizon, a.delta, init)?;

    let mut csv = CsvOut::create(&a.out, &["t", "f_value", "best_so_far", "bound_rhs"])?;
    let mut best = f64::INFINITY;
    for (t, &f) in result.trajectory.iter().enumerate() {
        best = best.min(f);
        csv.row([
            (t + 1).to_string(),
            real(f),
            real(best),
            real(result.bound_rhs),
        ])?;
    }
    csv.finish()?;
    let fstar = if problem.is_commuting() {
        Some(simplex_baseline(&problem)?.value)
    } else {
        None
    };
    write_meta(
        &a.out,
        json!({"command": "quadopt", "problem": a.problem, "T": a.horizon, "delta": a.delta, "mu": mu,
               "seed": seed, "best_value": result.best_value, "bound_rhs": result.bound_rhs,
               "baseline_fstar": fstar, "guarantee": problem.is_commuting()}),
    )?;
    let tail = match fstar {
        Some(f) => format!("baseline f*={}", real(f)),
        None => "non-commuting input: no guarantee".into(),
    };
    Ok(format!(
        "quadopt: n={} T={} mu={} best={} bound={} {tail} seed={seed}",
        problem.dim(),
        a.horizon,
        real(mu),
        real(result.best_value),
        real(result.bound_rhs)
    ))
}

struct GameRow {
    horizon: usize,
    trial: usize,
    seed: u64,
    mu: f64,
    report: crate::adversary::OnlineRegretReport,
    bound: Option<oja_regret::BoundReport64>,
}

fn adversary(a: AdversaryArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    let spec = match a.kind {
        AdversaryKind::FixedBasisRankOne => AdversarySpec::FixedBasisRankOne {
            schedule: a.schedule.clone(),
        },
        AdversaryKind::RotatingBasis => AdversarySpec::RotatingBasis { block: a.block },
        AdversaryKind::BlockOrthogonal => AdversarySpec::BlockOrthogonal { rank: a.rank },
        AdversaryKind::CommutingControl => AdversarySpec::CommutingControl,
    };
    spec.validate(a.n)?;
    if a.horizons.is_empty() || a.horizons.contains(&0) || a.trials == 0 {
        return Err(invalid("--T entries and --trials must be positive"));
    }
    let jobs: Vec<(usize, usize)> = a
        .horizons
        .iter()
        .flat_map(|&h| (0..a.trials).map(move |t| (h, t)))
        .collect();
    let rows: Vec<GameRow> = jobs
        .par_iter()
        .enumerate()
        .map(|(index, &(horizon, trial))| {
            let s = trial_seed(seed, index);
            let mut rng = rng_from(s);
            let mu = match a.mu {
                Some(mu) => mu,
                None => game_step_size(horizon, a.delta, a.n)?,
            };
            let cfg = OjaConfig::new(mu)?;
            // the sequence is fixed before the learner's start is drawn
            let (seq, family) = match spec {
                AdversarySpec::CommutingControl => {
                    let fam = CommutingFamily::<f64>::random(a.n, horizon, &mut rng)?;
                    (fam.materialize_all()?, Some(fam))
                }
                _ => (generate_adversary(&spec, horizon, a.n, &mut rng)?, None),
            };
            let init = random_unit_vector(a.n, &mut rng)?;
            let (report, states) = run_online_game_from(&seq, &cfg, init)?;
            let bound = match &family {
                Some(fam) if mu <= 0.5 => Some(commuting_control_bound(fam, &states, &cfg)?),
                _ => None,
            };
            Ok(GameRow {
                horizon,
                trial,
                seed: s,
                mu,
                report,
                bound,
            })
        })
        .collect::<oja_regret::Result<_>>()?;

    let mut csv = CsvOut::create(
        &a.out,
        &[
            "kind",
            "T",
            "trial",
            "seed",
            "mu",
            "lambda1_sum",
            "learner_payoff",
            "regret",
            "regret_over_T",
            "commuting",
            "bound_rhs",
            "bound_satisfied",
        ],
    )?;
    for r in &rows {
        let (rhs, ok) = match &r.bound {
            Some(b) => (real(b.rhs), u8::from(b.satisfied).to_string()),
            None => (String::new(), String::new()),
        };
        csv.row([
            spec.kind().to_string(),
            r.horizon.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            real(r.mu),
            real(r.report.lambda1_sum),
            real(r.report.learner_payoff),
            real(r.report.regret),
            real(r.report.regret_over_t),
            u8::from(r.report.commuting).to_string(),
            rhs,
            ok,
        ])?;
    }
    csv.finish()?;
    write_meta(
        &a.out,
        json!({"command": "adversary", "kind": spec.kind(), "n": a.n, "T": a.horizons, "trials": a.trials,
               "delta": a.delta, "mu": a.mu, "seed": seed}),
    )?;

    let violated = rows
        .iter()
        .filter(|r| r.bound.as_ref().is_some_and(|b| !b.satisfied))
        .count();
    if violated > 0 {
        return Err(CliError::Bound(format!(
            "commuting control exceeded its regret bound in {violated} runs (seed={seed})"
        )));
    }
    let trend: Vec<String> = a
        .horizons
        .iter()
        .map(|&h| {
            let sel: Vec<f64> = rows
                .iter()
                .filter(|r| r.horizon == h)
                .map(|r| r.report.regret_over_t)
                .collect();
            format!("T={h}:{:.4}", sel.iter().sum::<f64>() / sel.len() as f64)
        })
        .collect();
    Ok(format!(
        "adversary: {} mean regret/T {} seed={seed}",
        spec.kind(),
        trend.join(" ")
    ))
}
