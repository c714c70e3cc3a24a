//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use oja_regret::eig::{overlap_sampler, required_iterations, run_eigen_oja, EigRunConfig};
use oja_regret::experts::{check_mw_regret_bound, run_mw, LossVector, MwConfig, MwState};
use oja_regret::linalg::{
    normalize_spectral, random_basis_containing, random_symmetric, random_unit_vector,
    CommutingFamily, OrthonormalBasis, SymmetricMatrix, UnitVector,
};
use oja_regret::oja::{
    check_regret_bound_common_ev, check_regret_bound_full_basis, mw_equivalence_check,
    potential_lower_bound, potential_upper_bound, run_oja, OjaConfig,
};
use oja_regret::quadform::{
    check_quadform_bound, run_quadopt, solve_quadform, GFunction, QuadFormProblem,
};
use oja_regret::simplex::simplex_baseline;
use oja_regret_cli::commands::planted_l1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn oja_mw_equivalence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    let mut ok = 0;
    for _ in 0..200 {
        let n = r.random_range(2..=16);
        let horizon = r.random_range(1..=500);
        let mu = 1.0 / 6.0 * (1.0 - r.random_range(0.0..1.0));
        let fam = CommutingFamily::<f64>::random(n, horizon, &mut r).unwrap();
        let init = random_unit_vector(n, &mut r).unwrap();
        let dev = mw_equivalence_check(&fam, &OjaConfig::new(mu).unwrap(), &init).unwrap();
        worst = worst.max(dev);
        ok += usize::from(dev <= 1e-9);
    }
    let secs = start.elapsed().as_secs_f64();
    (
        ok == 200 && secs < 30.0,
        format!("{ok}/200 within 1e-9, worst deviation {worst:e}, {secs:.2}s"),
    )
}

fn mw_regret() -> Outcome {
    let mut r = rng(2);
    let mut checks = 0;
    let mut failures = 0;
    for _ in 0..1000 {
        let n = r.random_range(1..=8);
        let horizon = r.random_range(1..=50);
        let eta = r.random_range(0.0..=0.5);
        let weights: Vec<f64> = (0..n).map(|_| r.random_range(-6.0f64..6.0).exp()).collect();
        let losses: Vec<LossVector<f64>> = (0..horizon)
            .map(|_| {
                let m = (0..n)
                    .map(|_| match r.random_range(0..5) {
                        0 => 1.0,
                        1 => -1.0,
                        _ => r.random_range(-1.0..=1.0),
                    })
                    .collect();
                LossVector::new(m).unwrap()
            })
            .collect();
        let cfg = MwConfig::new(eta, n).unwrap();
        let traj = run_mw(MwState::new(weights).unwrap(), &losses, &cfg).unwrap();
        for i in 0..n {
            checks += 1;
            failures += usize::from(!check_mw_regret_bound(&traj, &cfg, i).unwrap().satisfied);
        }
    }
    (
        failures == 0,
        format!("{} of {checks} expert checks satisfied", checks - failures),
    )
}

/// A sequence whose only common eigenvector is `v` (with eigenvalue in [-1, 1]).
fn shared_comparator_sequence(
    n: usize,
    horizon: usize,
    r: &mut ChaCha8Rng,
) -> (Vec<SymmetricMatrix<f64>>, UnitVector<f64>) {
    let v = random_unit_vector::<f64, _>(n, r).unwrap();
    let seq = (0..horizon)
        .map(|_| {
            let q = random_basis_containing(&v, r).unwrap();
            let rest = normalize_spectral(&random_symmetric::<f64, _>(n - 1, r).unwrap()).0;
            let lam = r.random_range(-1.0..=1.0);
            // Q diag(lam, rest) Q^T
            let cols = q.columns();
            let mut data = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let mut x = lam * cols[0][i] * cols[0][j];
                    for a in 1..n {
                        for b in 1..n {
                            x += cols[a][i] * rest.get(a - 1, b - 1) * cols[b][j];
                        }
                    }
                    data[i * n + j] = x;
                }
            }
            SymmetricMatrix::from_row_major(n, data).unwrap()
        })
        .collect();
    (seq, v)
}

fn oja_regret_bounds() -> Outcome {
    let mut r = rng(3);
    let (mut full_ok, mut full_vacuous, mut full_total) = (0, 0, 0);
    for k in 0..500 {
        let n = r.random_range(2..=10);
        let horizon = r.random_range(1..=200);
        let mu = 1.0 / 6.0 * (1.0 - r.random_range(0.0..1.0));
        let cfg = OjaConfig::new(mu).unwrap();
        // every tenth instance starts on a coordinate axis of an identity basis,
        // so all other overlaps are exactly zero
        let (fam, init) = if k % 10 == 0 {
            let eig = (0..horizon)
                .map(|_| (0..n).map(|_| r.random_range(-1.0..=1.0)).collect())
                .collect();
            let fam = CommutingFamily::new(OrthonormalBasis::identity(n), eig).unwrap();
            (fam, UnitVector::basis(n, r.random_range(0..n)).unwrap())
        } else {
            let fam = CommutingFamily::<f64>::random(n, horizon, &mut r).unwrap();
            let init = random_unit_vector(n, &mut r).unwrap();
            (fam, init)
        };
        let states = run_oja(&fam.materialize_all().unwrap(), &cfg, init).unwrap();
        for i in 0..n {
            let rep = check_regret_bound_full_basis(&fam, &states, &cfg, i).unwrap();
            full_total += 1;
            if rep.vacuous {
                full_vacuous += 1;
            } else if rep.satisfied {
                full_ok += 1;
            }
        }
    }
    let (mut ev_ok, mut ev_vacuous) = (0, 0);
    for k in 0..500 {
        let n = r.random_range(2..=8);
        let horizon = r.random_range(1..=100);
        let mu = 0.5 * (1.0 - r.random_range(0.0..1.0));
        let cfg = OjaConfig::new(mu).unwrap();
        let (seq, v) = if k % 2 == 0 {
            shared_comparator_sequence(n, horizon, &mut r)
        } else {
            let fam = CommutingFamily::<f64>::random(n, horizon, &mut r).unwrap();
            let j = r.random_range(0..n);
            (
                fam.materialize_all().unwrap(),
                UnitVector::new(fam.basis().column(j).to_vec()).unwrap(),
            )
        };
        let init = random_unit_vector(n, &mut r).unwrap();
        let states = run_oja(&seq, &cfg, init).unwrap();
        let rep = check_regret_bound_common_ev(&seq, &v, &states, &cfg).unwrap();
        if rep.vacuous {
            ev_vacuous += 1;
        } else if rep.satisfied {
            ev_ok += 1;
        }
    }
    let full_pass = full_ok + full_vacuous == full_total && full_vacuous > 0;
    let ev_pass = ev_ok + ev_vacuous == 500;
    (
        full_pass && ev_pass,
        format!(
            "full basis {full_ok}/{} non-vacuous checks hold ({full_vacuous} flagged vacuous); \
             shared eigenvector {ev_ok}/{} hold ({ev_vacuous} vacuous)",
            full_total - full_vacuous,
            500 - ev_vacuous
        ),
    )
}

fn potential_bounds() -> Outcome {
    let mut r = rng(4);
    let mut ok = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let n = r.random_range(1..=10);
        let horizon = r.random_range(1..=300);
        let mu = 0.5 * (1.0 - r.random_range(0.0..1.0));
        let cfg = OjaConfig::new(mu).unwrap();
        let fam = CommutingFamily::<f64>::random(n, horizon, &mut r).unwrap();
        let seq = fam.materialize_all().unwrap();
        let states = run_oja(&seq, &cfg, random_unit_vector(n, &mut r).unwrap()).unwrap();
        let two_l = 2.0 * states[horizon].log_magnitude();
        let upper = potential_upper_bound(&seq, &states, &cfg).unwrap();
        let mut holds = two_l <= upper + 1e-9;
        worst = worst.min(upper - two_l);
        for j in 0..n {
            let v = UnitVector::new(fam.basis().column(j).to_vec()).unwrap();
            let lower = potential_lower_bound(&seq, &v, &states, &cfg).unwrap();
            holds &= two_l >= lower - 1e-9;
            worst = worst.min(two_l - lower);
        }
        ok += usize::from(holds);
    }
    (
        ok == 200,
        format!("{ok}/200 instances, smallest margin {worst:e}"),
    )
}

fn eigen_guarantee() -> Outcome {
    let start = Instant::now();
    let horizon = required_iterations(0.2, 0.1, 50).unwrap();
    let (t, mu) = EigRunConfig::new(0.2, 0.1).schedule(50).unwrap();
    let mut ok = 0;
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let mut r = rng(1000 + seed);
        let a = normalize_spectral(&random_symmetric::<f64, _>(50, &mut r).unwrap()).0;
        let init = random_unit_vector(50, &mut r).unwrap();
        let (res, _) = run_eigen_oja(&a, mu, t, init).unwrap();
        worst = worst.max(res.gap);
        ok += usize::from(res.gap <= 0.2);
    }
    let secs = start.elapsed().as_secs_f64();
    (
        horizon == 631 && t == 631 && ok >= 90 && secs < 10.0,
        format!("T={horizon}, {ok}/100 seeds with gap <= 0.2 (worst {worst:.4}), {secs:.2}s"),
    )
}

fn iteration_formula() -> Outcome {
    // ceil(3 eps^-2 ln(9n/delta)) evaluated with 50-digit arithmetic:
    // eps=0.1, n=10: 2040.7184...; eps=0.2, n=50: 630.8868...
    let a = required_iterations(0.1, 0.1, 10).unwrap();
    let b = required_iterations(0.2, 0.1, 50).unwrap();
    (
        a == 2041 && b == 631,
        format!("required_iterations = {a}, {b}"),
    )
}

fn overlap_lemma() -> Outcome {
    let f1 = overlap_sampler(20, 0.3, 10_000, &mut rng(7)).unwrap();
    let f2 = overlap_sampler(100, 0.05, 10_000, &mut rng(8)).unwrap();
    let pass = f1 >= 1.0 - 0.3 - 0.03 && f2 >= 1.0 - 0.05 - 0.03;
    (
        pass,
        format!("frequencies {f1:.4} (need >= 0.67), {f2:.4} (need >= 0.92)"),
    )
}

fn remark_instance() -> Outcome {
    let fam = CommutingFamily::new(
        OrthonormalBasis::identity(2),
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    )
    .unwrap();
    let p = QuadFormProblem::from_family(&fam, Box::new(GFunction::Max { arity: 2 }), 1.0).unwrap();
    let res = solve_quadform(&p, 10_000, 0.1, &mut rng(9)).unwrap();
    let fstar: f64 = simplex_baseline(&p).unwrap().value;
    let z: &[f64] = res.best_direction.as_slice();
    let coords_ok = z.iter().all(|c| (c * c - 0.5).abs() <= 0.05);
    let pass = res.best_value <= 0.5 + res.bound_rhs && (fstar - 0.5).abs() <= 1e-6 && coords_ok;
    (
        pass,
        format!(
            "best {:.6} <= 0.5 + {:.6}, baseline f* = {fstar}, squared coordinates ({:.4}, {:.4})",
            res.best_value,
            res.bound_rhs,
            z[0] * z[0],
            z[1] * z[1]
        ),
    )
}

fn planted_recovery() -> Outcome {
    const HORIZON: usize = 2000;
    let mut r = rng(10);
    let (mut within, mut baseline_ok) = (0, 0);
    let mut worst_fstar = 0.0f64;
    for _ in 0..100 {
        let n = r.random_range(2..=20);
        let m = r.random_range(1..=5);
        let fam = CommutingFamily::<f64>::random(n, m, &mut r).unwrap();
        let (g, lipschitz) = planted_l1(&fam, &mut r).unwrap();
        let p = QuadFormProblem::from_family(&fam, Box::new(g), lipschitz).unwrap();
        let res = solve_quadform(&p, HORIZON, 0.1, &mut r).unwrap();
        within += usize::from(
            check_quadform_bound(&res, 0.0).satisfied && res.best_value <= res.bound_rhs,
        );
        let fstar = simplex_baseline(&p).unwrap().value;
        worst_fstar = worst_fstar.max(fstar);
        baseline_ok += usize::from(fstar <= 1e-6);
    }
    (
        within >= 90 && baseline_ok == 100,
        format!("T={HORIZON}: {within}/100 within bound; baseline f* <= 1e-6 in {baseline_ok}/100 (max {worst_fstar:e})"),
    )
}

fn reduction_identity() -> Outcome {
    const HORIZON: usize = 1000;
    let mut r = rng(11);
    let a = normalize_spectral(&random_symmetric::<f64, _>(12, &mut r).unwrap()).0;
    let init = random_unit_vector(12, &mut r).unwrap();
    let mu = 0.05;
    let (eig, eig_states) = run_eigen_oja(&a, mu, HORIZON, init.clone()).unwrap();
    let p = QuadFormProblem::from_matrices(vec![a], Box::new(GFunction::NegIdentity), 1.0).unwrap();
    let (q, q_states) = run_quadopt(&p, mu, HORIZON, 0.1, init).unwrap();
    let mut worst = 0.0f64;
    for t in 0..HORIZON {
        worst = worst.max((eig.values[t] + q.trajectory[t]).abs());
        for (x, y) in eig_states[t]
            .direction()
            .as_slice()
            .iter()
            .zip(q_states[t].direction().as_slice())
        {
            worst = worst.max((x - y).abs());
        }
    }
    (
        worst <= 1e-10,
        format!("T={HORIZON}, largest per-round difference {worst:e}"),
    )
}

fn run_cli(bin: &str, dir: &Path, threads: &str, args: &[&str]) -> Result<(), String> {
    let out = Command::new(bin)
        .args(args)
        .current_dir(dir)
        .env("OJA_REGRET_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr).trim()
        ))
    }
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_oja-regret");
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let setup = [
        vec![
            "gen",
            "--kind",
            "planted_l1",
            "--n",
            "6",
            "--T",
            "3",
            "--seed",
            "5",
            "--out",
            "problem.json",
        ],
        vec![
            "gen",
            "--kind",
            "family",
            "--n",
            "5",
            "--T",
            "40",
            "--seed",
            "6",
            "--out",
            "family.json",
        ],
    ];
    for args in &setup {
        if let Err(e) = run_cli(bin, d, "2", args) {
            return (false, e);
        }
    }
    let runs: Vec<(Vec<&str>, Vec<&str>)> = vec![
        (
            vec![
                "eig",
                "--matrix",
                "random:n=20,seed=3",
                "--epsilon",
                "0.2",
                "--delta",
                "0.1",
                "--trials",
                "8",
                "--seed",
                "1",
            ],
            vec![],
        ),
        (
            vec![
                "mw-check",
                "--instances",
                "200",
                "--seed",
                "2",
                "--trajectory",
                "{dir}/traj.csv",
            ],
            vec!["traj.csv"],
        ),
        (
            vec![
                "equiv",
                "--instance",
                "family.json",
                "--mu",
                "0.1",
                "--seed",
                "3",
            ],
            vec![],
        ),
        (
            vec![
                "quadopt",
                "--problem",
                "problem.json",
                "--T",
                "500",
                "--delta",
                "0.1",
                "--seed",
                "4",
            ],
            vec![],
        ),
        (
            vec![
                "adversary",
                "--kind",
                "commuting_control",
                "--n",
                "4",
                "--T",
                "64,128",
                "--trials",
                "3",
                "--seed",
                "5",
            ],
            vec![],
        ),
        (
            vec![
                "adversary",
                "--kind",
                "rotating_basis",
                "--block",
                "4",
                "--n",
                "4",
                "--T",
                "64",
                "--trials",
                "3",
                "--seed",
                "5",
            ],
            vec![],
        ),
    ];
    let mut compared = 0;
    for (k, (args, extra)) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for (rep, threads) in ["1", "4"].iter().enumerate() {
            let sub = d.join(format!("run{k}_{rep}"));
            std::fs::create_dir_all(&sub).unwrap();
            let sub_str = sub.to_str().unwrap().to_owned();
            let mut full: Vec<String> = args.iter().map(|a| a.replace("{dir}", &sub_str)).collect();
            full.push("--out".into());
            full.push(format!("{sub_str}/out.csv"));
            let refs: Vec<&str> = full.iter().map(String::as_str).collect();
            if let Err(e) = run_cli(bin, d, threads, &refs) {
                return (false, e);
            }
            let mut files = vec![std::fs::read(sub.join("out.csv")).unwrap()];
            for f in extra {
                files.push(std::fs::read(sub.join(f)).unwrap());
            }
            outputs.push(files);
        }
        if outputs[0] != outputs[1] {
            return (false, format!("{} output differs between repeats", args[0]));
        }
        compared += outputs[0].len();
    }
    (
        true,
        format!("{compared} CSV artifacts byte-identical across repeats (1 vs 4 threads)"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        (
            "Oja and multiplicative weights overlap equivalence",
            oja_mw_equivalence,
        ),
        ("multiplicative weights regret bound", mw_regret),
        (
            "Oja regret bounds (full basis and shared eigenvector)",
            oja_regret_bounds,
        ),
        ("potential upper and lower bounds", potential_bounds),
        ("gap-free eigenvalue guarantee", eigen_guarantee),
        ("iteration-count formula", iteration_formula),
        ("random initialization overlap", overlap_lemma),
        ("two-coordinate max instance", remark_instance),
        ("planted l1 recovery", planted_recovery),
        ("reduction to eigenvalue iteration", reduction_identity),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = check();
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {}: {name}: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
