//! Oblivious matrix sequences for the online eigenvector game and the
//! learner loop that plays against them.

use oja_regret::linalg::{
    eigendecompose, pairwise_commuting, random_basis_containing, random_orthonormal_basis,
    random_unit_vector, CommutingFamily, EIGEN_CAP,
};
use oja_regret::oja::{check_regret_bound_common_ev, OjaConfig, OjaState};
use oja_regret::{BoundReport64, Error, Result, SymmetricMatrix64, UnitVector64};
use rand::Rng;

const COMMUTE_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdversarySpec {
    /// `A_t = v_{i_t} v_{i_t}^T` over one fixed random basis. `i_t` cycles
    /// through `schedule` (0-based), or round-robin over all columns if empty.
    FixedBasisRankOne { schedule: Vec<usize> },
    /// Rank-one projectors onto round-robin columns of a basis redrawn every
    /// `block` rounds.
    RotatingBasis { block: usize },
    /// Projectors onto fresh random `rank`-dimensional subspaces orthogonal to
    /// one fixed reference vector.
    BlockOrthogonal { rank: usize },
    /// A random commuting family with eigenvalues uniform in `[-1, 1]`.
    CommutingControl,
}

impl AdversarySpec {
    pub fn kind(&self) -> &'static str {
        match self {
            AdversarySpec::FixedBasisRankOne { .. } => "fixed_basis_rank_one",
            AdversarySpec::RotatingBasis { .. } => "rotating_basis",
            AdversarySpec::BlockOrthogonal { .. } => "block_orthogonal",
            AdversarySpec::CommutingControl => "commuting_control",
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |name, value: usize, reason| {
            Err(Error::InvalidParameter {
                name,
                value: value as f64,
                reason,
            })
        };
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        match self {
            AdversarySpec::FixedBasisRankOne { schedule } => {
                match schedule.iter().find(|&&i| i >= n) {
                    Some(&i) => bad("schedule", i, "schedule index must be below n"),
                    None => Ok(()),
                }
            }
            AdversarySpec::RotatingBasis { block: 0 } => {
                bad("block", 0, "block length must be positive")
            }
            AdversarySpec::BlockOrthogonal { rank } if *rank == 0 || *rank >= n => {
                bad("rank", *rank, "rank must lie in [1, n - 1]")
            }
            _ => Ok(()),
        }
    }
}

/// Draws the whole sequence up front; nothing here can see a learner.
pub fn generate_adversary<R: Rng + ?Sized>(
    spec: &AdversarySpec,
    horizon: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<SymmetricMatrix64>> {
    spec.validate(n)?;
    let seq = match spec {
        AdversarySpec::FixedBasisRankOne { schedule } => {
            let basis = random_orthonormal_basis::<f64, _>(n, rng)?;
            (0..horizon)
                .map(|t| {
                    let i = if schedule.is_empty() {
                        t % n
                    } else {
                        schedule[t % schedule.len()]
                    };
                    SymmetricMatrix64::outer(basis.column(i))
                })
                .collect::<Result<Vec<_>>>()?
        }
        AdversarySpec::RotatingBasis { block } => {
            let mut out = Vec::with_capacity(horizon);
            let mut basis = random_orthonormal_basis::<f64, _>(n, rng)?;
            for t in 0..horizon {
                if t > 0 && t % block == 0 {
                    basis = random_orthonormal_basis(n, rng)?;
                }
                out.push(SymmetricMatrix64::outer(basis.column(t % n))?);
            }
            out
        }
        AdversarySpec::BlockOrthogonal { rank } => {
            let reference = random_unit_vector::<f64, _>(n, rng)?;
            let mut out = Vec::with_capacity(horizon);
            for _ in 0..horizon {
                let basis = random_basis_containing(&reference, rng)?;
                let weights: Vec<f64> = (0..n)
                    .map(|j| if j >= 1 && j <= *rank { 1.0 } else { 0.0 })
                    .collect();
                out.push(basis.synthesize(&weights)?);
            }
            out
        }
        AdversarySpec::CommutingControl => {
            CommutingFamily::<f64>::random(n, horizon, rng)?.materialize_all()?
        }
    };
    for (index, a) in seq.iter().enumerate() {
        let norm = oja_regret::linalg::spectral_norm(a);
        if norm > 1.0 + NORM_TOL {
            return Err(Error::NormTooLarge { index, norm });
        }
    }
    Ok(seq)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnlineRegretReport {
    /// `lambda_1(sum_t A_t)`.
    pub lambda1_sum: f64,
    /// `sum_t z_t^T A_t z_t`.
    pub learner_payoff: f64,
    pub regret: f64,
    pub regret_over_t: f64,
    pub commuting: bool,
}

/// Plays Oja against a fixed sequence from a uniformly random start.
pub fn run_online_game<R: Rng + ?Sized>(
    sequence: &[SymmetricMatrix64],
    cfg: &OjaConfig<f64>,
    rng: &mut R,
) -> Result<OnlineRegretReport> {
    let first = sequence.first().ok_or(Error::EmptyDimension)?;
    let init = random_unit_vector(first.dim(), rng)?;
    Ok(run_online_game_from(sequence, cfg, init)?.0)
}

/// As [`run_online_game`] from a given start; also returns the states.
pub fn run_online_game_from(
    sequence: &[SymmetricMatrix64],
    cfg: &OjaConfig<f64>,
    init: UnitVector64,
) -> Result<(OnlineRegretReport, Vec<OjaState<f64>>)> {
    let first = sequence.first().ok_or(Error::EmptyDimension)?;
    let n = first.dim();
    if n > EIGEN_CAP {
        return Err(Error::Unsupported(
            "dimension above the eigensolver cap; estimate lambda_1 with power_method_baseline",
        ));
    }
    let mut states = Vec::with_capacity(sequence.len() + 1);
    states.push(OjaState::initial(init));
    let mut payoff = 0.0;
    let mut total = SymmetricMatrix64::zeros(n);
    for a in sequence {
        let current = states.last().expect("non-empty");
        // z_t is fixed before A_t is read
        payoff += a.quad_form(current.direction().as_slice())?;
        let next = current.step(a, cfg)?;
        total = total.add(a)?;
        states.push(next);
    }
    let lambda1_sum = eigendecompose(&total)?.values[0];
    let regret = lambda1_sum - payoff;
    let report = OnlineRegretReport {
        lambda1_sum,
        learner_payoff: payoff,
        regret,
        regret_over_t: regret / sequence.len() as f64,
        commuting: pairwise_commuting(sequence, COMMUTE_TOL)?,
    };
    Ok((report, states))
}

/// `sqrt(ln(9n / delta) / (3T))`, the step size tuned for the online game.
pub fn game_step_size(horizon: usize, delta: f64, n: usize) -> Result<f64> {
    oja_regret::eig::eigen_step_size(horizon, delta, n)
}

/// Deterministic regret certificate for a commuting family against the basis
/// column with the largest total eigenvalue, which attains `lambda_1(sum_t A_t)`.
pub fn commuting_control_bound(
    family: &CommutingFamily<f64>,
    states: &[OjaState<f64>],
    cfg: &OjaConfig<f64>,
) -> Result<BoundReport64> {
    let n = family.dim();
    let totals: Vec<f64> = (0..n)
        .map(|j| (0..family.len()).map(|t| family.eigenvalues(t)[j]).sum())
        .collect();
    let best = (0..n).fold(0, |b, j| if totals[j] > totals[b] { j } else { b });
    let v = UnitVector64::new(family.basis().column(best).to_vec())?;
    check_regret_bound_common_ev(&family.materialize_all()?, &v, states, cfg)
}
