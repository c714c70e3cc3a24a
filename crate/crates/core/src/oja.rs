//! Oja's iteration `w_{t+1} = (I + mu A_t) w_t` run as an online learner,
//! its exact correspondence with multiplicative weights on commuting inputs,
//! and checkers for the resulting regret bounds.
//!
//! The raw iterate `w_t` grows or shrinks geometrically, so the state keeps the
//! unit direction `z_t = w_t / ||w_t||` together with `ln ||w_t||`.

use crate::bound::BoundReport;
use crate::error::{Error, Result};
use crate::experts::{run_mw, LossVector, MwConfig, MwState};
use crate::linalg::{
    spectral_norm, CommutingFamily, OrthonormalBasis, SymmetricMatrix, UnitVector,
};
use crate::scalar::{dot, max_abs, norm2, Scalar};

/// Absolute slack used by the regret and potential checkers.
pub const OJA_BOUND_TOL: f64 = 1e-9;
/// Tolerance on `||A v - (v^T A v) v||` for the shared-eigenvector certificate.
pub const EIGENVECTOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OjaConfig<T> {
    mu: T,
}

impl<T: Scalar> OjaConfig<T> {
    /// Step size in `[0, 1)`; `mu >= 1` could send the iterate to zero.
    pub fn new(mu: T) -> Result<Self> {
        if !(mu >= T::zero() && mu < T::one()) {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: mu.as_f64(),
                reason: "step size must lie in [0, 1)",
            });
        }
        Ok(Self { mu })
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    fn require_range(&self, upper: f64, reason: &'static str) -> Result<()> {
        if self.mu > T::zero() && self.mu <= T::lit(upper) {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: "mu",
                value: self.mu.as_f64(),
                reason,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OjaState<T> {
    direction: UnitVector<T>,
    log_magnitude: T,
    round: usize,
}

impl<T: Scalar> OjaState<T> {
    /// `w_1 = init`, so the log magnitude starts at zero.
    pub fn initial(init: UnitVector<T>) -> Self {
        Self {
            direction: init,
            log_magnitude: T::zero(),
            round: 0,
        }
    }

    pub fn direction(&self) -> &UnitVector<T> {
        &self.direction
    }

    /// `ln ||w_t||_2`.
    pub fn log_magnitude(&self) -> T {
        self.log_magnitude
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn step(&self, a: &SymmetricMatrix<T>, cfg: &OjaConfig<T>) -> Result<Self> {
        let z = self.direction.as_slice();
        let az = a.matvec(z)?;
        let y: Vec<T> = z
            .iter()
            .zip(&az)
            .map(|(&zi, &ai)| zi + cfg.mu * ai)
            .collect();
        let ny = norm2(&y);
        if !(ny > T::zero() && ny.is_finite()) {
            return Err(Error::Degenerate(format!(
                "iterate norm {} at round {}",
                ny.as_f64(),
                self.round
            )));
        }
        Ok(Self {
            direction: UnitVector::from_normalized_unchecked(
                y.into_iter().map(|c| c / ny).collect(),
            ),
            log_magnitude: self.log_magnitude + ny.ln(),
            round: self.round + 1,
        })
    }
}

pub fn oja_step<T: Scalar>(
    state: &OjaState<T>,
    a: &SymmetricMatrix<T>,
    cfg: &OjaConfig<T>,
) -> Result<OjaState<T>> {
    state.step(a, cfg)
}

/// Runs the iteration over `sequence`, returning `T + 1` states.
pub fn run_oja<'a, T, I>(
    sequence: I,
    cfg: &OjaConfig<T>,
    init: UnitVector<T>,
) -> Result<Vec<OjaState<T>>>
where
    T: Scalar,
    I: IntoIterator<Item = &'a SymmetricMatrix<T>>,
{
    let mut states = vec![OjaState::initial(init)];
    for a in sequence {
        let next = states.last().expect("non-empty").step(a, cfg)?;
        states.push(next);
    }
    Ok(states)
}

/// Normalized squared overlaps `(v_i^T z_t)^2` of each iterate with a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiTrace<T> {
    pub rows: Vec<Vec<T>>,
}

fn squared_overlaps<T: Scalar>(basis: &OrthonormalBasis<T>, z: &[T]) -> Result<Vec<T>> {
    let mut row: Vec<T> = basis.coefficients(z)?.into_iter().map(|c| c * c).collect();
    let total: T = row.iter().copied().sum();
    row.iter_mut().for_each(|x| *x = *x / total);
    Ok(row)
}

pub fn psi_trace<T: Scalar>(
    states: &[OjaState<T>],
    basis: &OrthonormalBasis<T>,
) -> Result<PsiTrace<T>> {
    let rows = states
        .iter()
        .map(|s| squared_overlaps(basis, s.direction.as_slice()))
        .collect::<Result<_>>()?;
    Ok(PsiTrace { rows })
}

/// Expert losses `m_t(i) = -(2 lambda_t(i) + mu lambda_t(i)^2) / 3` that make MW
/// with `eta = 3 mu` reproduce the overlap dynamics.
pub fn induced_mw_losses<T: Scalar>(
    family: &CommutingFamily<T>,
    cfg: &OjaConfig<T>,
) -> Result<Vec<LossVector<T>>> {
    if cfg.mu > T::lit(1.0 / 6.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: cfg.mu.as_f64(),
            reason: "induced losses need mu <= 1/6",
        });
    }
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    family
        .eigenvalue_rows()
        .iter()
        .map(|lam| {
            LossVector::new(
                lam.iter()
                    .map(|&l| -(two * l + cfg.mu * l * l) / three)
                    .collect(),
            )
        })
        .collect()
}

/// Runs Oja on the materialized family and MW on the induced losses, returning
/// `max_{t,i} |psi_t(i) / ||psi_t||_1 - phi_t(i) / ||phi_t||_1|` over the played rounds.
pub fn mw_equivalence_check<T: Scalar>(
    family: &CommutingFamily<T>,
    cfg: &OjaConfig<T>,
    init: &UnitVector<T>,
) -> Result<T> {
    let losses = induced_mw_losses(family, cfg)?;
    let phi1: Vec<T> = family
        .basis()
        .coefficients(init.as_slice())?
        .into_iter()
        .map(|c| c * c)
        .collect();
    if let Some(i) = phi1.iter().position(|&p| p <= T::zero()) {
        return Err(Error::Degenerate(format!(
            "initial vector is orthogonal to basis column {i}"
        )));
    }
    let mw_cfg = MwConfig::new(T::lit(3.0) * cfg.mu, family.dim())?;
    let mw = run_mw(MwState::new(phi1)?, &losses, &mw_cfg)?;

    let matrices = family.materialize_all()?;
    let states = run_oja(&matrices, cfg, init.clone())?;
    let psi = psi_trace(&states[..family.len()], family.basis())?;

    let mut worst = T::zero();
    for (row, (phi, _)) in psi.rows.iter().zip(&mw) {
        for (&a, b) in row.iter().zip(phi.distribution()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

fn check_states<T: Scalar>(states: &[OjaState<T>], rounds: usize) -> Result<()> {
    if states.len() < rounds.max(1) {
        return Err(Error::DimensionMismatch {
            expected: rounds.max(1),
            found: states.len(),
        });
    }
    Ok(())
}

/// Regret against basis column `i` for a commuting family:
///
/// `sum_t (v_i^T A_t v_i - z_t^T A_t z_t)
///   <= mu sum_t (3 |v_i^T A_t v_i| + ||A_t||^2 / 2) - ln((z_1^T v_i)^2) / (2 mu)`,
///
/// valid for `mu` in `(0, 1/6]`.
pub fn check_regret_bound_full_basis<T: Scalar>(
    family: &CommutingFamily<T>,
    states: &[OjaState<T>],
    cfg: &OjaConfig<T>,
    i: usize,
) -> Result<BoundReport<T>> {
    cfg.require_range(1.0 / 6.0, "full-basis bound needs mu in (0, 1/6]")?;
    let n = family.dim();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    check_states(states, family.len())?;
    let mu = cfg.mu;
    let half = T::lit(0.5);
    let three = T::lit(3.0);
    let mut lhs = T::zero();
    let mut penalty = T::zero();
    for (t, state) in states.iter().take(family.len()).enumerate() {
        let a = family.materialize(t)?;
        let lam = family.eigenvalues(t);
        let comparator = lam[i];
        lhs = lhs + comparator - a.quad_form(state.direction.as_slice())?;
        let norm = max_abs(lam);
        penalty = penalty + three * comparator.abs() + half * norm * norm;
    }
    let overlap = dot(family.basis().column(i), states[0].direction.as_slice());
    let rhs = mu * penalty - (overlap * overlap).ln() / (mu + mu);
    Ok(BoundReport::evaluate(lhs, rhs, T::tol(OJA_BOUND_TOL)))
}

/// Errors unless `v` is an eigenvector of every matrix, naming the first failure.
pub fn verify_common_eigenvector<T: Scalar>(
    sequence: &[SymmetricMatrix<T>],
    v: &UnitVector<T>,
) -> Result<()> {
    for (round, a) in sequence.iter().enumerate() {
        let residual = a.eigen_residual(v.as_slice())?;
        if !(residual <= T::tol(EIGENVECTOR_TOL)) {
            return Err(Error::NotEigenvector {
                round,
                residual: residual.as_f64(),
            });
        }
    }
    Ok(())
}

/// Regret against a shared unit eigenvector `v`:
///
/// `sum_t (v^T A_t v - z_t^T A_t z_t) <= (3 mu / 2) sum_t ||A_t||^2 - ln((v^T z_1)^2) / (2 mu)`,
///
/// valid for `mu` in `(0, 1/2]` when only `v` is shared across the sequence.
pub fn check_regret_bound_common_ev<T: Scalar>(
    sequence: &[SymmetricMatrix<T>],
    v: &UnitVector<T>,
    states: &[OjaState<T>],
    cfg: &OjaConfig<T>,
) -> Result<BoundReport<T>> {
    cfg.require_range(0.5, "common-eigenvector bound needs mu in (0, 1/2]")?;
    verify_common_eigenvector(sequence, v)?;
    check_states(states, sequence.len())?;
    let mu = cfg.mu;
    let mut lhs = T::zero();
    let mut norms = T::zero();
    for (index, (a, state)) in sequence.iter().zip(states).enumerate() {
        let norm = spectral_norm(a);
        if norm > T::one() + T::tol(OJA_BOUND_TOL) {
            return Err(Error::NormTooLarge {
                index,
                norm: norm.as_f64(),
            });
        }
        lhs = lhs + a.quad_form(v.as_slice())? - a.quad_form(state.direction.as_slice())?;
        norms = norms + norm * norm;
    }
    let overlap = v.dot(states[0].direction.as_slice());
    let rhs = T::lit(1.5) * mu * norms - (overlap * overlap).ln() / (mu + mu);
    Ok(BoundReport::evaluate(lhs, rhs, T::tol(OJA_BOUND_TOL)))
}

/// `mu sum_t (2 z_t^T A_t z_t + mu z_t^T A_t^2 z_t)`, an upper bound on `2 ln ||w_{T+1}||`.
pub fn potential_upper_bound<T: Scalar>(
    sequence: &[SymmetricMatrix<T>],
    states: &[OjaState<T>],
    cfg: &OjaConfig<T>,
) -> Result<T> {
    check_states(states, sequence.len())?;
    let mu = cfg.mu;
    let mut total = T::zero();
    for (a, state) in sequence.iter().zip(states) {
        let z = state.direction.as_slice();
        let az = a.matvec(z)?;
        let quad = dot(&az, z);
        let sq = dot(&az, &az);
        total = total + mu * (quad + quad + mu * sq);
    }
    Ok(total)
}

/// `ln((v^T z_1)^2) + 2 sum_t ln(1 + mu v^T A_t v)`, a lower bound on
/// `2 ln ||w_{T+1}||` when `v` is a shared eigenvector.
pub fn potential_lower_bound<T: Scalar>(
    sequence: &[SymmetricMatrix<T>],
    v: &UnitVector<T>,
    states: &[OjaState<T>],
    cfg: &OjaConfig<T>,
) -> Result<T> {
    verify_common_eigenvector(sequence, v)?;
    check_states(states, sequence.len())?;
    let overlap = v.dot(states[0].direction.as_slice());
    let mut total = (overlap * overlap).ln();
    for a in sequence {
        let gain = T::one() + cfg.mu * a.quad_form(v.as_slice())?;
        total = total + gain.ln() + gain.ln();
    }
    Ok(total)
}

/// One row of the exported learner trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OjaTraceRow<T> {
    /// 1-based round.
    pub t: usize,
    pub quadform_value: T,
    pub comparator_value: T,
    pub cumulative_regret: T,
    pub log_magnitude: T,
}

pub fn oja_trace<T: Scalar>(
    sequence: &[SymmetricMatrix<T>],
    states: &[OjaState<T>],
    comparator: &UnitVector<T>,
) -> Result<Vec<OjaTraceRow<T>>> {
    check_states(states, sequence.len())?;
    let mut regret = T::zero();
    sequence
        .iter()
        .zip(states)
        .enumerate()
        .map(|(t, (a, s))| {
            let quadform_value = a.quad_form(s.direction.as_slice())?;
            let comparator_value = a.quad_form(comparator.as_slice())?;
            regret = regret + comparator_value - quadform_value;
            Ok(OjaTraceRow {
                t: t + 1,
                quadform_value,
                comparator_value,
                cumulative_regret: regret,
                log_magnitude: s.log_magnitude,
            })
        })
        .collect()
}
