//! Multiplicative weights for prediction with expert advice.

use crate::bound::BoundReport;
use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

/// Absolute slack for the regret inequality.
pub const MW_BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwConfig<T> {
    eta: T,
    experts: usize,
}

impl<T: Scalar> MwConfig<T> {
    pub fn new(eta: T, experts: usize) -> Result<Self> {
        if experts == 0 {
            return Err(Error::EmptyDimension);
        }
        if !(eta >= T::zero() && eta <= T::lit(0.5)) {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: eta.as_f64(),
                reason: "learning rate must lie in [0, 1/2]",
            });
        }
        Ok(Self { eta, experts })
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn experts(&self) -> usize {
        self.experts
    }
}

/// Per-expert losses, each in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossVector<T>(Vec<T>);

impl<T: Scalar> LossVector<T> {
    pub fn new(losses: Vec<T>) -> Result<Self> {
        if losses.is_empty() {
            return Err(Error::EmptyDimension);
        }
        for &m in &losses {
            if !m.is_finite() {
                return Err(Error::NonFinite("loss vector"));
            }
            if m.abs() > T::one() {
                return Err(Error::InvalidParameter {
                    name: "loss",
                    value: m.as_f64(),
                    reason: "losses must lie in [-1, 1]",
                });
            }
        }
        Ok(Self(losses))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Strictly positive expert weights after `round` updates.
#[derive(Debug, Clone, PartialEq)]
pub struct MwState<T> {
    weights: Vec<T>,
    round: usize,
}

impl<T: Scalar> MwState<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyDimension);
        }
        for &w in &weights {
            if !w.is_finite() {
                return Err(Error::NonFinite("weights"));
            }
            if w <= T::zero() {
                return Err(Error::InvalidParameter {
                    name: "weight",
                    value: w.as_f64(),
                    reason: "initial weights must be strictly positive",
                });
            }
        }
        Ok(Self { weights, round: 0 })
    }

    /// All-ones initial weights.
    pub fn uniform(experts: usize) -> Result<Self> {
        Self::new(vec![T::one(); experts])
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// `phi / ||phi||_1`.
    pub fn distribution(&self) -> Vec<T> {
        let total = self.total_weight();
        self.weights.iter().map(|&w| w / total).collect()
    }

    /// `phi'(i) = phi(i) * (1 - eta * m(i))`.
    pub fn step(&self, loss: &LossVector<T>, cfg: &MwConfig<T>) -> Result<Self> {
        let n = self.weights.len();
        for len in [loss.len(), cfg.experts] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        let weights = self
            .weights
            .iter()
            .zip(loss.as_slice())
            .map(|(&w, &m)| w * (T::one() - cfg.eta * m))
            .collect();
        Ok(Self {
            weights,
            round: self.round + 1,
        })
    }
}

pub fn mw_step<T: Scalar>(
    state: &MwState<T>,
    loss: &LossVector<T>,
    cfg: &MwConfig<T>,
) -> Result<MwState<T>> {
    state.step(loss, cfg)
}

pub fn mw_distribution<T: Scalar>(state: &MwState<T>) -> Vec<T> {
    state.distribution()
}

/// Runs MW over `losses`, pairing each played state with the loss it faced.
pub fn run_mw<T: Scalar>(
    init: MwState<T>,
    losses: &[LossVector<T>],
    cfg: &MwConfig<T>,
) -> Result<Vec<(MwState<T>, LossVector<T>)>> {
    let mut out = Vec::with_capacity(losses.len());
    let mut state = init;
    for loss in losses {
        let next = state.step(loss, cfg)?;
        out.push((state, loss.clone()));
        state = next;
    }
    Ok(out)
}

/// Checks
/// `sum_t (p_t^T m_t - m_t(i)) <= eta * sum_t |m_t(i)| + ln(||phi_1||_1 / phi_1(i)) / eta`
/// along a recorded trajectory, where `p_t` is the normalized play.
pub fn check_mw_regret_bound<T: Scalar>(
    trajectory: &[(MwState<T>, LossVector<T>)],
    cfg: &MwConfig<T>,
    expert: usize,
) -> Result<BoundReport<T>> {
    let n = cfg.experts;
    if expert >= n {
        return Err(Error::IndexOutOfRange {
            index: expert,
            len: n,
        });
    }
    let mut lhs = T::zero();
    let mut abs_loss = T::zero();
    for (state, loss) in trajectory {
        if state.weights.len() != n || loss.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: loss.len().min(state.weights.len()),
            });
        }
        let m = loss.as_slice();
        lhs = lhs + dot(&state.distribution(), m) - m[expert];
        abs_loss = abs_loss + m[expert].abs();
    }
    let rhs = match trajectory.first() {
        _ if cfg.eta == T::zero() => T::infinity(),
        None => T::zero(),
        Some((first, _)) => {
            let phi = first.weights();
            cfg.eta * abs_loss + (first.total_weight() / phi[expert]).ln() / cfg.eta
        }
    };
    Ok(BoundReport::evaluate(lhs, rhs, T::tol(MW_BOUND_TOL)))
}

/// One row of the exported MW trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwTraceRow<T> {
    /// 1-based round.
    pub t: usize,
    /// Expected loss `p_t^T m_t` of the round.
    pub play_loss: T,
    /// Smallest cumulative expert loss so far.
    pub best_expert_loss_to_date: T,
    /// Cumulative expected loss minus `best_expert_loss_to_date`.
    pub regret: T,
    /// Regret bound evaluated at the current best expert.
    pub bound_rhs: T,
}

pub fn mw_trace<T: Scalar>(
    trajectory: &[(MwState<T>, LossVector<T>)],
    cfg: &MwConfig<T>,
) -> Vec<MwTraceRow<T>> {
    let Some((first, _)) = trajectory.first() else {
        return Vec::new();
    };
    let n = cfg.experts;
    let phi1 = first.weights().to_vec();
    let total1 = first.total_weight();
    let mut cum = vec![T::zero(); n];
    let mut cum_abs = vec![T::zero(); n];
    let mut play_total = T::zero();
    let mut rows = Vec::with_capacity(trajectory.len());
    for (t, (state, loss)) in trajectory.iter().enumerate() {
        let m = loss.as_slice();
        let play_loss = dot(&state.distribution(), m);
        play_total = play_total + play_loss;
        for i in 0..n {
            cum[i] = cum[i] + m[i];
            cum_abs[i] = cum_abs[i] + m[i].abs();
        }
        let best = (0..n)
            .min_by(|&a, &b| cum[a].partial_cmp(&cum[b]).expect("finite losses"))
            .expect("at least one expert");
        let bound_rhs = if cfg.eta == T::zero() {
            T::infinity()
        } else {
            cfg.eta * cum_abs[best] + (total1 / phi1[best]).ln() / cfg.eta
        };
        rows.push(MwTraceRow {
            t: t + 1,
            play_loss,
            best_expert_loss_to_date: cum[best],
            regret: play_total - cum[best],
            bound_rhs,
        });
    }
    rows
}
