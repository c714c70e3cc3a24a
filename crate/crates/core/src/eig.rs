//! Gap-free leading-eigenvalue approximation with Oja's iteration on a
//! constant matrix, plus a classical power-method baseline.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{eigendecompose, random_unit_vector, SymmetricMatrix, UnitVector};
use crate::oja::{run_oja, OjaConfig, OjaState};
use crate::scalar::Scalar;

const NORM_TOL: f64 = 1e-10;

fn check_delta<T: Scalar>(delta: T) -> Result<()> {
    if delta > T::zero() && delta < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "delta",
            value: delta.as_f64(),
            reason: "failure probability must lie in (0, 1)",
        })
    }
}

/// `ceil(x)`, except that values within a relative `1e-12` of an integer snap
/// to it, so closed forms that are integral on paper stay integral.
pub(crate) fn ceil_snapped<T: Scalar>(x: T) -> usize {
    let r = x.round();
    let v = if (x - r).abs() <= T::tol(1e-12) * x.abs().max(T::one()) {
        r
    } else {
        x.ceil()
    };
    v.to_usize().expect("finite non-negative horizon")
}

/// `ceil(3 ln(9n/delta) / epsilon^2)`: rounds needed for an `epsilon`-additive
/// estimate of the leading eigenvalue with probability `1 - delta`.
pub fn required_iterations<T: Scalar>(epsilon: T, delta: T, n: usize) -> Result<usize> {
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon.as_f64(),
            reason: "target accuracy must lie in (0, 1]",
        });
    }
    check_delta(delta)?;
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let log_term = (T::lit(9.0) * T::from_usize_lossy(n) / delta).ln();
    Ok(ceil_snapped(T::lit(3.0) * log_term / (epsilon * epsilon)))
}

/// Step size `sqrt(log_term / (3 T))`, rejected when it exceeds `1/2`.
pub(crate) fn tuned_step<T: Scalar>(log_term: T, horizon: usize) -> Result<T> {
    let min_horizon = ceil_snapped(T::lit(4.0) * log_term / T::lit(3.0)).max(1);
    if horizon == 0 {
        return Err(Error::HorizonTooSmall {
            mu: f64::INFINITY,
            min_horizon,
        });
    }
    let mu = (log_term / (T::lit(3.0) * T::from_usize_lossy(horizon))).sqrt();
    if mu > T::lit(0.5) {
        return Err(Error::HorizonTooSmall {
            mu: mu.as_f64(),
            min_horizon,
        });
    }
    Ok(mu)
}

/// `sqrt(ln(9n/delta) / (3T))`.
pub fn eigen_step_size<T: Scalar>(horizon: usize, delta: T, n: usize) -> Result<T> {
    check_delta(delta)?;
    tuned_step((T::lit(9.0) * T::from_usize_lossy(n) / delta).ln(), horizon)
}

/// `sqrt(3 ln(9n/delta) / T)`, the additive error guaranteed with probability `1 - delta`.
pub fn eigen_error_bound<T: Scalar>(horizon: usize, delta: T, n: usize) -> T {
    (T::lit(3.0) * (T::lit(9.0) * T::from_usize_lossy(n) / delta).ln()
        / T::from_usize_lossy(horizon))
    .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigRunConfig<T> {
    pub epsilon: T,
    pub delta: T,
    pub mu_override: Option<T>,
    pub horizon_override: Option<usize>,
}

impl<T: Scalar> EigRunConfig<T> {
    pub fn new(epsilon: T, delta: T) -> Self {
        Self {
            epsilon,
            delta,
            mu_override: None,
            horizon_override: None,
        }
    }

    pub fn with_mu(mut self, mu: T) -> Self {
        self.mu_override = Some(mu);
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon_override = Some(horizon);
        self
    }

    /// Resolved `(T, mu)` for an `n`-dimensional problem.
    pub fn schedule(&self, n: usize) -> Result<(usize, T)> {
        let required = required_iterations(self.epsilon, self.delta, n)?;
        let horizon = self.horizon_override.unwrap_or(required);
        let mu = match self.mu_override {
            Some(mu) => {
                OjaConfig::new(mu)?;
                mu
            }
            None => eigen_step_size(horizon, self.delta, n)?,
        };
        Ok((horizon, mu))
    }
}

/// Best iterate statistics of a leading-eigenvalue run.
#[derive(Debug, Clone, PartialEq)]
pub struct EigResult<T> {
    /// `max_t z_t^T A z_t` over the played iterates.
    pub best_value: T,
    /// 0-based round of the first maximizer.
    pub best_round: usize,
    pub lambda1_oracle: T,
    pub gap: T,
    pub iterations: usize,
    pub mu: T,
    /// `z_t^T A z_t` per round.
    pub values: Vec<T>,
}

fn summarize<T: Scalar>(values: Vec<T>, lambda1: T, mu: T) -> EigResult<T> {
    let mut best_round = 0;
    for (t, &v) in values.iter().enumerate() {
        if v > values[best_round] {
            best_round = t;
        }
    }
    let best_value = values.get(best_round).copied().unwrap_or(T::neg_infinity());
    EigResult {
        best_value,
        best_round,
        lambda1_oracle: lambda1,
        gap: lambda1 - best_value,
        iterations: values.len(),
        mu,
        values,
    }
}

fn oracle_lambda1<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<T> {
    let eig = eigendecompose(a)?;
    let norm = eig.values[0]
        .abs()
        .max(eig.values[eig.values.len() - 1].abs());
    if norm > T::one() + T::tol(NORM_TOL) {
        return Err(Error::NormTooLarge {
            index: 0,
            norm: norm.as_f64(),
        });
    }
    Ok(eig.values[0])
}

/// Runs Oja for `horizon` rounds on the constant sequence `A` from `init`.
pub fn run_eigen_oja<T: Scalar>(
    a: &SymmetricMatrix<T>,
    mu: T,
    horizon: usize,
    init: UnitVector<T>,
) -> Result<(EigResult<T>, Vec<OjaState<T>>)> {
    let lambda1 = oracle_lambda1(a)?;
    let cfg = OjaConfig::new(mu)?;
    let states = run_oja(std::iter::repeat_n(a, horizon), &cfg, init)?;
    let values = states[..horizon]
        .iter()
        .map(|s| a.quad_form(s.direction().as_slice()))
        .collect::<Result<Vec<_>>>()?;
    Ok((summarize(values, lambda1, mu), states))
}

/// Oja from a uniformly random start with the tuned step size and horizon.
/// With probability at least `1 - delta`, `gap <= epsilon`.
///
/// `A` must already satisfy `||A||_2 <= 1`; see [`crate::linalg::normalize_spectral`].
pub fn solve_leading_eigenvalue<T: Scalar, R: Rng + ?Sized>(
    a: &SymmetricMatrix<T>,
    cfg: &EigRunConfig<T>,
    rng: &mut R,
) -> Result<EigResult<T>> {
    let (horizon, mu) = cfg.schedule(a.dim())?;
    let init = random_unit_vector(a.dim(), rng)?;
    Ok(run_eigen_oja(a, mu, horizon, init)?.0)
}

/// Power iteration on the explicitly formed matrix `I + shift * A`, scoring each
/// iterate by the Rayleigh quotient of `A`. Returns the result and the iterates.
pub fn power_method_from<T: Scalar>(
    a: &SymmetricMatrix<T>,
    shift: T,
    iterations: usize,
    init: UnitVector<T>,
) -> Result<(EigResult<T>, Vec<UnitVector<T>>)> {
    if iterations == 0 {
        return Err(Error::InvalidParameter {
            name: "iterations",
            value: 0.0,
            reason: "need at least one iteration",
        });
    }
    let lambda1 = oracle_lambda1(a)?;
    let b = a.identity_plus(shift);
    let mut iterates = Vec::with_capacity(iterations);
    let mut x = init;
    for _ in 0..iterations {
        let next = UnitVector::normalize(b.matvec(x.as_slice())?)?;
        iterates.push(x);
        x = next;
    }
    let values = iterates
        .iter()
        .map(|z| a.quad_form(z.as_slice()))
        .collect::<Result<Vec<_>>>()?;
    Ok((summarize(values, lambda1, shift), iterates))
}

/// Classical power iteration on `I + A` (positive semidefinite when `||A||_2 <= 1`).
pub fn power_method_baseline<T: Scalar, R: Rng + ?Sized>(
    a: &SymmetricMatrix<T>,
    iterations: usize,
    rng: &mut R,
) -> Result<EigResult<T>> {
    let init = random_unit_vector(a.dim(), rng)?;
    Ok(power_method_from(a, T::one(), iterations, init)?.0)
}

/// Fraction of uniform random unit vectors `z` with `(z^T e_1)^2 >= delta / (9n)`.
pub fn overlap_sampler<R: Rng + ?Sized>(
    n: usize,
    delta: f64,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    check_delta(delta)?;
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: 0.0,
            reason: "need at least one trial",
        });
    }
    let threshold = delta / (9.0 * n as f64);
    let mut hits = 0usize;
    for _ in 0..trials {
        let z: UnitVector<f64> = random_unit_vector(n, rng)?;
        let c = z.as_slice()[0];
        if c * c >= threshold {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}
