//! Convex minimization of `f(x) = g(x^T A_1 x, ..., x^T A_m x)` over the unit
//! sphere by coupling Oja's iteration with subgradient steps on `g`.
//!
//! Each round queries a subgradient `g_t` of `g` at the current quadratic map
//! values and feeds `G_t = -(1/G) sum_i g_t(i) A_i` to Oja as the gain matrix.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bound::BoundReport;
use crate::eig::tuned_step;
use crate::error::{Error, Result};
use crate::linalg::{
    pairwise_commuting, spectral_norm, CommutingFamily, OrthonormalBasis, SymmetricMatrix,
    UnitVector,
};
use crate::oja::{OjaConfig, OjaState};
use crate::scalar::{dot, Scalar};

const NORM_TOL: f64 = 1e-10;
const COMMUTE_TOL: f64 = 1e-9;
const CERTIFICATE_TOL: f64 = 1e-9;
const BOX_TOL: f64 = 1e-9;
const SUBGRADIENT_TOL: f64 = 1e-9;
/// Random probes per oracle query for the subgradient spot-check.
pub const SUBGRADIENT_PROBES: usize = 32;
/// Slack of [`check_quadform_bound`].
pub const QUADFORM_BOUND_TOL: f64 = 1e-6;

/// First-order oracle for a convex `g: [-1, 1]^m -> R`.
pub trait GOracle<T>: Send + Sync {
    /// Required input length, if fixed.
    fn arity(&self) -> Option<usize>;

    /// Value and one subgradient at `y`.
    fn evaluate(&self, y: &[T]) -> Result<(T, Vec<T>)>;
}

/// The objectives shipped with the crate.
///
/// Subgradients at kinks follow fixed conventions: `sign(0) = 0`, and the
/// first maximizer wins ties.
#[derive(Debug, Clone, PartialEq)]
pub enum GFunction<T> {
    /// `g(y) = -y_1`; recovers leading-eigenvalue approximation.
    NegIdentity,
    /// `g(y) = (y_1 - b)^2`.
    Square { target: T },
    /// `g(y) = max(0, a - y_1) + max(0, y_1 - b)`.
    Interval { lower: T, upper: T },
    /// `g(y) = sum_i |y_i - b_i|`.
    L1System { targets: Vec<T> },
    /// `g(y) = max_{c in [lo, hi]} c^T y`, the support function of a box.
    PolyBox { lo: Vec<T>, hi: Vec<T> },
    /// `g(y) = max_i y_i`.
    Max { arity: usize },
}

fn sign<T: Scalar>(x: T) -> T {
    if x > T::zero() {
        T::one()
    } else if x < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

impl<T: Scalar> GFunction<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, value: T, reason| Error::InvalidParameter {
            name,
            value: value.as_f64(),
            reason,
        };
        match self {
            GFunction::NegIdentity => Ok(()),
            GFunction::Square { target } if !target.is_finite() => {
                Err(bad("b", *target, "must be finite"))
            }
            GFunction::Square { .. } => Ok(()),
            GFunction::Interval { lower, upper } => {
                if !(lower.is_finite() && upper.is_finite()) {
                    Err(bad("a", *lower, "interval ends must be finite"))
                } else if lower > upper {
                    Err(bad("a", *lower, "interval needs a <= b"))
                } else {
                    Ok(())
                }
            }
            GFunction::L1System { targets } => {
                if targets.is_empty() {
                    return Err(Error::EmptyDimension);
                }
                match targets.iter().find(|b| !b.is_finite()) {
                    Some(&b) => Err(bad("b", b, "must be finite")),
                    None => Ok(()),
                }
            }
            GFunction::PolyBox { lo, hi } => {
                if lo.is_empty() {
                    return Err(Error::EmptyDimension);
                }
                if lo.len() != hi.len() {
                    return Err(Error::DimensionMismatch {
                        expected: lo.len(),
                        found: hi.len(),
                    });
                }
                for (&l, &h) in lo.iter().zip(hi) {
                    if !(l.is_finite() && h.is_finite()) || l > h {
                        return Err(bad("lo", l, "box needs finite lo <= hi"));
                    }
                }
                Ok(())
            }
            GFunction::Max { arity: 0 } => Err(Error::EmptyDimension),
            GFunction::Max { .. } => Ok(()),
        }
    }

    /// A valid `G` for matrices with `||A_i||_2 <= 1`.
    pub fn documented_lipschitz(&self) -> T {
        match self {
            GFunction::NegIdentity | GFunction::Interval { .. } | GFunction::Max { .. } => T::one(),
            GFunction::Square { target } => T::lit(2.0) * (T::one() + target.abs()),
            GFunction::L1System { targets } => T::from_usize_lossy(targets.len()),
            GFunction::PolyBox { lo, hi } => {
                lo.iter().zip(hi).map(|(l, h)| l.abs().max(h.abs())).sum()
            }
        }
    }

    /// Maximizing coefficients `c*` of the box at `y`: `hi(i)` where `y(i) > 0`, else `lo(i)`.
    pub fn box_maximizer(lo: &[T], hi: &[T], y: &[T]) -> Vec<T> {
        lo.iter()
            .zip(hi)
            .zip(y)
            .map(|((&l, &h), &yi)| if yi > T::zero() { h } else { l })
            .collect()
    }
}

impl<T: Scalar> GOracle<T> for GFunction<T> {
    fn arity(&self) -> Option<usize> {
        match self {
            GFunction::NegIdentity | GFunction::Square { .. } | GFunction::Interval { .. } => {
                Some(1)
            }
            GFunction::L1System { targets } => Some(targets.len()),
            GFunction::PolyBox { lo, .. } => Some(lo.len()),
            GFunction::Max { arity } => Some(*arity),
        }
    }

    fn evaluate(&self, y: &[T]) -> Result<(T, Vec<T>)> {
        if let Some(m) = self.arity() {
            if y.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: y.len(),
                });
            }
        }
        if y.iter().any(|v| !(v.abs() <= T::one() + T::tol(BOX_TOL))) {
            return Err(Error::Oracle("query outside [-1, 1]^m".into()));
        }
        Ok(match self {
            GFunction::NegIdentity => (-y[0], vec![-T::one()]),
            GFunction::Square { target } => {
                let r = y[0] - *target;
                (r * r, vec![r + r])
            }
            GFunction::Interval { lower, upper } => {
                let x = y[0];
                let value = (*lower - x).max(T::zero()) + (x - *upper).max(T::zero());
                let slope = if x < *lower {
                    -T::one()
                } else if x > *upper {
                    T::one()
                } else {
                    T::zero()
                };
                (value, vec![slope])
            }
            GFunction::L1System { targets } => {
                let r: Vec<T> = y.iter().zip(targets).map(|(&a, &b)| a - b).collect();
                (
                    r.iter().map(|x| x.abs()).sum(),
                    r.into_iter().map(sign).collect(),
                )
            }
            GFunction::PolyBox { lo, hi } => {
                let c = Self::box_maximizer(lo, hi, y);
                (dot(&c, y), c)
            }
            GFunction::Max { .. } => {
                let mut k = 0;
                for (i, &v) in y.iter().enumerate() {
                    if v > y[k] {
                        k = i;
                    }
                }
                let mut g = vec![T::zero(); y.len()];
                g[k] = T::one();
                (y[k], g)
            }
        })
    }
}

/// Constructs one of the shipped oracles by name.
pub fn make_g_oracle<T: Scalar>(kind: &str, params: &[T], arity: usize) -> Result<GFunction<T>> {
    let scalar = |i: usize| {
        params
            .get(i)
            .copied()
            .ok_or_else(|| Error::Malformed(format!("{kind} needs {} parameter(s)", i + 1)))
    };
    let g = match kind {
        "neg_identity" => GFunction::NegIdentity,
        "square" => GFunction::Square { target: scalar(0)? },
        "interval" => GFunction::Interval {
            lower: scalar(0)?,
            upper: scalar(1)?,
        },
        "l1system" => GFunction::L1System {
            targets: params.to_vec(),
        },
        "polybox" => {
            if !params.len().is_multiple_of(2) {
                return Err(Error::Malformed(
                    "polybox needs lo then hi of equal length".into(),
                ));
            }
            let (lo, hi) = params.split_at(params.len() / 2);
            GFunction::PolyBox {
                lo: lo.to_vec(),
                hi: hi.to_vec(),
            }
        }
        "max" => GFunction::Max { arity },
        other => return Err(Error::Malformed(format!("unknown g kind {other:?}"))),
    };
    g.validate()?;
    Ok(g)
}

/// Spot-checks `g(z) >= g(y) + s^T (z - y)` at random `z` in `[-1, 1]^m`.
pub fn check_subgradient<T: Scalar, R: Rng + ?Sized>(
    oracle: &dyn GOracle<T>,
    y: &[T],
    value: T,
    subgradient: &[T],
    probes: usize,
    rng: &mut R,
) -> Result<()> {
    for _ in 0..probes {
        let z: Vec<T> = (0..y.len())
            .map(|_| T::lit(rng.random_range(-1.0..=1.0)))
            .collect();
        let (gz, _) = oracle.evaluate(&z)?;
        let linear = value
            + subgradient
                .iter()
                .zip(z.iter().zip(y))
                .map(|(&s, (&zi, &yi))| s * (zi - yi))
                .sum::<T>();
        if gz < linear - T::tol(SUBGRADIENT_TOL) {
            return Err(Error::Oracle(format!(
                "subgradient inequality fails by {}",
                (linear - gz).as_f64()
            )));
        }
    }
    Ok(())
}

struct EigenTable<T> {
    basis: OrthonormalBasis<T>,
    /// `rows[i][j]`: eigenvalue of `A_i` on basis column `j`.
    rows: Vec<Vec<T>>,
}

/// `min_{||x|| = 1} g(x^T A_1 x, ..., x^T A_m x)` with a first-order oracle for `g`.
pub struct QuadFormProblem<T> {
    matrices: Vec<SymmetricMatrix<T>>,
    norms: Vec<T>,
    table: Option<EigenTable<T>>,
    oracle: Box<dyn GOracle<T>>,
    lipschitz: T,
    commuting: bool,
    verify_subgradients: bool,
}

impl<T: Scalar> std::fmt::Debug for QuadFormProblem<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuadFormProblem")
            .field("n", &self.dim())
            .field("m", &self.matrices.len())
            .field("lipschitz", &self.lipschitz)
            .field("commuting", &self.commuting)
            .finish()
    }
}

impl<T: Scalar> QuadFormProblem<T> {
    /// Problem over a commuting family; the `A_i` are the family's members and
    /// the shared eigenbasis is retained for the simplex baseline.
    pub fn from_family(
        family: &CommutingFamily<T>,
        oracle: Box<dyn GOracle<T>>,
        lipschitz: T,
    ) -> Result<Self> {
        let matrices = family.materialize_all()?;
        let table = EigenTable {
            basis: family.basis().clone(),
            rows: family.eigenvalue_rows().to_vec(),
        };
        let mut p = Self::build(matrices, oracle, lipschitz)?;
        p.table = Some(table);
        p.commuting = true;
        Ok(p)
    }

    /// Problem over raw matrices; commutation is tested pairwise.
    pub fn from_matrices(
        matrices: Vec<SymmetricMatrix<T>>,
        oracle: Box<dyn GOracle<T>>,
        lipschitz: T,
    ) -> Result<Self> {
        let mut p = Self::build(matrices, oracle, lipschitz)?;
        p.commuting = pairwise_commuting(&p.matrices, T::tol(COMMUTE_TOL))?;
        Ok(p)
    }

    fn build(
        matrices: Vec<SymmetricMatrix<T>>,
        oracle: Box<dyn GOracle<T>>,
        lipschitz: T,
    ) -> Result<Self> {
        let first = matrices.first().ok_or(Error::EmptyDimension)?;
        let n = first.dim();
        if let Some(m) = oracle.arity() {
            if m != matrices.len() {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: matrices.len(),
                });
            }
        }
        if !(lipschitz > T::zero() && lipschitz.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "G",
                value: lipschitz.as_f64(),
                reason: "Lipschitz parameter must be positive and finite",
            });
        }
        let mut norms = Vec::with_capacity(matrices.len());
        for (index, a) in matrices.iter().enumerate() {
            if a.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: a.dim(),
                });
            }
            let norm = spectral_norm(a);
            if norm > T::one() + T::tol(NORM_TOL) {
                return Err(Error::NormTooLarge {
                    index,
                    norm: norm.as_f64(),
                });
            }
            norms.push(norm);
        }
        Ok(Self {
            matrices,
            norms,
            table: None,
            oracle,
            lipschitz,
            commuting: false,
            verify_subgradients: true,
        })
    }

    /// Toggles the per-query subgradient spot-check (on by default).
    pub fn with_subgradient_checks(mut self, enabled: bool) -> Self {
        self.verify_subgradients = enabled;
        self
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn matrices(&self) -> &[SymmetricMatrix<T>] {
        &self.matrices
    }

    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    pub fn is_commuting(&self) -> bool {
        self.commuting
    }

    pub fn oracle(&self) -> &dyn GOracle<T> {
        self.oracle.as_ref()
    }

    pub fn basis(&self) -> Option<&OrthonormalBasis<T>> {
        self.table.as_ref().map(|t| &t.basis)
    }

    /// `Lambda` with `Lambda[i][j]` the eigenvalue of `A_i` on basis column `j`.
    pub fn eigen_table(&self) -> Option<&[Vec<T>]> {
        self.table.as_ref().map(|t| t.rows.as_slice())
    }

    /// `(z^T A_i z)_i`.
    pub fn evaluate_map(&self, z: &UnitVector<T>) -> Result<Vec<T>> {
        self.matrices
            .iter()
            .map(|a| a.quad_form(z.as_slice()))
            .collect()
    }

    /// As [`Self::evaluate_map`], validating that `z` has unit norm.
    pub fn evaluate_map_raw(&self, z: &[T]) -> Result<Vec<T>> {
        self.evaluate_map(&UnitVector::new(z.to_vec())?)
    }

    /// `f(z) = g(A(z))`.
    pub fn objective(&self, z: &UnitVector<T>) -> Result<T> {
        Ok(self.oracle.evaluate(&self.evaluate_map(z)?)?.0)
    }

    /// Spectral norm of `sum_i c_i A_i`: exact from the eigen table when known,
    /// else the triangle bound, falling back to Jacobi when the bound exceeds one.
    fn combination_norm(&self, coeffs: &[T], combined: &SymmetricMatrix<T>) -> T {
        if let Some(table) = &self.table {
            let n = self.dim();
            return (0..n)
                .map(|j| {
                    coeffs
                        .iter()
                        .zip(&table.rows)
                        .map(|(&c, row)| c * row[j])
                        .sum::<T>()
                        .abs()
                })
                .fold(T::zero(), T::max);
        }
        let bound: T = coeffs
            .iter()
            .zip(&self.norms)
            .map(|(c, &n)| c.abs() * n)
            .sum();
        if bound <= T::one() {
            bound
        } else {
            spectral_norm(combined)
        }
    }
}

/// `G_t = -(1/G) sum_i g_t(i) A_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradCombination<T> {
    pub matrix: SymmetricMatrix<T>,
    pub coefficients: Vec<T>,
    pub spectral_norm: T,
}

/// Outcome of one round.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadStep<T> {
    pub state: OjaState<T>,
    pub combination: GradCombination<T>,
    /// `f(z_t)` at the state the round started from.
    pub objective: T,
}

pub fn quadopt_step<T: Scalar>(
    state: &OjaState<T>,
    problem: &QuadFormProblem<T>,
    cfg: &OjaConfig<T>,
) -> Result<QuadStep<T>> {
    let y = problem.evaluate_map(state.direction())?;
    let (value, grad) = problem.oracle.evaluate(&y)?;
    if !value.is_finite() || grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::Oracle(format!(
            "non-finite output at round {}",
            state.round()
        )));
    }
    if grad.len() != problem.matrices.len() {
        return Err(Error::DimensionMismatch {
            expected: problem.matrices.len(),
            found: grad.len(),
        });
    }
    if problem.verify_subgradients {
        let mut probe_rng = StdRng::seed_from_u64(0x9e37_79b9_7f4a_7c15 ^ state.round() as u64);
        check_subgradient(
            problem.oracle(),
            &y,
            value,
            &grad,
            SUBGRADIENT_PROBES,
            &mut probe_rng,
        )?;
    }
    let scale = -T::one() / problem.lipschitz;
    let coefficients: Vec<T> = grad.iter().map(|&g| scale * g).collect();
    let matrix = SymmetricMatrix::linear_combination(&coefficients, &problem.matrices)?;
    let norm = problem.combination_norm(&coefficients, &matrix);
    if norm > T::one() + T::tol(CERTIFICATE_TOL) {
        return Err(Error::LipschitzMisdeclared {
            round: state.round(),
            norm: norm.as_f64(),
        });
    }
    Ok(QuadStep {
        state: state.step(&matrix, cfg)?,
        combination: GradCombination {
            matrix,
            coefficients,
            spectral_norm: norm,
        },
        objective: value,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadOptResult<T> {
    /// `min_t f(z_t)`.
    pub best_value: T,
    /// 0-based round of the first minimizer.
    pub best_round: usize,
    pub best_direction: UnitVector<T>,
    /// `f(z_t)` per round.
    pub trajectory: Vec<T>,
    /// `G sqrt(3 ln(9 n^2 / delta) / T)`.
    pub bound_rhs: T,
    pub mu: T,
}

fn log_term<T: Scalar>(n: usize, delta: T) -> Result<T> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta.as_f64(),
            reason: "failure probability must lie in (0, 1)",
        });
    }
    let n = T::from_usize_lossy(n);
    Ok((T::lit(9.0) * n * n / delta).ln())
}

/// `sqrt(ln(9 n^2 / delta) / (3T))`, rejected above `1/2`.
pub fn quadform_step_size<T: Scalar>(horizon: usize, delta: T, n: usize) -> Result<T> {
    tuned_step(log_term(n, delta)?, horizon)
}

/// Runs the coupled iteration from `init` with an explicit step size. The
/// commuting certificate is not required here, so the result carries no
/// guarantee for non-commuting inputs.
pub fn run_quadopt<T: Scalar>(
    problem: &QuadFormProblem<T>,
    mu: T,
    horizon: usize,
    delta: T,
    init: UnitVector<T>,
) -> Result<(QuadOptResult<T>, Vec<OjaState<T>>)> {
    if init.dim() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: init.dim(),
        });
    }
    let cfg = OjaConfig::new(mu)?;
    let bound_rhs = problem.lipschitz
        * (T::lit(3.0) * log_term(problem.dim(), delta)? / T::from_usize_lossy(horizon.max(1)))
            .sqrt();
    let mut states = Vec::with_capacity(horizon + 1);
    let mut trajectory = Vec::with_capacity(horizon);
    states.push(OjaState::initial(init));
    for _ in 0..horizon {
        let step = quadopt_step(states.last().expect("non-empty"), problem, &cfg)?;
        trajectory.push(step.objective);
        states.push(step.state);
    }
    let mut best_round = 0;
    for (t, &v) in trajectory.iter().enumerate() {
        if v < trajectory[best_round] {
            best_round = t;
        }
    }
    let best_value = trajectory.get(best_round).copied().unwrap_or(T::infinity());
    Ok((
        QuadOptResult {
            best_value,
            best_round,
            best_direction: states[best_round].direction().clone(),
            trajectory,
            bound_rhs,
            mu,
        },
        states,
    ))
}

/// `T` rounds from a uniformly random start with the tuned step size. With
/// probability at least `1 - delta`, `best_value - f* <= bound_rhs`.
pub fn solve_quadform<T: Scalar, R: Rng + ?Sized>(
    problem: &QuadFormProblem<T>,
    horizon: usize,
    delta: T,
    rng: &mut R,
) -> Result<QuadOptResult<T>> {
    if !problem.commuting {
        return Err(Error::Unsupported(
            "matrices do not commute; no convergence guarantee",
        ));
    }
    let mu = quadform_step_size(horizon, delta, problem.dim())?;
    let init = crate::linalg::random_unit_vector(problem.dim(), rng)?;
    Ok(run_quadopt(problem, mu, horizon, delta, init)?.0)
}

/// `best_value - fstar <= bound_rhs + 1e-6`.
pub fn check_quadform_bound<T: Scalar>(result: &QuadOptResult<T>, fstar: T) -> BoundReport<T> {
    BoundReport::evaluate(
        result.best_value - fstar,
        result.bound_rhs,
        T::tol(QUADFORM_BOUND_TOL),
    )
}

/// Coefficients of the polynomial with the largest top eigenvalue, read off
/// the best iterate of a [`GFunction::PolyBox`] run.
pub fn recover_poly_coefficients<T: Scalar>(
    problem: &QuadFormProblem<T>,
    lo: &[T],
    hi: &[T],
    result: &QuadOptResult<T>,
) -> Result<Vec<T>> {
    let y = problem.evaluate_map(&result.best_direction)?;
    Ok(GFunction::box_maximizer(lo, hi, &y))
}

/// Matrices `I, A, A^2, ..., A^k` for the polynomial problem; `||A||_2 <= 1`
/// keeps every power inside the unit ball.
pub fn matrix_powers<T: Scalar>(
    a: &SymmetricMatrix<T>,
    degree: usize,
) -> Result<Vec<SymmetricMatrix<T>>> {
    let mut out = vec![SymmetricMatrix::identity(a.dim())];
    for _ in 0..degree {
        let prev = out.last().expect("non-empty");
        out.push(SymmetricMatrix::from_row_major(a.dim(), prev.product(a)?)?);
    }
    Ok(out)
}
