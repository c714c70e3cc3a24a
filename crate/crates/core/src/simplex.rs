//! Projected subgradient baseline for commuting quadratic-form problems.
//!
//! With a shared eigenbasis, `x^T A_i x = sum_j w_j Lambda[i][j]` where `w_j`
//! are the squared coordinates of `x`, so the problem reduces to minimizing
//! `h(w) = g(Lambda w)` over the probability simplex.

use crate::error::{Error, Result};
use crate::quadform::QuadFormProblem;
use crate::scalar::{dot, Scalar};

/// Euclidean projection onto `{w >= 0, sum w = 1}` by sorting.
pub fn project_simplex<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumulative = T::zero();
    let mut theta = T::zero();
    for (j, &uj) in u.iter().enumerate() {
        cumulative = cumulative + uj;
        let candidate = (cumulative - T::one()) / T::from_usize_lossy(j + 1);
        if uj - candidate > T::zero() {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(T::zero())).collect()
}

/// Largest `n` solved by the ellipsoid method under [`Method::Auto`].
pub const ELLIPSOID_MAX_DIM: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Ellipsoid up to [`ELLIPSOID_MAX_DIM`], Polyak level steps above.
    #[default]
    Auto,
    /// Central-cut ellipsoid in the `n - 1` free coordinates; stops on a
    /// certified gap.
    Ellipsoid,
    /// Projected subgradient, Polyak step toward an adaptive target level.
    PolyakLevel,
    /// Projected subgradient, `alpha_k = D / (L sqrt(k))` with `D = sqrt(2)` and
    /// `L` the largest subgradient norm seen so far.
    Diminishing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub method: Method,
    pub max_iter: usize,
    /// Subgradient methods stop once the best value improves by less than
    /// `plateau_tol * max(1, |best|)` over this many iterations.
    pub plateau_window: usize,
    pub plateau_tol: f64,
    /// Ellipsoid stops once `best - lower_bound <= gap_tol * max(1, |best|)`.
    pub gap_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            max_iter: 100_000,
            plateau_window: 1_000,
            plateau_tol: 1e-10,
            gap_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult<T> {
    /// Smallest objective seen.
    pub value: T,
    pub weights: Vec<T>,
    pub iterations: usize,
    /// Certified lower bound on the optimum, when the method provides one.
    pub lower_bound: Option<T>,
}

struct Reduced<'a, T> {
    problem: &'a QuadFormProblem<T>,
    table: &'a [Vec<T>],
}

impl<T: Scalar> Reduced<'_, T> {
    fn eval(&self, w: &[T]) -> Result<(T, Vec<T>)> {
        let y: Vec<T> = self
            .table
            .iter()
            .map(|row| dot(row, w).max(-T::one()).min(T::one()))
            .collect();
        let (value, g) = self.problem.oracle().evaluate(&y)?;
        let n = w.len();
        let s = (0..n)
            .map(|j| g.iter().zip(self.table).map(|(&gi, row)| gi * row[j]).sum())
            .collect();
        Ok((value, s))
    }
}

/// Minimum of the reduced problem.
pub fn simplex_baseline<T: Scalar>(problem: &QuadFormProblem<T>) -> Result<SimplexResult<T>> {
    simplex_baseline_with(problem, SimplexOptions::default())
}

pub fn simplex_baseline_with<T: Scalar>(
    problem: &QuadFormProblem<T>,
    opts: SimplexOptions,
) -> Result<SimplexResult<T>> {
    let table = problem.eigen_table().ok_or(Error::Unsupported(
        "simplex baseline needs the shared eigenbasis",
    ))?;
    let reduced = Reduced { problem, table };
    match opts.method {
        Method::Ellipsoid => ellipsoid(&reduced, &opts),
        Method::Auto if problem.dim() <= ELLIPSOID_MAX_DIM => ellipsoid(&reduced, &opts),
        Method::Diminishing => subgradient(&reduced, &opts, false),
        Method::Auto | Method::PolyakLevel => subgradient(&reduced, &opts, true),
    }
}

/// Feasible point `(u, 1 - sum u)`, or the normal of a violated constraint.
fn lift<T: Scalar>(u: &[f64]) -> std::result::Result<Vec<T>, Vec<f64>> {
    let d = u.len();
    if let Some(i) = u.iter().position(|&x| x < 0.0) {
        let mut a = vec![0.0; d];
        a[i] = -1.0;
        return Err(a);
    }
    let total: f64 = u.iter().sum();
    if total > 1.0 {
        return Err(vec![1.0; d]);
    }
    let mut w: Vec<T> = u.iter().map(|&x| T::lit(x)).collect();
    w.push(T::lit(1.0 - total));
    Ok(w)
}

fn ellipsoid<T: Scalar>(
    reduced: &Reduced<'_, T>,
    opts: &SimplexOptions,
) -> Result<SimplexResult<T>> {
    let n = reduced.problem.dim();
    let d = n - 1;
    let barycenter = vec![T::one() / T::from_usize_lossy(n); n];
    let (v0, _) = reduced.eval(&barycenter)?;
    let mut best = SimplexResult {
        value: v0,
        weights: barycenter,
        iterations: 0,
        lower_bound: None,
    };
    if d == 0 {
        best.lower_bound = Some(v0);
        return Ok(best);
    }
    // every vertex lies within distance 1 of the barycenter; the ellipsoid is
    // `{c + J x : |x| <= 1}`, kept in factored form
    let mut center = vec![1.0 / n as f64; d];
    let mut factor = vec![0.0; d * d];
    for i in 0..d {
        factor[i * d + i] = 1.0;
    }
    let df = d as f64;
    let expand = if d > 1 {
        (df * df / (df * df - 1.0)).sqrt()
    } else {
        0.5
    };
    let gamma = 1.0 - (1.0 - 2.0 / (df + 1.0)).sqrt();
    let mut lower = f64::NEG_INFINITY;
    for k in 1..=opts.max_iter {
        best.iterations = k;
        let normal = match lift::<T>(&center) {
            Ok(w) => {
                let (value, s) = reduced.eval(&w)?;
                if value < best.value {
                    best.value = value;
                    best.weights = w;
                }
                let last = s[d].as_f64();
                let g: Vec<f64> = s[..d].iter().map(|x| x.as_f64() - last).collect();
                if g.iter().all(|&x| x == 0.0) {
                    lower = value.as_f64();
                    break;
                }
                lower = lower.max(value.as_f64() - norm(&transpose_mul(&factor, &g)));
                g
            }
            Err(a) => a,
        };
        if best.value.as_f64() - lower <= opts.gap_tol * best.value.as_f64().abs().max(1.0) {
            break;
        }
        let mut p = transpose_mul(&factor, &normal);
        let width = norm(&p);
        if !(width > 0.0 && width.is_finite()) {
            break;
        }
        p.iter_mut().for_each(|x| *x /= width);
        let jp: Vec<f64> = factor.chunks_exact(d).map(|row| dot(row, &p)).collect();
        if d == 1 {
            center[0] -= 0.5 * jp[0];
            factor[0] *= expand;
            continue;
        }
        for (c, v) in center.iter_mut().zip(&jp) {
            *c -= v / (df + 1.0);
        }
        for i in 0..d {
            for j in 0..d {
                let f = &mut factor[i * d + j];
                *f = expand * (*f - gamma * jp[i] * p[j]);
            }
        }
    }
    best.lower_bound = lower.is_finite().then(|| T::lit(lower));
    Ok(best)
}

/// `J^T x` for row-major square `J`.
fn transpose_mul(j: &[f64], x: &[f64]) -> Vec<f64> {
    let d = x.len();
    let mut out = vec![0.0; d];
    for (row, &xi) in j.chunks_exact(d).zip(x) {
        for (o, &r) in out.iter_mut().zip(row) {
            *o += r * xi;
        }
    }
    out
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn subgradient<T: Scalar>(
    reduced: &Reduced<'_, T>,
    opts: &SimplexOptions,
    polyak: bool,
) -> Result<SimplexResult<T>> {
    let n = reduced.problem.dim();
    let mut w = vec![T::one() / T::from_usize_lossy(n); n];
    let (mut value, mut s) = reduced.eval(&w)?;
    let mut best = SimplexResult {
        value,
        weights: w.clone(),
        iterations: 0,
        lower_bound: None,
    };
    let mut delta = T::lit(0.05) * value.abs().max(T::one());
    let delta_min = T::lit(1e-14);
    let mut lipschitz = T::zero();
    let mut window_start = best.value;
    let tol = T::lit(opts.plateau_tol);

    for k in 1..=opts.max_iter {
        let sq: T = s.iter().map(|&x| x * x).sum();
        if sq == T::zero() {
            best.lower_bound = Some(value);
            return Ok(best);
        }
        let alpha = if polyak {
            (value - (best.value - delta)) / sq
        } else {
            lipschitz = lipschitz.max(sq.sqrt());
            T::lit(2f64.sqrt()) / (lipschitz * T::from_usize_lossy(k).sqrt())
        };
        let stepped: Vec<T> = w.iter().zip(&s).map(|(&wi, &si)| wi - alpha * si).collect();
        w = project_simplex(&stepped);
        let (v, g) = reduced.eval(&w)?;
        value = v;
        s = g;
        if polyak {
            let floor = delta_min * best.value.abs().max(T::one());
            delta = if value < best.value {
                delta * T::lit(1.5)
            } else {
                (delta * T::lit(0.5)).max(floor)
            };
        }
        if value < best.value {
            best.value = value;
            best.weights.clone_from(&w);
        }
        best.iterations = k;
        if k % opts.plateau_window == 0 {
            if window_start - best.value < tol * best.value.abs().max(T::one()) {
                break;
            }
            window_start = best.value;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CommutingFamily, OrthonormalBasis};
    use crate::quadform::GFunction;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn projection_examples() {
        assert_eq!(project_simplex(&[0.3, 0.7]), vec![0.3, 0.7]);
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[1.0f64, 1.0, 1.0]);
        assert!(p.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        let p = project_simplex(&[-5.0f64, 0.2, 0.1]);
        assert_eq!(p[0], 0.0);
        assert!((p[1] - 0.55).abs() < 1e-15 && (p[2] - 0.45).abs() < 1e-15);
    }

    #[test]
    fn projection_is_nearest_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let v: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
            let p = project_simplex(&v);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|&x| x >= 0.0));
            // optimality: (v - p)^T (q - p) <= 0 for every vertex q
            for q in 0..5 {
                let inner: f64 = (0..5)
                    .map(|j| (v[j] - p[j]) * (if j == q { 1.0 } else { 0.0 } - p[j]))
                    .sum();
                assert!(inner <= 1e-12);
            }
        }
    }

    fn problem(rows: Vec<Vec<f64>>, g: GFunction<f64>, lipschitz: f64) -> QuadFormProblem<f64> {
        let n = rows[0].len();
        let fam = CommutingFamily::new(OrthonormalBasis::identity(n), rows).unwrap();
        QuadFormProblem::from_family(&fam, Box::new(g), lipschitz).unwrap()
    }

    #[test]
    fn remark_instance_is_half_at_start() {
        let p = problem(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            GFunction::Max { arity: 2 },
            1.0,
        );
        let r = simplex_baseline(&p).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn linear_objective_reaches_vertex() {
        let p = problem(vec![vec![0.3, -0.9, 0.6, 0.1]], GFunction::NegIdentity, 1.0);
        let r = simplex_baseline(&p).unwrap();
        assert!((r.value + 0.6).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn planted_l1_reaches_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..6).map(|_| rng.random_range(-1.0..=1.0)).collect())
            .collect();
        let w_star = project_simplex(&[0.4, 0.1, 0.0, 0.3, 0.2, 0.0]);
        let targets: Vec<f64> = rows.iter().map(|r| dot(r, &w_star)).collect();
        let p = problem(rows, GFunction::L1System { targets }, 3.0);
        let r = simplex_baseline(&p).unwrap();
        assert!(
            r.value < 1e-8,
            "{:?}",
            (r.value, r.iterations, r.lower_bound)
        );
    }

    #[test]
    fn every_method_makes_progress() {
        let p = problem(vec![vec![0.3, -0.9, 0.6, 0.1]], GFunction::NegIdentity, 1.0);
        for method in [Method::Ellipsoid, Method::PolyakLevel, Method::Diminishing] {
            let opts = SimplexOptions {
                method,
                ..SimplexOptions::default()
            };
            let r = simplex_baseline_with(&p, opts).unwrap();
            assert!(r.value < -0.59, "{method:?}: {}", r.value);
        }
    }

    #[test]
    fn ellipsoid_certifies_its_gap() {
        let p = problem(
            vec![vec![1.0, 0.0, 0.2], vec![0.0, 1.0, 0.2]],
            GFunction::Max { arity: 2 },
            1.0,
        );
        let r = simplex_baseline(&p).unwrap();
        assert!((r.value - 0.2).abs() < 1e-9, "{}", r.value);
        let lb = r.lower_bound.unwrap();
        assert!(lb <= r.value && r.value - lb <= 1e-9);
    }

    #[test]
    fn two_point_simplex_bisects() {
        let p = problem(
            vec![vec![0.8, -0.4]],
            GFunction::Square { target: 0.1 },
            3.6,
        );
        let r = simplex_baseline(&p).unwrap();
        assert!(r.value < 1e-9);
        assert!((r.weights[0] - 0.5 / 1.2).abs() < 1e-4);
    }

    #[test]
    fn needs_eigen_table() {
        let a = crate::linalg::SymmetricMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let p =
            QuadFormProblem::from_matrices(vec![a], Box::new(GFunction::NegIdentity), 1.0).unwrap();
        assert!(matches!(simplex_baseline(&p), Err(Error::Unsupported(_))));
    }
}
