//! Critical-link fitting: first-jump records from simulated paths, a degree-1
//! interpolant through five of them, and the averaged link equation.
//!
//! For rows `(λ_i, μ_i, α_i, t_i, x_i)` the fit solves
//! `x_i = β₁λ_i + β₂μ_i + β₃α_i + β₄t_i + β₅` exactly. Substituting the sample
//! means `t̄`, `x̄` gives the link `β₁λ + β₂μ + β₃α = x̄ − β₅ − β₄t̄`.

use rayon::prelude::*;

use crate::interp::{self, Interpolant};
use crate::sde::{simulate, GridSpec, ModelKind, ModelSpec, Trajectory};
use crate::{Error, Result, Scalar, StreamKey};

/// Number of rows (and unknowns) in the degree-1, four-variable fit.
pub const LINK_ROWS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRow<T> {
    pub lambda: T,
    pub mu: T,
    pub alpha: T,
    /// First-jump time.
    pub t: T,
    /// Process value at the first jump.
    pub x: T,
}

impl<T: Scalar> SampleRow<T> {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("t", self.t),
            ("x", self.x),
        ] {
            if !v.is_finite() {
                return Err(Error::param(field, v, "finite"));
            }
        }
        if !self.alpha.is_finite() || self.alpha <= T::zero() || self.alpha > T::lit(2.0) {
            return Err(Error::param("alpha", self.alpha, "(0, 2]"));
        }
        Ok(())
    }

    fn node(&self) -> Vec<T> {
        vec![self.lambda, self.mu, self.alpha, self.t]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkEquation<T> {
    /// `(β₁, …, β₅)` for `(λ, μ, α, t, 1)`.
    pub coefficients: [T; 5],
    pub t_bar: T,
    pub x_bar: T,
    /// `x̄ − β₅ − β₄·t̄`.
    pub rhs: T,
    pub interpolant: Interpolant<T>,
}

impl<T: Scalar> LinkEquation<T> {
    pub fn recompute_rhs(&self) -> T {
        self.x_bar - self.coefficients[4] - self.coefficients[3] * self.t_bar
    }

    /// `x̄ − g(0, 0, 0, t̄)`, evaluating the fitted interpolant instead of
    /// reading the coefficients.
    pub fn rhs_by_evaluation(&self) -> T {
        self.x_bar - self.interpolant.evaluate(&[T::zero(), T::zero(), T::zero(), self.t_bar])
    }

    /// `β₁λ + β₂μ + β₃α`.
    pub fn lhs(&self, lambda: T, mu: T, alpha: T) -> T {
        self.coefficients[0] * lambda + self.coefficients[1] * mu + self.coefficients[2] * alpha
    }

    /// Human-readable `a*lambda + b*mu + c*alpha = d`, six significant digits.
    pub fn equation(&self) -> String {
        let [b1, b2, b3, ..] = self.coefficients;
        let term = |c: T, name: &str, first: bool| {
            let v = c.to_f64().unwrap_or(f64::NAN);
            match (first, v < 0.0) {
                (true, _) => format!("{}*{name}", sig6(v)),
                (false, true) => format!(" - {}*{name}", sig6(-v)),
                (false, false) => format!(" + {}*{name}", sig6(v)),
            }
        };
        format!(
            "{}{}{} = {}",
            term(b1, "lambda", true),
            term(b2, "mu", false),
            term(b3, "alpha", false),
            sig6(self.rhs.to_f64().unwrap_or(f64::NAN))
        )
    }
}

fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let decimals = (5 - v.abs().log10().floor() as i32).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Fits the link through exactly [`LINK_ROWS`] rows.
pub fn fit_link<T: Scalar>(rows: &[SampleRow<T>]) -> Result<LinkEquation<T>> {
    if rows.len() != LINK_ROWS {
        return Err(Error::DimensionMismatch {
            what: "link sample rows",
            expected: LINK_ROWS,
            found: rows.len(),
        });
    }
    for row in rows {
        row.validate()?;
    }
    let nodes: Vec<Vec<T>> = rows.iter().map(SampleRow::node).collect();
    let values: Vec<T> = rows.iter().map(|r| r.x).collect();
    let interpolant = interp::fit(&nodes, &values, 1, 4)?;

    // Graded order: [1, λ, μ, α, t].
    let a = &interpolant.coefficients;
    let coefficients = [a[1], a[2], a[3], a[4], a[0]];
    let n = T::from_usize(LINK_ROWS).unwrap();
    let t_bar = rows.iter().map(|r| r.t).sum::<T>() / n;
    let x_bar = values.iter().copied().sum::<T>() / n;
    let rhs = x_bar - coefficients[4] - coefficients[3] * t_bar;
    Ok(LinkEquation {
        coefficients,
        t_bar,
        x_bar,
        rhs,
        interpolant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstJump<T> {
    /// Grid index `k ≥ 1` of the value after the jump.
    pub index: usize,
    pub t: T,
    pub x: T,
    /// The median increment was zero, so any positive increment counted.
    pub degenerate_median: bool,
}

fn median<T: Scalar>(xs: &[T]) -> T {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or_else(|| a.is_nan().cmp(&b.is_nan())));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / T::lit(2.0)
    }
}

/// Earliest `k ≥ 1` with `|X_k − X_{k−1}| > threshold_factor × median_j |X_j − X_{j−1}|`.
///
/// Non-finite increments always qualify. When the median increment is zero,
/// the first strictly positive increment is returned with
/// `degenerate_median` set.
pub fn detect_first_jump_in<T: Scalar>(times: &[T], values: &[T], threshold_factor: T) -> Result<FirstJump<T>> {
    if values.len() < 2 {
        return Err(Error::DimensionMismatch {
            what: "path length (at least)",
            expected: 2,
            found: values.len(),
        });
    }
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch {
            what: "time count",
            expected: values.len(),
            found: times.len(),
        });
    }
    if !(threshold_factor > T::zero()) || !threshold_factor.is_finite() {
        return Err(Error::param("threshold_factor", threshold_factor, "(0, inf)"));
    }

    let increments: Vec<T> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let med = median(&increments);
    let degenerate_median = med == T::zero();
    let threshold = threshold_factor * med;

    increments
        .iter()
        .position(|&d| !d.is_finite() || d > threshold)
        .map(|k| FirstJump {
            index: k + 1,
            t: times[k + 1],
            x: values[k + 1],
            degenerate_median,
        })
        .ok_or(Error::NoJump)
}

pub fn detect_first_jump<T: Scalar>(traj: &Trajectory<T>, threshold_factor: T) -> Result<FirstJump<T>> {
    detect_first_jump_in(&traj.times, &traj.values, threshold_factor)
}

/// A parameter triple whose path produced no first jump.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion<T> {
    pub index: usize,
    pub lambda: T,
    pub mu: T,
    pub alpha: T,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectedRows<T> {
    pub rows: Vec<SampleRow<T>>,
    pub excluded: Vec<Exclusion<T>>,
}

/// Simulates one path per `(λ, μ, α)` triple and records its first jump.
///
/// Triple `i` uses child stream `i` of `stream`. Triples without a jump are
/// listed in `excluded`; invalid parameters are an error.
pub fn collect_rows<T: Scalar>(
    param_grid: &[(T, T, T)],
    kind: ModelKind,
    x0: T,
    grid: &GridSpec<T>,
    threshold_factor: T,
    stream: StreamKey,
) -> Result<CollectedRows<T>> {
    if param_grid.is_empty() {
        return Err(Error::EmptySample);
    }
    let outcomes = param_grid
        .par_iter()
        .enumerate()
        .map(|(i, &(lambda, mu, alpha))| {
            let model = ModelSpec::new(kind, lambda, mu, alpha, x0)?;
            let traj = simulate(&model, grid, stream.child(i as u64))?;
            match detect_first_jump(&traj, threshold_factor) {
                Ok(jump) => Ok(Ok(SampleRow {
                    lambda,
                    mu,
                    alpha,
                    t: jump.t,
                    x: jump.x,
                })),
                Err(Error::NoJump) => Ok(Err(Exclusion {
                    index: i,
                    lambda,
                    mu,
                    alpha,
                    reason: "no jump detected".into(),
                })),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut collected = CollectedRows {
        rows: Vec::new(),
        excluded: Vec::new(),
    };
    for outcome in outcomes {
        match outcome {
            Ok(row) => collected.rows.push(row),
            Err(ex) => collected.excluded.push(ex),
        }
    }
    Ok(collected)
}
