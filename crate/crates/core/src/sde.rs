//! Euler–Maruyama simulation of the α-stable Ornstein–Uhlenbeck process and
//! α-stable geometric Lévy motion.
//!
//! On a uniform grid with step `dt`, and `ΔL_k = μ·dt^{1/α}·S_k`,
//! `ΔB_k = √dt·N_k`:
//!
//! ```text
//! OU:  X_{k+1} = X_k − λ X_k dt + ΔL_k
//! GLM: X_{k+1} = X_k (1 + λ dt + μ ΔB_k + ΔL_k)
//! ```
//!
//! Coefficients are evaluated at the left end of each step. Per step the OU
//! scheme consumes one stable draw; GLM consumes one normal and then one
//! stable draw (the stable draw is skipped when jumps are switched off, and
//! both are skipped when `μ = 0`).

use crate::noise::NoiseSpec;
use crate::rng::VariateSource;
use crate::{Error, Result, Scalar, StreamKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// `dX = −λX dt + μ dL`
    Ou,
    /// `dX = λX dt + μX dB + μX₋ dL`
    Glm,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ou => "ou",
            ModelKind::Glm => "glm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec<T> {
    pub kind: ModelKind,
    /// Mean-reversion rate (OU) or drift (GLM).
    pub lambda: T,
    /// Noise amplitude; multiplies both the Brownian and the jump term in GLM.
    pub mu: T,
    pub alpha: T,
    pub x0: T,
    /// When false the jump term is dropped, leaving a pure Brownian GLM or a
    /// deterministic OU.
    pub jumps: bool,
}

impl<T: Scalar> ModelSpec<T> {
    pub fn new(kind: ModelKind, lambda: T, mu: T, alpha: T, x0: T) -> Result<Self> {
        let spec = Self {
            kind,
            lambda,
            mu,
            alpha,
            x0,
            jumps: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ou(lambda: T, mu: T, alpha: T, x0: T) -> Result<Self> {
        Self::new(ModelKind::Ou, lambda, mu, alpha, x0)
    }

    pub fn glm(lambda: T, mu: T, alpha: T, x0: T) -> Result<Self> {
        Self::new(ModelKind::Glm, lambda, mu, alpha, x0)
    }

    pub fn without_jumps(mut self) -> Self {
        self.jumps = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda <= T::zero() {
            return Err(Error::param("lambda", self.lambda, "(0, inf)"));
        }
        if !self.mu.is_finite() || self.mu < T::zero() {
            return Err(Error::param("mu", self.mu, "[0, inf)"));
        }
        if !self.alpha.is_finite() || self.alpha <= T::zero() || self.alpha > T::lit(2.0) {
            return Err(Error::param("alpha", self.alpha, "(0, 2]"));
        }
        if !self.x0.is_finite() {
            return Err(Error::param("x0", self.x0, "(-inf, inf)"));
        }
        Ok(())
    }
}

/// Uniform time grid on `[0, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub t_end: T,
    pub n_steps: usize,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(t_end: T, n_steps: usize) -> Result<Self> {
        let grid = Self { t_end, n_steps };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t_end.is_finite() || self.t_end <= T::zero() {
            return Err(Error::param("t_end", self.t_end, "(0, inf)"));
        }
        if self.n_steps == 0 {
            return Err(Error::param("n_steps", 0u32, "[1, inf)"));
        }
        Ok(())
    }

    pub fn dt(&self) -> T {
        self.t_end / T::from_usize(self.n_steps).unwrap()
    }

    /// `n_steps + 1` grid times; the last is exactly `t_end`.
    pub fn times(&self) -> Vec<T> {
        let n = T::from_usize(self.n_steps).unwrap();
        (0..=self.n_steps)
            .map(|k| self.t_end * T::from_usize(k).unwrap() / n)
            .collect()
    }
}

/// One simulated sample path.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
    pub model: ModelSpec<T>,
    pub stream: StreamKey,
    /// First index whose value is not finite. Non-finite values are kept, not
    /// clipped.
    pub overflow: Option<usize>,
    /// GLM only: first step `k` whose factor `1 + λdt + μΔB + ΔL` is negative,
    /// i.e. where `X_{k+1}` may change sign.
    pub first_negative_factor: Option<usize>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn endpoint(&self) -> T {
        *self.values.last().expect("trajectory has at least x0")
    }

    pub fn is_overflowed(&self) -> bool {
        self.overflow.is_some()
    }
}

/// Simulates one path from a fresh stream opened at `stream`.
pub fn simulate<T: Scalar>(model: &ModelSpec<T>, grid: &GridSpec<T>, stream: StreamKey) -> Result<Trajectory<T>> {
    model.validate()?;
    grid.validate()?;
    let dt = grid.dt();
    let jump_scale = if model.jumps { model.mu } else { T::zero() };
    let jump = NoiseSpec::new(model.alpha, jump_scale)?.stepper(dt)?;
    let sqrt_dt = dt.sqrt();
    let mut rng = stream.open();

    let mut values = Vec::with_capacity(grid.n_steps + 1);
    values.push(model.x0);
    let mut overflow = None;
    let mut first_negative_factor = None;
    let mut x = model.x0;

    for k in 0..grid.n_steps {
        x = match model.kind {
            ModelKind::Ou => x - model.lambda * x * dt + jump.draw(&mut rng),
            ModelKind::Glm => {
                let mut factor = T::one() + model.lambda * dt;
                if model.mu > T::zero() {
                    let db: T = sqrt_dt * rng.normal();
                    factor = factor + model.mu * db + jump.draw(&mut rng);
                }
                if factor < T::zero() && first_negative_factor.is_none() {
                    first_negative_factor = Some(k);
                }
                x * factor
            }
        };
        if !x.is_finite() && overflow.is_none() {
            overflow = Some(k + 1);
        }
        values.push(x);
    }

    Ok(Trajectory {
        times: grid.times(),
        values,
        model: *model,
        stream,
        overflow,
        first_negative_factor,
    })
}

/// Noise-free OU solution `e^{−λt}·x0`.
pub fn ou_exact_deterministic<T: Scalar>(lambda: T, x0: T, t: T) -> T {
    (-lambda * t).exp() * x0
}

/// Jump-free geometric motion `x0·exp((λ − μ²/2)t + μ·B_t)` given the Brownian
/// endpoint `B_t`.
pub fn glm_exact_no_jump<T: Scalar>(lambda: T, mu: T, x0: T, t: T, brownian_endpoint: T) -> T {
    x0 * ((lambda - mu * mu / T::lit(2.0)) * t + mu * brownian_endpoint).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RngStream;

    fn key(seed: u64) -> StreamKey {
        StreamKey::new(seed, 0)
    }

    #[test]
    fn exact_ou_values() {
        assert_eq!(ou_exact_deterministic(1.0, 1.0, 0.0), 1.0);
        assert!((ou_exact_deterministic(1.0f64, 1.0, 1.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert!((ou_exact_deterministic(1000.0f64, 5.0, 0.01) - 5.0 * (-10.0f64).exp()).abs() < 1e-18);
    }

    #[test]
    fn exact_glm_values() {
        assert_eq!(glm_exact_no_jump(0.0, 0.0, 3.0, 7.0, -2.5), 3.0);
        assert!((glm_exact_no_jump(1.0f64, 0.0, 1.0, 2.0, 0.0) - 2f64.exp()).abs() < 1e-15);
        let b = 0.37;
        assert!((glm_exact_no_jump(0.0f64, 1.0, 1.0, 1.0, b) - (b - 0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(ModelSpec::ou(0.0, 1.0, 1.5, 1.0).is_err());
        assert!(ModelSpec::ou(1.0, -1.0, 1.5, 1.0).is_err());
        assert!(ModelSpec::glm(1.0, 1.0, 2.1, 1.0).is_err());
        assert!(ModelSpec::glm(1.0, 1.0, 1.0, f64::INFINITY).is_err());
        assert!(GridSpec::new(0.0, 10).is_err());
        assert!(GridSpec::new(1.0, 0).is_err());
    }

    #[test]
    fn grid_times() {
        let g = GridSpec::new(1.0f64, 3).unwrap();
        let ts = g.times();
        assert_eq!(ts.len(), 4);
        assert_eq!(ts[0], 0.0);
        assert_eq!(ts[3], 1.0);
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
        for (k, w) in ts.windows(2).enumerate() {
            assert!((w[1] - w[0] - g.dt()).abs() <= 2.0 * f64::EPSILON * (k + 1) as f64);
        }
    }

    #[test]
    fn noise_free_ou_limit() {
        let m = ModelSpec::ou(1.0, 0.0, 1.5, 1.0).unwrap();
        let traj = simulate(&m, &GridSpec::new(1.0, 1 << 14).unwrap(), key(1)).unwrap();
        assert_eq!(traj.values[0], 1.0);
        assert_eq!(traj.len(), (1 << 14) + 1);
        assert!((traj.endpoint() - (-1.0f64).exp()).abs() < 1e-3);
    }

    #[test]
    fn noise_free_glm_limit() {
        let m = ModelSpec::glm(0.5, 0.0, 1.2, 2.0).unwrap();
        let traj = simulate(&m, &GridSpec::new(1.0, 1 << 14).unwrap(), key(1)).unwrap();
        let exact = 2.0 * 0.5f64.exp();
        assert!(((traj.endpoint() - exact) / exact).abs() < 2e-3);
    }

    #[test]
    fn pure_noise_limit() {
        let m = ModelSpec::ou(1e-12f64, 1.0, 1.5, 0.3).unwrap();
        let grid = GridSpec::new(2.0, 500).unwrap();
        let traj = simulate(&m, &grid, key(4)).unwrap();
        let step = NoiseSpec::new(1.5, 1.0).unwrap().stepper(grid.dt()).unwrap();
        let mut s = RngStream::from_key(key(4));
        let mut sum = 0.0;
        let mut scale: f64 = 1.0;
        for k in 1..traj.len() {
            sum += step.draw(&mut s);
            scale = scale.max(sum.abs()).max(traj.values[k].abs());
            assert!(((traj.values[k] - 0.3) - sum).abs() <= 1e-9 * scale, "step {k}");
        }
    }

    #[test]
    fn euler_first_order() {
        let m = ModelSpec::ou(1.0f64, 0.0, 2.0, 1.0).unwrap();
        let err = |n| {
            let traj = simulate(&m, &GridSpec::new(1.0, n).unwrap(), key(0)).unwrap();
            (traj.endpoint() - ou_exact_deterministic(1.0, 1.0, 1.0)).abs()
        };
        for n in [64, 256, 1024] {
            let ratio = err(n) / err(2 * n);
            assert!((1.8..=2.2).contains(&ratio), "n={n}: {ratio}");
        }
    }

    #[test]
    fn deterministic_per_key() {
        let m = ModelSpec::glm(1.0f64, 0.8, 1.1, 1.0).unwrap();
        let g = GridSpec::new(1.0, 300).unwrap();
        let a = simulate(&m, &g, StreamKey::new(3, 9)).unwrap();
        let b = simulate(&m, &g, StreamKey::new(3, 9)).unwrap();
        let c = simulate(&m, &g, StreamKey::new(3, 10)).unwrap();
        assert_eq!(a, b);
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn glm_sign_constant_until_negative_factor() {
        let m = ModelSpec::glm(1.0f64, 2.0, 0.7, 1.0).unwrap();
        let g = GridSpec::new(1.0, 2000).unwrap();
        let mut flagged = 0;
        for seed in 0..50 {
            let traj = simulate(&m, &g, key(seed)).unwrap();
            let limit = traj.first_negative_factor.map_or(traj.len(), |k| k + 1);
            assert!(traj.values[..limit].iter().all(|&x| x > 0.0), "seed {seed}");
            if let Some(k) = traj.first_negative_factor {
                flagged += 1;
                assert!(traj.values[k + 1] <= 0.0 || traj.values[k + 1].is_nan());
            }
        }
        assert!(flagged > 0, "heavy tails at mu=2 should flip some paths");
    }

    #[test]
    fn overflow_is_flagged_not_clipped() {
        let m = ModelSpec::glm(1.0f64, 0.0, 1.5, 1e308).unwrap();
        let traj = simulate(&m, &GridSpec::new(4.0, 4).unwrap(), key(0)).unwrap();
        assert_eq!(traj.overflow, Some(1));
        assert!(traj.values[1..].iter().all(|x| x.is_infinite()));
    }

    #[test]
    fn brownian_glm_mean() {
        let m = ModelSpec::glm(0.1, 0.2, 2.0, 1.0).unwrap().without_jumps();
        let g = GridSpec::new(1.0, 64).unwrap();
        let n = 4000;
        let ends: Vec<f64> = (0..n)
            .map(|i| simulate(&m, &g, key(99).child(i)).unwrap().endpoint())
            .collect();
        let mean = ends.iter().sum::<f64>() / n as f64;
        let sd = (ends.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        let se = sd / (n as f64).sqrt();
        assert!((mean - 0.1f64.exp()).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn jump_percentile_decreases_with_alpha() {
        let dt = 0.01;
        let mut last = f64::INFINITY;
        for (i, alpha) in [0.5, 1.0, 1.5, 1.9].into_iter().enumerate() {
            let step = NoiseSpec::<f64>::new(alpha, 1.0).unwrap().stepper(dt).unwrap();
            let mut s = RngStream::new(1000 + i as u64, 0);
            let mut mags: Vec<f64> = (0..10_000).map(|_| step.draw(&mut s).abs()).collect();
            mags.sort_by(f64::total_cmp);
            let q = mags[(0.999 * mags.len() as f64) as usize - 1];
            assert!(q <= last, "alpha {alpha}: {q} > {last}");
            last = q;
        }
    }

    #[test]
    fn single_precision_paths() {
        let m = ModelSpec::<f32>::ou(1.0, 0.0, 1.5, 1.0).unwrap();
        let traj = simulate(&m, &GridSpec::new(1.0, 1024).unwrap(), key(0)).unwrap();
        assert!((traj.endpoint() - (-1.0f32).exp()).abs() < 1e-3);
    }
}
