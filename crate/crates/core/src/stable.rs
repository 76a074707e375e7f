//! α-stable random variates by the Chambers–Mallows–Stuck method.
//!
//! Branch dispatch is by exact comparison on the parameters, in this order:
//!
//! | branch | condition            | draws consumed              |
//! |--------|----------------------|-----------------------------|
//! | (a)    | α = 2                | one normal                  |
//! | (b)    | α = 1, β = 0         | one uniform                 |
//! | (c)    | α = ½, \|β\| = 1     | one normal                  |
//! | (d)    | β = 0                | two uniforms (V, then W)    |
//! | (e)    | α ≠ 1                | two uniforms (V, then W)    |
//! | (f)    | α = 1, β ≠ 0         | two uniforms (V, then W)    |
//!
//! with `V = π/2·(2U − 1)` and `W = −ln U'`. The raw variate `r` is then
//! scaled and shifted: `γr + δ` for α ≠ 1 and `γr + (2/π)βγ ln γ + δ` for
//! α = 1.

use crate::rng::VariateSource;
use crate::{Error, Result, RngStream, Scalar};

/// Parameters `(α, β, γ, δ)` of a stable law: stability index, skewness,
/// scale and location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
}

impl<T: Scalar> StableParams<T> {
    pub fn new(alpha: T, beta: T, gamma: T, delta: T) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// Standard symmetric law `S(α, 0, 1, 0)`.
    pub fn symmetric(alpha: T) -> Self {
        Self::new(alpha, T::zero(), T::one(), T::zero())
    }

    /// Checks every field against its domain and reports the first violation.
    pub fn validate(&self) -> Result<()> {
        let two = T::lit(2.0);
        if !self.alpha.is_finite() || self.alpha <= T::zero() || self.alpha > two {
            return Err(Error::param("alpha", self.alpha, "(0, 2]"));
        }
        if !self.beta.is_finite() || self.beta.abs() > T::one() {
            return Err(Error::param("beta", self.beta, "[-1, 1]"));
        }
        if !self.gamma.is_finite() || self.gamma < T::zero() {
            return Err(Error::param("gamma", self.gamma, "[0, inf)"));
        }
        if !self.delta.is_finite() {
            return Err(Error::param("delta", self.delta, "(-inf, inf)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Branch<T> {
    Gaussian,
    Cauchy,
    Levy,
    Symmetric,
    Skewed { b: T, s: T },
    AlphaOne,
}

/// Validated parameters with branch constants precomputed, for drawing many
/// variates from one law.
#[derive(Debug, Clone, Copy)]
pub struct StableSampler<T> {
    params: StableParams<T>,
    branch: Branch<T>,
    inv_alpha: T,
    tail_exp: T,
    shift: T,
}

impl<T: Scalar> StableSampler<T> {
    pub fn new(params: StableParams<T>) -> Result<Self> {
        params.validate()?;
        let StableParams {
            alpha,
            beta,
            gamma,
            delta,
        } = params;
        let one = T::one();
        let half_pi = T::FRAC_PI_2();

        let branch = if alpha == T::lit(2.0) {
            Branch::Gaussian
        } else if alpha == one && beta == T::zero() {
            Branch::Cauchy
        } else if alpha == T::lit(0.5) && beta.abs() == one {
            Branch::Levy
        } else if beta == T::zero() {
            Branch::Symmetric
        } else if alpha != one {
            let c = beta * (T::PI() * alpha / T::lit(2.0)).tan();
            Branch::Skewed {
                b: c.atan(),
                s: (one + c * c).powf(one / (T::lit(2.0) * alpha)),
            }
        } else {
            Branch::AlphaOne
        };

        let shift = if alpha != one {
            delta
        } else if gamma == T::zero() {
            // γ ln γ → 0
            delta
        } else {
            beta * gamma * gamma.ln() / half_pi + delta
        };

        Ok(Self {
            params,
            branch,
            inv_alpha: one / alpha,
            tail_exp: (one - alpha) / alpha,
            shift,
        })
    }

    pub fn params(&self) -> &StableParams<T> {
        &self.params
    }

    /// Draws one variate, consuming draws from `src` per the module table.
    pub fn sample<S: VariateSource<T> + ?Sized>(&self, src: &mut S) -> T {
        self.params.gamma * self.raw(src) + self.shift
    }

    fn raw<S: VariateSource<T> + ?Sized>(&self, src: &mut S) -> T {
        let StableParams { alpha, beta, .. } = self.params;
        let one = T::one();
        let half_pi = T::FRAC_PI_2();
        let open_angle = |u: T| half_pi * (T::lit(2.0) * u - one);

        match self.branch {
            Branch::Gaussian => T::SQRT_2() * src.normal(),
            Branch::Cauchy => open_angle(src.uniform()).tan(),
            Branch::Levy => {
                let n = src.normal();
                beta / (n * n)
            }
            Branch::Symmetric => {
                let v = open_angle(src.uniform());
                let w = -src.uniform().ln();
                (alpha * v).sin() / v.cos().powf(self.inv_alpha)
                    * ((v * (one - alpha)).cos() / w).powf(self.tail_exp)
            }
            Branch::Skewed { b, s } => {
                let v = open_angle(src.uniform());
                let w = -src.uniform().ln();
                s * (alpha * v + b).sin() / v.cos().powf(self.inv_alpha)
                    * (((one - alpha) * v - b).cos() / w).powf(self.tail_exp)
            }
            Branch::AlphaOne => {
                let v = open_angle(src.uniform());
                let w = -src.uniform().ln();
                let shifted = half_pi + beta * v;
                (shifted * v.tan() - beta * ((half_pi * w * v.cos()) / shifted).ln()) / half_pi
            }
        }
    }
}

/// Draws one variate from `S(α, β, γ, δ)`.
pub fn sample<T: Scalar>(params: &StableParams<T>, stream: &mut RngStream) -> Result<T> {
    Ok(StableSampler::new(*params)?.sample(stream))
}

/// Draws `n ≥ 1` variates; element `i` equals the `i`-th of `n` successive
/// [`sample`] calls on the same stream.
pub fn sample_n<T: Scalar>(params: &StableParams<T>, stream: &mut RngStream, n: usize) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::param("n", 0u32, "[1, inf)"));
    }
    let sampler = StableSampler::new(*params)?;
    Ok((0..n).map(|_| sampler.sample(stream)).collect())
}
