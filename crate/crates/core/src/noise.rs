//! Stable Lévy increments and the distributional tests built on them.
//!
//! An increment of the symmetric α-stable Lévy motion over a step `dt` is
//! synthesized from one standard variate through self-similarity:
//! `ΔL = scale · dt^{1/α} · S` with `S ~ S(α, 0, 1, 0)`.

use rayon::prelude::*;

use crate::rng::VariateSource;
use crate::stable::{StableParams, StableSampler};
use crate::{Error, Result, RngStream, Scalar, StreamKey};

/// Symmetric stable noise with amplitude `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec<T> {
    pub alpha: T,
    pub scale: T,
}

impl<T: Scalar> NoiseSpec<T> {
    pub fn new(alpha: T, scale: T) -> Result<Self> {
        let spec = Self { alpha, scale };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        StableParams::symmetric(self.alpha).validate()?;
        if !self.scale.is_finite() || self.scale < T::zero() {
            return Err(Error::param("scale", self.scale, "[0, inf)"));
        }
        Ok(())
    }

    /// Sampler for increments over a fixed step `dt > 0`.
    pub fn stepper(&self, dt: T) -> Result<IncrementSampler<T>> {
        self.validate()?;
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::param("dt", dt, "(0, inf)"));
        }
        Ok(IncrementSampler {
            sampler: StableSampler::new(StableParams::symmetric(self.alpha))?,
            factor: self.scale * dt.powf(self.alpha.recip()),
        })
    }
}

/// Draws increments `scale · dt^{1/α} · S` for one fixed step.
///
/// A zero amplitude returns exactly zero and consumes no draws.
#[derive(Debug, Clone, Copy)]
pub struct IncrementSampler<T> {
    sampler: StableSampler<T>,
    factor: T,
}

impl<T: Scalar> IncrementSampler<T> {
    #[inline]
    pub fn draw<S: VariateSource<T> + ?Sized>(&self, src: &mut S) -> T {
        if self.factor == T::zero() {
            return T::zero();
        }
        self.factor * self.sampler.sample(src)
    }

    pub fn is_silent(&self) -> bool {
        self.factor == T::zero()
    }
}

/// One increment of the noise over a step of length `dt`.
pub fn increment<T: Scalar>(spec: &NoiseSpec<T>, dt: T, stream: &mut RngStream) -> Result<T> {
    Ok(spec.stepper(dt)?.draw(stream))
}

/// Significance level of a KS test. Critical constants are the asymptotic
/// Kolmogorov quantiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Significance {
    FivePercent,
    OnePercent,
}

impl Significance {
    pub fn from_level(level: f64) -> Option<Self> {
        match level {
            l if l == 0.05 => Some(Self::FivePercent),
            l if l == 0.01 => Some(Self::OnePercent),
            _ => None,
        }
    }

    pub fn level(self) -> f64 {
        match self {
            Self::FivePercent => 0.05,
            Self::OnePercent => 0.01,
        }
    }

    pub fn coefficient(self) -> f64 {
        match self {
            Self::FivePercent => 1.358,
            Self::OnePercent => 1.628,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport<T> {
    /// Supremum distance between the CDFs, in [0, 1].
    pub statistic: T,
    pub critical_value: T,
    pub pass: bool,
}

impl<T: Scalar> KsReport<T> {
    fn new(statistic: T, critical_value: T) -> Self {
        Self {
            statistic,
            critical_value,
            pass: statistic < critical_value,
        }
    }
}

fn sorted<T: Scalar>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or_else(|| a.is_nan().cmp(&b.is_nan())));
    v
}

/// Two-sample Kolmogorov–Smirnov test.
///
/// Ties are handled by stepping both empirical CDFs past each pooled value
/// before comparing, so identical samples give a statistic of exactly zero.
pub fn ks_two_sample<T: Scalar>(xs: &[T], ys: &[T], significance: Significance) -> Result<KsReport<T>> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptySample);
    }
    let a = sorted(xs);
    let b = sorted(ys);
    let (n, m) = (a.len(), b.len());
    let (nf, mf) = (T::from_usize(n).unwrap(), T::from_usize(m).unwrap());

    let (mut i, mut j) = (0, 0);
    let mut d = T::zero();
    while i < n && j < m {
        let x = if a[i] <= b[j] || b[j].is_nan() { a[i] } else { b[j] };
        while i < n && !(a[i] > x) {
            i += 1;
        }
        while j < m && !(b[j] > x) {
            j += 1;
        }
        let gap = (T::from_usize(i).unwrap() / nf - T::from_usize(j).unwrap() / mf).abs();
        d = d.max(gap);
    }
    // Once one sample is exhausted its CDF is 1 and the other's only rises.
    let tail = (T::from_usize(i).unwrap() / nf - T::from_usize(j).unwrap() / mf).abs();
    d = d.max(tail);

    let crit = T::lit(significance.coefficient()) * ((nf + mf) / (nf * mf)).sqrt();
    Ok(KsReport::new(d, crit))
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_one_sample<T: Scalar, F: Fn(T) -> T>(
    xs: &[T],
    cdf: F,
    significance: Significance,
) -> Result<KsReport<T>> {
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    let a = sorted(xs);
    let nf = T::from_usize(a.len()).unwrap();
    let d = a
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let lo = T::from_usize(i).unwrap() / nf;
            let hi = T::from_usize(i + 1).unwrap() / nf;
            (hi - f).max(f - lo)
        })
        .fold(T::zero(), T::max);
    let crit = T::lit(significance.coefficient()) / nf.sqrt();
    Ok(KsReport::new(d, crit))
}

/// Endpoint at time `horizon` of a unit-amplitude noise path built from
/// `n_steps` equal increments.
fn endpoint<T: Scalar>(alpha: T, horizon: T, n_steps: usize, key: StreamKey) -> Result<T> {
    let dt = horizon / T::from_usize(n_steps).unwrap();
    let step = NoiseSpec::new(alpha, T::one())?.stepper(dt)?;
    let mut stream = key.open();
    Ok((0..n_steps).map(|_| step.draw(&mut stream)).sum())
}

/// Compares the marginal law of `L(c·t)` with that of `c^{1/α}·L(t)` by a
/// two-sample KS test at 1%.
///
/// Path `i` of the first sample uses child stream `2i` of `stream`, path `i`
/// of the second uses child `2i + 1`; paths are simulated in parallel.
pub fn self_similarity_check<T: Scalar>(
    alpha: T,
    c: T,
    t: T,
    n_paths: usize,
    n_steps: usize,
    stream: StreamKey,
) -> Result<KsReport<T>> {
    StableParams::symmetric(alpha).validate()?;
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::param("c", c, "(0, inf)"));
    }
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::param("t", t, "(0, inf)"));
    }
    if n_paths == 0 {
        return Err(Error::param("n_paths", 0u32, "[1, inf)"));
    }
    if n_steps == 0 {
        return Err(Error::param("n_steps", 0u32, "[1, inf)"));
    }

    let scale = c.powf(alpha.recip());
    let (stretched, scaled): (Vec<T>, Vec<T>) = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let a = endpoint(alpha, c * t, n_steps, stream.child(2 * i))?;
            let b = endpoint(alpha, t, n_steps, stream.child(2 * i + 1))?;
            Ok((a, scale * b))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();

    ks_two_sample(&stretched, &scaled, Significance::OnePercent)
}
