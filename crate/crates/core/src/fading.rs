//! Fisher-Snedecor F amplitude model and the Gaussian approximation of the
//! cascaded-channel sum `V = sum_k sum_l eta_{k,l}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{q_unchecked, GammaSampler};

/// Shape pair of the per-element F-distributed amplitude.
///
/// `m1` is the fading severity and `m2` the shadowing parameter. The
/// amplitude variance is finite only for `m2 > 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingParams {
    pub m1: f64,
    pub m2: f64,
}

impl Default for FadingParams {
    fn default() -> Self {
        Self { m1: 1.0, m2: 3.0 }
    }
}

impl FadingParams {
    pub fn new(m1: f64, m2: f64) -> Result<Self> {
        let p = Self { m1, m2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m1 > 0.0 && self.m1.is_finite()) {
            return Err(Error::invalid(
                "fading.m1",
                format!("must be > 0, got {}", self.m1),
            ));
        }
        if !(self.m2 > 2.0 && self.m2.is_finite()) {
            return Err(Error::invalid(
                "fading.m2",
                format!(
                    "must be > 2 for a finite amplitude variance, got {}",
                    self.m2
                ),
            ));
        }
        Ok(())
    }
}

/// Mean and variance of a single amplitude `eta_{k,l}`.
pub fn element_moments(p: FadingParams) -> Result<(f64, f64)> {
    if p.m2 <= 2.0 {
        return Err(Error::domain(format!(
            "amplitude variance undefined for m2 = {} <= 2",
            p.m2
        )));
    }
    p.validate()?;
    let FadingParams { m1, m2 } = p;
    let mean = m2 / (m2 - 1.0);
    let variance = m2 * m2 * (m1 + m2 - 1.0) / (m1 * (m2 - 1.0).powi(2) * (m2 - 2.0));
    Ok((mean, variance))
}

/// Sampler for the per-element amplitude.
///
/// Draws `eta = (m2 * G1) / (m1 * G2)` with `G1 ~ Gamma(m1, 1)` and
/// `G2 ~ Gamma(m2, 1)`, i.e. an `F(2 m1, 2 m2)` variate whose first two
/// moments match [`element_moments`].
#[derive(Debug, Clone, Copy)]
pub struct EnvelopeSampler {
    numerator: GammaSampler,
    denominator: GammaSampler,
    scale: f64,
}

impl EnvelopeSampler {
    pub fn new(p: FadingParams) -> Result<Self> {
        p.validate()?;
        Ok(Self {
            numerator: GammaSampler::new(p.m1)?,
            denominator: GammaSampler::new(p.m2)?,
            scale: p.m2 / p.m1,
        })
    }

    #[inline]
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g1 = self.numerator.sample(rng);
        let g2 = self.denominator.sample(rng);
        self.scale * g1 / g2
    }
}

/// One draw of the per-element amplitude.
pub fn sample_envelope<R: rand::Rng + ?Sized>(p: FadingParams, rng: &mut R) -> Result<f64> {
    Ok(EnvelopeSampler::new(p)?.sample(rng))
}

/// Moments of the aggregate `V` over an `n1 x n2` element grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateStats {
    pub mu_v: f64,
    pub sigma2_v: f64,
    /// `E[V^2] = mu_v^2 + sigma2_v`.
    pub second_moment: f64,
}

impl AggregateStats {
    pub fn sigma_v(&self) -> f64 {
        self.sigma2_v.sqrt()
    }
}

pub fn aggregate_stats(p: FadingParams, n1: usize, n2: usize) -> Result<AggregateStats> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::domain(format!(
            "element counts must be at least 1, got n1 = {n1}, n2 = {n2}"
        )));
    }
    let (mean, variance) = element_moments(p)?;
    let count = (n1 * n2) as f64;
    let mu_v = count * mean;
    let sigma2_v = count * variance;
    Ok(AggregateStats {
        mu_v,
        sigma2_v,
        second_moment: mu_v * mu_v + sigma2_v,
    })
}

/// Gaussian approximation of the CDF of `V`.
///
/// The argument of the Q-function is normalised by the standard deviation
/// `sqrt(sigma2_v)`. Infinite arguments map to the limits 0 and 1.
pub fn v_cdf(v: f64, s: &AggregateStats) -> f64 {
    if v == f64::INFINITY {
        return 1.0;
    }
    if v == f64::NEG_INFINITY {
        return 0.0;
    }
    1.0 - q_unchecked((v - s.mu_v) / s.sigma_v())
}

/// Gaussian approximation of the density of `V`.
pub fn v_pdf(v: f64, s: &AggregateStats) -> f64 {
    let z = (v - s.mu_v) / s.sigma_v();
    (-0.5 * z * z).exp() / (2.0 * PI * s.sigma2_v).sqrt()
}

/// Probability mass the Gaussian places on `v < 0`. Outage expressions
/// built on [`v_cdf`] are only trusted when this is below `1e-6`.
pub fn negative_mass(s: &AggregateStats) -> f64 {
    v_cdf(0.0, s)
}

/// A human-readable warning when the Gaussian approximation assigns
/// non-negligible mass to negative amplitudes.
pub fn clt_warning(s: &AggregateStats) -> Option<String> {
    let mass = negative_mass(s);
    (mass >= 1e-6).then(|| {
        format!(
            "Gaussian approximation of V puts mass {mass:.3e} on v < 0 \
             (mu_v = {}, sigma_v = {}); increase n1*n2 for reliable outage values",
            s.mu_v,
            s.sigma_v()
        )
    })
}
