//! Brute-force simulation of the aligned cascaded channel and empirical
//! outage, capacity and energy-efficiency estimates.
//!
//! Trial `i` draws all of its `n1 * n2` amplitudes from random stream `i` of
//! the generator keyed by the seed, so every draw of `V` depends only on
//! `(seed, i)`. Draws are collected in trial order and reduced sequentially;
//! estimates are bit-identical for any number of rayon workers.

use rayon::prelude::*;

use crate::analytics::{total_power_watts, Thresholds};
use crate::error::{Error, Result};
use crate::fading::{EnvelopeSampler, FadingParams};
use crate::linkmodel::{link_budget, LinkBudget, Scheme, SystemConfig, User};
use crate::numerics::{compensated_sum, stream_rng};

/// Two-sided 95% standard-normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Default number of Monte-Carlo trials.
pub const DEFAULT_TRIALS: usize = 100_000;

/// A Monte-Carlo point estimate with its 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: usize,
    pub seed: u64,
}

impl MetricEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    /// Wilson score interval for `successes` out of `trials`.
    pub fn proportion(successes: usize, trials: usize, seed: u64) -> Self {
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = Z_95 * Z_95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z_95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        Self {
            value: p,
            ci_low: (center - half).max(0.0).min(p),
            ci_high: (center + half).min(1.0).max(p),
            trials,
            seed,
        }
    }

    /// Sample mean with a normal-approximation interval.
    pub fn mean(samples: &[f64], seed: u64) -> Self {
        let n = samples.len();
        let mean = compensated_sum(samples.iter().copied()) / n as f64;
        let half = if n > 1 {
            let ss = compensated_sum(samples.iter().map(|x| (x - mean) * (x - mean)));
            Z_95 * (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            value: mean,
            ci_low: mean - half,
            ci_high: mean + half,
            trials: n,
            seed,
        }
    }
}

/// Simulated draws of `V = sum_k sum_l eta_{k,l}` in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct VSample {
    pub n1: usize,
    pub n2: usize,
    pub fading: FadingParams,
    pub seed: u64,
    values: Vec<f64>,
}

/// Draw `trials` realisations of `V` for the configuration's element grid
/// and fading. Runs on the current rayon pool.
pub fn simulate_v(cfg: &SystemConfig, trials: usize, seed: u64) -> Result<VSample> {
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    let (n1, n2) = (cfg.surfaces.n1, cfg.surfaces.n2);
    if n1 == 0 || n2 == 0 {
        return Err(Error::domain("element counts must be at least 1"));
    }
    let sampler = EnvelopeSampler::new(cfg.fading)?;
    let elements = n1 * n2;
    let values = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(seed, trial);
            let mut v = 0.0;
            for _ in 0..elements {
                v += sampler.sample(&mut rng);
            }
            v
        })
        .collect();
    Ok(VSample {
        n1,
        n2,
        fading: cfg.fading,
        seed,
        values,
    })
}

/// Empirical frequencies of the two NOMA reflection-user failure events and
/// of their union, all from the same draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NomaRBreakdown {
    pub sic_failure: MetricEstimate,
    pub own_failure: MetricEstimate,
    /// SIC fails or the own message fails.
    pub joint: MetricEstimate,
}

impl NomaRBreakdown {
    /// Product of the two marginal frequencies, the empirical counterpart of
    /// the factorised closed form.
    pub fn marginal_product(&self) -> f64 {
        self.sic_failure.value * self.own_failure.value
    }
}

impl VSample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn trials(&self) -> usize {
        self.values.len()
    }

    fn check(&self, cfg: &SystemConfig) -> Result<LinkBudget> {
        if cfg.surfaces.n1 != self.n1 || cfg.surfaces.n2 != self.n2 || cfg.fading != self.fading {
            return Err(Error::domain(
                "configuration does not match the element grid or fading of this sample",
            ));
        }
        Ok(link_budget(cfg))
    }

    fn proportion(&self, event: impl Fn(f64) -> bool + Sync) -> MetricEstimate {
        let hits = self.values.iter().filter(|&&v| event(v)).count();
        MetricEstimate::proportion(hits, self.values.len(), self.seed)
    }

    /// Fraction of draws in outage for one scheme and user.
    pub fn outage(
        &self,
        cfg: &SystemConfig,
        th: &Thresholds,
        scheme: Scheme,
        user: User,
    ) -> Result<MetricEstimate> {
        let b = self.check(cfg)?;
        Ok(match (scheme, user) {
            (Scheme::Noma, User::T) => self.proportion(|v| b.sinr_t_noma(v) <= th.gamma_t_noma),
            (Scheme::Noma, User::R) => self.proportion(|v| {
                b.sinr_sic(v) <= th.gamma_sic || b.snr_r_noma(v) <= th.gamma_r_noma
            }),
            (Scheme::Oma, u) => self.proportion(|v| b.snr_oma(v, u) <= th.gamma_oma),
        })
    }

    pub fn noma_r_breakdown(&self, cfg: &SystemConfig, th: &Thresholds) -> Result<NomaRBreakdown> {
        let b = self.check(cfg)?;
        Ok(NomaRBreakdown {
            sic_failure: self.proportion(|v| b.sinr_sic(v) <= th.gamma_sic),
            own_failure: self.proportion(|v| b.snr_r_noma(v) <= th.gamma_r_noma),
            joint: self.outage(cfg, th, Scheme::Noma, User::R)?,
        })
    }

    fn per_trial_capacity(
        &self,
        b: &LinkBudget,
        cfg: &SystemConfig,
        scheme: Scheme,
        user: User,
    ) -> Vec<f64> {
        let f = cfg.oma_resource_fraction;
        self.values
            .iter()
            .map(|&v| match (scheme, user) {
                (Scheme::Noma, User::R) => b.snr_r_noma(v).ln_1p(),
                (Scheme::Noma, User::T) => b.sinr_t_noma(v).ln_1p(),
                (Scheme::Oma, u) => f * b.snr_oma(v, u).ln_1p(),
            } / std::f64::consts::LN_2)
            .collect()
    }

    /// Sample mean of `log2(1 + SINR)`; OMA is scaled by the resource fraction.
    pub fn capacity(
        &self,
        cfg: &SystemConfig,
        scheme: Scheme,
        user: User,
    ) -> Result<MetricEstimate> {
        let b = self.check(cfg)?;
        Ok(MetricEstimate::mean(
            &self.per_trial_capacity(&b, cfg, scheme, user),
            self.seed,
        ))
    }

    /// Sum capacity per watt, from the same draws for both users.
    pub fn energy_efficiency(&self, cfg: &SystemConfig, scheme: Scheme) -> Result<MetricEstimate> {
        let b = self.check(cfg)?;
        let watts = total_power_watts(cfg);
        let r = self.per_trial_capacity(&b, cfg, scheme, User::R);
        let t = self.per_trial_capacity(&b, cfg, scheme, User::T);
        let per_trial: Vec<f64> = r.iter().zip(&t).map(|(r, t)| (r + t) / watts).collect();
        Ok(MetricEstimate::mean(&per_trial, self.seed))
    }
}

pub fn empirical_outage(
    cfg: &SystemConfig,
    th: &Thresholds,
    scheme: Scheme,
    user: User,
    trials: usize,
    seed: u64,
) -> Result<MetricEstimate> {
    simulate_v(cfg, trials, seed)?.outage(cfg, th, scheme, user)
}

pub fn empirical_capacity(
    cfg: &SystemConfig,
    scheme: Scheme,
    user: User,
    trials: usize,
    seed: u64,
) -> Result<MetricEstimate> {
    simulate_v(cfg, trials, seed)?.capacity(cfg, scheme, user)
}

pub fn empirical_ee(
    cfg: &SystemConfig,
    scheme: Scheme,
    trials: usize,
    seed: u64,
) -> Result<MetricEstimate> {
    simulate_v(cfg, trials, seed)?.energy_efficiency(cfg, scheme)
}
