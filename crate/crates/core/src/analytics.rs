//! Closed-form outage probability, Jensen upper bounds on ergodic capacity,
//! and energy efficiency.
//!
//! Every outage expression maps a decoding threshold onto a threshold on the
//! aggregate amplitude `V` and evaluates the Gaussian CDF of `V` there. The
//! capacity bounds replace `V^2` with its exact second moment.

use crate::error::{Error, Result};
use crate::fading::{aggregate_stats, v_cdf, AggregateStats};
use crate::linkmodel::{link_budget, LinkBudget, Scheme, SystemConfig, User};
use crate::numerics::{db_to_linear, dbm_to_watts};

/// Linear decoding thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// SINR needed by the reflection-zone user to cancel the other message.
    pub gamma_sic: f64,
    pub gamma_r_noma: f64,
    pub gamma_t_noma: f64,
    /// SNR threshold of both OMA users.
    pub gamma_oma: f64,
}

impl Default for Thresholds {
    /// 0 dB everywhere.
    fn default() -> Self {
        Self::uniform(1.0)
    }
}

impl Thresholds {
    pub fn uniform(linear: f64) -> Self {
        Self {
            gamma_sic: linear,
            gamma_r_noma: linear,
            gamma_t_noma: linear,
            gamma_oma: linear,
        }
    }

    /// From `[sic, r_noma, t_noma, oma]` in dB.
    pub fn from_db(db: [f64; 4]) -> Result<Self> {
        let th = Self {
            gamma_sic: db_to_linear(db[0]),
            gamma_r_noma: db_to_linear(db[1]),
            gamma_t_noma: db_to_linear(db[2]),
            gamma_oma: db_to_linear(db[3]),
        };
        th.validate()?;
        Ok(th)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_sic", self.gamma_sic),
            ("gamma_r_noma", self.gamma_r_noma),
            ("gamma_t_noma", self.gamma_t_noma),
            ("gamma_oma", self.gamma_oma),
        ] {
            if v.is_nan() || v <= 0.0 {
                return Err(Error::domain(format!(
                    "threshold {name} must be > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Closed-form outage probabilities for both schemes and users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageReport {
    pub p_out_t_noma: f64,
    pub p_out_r_noma: f64,
    pub p_out_r_oma: f64,
    pub p_out_t_oma: f64,
    /// `p_t > gamma_t_noma * p_r`; otherwise the refraction user is always in outage.
    pub t_noma_feasible: bool,
    /// `p_t > gamma_sic * p_r`; otherwise SIC always fails.
    pub r_noma_feasible: bool,
}

impl OutageReport {
    pub fn get(&self, scheme: Scheme, user: User) -> f64 {
        match (scheme, user) {
            (Scheme::Noma, User::R) => self.p_out_r_noma,
            (Scheme::Noma, User::T) => self.p_out_t_noma,
            (Scheme::Oma, User::R) => self.p_out_r_oma,
            (Scheme::Oma, User::T) => self.p_out_t_oma,
        }
    }
}

/// Ergodic-capacity upper bounds (bits/s/Hz) and the energy efficiency they
/// imply (bits/s/Hz/W).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityReport {
    pub ec_r_noma: f64,
    pub ec_t_noma: f64,
    pub ec_r_oma: f64,
    pub ec_t_oma: f64,
    pub ee_noma: f64,
    pub ee_oma: f64,
}

impl CapacityReport {
    pub fn ec(&self, scheme: Scheme, user: User) -> f64 {
        match (scheme, user) {
            (Scheme::Noma, User::R) => self.ec_r_noma,
            (Scheme::Noma, User::T) => self.ec_t_noma,
            (Scheme::Oma, User::R) => self.ec_r_oma,
            (Scheme::Oma, User::T) => self.ec_t_oma,
        }
    }

    pub fn ee(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Noma => self.ee_noma,
            Scheme::Oma => self.ee_oma,
        }
    }
}

fn stats(cfg: &SystemConfig) -> Result<AggregateStats> {
    aggregate_stats(cfg.fading, cfg.surfaces.n1, cfg.surfaces.n2)
}

/// Amplitude threshold below which an interference-limited SINR
/// `gain * share * v^2 / (gain * interference * v^2 + 1)` stays at or under
/// `gamma`. `None` when the SINR ceiling `share / interference` does not
/// exceed `gamma`, i.e. outage is certain.
fn interference_limited_threshold(
    gamma: f64,
    gain: f64,
    share: f64,
    interference: f64,
) -> Option<f64> {
    let margin = share - interference * gamma;
    (margin > 0.0).then(|| (gamma / (gain * margin)).sqrt())
}

fn snr_threshold(gamma: f64, gain: f64) -> f64 {
    (gamma / gain).sqrt()
}

/// Amplitude thresholds for the three NOMA decoding events:
/// `(sic, r_own, t)`. A `None` entry marks an infeasible power split.
pub(crate) fn noma_amplitude_thresholds(
    b: &LinkBudget,
    th: &Thresholds,
) -> (Option<f64>, f64, Option<f64>) {
    (
        interference_limited_threshold(th.gamma_sic, b.gain_r, b.p_t, b.p_r),
        snr_threshold(th.gamma_r_noma, b.gain_r * b.p_r),
        interference_limited_threshold(th.gamma_t_noma, b.gain_t, b.p_t, b.p_r),
    )
}

/// Outage probability of the refraction-zone NOMA user.
pub fn outage_noma_t(cfg: &SystemConfig, th: &Thresholds) -> Result<f64> {
    let s = stats(cfg)?;
    let b = link_budget(cfg);
    let (_, _, t) = noma_amplitude_thresholds(&b, th);
    Ok(t.map_or(1.0, |v| v_cdf(v, &s)))
}

/// Outage probability of the reflection-zone NOMA user, as the product of
/// the SIC-failure and own-decoding-failure probabilities.
pub fn outage_noma_r(cfg: &SystemConfig, th: &Thresholds) -> Result<f64> {
    let s = stats(cfg)?;
    let b = link_budget(cfg);
    let (sic, own, _) = noma_amplitude_thresholds(&b, th);
    Ok(match sic {
        None => 1.0,
        Some(sic) => v_cdf(sic, &s) * v_cdf(own, &s),
    })
}

/// Outage probability of an OMA user.
pub fn outage_oma(cfg: &SystemConfig, th: &Thresholds, user: User) -> Result<f64> {
    let s = stats(cfg)?;
    let b = link_budget(cfg);
    Ok(v_cdf(snr_threshold(th.gamma_oma, b.gain(user)), &s))
}

pub fn outage_report(cfg: &SystemConfig, th: &Thresholds) -> Result<OutageReport> {
    let b = link_budget(cfg);
    let (sic, _, t) = noma_amplitude_thresholds(&b, th);
    Ok(OutageReport {
        p_out_t_noma: outage_noma_t(cfg, th)?,
        p_out_r_noma: outage_noma_r(cfg, th)?,
        p_out_r_oma: outage_oma(cfg, th, User::R)?,
        p_out_t_oma: outage_oma(cfg, th, User::T)?,
        t_noma_feasible: t.is_some(),
        r_noma_feasible: sic.is_some(),
    })
}

/// `log2(1 + snr)` with the mean SNR substituted for the random one.
pub(crate) fn jensen_snr_bound(mean_snr: f64) -> f64 {
    (1.0 + mean_snr).log2()
}

/// `log2(1 + a p_t / (a p_r + 1))` with `a = gain * E[V^2]`.
pub(crate) fn jensen_sinr_bound(a: f64, p_t: f64, p_r: f64) -> f64 {
    (1.0 + p_t * a / (p_r * a + 1.0)).log2()
}

pub fn ec_upper_noma_r(cfg: &SystemConfig) -> Result<f64> {
    let s = stats(cfg)?;
    let b = link_budget(cfg);
    Ok(jensen_snr_bound(b.gain_r * b.p_r * s.second_moment))
}

pub fn ec_upper_noma_t(cfg: &SystemConfig) -> Result<f64> {
    let s = stats(cfg)?;
    let b = link_budget(cfg);
    Ok(jensen_sinr_bound(b.gain_t * s.second_moment, b.p_t, b.p_r))
}

/// OMA bound, scaled by `oma_resource_fraction`.
pub fn ec_upper_oma(cfg: &SystemConfig, user: User) -> Result<f64> {
    let s = stats(cfg)?;
    let b = link_budget(cfg);
    Ok(cfg.oma_resource_fraction * jensen_snr_bound(b.gain(user) * s.second_moment))
}

pub fn ec_upper(cfg: &SystemConfig, scheme: Scheme, user: User) -> Result<f64> {
    match (scheme, user) {
        (Scheme::Noma, User::R) => ec_upper_noma_r(cfg),
        (Scheme::Noma, User::T) => ec_upper_noma_t(cfg),
        (Scheme::Oma, u) => ec_upper_oma(cfg, u),
    }
}

/// Total consumed power in watts: amplifier input, per-element surface
/// consumption and receiver circuitry.
pub fn total_power_watts(cfg: &SystemConfig) -> f64 {
    let p = &cfg.power;
    dbm_to_watts(p.p_total_dbm) / p.alpha
        + cfg.surfaces.n1 as f64 * dbm_to_watts(p.p_ris_element_dbm)
        + cfg.surfaces.n2 as f64 * dbm_to_watts(p.p_star_element_dbm)
        + dbm_to_watts(p.p_circuit_t_dbm)
        + dbm_to_watts(p.p_circuit_r_dbm)
}

/// Sum capacity per watt of consumed power.
pub fn energy_efficiency(cfg: &SystemConfig, ec_t: f64, ec_r: f64) -> Result<f64> {
    if !(ec_t >= 0.0 && ec_r >= 0.0) {
        return Err(Error::domain(format!(
            "capacities must be non-negative, got ec_t = {ec_t}, ec_r = {ec_r}"
        )));
    }
    Ok((ec_t + ec_r) / total_power_watts(cfg))
}

pub fn capacity_report(cfg: &SystemConfig) -> Result<CapacityReport> {
    let ec_r_noma = ec_upper_noma_r(cfg)?;
    let ec_t_noma = ec_upper_noma_t(cfg)?;
    let ec_r_oma = ec_upper_oma(cfg, User::R)?;
    let ec_t_oma = ec_upper_oma(cfg, User::T)?;
    Ok(CapacityReport {
        ec_r_noma,
        ec_t_noma,
        ec_r_oma,
        ec_t_oma,
        ee_noma: energy_efficiency(cfg, ec_t_noma, ec_r_noma)?,
        ee_oma: energy_efficiency(cfg, ec_t_oma, ec_r_oma)?,
    })
}
