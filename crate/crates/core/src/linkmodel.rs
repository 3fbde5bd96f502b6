//! Scenario configuration, LoS path loss and the instantaneous SINR/SNR maps
//! under ideal phase alignment.
//!
//! Public configuration is expressed in dB, dBm and metres; everything the
//! maps compute is linear scale.

use std::fmt;

use crate::error::{Error, Result};
use crate::fading::FadingParams;
use crate::numerics::{db_to_linear, dbm_to_watts};

/// Which short LoS hops contribute to the deterministic path-loss factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LosHops {
    /// Only the STAR-IOS to receiver hop `d_Sw`.
    #[default]
    Receiver,
    /// Product of the transmitter to RIS hop `d_sR` and the `d_Sw` hop.
    Both,
}

impl LosHops {
    pub fn as_str(&self) -> &'static str {
        match self {
            LosHops::Receiver => "receiver",
            LosHops::Both => "both",
        }
    }
}

impl std::str::FromStr for LosHops {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "receiver" => Ok(LosHops::Receiver),
            "both" => Ok(LosHops::Both),
            other => Err(format!("expected \"receiver\" or \"both\", got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Transmitter vehicle to RIS, `d_sR` (m).
    pub tx_to_ris_m: f64,
    /// STAR-IOS to refraction-zone receiver, `d_St` (m).
    pub star_to_t_m: f64,
    /// STAR-IOS to reflection-zone receiver, `d_Sr` (m).
    pub star_to_r_m: f64,
    /// RIS to STAR-IOS, `d_RS` (m).
    pub ris_to_star_m: f64,
    /// Path-loss exponent of the RIS to STAR-IOS hop.
    pub kappa: f64,
    pub los_hops: LosHops,
    /// Forces the LoS factor for both users, bypassing the distance law.
    pub d_loss_db: Option<f64>,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            tx_to_ris_m: 10.0,
            star_to_t_m: 10.0,
            star_to_r_m: 10.0,
            ris_to_star_m: 100.0,
            kappa: 4.0,
            los_hops: LosHops::Receiver,
            d_loss_db: None,
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        for (key, d) in [
            ("geometry.d_sR", self.tx_to_ris_m),
            ("geometry.d_St", self.star_to_t_m),
            ("geometry.d_Sr", self.star_to_r_m),
            ("geometry.d_RS", self.ris_to_star_m),
        ] {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::invalid(
                    key,
                    format!("distance must be > 0, got {d}"),
                ));
            }
        }
        if !(self.kappa > 2.0 && self.kappa.is_finite()) {
            return Err(Error::invalid(
                "geometry.kappa",
                format!("path-loss exponent must be > 2, got {}", self.kappa),
            ));
        }
        if let Some(db) = self.d_loss_db {
            if !db.is_finite() {
                return Err(Error::invalid("geometry.d_loss_db", "must be finite"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceConfig {
    /// RIS elements.
    pub n1: usize,
    /// STAR-IOS elements.
    pub n2: usize,
    /// Reflection amplitude coefficient.
    pub beta_r: f64,
    /// Refraction amplitude coefficient.
    pub beta_t: f64,
}

impl Default for SurfaceConfig {
    fn default() -> Self {
        Self {
            n1: 50,
            n2: 50,
            beta_r: 0.8,
            beta_t: 0.6,
        }
    }
}

impl SurfaceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n1 == 0 {
            return Err(Error::invalid(
                "surfaces.n1",
                "need at least one RIS element",
            ));
        }
        if self.n2 == 0 {
            return Err(Error::invalid(
                "surfaces.n2",
                "need at least one STAR-IOS element",
            ));
        }
        for (key, b) in [
            ("surfaces.beta_r", self.beta_r),
            ("surfaces.beta_t", self.beta_t),
        ] {
            if !(b > 0.0 && b <= 1.0) {
                return Err(Error::invalid(key, format!("must lie in (0, 1], got {b}")));
            }
        }
        let energy = self.beta_r * self.beta_r + self.beta_t * self.beta_t;
        if energy > 1.0 + 1e-12 {
            return Err(Error::invalid(
                "surfaces.beta_r",
                format!(
                    "beta_r^2 + beta_t^2 = {energy} exceeds 1 (beta_r = {}, beta_t = {})",
                    self.beta_r, self.beta_t
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    /// Total transmit power `P` (dBm).
    pub p_total_dbm: f64,
    /// Power share of the reflection-zone user.
    pub p_r: f64,
    /// Power share of the refraction-zone user.
    pub p_t: f64,
    /// Receiver noise power (dBm).
    pub noise_dbm: f64,
    /// Power-amplifier drain efficiency.
    pub alpha: f64,
    pub p_ris_element_dbm: f64,
    pub p_star_element_dbm: f64,
    pub p_circuit_t_dbm: f64,
    pub p_circuit_r_dbm: f64,
    /// Overrides the transmit SNR `P / sigma^2` (dB) in the link budget.
    /// Power consumption still uses `p_total_dbm`.
    pub mean_snr_db: Option<f64>,
}

impl Default for PowerConfig {
    fn default() -> Self {
        Self {
            p_total_dbm: 30.0,
            p_r: 0.4,
            p_t: 0.6,
            noise_dbm: -90.0,
            alpha: 1.2,
            p_ris_element_dbm: 10.0,
            p_star_element_dbm: 10.0,
            p_circuit_t_dbm: 10.0,
            p_circuit_r_dbm: 10.0,
            mean_snr_db: None,
        }
    }
}

impl PowerConfig {
    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("power.p_total_dbm", self.p_total_dbm),
            ("power.noise_dbm", self.noise_dbm),
            ("power.p_ris_element_dbm", self.p_ris_element_dbm),
            ("power.p_star_element_dbm", self.p_star_element_dbm),
            ("power.p_circuit_t_dbm", self.p_circuit_t_dbm),
            ("power.p_circuit_r_dbm", self.p_circuit_r_dbm),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(key, "must be finite"));
            }
        }
        for (key, p) in [("power.p_r", self.p_r), ("power.p_t", self.p_t)] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::invalid(
                    key,
                    format!("power share must lie in (0, 1), got {p}"),
                ));
            }
        }
        if (self.p_r + self.p_t - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "power.p_r",
                format!("p_r + p_t must equal 1, got {} + {}", self.p_r, self.p_t),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::invalid(
                "power.alpha",
                format!("must be > 0, got {}", self.alpha),
            ));
        }
        if let Some(s) = self.mean_snr_db {
            if !s.is_finite() {
                return Err(Error::invalid("power.mean_snr_db", "must be finite"));
            }
        }
        Ok(())
    }

    /// Transmit SNR `P / sigma^2`, linear.
    pub fn gamma_bar(&self) -> f64 {
        match self.mean_snr_db {
            Some(db) => db_to_linear(db),
            None => dbm_to_watts(self.p_total_dbm) / dbm_to_watts(self.noise_dbm),
        }
    }
}

/// Receiver vehicle: `R` sits in the reflection zone and performs SIC,
/// `T` in the refraction zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum User {
    R,
    T,
}

impl User {
    pub const ALL: [User; 2] = [User::R, User::T];

    pub fn as_str(&self) -> &'static str {
        match self {
            User::R => "r",
            User::T => "t",
        }
    }
}

impl fmt::Display for User {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Noma,
    Oma,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Noma, Scheme::Oma];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Noma => "noma",
            Scheme::Oma => "oma",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Full scenario description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub geometry: Geometry,
    pub surfaces: SurfaceConfig,
    pub power: PowerConfig,
    pub fading: FadingParams,
    /// Fraction of the channel resources each OMA user occupies; scales
    /// OMA ergodic capacity.
    pub oma_resource_fraction: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            geometry: Geometry::default(),
            surfaces: SurfaceConfig::default(),
            power: PowerConfig::default(),
            fading: FadingParams::default(),
            oma_resource_fraction: 0.5,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.surfaces.validate()?;
        self.power.validate()?;
        self.fading.validate()?;
        let f = self.oma_resource_fraction;
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::invalid(
                "oma_resource_fraction",
                format!("must lie in (0, 1], got {f}"),
            ));
        }
        Ok(())
    }

    /// Non-fatal conditions worth reporting to the user.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.power.p_r >= self.power.p_t {
            out.push(format!(
                "NOMA convention expects p_r < p_t, got p_r = {} and p_t = {}",
                self.power.p_r, self.power.p_t
            ));
        }
        if let Ok(stats) =
            crate::fading::aggregate_stats(self.fading, self.surfaces.n1, self.surfaces.n2)
        {
            out.extend(crate::fading::clt_warning(&stats));
        }
        out
    }

    /// Set `n1 = n2 = n`.
    pub fn with_elements(mut self, n: usize) -> Self {
        self.surfaces.n1 = n;
        self.surfaces.n2 = n;
        self
    }

    pub fn with_power_dbm(mut self, p: f64) -> Self {
        self.power.p_total_dbm = p;
        self
    }
}

/// Deterministic LoS path loss `-37.5 - 22 log10(d / 1 m)` dB, returned
/// as a linear factor.
pub fn path_loss_los(d: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("link distance must be > 0, got {d}")));
    }
    Ok(db_to_linear(path_loss_los_db(d)))
}

fn path_loss_los_db(d: f64) -> f64 {
    -37.5 - 22.0 * d.log10()
}

/// Linear-scale quantities shared by every SINR/SNR map.
///
/// `gain_w = gamma_bar * beta_w^2 * D_w * d_RS^-kappa`, excluding the NOMA
/// power split, so the instantaneous SNRs are `gain_w * (share) * v^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub gamma_bar: f64,
    pub d_loss_r: f64,
    pub d_loss_t: f64,
    pub gain_r: f64,
    pub gain_t: f64,
    pub p_r: f64,
    pub p_t: f64,
}

pub fn link_budget(cfg: &SystemConfig) -> LinkBudget {
    let g = &cfg.geometry;
    let (d_loss_r, d_loss_t) = match g.d_loss_db {
        Some(db) => (db_to_linear(db), db_to_linear(db)),
        None => {
            let hop = |d: f64| path_loss_los_db(d);
            match g.los_hops {
                LosHops::Receiver => (
                    db_to_linear(hop(g.star_to_r_m)),
                    db_to_linear(hop(g.star_to_t_m)),
                ),
                LosHops::Both => (
                    db_to_linear(hop(g.tx_to_ris_m)) * db_to_linear(hop(g.star_to_r_m)),
                    db_to_linear(hop(g.tx_to_ris_m)) * db_to_linear(hop(g.star_to_t_m)),
                ),
            }
        }
    };
    let gamma_bar = cfg.power.gamma_bar();
    let spread = g.ris_to_star_m.powf(-g.kappa);
    let s = &cfg.surfaces;
    LinkBudget {
        gamma_bar,
        d_loss_r,
        d_loss_t,
        gain_r: gamma_bar * s.beta_r * s.beta_r * d_loss_r * spread,
        gain_t: gamma_bar * s.beta_t * s.beta_t * d_loss_t * spread,
        p_r: cfg.power.p_r,
        p_t: cfg.power.p_t,
    }
}

/// `share * x / (interference * x + 1)`, with the `x -> inf` limit.
#[inline]
fn interference_limited(x: f64, share: f64, interference: f64) -> f64 {
    if x.is_infinite() {
        return share / interference;
    }
    share * x / (interference * x + 1.0)
}

impl LinkBudget {
    pub fn gain(&self, user: User) -> f64 {
        match user {
            User::R => self.gain_r,
            User::T => self.gain_t,
        }
    }

    /// SINR at the reflection-zone user while decoding the refraction-zone
    /// user's message for SIC.
    #[inline]
    pub fn sinr_sic(&self, v: f64) -> f64 {
        interference_limited(self.gain_r * v * v, self.p_t, self.p_r)
    }

    /// SNR of the reflection-zone user's own message after SIC.
    #[inline]
    pub fn snr_r_noma(&self, v: f64) -> f64 {
        self.gain_r * self.p_r * v * v
    }

    /// SINR of the refraction-zone user, treating the other message as noise.
    #[inline]
    pub fn sinr_t_noma(&self, v: f64) -> f64 {
        interference_limited(self.gain_t * v * v, self.p_t, self.p_r)
    }

    /// SNR of either user in its orthogonal slot, at full power.
    #[inline]
    pub fn snr_oma(&self, v: f64, user: User) -> f64 {
        self.gain(user) * v * v
    }

    /// Saturation level `p_t / p_r` of the interference-limited SINRs.
    pub fn sinr_ceiling(&self) -> f64 {
        self.p_t / self.p_r
    }
}
