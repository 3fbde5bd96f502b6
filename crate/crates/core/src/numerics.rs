//! Scalar special functions, decibel conversions and seeded random streams.
//!
//! The complementary error function is evaluated with a positive-term
//! power series below `|x| = 2.5` and a Lentz continued fraction above it;
//! both branches reach better than `1e-15` absolute accuracy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};

/// Random stream used throughout the crate.
///
/// ChaCha is counter based: a stream is addressed by `(seed, stream index)`
/// and every draw by its word position, so a trial can be reproduced without
/// replaying the trials that precede it.
pub type StreamRng = ChaCha8Rng;

/// Open the random stream `stream` of the generator family keyed by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SERIES_CUTOFF: f64 = 2.5;

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < SERIES_CUTOFF {
        1.0 - erf_series(x)
    } else if x < 27.3 {
        erfc_continued_fraction(x)
    } else {
        // exp(-x^2) underflows below the smallest subnormal
        0.0
    }
}

/// erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n 2^n x^(2n+1) / (1*3*...*(2n+1)).
/// Every term is positive, so there is no cancellation.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > sum * 1e-17 {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
/// evaluated with the modified Lentz algorithm.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for j in 1..500 {
        let a = 0.5 * j as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (std::f64::consts::PI.sqrt() * f)
}

/// Gaussian tail probability `Q(x) = P(Z > x)` for a standard normal `Z`.
pub fn q_function(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!(
            "q_function argument {x} is not finite"
        )));
    }
    Ok(q_unchecked(x))
}

pub(crate) fn q_unchecked(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Standard normal CDF, `1 - Q(x)`.
pub fn normal_cdf(x: f64) -> Result<f64> {
    q_function(-x)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// dBm (referenced to 1 mW) to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Unit-scale gamma sampler.
#[derive(Debug, Clone, Copy)]
pub struct GammaSampler {
    dist: Gamma<f64>,
}

impl GammaSampler {
    pub fn new(shape: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::domain(format!(
                "gamma shape must be positive, got {shape}"
            )));
        }
        let dist = Gamma::new(shape, 1.0)
            .map_err(|e| Error::domain(format!("gamma shape {shape}: {e}")))?;
        Ok(Self { dist })
    }

    #[inline]
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.dist.sample(rng)
    }
}

/// One draw from `Gamma(shape, 1)`.
pub fn sample_gamma<R: rand::Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    Ok(GammaSampler::new(shape)?.sample(rng))
}

/// Neumaier compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
