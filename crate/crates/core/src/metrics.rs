//! Transmit-signal construction, Monte Carlo BER, and rate analytics.
//!
//! Element `n` is fed `x_n = sqrt(Ps) (beta1 s + beta2 b_n z)` where `s` is
//! the unit-energy data symbol and `z ~ CN(0,1)` the artificial noise. At an
//! observation point the received baseband sample, AWGN included, is
//!
//! ```text
//! y = sqrt(Ps) beta1 kappa s + sqrt(Ps) beta2 eta z + xi
//! ```
//!
//! The analytics follow directly:
//!
//! ```text
//! snr            gamma = Ps beta1^2 |kappa|^2 / sigma^2
//! sinr           lambda = Ps beta1^2 |kappa|^2 / (Ps beta2^2 |eta|^2 + sigma^2)
//! rate           zeta = log2(1 + lambda)
//! receiver rate  zeta_B = log2(1 + Ps beta1^2 / sigma^2)
//! secrecy rate   zeta_sec = max(0, min_v (zeta_B - zeta_v))
//! ```
//!
//! BER is estimated by straight Monte Carlo over pi/4-QPSK symbols, with a
//! fresh constraint-satisfying weight pair drawn for every symbol interval
//! (dynamic directional modulation).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{ChannelMode, SteeringComponents};
use crate::error::{Error, Result};
use crate::geometry::{ArrayConfig, ObservationPoint};
use crate::seeds;
use crate::synthesis::{Synthesizer, WeightPair};

/// Constellation descriptor. All alphabets are normalized to unit average
/// symbol energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Modulation {
    /// Gray-mapped QPSK whose constellation alternates between a 0 and a
    /// pi/4 rotation on successive symbol slots; the rotation schedule is
    /// deterministic and known to the receiver.
    #[default]
    Pi4Qpsk,
}

/// Gray angles for bit pairs 00, 01, 10, 11.
const QPSK_GRAY_ANGLES: [f64; 4] = [
    FRAC_PI_4,       // 00
    3.0 * FRAC_PI_4, // 01
    7.0 * FRAC_PI_4, // 10
    5.0 * FRAC_PI_4, // 11
];

impl Modulation {
    pub fn bits_per_symbol(&self) -> u32 {
        match self {
            Modulation::Pi4Qpsk => 2,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            Modulation::Pi4Qpsk => 4,
        }
    }

    /// Rotation applied to the base constellation in the given symbol slot.
    pub fn slot_rotation(&self, slot: u64) -> f64 {
        match self {
            Modulation::Pi4Qpsk => {
                if slot % 2 == 1 {
                    FRAC_PI_4
                } else {
                    0.0
                }
            }
        }
    }

    /// Maps a bit pair to its constellation point for the given slot.
    pub fn symbol(&self, bits: u8, slot: u64) -> Complex64 {
        match self {
            Modulation::Pi4Qpsk => {
                debug_assert!(bits < 4);
                Complex64::cis(QPSK_GRAY_ANGLES[bits as usize & 3] + self.slot_rotation(slot))
            }
        }
    }

    /// Minimum-distance detection against the slot's rotated constellation.
    pub fn detect(&self, y: Complex64, slot: u64) -> u8 {
        match self {
            Modulation::Pi4Qpsk => {
                let rot = self.slot_rotation(slot);
                let mut best = 0u8;
                let mut best_d = f64::INFINITY;
                for bits in 0..4u8 {
                    let point = Complex64::cis(QPSK_GRAY_ANGLES[bits as usize] + rot);
                    let d = (y - point).norm_sqr();
                    if d < best_d {
                        best_d = d;
                        best = bits;
                    }
                }
                best
            }
        }
    }
}

/// Transmit power, power split, modulation, and noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmitConfig {
    power: f64,
    beta1: f64,
    beta2: f64,
    modulation: Modulation,
    noise_variance: f64,
}

impl TransmitConfig {
    /// Builds a config, checking `beta1^2 + beta2^2 = 1` to 1e-12.
    pub fn new(
        power: f64,
        beta1: f64,
        beta2: f64,
        modulation: Modulation,
        noise_variance: f64,
    ) -> Result<Self> {
        if power <= 0.0 || !power.is_finite() {
            return Err(Error::InvalidParameter {
                name: "power",
                value: power,
                constraint: "must be finite and > 0",
            });
        }
        if noise_variance <= 0.0 || !noise_variance.is_finite() {
            return Err(Error::InvalidParameter {
                name: "noise_variance",
                value: noise_variance,
                constraint: "must be finite and > 0",
            });
        }
        let split = beta1 * beta1 + beta2 * beta2;
        if (split - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "beta1/beta2",
                value: split,
                constraint: "beta1^2 + beta2^2 must equal 1 within 1e-12",
            });
        }
        Ok(Self {
            power,
            beta1,
            beta2,
            modulation,
            noise_variance,
        })
    }

    /// Builds a config from `beta1` alone, deriving `beta2 = sqrt(1 - beta1^2)`.
    pub fn from_beta1(
        power: f64,
        beta1: f64,
        modulation: Modulation,
        noise_variance: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta1) {
            return Err(Error::InvalidParameter {
                name: "beta1",
                value: beta1,
                constraint: "must lie in [0, 1]",
            });
        }
        let beta2 = (1.0 - beta1 * beta1).max(0.0).sqrt();
        Self::new(power, beta1, beta2, modulation, noise_variance)
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    /// AWGN variance `sigma_xi^2`.
    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// Noise level that puts the designated receiver at the given linear
    /// SNR: `sigma^2 = Ps beta1^2 / gamma`. The receiver operating point is
    /// then invariant under the power split.
    pub fn noise_for_receiver_snr(power: f64, beta1: f64, snr_linear: f64) -> f64 {
        power * beta1 * beta1 / snr_linear
    }

    /// Alternative calibration against total power: `sigma^2 = Ps / gamma`.
    pub fn noise_for_total_power_snr(power: f64, snr_linear: f64) -> f64 {
        power / snr_linear
    }
}

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10.0_f64.powf(db / 10.0)
}

/// The eavesdropper constellation: at least one point, none of them at the
/// designated receiver's exact location.
#[derive(Debug, Clone)]
pub struct EveSet {
    points: Vec<ObservationPoint>,
}

impl EveSet {
    pub fn new(points: Vec<ObservationPoint>, bob: &ObservationPoint) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyEveSet);
        }
        for (index, p) in points.iter().enumerate() {
            if p.range_m() == bob.range_m()
                && p.elevation_rad() == bob.elevation_rad()
                && p.azimuth_rad() == bob.azimuth_rad()
            {
                return Err(Error::EveAtBob { index });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[ObservationPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One complex AWGN-polluted baseband sample at `p`.
#[allow(clippy::too_many_arguments)]
pub fn received_sample(
    cfg: &ArrayConfig,
    tx: &TransmitConfig,
    p: &ObservationPoint,
    t: f64,
    weights: &WeightPair,
    symbol: Complex64,
    an: Complex64,
    noise: Complex64,
    mode: ChannelMode,
) -> Result<Complex64> {
    let resp = SteeringComponents::compute(cfg, p, t).response(weights, mode)?;
    let amp = tx.power().sqrt();
    Ok(amp * tx.beta1() * resp.kappa * symbol + amp * tx.beta2() * resp.eta * an + noise)
}

/// A standard circularly symmetric complex Gaussian draw, `CN(0, 1)`.
pub fn standard_complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

/// Monte Carlo BER estimate at one observation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerResult {
    pub point: ObservationPoint,
    /// Symbols simulated.
    pub trials: u64,
    pub bit_errors: u64,
    /// `bit_errors / (trials * bits_per_symbol)`.
    pub ber: f64,
    pub mode: ChannelMode,
}

impl BerResult {
    /// Binomial standard error of the estimate.
    pub fn standard_error(&self, modulation: Modulation) -> f64 {
        let bits = (self.trials * modulation.bits_per_symbol() as u64) as f64;
        (self.ber * (1.0 - self.ber) / bits).sqrt()
    }
}

/// Runs a Monte Carlo BER estimate at `p` for a transmitter aimed at `bob`.
///
/// Every symbol interval draws a fresh weight pair toward `bob` (seeded from
/// `(seed, symbol index)`, so the result does not depend on evaluation
/// order), sends one Gray pi/4-QPSK symbol, and detects at `p` after
/// normalizing by `sqrt(Ps) beta1`. The detector knows the slot rotation and
/// the constellation but not the weights.
#[allow(clippy::too_many_arguments)]
pub fn run_ber(
    cfg: &ArrayConfig,
    tx: &TransmitConfig,
    p: &ObservationPoint,
    bob: &ObservationPoint,
    t: f64,
    mode: ChannelMode,
    n_symbols: u64,
    seed: u64,
) -> Result<BerResult> {
    if n_symbols == 0 {
        return Err(Error::InvalidParameter {
            name: "n_symbols",
            value: 0.0,
            constraint: "must be >= 1",
        });
    }
    let synthesizer = Synthesizer::new(cfg, bob, t, mode)?;
    let steer_p = SteeringComponents::compute(cfg, p, t);
    let modulation = tx.modulation();
    let amp = tx.power().sqrt();
    let noise_scale = tx.noise_variance().sqrt();
    let norm = 1.0 / (amp * tx.beta1());

    let mut bit_errors = 0u64;
    for m in 0..n_symbols {
        let symbol_seed = seeds::derive_seed(seed, m);
        let (weights, _) = synthesizer.draw(seeds::derive_seed(symbol_seed, 1))?;
        let mut rng = seeds::rng_for(symbol_seed, 2);

        let bits = (rng.random::<u32>() & 3) as u8;
        let s = modulation.symbol(bits, m);
        let z = standard_complex_gaussian(&mut rng);
        let xi = standard_complex_gaussian(&mut rng) * noise_scale;

        let resp = steer_p.response(&weights, mode)?;
        let y = amp * tx.beta1() * resp.kappa * s + amp * tx.beta2() * resp.eta * z + xi;
        let detected = modulation.detect(y * norm, m);
        bit_errors += (bits ^ detected).count_ones() as u64;
    }

    let total_bits = n_symbols * modulation.bits_per_symbol() as u64;
    Ok(BerResult {
        point: *p,
        trials: n_symbols,
        bit_errors,
        ber: bit_errors as f64 / total_bits as f64,
        mode,
    })
}

/// SNR at `p`: `Ps beta1^2 |kappa|^2 / sigma^2`.
pub fn snr(
    cfg: &ArrayConfig,
    tx: &TransmitConfig,
    p: &ObservationPoint,
    t: f64,
    weights: &WeightPair,
    mode: ChannelMode,
) -> Result<f64> {
    let resp = SteeringComponents::compute(cfg, p, t).response(weights, mode)?;
    Ok(tx.power() * tx.beta1().powi(2) * resp.kappa.norm_sqr() / tx.noise_variance())
}

/// SINR at `p`: the AN term joins the noise floor.
pub fn sinr(
    cfg: &ArrayConfig,
    tx: &TransmitConfig,
    p: &ObservationPoint,
    t: f64,
    weights: &WeightPair,
    mode: ChannelMode,
) -> Result<f64> {
    let resp = SteeringComponents::compute(cfg, p, t).response(weights, mode)?;
    Ok(sinr_from_response(
        tx,
        resp.kappa.norm_sqr(),
        resp.eta.norm_sqr(),
    ))
}

/// SINR from precomputed `|kappa|^2` and `|eta|^2`.
pub fn sinr_from_response(tx: &TransmitConfig, kappa_sq: f64, eta_sq: f64) -> f64 {
    let ps = tx.power();
    ps * tx.beta1().powi(2) * kappa_sq
        / (ps * tx.beta2().powi(2) * eta_sq + tx.noise_variance())
}

/// Achievable rate `log2(1 + lambda)` in bits/s/Hz.
pub fn achievable_rate(sinr: f64) -> f64 {
    (1.0 + sinr).log2()
}

/// The designated receiver's rate with constraint-satisfying weights:
/// `log2(1 + Ps beta1^2 / sigma^2)`.
pub fn bob_rate(tx: &TransmitConfig) -> f64 {
    (1.0 + tx.power() * tx.beta1().powi(2) / tx.noise_variance()).log2()
}

/// Secrecy rate: the receiver's margin over the best eavesdropper,
/// clamped at zero. An empty rate list means no eavesdroppers, so the
/// whole receiver rate is secret.
pub fn secrecy_rate(bob_rate: f64, eve_rates: &[f64]) -> f64 {
    let best_eve = eve_rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if best_eve.is_finite() {
        (bob_rate - best_eve).max(0.0)
    } else {
        bob_rate
    }
}

/// Rate analytics at one observation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub snr: f64,
    pub sinr: f64,
    /// `log2(1 + sinr)`.
    pub rate: f64,
    /// Present when an eavesdropper set was supplied.
    pub secrecy_rate: Option<f64>,
}

/// Computes SNR/SINR/rate at `p`, plus the secrecy rate of the designated
/// link when `eves` is given (secrecy depends on the eavesdroppers and the
/// receiver operating point, not on `p`).
pub fn rate_analysis(
    cfg: &ArrayConfig,
    tx: &TransmitConfig,
    p: &ObservationPoint,
    t: f64,
    weights: &WeightPair,
    mode: ChannelMode,
    eves: Option<&EveSet>,
) -> Result<RateResult> {
    let gamma = snr(cfg, tx, p, t, weights, mode)?;
    let lambda = sinr(cfg, tx, p, t, weights, mode)?;
    let secrecy = match eves {
        Some(set) => {
            let mut rates = Vec::with_capacity(set.len());
            for eve in set.points() {
                rates.push(achievable_rate(sinr(cfg, tx, eve, t, weights, mode)?));
            }
            Some(secrecy_rate(bob_rate(tx), &rates))
        }
        None => None,
    };
    Ok(RateResult {
        snr: gamma,
        sinr: lambda,
        rate: achievable_rate(lambda),
        secrecy_rate: secrecy,
    })
}
