//! Two-ray and single-path baseband channel model.
//!
//! All field quantities here are complex baseband: the common carrier factor
//! `exp(j 2 pi f0 t)` is stripped, since every downstream metric (BER, SNR,
//! rates) depends only on baseband quantities.
//!
//! Per element `n` at observation point `(r, theta, psi)` and time `t`:
//!
//! ```text
//! mu_n  = exp(-j 2 pi f0 (r - n d u) / c)            carrier phase
//! eps_n = exp( j 2 pi df_n (t - (r - n d u) / c))    frequency-offset phase
//! xi_n  = 2 pi f_n h0 v / c                          height phase
//! rho_n = j 2 sin(xi_n)                              two-ray interference
//! ```
//!
//! The direct ray carries `exp(+j xi_n)`, the ground-reflected ray carries
//! `-exp(-j xi_n)` (reflection coefficient -1, perfectly conducting ground),
//! and their sum factors into `rho_n`. The aggregate gains seen by the
//! useful symbol and the artificial noise are
//!
//! ```text
//! kappa = sum_n a_n mu_n eps_n rho_n
//! eta   = sum_n a_n b_n mu_n eps_n rho_n
//! ```
//!
//! Single-path mode is the free-space baseline: no ground, hence no image
//! ray and no height phase, leaving the per-element coefficient
//! `mu_n eps_n`. This is the model conventional FDA transmitters are
//! analyzed in, and the comparison point for everything the ground
//! reflection adds. (Keeping the height phase in a "single-path" model
//! would smuggle in a ground-referenced elevation dependence and invert
//! the lobe-width comparison.)

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{element_frequency_offset, ArrayConfig, ObservationPoint, SPEED_OF_LIGHT};
use crate::synthesis::WeightPair;

/// Amplitude reflection coefficient of the ground plane. Fixed at -1
/// (infinite, perfectly conducting ground); a lossy ground would replace
/// this constant.
pub const GROUND_REFLECTION_COEFF: f64 = -1.0;

/// Which propagation model the field and response sums use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelMode {
    /// Direct ray plus ground-reflected ray (image theory).
    TwoRayMultipath,
    /// Direct ray only; the baseline the two-ray model is compared against.
    SinglePathLoS,
}

impl fmt::Display for ChannelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelMode::TwoRayMultipath => write!(f, "two-ray"),
            ChannelMode::SinglePathLoS => write!(f, "single-path"),
        }
    }
}

impl FromStr for ChannelMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "two-ray" | "two_ray" | "tworay" => Ok(ChannelMode::TwoRayMultipath),
            "single-path" | "single_path" | "singlepath" => Ok(ChannelMode::SinglePathLoS),
            other => Err(format!(
                "unknown channel mode `{other}` (expected `two-ray` or `single-path`)"
            )),
        }
    }
}

/// Aggregate complex channel gains at one observation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelResponse {
    /// Gain multiplying the useful symbol.
    pub kappa: Complex64,
    /// Gain multiplying the artificial noise.
    pub eta: Complex64,
}

/// Per-element steering components at a fixed `(point, time)`.
///
/// Computing these once and reusing them is the hot path for weight
/// synthesis and Monte Carlo sweeps.
#[derive(Debug, Clone)]
pub struct SteeringComponents {
    mu: Vec<Complex64>,
    eps: Vec<Complex64>,
    rho: Vec<Complex64>,
    /// Height phases `xi_n`; kept alongside so the direct-ray factor
    /// `exp(j xi_n)` needs no recomputation.
    xi: Vec<f64>,
}

impl SteeringComponents {
    /// Evaluates all per-element components at observation point `p` and
    /// time `t` (seconds).
    pub fn compute(cfg: &ArrayConfig, p: &ObservationPoint, t: f64) -> Self {
        let m = cfg.elements();
        let mut mu = Vec::with_capacity(m);
        let mut eps = Vec::with_capacity(m);
        let mut rho = Vec::with_capacity(m);
        let mut xi = Vec::with_capacity(m);
        let f0 = cfg.carrier_hz();
        for n in cfg.element_indices() {
            let offset_hz = element_frequency_offset(cfg, n);
            let range_term = p.range_m() - n as f64 * cfg.spacing_m() * p.u();
            mu.push(Complex64::cis(-TAU * f0 * range_term / SPEED_OF_LIGHT));
            eps.push(Complex64::cis(
                TAU * offset_hz * (t - range_term / SPEED_OF_LIGHT),
            ));
            let xi_n = TAU * (f0 + offset_hz) * cfg.height_m() * p.v() / SPEED_OF_LIGHT;
            rho.push(Complex64::new(0.0, 2.0 * xi_n.sin()));
            xi.push(xi_n);
        }
        Self { mu, eps, rho, xi }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// Carrier phase terms, unit modulus.
    pub fn mu(&self) -> &[Complex64] {
        &self.mu
    }

    /// Frequency-offset phase terms, unit modulus.
    pub fn eps(&self) -> &[Complex64] {
        &self.eps
    }

    /// Two-ray interference factors `j 2 sin(xi_n)`, purely imaginary.
    pub fn rho(&self) -> &[Complex64] {
        &self.rho
    }

    /// The per-element coefficient that multiplies `a_n x_n` in the
    /// total-field sum: `mu eps rho` in two-ray mode, `mu eps` in the
    /// free-space single-path baseline.
    pub fn element_coefficient(&self, idx: usize, mode: ChannelMode) -> Complex64 {
        let base = self.mu[idx] * self.eps[idx];
        match mode {
            ChannelMode::TwoRayMultipath => base * self.rho[idx],
            ChannelMode::SinglePathLoS => base,
        }
    }

    /// All per-element coefficients for `mode` in index order.
    pub fn mode_coefficients(&self, mode: ChannelMode) -> Vec<Complex64> {
        (0..self.len())
            .map(|i| self.element_coefficient(i, mode))
            .collect()
    }

    fn check_len(&self, actual: usize) -> Result<()> {
        if actual != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual,
            });
        }
        Ok(())
    }

    /// Direct-ray baseband field `sum a_n x_n mu_n eps_n exp(j xi_n)`.
    pub fn los_field(&self, weights: &WeightPair, feed: &[Complex64]) -> Result<Complex64> {
        self.check_len(weights.a.len())?;
        self.check_len(feed.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (a, x)) in weights.a.iter().zip(feed).enumerate() {
            acc += a * x * self.mu[i] * self.eps[i] * Complex64::cis(self.xi[i]);
        }
        Ok(acc)
    }

    /// Ground-reflected baseband field
    /// `-sum a_n x_n mu_n eps_n exp(-j xi_n)`.
    pub fn nlos_field(&self, weights: &WeightPair, feed: &[Complex64]) -> Result<Complex64> {
        self.check_len(weights.a.len())?;
        self.check_len(feed.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (a, x)) in weights.a.iter().zip(feed).enumerate() {
            acc += a * x * self.mu[i] * self.eps[i] * Complex64::cis(self.xi[i]).conj();
        }
        Ok(GROUND_REFLECTION_COEFF * acc)
    }

    /// Total baseband field for `mode`. In two-ray mode this is the
    /// factored sum over `rho_n`, equal to `los + nlos`; in single-path
    /// mode it is the free-space sum over `mu eps`.
    pub fn total_field(
        &self,
        weights: &WeightPair,
        feed: &[Complex64],
        mode: ChannelMode,
    ) -> Result<Complex64> {
        self.check_len(weights.a.len())?;
        self.check_len(feed.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (a, x)) in weights.a.iter().zip(feed).enumerate() {
            acc += a * x * self.element_coefficient(i, mode);
        }
        Ok(acc)
    }

    /// Aggregate `(kappa, eta)` gains for `mode`.
    pub fn response(&self, weights: &WeightPair, mode: ChannelMode) -> Result<ChannelResponse> {
        self.check_len(weights.a.len())?;
        self.check_len(weights.b.len())?;
        let mut kappa = Complex64::new(0.0, 0.0);
        let mut eta = Complex64::new(0.0, 0.0);
        for i in 0..self.len() {
            let coeff = self.element_coefficient(i, mode);
            let ac = weights.a[i] * coeff;
            kappa += ac;
            eta += ac * weights.b[i];
        }
        Ok(ChannelResponse { kappa, eta })
    }
}

/// Evaluates the steering components at `(p, t)`.
pub fn steering_components(cfg: &ArrayConfig, p: &ObservationPoint, t: f64) -> SteeringComponents {
    SteeringComponents::compute(cfg, p, t)
}

/// Direct-ray baseband field at `(p, t)` for feed vector `x`.
pub fn los_field(
    cfg: &ArrayConfig,
    p: &ObservationPoint,
    t: f64,
    weights: &WeightPair,
    feed: &[Complex64],
) -> Result<Complex64> {
    SteeringComponents::compute(cfg, p, t).los_field(weights, feed)
}

/// Ground-reflected baseband field at `(p, t)` for feed vector `x`.
pub fn nlos_field(
    cfg: &ArrayConfig,
    p: &ObservationPoint,
    t: f64,
    weights: &WeightPair,
    feed: &[Complex64],
) -> Result<Complex64> {
    SteeringComponents::compute(cfg, p, t).nlos_field(weights, feed)
}

/// Total baseband field at `(p, t)`; two-ray mode must equal
/// `los_field + nlos_field` up to rounding.
pub fn total_field(
    cfg: &ArrayConfig,
    p: &ObservationPoint,
    t: f64,
    weights: &WeightPair,
    feed: &[Complex64],
    mode: ChannelMode,
) -> Result<Complex64> {
    SteeringComponents::compute(cfg, p, t).total_field(weights, feed, mode)
}

/// Aggregate `(kappa, eta)` channel gains at `(p, t)`.
pub fn channel_response(
    cfg: &ArrayConfig,
    p: &ObservationPoint,
    t: f64,
    weights: &WeightPair,
    mode: ChannelMode,
) -> Result<ChannelResponse> {
    SteeringComponents::compute(cfg, p, t).response(weights, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::path_lengths;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reference_array() -> ArrayConfig {
        let f0 = 10.0e9;
        ArrayConfig::new(3, f0, 2.0e3, 1.0, 4.25 * SPEED_OF_LIGHT / f0).unwrap()
    }

    fn bob() -> ObservationPoint {
        ObservationPoint::from_degrees(150.0e3, 40.0, 70.0).unwrap()
    }

    fn unit_weights(m: usize) -> WeightPair {
        WeightPair {
            a: vec![Complex64::new(1.0, 0.0); m],
            b: vec![Complex64::new(0.0, 0.0); m],
        }
    }

    fn random_unit(rng: &mut impl Rng) -> Complex64 {
        Complex64::cis(rng.random::<f64>() * TAU)
    }

    #[test]
    fn steering_moduli_and_rho_structure() {
        let cfg = reference_array();
        let t = bob().range_m() / SPEED_OF_LIGHT;
        let s = SteeringComponents::compute(&cfg, &bob(), t);
        for i in 0..s.len() {
            assert!((s.mu()[i].norm() - 1.0).abs() < 1e-12);
            assert!((s.eps()[i].norm() - 1.0).abs() < 1e-12);
            assert_eq!(s.rho()[i].re, 0.0, "rho must be purely imaginary");
            assert!(s.rho()[i].norm() <= 2.0 + 1e-15);
        }
    }

    #[test]
    fn grazing_point_kills_rho_and_total_field() {
        let cfg = reference_array();
        let p = ObservationPoint::from_degrees(100.0e3, 0.0, 70.0).unwrap();
        let s = SteeringComponents::compute(&cfg, &p, 1e-4);
        for r in s.rho() {
            assert_eq!(*r, Complex64::new(0.0, 0.0));
        }
        let w = unit_weights(cfg.elements());
        let x = vec![Complex64::new(1.0, 0.0); cfg.elements()];
        let total = s
            .total_field(&w, &x, ChannelMode::TwoRayMultipath)
            .unwrap();
        assert_eq!(total, Complex64::new(0.0, 0.0));
        // At grazing the two rays cancel bit-exactly.
        let los = s.los_field(&w, &x).unwrap();
        let nlos = s.nlos_field(&w, &x).unwrap();
        assert_eq!(nlos, -los);
    }

    #[test]
    fn zero_increment_freezes_eps() {
        let f0 = 10.0e9;
        let cfg = ArrayConfig::new(3, f0, 0.0, 1.0, 4.25 * SPEED_OF_LIGHT / f0).unwrap();
        for t in [0.0, 1e-4, 3.3e-2] {
            let s = SteeringComponents::compute(&cfg, &bob(), t);
            for e in s.eps() {
                assert_eq!(*e, Complex64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn center_rho_magnitude_at_reference_geometry() {
        // xi_0 = 2 pi * 4.25 * sin(40 deg) = 17.16470307548309,
        // |rho_0| = 2 |sin(xi_0)| = 1.9870052069009194.
        let cfg = reference_array();
        let s = SteeringComponents::compute(&cfg, &bob(), 0.0);
        let center = cfg.half_count() as usize;
        assert_relative_eq!(
            s.rho()[center].norm(),
            1.987_005_206_900_919_4,
            max_relative = 1e-9
        );
        // Independent recomputation from the path-length split 2 h0 v.
        for (i, n) in cfg.element_indices().enumerate() {
            let (los, nlos) = path_lengths(&cfg, n, &bob()).unwrap();
            let f_n = cfg.carrier_hz() + element_frequency_offset(&cfg, n);
            let xi = TAU * f_n * (nlos - los) / (2.0 * SPEED_OF_LIGHT);
            assert_relative_eq!(s.rho()[i].im, 2.0 * xi.sin(), max_relative = 1e-9);
        }
    }

    #[test]
    fn single_fed_element_gives_unit_modulus_los_term() {
        let cfg = ArrayConfig::new(1, 10.0e9, 2.0e3, 1.0, 0.127).unwrap();
        let mut x = vec![Complex64::new(0.0, 0.0); 3];
        x[1] = Complex64::new(1.0, 0.0); // center element only
        let w = WeightPair {
            a: vec![Complex64::new(1.0, 0.0); 3],
            b: vec![Complex64::new(0.0, 0.0); 3],
        };
        let s = SteeringComponents::compute(&cfg, &bob(), 1e-4);
        let los = s.los_field(&w, &x).unwrap();
        assert!((los.norm() - 1.0).abs() < 1e-12, "one-term sum, all factors unit modulus");
    }

    #[test]
    fn los_field_is_linear_in_feed() {
        let cfg = reference_array();
        let m = cfg.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = WeightPair {
            a: (0..m).map(|_| random_unit(&mut rng)).collect(),
            b: (0..m).map(|_| random_unit(&mut rng)).collect(),
        };
        let x: Vec<Complex64> = (0..m)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let alpha = Complex64::new(-1.3, 2.1);
        let scaled: Vec<Complex64> = x.iter().map(|&xi| alpha * xi).collect();
        let s = SteeringComponents::compute(&cfg, &bob(), 2e-4);
        let base = s.los_field(&w, &x).unwrap();
        let scaled_field = s.los_field(&w, &scaled).unwrap();
        assert_relative_eq!(
            (alpha * base).re,
            scaled_field.re,
            max_relative = 1e-12,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            (alpha * base).im,
            scaled_field.im,
            max_relative = 1e-12,
            epsilon = 1e-14
        );
    }

    #[test]
    fn vanishing_height_makes_rays_cancel() {
        let cfg = ArrayConfig::with_spacing(3, 10.0e9, 2.0e3, 1.0, 0.015, 1e-12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = cfg.elements();
        let w = WeightPair {
            a: (0..m).map(|_| random_unit(&mut rng)).collect(),
            b: (0..m).map(|_| random_unit(&mut rng)).collect(),
        };
        let x: Vec<Complex64> = (0..m).map(|_| random_unit(&mut rng)).collect();
        let s = SteeringComponents::compute(&cfg, &bob(), 1e-4);
        let los = s.los_field(&w, &x).unwrap();
        let nlos = s.nlos_field(&w, &x).unwrap();
        assert!((nlos + los).norm() < 1e-9 * los.norm());
    }

    /// Unsimplified direct evaluation: each ray term is
    /// `a x exp(j 2 pi (df_n t - f_n r_path / c))` with the path length
    /// taken from the geometry module, reflected ray negated.
    fn unsimplified_fields(
        cfg: &ArrayConfig,
        p: &ObservationPoint,
        t: f64,
        w: &WeightPair,
        x: &[Complex64],
    ) -> (Complex64, Complex64) {
        let mut los = Complex64::new(0.0, 0.0);
        let mut nlos = Complex64::new(0.0, 0.0);
        for (i, n) in cfg.element_indices().enumerate() {
            let (r_los, r_nlos) = path_lengths(cfg, n, p).unwrap();
            let f_n = cfg.carrier_hz() + element_frequency_offset(cfg, n);
            let df_n = element_frequency_offset(cfg, n);
            let term = |r_path: f64| {
                Complex64::cis(TAU * (df_n * t - f_n * r_path / SPEED_OF_LIGHT))
            };
            los += w.a[i] * x[i] * term(r_los);
            nlos -= w.a[i] * x[i] * term(r_nlos);
        }
        (los, nlos)
    }

    #[test]
    fn fields_match_unsimplified_sum_at_small_phase() {
        // At short range / low carrier the absolute phases are O(10^3) rad,
        // where two algebraically equal phase routes agree to ~1e-13.
        let cfg = ArrayConfig::new(3, 1.0e6, 10.0, 1.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let p = ObservationPoint::from_degrees(
                10.0 + rng.random::<f64>() * 5.0e3,
                rng.random::<f64>() * 80.0,
                rng.random::<f64>() * 360.0,
            )
            .unwrap();
            let t = rng.random::<f64>() * 1e-3;
            let m = cfg.elements();
            let w = WeightPair {
                a: (0..m).map(|_| random_unit(&mut rng)).collect(),
                b: (0..m).map(|_| random_unit(&mut rng)).collect(),
            };
            let x: Vec<Complex64> = (0..m).map(|_| random_unit(&mut rng)).collect();
            let s = SteeringComponents::compute(&cfg, &p, t);
            let (o_los, o_nlos) = unsimplified_fields(&cfg, &p, t, &w, &x);
            let los = s.los_field(&w, &x).unwrap();
            let nlos = s.nlos_field(&w, &x).unwrap();
            let scale = o_los.norm() + o_nlos.norm() + 1e-30;
            assert!((los - o_los).norm() / scale < 1e-12);
            assert!((nlos - o_nlos).norm() / scale < 1e-12);
        }
    }

    #[test]
    fn fields_match_unsimplified_sum_at_radar_scale() {
        // At 10 GHz and 150 km the absolute carrier phase is ~3e7 rad, so
        // two algebraically equal routes can only agree to the rounding of
        // the phase argument itself (~1e-8 rad here). The factored sums are
        // still identical to the direct evaluation at that level.
        let cfg = reference_array();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let p = ObservationPoint::from_degrees(
                50.0e3 + rng.random::<f64>() * 250.0e3,
                rng.random::<f64>() * 85.0,
                rng.random::<f64>() * 360.0,
            )
            .unwrap();
            let t = p.range_m() / SPEED_OF_LIGHT;
            let m = cfg.elements();
            let w = WeightPair {
                a: (0..m).map(|_| random_unit(&mut rng)).collect(),
                b: (0..m).map(|_| random_unit(&mut rng)).collect(),
            };
            let x: Vec<Complex64> = (0..m).map(|_| random_unit(&mut rng)).collect();
            let s = SteeringComponents::compute(&cfg, &p, t);
            let (o_los, o_nlos) = unsimplified_fields(&cfg, &p, t, &w, &x);
            let los = s.los_field(&w, &x).unwrap();
            let nlos = s.nlos_field(&w, &x).unwrap();
            let scale = o_los.norm() + o_nlos.norm() + 1e-30;
            assert!(
                (los - o_los).norm() / scale < 1e-6,
                "los mismatch {:e}",
                (los - o_los).norm() / scale
            );
            assert!((nlos - o_nlos).norm() / scale < 1e-6);
        }
    }

    #[test]
    fn two_ray_total_equals_ray_sum() {
        let cfg = reference_array();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let p = ObservationPoint::from_degrees(
                1.0 + rng.random::<f64>() * 200.0e3,
                -89.0 + rng.random::<f64>() * 178.0,
                rng.random::<f64>() * 360.0,
            )
            .unwrap();
            let t = rng.random::<f64>() * 1e-3;
            let m = cfg.elements();
            let w = WeightPair {
                a: (0..m).map(|_| random_unit(&mut rng)).collect(),
                b: (0..m).map(|_| random_unit(&mut rng)).collect(),
            };
            let x: Vec<Complex64> = (0..m).map(|_| random_unit(&mut rng)).collect();
            let s = SteeringComponents::compute(&cfg, &p, t);
            let los = s.los_field(&w, &x).unwrap();
            let nlos = s.nlos_field(&w, &x).unwrap();
            let total = s
                .total_field(&w, &x, ChannelMode::TwoRayMultipath)
                .unwrap();
            let denum = los.norm() + nlos.norm() + 1e-30;
            assert!((total - (los + nlos)).norm() / denum < 1e-12);
        }
    }

    #[test]
    fn single_path_total_is_free_space_sum_independent_of_height() {
        let cfg = reference_array();
        let m = cfg.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let w = WeightPair {
            a: (0..m).map(|_| random_unit(&mut rng)).collect(),
            b: (0..m).map(|_| random_unit(&mut rng)).collect(),
        };
        let x: Vec<Complex64> = (0..m).map(|_| random_unit(&mut rng)).collect();
        let s = SteeringComponents::compute(&cfg, &bob(), 1e-4);
        let total = s.total_field(&w, &x, ChannelMode::SinglePathLoS).unwrap();
        let direct: Complex64 = (0..m)
            .map(|i| w.a[i] * x[i] * s.mu()[i] * s.eps()[i])
            .sum();
        assert!((total - direct).norm() <= 1e-12 * (direct.norm() + 1.0));

        // The baseline has no ground reference, so the array height
        // cannot enter its response.
        let taller = ArrayConfig::with_spacing(
            cfg.half_count(),
            cfg.carrier_hz(),
            cfg.increment_hz(),
            cfg.increment_exponent(),
            cfg.spacing_m(),
            cfg.height_m() * 3.0,
        )
        .unwrap();
        let s_tall = SteeringComponents::compute(&taller, &bob(), 1e-4);
        assert_eq!(
            s_tall.total_field(&w, &x, ChannelMode::SinglePathLoS).unwrap(),
            total
        );
    }

    #[test]
    fn total_field_decomposes_into_kappa_eta() {
        // Feeding x_n = sqrt(Ps) (b1 s + b2 b_n z) must reproduce
        // sqrt(Ps) b1 kappa s + sqrt(Ps) b2 eta z.
        let cfg = reference_array();
        let m = cfg.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for mode in [ChannelMode::TwoRayMultipath, ChannelMode::SinglePathLoS] {
            let w = WeightPair {
                a: (0..m).map(|_| random_unit(&mut rng)).collect(),
                b: (0..m).map(|_| random_unit(&mut rng)).collect(),
            };
            let s_sym = random_unit(&mut rng);
            let z = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let (ps, b1, b2) = (2.5f64, 0.6, 0.8);
            let x: Vec<Complex64> = w
                .b
                .iter()
                .map(|&bn| ps.sqrt() * (b1 * s_sym + b2 * bn * z))
                .collect();
            let steer = SteeringComponents::compute(&cfg, &bob(), 1e-4);
            let total = steer.total_field(&w, &x, mode).unwrap();
            let resp = steer.response(&w, mode).unwrap();
            let predicted = ps.sqrt() * b1 * resp.kappa * s_sym + ps.sqrt() * b2 * resp.eta * z;
            assert!((total - predicted).norm() <= 1e-12 * (total.norm() + predicted.norm() + 1.0));
        }
    }

    #[test]
    fn zero_an_weights_null_eta_everywhere() {
        let cfg = reference_array();
        let m = cfg.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let w = WeightPair {
            a: (0..m).map(|_| random_unit(&mut rng)).collect(),
            b: vec![Complex64::new(0.0, 0.0); m],
        };
        for _ in 0..20 {
            let p = ObservationPoint::from_degrees(
                1.0e3 + rng.random::<f64>() * 300.0e3,
                rng.random::<f64>() * 89.0,
                rng.random::<f64>() * 180.0,
            )
            .unwrap();
            let resp = channel_response(&cfg, &p, 1e-4, &w, ChannelMode::TwoRayMultipath).unwrap();
            assert_eq!(resp.eta, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn phase_only_weights_bound_kappa() {
        let cfg = reference_array();
        let m = cfg.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..200 {
            let p = ObservationPoint::from_degrees(
                1.0e3 + rng.random::<f64>() * 300.0e3,
                -89.0 + rng.random::<f64>() * 178.0,
                rng.random::<f64>() * 360.0,
            )
            .unwrap();
            let w = WeightPair {
                a: (0..m).map(|_| random_unit(&mut rng)).collect(),
                b: (0..m).map(|_| random_unit(&mut rng)).collect(),
            };
            let s = SteeringComponents::compute(&cfg, &p, 1e-4);
            let resp = s.response(&w, ChannelMode::TwoRayMultipath).unwrap();
            let rho_sum: f64 = s.rho().iter().map(|r| r.norm()).sum();
            assert!(resp.kappa.norm() <= rho_sum + 1e-12);
            assert!(rho_sum <= 2.0 * m as f64 + 1e-12);
        }
    }

    #[test]
    fn evaluation_is_deterministic() {
        let cfg = reference_array();
        let m = cfg.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let w = WeightPair {
            a: (0..m).map(|_| random_unit(&mut rng)).collect(),
            b: (0..m).map(|_| random_unit(&mut rng)).collect(),
        };
        let x: Vec<Complex64> = (0..m).map(|_| random_unit(&mut rng)).collect();
        let p = bob();
        let t = 4.2e-4;
        let first = total_field(&cfg, &p, t, &w, &x, ChannelMode::TwoRayMultipath).unwrap();
        let second = total_field(&cfg, &p, t, &w, &x, ChannelMode::TwoRayMultipath).unwrap();
        assert_eq!(first.re.to_bits(), second.re.to_bits());
        assert_eq!(first.im.to_bits(), second.im.to_bits());
    }

    #[test]
    fn length_mismatch_is_reported() {
        let cfg = reference_array();
        let w = unit_weights(5); // array has 7 elements
        let x = vec![Complex64::new(1.0, 0.0); 5];
        let err = los_field(&cfg, &bob(), 0.0, &w, &x).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { expected: 7, actual: 5 }));
    }

    #[test]
    fn mode_strings_round_trip() {
        for mode in [ChannelMode::TwoRayMultipath, ChannelMode::SinglePathLoS] {
            let s = mode.to_string();
            assert_eq!(s.parse::<ChannelMode>().unwrap(), mode);
        }
        assert!("three-ray".parse::<ChannelMode>().is_err());
    }
}
