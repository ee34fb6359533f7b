//! Randomized synthesis of excitation factors and AN weighting coefficients.
//!
//! A weight pair `({a_n}, {b_n})` is valid for a designated receiver (Bob)
//! when the aggregate gains there satisfy `kappa = 1` and `eta = 0`: the
//! useful symbol passes untouched and the injected artificial noise cancels.
//! With unit-modulus excitations the solution set is a continuum, which is
//! what makes dynamic directional modulation possible: every symbol interval
//! can use a fresh random pair, scrambling the constellation everywhere the
//! constraints do not hold.
//!
//! The solver is a randomized alternating projection. Excitations start at
//! uniform random phases and bounce between the affine set
//! `sum a_n c_n = 1` (where `c_n` is the per-element channel coefficient at
//! Bob) and the unit-modulus torus until the residual drops below tolerance.
//! Given `{a_n}`, the AN constraint is a single linear functional of `b`,
//! handled the same way (or by one exact projection when the coefficients
//! may sit anywhere in the unit disk).

use std::f64::consts::TAU;
use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{ChannelMode, SteeringComponents};
use crate::error::{Error, Result};
use crate::geometry::{ArrayConfig, ObservationPoint};

/// Per-element excitation factors `a` and AN coefficients `b`,
/// indexed `n = -N..=N` in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightPair {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl WeightPair {
    /// Number of elements the pair is sized for.
    pub fn elements(&self) -> usize {
        self.a.len()
    }

    /// Largest deviation of any `|a_n|` from unit modulus.
    pub fn max_excitation_modulus_error(&self) -> f64 {
        self.a
            .iter()
            .map(|a| (a.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Modulus policy for the AN coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AnPolicy {
    /// `|b_n| = 1` for every element.
    #[default]
    UnitModulus,
    /// `|b_n| <= 1`, reached by a single exact projection.
    WithinUnitDisk,
}

/// Solver knobs; the defaults match the documented contract.
#[derive(Debug, Clone, Copy)]
pub struct SynthesisOptions {
    /// Residual bound on both `|kappa - 1|` and `|eta|`.
    pub tolerance: f64,
    /// Projection iterations per attempt, per constraint.
    pub max_iterations: usize,
    /// Fresh random restarts before giving up.
    pub max_attempts: usize,
    pub an_policy: AnPolicy,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_iterations: 10_000,
            max_attempts: 10,
            an_policy: AnPolicy::UnitModulus,
        }
    }
}

/// Outcome record for one synthesis or verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisReport {
    /// `|kappa_B - 1|`.
    pub kappa_residual: f64,
    /// `|eta_B|`.
    pub eta_residual: f64,
    /// Projection iterations spent (0 for pure verification).
    pub iterations: usize,
    /// Seed of the random stream that produced the pair, if any.
    pub seed: Option<u64>,
}

impl SynthesisReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.kappa_residual <= tol && self.eta_residual <= tol
    }
}

/// Reusable solver bound to one `(array, receiver, time, mode)` target.
///
/// Construction precomputes the per-element coefficients at the receiver
/// and rejects geometries where the constraints cannot close.
#[derive(Debug, Clone)]
pub struct Synthesizer {
    coeffs: Vec<Complex64>,
    norm_sq: f64,
    opts: SynthesisOptions,
}

impl Synthesizer {
    pub fn new(
        cfg: &ArrayConfig,
        bob: &ObservationPoint,
        t: f64,
        mode: ChannelMode,
    ) -> Result<Self> {
        Self::with_options(cfg, bob, t, mode, SynthesisOptions::default())
    }

    pub fn with_options(
        cfg: &ArrayConfig,
        bob: &ObservationPoint,
        t: f64,
        mode: ChannelMode,
        opts: SynthesisOptions,
    ) -> Result<Self> {
        if opts.tolerance <= 0.0 || opts.tolerance.is_nan() {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                value: opts.tolerance,
                constraint: "must be > 0",
            });
        }
        let steering = SteeringComponents::compute(cfg, bob, t);
        let coeffs = steering.mode_coefficients(mode);
        let sum_mag: f64 = coeffs.iter().map(|c| c.norm()).sum();
        let max_mag = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        // A sum of phasors with fixed lengths |c_n| reaches magnitude 1
        // iff 2 max - sum <= 1 <= sum.
        if sum_mag < 1.0 {
            return Err(Error::InfeasibleGeometry {
                reason: format!(
                    "per-element coefficient magnitudes sum to {sum_mag:.3e} < 1; \
                     kappa = 1 is unreachable (grazing receiver in two-ray mode?)"
                ),
            });
        }
        if 2.0 * max_mag - sum_mag > 1.0 {
            return Err(Error::InfeasibleGeometry {
                reason: "one element dominates the coefficient sum; \
                         the unit-modulus phasor chain cannot close on 1"
                    .to_string(),
            });
        }
        let norm_sq = coeffs.iter().map(|c| c.norm_sqr()).sum();
        Ok(Self {
            coeffs,
            norm_sq,
            opts,
        })
    }

    pub fn options(&self) -> &SynthesisOptions {
        &self.opts
    }

    /// Per-element coefficients `c_n` at the synthesis target.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Draws one constraint-satisfying pair from the given seed.
    ///
    /// Deterministic: the same seed always returns the same pair.
    pub fn draw(&self, seed: u64) -> Result<(WeightPair, SynthesisReport)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = self.coeffs.len();
        let tol = self.opts.tolerance;
        let mut iterations = 0usize;
        let mut best_kres = f64::INFINITY;
        let mut best_eres = f64::INFINITY;

        for _ in 0..self.opts.max_attempts.max(1) {
            // Excitation step: alternate between the affine constraint
            // sum a_n c_n = 1 and the unit-modulus torus.
            let mut a: Vec<Complex64> = (0..m).map(|_| random_phase(&mut rng)).collect();
            let mut kres = f64::INFINITY;
            let mut converged = false;
            for _ in 0..self.opts.max_iterations {
                iterations += 1;
                let kappa: Complex64 = a.iter().zip(&self.coeffs).map(|(ai, ci)| ai * ci).sum();
                kres = (kappa - Complex64::new(1.0, 0.0)).norm();
                if kres <= tol {
                    converged = true;
                    break;
                }
                let step = (Complex64::new(1.0, 0.0) - kappa) / self.norm_sq;
                for (ai, ci) in a.iter_mut().zip(&self.coeffs) {
                    *ai += ci.conj() * step;
                    let mag = ai.norm();
                    if mag < 1e-300 {
                        *ai = random_phase(&mut rng);
                    } else {
                        *ai /= mag;
                    }
                }
            }
            best_kres = best_kres.min(kres);
            if !converged {
                continue;
            }

            // AN step: one linear functional of b, coefficients d_n = a_n c_n.
            let d: Vec<Complex64> = a.iter().zip(&self.coeffs).map(|(ai, ci)| ai * ci).collect();
            let dnorm_sq: f64 = d.iter().map(|di| di.norm_sqr()).sum();
            let b = match self.opts.an_policy {
                AnPolicy::WithinUnitDisk => {
                    let mut b: Vec<Complex64> = (0..m).map(|_| random_phase(&mut rng)).collect();
                    let eta: Complex64 = b.iter().zip(&d).map(|(bi, di)| bi * di).sum();
                    let step = -eta / dnorm_sq;
                    for (bi, di) in b.iter_mut().zip(&d) {
                        *bi += di.conj() * step;
                    }
                    // Real rescaling preserves eta = 0 exactly.
                    let max_mag = b.iter().map(|bi| bi.norm()).fold(0.0, f64::max);
                    if max_mag > 1.0 {
                        for bi in b.iter_mut() {
                            *bi /= max_mag;
                        }
                    }
                    iterations += 1;
                    Some(b)
                }
                AnPolicy::UnitModulus => {
                    let mut b: Vec<Complex64> = (0..m).map(|_| random_phase(&mut rng)).collect();
                    let mut found = None;
                    for _ in 0..self.opts.max_iterations {
                        iterations += 1;
                        let eta: Complex64 = b.iter().zip(&d).map(|(bi, di)| bi * di).sum();
                        let eres = eta.norm();
                        if eres <= tol {
                            found = Some(b.clone());
                            break;
                        }
                        best_eres = best_eres.min(eres);
                        let step = -eta / dnorm_sq;
                        for (bi, di) in b.iter_mut().zip(&d) {
                            *bi += di.conj() * step;
                            let mag = bi.norm();
                            if mag < 1e-300 {
                                *bi = random_phase(&mut rng);
                            } else {
                                *bi /= mag;
                            }
                        }
                    }
                    found
                }
            };

            if let Some(b) = b {
                let pair = WeightPair { a, b };
                let kappa: Complex64 = pair
                    .a
                    .iter()
                    .zip(&self.coeffs)
                    .map(|(ai, ci)| ai * ci)
                    .sum();
                let eta: Complex64 = pair
                    .a
                    .iter()
                    .zip(&pair.b)
                    .zip(&self.coeffs)
                    .map(|((ai, bi), ci)| ai * bi * ci)
                    .sum();
                let report = SynthesisReport {
                    kappa_residual: (kappa - Complex64::new(1.0, 0.0)).norm(),
                    eta_residual: eta.norm(),
                    iterations,
                    seed: Some(seed),
                };
                if report.passes(tol) {
                    return Ok((pair, report));
                }
                best_kres = best_kres.min(report.kappa_residual);
                best_eres = best_eres.min(report.eta_residual);
            }
        }

        Err(Error::SynthesisFailed {
            attempts: self.opts.max_attempts.max(1),
            kappa_residual: best_kres,
            eta_residual: best_eres,
        })
    }
}

fn random_phase(rng: &mut impl Rng) -> Complex64 {
    Complex64::cis(TAU * rng.random::<f64>())
}

/// Draws one pair meeting the receiver-directed constraints at residual
/// bound `tol`, from the given seed. Distinct seeds give distinct pairs.
pub fn synthesize_weights(
    cfg: &ArrayConfig,
    bob: &ObservationPoint,
    t: f64,
    mode: ChannelMode,
    seed: u64,
    tol: f64,
) -> Result<(WeightPair, SynthesisReport)> {
    let opts = SynthesisOptions {
        tolerance: tol,
        ..SynthesisOptions::default()
    };
    Synthesizer::with_options(cfg, bob, t, mode, opts)?.draw(seed)
}

/// Reports the constraint residuals of an arbitrary pair at the receiver.
/// Report-only: residuals above `tol` simply fail `passes`, they are not
/// an error.
pub fn verify_weights(
    weights: &WeightPair,
    cfg: &ArrayConfig,
    bob: &ObservationPoint,
    t: f64,
    mode: ChannelMode,
) -> Result<SynthesisReport> {
    let resp = SteeringComponents::compute(cfg, bob, t).response(weights, mode)?;
    Ok(SynthesisReport {
        kappa_residual: (resp.kappa - Complex64::new(1.0, 0.0)).norm(),
        eta_residual: resp.eta.norm(),
        iterations: 0,
        seed: None,
    })
}

// ---------------------------------------------------------------------------
// CSV interchange
// ---------------------------------------------------------------------------

/// Header of the interchange format.
pub const WEIGHTS_CSV_HEADER: &str = "n,re_a,im_a,re_b,im_b";

/// Writes one pair in the interchange format, rows ordered `n = -N..=N`.
pub fn write_weights_csv<W: Write>(out: &mut W, weights: &WeightPair) -> Result<()> {
    let m = weights.elements() as i64;
    let half = (m - 1) / 2;
    writeln!(out, "{WEIGHTS_CSV_HEADER}")?;
    for (i, n) in (-half..=half).enumerate() {
        writeln!(
            out,
            "{},{},{},{},{}",
            n, weights.a[i].re, weights.a[i].im, weights.b[i].re, weights.b[i].im
        )?;
    }
    Ok(())
}

/// Reads one pair in the interchange format. Rows must carry contiguous
/// indices `-N..=N` in ascending order.
pub fn read_weights_csv<R: Read>(input: R) -> Result<WeightPair> {
    let reader = BufReader::new(input);
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut indices = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 {
            if line != WEIGHTS_CSV_HEADER {
                return Err(Error::WeightsCsv {
                    line: 1,
                    message: format!("expected header `{WEIGHTS_CSV_HEADER}`, found `{line}`"),
                });
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::WeightsCsv {
                line: lineno + 1,
                message: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|e| Error::WeightsCsv {
                line: lineno + 1,
                message: format!("bad {what} `{s}`: {e}"),
            })
        };
        let n: i64 = fields[0].trim().parse().map_err(|e| Error::WeightsCsv {
            line: lineno + 1,
            message: format!("bad element index `{}`: {e}", fields[0]),
        })?;
        indices.push(n);
        a.push(Complex64::new(
            parse(fields[1], "re_a")?,
            parse(fields[2], "im_a")?,
        ));
        b.push(Complex64::new(
            parse(fields[3], "re_b")?,
            parse(fields[4], "im_b")?,
        ));
    }
    let m = indices.len() as i64;
    if m == 0 || m % 2 == 0 {
        return Err(Error::WeightsCsv {
            line: 0,
            message: format!("expected an odd number of element rows, found {m}"),
        });
    }
    let half = (m - 1) / 2;
    for (i, n) in (-half..=half).enumerate() {
        if indices[i] != n {
            return Err(Error::WeightsCsv {
                line: i + 2,
                message: format!("expected element index {n}, found {}", indices[i]),
            });
        }
    }
    Ok(WeightPair { a, b })
}
