//! Sweep orchestration and CSV emission.
//!
//! Every sweep point derives its random substream from
//! `(master seed, point index)`, so output is byte-identical across runs
//! and across worker counts. Rows are emitted in grid order regardless of
//! completion order.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use fdadm_core::{
    achievable_rate, bob_rate, run_ber, secrecy_rate, seeds, sinr_from_response,
    steering_components, verify_weights, EveSet, ObservationPoint, SteeringComponents,
    Synthesizer, SynthesisReport, WeightPair,
};

use crate::config::{EveSection, Experiment, SweepVariable};
use crate::CliError;

/// One rendered CSV artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvOutput {
    pub filename: String,
    pub content: String,
}

/// Draws the configured eavesdropper constellation from its own seed.
/// Locations are uniform over the configured ranges; a draw landing
/// exactly on the receiver is redrawn.
pub fn sample_eves(section: &EveSection, bob: &ObservationPoint) -> Result<EveSet, CliError> {
    if section.count == 0 {
        return Err(CliError::Config(
            "config field `eves.count`: must be >= 1".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(section.seed);
    let mut points = Vec::with_capacity(section.count);
    let mut guard = 0;
    while points.len() < section.count {
        let r = sample_range(&mut rng, section.r_range_m);
        let theta = sample_range(&mut rng, section.theta_range_deg);
        let psi = sample_range(&mut rng, section.psi_range_deg);
        let p = ObservationPoint::from_degrees(r, theta, psi)
            .map_err(|e| CliError::Config(format!("eves: sampled invalid point: {e}")))?;
        let coincides = p.range_m() == bob.range_m()
            && p.elevation_rad() == bob.elevation_rad()
            && p.azimuth_rad() == bob.azimuth_rad();
        if !coincides {
            points.push(p);
        } else {
            guard += 1;
            if guard > 100 {
                return Err(CliError::Config(
                    "eves: sampling ranges collapse onto the receiver location".to_string(),
                ));
            }
        }
    }
    EveSet::new(points, bob).map_err(|e| CliError::Config(format!("eves: {e}")))
}

fn sample_range(rng: &mut impl Rng, range: [f64; 2]) -> f64 {
    range[0] + rng.random::<f64>() * (range[1] - range[0])
}

fn observation_at(
    exp: &Experiment,
    variable: SweepVariable,
    value: f64,
) -> Result<ObservationPoint, CliError> {
    let (r, theta, psi) = match variable {
        SweepVariable::R | SweepVariable::EveR => {
            (value, exp.bob.elevation_deg(), exp.bob.azimuth_deg())
        }
        SweepVariable::Theta | SweepVariable::EveTheta => {
            (exp.bob.range_m(), value, exp.bob.azimuth_deg())
        }
        SweepVariable::Psi | SweepVariable::EvePsi => {
            (exp.bob.range_m(), exp.bob.elevation_deg(), value)
        }
        other => {
            return Err(CliError::Config(format!(
                "sweep variable `{}` does not define a single observation coordinate",
                other.name()
            )))
        }
    };
    ObservationPoint::from_degrees(r, theta, psi)
        .map_err(|e| CliError::Config(format!("sweep value {value}: {e}")))
}

/// Monte Carlo BER along an observation-coordinate sweep through the
/// receiver's location. The transmitter always targets the configured
/// receiver; only the evaluation point moves.
pub fn run_ber_sweep(exp: &Experiment) -> Result<CsvOutput, CliError> {
    match exp.sweep_variable {
        SweepVariable::R | SweepVariable::Theta | SweepVariable::Psi => {}
        other => {
            return Err(CliError::Config(format!(
                "ber-sweep needs sweep variable r, theta, or psi (got `{}`)",
                other.name()
            )))
        }
    }
    let rows: Vec<String> = exp
        .grid
        .par_iter()
        .enumerate()
        .map(|(i, &value)| -> Result<String, CliError> {
            let p = observation_at(exp, exp.sweep_variable, value)?;
            let result = run_ber(
                &exp.array,
                &exp.tx,
                &p,
                &exp.bob,
                exp.time_s,
                exp.mode,
                exp.mc.symbols,
                seeds::derive_seed(exp.mc.seed, i as u64),
            )?;
            Ok(format!(
                "{},{},{},{},{}",
                value,
                result.ber,
                result.standard_error(exp.tx.modulation()),
                result.trials,
                exp.mode
            ))
        })
        .collect::<Result<_, _>>()?;

    let mut content = String::from("sweep_value,ber,stderr,trials,mode\n");
    for row in rows {
        content.push_str(&row);
        content.push('\n');
    }
    Ok(CsvOutput {
        filename: format!("ber_sweep_{}_{}.csv", exp.sweep_variable.name(), exp.mode),
        content,
    })
}

/// Squared channel gains per weight draw at one point.
fn response_cache(
    steer: &SteeringComponents,
    pairs: &[WeightPair],
    exp: &Experiment,
) -> Result<Vec<(f64, f64)>, CliError> {
    pairs
        .iter()
        .map(|w| {
            let resp = steer.response(w, exp.mode)?;
            Ok((resp.kappa.norm_sqr(), resp.eta.norm_sqr()))
        })
        .collect()
}

fn draw_pairs(exp: &Experiment) -> Result<Vec<WeightPair>, CliError> {
    let synthesizer = Synthesizer::new(&exp.array, &exp.bob, exp.time_s, exp.mode)?;
    (0..exp.mc.rate_draws)
        .into_par_iter()
        .map(|d| {
            synthesizer
                .draw(seeds::derive_seed(exp.mc.seed, d as u64))
                .map(|(pair, _)| pair)
                .map_err(CliError::from)
        })
        .collect()
}

/// Secrecy-rate sweeps.
///
/// The reported rate is the mean over `mc.rate_draws` weight redraws of
/// the clamped per-draw secrecy rate, i.e. the long-run value of a link
/// whose weights are regenerated every symbol. Variable `snr` sweeps the
/// receiver operating point against the configured eavesdropper set;
/// `eve_*` variables probe a single eavesdropper moved over the grid
/// (the other coordinates stay at the receiver's), and `eve_r_theta`
/// produces the 2-D heatmap in row-major order (range outer, elevation
/// inner).
pub fn run_secrecy_sweep(exp: &Experiment) -> Result<CsvOutput, CliError> {
    let beta1 = exp.tx.beta1();
    let pairs = draw_pairs(exp)?;

    let (header, rows): (&str, Vec<String>) = match exp.sweep_variable {
        SweepVariable::Snr => {
            let eves = sample_eves(&exp.eves, &exp.bob)?;
            let caches: Vec<Vec<(f64, f64)>> = eves
                .points()
                .par_iter()
                .map(|eve| {
                    let steer = steering_components(&exp.array, eve, exp.time_s);
                    response_cache(&steer, &pairs, exp)
                })
                .collect::<Result<_, _>>()?;
            let rows = exp
                .grid
                .par_iter()
                .map(|&snr_db| -> Result<String, CliError> {
                    let tx = exp.tx_at_snr(snr_db)?;
                    let zb = bob_rate(&tx);
                    let mut acc = 0.0;
                    for d in 0..pairs.len() {
                        let worst = caches
                            .iter()
                            .map(|c| achievable_rate(sinr_from_response(&tx, c[d].0, c[d].1)))
                            .fold(f64::NEG_INFINITY, f64::max);
                        acc += (zb - worst).max(0.0);
                    }
                    Ok(format!(
                        "{},{},{},{}",
                        snr_db,
                        acc / pairs.len() as f64,
                        eves.len(),
                        beta1
                    ))
                })
                .collect::<Result<_, _>>()?;
            ("snr_db,secrecy_rate,v,beta1", rows)
        }
        SweepVariable::EveR | SweepVariable::EveTheta | SweepVariable::EvePsi => {
            let zb = bob_rate(&exp.tx);
            let rows = exp
                .grid
                .par_iter()
                .map(|&value| -> Result<String, CliError> {
                    let probe = observation_at(exp, exp.sweep_variable, value)?;
                    let zsec = mean_probe_secrecy(exp, &pairs, &probe, zb)?;
                    Ok(format!("{},{},1,{}", value, zsec, beta1))
                })
                .collect::<Result<_, _>>()?;
            let header = match exp.sweep_variable {
                SweepVariable::EveR => "eve_r_m,secrecy_rate,v,beta1",
                SweepVariable::EveTheta => "eve_theta_deg,secrecy_rate,v,beta1",
                _ => "eve_psi_deg,secrecy_rate,v,beta1",
            };
            (header, rows)
        }
        SweepVariable::EveRTheta => {
            let zb = bob_rate(&exp.tx);
            let thetas = exp.second_grid.as_ref().expect("validated by resolve");
            let cells: Vec<(f64, f64)> = exp
                .grid
                .iter()
                .flat_map(|&r| thetas.iter().map(move |&th| (r, th)))
                .collect();
            let rows = cells
                .par_iter()
                .map(|&(r, th)| -> Result<String, CliError> {
                    let probe = ObservationPoint::from_degrees(r, th, exp.bob.azimuth_deg())
                        .map_err(|e| {
                            CliError::Config(format!("sweep cell ({r}, {th}): {e}"))
                        })?;
                    let zsec = mean_probe_secrecy(exp, &pairs, &probe, zb)?;
                    Ok(format!("{},{},{},1,{}", r, th, zsec, beta1))
                })
                .collect::<Result<_, _>>()?;
            ("eve_r_m,eve_theta_deg,secrecy_rate,v,beta1", rows)
        }
        other => {
            return Err(CliError::Config(format!(
                "secrecy-sweep needs sweep variable snr, eve_r, eve_theta, eve_psi, \
                 or eve_r_theta (got `{}`)",
                other.name()
            )))
        }
    };

    let mut content = String::with_capacity(rows.len() * 32 + header.len() + 1);
    content.push_str(header);
    content.push('\n');
    for row in rows {
        content.push_str(&row);
        content.push('\n');
    }
    Ok(CsvOutput {
        filename: format!(
            "secrecy_sweep_{}_{}.csv",
            exp.sweep_variable.name(),
            exp.mode
        ),
        content,
    })
}

fn mean_probe_secrecy(
    exp: &Experiment,
    pairs: &[WeightPair],
    probe: &ObservationPoint,
    zb: f64,
) -> Result<f64, CliError> {
    let steer = steering_components(&exp.array, probe, exp.time_s);
    let mut acc = 0.0;
    for w in pairs {
        let resp = steer.response(w, exp.mode)?;
        let rate = achievable_rate(sinr_from_response(
            &exp.tx,
            resp.kappa.norm_sqr(),
            resp.eta.norm_sqr(),
        ));
        acc += secrecy_rate(zb, &[rate]);
    }
    Ok(acc / pairs.len() as f64)
}

/// Header of the multi-draw weights CSV.
pub const DRAWS_CSV_HEADER: &str = "draw_index,n,re_a,im_a,re_b,im_b";

/// Synthesizes `count` independent weight pairs and renders them as CSV.
pub fn emit_weights(exp: &Experiment, count: usize) -> Result<CsvOutput, CliError> {
    if count == 0 {
        return Err(CliError::Config("weights: count must be >= 1".to_string()));
    }
    let synthesizer = Synthesizer::new(&exp.array, &exp.bob, exp.time_s, exp.mode)?;
    let half = exp.array.half_count() as i64;
    let mut content = String::from(DRAWS_CSV_HEADER);
    content.push('\n');
    for draw in 0..count {
        let (pair, report) = synthesizer.draw(seeds::derive_seed(exp.mc.seed, draw as u64))?;
        debug_assert!(report.passes(synthesizer.options().tolerance));
        for (i, n) in (-half..=half).enumerate() {
            content.push_str(&format!(
                "{},{},{},{},{},{}\n",
                draw, n, pair.a[i].re, pair.a[i].im, pair.b[i].re, pair.b[i].im
            ));
        }
    }
    Ok(CsvOutput {
        filename: format!("weights_{}.csv", exp.mode),
        content,
    })
}

/// Verification outcome for one stored pair.
#[derive(Debug, Clone)]
pub struct VerifiedPair {
    pub label: String,
    pub report: SynthesisReport,
    pub pass: bool,
}

/// Verifies every pair in a weights CSV (either the single-pair
/// interchange format or the multi-draw format) against the experiment's
/// receiver constraints. Report-only: failures are recorded, not errors.
pub fn verify_weights_file(
    exp: &Experiment,
    path: &Path,
    tol: f64,
) -> Result<Vec<VerifiedPair>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let pairs = parse_weights_text(&text)?;
    pairs
        .into_iter()
        .map(|(label, pair)| {
            let report = verify_weights(&pair, &exp.array, &exp.bob, exp.time_s, exp.mode)?;
            Ok(VerifiedPair {
                label,
                pass: report.passes(tol),
                report,
            })
        })
        .collect()
}

fn parse_weights_text(text: &str) -> Result<Vec<(String, WeightPair)>, CliError> {
    let first = text.lines().next().unwrap_or("").trim();
    if first == fdadm_core::WEIGHTS_CSV_HEADER {
        let pair = fdadm_core::read_weights_csv(text.as_bytes())?;
        return Ok(vec![("pair".to_string(), pair)]);
    }
    if first != DRAWS_CSV_HEADER {
        return Err(CliError::Config(format!(
            "weights csv: unrecognized header `{first}`"
        )));
    }
    // Multi-draw format: contiguous blocks per draw index, ascending n.
    let mut out: Vec<(String, WeightPair)> = Vec::new();
    let mut current: Option<(String, WeightPair)> = None;
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CliError::Config(format!(
                "weights csv line {}: expected 6 fields, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64, CliError> {
            s.trim().parse().map_err(|e| {
                CliError::Config(format!("weights csv line {}: bad number `{s}`: {e}", lineno + 1))
            })
        };
        let label = fields[0].trim().to_string();
        let a = num_complex::Complex64::new(parse(fields[2])?, parse(fields[3])?);
        let b = num_complex::Complex64::new(parse(fields[4])?, parse(fields[5])?);
        match &mut current {
            Some((l, pair)) if *l == label => {
                pair.a.push(a);
                pair.b.push(b);
            }
            _ => {
                if let Some(done) = current.take() {
                    out.push(done);
                }
                current = Some((
                    label,
                    WeightPair {
                        a: vec![a],
                        b: vec![b],
                    },
                ));
            }
        }
    }
    if let Some(done) = current.take() {
        out.push(done);
    }
    if out.is_empty() {
        return Err(CliError::Config(
            "weights csv: no data rows found".to_string(),
        ));
    }
    Ok(out)
}

/// Writes an artifact under the output directory, creating it as needed.
pub fn write_output(dir: &Path, csv: &CsvOutput) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
    let path = dir.join(&csv.filename);
    std::fs::write(&path, csv.content.as_bytes())
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    Ok(path)
}
