//! Minimal end-to-end run: synthesize a weight pair for the reference
//! receiver, then estimate its BER at 10 dB.
//!
//! Run with: cargo run -p fdadm-core --example receiver_ber

use fdadm_core::*;

fn main() -> Result<()> {
    let f0 = 10.0e9;
    let array = ArrayConfig::new(3, f0, 2.0e3, 1.0, 4.25 * SPEED_OF_LIGHT / f0)?;
    let bob = ObservationPoint::from_degrees(150.0e3, 40.0, 70.0)?;
    let t = bob.range_m() / SPEED_OF_LIGHT;

    let (weights, report) =
        synthesize_weights(&array, &bob, t, ChannelMode::TwoRayMultipath, 42, 1e-9)?;
    println!(
        "synthesized {} elements: |kappa-1| = {:.2e}, |eta| = {:.2e}",
        weights.elements(),
        report.kappa_residual,
        report.eta_residual
    );

    let sigma2 = TransmitConfig::noise_for_receiver_snr(1.0, 0.6, db_to_linear(10.0));
    let tx = TransmitConfig::from_beta1(1.0, 0.6, Modulation::Pi4Qpsk, sigma2)?;
    let ber = run_ber(&array, &tx, &bob, &bob, t, ChannelMode::TwoRayMultipath, 100_000, 0)?;
    println!("receiver BER at 10 dB: {:.2e}", ber.ber);
    Ok(())
}
