//! Shared fixtures for the benchmark targets.

use fdadm_core::{ArrayConfig, ObservationPoint, SPEED_OF_LIGHT};

/// The reference 7-element array: 10 GHz carrier, 2 kHz log increment,
/// height 4.25 wavelengths.
pub fn reference_array() -> ArrayConfig {
    let f0 = 10.0e9;
    ArrayConfig::new(3, f0, 2.0e3, 1.0, 4.25 * SPEED_OF_LIGHT / f0).unwrap()
}

/// The reference receiver at (150 km, 40 deg, 70 deg).
pub fn reference_receiver() -> ObservationPoint {
    ObservationPoint::from_degrees(150.0e3, 40.0, 70.0).unwrap()
}

/// Wavefront-arrival evaluation time for the reference receiver.
pub fn reference_time() -> f64 {
    150.0e3 / SPEED_OF_LIGHT
}
