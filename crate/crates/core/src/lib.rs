//! Frequency-diverse-array directional modulation over a two-ray
//! ground-reflection channel.
//!
//! The transmitter is a symmetric FDA whose per-element excitations and
//! artificial-noise coefficients are redrawn every symbol under two
//! receiver-directed constraints: the useful symbol arrives with unit gain
//! and the injected noise cancels. Everywhere else the constellation is
//! scrambled and jammed, which is what makes the link location-selective in
//! range and angle at once.
//!
//! Module map:
//!
//! * [`geometry`] — array layout, frequency schedule, far-field path lengths
//! * [`channel`] — steering components, ray fields, aggregate gains
//! * [`synthesis`] — randomized constraint-satisfying weight generation
//! * [`metrics`] — transmit model, Monte Carlo BER, SNR/SINR/secrecy rates
//! * [`seeds`] — order-independent substream derivation

pub mod channel;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod seeds;
pub mod synthesis;

pub use channel::{
    channel_response, los_field, nlos_field, steering_components, total_field, ChannelMode,
    ChannelResponse, SteeringComponents, GROUND_REFLECTION_COEFF,
};
pub use error::{Error, Result};
pub use geometry::{
    element_frequency, element_frequency_offset, element_position, path_lengths, ArrayConfig,
    ObservationPoint, DEFAULT_INCREMENT_GUARD, SPEED_OF_LIGHT,
};
pub use metrics::{
    achievable_rate, bob_rate, db_to_linear, rate_analysis, received_sample, run_ber,
    secrecy_rate, sinr, sinr_from_response, snr, standard_complex_gaussian, BerResult, EveSet,
    Modulation, RateResult, TransmitConfig,
};
pub use synthesis::{
    read_weights_csv, synthesize_weights, verify_weights, write_weights_csv, AnPolicy,
    SynthesisOptions, SynthesisReport, Synthesizer, WeightPair, WEIGHTS_CSV_HEADER,
};
