//! Array geometry and observation-point coordinates.
//!
//! The transmitter is a symmetric (2N+1)-element frequency diverse array,
//! linearly spaced along the x-axis at height `h0` above a ground plane.
//! Element `n` (for `n = -N..=N`) sits at `(n*d, 0, h0)` and radiates at
//!
//! ```text
//! f_n = f0 + delta_f * g * ln(|n| + 1)
//! ```
//!
//! An observation point `(r, theta, psi)` in polar coordinates has direction
//! cosines `u = cos(theta) cos(psi)` and `v = sin(theta)`. In the far field
//! the direct and ground-reflected path lengths from element `n` reduce to
//!
//! ```text
//! r_los  = r - n*d*u - h0*v
//! r_nlos = r - n*d*u + h0*v
//! ```
//!
//! where the reflected path is the line-of-sight path of the image element
//! at `(n*d, 0, -h0)`.

use crate::error::{Error, Result};

/// Propagation speed in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default ceiling on `|delta_f| / f0`; schedules above it are still usable
/// but the narrowband assumptions behind the channel model start to erode.
pub const DEFAULT_INCREMENT_GUARD: f64 = 1e-3;

/// Geometry and frequency schedule of the symmetric FDA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    half_count: u32,
    carrier_hz: f64,
    increment_hz: f64,
    increment_exponent: f64,
    spacing_m: f64,
    height_m: f64,
}

impl ArrayConfig {
    /// Builds an array with explicit element spacing.
    ///
    /// `half_count` is N; the array has `2N+1` elements. `increment_hz` is
    /// the base frequency increment and `increment_exponent` the factor `g`
    /// applied to the logarithmic schedule.
    pub fn with_spacing(
        half_count: u32,
        carrier_hz: f64,
        increment_hz: f64,
        increment_exponent: f64,
        spacing_m: f64,
        height_m: f64,
    ) -> Result<Self> {
        if half_count < 1 {
            return Err(Error::InvalidParameter {
                name: "half_count",
                value: half_count as f64,
                constraint: "must be >= 1",
            });
        }
        for (name, value) in [
            ("carrier_hz", carrier_hz),
            ("spacing_m", spacing_m),
            ("height_m", height_m),
        ] {
            if value <= 0.0 || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    constraint: "must be finite and > 0",
                });
            }
        }
        if !increment_hz.is_finite() || !increment_exponent.is_finite() {
            return Err(Error::InvalidParameter {
                name: "increment_hz/increment_exponent",
                value: increment_hz,
                constraint: "must be finite",
            });
        }
        Ok(Self {
            half_count,
            carrier_hz,
            increment_hz,
            increment_exponent,
            spacing_m,
            height_m,
        })
    }

    /// Builds an array with the conventional half-wavelength spacing
    /// `d = c / (2 f0)`.
    pub fn new(
        half_count: u32,
        carrier_hz: f64,
        increment_hz: f64,
        increment_exponent: f64,
        height_m: f64,
    ) -> Result<Self> {
        let spacing = SPEED_OF_LIGHT / (2.0 * carrier_hz);
        Self::with_spacing(
            half_count,
            carrier_hz,
            increment_hz,
            increment_exponent,
            spacing,
            height_m,
        )
    }

    pub fn half_count(&self) -> u32 {
        self.half_count
    }

    /// Total element count, `2N + 1`.
    pub fn elements(&self) -> usize {
        2 * self.half_count as usize + 1
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn increment_hz(&self) -> f64 {
        self.increment_hz
    }

    pub fn increment_exponent(&self) -> f64 {
        self.increment_exponent
    }

    pub fn spacing_m(&self) -> f64 {
        self.spacing_m
    }

    pub fn height_m(&self) -> f64 {
        self.height_m
    }

    /// Carrier wavelength `c / f0`.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// `|delta_f| / f0`, the narrowband figure of merit.
    pub fn increment_ratio(&self) -> f64 {
        self.increment_hz.abs() / self.carrier_hz
    }

    /// True when the schedule exceeds the given narrowband guard ratio.
    /// Callers decide whether to warn; this is never a hard error.
    pub fn exceeds_increment_guard(&self, guard: f64) -> bool {
        self.increment_ratio() >= guard
    }

    /// Iterates element indices `-N..=N`.
    pub fn element_indices(&self) -> impl Iterator<Item = i32> {
        let n = self.half_count as i32;
        -n..=n
    }

    fn check_index(&self, n: i32) -> Result<()> {
        if n.unsigned_abs() > self.half_count {
            return Err(Error::ElementIndexOutOfRange {
                index: n,
                half_count: self.half_count,
            });
        }
        Ok(())
    }
}

/// Receiver location in polar coordinates with cached direction cosines.
///
/// `u` and `v` are always derived from the stored angles at construction,
/// so the five fields can never disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationPoint {
    range_m: f64,
    elevation_rad: f64,
    azimuth_rad: f64,
    u: f64,
    v: f64,
}

impl ObservationPoint {
    /// Creates a point from range (meters) and angles in radians.
    pub fn new(range_m: f64, elevation_rad: f64, azimuth_rad: f64) -> Result<Self> {
        if range_m <= 0.0 || !range_m.is_finite() {
            return Err(Error::InvalidParameter {
                name: "range_m",
                value: range_m,
                constraint: "must be finite and > 0",
            });
        }
        if !elevation_rad.is_finite() || !azimuth_rad.is_finite() {
            return Err(Error::InvalidParameter {
                name: "elevation_rad/azimuth_rad",
                value: elevation_rad,
                constraint: "must be finite",
            });
        }
        Ok(Self {
            range_m,
            elevation_rad,
            azimuth_rad,
            u: elevation_rad.cos() * azimuth_rad.cos(),
            v: elevation_rad.sin(),
        })
    }

    /// Creates a point from range (meters) and angles in degrees, the unit
    /// used at configuration boundaries.
    pub fn from_degrees(range_m: f64, elevation_deg: f64, azimuth_deg: f64) -> Result<Self> {
        Self::new(
            range_m,
            elevation_deg.to_radians(),
            azimuth_deg.to_radians(),
        )
    }

    pub fn range_m(&self) -> f64 {
        self.range_m
    }

    pub fn elevation_rad(&self) -> f64 {
        self.elevation_rad
    }

    pub fn azimuth_rad(&self) -> f64 {
        self.azimuth_rad
    }

    pub fn elevation_deg(&self) -> f64 {
        self.elevation_rad.to_degrees()
    }

    pub fn azimuth_deg(&self) -> f64 {
        self.azimuth_rad.to_degrees()
    }

    /// Direction cosine `cos(theta) cos(psi)`.
    pub fn u(&self) -> f64 {
        self.u
    }

    /// Direction cosine `sin(theta)`.
    pub fn v(&self) -> f64 {
        self.v
    }

    /// Cartesian coordinates `r * (cos t cos p, cos t sin p, sin t)`.
    pub fn cartesian(&self) -> [f64; 3] {
        [
            self.range_m * self.u,
            self.range_m * self.elevation_rad.cos() * self.azimuth_rad.sin(),
            self.range_m * self.v,
        ]
    }
}

/// Position of element `n` as `(n*d, 0, h0)` in x/y/z order.
pub fn element_position(cfg: &ArrayConfig, n: i32) -> Result<[f64; 3]> {
    cfg.check_index(n)?;
    Ok([n as f64 * cfg.spacing_m, 0.0, cfg.height_m])
}

/// Radiated frequency of element `n`: `f0 + delta_f * g * ln(|n| + 1)`.
pub fn element_frequency(cfg: &ArrayConfig, n: i32) -> Result<f64> {
    cfg.check_index(n)?;
    Ok(cfg.carrier_hz + element_frequency_offset(cfg, n))
}

/// The increment part `delta_f * g * ln(|n| + 1)` alone; exact zero at n = 0.
pub fn element_frequency_offset(cfg: &ArrayConfig, n: i32) -> f64 {
    cfg.increment_hz * cfg.increment_exponent * ((n.unsigned_abs() as f64) + 1.0).ln()
}

/// Far-field path lengths `(los, nlos)` from element `n` to `p`.
///
/// `los = r - n*d*u - h0*v`, `nlos = r - n*d*u + h0*v`; the difference is
/// exactly `2*h0*v` for every element.
pub fn path_lengths(cfg: &ArrayConfig, n: i32, p: &ObservationPoint) -> Result<(f64, f64)> {
    cfg.check_index(n)?;
    let common = p.range_m - n as f64 * cfg.spacing_m * p.u;
    let hv = cfg.height_m * p.v;
    Ok((common - hv, common + hv))
}
