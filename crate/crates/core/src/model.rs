//! Physical and radio models: rotary-wing propulsion power, battery range,
//! probabilistic LoS pathloss and the coverage radius derived from it.
//!
//! All formulas are pure functions over validated parameter structs. Power is
//! in watts, energy in joules, distances in metres, speeds in m/s, angles in
//! degrees and link quantities in dB.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rotor and airframe constants of the propulsion power model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    /// Profile drag coefficient.
    pub delta_p: f64,
    /// Number of rotors.
    pub rotors: f64,
    /// Blades per rotor.
    pub blades: f64,
    /// Blade chord length (m).
    pub chord: f64,
    /// Rotor radius (m).
    pub rotor_radius: f64,
    /// Blade tip speed (m/s).
    pub v_tip: f64,
    /// Incremental correction factor of induced power.
    pub k_cf: f64,
    /// Fuselage equivalent flat-plate area (m^2).
    pub s_fp: f64,
    /// Air density (kg/m^3).
    pub rho: f64,
    /// Gravitational acceleration (m/s^2).
    pub g: f64,
}

impl PowerParams {
    /// Quadcopter reference configuration used throughout the test suite.
    pub fn reference() -> Self {
        PowerParams {
            delta_p: 0.012,
            rotors: 4.0,
            blades: 4.0,
            chord: 0.0157,
            rotor_radius: 0.07,
            v_tip: 14.0,
            k_cf: 0.1,
            s_fp: 0.03,
            rho: 1.225,
            g: 9.807,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("delta_p", self.delta_p),
            ("rotors", self.rotors),
            ("blades", self.blades),
            ("chord", self.chord),
            ("rotor_radius", self.rotor_radius),
            ("v_tip", self.v_tip),
            ("k_cf", self.k_cf),
            ("s_fp", self.s_fp),
            ("rho", self.rho),
            ("g", self.g),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::param(name, format!("must be finite and > 0, got {value}")));
            }
        }
        Ok(())
    }

    /// Blade profile power at hover.
    pub fn blade_profile_power(&self) -> f64 {
        self.delta_p * self.rho / 8.0
            * (self.rotors * self.blades * self.chord * self.rotor_radius)
            * self.v_tip.powi(3)
    }

    fn disc_term(&self) -> f64 {
        2.0 * self.rho * self.rotors * std::f64::consts::PI * self.rotor_radius.powi(2)
    }

    /// Induced power at hover for total weight `w` (kg).
    pub fn induced_power(&self, w: f64) -> f64 {
        (1.0 + self.k_cf) * (w * self.g).powf(1.5) / self.disc_term().sqrt()
    }

    /// Mean rotor induced velocity at hover for total weight `w` (kg).
    pub fn hover_induced_speed(&self, w: f64) -> f64 {
        (w * self.g / self.disc_term()).sqrt()
    }

    /// Propulsion power at speed `v` and total weight `w`. Inputs are assumed
    /// valid; use [`propulsion_power`] for checked evaluation.
    pub fn power(&self, v: f64, w: f64) -> f64 {
        let p1 = self.blade_profile_power();
        let p2 = self.induced_power(w);
        let v0 = self.hover_induced_speed(w);
        let r = v / v0;
        let r2 = r * r;
        let induced = ((1.0 + 0.25 * r2 * r2).sqrt() - 0.5 * r2).sqrt();
        p1 * (1.0 + 3.0 * (v / self.v_tip).powi(2)) + p2 * induced + 0.5 * self.s_fp * self.rho * v.powi(3)
    }
}

/// Battery usability constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryParams {
    /// Energy density of a fully charged battery (J/kg).
    pub eps_batt: f64,
    /// Depth of discharge.
    pub gamma: f64,
    /// Fraction of battery energy transferable to the airframe.
    pub eta: f64,
    /// Energy reserving factor.
    pub r_safe: f64,
}

impl BatteryParams {
    pub fn reference() -> Self {
        BatteryParams {
            eps_batt: 540_000.0,
            gamma: 0.7,
            eta: 0.7,
            r_safe: 1.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_batt.is_finite() && self.eps_batt > 0.0) {
            return Err(Error::param("eps_batt", "must be finite and > 0"));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::param("gamma", "must lie in (0, 1)"));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::param("eta", "must lie in (0, 1)"));
        }
        if !(self.r_safe.is_finite() && self.r_safe > 1.0) {
            return Err(Error::param("r_safe", "must be finite and > 1"));
        }
        Ok(())
    }

    /// Battery capacity (J) of a battery weighing `w2` kg.
    pub fn capacity(&self, w2: f64) -> f64 {
        self.eps_batt * w2
    }

    /// Energy (J) that may be drawn from a full battery of weight `w2`.
    pub fn usable_energy(&self, w2: f64) -> f64 {
        self.gamma * self.capacity(w2) / self.r_safe
    }
}

/// Finite ascending set of admissible speeds, always containing 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SpeedSet(Vec<f64>);

impl SpeedSet {
    pub fn new(speeds: Vec<f64>) -> Result<Self> {
        if speeds.first() != Some(&0.0) {
            return Err(Error::param("speeds", "must start with 0"));
        }
        if speeds.len() < 2 {
            return Err(Error::param("speeds", "needs at least one positive speed"));
        }
        if speeds.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("speeds", "must be finite"));
        }
        if speeds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("speeds", "must be strictly ascending"));
        }
        Ok(SpeedSet(speeds))
    }

    /// `{0, step, 2*step, ..., max}`.
    pub fn uniform(step: f64, max: f64) -> Result<Self> {
        if !(step > 0.0 && max >= step) {
            return Err(Error::param("speeds", "uniform grid needs 0 < step <= max"));
        }
        let count = (max / step + 1e-9).floor() as usize;
        SpeedSet::new((0..=count).map(|k| k as f64 * step).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Positive speeds in ascending order.
    pub fn positive(&self) -> &[f64] {
        &self.0[1..]
    }

    pub fn max(&self) -> f64 {
        *self.0.last().expect("speed set is non-empty")
    }

    pub fn contains(&self, v: f64) -> bool {
        self.0.iter().any(|&s| (s - v).abs() <= 1e-12 * s.abs().max(1.0))
    }
}

impl TryFrom<Vec<f64>> for SpeedSet {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        SpeedSet::new(v)
    }
}

impl From<SpeedSet> for Vec<f64> {
    fn from(s: SpeedSet) -> Self {
        s.0
    }
}

/// Complete UAV description: weights, speed set, power and battery models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavParams {
    /// Body weight (kg).
    pub w1: f64,
    /// Battery weight (kg).
    pub w2: f64,
    /// Payload weight (kg).
    pub w3: f64,
    pub speeds: SpeedSet,
    pub power: PowerParams,
    pub battery: BatteryParams,
}

impl UavParams {
    /// 1.07 kg body, 0.9 kg battery, 1 kg payload, speeds 0..=30 m/s.
    pub fn reference() -> Self {
        UavParams {
            w1: 1.07,
            w2: 0.9,
            w3: 1.0,
            speeds: SpeedSet::uniform(1.0, 30.0).expect("static speed grid"),
            power: PowerParams::reference(),
            battery: BatteryParams::reference(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w1.is_finite() && self.w1 > 0.0) {
            return Err(Error::param("w1", "must be finite and > 0"));
        }
        if !(self.w2.is_finite() && self.w2 > 0.0) {
            return Err(Error::param("w2", "must be finite and > 0"));
        }
        if !(self.w3.is_finite() && self.w3 >= 0.0) {
            return Err(Error::param("w3", "must be finite and >= 0"));
        }
        SpeedSet::new(self.speeds.0.clone())?;
        self.power.validate()?;
        self.battery.validate()
    }

    pub fn total_weight(&self) -> f64 {
        self.w1 + self.w2 + self.w3
    }

    pub fn with_payload(&self, w3: f64) -> Self {
        UavParams { w3, ..self.clone() }
    }

    pub fn with_speeds(&self, speeds: SpeedSet) -> Self {
        UavParams { speeds, ..self.clone() }
    }

    /// Propulsion power at speed `v` for this UAV's total weight.
    pub fn power_at(&self, v: f64) -> f64 {
        self.power.power(v, self.total_weight())
    }

    /// Battery energy drained per metre at speed `v > 0`.
    pub fn energy_per_metre(&self, v: f64) -> f64 {
        self.power_at(v) / (self.battery.eta * v)
    }

    /// Energy available between two swaps.
    pub fn flight_budget(&self) -> f64 {
        self.battery.usable_energy(self.w2)
    }

    /// Range at constant speed `v` on a full battery.
    pub fn range(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        v * self.battery.eta * self.flight_budget() / self.power_at(v)
    }

    /// Positive speed minimising energy per metre; ties go to the faster speed.
    pub fn energy_optimal_speed(&self) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        for &v in self.speeds.positive() {
            let e = self.energy_per_metre(v);
            if e <= best.0 {
                best = (e, v);
            }
        }
        best.1
    }
}

fn check_speed_weight(v: f64, w: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::param("v", format!("speed must be finite and >= 0, got {v}")));
    }
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::param("w", format!("weight must be finite and > 0, got {w}")));
    }
    Ok(())
}

/// Propulsion power (W) at speed `v` and total weight `w`.
pub fn propulsion_power(v: f64, w: f64, p: &PowerParams) -> Result<f64> {
    check_speed_weight(v, w)?;
    p.validate()?;
    Ok(p.power(v, w))
}

/// Maximum distance flown at constant speed `v` on one full battery of
/// weight `w2`, with total weight `w`. Zero at `v = 0`.
pub fn max_flight_distance(v: f64, w: f64, w2: f64, up: &UavParams) -> Result<f64> {
    check_speed_weight(v, w)?;
    if !(w2.is_finite() && w2 > 0.0) {
        return Err(Error::param("w2", "battery weight must be finite and > 0"));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let b = &up.battery;
    Ok(v * b.gamma * b.eta * b.capacity(w2) / (b.r_safe * up.power.power(v, w)))
}

/// Radio link constants for the probabilistic LoS channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommParams {
    /// UAV altitude (m).
    pub h: f64,
    /// Base-station antenna height (m).
    pub h_bs: f64,
    /// Hard SINR threshold (dB).
    pub sinr_th: f64,
    /// SNR at 1 m in free space (dB).
    pub snr_ref: f64,
    pub mu1: f64,
    pub mu2: f64,
    /// Excess pathloss for LoS links (dB).
    pub zeta1: f64,
    /// Excess pathloss for NLoS links (dB).
    pub zeta2: f64,
}

impl CommParams {
    /// Suburban reference parameters (H = 100 m, H_BS = 35 m).
    pub fn reference() -> Self {
        CommParams {
            h: 100.0,
            h_bs: 35.0,
            sinr_th: 12.0,
            snr_ref: 95.0,
            mu1: 4.880,
            mu2: 0.429,
            zeta1: 0.1,
            zeta2: 21.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.h,
            self.h_bs,
            self.sinr_th,
            self.snr_ref,
            self.mu1,
            self.mu2,
            self.zeta1,
            self.zeta2,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("comm", "all fields must be finite"));
        }
        if !(self.h > self.h_bs && self.h_bs >= 0.0) {
            return Err(Error::param("h", "need h > h_bs >= 0"));
        }
        if !(self.zeta2 >= self.zeta1 && self.zeta1 >= 0.0) {
            return Err(Error::param("zeta2", "need zeta2 >= zeta1 >= 0"));
        }
        if !(self.mu1 > 0.0 && self.mu2 > 0.0) {
            return Err(Error::param("mu1", "mu1 and mu2 must be > 0"));
        }
        Ok(())
    }

    fn height_gap(&self) -> f64 {
        self.h - self.h_bs
    }
}

/// Probability of a line-of-sight link at elevation `theta` (degrees).
pub fn los_probability(theta: f64, c: &CommParams) -> f64 {
    1.0 / (1.0 + c.mu1 * (-c.mu2 * (theta - c.mu1)).exp())
}

/// Expected SNR (dB) at horizontal distance `r` from a base station.
pub fn expected_snr(r: f64, c: &CommParams) -> f64 {
    let dh = c.height_gap();
    let r = r.max(0.0);
    let d3 = r.hypot(dh);
    let theta = if r == 0.0 { 90.0 } else { dh.atan2(r).to_degrees() };
    let p = los_probability(theta, c);
    c.snr_ref - 20.0 * d3.log10() - (p * c.zeta1 + (1.0 - p) * c.zeta2)
}

const COVERAGE_BRACKET_M: f64 = 1.0e6;
const COVERAGE_TOL_M: f64 = 1.0e-3;
const COVERAGE_MAX_ITER: usize = 200;

/// Horizontal distance at which the expected SNR falls to the threshold.
pub fn base_coverage_radius(c: &CommParams) -> Result<f64> {
    c.validate()?;
    let at_zero = expected_snr(0.0, c);
    if at_zero < c.sinr_th {
        return Err(Error::NoCoverage {
            snr_db: at_zero,
            threshold_db: c.sinr_th,
        });
    }
    let (mut lo, mut hi) = (0.0_f64, COVERAGE_BRACKET_M);
    if expected_snr(hi, c) >= c.sinr_th {
        return Ok(hi);
    }
    for _ in 0..COVERAGE_MAX_ITER {
        if hi - lo <= COVERAGE_TOL_M {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if expected_snr(mid, c) >= c.sinr_th {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
