//! Order-of-magnitude error and lifetime estimates for a physical polymer.
//!
//! Frequencies are angular (rad/s), times in seconds, dipoles in C·m.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

pub const DEFAULT_TARGET_ERROR: f64 = 1e-6;
pub const DEFAULT_PULSES_PER_COMPUTATION: f64 = 1000.0;

/// Probability of driving a transition at `omega_prime` with a pulse of
/// length `t` tuned to `omega`.
pub fn prob_off_resonant(omega: f64, omega_prime: f64, t: f64) -> f64 {
    let x = (omega - omega_prime) * t;
    1.0 / (x * x + 1.0)
}

/// Error from a square pulse of length `t` spilling onto transitions shifted
/// by `delta_omega_on`.
pub fn prob_square_wave(t: f64, delta_omega_on: f64) -> f64 {
    (1.0 / (t * delta_omega_on)).powi(2).min(1.0)
}

/// Pulse length at which [`prob_square_wave`] equals `target`.
pub fn min_pulse_length(delta_omega_on: f64, target: f64) -> f64 {
    1.0 / (delta_omega_on * target.sqrt())
}

/// Error per operation from off-diagonal couplings.
pub fn prob_off_diagonal(delta_omega_off: f64, omega: f64) -> f64 {
    (delta_omega_off / omega).powi(2).min(1.0)
}

/// Bandwidth `δω_off^M / Δω^(M−1)` of exciton propagation, rad/s.
pub fn exciton_bandwidth(delta_omega_off: f64, spacing: f64, m: u32) -> f64 {
    delta_omega_off * (delta_omega_off / spacing).powi(m as i32 - 1)
}

/// Storage lifetime set by exciton propagation, the inverse bandwidth.
pub fn exciton_lifetime(delta_omega_off: f64, spacing: f64, m: u32) -> f64 {
    1.0 / exciton_bandwidth(delta_omega_off, spacing, m)
}

/// Spontaneous emission rate `ω³μ²/(3πε₀ħc³)`, 1/s.
pub fn spontaneous_rate(omega: f64, mu: f64) -> f64 {
    omega.powi(3) * mu * mu / (3.0 * std::f64::consts::PI * EPSILON_0 * HBAR * C_LIGHT.powi(3))
}

/// Dipole moment giving spontaneous lifetime `lifetime` at `omega`.
pub fn dipole_for_lifetime(omega: f64, lifetime: f64) -> f64 {
    (3.0 * std::f64::consts::PI * EPSILON_0 * HBAR * C_LIGHT.powi(3) / (lifetime * omega.powi(3))).sqrt()
}

/// Error from a pulse area off by `delta` radians.
pub fn pulse_area_error(delta: f64) -> f64 {
    delta.sin().powi(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    pub omega: f64,
    pub delta_omega_on: f64,
    pub delta_omega_off: f64,
    /// Typical frequency difference between species.
    pub spacing: f64,
    pub m: u32,
    pub t: Option<f64>,
    pub mu: Option<f64>,
    pub delta: f64,
    pub target_error: f64,
    pub pulses_per_computation: f64,
}

impl PhysicalParams {
    pub const REQUIRED: [&'static str; 5] = ["omega", "delta_omega_on", "delta_omega_off", "Delta_omega", "M"];

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if !(self.omega > 0.0 && self.delta_omega_on > 0.0 && self.spacing > 0.0) {
            return bad("omega, delta_omega_on and Delta_omega must be positive");
        }
        if !(self.delta_omega_off >= 0.0) {
            return bad("delta_omega_off must be non-negative");
        }
        if self.m < 2 {
            return bad("M must be at least 2");
        }
        if self.t.is_some_and(|t| !(t > 0.0)) || self.mu.is_some_and(|m| !(m >= 0.0)) {
            return bad("T must be positive and mu non-negative");
        }
        if !(self.target_error > 0.0 && self.target_error <= 1.0) || !(self.pulses_per_computation > 0.0) {
            return bad("target must lie in (0, 1] and pulses_per_computation be positive");
        }
        Ok(())
    }

    /// Reads `key=value` lines; `#` starts a comment. Keys beyond
    /// [`Self::REQUIRED`] are `T`, `mu`, `delta`, `target` and
    /// `pulses_per_computation`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key=value: {line}") })?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad number for {}", k.trim()) })?;
            map.insert(k.trim().to_string(), v);
        }
        let need = |k: &str| map.get(k).copied().ok_or_else(|| Error::MissingKey(k.to_string()));
        for k in Self::REQUIRED {
            need(k)?;
        }
        let m = need("M")?;
        if m.fract() != 0.0 || m < 0.0 {
            return Err(Error::InvalidArgument(format!("M={m} is not a whole number")));
        }
        let p = PhysicalParams {
            omega: need("omega")?,
            delta_omega_on: need("delta_omega_on")?,
            delta_omega_off: need("delta_omega_off")?,
            spacing: need("Delta_omega")?,
            m: m as u32,
            t: map.get("T").copied(),
            mu: map.get("mu").copied(),
            delta: map.get("delta").copied().unwrap_or(0.0),
            target_error: map.get("target").copied().unwrap_or(DEFAULT_TARGET_ERROR),
            pulses_per_computation: map.get("pulses_per_computation").copied().unwrap_or(DEFAULT_PULSES_PER_COMPUTATION),
        };
        p.validate()?;
        Ok(p)
    }
}

/// Feasible pulse lengths and the error budget at the shortest one.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatingWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub exciton_bandwidth: f64,
    pub exciton_lifetime: f64,
    pub feasible: bool,
    /// `(source, probability)` per error source, evaluated at `T` if given,
    /// else at `t_min`.
    pub budget: Vec<(&'static str, f64)>,
}

pub fn operating_window(p: &PhysicalParams) -> Result<OperatingWindow> {
    p.validate()?;
    let t_min = min_pulse_length(p.delta_omega_on, p.target_error);
    let bandwidth = exciton_bandwidth(p.delta_omega_off, p.spacing, p.m);
    let lifetime = 1.0 / bandwidth;
    let t_max = lifetime / p.pulses_per_computation;
    let t = p.t.unwrap_or(t_min);
    let mut budget = vec![
        ("square_wave", prob_square_wave(t, p.delta_omega_on)),
        ("off_resonant", prob_off_resonant(p.omega, p.omega + p.spacing, t)),
        ("off_diagonal", prob_off_diagonal(p.delta_omega_off, p.omega)),
        ("pulse_area", pulse_area_error(p.delta)),
    ];
    if let Some(mu) = p.mu {
        budget.push(("spontaneous", (spontaneous_rate(p.omega, mu) * t).min(1.0)));
    }
    Ok(OperatingWindow {
        t_min,
        t_max,
        exciton_bandwidth: bandwidth,
        exciton_lifetime: lifetime,
        feasible: t_min <= t_max * (1.0 + 1e-12),
        budget,
    })
}

impl OperatingWindow {
    /// Aligned table of the window and error budget.
    pub fn table(&self) -> String {
        let mut rows = vec![
            ("minimum pulse length (s)".to_string(), format!("{:e}", self.t_min)),
            ("maximum pulse length (s)".to_string(), format!("{:e}", self.t_max)),
            ("exciton bandwidth (rad/s)".to_string(), format!("{:e}", self.exciton_bandwidth)),
            ("exciton lifetime (s)".to_string(), format!("{:e}", self.exciton_lifetime)),
            ("feasible".to_string(), self.feasible.to_string()),
        ];
        rows.extend(self.budget.iter().map(|(k, v)| (format!("error {k}"), format!("{v:e}"))));
        let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
    }
}

impl fmt::Display for OperatingWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "T_min={:e}", self.t_min)?;
        writeln!(f, "T_max={:e}", self.t_max)?;
        writeln!(f, "exciton_bandwidth={:e}", self.exciton_bandwidth)?;
        writeln!(f, "exciton_lifetime={:e}", self.exciton_lifetime)?;
        for (k, v) in &self.budget {
            writeln!(f, "error_{k}={v:e}")?;
        }
        write!(f, "feasible={}", self.feasible)
    }
}
