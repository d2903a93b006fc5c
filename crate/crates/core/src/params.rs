//! Physical parameter types and detuning bookkeeping.
//!
//! All frequencies and rates are dimensionless, expressed in one common
//! reference unit; nothing in the crate attaches SI units. Detunings are
//! stored directly (`delta_j = omega - omega_j`) because every closed form
//! is written in detunings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Full parameter set for one scattering evaluation.
///
/// `theta` is the propagation phase `k*d` between the two scattering sites;
/// `big_gamma` is the decay rate `2 V^2 / v_g` of either site into the
/// waveguide; `lambda` couples cavity and quantum dot directly; `omega` is
/// the Rabi frequency of the classical drive on the dot's second transition.
/// All values are immutable plain data, safe to copy across workers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemParams {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub big_gamma: f64,
    pub lambda: f64,
    pub omega: f64,
    pub theta: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            delta1: 0.0,
            delta2: 0.0,
            delta3: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            gamma3: 0.0,
            big_gamma: 0.0,
            lambda: 0.0,
            omega: 0.0,
            theta: 0.0,
        }
    }
}

impl SystemParams {
    /// Checks every invariant and hands the value back unchanged.
    ///
    /// Dissipation rates, the waveguide decay rate and the Rabi frequency
    /// must be non-negative; every field must be finite.
    pub fn validate(self) -> Result<Self> {
        for (name, v) in self.fields() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        for (name, v) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
            ("big_gamma", self.big_gamma),
            ("omega", self.omega),
        ] {
            if v < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0")));
            }
        }
        Ok(self)
    }

    fn fields(&self) -> [(&'static str, f64); 10] {
        [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("delta3", self.delta3),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
            ("big_gamma", self.big_gamma),
            ("lambda", self.lambda),
            ("omega", self.omega),
            ("theta", self.theta),
        ]
    }
}

/// One addressable field of [`SystemParams`], used for sweep axes, derived
/// links and EP slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamField {
    Delta1,
    Delta2,
    Delta3,
    Gamma1,
    Gamma2,
    Gamma3,
    BigGamma,
    Lambda,
    Omega,
    Theta,
}

impl ParamField {
    pub const ALL: [ParamField; 10] = [
        ParamField::Delta1,
        ParamField::Delta2,
        ParamField::Delta3,
        ParamField::Gamma1,
        ParamField::Gamma2,
        ParamField::Gamma3,
        ParamField::BigGamma,
        ParamField::Lambda,
        ParamField::Omega,
        ParamField::Theta,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ParamField::Delta1 => "delta1",
            ParamField::Delta2 => "delta2",
            ParamField::Delta3 => "delta3",
            ParamField::Gamma1 => "gamma1",
            ParamField::Gamma2 => "gamma2",
            ParamField::Gamma3 => "gamma3",
            ParamField::BigGamma => "big_gamma",
            ParamField::Lambda => "lambda",
            ParamField::Omega => "omega",
            ParamField::Theta => "theta",
        }
    }

    pub fn get(&self, p: &SystemParams) -> f64 {
        match self {
            ParamField::Delta1 => p.delta1,
            ParamField::Delta2 => p.delta2,
            ParamField::Delta3 => p.delta3,
            ParamField::Gamma1 => p.gamma1,
            ParamField::Gamma2 => p.gamma2,
            ParamField::Gamma3 => p.gamma3,
            ParamField::BigGamma => p.big_gamma,
            ParamField::Lambda => p.lambda,
            ParamField::Omega => p.omega,
            ParamField::Theta => p.theta,
        }
    }

    pub fn set(&self, p: &mut SystemParams, value: f64) {
        match self {
            ParamField::Delta1 => p.delta1 = value,
            ParamField::Delta2 => p.delta2 = value,
            ParamField::Delta3 => p.delta3 = value,
            ParamField::Gamma1 => p.gamma1 = value,
            ParamField::Gamma2 => p.gamma2 = value,
            ParamField::Gamma3 => p.gamma3 = value,
            ParamField::BigGamma => p.big_gamma = value,
            ParamField::Lambda => p.lambda = value,
            ParamField::Omega => p.omega = value,
            ParamField::Theta => p.theta = value,
        }
    }
}

impl std::str::FromStr for ParamField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamField::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown parameter name {s:?}")))
    }
}

impl std::fmt::Display for ParamField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Linear link `target = source + offset`, applied after axis values are set.
/// Links are applied in declaration order, so a later link may read a field
/// written by an earlier one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamLink {
    pub target: ParamField,
    pub source: ParamField,
    pub offset: f64,
}

impl ParamLink {
    pub fn apply(&self, p: &mut SystemParams) {
        self.target.set(p, self.source.get(p) + self.offset);
    }
}

/// Absolute-frequency view: probe, cavity and dot transition frequencies
/// plus the drive detuning. Only a convenience layer over [`SystemParams`];
/// the third level sits at `omega_qd - delta23`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencySpec {
    pub omega_probe: f64,
    pub omega_cavity: f64,
    pub omega_qd: f64,
    pub delta23: f64,
}

/// Detunings implied by a [`FrequencySpec`]:
/// `delta1 = omega - omega_cavity`, `delta2 = omega - omega_qd`,
/// `delta3 = delta2 + delta23`.
pub fn derive_detunings(spec: &FrequencySpec) -> Result<(f64, f64, f64)> {
    for (name, v) in [
        ("omega_probe", spec.omega_probe),
        ("omega_cavity", spec.omega_cavity),
        ("omega_qd", spec.omega_qd),
        ("delta23", spec.delta23),
    ] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be finite")));
        }
    }
    let delta1 = spec.omega_probe - spec.omega_cavity;
    let delta2 = spec.omega_probe - spec.omega_qd;
    Ok((delta1, delta2, delta2 + spec.delta23))
}
