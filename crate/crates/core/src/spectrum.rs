//! Scattering-matrix eigenvalues, exceptional-point search along 1D slices,
//! and contrast/phase diagnostics.
//!
//! The 2x2 scattering matrix has eigenvalues `s_\u{b1} = t \u{b1} sqrt(r_f r_b)`; they
//! coalesce where one reflection vanishes while the other stays finite, the
//! signature of unidirectional reflectionlessness. `find_eps` locates such
//! points by scanning `|r|^2` on a grid and refining each bracketed local
//! minimum with golden-section steps; classification thresholds live in
//! [`EpTolerances`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{eval_model, AmplitudeSet, Model};
use crate::error::{Error, Result};
use crate::oracle::Direction;
use crate::params::{FrequencySpec, ParamField, ParamLink, SystemParams};

/// Eigenvalue pair of the scattering matrix at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrixSpectrum {
    pub s_plus: Complex64,
    pub s_minus: Complex64,
    /// `|s_plus - s_minus| = 2 |sqrt(r_f r_b)|`.
    pub gap: f64,
}

/// Eigenvalues via the principal complex square root.
pub fn s_eigenvalues(amps: &AmplitudeSet) -> SMatrixSpectrum {
    let root = (amps.r_f * amps.r_b).sqrt();
    let s_plus = amps.t + root;
    let s_minus = amps.t - root;
    SMatrixSpectrum {
        s_plus,
        s_minus,
        gap: (s_plus - s_minus).norm(),
    }
}

/// Classification thresholds for exceptional points: the vanishing reflection
/// must drop below `tol_zero`, the surviving one must stay above
/// `tol_nonzero`, and only grid minima with `|r| < bracket` are refined.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EpTolerances {
    pub tol_zero: f64,
    pub tol_nonzero: f64,
    pub bracket: f64,
}

impl Default for EpTolerances {
    fn default() -> Self {
        Self {
            tol_zero: 1e-6,
            tol_nonzero: 1e-3,
            bracket: 0.5,
        }
    }
}

/// One-dimensional parameter slice: `param` varies over `[start, stop]` while
/// everything else is pinned by `base`, except fields recomputed by `links`
/// at every point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSlice {
    #[serde(default)]
    pub base: SystemParams,
    pub param: ParamField,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub links: Vec<ParamLink>,
}

impl SweepSlice {
    /// Parameters at one coordinate value.
    pub fn resolve(&self, x: f64) -> SystemParams {
        let mut p = self.base;
        self.param.set(&mut p, x);
        for link in &self.links {
            link.apply(&mut p);
        }
        p
    }
}

/// A located exceptional point on a slice.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EPRecord {
    pub slice_param: ParamField,
    pub location: f64,
    pub vanishing_side: Direction,
    pub r_zero_mod: f64,
    pub r_other_mod: f64,
    pub gap: f64,
}

const SLICE_PARAMS: [ParamField; 5] = [
    ParamField::Delta1,
    ParamField::Delta2,
    ParamField::Theta,
    ParamField::Lambda,
    ParamField::Omega,
];

const GOLDEN_ITERS: usize = 170;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

/// Scans one slice for exceptional points.
///
/// Coarse scan of `|r_f|^2` and `|r_b|^2` on at least 200 grid points, then
/// golden-section refinement of every bracketed local minimum below the
/// bracketing threshold. A refined minimum classifies as an EP when the
/// [`EpTolerances`] hold; the returned records are sorted by location.
/// Finding nothing is an empty list, not an error. Points where the model is
/// singular are skipped.
pub fn find_eps(slice: &SweepSlice, model: Model, tols: &EpTolerances) -> Result<Vec<EPRecord>> {
    if !slice.start.is_finite() || !slice.stop.is_finite() {
        return Err(Error::InvalidSlice("bounds must be finite".into()));
    }
    if slice.start >= slice.stop {
        return Err(Error::InvalidSlice(format!(
            "empty interval [{}, {}]",
            slice.start, slice.stop
        )));
    }
    if !SLICE_PARAMS.contains(&slice.param) {
        return Err(Error::InvalidSlice(format!(
            "EP slices sweep one of delta1, delta2, theta, lambda, omega; got {}",
            slice.param
        )));
    }
    let n = slice.points.max(200);
    let span = slice.stop - slice.start;
    let xs: Vec<f64> = (0..n)
        .map(|i| slice.start + span * i as f64 / (n - 1) as f64)
        .collect();

    let moduli = |x: f64| -> Option<(f64, f64)> {
        eval_model(
            model,
            &slice.resolve(x),
            crate::amplitudes::DEFAULT_SINGULARITY_FLOOR,
        )
        .ok()
        .map(|a| (a.r_f.norm(), a.r_b.norm()))
    };

    #[cfg(feature = "parallel")]
    let scan: Vec<Option<(f64, f64)>> = {
        use rayon::prelude::*;
        xs.par_iter().map(|&x| moduli(x)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let scan: Vec<Option<(f64, f64)>> = xs.iter().map(|&x| moduli(x)).collect();

    let mut records: Vec<EPRecord> = Vec::new();
    for side in [Direction::Forward, Direction::Backward] {
        let value = |m: &Option<(f64, f64)>| {
            m.map_or(f64::INFINITY, |(rf, rb)| match side {
                Direction::Forward => rf,
                Direction::Backward => rb,
            })
        };
        let objective = |x: f64| {
            moduli(x).map_or(f64::INFINITY, |(rf, rb)| match side {
                Direction::Forward => rf * rf,
                Direction::Backward => rb * rb,
            })
        };
        for i in 1..n - 1 {
            let v = value(&scan[i]);
            if !(v < value(&scan[i - 1]) && v < value(&scan[i + 1]) && v < tols.bracket) {
                continue;
            }
            let location = golden_min(&objective, xs[i - 1], xs[i + 1]);
            let Some((rf, rb)) = moduli(location) else {
                continue;
            };
            let (r_zero_mod, r_other_mod) = match side {
                Direction::Forward => (rf, rb),
                Direction::Backward => (rb, rf),
            };
            if r_zero_mod >= tols.tol_zero || r_other_mod <= tols.tol_nonzero {
                continue;
            }
            let amps = eval_model(
                model,
                &slice.resolve(location),
                crate::amplitudes::DEFAULT_SINGULARITY_FLOOR,
            )?;
            let gap = s_eigenvalues(&amps).gap;
            if gap >= 2.0 * (tols.tol_zero * (r_other_mod + tols.tol_zero)).sqrt() {
                continue;
            }
            let duplicate = records
                .iter()
                .any(|r| (r.location - location).abs() < span * 1e-9);
            if !duplicate {
                records.push(EPRecord {
                    slice_param: slice.param,
                    location,
                    vanishing_side: side,
                    r_zero_mod,
                    r_other_mod,
                    gap,
                });
            }
        }
    }
    records.sort_by(|a, b| a.location.total_cmp(&b.location));
    Ok(records)
}

/// Normalized reflection asymmetry `|R_f - R_b| / (R_f + R_b)`, bounded in [0, 1].
pub fn contrast_ratio(reflection_fwd: f64, reflection_bwd: f64) -> Result<f64> {
    if reflection_fwd < 0.0 || reflection_bwd < 0.0 {
        return Err(Error::InvalidParameter(
            "reflection coefficients must be >= 0".into(),
        ));
    }
    let sum = reflection_fwd + reflection_bwd;
    if sum == 0.0 {
        return Err(Error::UndefinedContrast);
    }
    Ok((reflection_fwd - reflection_bwd).abs() / sum)
}

/// Fabry-Perot phase bookkeeping for the two scatterers. Diagnostic only; the
/// broadening `eta` is a modelling choice and is always recorded in the output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDiagnostics {
    pub theta1: f64,
    pub theta2: f64,
    pub theta_f: f64,
    pub theta_b: f64,
    pub eta: f64,
}

/// [`phase_diagnostics`] with the default broadening `eta = big_gamma`.
pub fn phase_diagnostics_default_eta(
    spec: &FrequencySpec,
    params: &SystemParams,
) -> Result<PhaseDiagnostics> {
    phase_diagnostics(spec, params, params.big_gamma)
}

/// Scatterer phases `theta_j = (omega_k - omega_j) / (eta + gamma_j / 2)` and
/// the round-trip differences `theta_f = theta1 - theta2 + 2 theta`,
/// `theta_b = theta2 - theta1 + 2 theta`.
pub fn phase_diagnostics(
    spec: &FrequencySpec,
    params: &SystemParams,
    eta: f64,
) -> Result<PhaseDiagnostics> {
    let (delta1, delta2, _) = crate::params::derive_detunings(spec)?;
    let den1 = eta + params.gamma1 / 2.0;
    let den2 = eta + params.gamma2 / 2.0;
    if den1 == 0.0 || den2 == 0.0 {
        return Err(Error::InvalidParameter(
            "eta + gamma/2 must be nonzero for both scatterers".into(),
        ));
    }
    let theta1 = delta1 / den1;
    let theta2 = delta2 / den2;
    let diff = theta1 - theta2;
    let two_theta = 2.0 * params.theta;
    Ok(PhaseDiagnostics {
        theta1,
        theta2,
        theta_f: diff + two_theta,
        theta_b: -diff + two_theta,
        eta,
    })
}
