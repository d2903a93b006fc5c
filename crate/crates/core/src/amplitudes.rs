//! Closed-form transmission and reflection amplitudes.
//!
//! Two model variants share one denominator structure:
//!
//! * the general driven three-level case (`eval_three_level`), built from the
//!   auxiliary quantities [`Auxiliaries`];
//! * the two-level reduction with the drive off (`eval_two_level`), which also
//!   covers the degenerate case `delta1 == delta2`.
//!
//! Each auxiliary is computed once and shared between `t`, `r_f` and `r_b`, so
//! the three amplitudes see bit-identical denominators. The two-level
//! numerators are assembled so that exchanging `(delta1, gamma1)` with
//! `(delta2, gamma2)` maps the forward numerator onto the backward one through
//! commutative float operations only, making the swap symmetry exact in f64.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Denominators with modulus below this floor raise a singular-point error.
/// For any positive dissipation the denominator stays far from zero; the
/// default only guards true division blow-up.
pub const DEFAULT_SINGULARITY_FLOOR: f64 = 1e-300;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
fn cis(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// Complex amplitudes at one parameter point plus the derived real
/// observables `T = |t|^2`, `R = |r|^2`, `A = 1 - T - R` per direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    pub t: Complex64,
    pub r_f: Complex64,
    pub r_b: Complex64,
    pub transmission: f64,
    pub reflection_fwd: f64,
    pub reflection_bwd: f64,
    pub absorption_fwd: f64,
    pub absorption_bwd: f64,
}

impl AmplitudeSet {
    pub fn from_amplitudes(t: Complex64, r_f: Complex64, r_b: Complex64) -> Self {
        let (transmission, reflection_fwd, reflection_bwd, absorption_fwd, absorption_bwd) =
            observables(t, r_f, r_b);
        Self {
            t,
            r_f,
            r_b,
            transmission,
            reflection_fwd,
            reflection_bwd,
            absorption_fwd,
            absorption_bwd,
        }
    }
}

/// Which closed form to evaluate; the caller chooses, there is no automatic
/// detection of the applicable reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    TwoLevel,
    ThreeLevel,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::TwoLevel => write!(f, "two-level"),
            Model::ThreeLevel => write!(f, "three-level"),
        }
    }
}

/// Evaluates the selected model variant.
pub fn eval_model(model: Model, p: &SystemParams, floor: f64) -> Result<AmplitudeSet> {
    match model {
        Model::TwoLevel => eval_two_level_with_floor(p, floor),
        Model::ThreeLevel => eval_three_level_with_floor(p, floor),
    }
}

/// Squared moduli and absorptions for a given amplitude triple.
pub fn observables(t: Complex64, r_f: Complex64, r_b: Complex64) -> (f64, f64, f64, f64, f64) {
    let tt = t.norm_sqr();
    let rf = r_f.norm_sqr();
    let rb = r_b.norm_sqr();
    (tt, rf, rb, 1.0 - tt - rf, 1.0 - tt - rb)
}

/// Intermediate quantities of the driven three-level closed forms.
#[derive(Debug, Clone, Copy)]
pub struct Auxiliaries {
    pub a: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub b3: Complex64,
    pub c: Complex64,
    pub p: Complex64,
}

/// Builds the shared auxiliaries at a parameter point:
/// `B_j = i*gamma_j + delta_j`, `A`, `C` and the common denominator `P`.
pub fn auxiliaries(p: &SystemParams) -> Auxiliaries {
    let SystemParams {
        delta1: d1,
        delta2: d2,
        delta3: d3,
        gamma1: g1,
        gamma2: g2,
        gamma3: g3,
        big_gamma: gg,
        lambda: lam,
        omega: om,
        theta,
    } = *p;
    let e1 = cis(theta);
    let e2 = cis(2.0 * theta);
    let om2 = om * om;

    let b1 = I * g1 + d1;
    let b2 = I * g2 + d2;
    let b3 = I * g3 + d3;
    let a = g1 * (om2 - 4.0 * I * g3 * d2 + 4.0 * g2 * Complex64::new(g3, -d3) - 4.0 * d2 * d3);
    let c = 4.0 * gg * gg * (e2 - 1.0) * Complex64::new(g3, -d3);

    let p_den = c - gg
        * (om2 + 4.0 * g3 * (g1 + g2 - I * (2.0 * e1 * lam + d1 + d2))
            - 4.0 * d3 * (2.0 * e1 * lam + I * g1 + I * g2 + d1 + d2))
        + (I * om2 * d1
            + g3 * (-4.0 * lam * lam + 4.0 * I * g2 * d1 + 4.0 * d1 * d2)
            + 4.0 * I * lam * lam * d3
            + 4.0 * g2 * d1 * d3
            - 4.0 * I * d1 * d2 * d3
            - a);

    Auxiliaries {
        a,
        b1,
        b2,
        b3,
        c,
        p: p_den,
    }
}

/// Driven three-level amplitudes with the default singularity floor.
pub fn eval_three_level(p: &SystemParams) -> Result<AmplitudeSet> {
    eval_three_level_with_floor(p, DEFAULT_SINGULARITY_FLOOR)
}

/// Driven three-level amplitudes; errors when `|P|` falls below `floor`.
pub fn eval_three_level_with_floor(p: &SystemParams, floor: f64) -> Result<AmplitudeSet> {
    let SystemParams {
        delta1: d1,
        delta2: d2,
        delta3: d3,
        gamma1: g1,
        gamma2: g2,
        gamma3: g3,
        big_gamma: gg,
        lambda: lam,
        omega: om,
        theta,
    } = *p;
    let aux = auxiliaries(p);
    if aux.p.norm() < floor {
        return Err(Error::SingularPoint {
            what: "P",
            modulus: aux.p.norm(),
            floor,
        });
    }
    let e1 = cis(theta);
    let e2 = cis(2.0 * theta);
    let om2 = om * om;
    let (b1, b2, b3) = (aux.b1, aux.b2, aux.b3);

    let t_num = cis(-theta)
        * (4.0 * gg * lam * (e2 - 1.0) * b3
            - e1 * (4.0 * g3 * (lam * lam - d1 * b2) + aux.a
                - I * (4.0 * lam * lam * d3 + d1 * (om2 - 4.0 * d3 * b2))));

    let rf_num = -(aux.c
        - gg * (om2 + 4.0 * g3 * (e2 * g1 + g2 - I * (2.0 * e1 * lam + e2 * d1 + d2))
            - 4.0 * d3 * (2.0 * e1 * lam + e2 * b1 + b2)));

    let rb_num = -(aux.c
        - gg * (e2 * om2 + 4.0 * g3 * (g1 + e2 * g2 - I * (2.0 * e1 * lam + d1 + e2 * d2))
            - 4.0 * d3 * (2.0 * e1 * lam + b1 + e2 * b2)));

    Ok(AmplitudeSet::from_amplitudes(
        t_num / aux.p,
        rf_num / aux.p,
        rb_num / aux.p,
    ))
}

/// Two-level amplitudes (drive off; `omega` is ignored) with the default floor.
pub fn eval_two_level(p: &SystemParams) -> Result<AmplitudeSet> {
    eval_two_level_with_floor(p, DEFAULT_SINGULARITY_FLOOR)
}

/// Two-level amplitudes; errors when the denominator modulus falls below `floor`.
pub fn eval_two_level_with_floor(p: &SystemParams, floor: f64) -> Result<AmplitudeSet> {
    let SystemParams {
        delta1: d1,
        delta2: d2,
        gamma1: g1,
        gamma2: g2,
        big_gamma: gg,
        lambda: lam,
        theta,
        ..
    } = *p;
    let e1 = cis(theta);
    let e2 = cis(2.0 * theta);
    let b1 = Complex64::new(d1, g1);
    let b2 = Complex64::new(d2, g2);

    let gamma_sq = (e2 - 1.0) * gg * gg;
    let drive = I * (2.0 * e1 * lam * gg);
    let resonances = b1 * b2 - lam * lam;

    let den = gamma_sq + drive + I * gg * (b1 + b2) + resonances;
    if den.norm() < floor {
        return Err(Error::SingularPoint {
            what: "two-level denominator",
            modulus: den.norm(),
            floor,
        });
    }

    let t = cis(-theta) * (I * (e2 - 1.0) * lam * gg + e1 * resonances) / den;
    // `e2*b1 + b2` and `b1 + e2*b2` are mirror images under the swap
    // (delta1, gamma1) <-> (delta2, gamma2); keeping them as single sums makes
    // the swap exchange r_f and r_b bit-exactly.
    let r_f = -(gamma_sq + drive + I * gg * (e2 * b1 + b2)) / den;
    let r_b = -(gamma_sq + drive + I * gg * (b1 + e2 * b2)) / den;

    Ok(AmplitudeSet::from_amplitudes(t, r_f, r_b))
}
