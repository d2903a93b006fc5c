//! Single-photon scattering in a 1D waveguide side-coupled to a dissipative
//! cavity and a driven three-level quantum dot.
//!
//! The crate evaluates the closed-form transmission/reflection amplitudes of
//! the two-scatterer system, cross-checks them against a direct solve of the
//! stationary relations ([`oracle`]), locates exceptional points where the
//! scattering-matrix eigenvalues coalesce ([`spectrum`]), and runs grid
//! sweeps with CSV/JSON export ([`sweep`]).
//!
//! Grid evaluation and the draw-based oracle check are data-parallel with
//! rayon when the default `parallel` feature is enabled; disabling it falls
//! back to identical sequential loops.

pub mod amplitudes;
pub mod error;
pub mod oracle;
pub mod params;
pub mod sampling;
pub mod spectrum;
pub mod sweep;

pub use amplitudes::{
    eval_three_level, eval_two_level, observables, AmplitudeSet, Auxiliaries, Model,
};
pub use error::{Error, Result};
pub use oracle::{residuals, solve_backward, solve_forward, Direction, OracleSolution};
pub use params::{derive_detunings, FrequencySpec, ParamField, ParamLink, SystemParams};
pub use sampling::{oracle_check, OracleCheckReport};
pub use spectrum::{
    contrast_ratio, find_eps, phase_diagnostics, phase_diagnostics_default_eta, s_eigenvalues,
    EPRecord, EpTolerances, PhaseDiagnostics, SMatrixSpectrum, SweepSlice,
};
pub use sweep::{
    export, grid_from_json, load_grid, preset, run_sweep, run_sweep_seq, write_csv, write_json,
    Axis, EpSliceSpec, ExportFormat, Preset, RowFlag, SweepGrid, SweepMeta, SweepResult, SweepRow,
    PRESET_NAMES,
};

#[cfg(feature = "parallel")]
pub use sweep::run_sweep_par;
