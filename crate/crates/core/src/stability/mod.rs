//! Empirical checks of the stability estimates: perturbation schemes,
//! Lipschitz quotient sweeps and the main-equation residual of forward
//! data.

mod perturb;
mod residual;
mod sweep;

pub use perturb::{perturb, Entry, PerturbationScheme, SchemeKind};
pub use residual::residual_check;
pub use sweep::{lipschitz_sweep, set_label, StabilityConfig, StabilityReport, StabilityRow, SweepBase, MIN_DISTANCE};
