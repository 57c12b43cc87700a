//! Sequence and series tools: condensation verdicts, ψ₀ thinning, the
//! corrected sequence `c_j`, and measure-matrix checks.

pub mod measure;
pub mod psi0;
pub mod psifix;
pub mod quad;
pub mod series;

pub use measure::{chung_erdos_bound, ebc_assumption_check, ebc_sum_bound, MeasureError, MeasureMatrix};
pub use psi0::{psi0_construct, Psi0, Psi0Config, Psi0Error};
pub use psifix::{psifix_sequence, PsifixReport};
pub use series::{condensation_dichotomy, psi_squared_dichotomy, SeriesVerdict, Verdict};
