//! Growth of determined regions, Lyapunov exponent estimates and the Ruelle
//! inequality check.

pub mod exponent;
pub mod growth;

pub use exponent::{chi_estimate, ruelle_report, ExponentEstimate, ExponentRow, RuelleReport, RUELLE_SLACK};
pub use growth::{
    growth_exact_oracle, growth_geometric_bound, growth_hull_shrink, GrowthMethod, GrowthReport, ORACLE_CAP,
};
