//! Itinerary counts `N_k(J)` and the geometric bounds on rescaled entropy.

pub mod itinerary;
pub mod perp;
pub mod table;

pub use itinerary::{
    dependence_support, itinerary_count_exact, itinerary_count_exact_capped, itinerary_count_linear,
    itinerary_count_sampled, itinerary_rank_linear, ENUMERATION_CAP,
};
pub use perp::{perp_boundary, PerpBoundary, PerpFace};
pub use table::{
    entropy_slope, ln_big, rate_bounds, refinement_lower_bound, rescaled_entropy_table, upper_bound_rate,
    window_upper_bound, CountMode, EntropyRow, EntropyTable, ExhaustionSpec, ItineraryCount,
};
