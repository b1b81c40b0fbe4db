//! Numerical estimation of expansion exponents of maps and of finitely
//! supported probability measures, together with upper capacities,
//! Katok spanning-set entropy and checkers for the relations linking them.
//!
//! Everything runs on finite models: a [`spaces::PointCloud`] stands in for
//! the compact metric space, an [`measures::AtomicMeasure`] for a Borel
//! probability measure, and a [`maps::MapModel`] for the dynamics.
//!
//! ```
//! use expanse_core::prelude::*;
//!
//! let cloud = grid_cloud(&SpaceModel::Circle, 256).unwrap();
//! let map = MapModel::TimesM(2);
//! let profile = map_expansion_profile(&map, &cloud, &[0.05, 0.1], &ProfileOptions::default()).unwrap();
//! assert_eq!(profile.estimate(), ExtendedReal::new(2f64.ln()));
//! ```

pub mod capacity;
mod cover;
pub mod entropy;
pub mod error;
pub mod exponents;
pub mod extended;
pub mod io;
pub mod maps;
pub mod measures;
pub mod numeric;
pub mod seed;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
pub use extended::ExtendedReal;

pub mod prelude {
    pub use crate::capacity::{capacity_estimate, greedy_cover_count, CapacityOptions, CapacityReport};
    pub use crate::entropy::{
        block_entropy, block_entropy_report, katok_entropy_estimate, spanning_count, BlockEntropyEntry,
        BlockEntropyReport, EntropyOptions, EntropyReport,
    };
    pub use crate::error::{Error, Result};
    pub use crate::exponents::{
        log_ratio, map_expansion_profile, measure_expansion_profile, positive_exponent_certificate,
        witness_measure, EpsilonProfile, ExponentCertificate, ProfileOptions,
    };
    pub use crate::extended::ExtendedReal;
    pub use crate::maps::{bowen_distance, MapModel, PiecewiseLinear, ShiftMode};
    pub use crate::measures::{sample_measure, AtomicMeasure, Generator};
    pub use crate::spaces::{distance, grid_cloud, pairs_within, Point, PointCloud, SpaceModel};
    pub use crate::verify::{TheoremId, TheoremReport, Verdict};
}
