//! I/O algorithms run on the simulated machine.

mod blocked;
mod diameter;
mod distcounts;
mod hs;
mod mm;
mod ov;
mod threesum;

pub use blocked::{apsp_repeated_squaring, minplus_blocked, minplus_tiled, squarings_needed, tile_side, zero_triangle_blocked, ApspResult};
pub use diameter::{diameter_2v3_cache_aware, Diam2v3};
pub use distcounts::{
    diameter_classify, distance_counts_oblivious, exact_counts, radius_classify, DistClass, DistanceCounts,
};
pub use hs::hitting_set_blocked;
pub use mm::{mm_recursive, MmScheme};
pub use ov::ov_recursive;
pub use threesum::three_sum_baseline;
