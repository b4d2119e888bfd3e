//! Monochromatic D-diffsequences: exact arithmetic in ℚ(√5), gap sets,
//! fractional-part colorings, exhaustive verification and search.

pub mod certificate;
pub mod colorings;
pub mod construct;
pub mod exactnum;
pub mod gapsets;
pub mod pipeline;
pub mod search;
pub mod verify;

pub use certificate::{Certificate, ProofStatus, Verdict, VerifiedRange};
pub use exactnum::{BigRational, Q5, RatInterval};
pub use gapsets::{GapSetSpec, GapSetView};
