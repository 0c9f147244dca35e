//! Graver bases of shifted numerical semigroups `M_t = <t - da, t, t + db>`.
//!
//! Two independent routes compute the same object:
//!
//! * [`oracle`] enumerates the trade lattice in a certified box and keeps
//!   the conformally minimal elements;
//! * [`shift`] computes the three orthant Hilbert bases once at a small base
//!   shift and transports them period by period (`rho = dab(a+b)`).
//!
//! [`analysis`] builds count tables, period-law and bound scans, the
//! differential suite, and Graver augmentation on top of both. [`format`]
//! holds the 4ti2-style matrix, JSON and CSV encodings.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod format;
pub mod oracle;
pub mod semigroup;
pub mod shift;

pub use analysis::{
    augment, count_scan, differential_test, empirical_bounds, graver_by, verify_period_law,
    CountTable, Method, Objective, Sense,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use format::{Format, OutputDocument, Payload};
pub use oracle::{graver_oracle, hilbert_oracle, OrthantBases, SetMode, TradeSet};
pub use semigroup::{
    canonical_rep, Bounds, DerivedConstants, Orientation, Orthant, SemigroupInstance,
    ShiftedFamily, Strip, Trade,
};
pub use shift::{graver_fast, Segment};
