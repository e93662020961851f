//! Finite spectral-sequence engine for first-quadrant bicomplexes over
//! a prime field Z/m.
//!
//! Two independent routes to the pages are implemented: the direct
//! filtration formulas (`page`) and the exact-couple derivation
//! (`couple`). They must agree, and the test suites hold them to that.

pub mod bicomplex;
pub mod couple;
pub mod field;
pub mod generate;
pub mod matrix;
pub mod page;
pub mod textfmt;

pub use bicomplex::{witness, Bicomplex, Violation};
pub use couple::{check_collapse, k2_is_zero, CollapseReport, Couple};
pub use generate::{random_bicomplex, GeneratorMode};
pub use page::{infinity_page, page, Page};
pub use textfmt::{parse_bicomplex, write_bicomplex};

/// Default working modulus for generated examples.
pub const DEFAULT_MODULUS: u64 = 32003;
