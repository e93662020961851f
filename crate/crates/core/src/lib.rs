//! Ext-dimension calculator for SL2 in prime characteristic, with a
//! quantum GL2 layer and a finite spectral-sequence engine.

pub mod cache;
pub mod error;
pub mod ext_engine;
pub mod frobenius;
pub mod grothendieck;
pub mod quantum;
pub mod specseq;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use ext_engine::{ExtEngine, ExtVector, FormalModule, QueryKey};
pub use weights::{Weight, WeightContext};
