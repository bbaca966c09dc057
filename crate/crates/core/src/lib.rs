//! Photonic Bell-test toolkit: Fock-space oracle, closed-form detection
//! probabilities, local hidden-variable models and Bell-inequality analysis.

pub mod bell;
pub mod closed_form;
pub mod error;
pub mod fock;
pub mod lhv;
pub mod outcome;
pub mod special;

pub use error::{Error, Result};
pub use outcome::Outcome;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
