//! Moment inequalities between independent random vectors with finitely
//! supported laws: exact moment functionals, the four moduli ratios, closed
//! form constants, extremal constructions, scalar checks and a search driver.

pub mod constants;
pub mod constructions;
pub mod distributions;
pub mod error;
pub mod format;
pub mod json;
pub mod moduli;
pub mod scalar;
pub mod search;
pub mod spaces;

pub use distributions::{Config, FiniteDist};
pub use error::{Error, Result};
pub use moduli::{RatioName, RatioReport};
pub use spaces::{CMatrix, CVector, LambdaVariant, Point, Side, Space, Subspace, Vertex};
