//! Exact q-series verification engine: truncated Puiseux series, generalized
//! Nahm sums, product sides, constant-term extraction, product-form
//! recognition and numeric checks of vector-valued modular transformations.

pub mod ct;
pub mod error;
pub mod expr;
pub mod modular;
pub mod nahm;
pub mod par;
pub mod param;
pub mod poch;
pub mod rat;
pub mod recognize;
pub mod registry;
pub mod series;
pub mod single;

pub use error::{Error, Result};
pub use param::{ParamComparison, ParamSeries, TailBound};
pub use poch::{PochFactor, ProductSpec};
pub use rat::Exp;
pub use series::{Comparison, QSeries};
