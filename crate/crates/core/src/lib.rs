pub mod bracket;
pub mod canonical;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod laurent;
pub mod map;
pub mod perm;
pub mod pipeline;
pub mod primeness;
pub mod selfcheck;

pub use error::{Error, Result};

pub type Laurent = laurent::LaurentPoly<i64>;
pub type Bracket = laurent::BracketPoly<i64>;
