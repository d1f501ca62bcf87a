//! Exact arithmetic kernel: fields, dense polynomials, truncated series.

pub mod bipoly;
pub mod field;
pub mod polyring;
pub mod ratfunc;
pub mod ring;
pub mod series;
pub mod text;
pub mod unipoly;

pub use bipoly::{discriminant_y, resultant_y, BiPoly};
pub use field::{FieldSpec, Scalar};
pub use ratfunc::{RatField, RatFunc};
pub use ring::Ring;
pub use series::{KSeries, SeriesRing, TruncSeries, VarForm};
pub use unipoly::UniPoly;
