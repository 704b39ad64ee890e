//! Exterior calculus over rational and double-cover coefficient rings.

pub mod dform;
pub mod field;
pub mod map;

pub use dform::DForm;
pub use field::{interior_product, lie_derivative, VField};
pub use map::{cover_pullback, RationalMap};
