//! Exact arithmetic for Pinchuk's planar polynomial map.

pub mod arith;
pub mod elimination;
pub mod fiber;
pub mod interval;
pub mod parse;
pub mod poly;
pub mod render;
pub mod roots;
pub mod system;
pub mod upoly;

pub use arith::Rational;
pub use poly::{MultiPoly, PolyError};
pub use upoly::UniPoly;
