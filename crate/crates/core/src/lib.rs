//! Computable local dynamics of area-preserving planar and annular maps:
//! generating-function isotopies, transverse foliations, Brouwer-degree
//! indices, blow-up rotation numbers and local rotation set estimates.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod fixtures;
pub mod foliate;
pub mod genfunc;
pub mod geom;
pub mod indices;
pub mod linalg;
pub mod rotation;

pub use error::{Error, Result};
pub use linalg::{Mat2, Rect, Vec2};
