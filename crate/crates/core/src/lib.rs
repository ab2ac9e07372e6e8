//! Persistence modules over finite grids: the local block-decomposability
//! criterion and block decomposition.

pub mod blocks;
pub mod corpus;
pub mod decomp;
pub mod error;
pub mod fixtures;
pub mod gridmod;
pub mod io;
pub mod koszul;
pub mod linalg;
mod poly;
pub mod rep;

pub use blocks::{Block, BlockKind};
pub use decomp::{DecomposeOptions, Decomposition, Method, Outcome};
pub use error::{Error, Result};
pub use gridmod::{GridModule, GridShape, IntervalSet, Point};
pub use koszul::{Cube, KoszulComplex, Verdict, Witness};
pub use linalg::{Mat, PrimeField, DEFAULT_PRIME};
