//! Oriented colorings of bounded-degree graphs.
//!
//! The crate builds the target digraphs (Paley tournaments QR_q, Tromp
//! graphs Tr(QR_p), Tr*(QR_p) and the 9-vertex T_9), checks their
//! α-successor and clique-neighbourhood properties by exhaustive search,
//! and runs constructive coloring algorithms whose output is always
//! re-verified as a homomorphism before it is returned.

pub mod automorphism;
pub mod bitset;
pub mod colorer;
pub mod digraph;
pub mod error;
pub mod field;
pub mod generators;
pub mod homsolver;
pub mod manifest;
pub mod paley;
pub mod properties;
pub mod repro;
pub mod target;
pub mod textio;
pub mod tromp;

pub use digraph::{Arc, ColorMap, HomCheck, OrientedGraph, Vertex};
pub use error::{Error, Result};
pub use target::{TargetGraph, TargetKind};
