//! Fox n-colorings of link diagrams.
//!
//! Builds coloring matrices from PD codes, computes link determinants,
//! enumerates and classifies colorings mod `n`, finds least palettes on a
//! diagram, and replays the matrix argument behind the palette lower bound
//! `2^(l-1) >= n` as a checkable certificate.

pub mod bound;
pub mod cli;
pub mod coloring;
pub mod diagram;
pub mod exactlin;
pub mod tables;
