//! Exact cusp, elliptic and Hirzebruch-Zagier cycle geometry on the fourteen
//! Hilbert modular surfaces of K3 type, with the prime-coverage arithmetic
//! used for regular inverse Galois realizations.

pub mod class_numbers;
pub mod cusp_resolution;
pub mod elliptic_points;
pub mod error;
pub mod fibration_analysis;
pub mod field_arith;
pub mod golden;
pub mod hz_divisors;
pub mod igp_arithmetic;
pub mod lattice;
pub mod pipeline;
pub mod surface_graph;

pub use error::{HilbError, Result};
