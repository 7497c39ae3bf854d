//! Hirzebruch-Zagier curves `F_N`: skew-hermitian matrices, orbit classes,
//! cusp and elliptic incidences and the transversal intersection count.

mod cusp_branches;
mod pair_totals;
mod orbits;
mod skew;
mod surface;

pub use cusp_branches::*;
pub use pair_totals::*;
pub use orbits::*;
pub use skew::*;
pub use surface::*;
