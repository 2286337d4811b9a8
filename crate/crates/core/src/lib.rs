//! Exact verification engine for the Coulomb branch of the multiloop quiver
//! gauge theory with `dim V = 2`, its identification with the Slodowy slice
//! `S(2r-2,1,1)` in the nilpotent cone of `sp(2r)`, and the surrounding
//! Hilbert series computations.

pub mod algebra;
pub mod series;
pub mod monopole;
pub mod check;
pub mod coulomb;
pub mod relation;
pub mod slice;
