//! Concrete systems the library is exercised on: the boundary action of
//! the rank-2 free group with its Busemann cocycle, grid actions on
//! `Z^d`, and the chart constructors for the two continuous leaf
//! examples.

pub mod f2;
pub mod grid;
pub mod horocycle;
pub mod sol;
