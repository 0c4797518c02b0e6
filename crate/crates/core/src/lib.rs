//! Workbench for J-algebras and relation algebras with quasiprojections:
//! an exact model on infinite binary trees, Thompson group presentations,
//! finite relation algebras and a law library.

pub mod branchrel;
pub mod finra;
pub mod laws;
pub mod model;
pub mod term;
pub mod thompson;
