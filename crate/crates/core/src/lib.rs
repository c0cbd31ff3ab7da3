pub mod scalars;
pub mod liesuper;
pub mod vacalc;
pub mod brst;
pub mod conformal;
pub mod fock;
pub mod wfinder;
pub mod cli;
