//! Deterministic congested-clique simulation of constant-round minimum
//! spanning forest sparsification, plus the `O(log log n)`-round MST built
//! from it and a sequential oracle to check both.

pub mod cli;
pub mod clique;
pub mod graph;
pub mod sparsify;
