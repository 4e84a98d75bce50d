//! Conductors, cubic residue graphs, categories and tower-group rules for
//! cyclic fields of odd prime degree, with range censuses and a σ-automorphism
//! census for small groups.

pub mod arith;
pub mod census;
pub mod classify;
pub mod conductor;
pub mod f3geometry;
pub mod galois_action;
pub mod residue_graph;
pub mod tower_rules;
