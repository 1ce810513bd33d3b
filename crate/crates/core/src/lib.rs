//! Exact decision procedures for piecewise-linear neural networks.
//!
//! Everything on the decision path computes with arbitrary-precision
//! rationals; there is no floating point between an input file and a
//! verdict. The crate is organised around three problems over layered
//! feedforward networks with piecewise-linear activations:
//!
//! - **reachability**: does some input satisfying a linear input
//!   specification map to an output satisfying a linear output
//!   specification? ([`solver::solve_reach`])
//! - **interval property**: does *every* input satisfying the input
//!   specification map into the open output polyhedron?
//!   ([`solver::solve_vip`])
//! - **equivalence**: do two networks compute the same function?
//!   ([`solver::solve_ne`])
//!
//! The [`reductions`] module gives executable, answer-preserving
//! translations between these problems and a constraint-satisfaction
//! form; [`gadgets`] holds the constraint encodings and numeric identity
//! checks those translations are built from.

pub mod gadgets;
pub mod gen;
pub mod ir;
pub mod lp;
pub mod reductions;
pub mod solver;
