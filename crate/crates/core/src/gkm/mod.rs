//! Moment-graph model of regular semisimple Hessenberg varieties.
//!
//! Fixed points of the maximal torus are the permutations of `[n]`; the ring
//! `H^*_T` is the set of vertex-indexed polynomial tuples that agree modulo
//! each edge label. Ordinary cohomology is its quotient by the positive-degree
//! polynomials, computed with flow-up classes for a generic Morse function.

mod classes;
mod cohomology;
mod graph;
mod kahler;
pub mod poly;

pub use classes::{check_edges, dot_action, integrate, integrate_number, kahler_class, EquivClass};
pub use cohomology::{class_from_solution, equivariant_system, Cohomology, DEFAULT_MORSE_SEED};
pub use graph::{
    build_gkm, compose, inverse, morse_betti, permutations, simple_transposition, Edge, GkmGraph, MorseFunction, Perm,
    Torus,
};
pub use kahler::*;
