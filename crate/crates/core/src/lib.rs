//! Turing machines, their polynomial-time reduction to CNF satisfiability,
//! a DPLL solver, and the word-problem calculus of a split machine.

pub mod cnf;
pub mod cooklevin;
pub mod corpus;
pub mod dpll;
pub mod formats;
pub mod machine;
pub mod postmarkov;
