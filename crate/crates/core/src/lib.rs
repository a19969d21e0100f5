//! Exact rational computation of a one-loop class for 3-manifolds given by
//! a cell model, a representation of its edge groupoid, and combinatorial
//! Morse data (critical points and gradient trajectories with edge paths).
//!
//! Everything is exact: rationals for linear algebra, integers for lattices.
//!
//! The runnable examples are the best entry point:
//!
//! | example | shows |
//! |---|---|
//! | `torus_cylinder` | Morse complex and class of torus × interval |
//! | `propagator_contraction` | contracting an acyclic complex |
//! | `glued_propagator` | propagator on a two-block complex |
//! | `gluing_double` | doubling a scenario and checking the gluing formula |
//! | `choice_independence` | class under other propagators and `c_f` |
//! | `homology_models` | cellular vs Morse Betti numbers |
//! | `scenario_files` | JSON files, invariant files, comparison |
//!
//! Modules, bottom up: [`exactlin`] (matrices, HNF, lattices),
//! [`localsys`] (cell models, holonomy, twisted chains), [`morse`],
//! [`propagator`], [`invariant`] (the class, comparison, gluing),
//! [`scenario`] (files and built-in models), [`cli`].

pub mod exactlin;
pub mod localsys;
pub mod morse;
pub mod report;
pub mod propagator;
pub mod invariant;
pub mod scenario;
pub mod cli;
