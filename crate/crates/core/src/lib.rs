//! A workbench for the halting-to-cavity reduction: exact dyadic ε-nets on
//! the unit cube, cubical homology over GF(2) as a finite-resolution
//! triviality oracle, and the dovetailing procedure that wires a Turing
//! machine's halting behaviour into the net it builds.
//!
//! Modules, bottom up:
//!
//! * [`machines`] – one-tape machines, step-quantum execution, samples.
//! * [`netbuilder`] – dyadic points, grid layers, punctures, covering radii.
//! * [`complex`] – full-corner cubical complexes and boundary matrices.
//! * [`homology`] – GF(2) ranks, Betti vectors, the verdict oracle.
//! * [`reduction`] – the dovetailer, its report, and fooling instances.

pub mod complex;
pub mod homology;
pub mod machines;
pub mod netbuilder;
pub mod reduction;
