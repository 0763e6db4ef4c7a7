//! Construction and verification of harmonic diffeomorphisms between
//! surfaces whose Beltrami coefficient is governed by the elliptic
//! sinh-Gordon equation.
//!
//! The pipeline: a sinh-Gordon solution `omega` fixes the real Beltrami
//! coefficient `e^{-2 omega}`; solving the Beltrami equation produces the
//! map `u = R + iS`; the target then carries a constant-curvature metric.
//! Closed-form one-soliton maps, explicit example families, a numerical
//! grid solver, a Baecklund transform and a finite-difference checker for
//! every pointwise identity are provided.

pub mod backlund;
pub mod beltrami;
pub mod catalog;
pub mod cli;
pub mod elliptic;
pub mod grid;
pub mod mapgen;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod soliton;
pub mod verify;
