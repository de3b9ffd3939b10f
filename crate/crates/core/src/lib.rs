//! Net-space norms on weighted discrete lattices, Fourier and Lorentz norms
//! on the torus T^n and on SU(2), Dirichlet-kernel characterization
//! constants, and numerical verification campaigns for Hardy–Littlewood
//! type inequalities and their converses.
//!
//! Module map:
//!
//! - [`lattice`]: finite truncations of a weighted ordered lattice Γ, the
//!   measure ν_Γ, and growth-condition validators.
//! - [`families`]: collections M of finite subsets (all subsets, arithmetic
//!   progressions, initial segments, explicit lists).
//! - [`netnorm`]: the averaging function, N_{p,q} norms, weighted ℓ^p norms
//!   with their duality extremizer, and discrete Lorentz norms.
//! - [`group_fourier`]: grid Fourier analysis on T^n and character analysis of
//!   SU(2) class functions.
//! - [`dirichlet`]: Dirichlet kernels D_Q and the characterization constant.
//! - [`harness`]: verification campaigns producing versioned reports.

// `!(x >= a)` comparisons are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod dirichlet;
pub mod error;
pub mod families;
pub mod group_fourier;
pub mod harness;
pub mod lattice;
pub mod netnorm;
pub mod numeric;
pub mod rearrangement;

pub use error::{NetspaceError, Result};
pub use families::{Caps, FamilyKind, Member, SegmentMeasure, SubsetFamily, EXACT_SUBSET_CAP};
pub use lattice::{LambdaRule, Lattice, LatticeElement, LatticeKind, Side, Site, Spin};
pub use netnorm::{CoefficientNet, Engine, NormParams};
pub use rearrangement::StepFunction;
