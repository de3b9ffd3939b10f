//! Fourier frontends: the torus T^n through grid DFTs and SU(2) class
//! functions through characters and conjugacy-class quadrature.

mod quadrature;
mod su2;
mod torus;

pub use quadrature::{default_panels, HaarRule, POINTS_PER_PANEL};
pub use su2::{
    character, characters, su2_class_fourier, su2_class_fourier_on, su2_lp_norm,
    QuadratureEstimate, SU2ClassFunction,
};
pub use torus::{torus_fourier, TorusFunction};
