//! Exact entanglement negativity between two blocks of the spin-1 AKLT chain.
//!
//! The crate has two independent routes to the same numbers:
//!
//! * [`edge_rdm`] builds the two-block reduced density matrix in the
//!   sixteen-dimensional edge basis `|A_mu, B_rho>` from closed-form tensors
//!   ([`edge_algebra`]), for half-integer ends, spin-1 ends with an arbitrary
//!   boundary state, and periodic rings.
//! * [`oracle`] constructs the valence-bond-solid state explicitly from
//!   virtual spin-1/2 singlets, traces out the complement and partially
//!   transposes the dense matrix.
//!
//! [`spectrum`] owns the Hermitian eigensolver, negativity extraction and the
//! asymptotic closed forms; [`verify`] runs the two routes against each other.

pub mod edge_algebra;
pub mod edge_rdm;
pub mod oracle;
pub mod spectrum;
pub mod verify;

mod error;

pub use edge_algebra::{DecayFactor, EdgeIndex, PauliBracket, Weights4};
pub use edge_rdm::{BlockGeometry, BoundaryWeights, EdgeOperator, GeometryFlag};
pub use error::{Error, Result};
pub use spectrum::{ClosedForm, NegativityResult, Spectrum};

pub use num_complex::Complex64;
