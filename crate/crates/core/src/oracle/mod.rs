//! Brute-force ground truth: the VBS state in the full physical Hilbert space.

mod checks;
mod dense;
mod state;

pub use checks::{
    end_to_tail_negativity, gram_check, hamiltonian_check, GramReport, HamiltonianReport, MAX_GRAM_BLOCK,
    MAX_HAMILTONIAN_SITES, NULL_TOL,
};
pub use dense::{dense_partial_transpose, edge_coefficients, reduce, DenseOperator};
pub use state::{
    boundary_pattern, build_chain, build_vbs, edge_states, geometry_sites, open_block, Chain, VbsState, MAX_SPIN1_SITES,
};

use crate::edge_rdm::{BlockGeometry, BoundaryWeights};
use crate::error::Result;
use crate::spectrum::{hermitian_eigenvalues, Spectrum};

/// Oracle negativity and partial-transpose spectrum of a geometry.
pub fn oracle_negativity(geometry: &BlockGeometry, weights: Option<&BoundaryWeights>) -> Result<(f64, Spectrum)> {
    let (chain, a, b) = geometry_sites(geometry, weights)?;
    let state = build_chain(&chain)?;
    let rho = reduce(&state, &a, &b)?;
    let spectrum = hermitian_eigenvalues(&dense_partial_transpose(&rho).matrix)?;
    Ok((spectrum.negativity(), spectrum))
}
