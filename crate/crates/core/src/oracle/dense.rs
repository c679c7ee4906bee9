//! Dense partial traces and partial transposes.

use ndarray::Array2;
use num_complex::Complex64;

use super::state::{edge_states, VbsState};
use crate::edge_algebra::{lambda_weights, DecayFactor};
use crate::error::{Error, Result};

/// Square matrix on `A (x) B`, row index `a * d_b + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub matrix: Array2<Complex64>,
    pub dims: (usize, usize),
}

impl DenseOperator {
    pub fn new(matrix: Array2<Complex64>, dims: (usize, usize)) -> Result<Self> {
        let (rows, cols) = matrix.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows != dims.0 * dims.1 {
            return Err(Error::InvalidSites(format!(
                "factorization {}x{} does not match dimension {rows}",
                dims.0, dims.1
            )));
        }
        Ok(DenseOperator { matrix, dims })
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diag().sum()
    }
}

/// `rho_AB = Tr_rest |psi><psi|`. Sites of each block keep the order given.
pub fn reduce(state: &VbsState, sites_a: &[usize], sites_b: &[usize]) -> Result<DenseOperator> {
    let n = state.site_dims.len();
    let mut seen = vec![false; n];
    for &s in sites_a.iter().chain(sites_b) {
        if s >= n || seen[s] {
            return Err(Error::InvalidSites(format!(
                "A = {sites_a:?}, B = {sites_b:?} on {n} sites"
            )));
        }
        seen[s] = true;
    }
    let dims = &state.site_dims;
    let block_dim = |sites: &[usize]| sites.iter().map(|&s| dims[s]).product::<usize>();
    let (d_a, d_b) = (block_dim(sites_a), block_dim(sites_b));
    let d_keep = d_a * d_b;
    let d_rest = state.dim() / d_keep;

    let mut strides = vec![1usize; n];
    for s in (0..n.saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    let keep: Vec<usize> = sites_a.iter().chain(sites_b).copied().collect();
    let rest: Vec<usize> = (0..n).filter(|s| !seen[*s]).collect();

    let mut m = Array2::<Complex64>::zeros((d_keep, d_rest));
    for (index, &amp) in state.amplitudes.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let digit = |s: usize| (index / strides[s]) % dims[s];
        let row = keep.iter().fold(0, |acc, &s| acc * dims[s] + digit(s));
        let col = rest.iter().fold(0, |acc, &s| acc * dims[s] + digit(s));
        m[[row, col]] = amp;
    }
    let rho = m.dot(&m.t().mapv(|c| c.conj()));
    DenseOperator::new(rho, (d_a, d_b))
}

/// Transposes the A factor: `rho[(a b), (a' b')] -> rho[(a' b), (a b')]`.
pub fn dense_partial_transpose(op: &DenseOperator) -> DenseOperator {
    let d_b = op.dims.1;
    let m = &op.matrix;
    let out = Array2::from_shape_fn(m.dim(), |(r, c)| {
        let (a, b) = (r / d_b, r % d_b);
        let (a2, b2) = (c / d_b, c % d_b);
        m[[a2 * d_b + b, a * d_b + b2]]
    });
    DenseOperator {
        matrix: out,
        dims: op.dims,
    }
}

/// Coefficients of a two-block operator in the edge basis `|A_mu B_rho>` of
/// open blocks of lengths `la`, `lb`, as a 16x16 matrix (row `4 mu + rho`).
///
/// Entries involving a zero-norm channel are set to zero.
pub fn edge_coefficients(op: &DenseOperator, la: usize, lb: usize) -> Array2<Complex64> {
    let (ea, eb) = (edge_states(la), edge_states(lb));
    let (d_a, d_b) = (ea.ncols(), eb.ncols());
    assert_eq!(op.dims, (d_a, d_b), "edge basis does not match the blocks");
    let mut v = Array2::<Complex64>::zeros((16, d_a * d_b));
    for mu in 0..4 {
        for rho in 0..4 {
            for i in 0..d_a {
                for j in 0..d_b {
                    v[[4 * mu + rho, i * d_b + j]] = ea[[mu, i]] * eb[[rho, j]];
                }
            }
        }
    }
    let k = v.mapv(|c| c.conj()).dot(&op.matrix).dot(&v.t());
    let wa = lambda_weights(DecayFactor::from_length(la as u32));
    let wb = lambda_weights(DecayFactor::from_length(lb as u32));
    let norms: Vec<f64> = (0..16).map(|k| wa[k / 4] * wb[k % 4]).collect();
    Array2::from_shape_fn((16, 16), |(r, c)| {
        let n = norms[r] * norms[c];
        if n < 1e-14 {
            Complex64::new(0.0, 0.0)
        } else {
            k[[r, c]] / n
        }
    })
}
