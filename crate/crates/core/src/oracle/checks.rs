//! Consistency checks of the explicit construction: block Gram weights,
//! Hamiltonian annihilation and ground-space dimension.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use super::dense::{dense_partial_transpose, reduce};
use super::state::{build_chain, edge_states, twice_sz, Chain, VbsState};
use crate::edge_algebra::{lambda_weights, DecayFactor};
use crate::error::{Error, Result};
use crate::spectrum::hermitian_eigenvalues;

/// Eigenvalues of `H` below this count towards the null space.
pub const NULL_TOL: f64 = 1e-8;

/// Largest block length accepted by [`gram_check`].
pub const MAX_GRAM_BLOCK: usize = 8;

/// Largest spin-1 count accepted by [`hamiltonian_check`].
pub const MAX_HAMILTONIAN_SITES: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub block_length: usize,
    /// Diagonal of the Gram matrix of the four capped block states.
    pub weights: [f64; 4],
    pub expected: [f64; 4],
    pub max_off_diagonal: f64,
    pub max_error: f64,
}

/// Gram matrix `<D_mu|D_nu>` of the four `T_mu`-capped states of an open block.
pub fn gram_check(block_length: usize) -> Result<GramReport> {
    if block_length == 0 || block_length > MAX_GRAM_BLOCK {
        return Err(Error::DimensionCap {
            dim: block_length,
            cap: MAX_GRAM_BLOCK,
        });
    }
    let e = edge_states(block_length);
    let gram = e.mapv(|c| c.conj()).dot(&e.t());
    let expected = lambda_weights(DecayFactor::from_length(block_length as u32)).as_array();
    let mut weights = [0.0; 4];
    let mut max_off_diagonal = 0.0f64;
    let mut max_error = 0.0f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let g = gram[[mu, nu]];
            if mu == nu {
                weights[mu] = g.re;
                max_error = max_error.max((g - expected[mu]).norm());
            } else {
                max_off_diagonal = max_off_diagonal.max(g.norm());
            }
        }
    }
    Ok(GramReport {
        block_length,
        weights,
        expected,
        max_off_diagonal,
        max_error: max_error.max(max_off_diagonal),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HamiltonianReport {
    pub dim: usize,
    /// `||H |VBS>||`.
    pub annihilation: f64,
    pub min_eigenvalue: f64,
    pub null_dim: usize,
    pub expected_null_dim: usize,
}

impl HamiltonianReport {
    pub fn passed(&self) -> bool {
        self.annihilation <= 1e-10 && self.min_eigenvalue >= -1e-10 && self.null_dim == self.expected_null_dim
    }
}

type Local = Array2<f64>;

/// `S^z`, `S^+` for spin `(d - 1) / 2`, basis ordered from highest `m`.
fn spin_ops(d: usize) -> (Local, Local) {
    let s = (d as f64 - 1.0) / 2.0;
    let mut sz = Local::zeros((d, d));
    let mut sp = Local::zeros((d, d));
    for k in 0..d {
        let m = s - k as f64;
        sz[[k, k]] = m;
        if k > 0 {
            // <m + 1| S^+ |m>
            sp[[k - 1, k]] = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
        }
    }
    (sz, sp)
}

fn kron(a: &Local, b: &Local) -> Local {
    let (da, db) = (a.nrows(), b.nrows());
    Local::from_shape_fn((da * db, da * db), |(r, c)| a[[r / db, c / db]] * b[[r % db, c % db]])
}

/// Bond projector for sites of dimensions `d1`, `d2`: onto total spin 2 for two
/// spin-1s, onto total spin 3/2 for a spin-1/2 next to a spin-1.
fn bond_projector(d1: usize, d2: usize) -> Result<Local> {
    let (z1, p1) = spin_ops(d1);
    let (z2, p2) = spin_ops(d2);
    let x = kron(&z1, &z2) + (kron(&p1, &p2.t().to_owned()) + kron(&p1.t().to_owned(), &p2)) * 0.5;
    let id = Local::eye(d1 * d2);
    match (d1, d2) {
        (3, 3) => Ok((&x * 3.0 + x.dot(&x) + &id * 2.0) / 6.0),
        (2, 3) | (3, 2) => Ok((id + x) * (2.0 / 3.0)),
        _ => Err(Error::InvalidGeometry(format!(
            "no bond projector for dimensions {d1}, {d2}"
        ))),
    }
}

fn bonds(chain: &Chain) -> Vec<(usize, usize)> {
    match *chain {
        Chain::HalfEnds { n } => (0..=n).map(|i| (i, i + 1)).collect(),
        Chain::Spin1Ends { n, .. } => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        Chain::Ring { n } => (0..n).map(|i| (i, (i + 1) % n)).collect(),
    }
}

struct Hamiltonian {
    dims: Vec<usize>,
    strides: Vec<usize>,
    terms: Vec<(usize, usize, Local)>,
}

impl Hamiltonian {
    fn new(chain: &Chain) -> Result<Self> {
        let dims = chain.site_dims();
        let n = dims.len();
        let mut strides = vec![1usize; n];
        for s in (0..n.saturating_sub(1)).rev() {
            strides[s] = strides[s + 1] * dims[s + 1];
        }
        let terms = bonds(chain)
            .into_iter()
            .map(|(i, j)| Ok((i, j, bond_projector(dims[i], dims[j])?)))
            .collect::<Result<_>>()?;
        Ok(Hamiltonian { dims, strides, terms })
    }

    /// Calls `f(target, value)` for every nonzero `<target| H |source>`.
    fn column(&self, source: usize, mut f: impl FnMut(usize, f64)) {
        for (i, j, p) in &self.terms {
            let (si, sj) = (
                (source / self.strides[*i]) % self.dims[*i],
                (source / self.strides[*j]) % self.dims[*j],
            );
            let dj = self.dims[*j];
            let col = si * dj + sj;
            let base = source - si * self.strides[*i] - sj * self.strides[*j];
            for row in 0..p.nrows() {
                let v = p[[row, col]];
                if v != 0.0 {
                    let (ti, tj) = (row / dj, row % dj);
                    f(base + ti * self.strides[*i] + tj * self.strides[*j], v);
                }
            }
        }
    }
}

/// Checks that the VBS state of `chain` is annihilated by the AKLT Hamiltonian
/// (boundary projectors included for spin-1/2 ends) and counts the ground-space
/// dimension sector by sector in total `S^z`.
pub fn hamiltonian_check(chain: &Chain) -> Result<HamiltonianReport> {
    let n = chain.spin1_sites();
    if n > MAX_HAMILTONIAN_SITES {
        return Err(Error::DimensionCap {
            dim: n,
            cap: MAX_HAMILTONIAN_SITES,
        });
    }
    let state = build_chain(chain)?;
    let h = Hamiltonian::new(chain)?;
    let dim = state.dim();

    let mut h_psi = vec![Complex64::new(0.0, 0.0); dim];
    for (src, &amp) in state.amplitudes.iter().enumerate() {
        if amp.norm_sqr() > 0.0 {
            h.column(src, |dst, v| h_psi[dst] += amp * v);
        }
    }
    let annihilation = h_psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();

    let mut sectors: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for index in 0..dim {
        sectors
            .entry(twice_sz(&state.site_dims, index))
            .or_default()
            .push(index);
    }
    let mut position = vec![0usize; dim];
    let mut min_eigenvalue = f64::INFINITY;
    let mut null_dim = 0;
    for members in sectors.values() {
        for (k, &idx) in members.iter().enumerate() {
            position[idx] = k;
        }
        let m = members.len();
        let mut block = Array2::<Complex64>::zeros((m, m));
        for (k, &src) in members.iter().enumerate() {
            h.column(src, |dst, v| block[[position[dst], k]] += v);
        }
        let spectrum = hermitian_eigenvalues(&block)?;
        min_eigenvalue = min_eigenvalue.min(spectrum.min());
        null_dim += spectrum.values().iter().filter(|e| e.abs() < NULL_TOL).count();
    }
    let expected_null_dim = match chain {
        Chain::Spin1Ends { .. } => 4,
        _ => 1,
    };
    Ok(HamiltonianReport {
        dim,
        annihilation,
        min_eigenvalue,
        null_dim,
        expected_null_dim,
    })
}

/// Negativity between the left spin-1/2 end and everything from site 2 to the
/// right end, for spin-1/2-ended chains of `n` spin-1 sites.
pub fn end_to_tail_negativity(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidGeometry("needs at least one spin-1 site".into()));
    }
    let state: VbsState = build_chain(&Chain::HalfEnds { n })?;
    let tail: Vec<usize> = (2..n + 2).collect();
    let rho = reduce(&state, &[0], &tail)?;
    let pt = dense_partial_transpose(&rho);
    Ok(hermitian_eigenvalues(&pt.matrix)?.negativity())
}
