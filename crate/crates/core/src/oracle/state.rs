//! Explicit valence-bond-solid states from virtual spin-1/2 singlets.
//!
//! Every spin-1 site carries two virtual spin-1/2s (left, right) projected onto
//! the symmetric subspace: `|+1> = up up`, `|0> = (up down + down up)/sqrt2`,
//! `|-1> = down down`. Neighbouring sites share the singlet
//! `up_i down_{i+1} - down_i up_{i+1}`. Local bases are ordered `(+1, 0, -1)`
//! and `(up, down)`; the global basis is site-major with site 0 most
//! significant.

use ndarray::Array2;
use num_complex::Complex64;

use crate::edge_rdm::{BlockGeometry, BoundaryWeights};
use crate::error::{Error, Result};

/// Largest number of spin-1 sites the oracle will build.
pub const MAX_SPIN1_SITES: usize = 10;

type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The bond singlet in (left virtual spin, right virtual spin) form.
const SINGLET: Mat2 = [[ZERO, ONE], [Complex64::new(-1.0, 0.0), ZERO]];

fn site_projector(s: usize) -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match s {
        0 => [[ONE, ZERO], [ZERO, ZERO]],
        1 => [[ZERO, h], [h, ZERO]],
        _ => [[ZERO, ZERO], [ZERO, ONE]],
    }
}

/// Two-spin patterns of the boundary operators `T_mu` on (left end, right end).
pub fn boundary_pattern(mu: usize) -> Mat2 {
    let i = Complex64::new(0.0, 1.0);
    match mu {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, i], [-i, ZERO]],
        _ => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Open block of `l` spin-1 sites as `3^l` matrices over its two dangling
/// virtual spins: entry `[i][a][b]` is the amplitude of physical configuration
/// `i` with left end spin `a` and right end spin `b`.
pub fn open_block(l: usize) -> Vec<Mat2> {
    if l == 0 {
        return vec![[[ONE, ZERO], [ZERO, ONE]]];
    }
    let projectors: Vec<Mat2> = (0..3).map(site_projector).collect();
    let mut x = projectors.clone();
    for _ in 1..l {
        let mut next = Vec::with_capacity(x.len() * 3);
        for m in &x {
            let m = mul(m, &SINGLET);
            for p in &projectors {
                next.push(mul(&m, p));
            }
        }
        x = next;
    }
    x
}

/// A chain or ring of spin-1 sites and its boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Chain {
    /// `n` spin-1 sites between two physical spin-1/2 ends.
    HalfEnds { n: usize },
    /// `n` spin-1 sites whose free end spins are tied by the boundary operator.
    Spin1Ends { n: usize, weights: BoundaryWeights },
    /// Ring of `n` spin-1 sites.
    Ring { n: usize },
}

impl Chain {
    pub fn spin1_sites(&self) -> usize {
        match *self {
            Chain::HalfEnds { n } | Chain::Spin1Ends { n, .. } | Chain::Ring { n } => n,
        }
    }

    pub fn site_dims(&self) -> Vec<usize> {
        match *self {
            Chain::HalfEnds { n } => {
                let mut dims = vec![2];
                dims.extend(std::iter::repeat_n(3, n));
                dims.push(2);
                dims
            }
            Chain::Spin1Ends { n, .. } | Chain::Ring { n } => vec![3; n],
        }
    }
}

/// Normalized state vector with its per-site dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct VbsState {
    pub amplitudes: Vec<Complex64>,
    pub site_dims: Vec<usize>,
}

impl VbsState {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Total `S^z` in units of 1/2 for a basis index.
    pub fn twice_sz(&self, index: usize) -> i64 {
        twice_sz(&self.site_dims, index)
    }
}

pub(crate) fn twice_sz(dims: &[usize], mut index: usize) -> i64 {
    let mut total = 0;
    for &d in dims.iter().rev() {
        let s = index % d;
        index /= d;
        total += (d as i64 - 1) - 2 * s as i64;
    }
    total
}

/// Builds the normalized VBS state of `chain`.
pub fn build_chain(chain: &Chain) -> Result<VbsState> {
    let n = chain.spin1_sites();
    if n > MAX_SPIN1_SITES {
        return Err(Error::DimensionCap {
            dim: n,
            cap: MAX_SPIN1_SITES,
        });
    }
    if n == 0 {
        return Err(Error::InvalidGeometry(
            "the chain needs at least one spin-1 site".into(),
        ));
    }
    let x = open_block(n);
    let amplitudes: Vec<Complex64> = match chain {
        Chain::HalfEnds { .. } => {
            let mut psi = vec![ZERO; 4 * x.len()];
            for (i, m) in x.iter().enumerate() {
                let full = mul(&mul(&SINGLET, m), &SINGLET);
                for p in 0..2 {
                    for q in 0..2 {
                        psi[(p * x.len() + i) * 2 + q] = full[p][q];
                    }
                }
            }
            psi
        }
        Chain::Spin1Ends { weights, .. } => {
            let w = weights.amplitudes();
            let mut tw = [[ZERO; 2]; 2];
            for (mu, wm) in w.iter().enumerate() {
                let t = boundary_pattern(mu);
                for a in 0..2 {
                    for b in 0..2 {
                        tw[a][b] += wm * t[a][b];
                    }
                }
            }
            x.iter()
                .map(|m| {
                    (0..2)
                        .flat_map(|a| (0..2).map(move |b| (a, b)))
                        .map(|(a, b)| m[a][b] * tw[a][b])
                        .sum()
                })
                .collect()
        }
        Chain::Ring { .. } => x
            .iter()
            .map(|m| {
                let closed = mul(m, &SINGLET);
                closed[0][0] + closed[1][1]
            })
            .collect(),
    };
    let mut state = VbsState {
        amplitudes,
        site_dims: chain.site_dims(),
    };
    let norm = state.norm();
    if norm.is_nan() || norm <= 1e-300 {
        return Err(Error::InvalidGeometry("the VBS state vanishes".into()));
    }
    for a in &mut state.amplitudes {
        *a /= norm;
    }
    Ok(state)
}

/// The chain a geometry lives on, with the site indices of blocks A and B.
pub fn geometry_sites(
    geometry: &BlockGeometry,
    weights: Option<&BoundaryWeights>,
) -> Result<(Chain, Vec<usize>, Vec<usize>)> {
    geometry.validate()?;
    let n = geometry.spin1_sites();
    let range = |start: usize, len: usize| (start..start + len).collect::<Vec<_>>();
    Ok(match *geometry {
        BlockGeometry::HalfBoundary { lc, la, gap, lb, .. } => {
            if weights.is_some() {
                return Err(Error::InvalidGeometry(
                    "boundary weights only apply to the spin-1 boundary".into(),
                ));
            }
            // Site 0 is the left spin-1/2 end.
            let a0 = 1 + lc;
            (Chain::HalfEnds { n }, range(a0, la), range(a0 + la + gap, lb))
        }
        BlockGeometry::Spin1Boundary { la, gap, lb } => {
            let weights =
                *weights.ok_or_else(|| Error::InvalidGeometry("spin-1 boundary needs boundary weights".into()))?;
            (Chain::Spin1Ends { n, weights }, range(0, la), range(la + gap, lb))
        }
        BlockGeometry::Periodic { l1, la, l2, lb } => {
            if weights.is_some() {
                return Err(Error::InvalidGeometry(
                    "boundary weights only apply to the spin-1 boundary".into(),
                ));
            }
            (Chain::Ring { n }, range(l1, la), range(l1 + la + l2, lb))
        }
    })
}

/// Builds the state a geometry lives on; see [`geometry_sites`] for the blocks.
pub fn build_vbs(geometry: &BlockGeometry, weights: Option<&BoundaryWeights>) -> Result<VbsState> {
    let (chain, _, _) = geometry_sites(geometry, weights)?;
    build_chain(&chain)
}

/// The four `T_mu`-capped states of an open block of `l` sites, one row each,
/// normalized so the squared norms sum to one.
pub fn edge_states(l: usize) -> Array2<Complex64> {
    let x = open_block(l);
    let mut e = Array2::zeros((4, x.len()));
    for mu in 0..4 {
        let t = boundary_pattern(mu);
        for (i, m) in x.iter().enumerate() {
            e[[mu, i]] = (0..2)
                .flat_map(|a| (0..2).map(move |b| (a, b)))
                .map(|(a, b)| m[a][b] * t[a][b])
                .sum();
        }
    }
    let total = e.iter().map(|c: &Complex64| c.norm_sqr()).sum::<f64>().sqrt();
    e.mapv_inplace(|c| c / total);
    e
}
