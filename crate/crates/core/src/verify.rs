//! Edge-basis pipeline against the brute-force oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::edge_rdm::{BlockGeometry, BoundaryWeights};
use crate::error::Result;
use crate::oracle::oracle_negativity;
use crate::spectrum::negativity_of;
use crate::Complex64;

/// Default agreement tolerance for negativities and padded spectra.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Seed of the random boundary state in [`standard_weights`].
pub const RANDOM_WEIGHTS_SEED: u64 = 20_240_917;

/// `e_0..e_3`, the four product boundaries and one seeded random state.
pub fn standard_weights() -> Vec<BoundaryWeights> {
    let mut out: Vec<BoundaryWeights> = (0..4)
        .map(|b| BoundaryWeights::basis(b).expect("index in range"))
        .collect();
    for (c, d) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        out.push(BoundaryWeights::separable(c, d).expect("labels in range"));
    }
    out.push(random_weights(RANDOM_WEIGHTS_SEED));
    out
}

pub fn random_weights(seed: u64) -> BoundaryWeights {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let w = std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        if let Ok(w) = BoundaryWeights::new(w) {
            return w;
        }
    }
}

/// One geometry (plus boundary weights for the spin-1 boundary) to compare.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Case {
    pub geometry: BlockGeometry,
    pub weights: Option<BoundaryWeights>,
}

/// All geometries with `L_A + L_B <= max_block_sum` and at most
/// `max_sites` spin-1 sites, every mode, every weight in [`standard_weights`].
pub fn standard_cases(max_sites: usize, max_block_sum: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    let weights = standard_weights();
    for la in 1..max_block_sum {
        for lb in 1..=max_block_sum - la {
            for gap in 0..=2 {
                for lc in 0..=1 {
                    for le in 0..=1 {
                        let g = BlockGeometry::HalfBoundary { lc, la, gap, lb, le };
                        if g.spin1_sites() <= max_sites {
                            cases.push(Case {
                                geometry: g,
                                weights: None,
                            });
                        }
                    }
                }
                let g = BlockGeometry::Spin1Boundary { la, gap, lb };
                if g.spin1_sites() <= max_sites {
                    for w in &weights {
                        cases.push(Case {
                            geometry: g,
                            weights: Some(*w),
                        });
                    }
                }
                for l2 in 0..=2 {
                    let g = BlockGeometry::Periodic { l1: gap, la, l2, lb };
                    if g.spin1_sites() <= max_sites {
                        cases.push(Case {
                            geometry: g,
                            weights: None,
                        });
                    }
                }
            }
        }
    }
    cases
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub case: Case,
    pub negativity_edge: f64,
    pub negativity_oracle: f64,
    /// Largest elementwise gap between the zero-padded sorted spectra.
    pub spectrum_distance: f64,
}

impl Comparison {
    pub fn negativity_gap(&self) -> f64 {
        (self.negativity_edge - self.negativity_oracle).abs()
    }

    pub fn agrees(&self, tol: f64) -> bool {
        self.negativity_gap() <= tol && self.spectrum_distance <= tol
    }
}

pub fn compare(case: &Case) -> Result<Comparison> {
    let edge = negativity_of(case.geometry, case.weights.as_ref())?;
    let (negativity_oracle, oracle) = oracle_negativity(&case.geometry, case.weights.as_ref())?;
    Ok(Comparison {
        case: *case,
        negativity_edge: edge.negativity,
        negativity_oracle,
        spectrum_distance: edge.spectrum.padded_distance(&oracle),
    })
}

/// Compares every case in parallel; results keep the input order.
pub fn run(cases: &[Case]) -> Result<Vec<Comparison>> {
    cases.par_iter().map(compare).collect()
}
