//! Two-block reduced density operators in the edge basis `|A_mu, B_rho>`.
//!
//! Coefficients are stored as a 16x16 matrix whose composite row index is
//! `4 * mu + rho` (A label major) and column index `4 * alpha + beta`. The
//! basis vectors are orthogonal with squared norms `lambda_mu(z_A) lambda_rho(z_B)`;
//! [`EdgeOperator::orthonormalize`] turns the coefficients into an honest
//! Hermitian matrix over an orthonormal basis.
//!
//! Edge label conventions follow the boundary operators
//! `T_0 = aa + bb`, `T_1 = ab + ba`, `T_2 = i(ab - ba)`, `T_3 = aa - bb`
//! acting on the two dangling virtual spins (left end first) of a block.

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::edge_algebra::{
    lambda_weights, levi_civita_raw, pauli_bracket_table, pbc_tensors, DecayFactor, Weights4, CHANNEL_SIGNS, METRIC,
};
use crate::error::{Error, Result};

pub const EDGE_DIM: usize = 16;

#[inline]
fn pair(mu: usize, rho: usize) -> usize {
    4 * mu + rho
}

/// Where the two blocks sit and what bounds the chain.
///
/// * `HalfBoundary`: spin-1/2 ends, partition `C | A | D | B | E`. `lc` and `le`
///   count the spin-1 sites of the outer blocks; the spin-1/2 end spins always
///   belong to C and E. `gap` is the length of D.
/// * `Spin1Boundary`: open spin-1 chain `A | C | B` whose two free end spins are
///   tied together by a boundary operator; `gap` is the length of the traced
///   block C.
/// * `Periodic`: ring `1 | A | 2 | B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BlockGeometry {
    HalfBoundary {
        lc: usize,
        la: usize,
        gap: usize,
        lb: usize,
        le: usize,
    },
    Spin1Boundary {
        la: usize,
        gap: usize,
        lb: usize,
    },
    Periodic {
        l1: usize,
        la: usize,
        l2: usize,
        lb: usize,
    },
}

/// Conditions worth echoing next to a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryFlag {
    /// Outer block C holds only the spin-1/2 end.
    BareLeftEnd,
    /// Outer block E holds only the spin-1/2 end.
    BareRightEnd,
}

impl fmt::Display for GeometryFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryFlag::BareLeftEnd => f.write_str("bare_left_end"),
            GeometryFlag::BareRightEnd => f.write_str("bare_right_end"),
        }
    }
}

impl BlockGeometry {
    pub fn validate(&self) -> Result<()> {
        let (la, lb) = self.block_lengths();
        if la == 0 || lb == 0 {
            return Err(Error::InvalidGeometry(format!(
                "blocks A and B need at least one site (got L_A = {la}, L_B = {lb})"
            )));
        }
        if self.spin1_sites() > u32::MAX as usize {
            return Err(Error::InvalidGeometry("chain too long".into()));
        }
        Ok(())
    }

    pub fn block_lengths(&self) -> (usize, usize) {
        match *self {
            BlockGeometry::HalfBoundary { la, lb, .. }
            | BlockGeometry::Spin1Boundary { la, lb, .. }
            | BlockGeometry::Periodic { la, lb, .. } => (la, lb),
        }
    }

    /// Number of spin-1 sites in the whole chain or ring.
    pub fn spin1_sites(&self) -> usize {
        match *self {
            BlockGeometry::HalfBoundary { lc, la, gap, lb, le } => lc + la + gap + lb + le,
            BlockGeometry::Spin1Boundary { la, gap, lb } => la + gap + lb,
            BlockGeometry::Periodic { l1, la, l2, lb } => l1 + la + l2 + lb,
        }
    }

    pub fn ring_length(&self) -> Option<usize> {
        match self {
            BlockGeometry::Periodic { .. } => Some(self.spin1_sites()),
            _ => None,
        }
    }

    pub fn flags(&self) -> Vec<GeometryFlag> {
        let mut flags = Vec::new();
        if let BlockGeometry::HalfBoundary { lc, le, .. } = *self {
            if lc == 0 {
                flags.push(GeometryFlag::BareLeftEnd);
            }
            if le == 0 {
                flags.push(GeometryFlag::BareRightEnd);
            }
        }
        flags
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            BlockGeometry::HalfBoundary { .. } => "half",
            BlockGeometry::Spin1Boundary { .. } => "spin1",
            BlockGeometry::Periodic { .. } => "pbc",
        }
    }

    fn len_factor(n: usize) -> DecayFactor {
        DecayFactor::from_length(n as u32)
    }

    pub fn z_a(&self) -> DecayFactor {
        Self::len_factor(self.block_lengths().0)
    }

    pub fn z_b(&self) -> DecayFactor {
        Self::len_factor(self.block_lengths().1)
    }
}

impl fmt::Display for BlockGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BlockGeometry::HalfBoundary { lc, la, gap, lb, le } => {
                write!(f, "half(lc={lc}, la={la}, gap={gap}, lb={lb}, le={le})")
            }
            BlockGeometry::Spin1Boundary { la, gap, lb } => {
                write!(f, "spin1(la={la}, gap={gap}, lb={lb})")
            }
            BlockGeometry::Periodic { l1, la, l2, lb } => {
                write!(f, "pbc(l1={l1}, la={la}, l2={l2}, lb={lb})")
            }
        }
    }
}

/// Amplitudes `w_mu` of the boundary operator `sum_mu w_mu T_mu^dagger` tying
/// the two free end spins of an open spin-1 chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryWeights {
    w: [Complex64; 4],
    label: Option<&'static str>,
}

impl BoundaryWeights {
    /// Normalizes `w`; zero vectors are rejected.
    pub fn new(w: [Complex64; 4]) -> Result<Self> {
        let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 1e-300 || !norm.is_finite() {
            return Err(Error::ZeroBoundaryWeights);
        }
        Ok(BoundaryWeights {
            w: w.map(|c| c / norm),
            label: None,
        })
    }

    /// `e_beta`, the state `|VBS_beta>`.
    pub fn basis(beta: usize) -> Result<Self> {
        if beta > 3 {
            return Err(Error::EdgeIndexOutOfRange(beta as i64));
        }
        let mut w = [Complex64::new(0.0, 0.0); 4];
        w[beta] = Complex64::new(1.0, 0.0);
        let mut out = Self::new(w)?;
        out.label = Some(["beta0", "beta1", "beta2", "beta3"][beta]);
        Ok(out)
    }

    /// Product boundary `psi_1^c psi_N^d` with `c, d` in `{1, 2}` (1 = up, 2 = down).
    pub fn separable(c: u8, d: u8) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let (w, label) = match (c, d) {
            (1, 1) => ([one, zero, zero, one], "cc"),
            (1, 2) => ([zero, one, -i, zero], "cd"),
            (2, 1) => ([zero, one, i, zero], "dc"),
            (2, 2) => ([one, zero, zero, -one], "dd"),
            _ => {
                return Err(Error::Parse(format!(
                    "separable boundary labels must be 1 or 2, got ({c}, {d})"
                )))
            }
        };
        let mut out = Self::new(w)?;
        out.label = Some(label);
        Ok(out)
    }

    #[inline]
    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.w
    }

    pub fn label(&self) -> Option<&'static str> {
        self.label
    }

    /// `phi^{cd}`: +1 for `c = d`, -1 otherwise; `None` unless separable.
    pub fn separable_phase(&self) -> Option<f64> {
        match self.label? {
            "cc" | "dd" => Some(1.0),
            "cd" | "dc" => Some(-1.0),
            _ => None,
        }
    }
}

impl std::str::FromStr for BoundaryWeights {
    type Err = Error;

    /// Named weights (`beta0`..`beta3`, `cc`, `cd`, `dc`, `dd`) or four complex
    /// numbers `re:im` separated by commas, e.g. `1:0,0:0,0:0,1:0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "beta0" | "beta1" | "beta2" | "beta3" => return BoundaryWeights::basis(s[4..].parse().unwrap_or(9)),
            "cc" => return BoundaryWeights::separable(1, 1),
            "cd" => return BoundaryWeights::separable(1, 2),
            "dc" => return BoundaryWeights::separable(2, 1),
            "dd" => return BoundaryWeights::separable(2, 2),
            _ => {}
        }
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "weights '{s}': expected a name or four comma-separated complex numbers"
            )));
        }
        let mut w = [Complex64::new(0.0, 0.0); 4];
        for (slot, part) in w.iter_mut().zip(parts) {
            let (re, im) = part.split_once(':').unwrap_or((part, "0"));
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad real part '{re}'")))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad imaginary part '{im}'")))?;
            *slot = Complex64::new(re, im);
        }
        BoundaryWeights::new(w)
    }
}

impl fmt::Display for BoundaryWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = self.label {
            return f.write_str(label);
        }
        let parts: Vec<String> = self.w.iter().map(|c| format!("{:?}:{:?}", c.re, c.im)).collect();
        f.write_str(&parts.join(","))
    }
}

/// Coefficient matrix over the non-orthonormal edge basis, together with the
/// block norms needed to orthonormalize it.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeOperator {
    coeffs: Array2<Complex64>,
    weights_a: Weights4,
    weights_b: Weights4,
    geometry: Option<BlockGeometry>,
    transposed: bool,
}

impl EdgeOperator {
    fn from_tensor(
        tensor: impl Fn(usize, usize, usize, usize) -> Complex64,
        z_a: DecayFactor,
        z_b: DecayFactor,
    ) -> Result<Self> {
        let mut coeffs = Array2::zeros((EDGE_DIM, EDGE_DIM));
        for mu in 0..4 {
            for rho in 0..4 {
                for alpha in 0..4 {
                    for beta in 0..4 {
                        coeffs[[pair(mu, rho), pair(alpha, beta)]] = tensor(mu, rho, alpha, beta);
                    }
                }
            }
        }
        let mut op = EdgeOperator {
            coeffs,
            weights_a: lambda_weights(z_a),
            weights_b: lambda_weights(z_b),
            geometry: None,
            transposed: false,
        };
        op.normalize()?;
        Ok(op)
    }

    fn normalize(&mut self) -> Result<()> {
        let trace = self.weighted_trace();
        if trace.re.is_nan() || trace.re.abs() <= 1e-300 {
            return Err(Error::InvalidGeometry(
                "the state vanishes for these block lengths".into(),
            ));
        }
        self.coeffs.mapv_inplace(|c| c / trace.re);
        Ok(())
    }

    /// `sum_{mu rho} lambda_mu(z_A) lambda_rho(z_B) C_{mu rho, mu rho}`.
    pub fn weighted_trace(&self) -> Complex64 {
        let mut trace = Complex64::new(0.0, 0.0);
        for mu in 0..4 {
            for rho in 0..4 {
                let k = pair(mu, rho);
                trace += self.coeffs[[k, k]] * self.weights_a[mu] * self.weights_b[rho];
            }
        }
        trace
    }

    /// Builds the operator for a geometry; `weights` is required for
    /// `Spin1Boundary` and must be absent otherwise.
    pub fn for_geometry(geometry: BlockGeometry, weights: Option<&BoundaryWeights>) -> Result<Self> {
        geometry.validate()?;
        let (z_a, z_b) = (geometry.z_a(), geometry.z_b());
        let len = |n: usize| DecayFactor::from_length(n as u32);
        let mut op = match geometry {
            BlockGeometry::HalfBoundary { gap, .. } => {
                reject_weights(weights, &geometry)?;
                build_half_boundary(z_a, z_b, len(gap))?
            }
            BlockGeometry::Spin1Boundary { gap, .. } => {
                let w =
                    weights.ok_or_else(|| Error::InvalidGeometry("spin-1 boundary needs boundary weights".into()))?;
                build_spin1_boundary(z_a, z_b, len(gap), w)?
            }
            BlockGeometry::Periodic { l1, l2, .. } => {
                reject_weights(weights, &geometry)?;
                build_pbc(z_a, z_b, len(l1), len(l2), len(geometry.spin1_sites()))?
            }
        };
        op.geometry = Some(geometry);
        Ok(op)
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    pub fn coefficient(&self, mu: usize, rho: usize, alpha: usize, beta: usize) -> Complex64 {
        self.coeffs[[pair(mu, rho), pair(alpha, beta)]]
    }

    pub fn weights_a(&self) -> Weights4 {
        self.weights_a
    }

    pub fn weights_b(&self) -> Weights4 {
        self.weights_b
    }

    pub fn geometry(&self) -> Option<BlockGeometry> {
        self.geometry
    }

    pub fn is_transposed(&self) -> bool {
        self.transposed
    }

    /// Partial transpose on A: `C_{mu rho, alpha beta} -> C_{alpha rho, mu beta}`.
    pub fn partial_transpose_a(&self) -> EdgeOperator {
        let mut out = Array2::zeros((EDGE_DIM, EDGE_DIM));
        for mu in 0..4 {
            for rho in 0..4 {
                for alpha in 0..4 {
                    for beta in 0..4 {
                        out[[pair(mu, rho), pair(alpha, beta)]] = self.coeffs[[pair(alpha, rho), pair(mu, beta)]];
                    }
                }
            }
        }
        EdgeOperator {
            coeffs: out,
            transposed: !self.transposed,
            ..self.clone()
        }
    }

    /// `H = D C D` with `D = diag(sqrt(lambda_mu(z_A) lambda_rho(z_B)))`.
    ///
    /// Channels with zero norm give zero rows and columns.
    pub fn orthonormalize(&self) -> Array2<Complex64> {
        let d = self.gram_sqrt();
        let mut h = self.coeffs.clone();
        for ((r, c), v) in h.indexed_iter_mut() {
            *v *= d[r] * d[c];
        }
        h
    }

    fn gram_sqrt(&self) -> [f64; EDGE_DIM] {
        let mut d = [0.0; EDGE_DIM];
        for mu in 0..4 {
            for rho in 0..4 {
                d[pair(mu, rho)] = (self.weights_a[mu] * self.weights_b[rho]).max(0.0).sqrt();
            }
        }
        d
    }
}

fn reject_weights(weights: Option<&BoundaryWeights>, geometry: &BlockGeometry) -> Result<()> {
    match weights {
        Some(_) => Err(Error::InvalidGeometry(format!(
            "boundary weights only apply to the spin-1 boundary, not {}",
            geometry.mode_name()
        ))),
        None => Ok(()),
    }
}

#[inline]
fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

#[inline]
fn s_pair_raw(a: usize, b: usize) -> f64 {
    0.5 * (CHANNEL_SIGNS[a] + CHANNEL_SIGNS[b])
}

/// Closed form of `sum_nu lambda_nu(z) M_{mu nu rho sigma} conj(M_{alpha nu beta sigma})`:
///
/// `delta_mu^alpha delta_rho^beta
///  - z g^{mu mu} g^{alpha alpha} [delta_mu^rho delta_alpha^beta - g^{rho alpha} g^{mu beta}] S_{mu alpha}
///  + (i z / 2) g^{alpha alpha} g^{beta beta} eps_{mu rho alpha beta} (S_{rho beta} - S_{mu alpha})`.
pub fn half_boundary_coefficient(mu: usize, rho: usize, alpha: usize, beta: usize, z: f64) -> Complex64 {
    let g = METRIC;
    let bracket = delta(mu, rho) * delta(alpha, beta) - g[rho] * g[mu] * delta(rho, alpha) * delta(mu, beta);
    let re = delta(mu, alpha) * delta(rho, beta) - z * g[mu] * g[alpha] * bracket * s_pair_raw(mu, alpha);
    let eps = levi_civita_raw([mu, rho, alpha, beta]) as f64;
    let im = 0.5 * z * g[alpha] * g[beta] * eps * (s_pair_raw(rho, beta) - s_pair_raw(mu, alpha));
    Complex64::new(re, im)
}

/// Spin-1/2 ends: blocks separated by a traced block with decay factor `z`.
/// `z_a`, `z_b` only enter the block norms.
pub fn build_half_boundary(z_a: DecayFactor, z_b: DecayFactor, z: DecayFactor) -> Result<EdgeOperator> {
    let z = z.value();
    EdgeOperator::from_tensor(|m, r, a, b| half_boundary_coefficient(m, r, a, b, z), z_a, z_b)
}

/// Spin-1 ends tied by the boundary operator with amplitudes `w`; the traced
/// block between A and B has decay factor `z_gap`.
pub fn build_spin1_boundary(
    z_a: DecayFactor,
    z_b: DecayFactor,
    z_gap: DecayFactor,
    w: &BoundaryWeights,
) -> Result<EdgeOperator> {
    build_spin1_with_channels(z_a, z_b, lambda_weights(z_gap).as_array(), w)
}

/// As [`build_spin1_boundary`] with arbitrary (not necessarily physical)
/// weights on the traced block's four channels.
///
/// `rho = sum_g c_g amp_g amp_g^dagger` with
/// `amp_g[a, b] = sum_beta w_beta Tr(sigma_a sigma_g sigma_b sigma_beta)`.
pub fn build_spin1_with_channels(
    z_a: DecayFactor,
    z_b: DecayFactor,
    channels: [f64; 4],
    w: &BoundaryWeights,
) -> Result<EdgeOperator> {
    let table = pauli_bracket_table();
    let w = w.amplitudes();
    let mut amp = [[[Complex64::new(0.0, 0.0); 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for g in 0..4 {
                amp[a][b][g] = (0..4).map(|beta| w[beta] * table[a][g][b][beta]).sum();
            }
        }
    }
    EdgeOperator::from_tensor(
        |a, b, a2, b2| (0..4).map(|g| amp[a][b][g] * amp[a2][b2][g].conj() * channels[g]).sum(),
        z_a,
        z_b,
    )
}

/// Periodic ring `1 | A | 2 | B` with gap factors `z1`, `z2` and whole-ring
/// factor `z_total`:
///
/// `delta_a^a' delta_b^b' Lambda_ab(z1, z2) - g_ab g^a'b' Gamma_aa'(-z1, -z2)
///  - delta_a^b' delta_a'^b Gamma_aa'(z1, z2) - i g^{b'b'} g^{a'a'} eps_{b b' a a'} T_{a b a' b'}(z1, z2)`.
pub fn build_pbc(
    z_a: DecayFactor,
    z_b: DecayFactor,
    z1: DecayFactor,
    z2: DecayFactor,
    z_total: DecayFactor,
) -> Result<EdgeOperator> {
    let t = pbc_tensors(z1, z2, z_total)?;
    let g = METRIC;
    EdgeOperator::from_tensor(
        |a, b, a2, b2| {
            let re = delta(a, a2) * delta(b, b2) * t.lambda[a][b]
                - delta(a, b) * delta(a2, b2) * g[a] * g[a2] * t.gamma_reflected[a][a2]
                - delta(a, b2) * delta(b, a2) * t.gamma[a][a2];
            let eps = levi_civita_raw([b, b2, a, a2]) as f64;
            let im = -g[b2] * g[a2] * eps * t.t[a][b][a2][b2];
            Complex64::new(re, im)
        },
        z_a,
        z_b,
    )
}
