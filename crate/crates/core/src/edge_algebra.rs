//! Scalars and small tensors the edge-basis density matrices are assembled from.
//!
//! Greek edge labels run over `0..=3`. Label 2 is the singlet channel: it is
//! the only one that survives a zero-length block, and it carries the
//! distinguished sign `s_2 = 3` in `s = (-1, -1, 3, -1)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `s_mu`, the channel signs entering the block norms.
pub const CHANNEL_SIGNS: [f64; 4] = [-1.0, -1.0, 3.0, -1.0];

/// Diagonal of the metric `g = diag(-1, +1, +1, +1)`; `g_{mu nu} = g^{mu nu}`.
pub const METRIC: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Label of one of the four degenerate bulk ground states / boundary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeIndex(u8);

impl EdgeIndex {
    pub const ALL: [EdgeIndex; 4] = [EdgeIndex(0), EdgeIndex(1), EdgeIndex(2), EdgeIndex(3)];

    pub fn new(value: i64) -> Result<Self> {
        if (0..4).contains(&value) {
            Ok(EdgeIndex(value as u8))
        } else {
            Err(Error::EdgeIndexOutOfRange(value))
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn sign(self) -> f64 {
        CHANNEL_SIGNS[self.index()]
    }

    #[inline]
    pub fn metric(self) -> f64 {
        METRIC[self.index()]
    }
}

impl TryFrom<usize> for EdgeIndex {
    type Error = Error;

    fn try_from(value: usize) -> Result<Self> {
        EdgeIndex::new(value as i64)
    }
}

impl fmt::Display for EdgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Transfer-matrix decay factor `z`, normally `(-1/3)^L` for a block of `L` sites.
///
/// A raw `z` is also accepted so that the reflected family `rho(-z)` can be
/// evaluated; no integer length realizes those values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFactor {
    z: f64,
    length: Option<u32>,
}

impl DecayFactor {
    /// `(-1/3)^length`, by repeated division so that small powers are exact
    /// up to one rounding per step.
    pub fn from_length(length: u32) -> Self {
        let mut z = 1.0_f64;
        for _ in 0..length {
            z /= -3.0;
        }
        DecayFactor {
            z,
            length: Some(length),
        }
    }

    pub fn new(z: f64) -> Result<Self> {
        if !z.is_finite() || z.abs() > 1.0 {
            return Err(Error::DecayOutOfRange(z.abs()));
        }
        Ok(DecayFactor { z, length: None })
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.z
    }

    pub fn length(self) -> Option<u32> {
        self.length
    }

    /// The reflected factor `-z`. Carries no length.
    pub fn reflected(self) -> Self {
        DecayFactor {
            z: -self.z,
            length: None,
        }
    }
}

/// `z(L) = (-1/3)^L`; negative lengths are rejected.
pub fn z_of(length: i64) -> Result<DecayFactor> {
    if length < 0 {
        return Err(Error::NegativeLength(length));
    }
    let length = u32::try_from(length).map_err(|_| Error::NegativeLength(length))?;
    Ok(DecayFactor::from_length(length))
}

/// Squared norms `lambda_mu` of the four block ground states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights4([f64; 4]);

impl Weights4 {
    pub fn from_array(values: [f64; 4]) -> Self {
        Weights4(values)
    }

    #[inline]
    pub fn get(&self, mu: EdgeIndex) -> f64 {
        self.0[mu.index()]
    }

    #[inline]
    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl std::ops::Index<usize> for Weights4 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// `lambda_mu = 1/4 + z s_mu / 4`.
pub fn lambda_weights(z: DecayFactor) -> Weights4 {
    let z = z.value();
    let mut out = [0.0; 4];
    for (w, s) in out.iter_mut().zip(CHANNEL_SIGNS) {
        let v = 0.25 + 0.25 * z * s;
        // L = 1 closes the singlet channel exactly; keep it at a clean zero.
        *w = if v.abs() < 1e-15 { 0.0 } else { v };
    }
    Weights4(out)
}

/// `S_{mu alpha} = (s_mu + s_alpha) / 2`.
pub fn s_pair(mu: EdgeIndex, alpha: EdgeIndex) -> f64 {
    0.5 * (mu.sign() + alpha.sign())
}

/// Sign of the permutation `(mu, nu, rho, sigma)` of `(0, 1, 2, 3)`, zero on repeats.
pub fn levi_civita(mu: EdgeIndex, nu: EdgeIndex, rho: EdgeIndex, sigma: EdgeIndex) -> i32 {
    levi_civita_raw([mu.index(), nu.index(), rho.index(), sigma.index()])
}

pub(crate) fn levi_civita_raw(p: [usize; 4]) -> i32 {
    let mut sign = 1;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] == p[j] {
                return 0;
            }
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

type Mat2 = [[Complex64; 2]; 2];

/// `sigma_0 = 1`, `sigma_{1,2,3}` the Pauli matrices.
pub fn sigma(mu: EdgeIndex) -> Mat2 {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match mu.index() {
        0 => [[one, o], [o, one]],
        1 => [[o, one], [one, o]],
        2 => [[o, -i], [i, o]],
        _ => [[one, o], [o, -one]],
    }
}

fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, row) in c.iter_mut().enumerate() {
        for (col, entry) in row.iter_mut().enumerate() {
            *entry = a[r][0] * b[0][col] + a[r][1] * b[1][col];
        }
    }
    c
}

/// `Trace(sigma_a sigma_b sigma_c sigma_d)`; always one of `0, +-2, +-2i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliBracket(pub Complex64);

impl PauliBracket {
    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }
}

pub fn pauli_bracket(a: EdgeIndex, b: EdgeIndex, c: EdgeIndex, d: EdgeIndex) -> PauliBracket {
    let prod = mul2(&mul2(&mul2(&sigma(a), &sigma(b)), &sigma(c)), &sigma(d));
    PauliBracket(prod[0][0] + prod[1][1])
}

/// Precomputed table of all 256 brackets, indexed `[a][b][c][d]`.
pub(crate) fn pauli_bracket_table() -> [[[[Complex64; 4]; 4]; 4]; 4] {
    let mut t = [[[[Complex64::new(0.0, 0.0); 4]; 4]; 4]; 4];
    for a in EdgeIndex::ALL {
        for b in EdgeIndex::ALL {
            for c in EdgeIndex::ALL {
                for d in EdgeIndex::ALL {
                    t[a.index()][b.index()][c.index()][d.index()] = pauli_bracket(a, b, c, d).0;
                }
            }
        }
    }
    t
}

/// Decomposition coefficient of the open-chain VBS state onto products of
/// block ground states:
/// `M_{mu nu rho sigma} = (-1)^nu (delta_mu^nu g_{rho sigma} + delta_rho^nu g_{mu sigma}
///  - delta_sigma^nu g_{mu rho} + i g^{nu alpha} eps_{mu alpha rho sigma})`.
pub fn m_coeff(mu: EdgeIndex, nu: EdgeIndex, rho: EdgeIndex, sigma: EdgeIndex) -> Complex64 {
    let (m, n, r, s) = (mu.index(), nu.index(), rho.index(), sigma.index());
    let g = |a: usize, b: usize| if a == b { METRIC[a] } else { 0.0 };
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let real = d(m, n) * g(r, s) + d(r, n) * g(m, s) - d(s, n) * g(m, r);
    // g is diagonal, so the contraction over alpha keeps alpha = nu only.
    let imag = METRIC[n] * levi_civita_raw([m, n, r, s]) as f64;
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    Complex64::new(parity * real, parity * imag)
}

/// The three tensors of the periodic-ring density matrix, already evaluated at
/// the argument signs the ring tensor uses.
#[derive(Debug, Clone, PartialEq)]
pub struct PbcTensors {
    /// `Lambda_{alpha beta}(z1, z2)`.
    pub lambda: [[f64; 4]; 4],
    /// `Gamma_{alpha alpha'}(-z1, -z2)`.
    pub gamma_reflected: [[f64; 4]; 4],
    /// `Gamma_{alpha alpha'}(z1, z2)`.
    pub gamma: [[f64; 4]; 4],
    /// `T_{alpha beta alpha' beta'}(z1, z2)`.
    pub t: [[[[f64; 4]; 4]; 4]; 4],
}

fn ring_norm(z_total: f64) -> Result<f64> {
    let norm = 1.0 + 3.0 * z_total;
    if norm.abs() < 1e-14 {
        return Err(Error::DegenerateRingNorm(z_total));
    }
    Ok(norm)
}

/// `Lambda_{ab}(x, y) = (1 + (s_a s_b + s_a + s_b) x y) / (1 + 3 z_tot)`.
pub fn ring_lambda(x: f64, y: f64, z_total: f64) -> Result<[[f64; 4]; 4]> {
    let norm = ring_norm(z_total)?;
    let s = CHANNEL_SIGNS;
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            out[a][b] = (1.0 + (s[a] * s[b] + s[a] + s[b]) * x * y) / norm;
        }
    }
    Ok(out)
}

/// `Gamma_{aa'}(x, y) = (s_a + s_a') / (1 + 3 z_tot) * (x y - (x + y) / 2)`.
pub fn ring_gamma(x: f64, y: f64, z_total: f64) -> Result<[[f64; 4]; 4]> {
    let norm = ring_norm(z_total)?;
    let s = CHANNEL_SIGNS;
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        for a2 in 0..4 {
            out[a][a2] = (s[a] + s[a2]) / norm * (x * y - 0.5 * (x + y));
        }
    }
    Ok(out)
}

/// `T_{a b a' b'}(x, y) = (s_a - s_b + s_a' - s_b') / (4 + 12 z_tot) * (x - y)`.
pub fn ring_t(x: f64, y: f64, z_total: f64) -> Result<[[[[f64; 4]; 4]; 4]; 4]> {
    let norm = 4.0 * ring_norm(z_total)?;
    let s = CHANNEL_SIGNS;
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for a2 in 0..4 {
                for b2 in 0..4 {
                    out[a][b][a2][b2] = (s[a] - s[b] + s[a2] - s[b2]) / norm * (x - y);
                }
            }
        }
    }
    Ok(out)
}

pub fn pbc_tensors(z1: DecayFactor, z2: DecayFactor, z_total: DecayFactor) -> Result<PbcTensors> {
    let (x, y, zt) = (z1.value(), z2.value(), z_total.value());
    Ok(PbcTensors {
        lambda: ring_lambda(x, y, zt)?,
        gamma_reflected: ring_gamma(-x, -y, zt)?,
        gamma: ring_gamma(x, y, zt)?,
        t: ring_t(x, y, zt)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn idx(v: usize) -> EdgeIndex {
        EdgeIndex::try_from(v).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn edge_index_range() {
        assert!(EdgeIndex::new(-1).is_err());
        assert!(EdgeIndex::new(4).is_err());
        assert_eq!(EdgeIndex::new(3).unwrap().index(), 3);
    }

    #[test]
    fn z_values() {
        assert_eq!(z_of(0).unwrap().value(), 1.0);
        assert_abs_diff_eq!(z_of(1).unwrap().value(), -1.0 / 3.0, epsilon = 1e-16);
        assert_abs_diff_eq!(z_of(3).unwrap().value(), -1.0 / 27.0, epsilon = 1e-16);
        assert_eq!(z_of(-2), Err(Error::NegativeLength(-2)));
        assert!(DecayFactor::new(1.5).is_err());
        assert!(DecayFactor::new(-1.0).is_ok());
    }

    #[test]
    fn lambda_examples() {
        let w0 = lambda_weights(DecayFactor::from_length(0)).as_array();
        assert_eq!(w0, [0.0, 0.0, 1.0, 0.0]);
        let w1 = lambda_weights(DecayFactor::from_length(1)).as_array();
        for (got, want) in w1.iter().zip([1.0 / 3.0, 1.0 / 3.0, 0.0, 1.0 / 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        let w2 = lambda_weights(DecayFactor::from_length(2)).as_array();
        for (got, want) in w2.iter().zip([2.0 / 9.0, 2.0 / 9.0, 1.0 / 3.0, 2.0 / 9.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn s_pair_examples() {
        assert_eq!(s_pair(idx(0), idx(0)), -1.0);
        assert_eq!(s_pair(idx(2), idx(2)), 3.0);
        assert_eq!(s_pair(idx(0), idx(2)), 1.0);
    }

    #[test]
    fn levi_civita_examples_and_antisymmetry() {
        assert_eq!(levi_civita(idx(0), idx(1), idx(2), idx(3)), 1);
        assert_eq!(levi_civita(idx(1), idx(0), idx(2), idx(3)), -1);
        assert_eq!(levi_civita(idx(0), idx(0), idx(2), idx(3)), 0);
        for p in quadruples() {
            let e = levi_civita_raw(p);
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let mut q = p;
                    q.swap(i, j);
                    assert_eq!(levi_civita_raw(q), -e, "{p:?} swap {i}{j}");
                }
            }
        }
    }

    fn quadruples() -> impl Iterator<Item = [usize; 4]> {
        (0..256).map(|k| [k >> 6, (k >> 4) & 3, (k >> 2) & 3, k & 3])
    }

    #[test]
    fn pauli_bracket_examples() {
        let pb = |a, b, cc, d| pauli_bracket(idx(a), idx(b), idx(cc), idx(d)).value();
        assert_eq!(pb(0, 0, 0, 0), c(2.0, 0.0));
        assert_eq!(pb(1, 1, 1, 1), c(2.0, 0.0));
        assert_eq!(pb(1, 2, 1, 2), c(-2.0, 0.0));
        assert_eq!(pb(0, 1, 2, 3), c(0.0, 2.0));
    }

    #[test]
    fn pauli_bracket_values_cyclic_and_reversal() {
        let t = pauli_bracket_table();
        for [a, b, cc, d] in quadruples() {
            let v = t[a][b][cc][d];
            let allowed = [c(0.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(0.0, 2.0), c(0.0, -2.0)];
            assert!(allowed.contains(&v), "{a}{b}{cc}{d} -> {v}");
            assert_eq!(t[b][cc][d][a], v);
            // Hermitian factors: Tr(ABCD)^* = Tr(DCBA).
            assert_eq!(t[d][cc][b][a], v.conj());
        }
    }

    #[test]
    fn m_coeff_examples() {
        assert_eq!(m_coeff(idx(0), idx(0), idx(0), idx(0)), c(-1.0, 0.0));
        assert_eq!(m_coeff(idx(0), idx(1), idx(2), idx(3)), c(0.0, -1.0));
    }

    #[test]
    fn pbc_tensors_at_infinite_separation() {
        let zero = DecayFactor::new(0.0).unwrap();
        let t = pbc_tensors(zero, zero, zero).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(t.lambda[a][b], 1.0);
                assert_eq!(t.gamma[a][b], 0.0);
                assert_eq!(t.gamma_reflected[a][b], 0.0);
            }
        }
        assert!(t.t.iter().flatten().flatten().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn pbc_t_vanishes_for_equal_gaps() {
        let z = DecayFactor::from_length(2);
        let t = pbc_tensors(z, z, DecayFactor::from_length(6)).unwrap();
        assert!(t.t.iter().flatten().flatten().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn pbc_rejects_vanishing_norm() {
        let z = DecayFactor::new(-1.0 / 3.0).unwrap();
        let one = DecayFactor::from_length(1);
        assert!(matches!(pbc_tensors(one, one, z), Err(Error::DegenerateRingNorm(_))));
    }

    proptest::proptest! {
        #[test]
        fn lambda_weights_sum_to_one(z in -1.0f64..=1.0) {
            let w = lambda_weights(DecayFactor::new(z).unwrap());
            proptest::prop_assert!((w.sum() - 1.0).abs() <= 1e-14);
            if z >= -1.0 / 3.0 {
                for v in w.as_array() {
                    proptest::prop_assert!((-1e-15..=1.0 + 1e-15).contains(&v));
                }
            }
            if z > 0.0 {
                proptest::prop_assert!(w[2] >= w[0] && w[0] == w[1] && w[1] == w[3]);
            } else {
                proptest::prop_assert!(w[2] <= w[0]);
            }
        }
    }
}
