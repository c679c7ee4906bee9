//! Dense Hermitian eigenvalues, negativity extraction and the asymptotic
//! closed forms used for regression.
//!
//! Negativity is reported as a magnitude, `sum_i |min(e_i, 0)|`, with
//! eigenvalues below `-NEGATIVE_TOL` counted as negative.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::edge_algebra::DecayFactor;
use crate::edge_rdm::{BlockGeometry, BoundaryWeights, EdgeOperator, GeometryFlag};
use crate::error::{Error, Result};

/// Eigenvalues above `-NEGATIVE_TOL` are treated as non-negative.
pub const NEGATIVE_TOL: f64 = 1e-12;

/// Largest matrix accepted by [`hermitian_eigenvalues`].
pub const MAX_DIM: usize = 1024;

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_QL_SWEEPS: usize = 64;

/// Sorted (ascending) real spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn from_values(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Spectrum { eigenvalues }
    }

    pub fn values(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// `sum |e|` over eigenvalues below `-NEGATIVE_TOL`.
    pub fn negativity(&self) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|&&e| e < -NEGATIVE_TOL)
            .fold(0.0, |acc, e| acc - e)
    }

    /// The spectrum zero-padded to length `n` and re-sorted.
    pub fn padded(&self, n: usize) -> Spectrum {
        let mut values = self.eigenvalues.clone();
        values.resize(n.max(values.len()), 0.0);
        Spectrum::from_values(values)
    }

    /// Largest elementwise gap after padding both spectra to a common length.
    pub fn padded_distance(&self, other: &Spectrum) -> f64 {
        let n = self.len().max(other.len());
        let (a, b) = (self.padded(n), other.padded(n));
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// Negativity of one geometry together with the spectrum it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativityResult {
    pub negativity: f64,
    pub spectrum: Spectrum,
    pub geometry: BlockGeometry,
    pub weights: Option<BoundaryWeights>,
    pub flags: Vec<GeometryFlag>,
}

/// Largest `|H_ij - conj(H_ji)|`.
pub fn max_asymmetry(h: &Array2<Complex64>) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[[i, j]] - h[[j, i]].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a dense Hermitian matrix.
///
/// Householder reduction to a real symmetric tridiagonal matrix, then
/// implicit QL with Wilkinson shifts.
pub fn hermitian_eigenvalues(h: &Array2<Complex64>) -> Result<Spectrum> {
    let (rows, cols) = h.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows > MAX_DIM {
        return Err(Error::DimensionCap {
            dim: rows,
            cap: MAX_DIM,
        });
    }
    let scale = h.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let asym = max_asymmetry(h);
    if asym.is_nan() || asym > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { max_asymmetry: asym });
    }
    if rows == 0 {
        return Ok(Spectrum::from_values(Vec::new()));
    }
    let (mut d, mut e) = tridiagonalize(h);
    tridiagonal_ql(&mut d, &mut e)?;
    Ok(Spectrum::from_values(d))
}

/// Returns the diagonal and the off-diagonal moduli (`e[i]` couples `i` and
/// `i + 1`; `e[n - 1] = 0`).
fn tridiagonalize(h: &Array2<Complex64>) -> (Vec<f64>, Vec<f64>) {
    let n = h.nrows();
    let mut a = h.to_owned();
    // Symmetrize away rounding noise so the reduction stays exactly Hermitian.
    for i in 0..n {
        a[[i, i]] = Complex64::new(a[[i, i]].re, 0.0);
        for j in i + 1..n {
            let v = 0.5 * (a[[i, j]] + a[[j, i]].conj());
            a[[i, j]] = v;
            a[[j, i]] = v.conj();
        }
    }
    // Columns below eps * ||A|| are left as they are; the eigenvalues move by
    // at most that much.
    let negligible = f64::EPSILON * a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut off = vec![0.0; n];
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let lo = k + 1;
        let norm = scaled_norm((lo..n).map(|i| a[[i, k]]));
        off[k] = norm;
        if n - lo == 1 || norm <= negligible {
            continue;
        }
        let x0 = a[[lo, k]];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        for i in lo..n {
            v[i] = a[[i, k]];
        }
        v[lo] -= alpha;
        let vnorm = scaled_norm(v[lo..n].iter().copied());
        if vnorm == 0.0 {
            continue;
        }
        for x in &mut v[lo..n] {
            *x /= vnorm;
        }
        // B <- (I - 2vv*) B (I - 2vv*) on the trailing block.
        for i in lo..n {
            p[i] = (lo..n).map(|j| a[[i, j]] * v[j]).sum();
        }
        let kappa: Complex64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        for i in lo..n {
            p[i] -= kappa.re * v[i];
        }
        for i in lo..n {
            for j in lo..n {
                a[[i, j]] -= 2.0 * (v[i] * p[j].conj() + p[i] * v[j].conj());
            }
        }
        for i in lo..n {
            a[[i, k]] = Complex64::new(0.0, 0.0);
            a[[k, i]] = Complex64::new(0.0, 0.0);
        }
        a[[lo, k]] = alpha;
        a[[k, lo]] = alpha.conj();
    }
    let d = (0..n).map(|i| a[[i, i]].re).collect();
    (d, off)
}

/// Euclidean norm without underflow for tiny entries.
fn scaled_norm(xs: impl Iterator<Item = Complex64> + Clone) -> f64 {
    let scale = xs.clone().map(|x| x.re.abs().max(x.im.abs())).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    scale * xs.map(|x| (x / scale).norm_sqr()).sum::<f64>().sqrt()
}

fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    // Couplings below eps * ||T|| are dropped; eigenvalues are only needed to
    // absolute accuracy.
    let floor = f64::EPSILON
        * (0..n)
            .map(|i| d[i].abs() + e[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 })
            .fold(0.0, f64::max);
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence { dim: n });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full pipeline: build, partially transpose on A, orthonormalize, eigensolve.
pub fn negativity_of(geometry: BlockGeometry, weights: Option<&BoundaryWeights>) -> Result<NegativityResult> {
    let op = EdgeOperator::for_geometry(geometry, weights)?;
    let h = op.partial_transpose_a().orthonormalize();
    let spectrum = hermitian_eigenvalues(&h)?;
    Ok(NegativityResult {
        negativity: spectrum.negativity(),
        spectrum,
        geometry,
        weights: weights.copied(),
        flags: geometry.flags(),
    })
}

/// Closed-form negativities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// Spin-1/2 ends, adjacent blocks: `1/2 - (3/4)(z_A^2 + z_B^2)`.
    HalfAdjacent { la: u32, lb: u32 },
    /// Spin-1 ends, large blocks: `3/2` for adjacent blocks, `1/2` otherwise.
    Spin1Limit { gap: u32 },
    /// Spin-1 ends, `L_A` large and `L_B = 1`.
    SemiInfinite { gap: u32 },
    /// Product boundary `(c, d)`, adjacent blocks.
    SeparableAdjacent { la: u32, lb: u32, c: u8, d: u8 },
}

impl ClosedForm {
    pub const KINDS: [&'static str; 4] = ["half_adjacent", "spin1_limit", "semi_infinite", "separable_adjacent"];

    /// Builds a closed form from its kind name and positional parameters:
    /// `half_adjacent la lb`, `spin1_limit gap`, `semi_infinite gap`,
    /// `separable_adjacent la lb c d`.
    pub fn from_parts(kind: &str, params: &[u32]) -> Result<Self> {
        let want = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "{kind} takes {n} parameters, got {}",
                    params.len()
                )))
            }
        };
        let cd = |v: u32| {
            if v == 1 || v == 2 {
                Ok(v as u8)
            } else {
                Err(Error::Parse(format!("boundary label must be 1 or 2, got {v}")))
            }
        };
        match kind.parse::<ClosedFormKind>()? {
            ClosedFormKind::HalfAdjacent => {
                want(2)?;
                Ok(ClosedForm::HalfAdjacent {
                    la: params[0],
                    lb: params[1],
                })
            }
            ClosedFormKind::Spin1Limit => {
                want(1)?;
                Ok(ClosedForm::Spin1Limit { gap: params[0] })
            }
            ClosedFormKind::SemiInfinite => {
                want(1)?;
                Ok(ClosedForm::SemiInfinite { gap: params[0] })
            }
            ClosedFormKind::SeparableAdjacent => {
                want(4)?;
                Ok(ClosedForm::SeparableAdjacent {
                    la: params[0],
                    lb: params[1],
                    c: cd(params[2])?,
                    d: cd(params[3])?,
                })
            }
        }
    }

    /// The closed form that describes `geometry`, if any.
    pub fn for_geometry(geometry: &BlockGeometry, weights: Option<&BoundaryWeights>) -> Option<Self> {
        match *geometry {
            BlockGeometry::HalfBoundary { la, gap: 0, lb, .. } => Some(ClosedForm::HalfAdjacent {
                la: la as u32,
                lb: lb as u32,
            }),
            BlockGeometry::Spin1Boundary { la, gap, lb } => {
                let w = weights?;
                match (w.label()?, w.separable_phase()) {
                    (label, Some(_)) if gap == 0 => {
                        let (c, d) = match label {
                            "cc" => (1, 1),
                            "cd" => (1, 2),
                            "dc" => (2, 1),
                            _ => (2, 2),
                        };
                        Some(ClosedForm::SeparableAdjacent {
                            la: la as u32,
                            lb: lb as u32,
                            c,
                            d,
                        })
                    }
                    (_, Some(_)) => None,
                    (_, None) if lb == 1 => Some(ClosedForm::SemiInfinite { gap: gap as u32 }),
                    (_, None) => Some(ClosedForm::Spin1Limit { gap: gap as u32 }),
                }
            }
            _ => None,
        }
    }

    pub fn kind(&self) -> ClosedFormKind {
        match self {
            ClosedForm::HalfAdjacent { .. } => ClosedFormKind::HalfAdjacent,
            ClosedForm::Spin1Limit { .. } => ClosedFormKind::Spin1Limit,
            ClosedForm::SemiInfinite { .. } => ClosedFormKind::SemiInfinite,
            ClosedForm::SeparableAdjacent { .. } => ClosedFormKind::SeparableAdjacent,
        }
    }

    pub fn evaluate(&self) -> f64 {
        let z = |l: u32| DecayFactor::from_length(l).value();
        match *self {
            ClosedForm::HalfAdjacent { la, lb } => {
                let (za, zb) = (z(la), z(lb));
                0.5 - 0.75 * (za * za + zb * zb)
            }
            ClosedForm::Spin1Limit { gap } => {
                if gap == 0 {
                    1.5
                } else {
                    0.5
                }
            }
            ClosedForm::SemiInfinite { gap } => semi_infinite(z(gap)),
            ClosedForm::SeparableAdjacent { la, lb, c, d } => {
                let (za, zb) = (z(la), z(lb));
                let phi = if c == d { 1.0 } else { -1.0 };
                let num = (1.0 + za * za * zb * zb - za * za - zb * zb).max(0.0).sqrt();
                num / (2.0 - 2.0 * phi * za * zb)
            }
        }
    }
}

/// `(1/24)(3 sqrt(9 - 10 z + 17 z^2) + 5 z - 1)`.
pub fn semi_infinite(z: f64) -> f64 {
    (3.0 * (9.0 - 10.0 * z + 17.0 * z * z).sqrt() + 5.0 * z - 1.0) / 24.0
}

/// Names of the closed-form families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    HalfAdjacent,
    Spin1Limit,
    SemiInfinite,
    SeparableAdjacent,
}

impl FromStr for ClosedFormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "half_adjacent" => Ok(ClosedFormKind::HalfAdjacent),
            "spin1_limit" => Ok(ClosedFormKind::Spin1Limit),
            "semi_infinite" => Ok(ClosedFormKind::SemiInfinite),
            "separable_adjacent" => Ok(ClosedFormKind::SeparableAdjacent),
            _ => Err(Error::UnknownClosedForm(s.to_string())),
        }
    }
}

impl fmt::Display for ClosedFormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(ClosedForm::KINDS[i])
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClosedForm::HalfAdjacent { la, lb } => write!(f, "half_adjacent({la},{lb})"),
            ClosedForm::Spin1Limit { gap } => write!(f, "spin1_limit({gap})"),
            ClosedForm::SemiInfinite { gap } => write!(f, "semi_infinite({gap})"),
            ClosedForm::SeparableAdjacent { la, lb, c, d } => {
                write!(f, "separable_adjacent({la},{lb},{c},{d})")
            }
        }
    }
}

/// Real Jacobi on the `2n x 2n` embedding `[[X, -Y], [Y, X]]` of `H = X + iY`.
/// Every eigenvalue of `H` appears twice. Returns eigenvalues and the
/// embedding's eigenvectors (columns).
#[cfg(test)]
pub(crate) fn jacobi_embedded(h: &Array2<Complex64>) -> (Vec<f64>, Array2<f64>) {
    let n = h.nrows();
    let m = 2 * n;
    let mut a = Array2::<f64>::zeros((m, m));
    for i in 0..n {
        for j in 0..n {
            let c = h[[i, j]];
            a[[i, j]] = c.re;
            a[[i + n, j + n]] = c.re;
            a[[i, j + n]] = -c.im;
            a[[i + n, j]] = c.im;
        }
    }
    let mut v = Array2::<f64>::eye(m);
    for _ in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[[i, j]] * a[[i, j]])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[[p, q]];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum().max(0.0) * 2.0 - 1.0;
                let t = t / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let (akp, akq) = (a[[k, p]], a[[k, q]]);
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[[p, k]], a[[q, k]]);
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..m {
                    let (vkp, vkq) = (v[[k, p]], v[[k, q]]);
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..m).map(|i| a[[i, i]]).collect(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> Array2<Complex64> {
        let n = rows.len();
        Array2::from_shape_fn((n, n), |(i, j)| c(rows[i][j], 0.0))
    }

    fn assert_spectrum(s: &Spectrum, want: &[f64], tol: f64) {
        let want = Spectrum::from_values(want.to_vec());
        assert!(
            s.padded_distance(&want) < tol,
            "{:?} vs {:?}",
            s.values(),
            want.values()
        );
    }

    fn random_hermitian(n: usize, seed: u64) -> Array2<Complex64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut h = Array2::zeros((n, n));
        for i in 0..n {
            h[[i, i]] = c(rng.gen_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                h[[i, j]] = v;
                h[[j, i]] = v.conj();
            }
        }
        h
    }

    #[test]
    fn identity() {
        let s = hermitian_eigenvalues(&Array2::eye(4)).unwrap();
        assert_spectrum(&s, &[1.0; 4], 1e-15);
    }

    #[test]
    fn rho02_and_its_transpose() {
        let (a, b) = (1.0 / 3.0, 1.0 / 6.0);
        let rho = real(&[
            &[a, 0.0, 0.0, 0.0],
            &[0.0, b, b, 0.0],
            &[0.0, b, b, 0.0],
            &[0.0, 0.0, 0.0, a],
        ]);
        assert_spectrum(&hermitian_eigenvalues(&rho).unwrap(), &[a, a, a, 0.0], 1e-15);
        let pt = real(&[
            &[a, 0.0, 0.0, b],
            &[0.0, b, 0.0, 0.0],
            &[0.0, 0.0, b, 0.0],
            &[b, 0.0, 0.0, a],
        ]);
        let s = hermitian_eigenvalues(&pt).unwrap();
        assert_spectrum(&s, &[0.5, b, b, b], 1e-15);
        assert_eq!(s.negativity(), 0.0);
    }

    #[test]
    fn bell_state_transpose() {
        let pt = real(&[
            &[0.5, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.5, 0.0],
            &[0.0, 0.5, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.5],
        ]);
        let s = hermitian_eigenvalues(&pt).unwrap();
        assert_spectrum(&s, &[-0.5, 0.5, 0.5, 0.5], 1e-15);
        assert!((s.negativity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        let h = Array2::from_shape_vec((2, 2), vec![c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        assert_spectrum(&hermitian_eigenvalues(&h).unwrap(), &[0.0, 2.0], 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let h = Array2::from_shape_vec((2, 2), vec![c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        match hermitian_eigenvalues(&h) {
            Err(Error::NotHermitian { max_asymmetry }) => assert!((max_asymmetry - 0.5).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        let h = Array2::<Complex64>::zeros((2, 3));
        assert_eq!(hermitian_eigenvalues(&h), Err(Error::NotSquare { rows: 2, cols: 3 }));
        let h = Array2::<Complex64>::zeros((MAX_DIM + 1, MAX_DIM + 1));
        assert!(matches!(hermitian_eigenvalues(&h), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn agrees_with_jacobi_and_has_small_residuals() {
        for (n, seed) in [(1, 1), (3, 2), (16, 3), (27, 4), (40, 5)] {
            let h = random_hermitian(n, seed);
            let ours = hermitian_eigenvalues(&h).unwrap();
            let (jac, vecs) = jacobi_embedded(&h);
            let mut paired = jac.clone();
            paired.sort_by(f64::total_cmp);
            let halved: Vec<f64> = paired.iter().step_by(2).copied().collect();
            assert_spectrum(&ours, &halved, 1e-11);

            let norm = h.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            // Residual of our eigenvalues against the matching embedded vectors.
            for (k, &lam) in jac.iter().enumerate() {
                let e = *ours
                    .values()
                    .iter()
                    .min_by(|a, b| (*a - lam).abs().total_cmp(&(*b - lam).abs()))
                    .unwrap();
                let x: Vec<Complex64> = (0..n).map(|i| c(vecs[[i, k]], vecs[[i + n, k]])).collect();
                let xn = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                let res = (0..n)
                    .map(|i| {
                        let hx: Complex64 = (0..n).map(|j| h[[i, j]] * x[j]).sum();
                        (hx - e * x[i]).norm_sqr()
                    })
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-10 * norm * xn, "n={n} residual {res}");
            }
        }
    }

    #[test]
    fn degenerate_and_block_structures() {
        let mut h = Array2::<Complex64>::zeros((12, 12));
        for i in 0..12 {
            h[[i, i]] = c(if i < 6 { 0.25 } else { 0.0 }, 0.0);
        }
        assert_spectrum(
            &hermitian_eigenvalues(&h).unwrap(),
            &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25],
            1e-15,
        );
    }

    #[test]
    fn tiny_couplings_next_to_a_null_block() {
        let n = 30;
        let core = random_hermitian(10, 11);
        let mut h = Array2::<Complex64>::zeros((n, n));
        for i in 0..10 {
            for j in 0..10 {
                h[[i, j]] = core[[i, j]];
            }
        }
        for (i, j, v) in [(3, 12, 2.6e-160), (7, 20, 3.9e-18), (15, 25, 1e-300), (0, 29, 5e-17)] {
            h[[i, j]] = c(v, 0.0);
            h[[j, i]] = c(v, 0.0);
        }
        let ours = hermitian_eigenvalues(&h).unwrap();
        let (jac, _) = jacobi_embedded(&h);
        let mut jac = jac;
        jac.sort_by(f64::total_cmp);
        let halved: Vec<f64> = jac.iter().step_by(2).copied().collect();
        assert_spectrum(&ours, &halved, 1e-13);
        let trace: f64 = (0..n).map(|i| h[[i, i]].re).sum();
        assert!((ours.sum() - trace).abs() < 1e-13);
    }

    #[test]
    fn low_rank_indefinite_matrices() {
        use rand::{Rng, SeedableRng};
        for (n, rank, seed) in [(60, 4, 1u64), (81, 3, 2), (120, 6, 3)] {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Array2::from_shape_fn((n, rank), |_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let signs: Vec<f64> = (0..rank).map(|k| if k % 2 == 0 { 1.0 } else { -0.5 }).collect();
            let h = Array2::from_shape_fn((n, n), |(i, j)| {
                (0..rank)
                    .map(|k| m[[i, k]] * signs[k] * m[[j, k]].conj())
                    .sum::<Complex64>()
                    * 1e-3
            });
            let ours = hermitian_eigenvalues(&h).unwrap();
            let (jac, _) = jacobi_embedded(&h);
            let mut jac = jac;
            jac.sort_by(f64::total_cmp);
            let halved: Vec<f64> = jac.iter().step_by(2).copied().collect();
            assert_spectrum(&ours, &halved, 1e-13);
            let zeros = ours.values().iter().filter(|e| e.abs() < 1e-14).count();
            assert_eq!(zeros, n - rank);
        }
    }

    proptest! {
        #[test]
        fn trace_and_scaling(seed in 0u64..10_000, n in 1usize..24, scale in 0.01f64..100.0) {
            let h = random_hermitian(n, seed);
            let s = hermitian_eigenvalues(&h).unwrap();
            let trace: f64 = (0..n).map(|i| h[[i, i]].re).sum();
            prop_assert!((s.sum() - trace).abs() < 1e-11);
            let scaled = hermitian_eigenvalues(&h.mapv(|x| x * scale)).unwrap();
            for (a, b) in s.values().iter().zip(scaled.values()) {
                prop_assert!((a * scale - b).abs() < 1e-11 * scale.max(1.0) * n as f64);
            }
        }
    }

    #[test]
    fn separated_half_boundary_blocks_are_not_entangled() {
        for la in 1..=4 {
            for lb in 1..=4 {
                for gap in 1..=8 {
                    let g = BlockGeometry::HalfBoundary {
                        lc: 1,
                        la,
                        gap,
                        lb,
                        le: 2,
                    };
                    let r = negativity_of(g, None).unwrap();
                    assert!(r.negativity <= 1e-12, "{g}: {}", r.negativity);
                    assert!((r.spectrum.sum() - 1.0).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn adjacent_half_boundary_value() {
        let g = BlockGeometry::HalfBoundary {
            lc: 1,
            la: 2,
            gap: 0,
            lb: 2,
            le: 1,
        };
        let r = negativity_of(g, None).unwrap();
        assert!((r.negativity - 0.48335219241394).abs() < 1e-12);
        let g = BlockGeometry::HalfBoundary {
            lc: 1,
            la: 1,
            gap: 0,
            lb: 1,
            le: 1,
        };
        assert!((negativity_of(g, None).unwrap().negativity - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn spin1_large_blocks() {
        for beta in 0..4 {
            let w = BoundaryWeights::basis(beta).unwrap();
            let adj = negativity_of(BlockGeometry::Spin1Boundary { la: 20, gap: 0, lb: 20 }, Some(&w)).unwrap();
            assert!((adj.negativity - 1.5).abs() < 1e-10);
            let sep = negativity_of(BlockGeometry::Spin1Boundary { la: 20, gap: 3, lb: 20 }, Some(&w)).unwrap();
            assert!((sep.negativity - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn periodic_separated_blocks() {
        for l1 in 1..=3 {
            for l2 in 1..=3 {
                let g = BlockGeometry::Periodic { l1, la: 2, l2, lb: 3 };
                assert!(negativity_of(g, None).unwrap().negativity <= 1e-12);
            }
        }
        let g = BlockGeometry::Periodic {
            l1: 0,
            la: 2,
            l2: 0,
            lb: 2,
        };
        assert!((negativity_of(g, None).unwrap().negativity - 1.4285714285714297).abs() < 1e-12);
    }

    #[test]
    fn closed_form_values() {
        let semi = |gap| ClosedForm::SemiInfinite { gap }.evaluate();
        assert!((semi(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((semi(40) - 1.0 / 3.0).abs() < 1e-15);
        let sep = |c, d| ClosedForm::SeparableAdjacent { la: 1, lb: 1, c, d }.evaluate();
        assert!((sep(1, 1) - 0.5).abs() < 1e-15);
        assert!((sep(2, 2) - 0.5).abs() < 1e-15);
        assert!((sep(1, 2) - 0.4).abs() < 1e-15);
        assert!((ClosedForm::HalfAdjacent { la: 40, lb: 40 }.evaluate() - 0.5).abs() < 1e-15);
        assert_eq!(ClosedForm::Spin1Limit { gap: 0 }.evaluate(), 1.5);
        assert_eq!(ClosedForm::Spin1Limit { gap: 2 }.evaluate(), 0.5);
    }

    #[test]
    fn closed_form_parsing() {
        assert_eq!(
            ClosedForm::from_parts("separable_adjacent", &[1, 2, 1, 2]).unwrap(),
            ClosedForm::SeparableAdjacent {
                la: 1,
                lb: 2,
                c: 1,
                d: 2
            }
        );
        assert_eq!(
            ClosedForm::from_parts("bogus", &[]),
            Err(Error::UnknownClosedForm("bogus".into()))
        );
        assert!(ClosedForm::from_parts("half_adjacent", &[1]).is_err());
        assert!(ClosedForm::from_parts("separable_adjacent", &[1, 1, 3, 1]).is_err());
        for kind in ClosedForm::KINDS {
            assert_eq!(kind.parse::<ClosedFormKind>().unwrap().to_string(), kind);
        }
    }

    #[test]
    fn separable_boundary_matches_closed_form_when_adjacent() {
        for (c, d) in [(1u8, 1u8), (1, 2), (2, 1), (2, 2)] {
            let w = BoundaryWeights::separable(c, d).unwrap();
            for la in 1..=3 {
                for lb in 1..=3 {
                    let g = BlockGeometry::Spin1Boundary { la, gap: 0, lb };
                    let got = negativity_of(g, Some(&w)).unwrap().negativity;
                    let want = ClosedForm::for_geometry(&g, Some(&w)).unwrap().evaluate();
                    assert!((got - want).abs() < 1e-12, "({c},{d}) {la},{lb}: {got} vs {want}");
                }
            }
            for gap in 1..=6 {
                let g = BlockGeometry::Spin1Boundary { la: 2, gap, lb: 3 };
                assert!(negativity_of(g, Some(&w)).unwrap().negativity <= 1e-12);
            }
        }
    }
}
