//! Unitary matrices and random sampling helpers.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Complex;

/// Largest entry of `U*U - I` accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryElement {
    matrix: DMatrix<Complex>,
}

impl UnitaryElement {
    pub fn new(matrix: DMatrix<Complex>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let defect = unitary_defect(&matrix);
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(UnitaryElement { matrix })
    }

    pub fn identity(n: usize) -> Self {
        UnitaryElement { matrix: DMatrix::identity(n, n) }
    }

    pub fn negative_identity(n: usize) -> Self {
        UnitaryElement { matrix: -DMatrix::<Complex>::identity(n, n) }
    }

    /// Diagonal matrix with the given unit-modulus entries.
    pub fn diagonal(entries: &[Complex]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(entries)))
    }

    /// `diag(e^{i theta_k})`.
    pub fn torus(angles: &[f64]) -> Self {
        let entries: Vec<Complex> = angles.iter().map(|&t| Complex::from_polar(1.0, t)).collect();
        UnitaryElement { matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&entries)) }
    }

    /// Matrix sending `e_j` to `signs[j] * e_{perm[j]}`.
    pub fn signed_permutation(perm: &[usize], signs: &[f64]) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: signs.len() });
        }
        let mut m = DMatrix::<Complex>::zeros(n, n);
        for (j, (&i, &s)) in perm.iter().zip(signs).enumerate() {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            m[(i, j)] = Complex::new(s, 0.0);
        }
        Self::new(m)
    }

    /// Haar-distributed sample: QR of a complex Gaussian matrix with the
    /// phases of `R`'s diagonal moved into `Q`.
    pub fn random_haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let z = DMatrix::<Complex>::from_fn(n, n, |_, _| {
            Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let qr = z.qr();
        let (q, r) = (qr.q(), qr.r());
        let mut u = q;
        for j in 0..n {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex::new(1.0, 0.0) };
            for i in 0..n {
                u[(i, j)] *= phase;
            }
        }
        UnitaryElement { matrix: u }
    }

    pub fn random_diagonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        Self::torus(&angles)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex> {
        self.matrix
    }

    pub fn compose(&self, other: &UnitaryElement) -> UnitaryElement {
        UnitaryElement { matrix: &self.matrix * &other.matrix }
    }

    pub fn inverse(&self) -> UnitaryElement {
        UnitaryElement { matrix: self.matrix.adjoint() }
    }

    pub fn distance(&self, other: &UnitaryElement) -> f64 {
        (&self.matrix - &other.matrix).iter().fold(0.0, |acc, c| acc.max(c.norm()))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance(&UnitaryElement::identity(self.dim())) <= tol
    }

    pub fn defect(&self) -> f64 {
        unitary_defect(&self.matrix)
    }
}

fn unitary_defect(m: &DMatrix<Complex>) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - DMatrix::<Complex>::identity(n, n))
        .iter()
        .fold(0.0, |acc, c| acc.max(c.norm()))
}

// JSON: {"n": 2, "rows": [[{"re": 1, "im": 0}, ...], ...]} in row-major order.

#[derive(Serialize, Deserialize)]
struct EntryWire {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct UnitaryWire {
    n: usize,
    rows: Vec<Vec<EntryWire>>,
}

impl Serialize for UnitaryElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        UnitaryWire {
            n,
            rows: (0..n)
                .map(|i| (0..n).map(|j| EntryWire { re: self.matrix[(i, j)].re, im: self.matrix[(i, j)].im }).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitaryElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = UnitaryWire::deserialize(d)?;
        if wire.rows.len() != wire.n || wire.rows.iter().any(|r| r.len() != wire.n) {
            return Err(D::Error::custom("unitary must be an n x n row-major matrix"));
        }
        let m = DMatrix::from_fn(wire.n, wire.n, |i, j| Complex::new(wire.rows[i][j].re, wire.rows[i][j].im));
        UnitaryElement::new(m).map_err(D::Error::custom)
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex> {
    (0..n)
        .map(|_| Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
        .collect()
}

/// Uniform point on the unit sphere of `C^n`.
pub fn sphere_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex> {
    loop {
        let v = gaussian_vector(n, rng);
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Point of the ball with radius uniform in `[0, max_radius)`.
pub fn ball_point<R: Rng + ?Sized>(n: usize, max_radius: f64, rng: &mut R) -> Vec<Complex> {
    let radius = rng.random_range(0.0..max_radius);
    sphere_point(n, rng).into_iter().map(|c| c * radius).collect()
}

pub fn norm(z: &[Complex]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `<z, w> = sum z_i conj(w_i)`.
pub fn inner(z: &[Complex], w: &[Complex]) -> Complex {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}
