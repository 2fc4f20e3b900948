//! Real-valued polynomials `r(z, conj z) = sum c_ab z^a conj(z)^b` stored as
//! Hermitian coefficient matrices over a monomial basis.
//!
//! Row index is the holomorphic multiindex, column index the
//! antiholomorphic one. The basis always lists every monomial of total degree
//! at most `d` in graded-lex order, so index 0 is the constant monomial and
//! degree blocks are contiguous.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Complex, Multiindex, PolyMap, Polynomial};

/// Eigenvalues within this fraction of the spectral radius count as zero.
pub const DEFAULT_EIGEN_REL_TOL: f64 = 1e-9;
/// Relative Hermitian defect tolerated before symmetrization.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative residual accepted by [`RealForm::divide_by_sphere`].
pub const DIVISION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    monomials: Vec<Multiindex>,
    index: HashMap<Multiindex, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Self {
        let monomials: Vec<Multiindex> = (0..=d).flat_map(|k| Multiindex::all_of_degree(n, k)).collect();
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialBasis { n, d, monomials, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Multiindex] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> &Multiindex {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Multiindex) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Indices of all basis monomials whose degree satisfies `keep`.
    pub fn indices_where(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.len()).filter(|&i| keep(self.monomials[i].degree())).collect()
    }

    /// Coefficient vector of `p`; errors if `p` has terms beyond the basis.
    pub fn coefficients(&self, p: &Polynomial) -> Result<DVector<Complex>> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n() });
        }
        let mut v = DVector::zeros(self.len());
        for (e, c) in p.terms() {
            let i = self.index_of(e).ok_or_else(|| {
                Error::Precondition(format!("basis degree {} below polynomial degree {}", self.d, e.degree()))
            })?;
            v[i] = *c;
        }
        Ok(v)
    }

    pub fn polynomial(&self, v: &DVector<Complex>) -> Polynomial {
        let mut p = Polynomial::zero(self.n);
        for (i, c) in v.iter().enumerate() {
            if *c != Complex::new(0.0, 0.0) {
                p = &p + &Polynomial::monomial(self.monomials[i].clone(), *c);
            }
        }
        p
    }

    /// `[z^alpha]` at a point.
    fn monomial_values(&self, z: &[Complex]) -> DVector<Complex> {
        DVector::from_iterator(self.len(), self.monomials.iter().map(|m| m.eval(z)))
    }

    /// `[d^mu z^alpha]` at a point.
    fn derivative_values(&self, z: &[Complex], mu: &Multiindex) -> DVector<Complex> {
        DVector::from_iterator(
            self.len(),
            self.monomials.iter().map(|m| match m.checked_sub(mu) {
                None => Complex::new(0.0, 0.0),
                Some(rest) => {
                    let falling: f64 = m
                        .exponents()
                        .iter()
                        .zip(mu.exponents())
                        .map(|(&a, &k)| ((a - k + 1)..=a).map(f64::from).product::<f64>())
                        .product();
                    rest.eval(z) * falling
                }
            }),
        )
    }
}

/// Degree selector for one side of a bidegree; `Any` is the `*` wildcard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegreeSpec {
    Exact(usize),
    Any,
}

impl std::fmt::Display for DegreeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegreeSpec::Exact(k) => write!(f, "{k}"),
            DegreeSpec::Any => write!(f, "*"),
        }
    }
}

impl DegreeSpec {
    fn admits(self, k: usize) -> bool {
        match self {
            DegreeSpec::Exact(a) => a == k,
            DegreeSpec::Any => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct HolomorphicDecomposition {
    pub positive: PolyMap,
    pub negative: PolyMap,
    pub signature: Signature,
    /// `||M - M*||` relative to `||M||` before symmetrization.
    pub hermitian_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsdReport {
    pub signature: Signature,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Smallest eigenvalue once the constant row and column are removed.
    pub nonconstant_min_eigenvalue: f64,
    /// Entries pairing the constant monomial with anything are all zero, so a
    /// decomposition can have `P(0) = 0`.
    pub pure_terms_vanish: bool,
    pub threshold: f64,
}

impl PsdReport {
    pub fn is_psd(&self) -> bool {
        self.signature.negatives == 0
    }

    /// Positive definite on the non-constant block.
    pub fn is_nonconstant_definite(&self) -> bool {
        self.nonconstant_min_eigenvalue > self.threshold
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealForm {
    basis: MonomialBasis,
    matrix: DMatrix<Complex>,
}

impl RealForm {
    pub fn zero(n: usize, d: usize) -> Self {
        let basis = MonomialBasis::new(n, d);
        let m = basis.len();
        RealForm { basis, matrix: DMatrix::zeros(m, m) }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut r = Self::zero(n, 0);
        r.matrix[(0, 0)] = Complex::new(c, 0.0);
        r
    }

    /// Wraps a matrix; rejects a Hermitian defect above [`HERMITIAN_TOL`].
    pub fn from_matrix(basis: MonomialBasis, matrix: DMatrix<Complex>) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: matrix.nrows() });
        }
        let r = RealForm { basis, matrix };
        let defect = r.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NonHermitian { defect });
        }
        Ok(r)
    }

    /// `||z||^(2k) = sum_{|a| = k} (k!/a!) |z^a|^2`.
    pub fn norm_power(n: usize, k: usize) -> Self {
        let mut r = Self::zero(n, k);
        let kf: f64 = (1..=k).map(|i| i as f64).product();
        for a in Multiindex::all_of_degree(n, k) {
            let i = r.basis.index_of(&a).unwrap();
            r.matrix[(i, i)] = Complex::new(kf / a.factorial(), 0.0);
        }
        r
    }

    /// `1 - ||z||^2`.
    pub fn sphere(n: usize) -> Self {
        Self::constant(n, 1.0).sub(&Self::norm_power(n, 1))
    }

    /// `|h|^2`.
    pub fn hermitian_square(h: &Polynomial) -> Self {
        let d = h.degree().unwrap_or(0);
        let basis = MonomialBasis::new(h.n(), d);
        let v = basis.coefficients(h).expect("basis covers polynomial");
        let matrix = &v * v.adjoint();
        RealForm { basis, matrix }
    }

    /// `h + conj(h)`.
    pub fn twice_real_part(h: &Polynomial) -> Self {
        let d = h.degree().unwrap_or(0);
        let basis = MonomialBasis::new(h.n(), d);
        let v = basis.coefficients(h).expect("basis covers polynomial");
        let mut matrix = DMatrix::<Complex>::zeros(basis.len(), basis.len());
        for i in 0..basis.len() {
            matrix[(i, 0)] += v[i];
            matrix[(0, i)] += v[i].conj();
        }
        RealForm { basis, matrix }
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    /// Degree of the basis (not necessarily attained).
    pub fn degree(&self) -> usize {
        self.basis.d
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex> {
        &self.matrix
    }

    /// `c_ab`, zero when either side is outside the basis.
    pub fn coeff(&self, a: &Multiindex, b: &Multiindex) -> Complex {
        match (self.basis.index_of(a), self.basis.index_of(b)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => Complex::new(0.0, 0.0),
        }
    }

    pub fn constant_term(&self) -> f64 {
        self.matrix[(0, 0)].re
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |acc, c| acc.max(c.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.frobenius_norm();
        if scale == 0.0 {
            return 0.0;
        }
        let diff = &self.matrix - self.matrix.adjoint();
        diff.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() / scale
    }

    fn symmetrized(&self) -> DMatrix<Complex> {
        (&self.matrix + self.matrix.adjoint()).scale(0.5)
    }

    /// Same form on a basis of degree `d >= self.degree()`.
    pub fn embed(&self, d: usize) -> RealForm {
        assert!(d >= self.basis.d, "embedding cannot truncate");
        if d == self.basis.d {
            return self.clone();
        }
        let mut out = RealForm::zero(self.n(), d);
        let m = self.basis.len();
        // graded order makes the small basis a prefix of the large one
        out.matrix.view_mut((0, 0), (m, m)).copy_from(&self.matrix);
        out
    }

    /// Smallest basis degree that still holds every entry above `abs_tol`.
    pub fn trimmed(&self, abs_tol: f64) -> RealForm {
        let mut top = 0;
        for i in 0..self.basis.len() {
            for j in 0..self.basis.len() {
                if self.matrix[(i, j)].norm() > abs_tol {
                    top = top.max(self.basis.monomials[i].degree()).max(self.basis.monomials[j].degree());
                }
            }
        }
        let keep = MonomialBasis::new(self.n(), top);
        let m = keep.len();
        RealForm { basis: keep, matrix: self.matrix.view((0, 0), (m, m)).into_owned() }
    }

    fn aligned(&self, other: &RealForm) -> (RealForm, RealForm) {
        assert_eq!(self.n(), other.n(), "real form dimension mismatch");
        let d = self.degree().max(other.degree());
        (self.embed(d), other.embed(d))
    }

    pub fn add(&self, other: &RealForm) -> RealForm {
        let (a, b) = self.aligned(other);
        RealForm { matrix: a.matrix + b.matrix, basis: a.basis }
    }

    pub fn sub(&self, other: &RealForm) -> RealForm {
        let (a, b) = self.aligned(other);
        RealForm { matrix: a.matrix - b.matrix, basis: a.basis }
    }

    pub fn scale(&self, c: f64) -> RealForm {
        RealForm { basis: self.basis.clone(), matrix: self.matrix.scale(c) }
    }

    /// Product of real forms; the basis degree is the sum of the degrees.
    pub fn mul(&self, other: &RealForm) -> RealForm {
        assert_eq!(self.n(), other.n(), "real form dimension mismatch");
        let mut out = RealForm::zero(self.n(), self.degree() + other.degree());
        let nz = |r: &RealForm| {
            let mut v = Vec::new();
            for i in 0..r.basis.len() {
                for j in 0..r.basis.len() {
                    let c = r.matrix[(i, j)];
                    if c != Complex::new(0.0, 0.0) {
                        v.push((i, j, c));
                    }
                }
            }
            v
        };
        let left = nz(self);
        let right = nz(other);
        for &(i, j, c) in &left {
            let (a, b) = (&self.basis.monomials[i], &self.basis.monomials[j]);
            for &(k, l, e) in &right {
                let row = a.add(&other.basis.monomials[k]);
                let col = b.add(&other.basis.monomials[l]);
                let (r, s) = (out.basis.index_of(&row).unwrap(), out.basis.index_of(&col).unwrap());
                out.matrix[(r, s)] += c * e;
            }
        }
        out
    }

    /// Keeps entries `(a, b)` with `|a|` admitted by `hol` and `|b|` by `anti`.
    pub fn bidegree_part(&self, hol: DegreeSpec, anti: DegreeSpec) -> RealForm {
        let mut out = self.clone();
        for i in 0..self.basis.len() {
            for j in 0..self.basis.len() {
                if !(hol.admits(self.basis.monomials[i].degree()) && anti.admits(self.basis.monomials[j].degree())) {
                    out.matrix[(i, j)] = Complex::new(0.0, 0.0);
                }
            }
        }
        out
    }

    /// `r(Mz, conj(Mz))`: the coefficient matrix becomes `T^T C conj(T)`,
    /// where row `a` of `T` holds the expansion of `(Mz)^a`.
    pub fn compose_linear(&self, m: &DMatrix<Complex>) -> Result<RealForm> {
        let size = self.basis.len();
        let mut t = DMatrix::<Complex>::zeros(size, size);
        for (i, a) in self.basis.monomials.iter().enumerate() {
            let expanded = Polynomial::monomial(a.clone(), Complex::new(1.0, 0.0)).compose_linear(m)?;
            let row = self.basis.coefficients(&expanded)?;
            t.set_row(i, &row.transpose());
        }
        let matrix = t.transpose() * &self.matrix * t.map(|c| c.conj());
        Ok(RealForm { basis: self.basis.clone(), matrix })
    }

    pub fn evaluate(&self, z: &[Complex]) -> Result<f64> {
        let v = self.eval_complex(z)?;
        let scale = self.max_abs().max(1.0) * (1.0 + z.iter().map(|c| c.norm()).fold(0.0, f64::max)).powi(2 * self.degree() as i32);
        if v.im.abs() > 1e-10 * scale {
            return Err(Error::ImaginaryResidue { residue: v.im.abs() });
        }
        Ok(v.re)
    }

    fn eval_complex(&self, z: &[Complex]) -> Result<Complex> {
        if z.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: z.len() });
        }
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let v = self.basis.monomial_values(z);
        Ok((v.transpose() * &self.matrix * v.map(|c| c.conj()))[(0, 0)])
    }

    /// `d^hol_z d^anti_conj(z) r` at `z`, treating `z` and `conj z` as
    /// independent.
    pub fn evaluate_derivative(&self, z: &[Complex], hol: &Multiindex, anti: &Multiindex) -> Complex {
        let u = self.basis.derivative_values(z, hol);
        let w = self.basis.derivative_values(z, anti).map(|c| c.conj());
        (u.transpose() * &self.matrix * w)[(0, 0)]
    }

    /// Eigendecomposition `r = ||P||^2 - ||G||^2` with linearly independent
    /// components.
    pub fn holomorphic_decomposition(&self, rel_tol: f64) -> Result<HolomorphicDecomposition> {
        let all: Vec<usize> = (0..self.basis.len()).collect();
        self.decompose_on(&all, rel_tol)
    }

    /// Decomposition restricted to the principal block on `indices`. Entries
    /// outside the block are assumed zero; callers restricting to a block
    /// check that first.
    pub fn decompose_on(&self, indices: &[usize], rel_tol: f64) -> Result<HolomorphicDecomposition> {
        let defect = self.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NonHermitian { defect });
        }
        let sym = self.symmetrized();
        let block = DMatrix::from_fn(indices.len(), indices.len(), |i, j| sym[(indices[i], indices[j])]);
        let eig = block.symmetric_eigen();
        let top = eig.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let threshold = rel_tol * top;
        let n = self.n();
        let mut positive = PolyMap::empty(n);
        let mut negative = PolyMap::empty(n);
        let mut order: Vec<usize> = (0..indices.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
        for k in order {
            let lambda = eig.eigenvalues[k];
            if lambda.abs() <= threshold || lambda == 0.0 {
                continue;
            }
            let col = eig.eigenvectors.column(k);
            let mut v = DVector::zeros(self.basis.len());
            for (pos, &idx) in indices.iter().enumerate() {
                v[idx] = col[pos];
            }
            let p = self.basis.polynomial(&v.scale(lambda.abs().sqrt()));
            if lambda > 0.0 {
                positive.push(p)?;
            } else {
                negative.push(p)?;
            }
        }
        let signature = Signature {
            positives: positive.len(),
            negatives: negative.len(),
            rank: positive.len() + negative.len(),
        };
        Ok(HolomorphicDecomposition { positive, negative, signature, hermitian_defect: defect })
    }

    pub fn psd_check(&self, rel_tol: f64) -> PsdReport {
        let all: Vec<usize> = (0..self.basis.len()).collect();
        self.psd_check_on(&all, rel_tol)
    }

    /// Inertia of the principal block on `indices` (the threshold is
    /// relative to that block's spectral radius).
    pub fn psd_check_on(&self, indices: &[usize], rel_tol: f64) -> PsdReport {
        let sym = self.symmetrized();
        let block = DMatrix::from_fn(indices.len(), indices.len(), |i, j| sym[(indices[i], indices[j])]);
        let eig = block.clone().symmetric_eigenvalues();
        let top = eig.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let threshold = rel_tol * top;
        let positives = eig.iter().filter(|&&x| x > threshold).count();
        let negatives = eig.iter().filter(|&&x| x < -threshold).count();
        let const_pos = indices.iter().position(|&i| i == 0);
        let nonconstant_min = match const_pos {
            Some(c) => {
                let keep: Vec<usize> = (0..indices.len()).filter(|&i| i != c).collect();
                if keep.is_empty() {
                    f64::INFINITY
                } else {
                    let sub = DMatrix::from_fn(keep.len(), keep.len(), |i, j| block[(keep[i], keep[j])]);
                    sub.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
                }
            }
            None => eig.iter().copied().fold(f64::INFINITY, f64::min),
        };
        let scale = self.max_abs();
        let pure_terms_vanish = (0..self.basis.len())
            .all(|j| sym[(0, j)].norm() <= HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE));
        PsdReport {
            signature: Signature { positives, negatives, rank: positives + negatives },
            min_eigenvalue: eig.iter().copied().fold(f64::INFINITY, f64::min),
            max_eigenvalue: eig.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            nonconstant_min_eigenvalue: nonconstant_min,
            pure_terms_vanish,
            threshold,
        }
    }

    /// Solves `r = (1 - ||z||^2) q` by forward substitution on
    /// `q_ab = r_ab + sum_i q_(a - e_i)(b - e_i)`, and returns `q` with the
    /// max-entry residual of the identity.
    pub fn divide_by_sphere_with_residual(&self) -> (RealForm, f64) {
        let n = self.n();
        let d = self.degree();
        if d == 0 {
            return (RealForm::zero(n, 0), self.max_abs());
        }
        let full = &self.basis;
        let mut q_full = DMatrix::<Complex>::zeros(full.len(), full.len());
        for i in 0..full.len() {
            for j in 0..full.len() {
                let mut acc = self.matrix[(i, j)];
                for axis in 0..n {
                    let e = Multiindex::unit(n, axis);
                    if let (Some(a), Some(b)) = (full.monomials[i].checked_sub(&e), full.monomials[j].checked_sub(&e)) {
                        acc += q_full[(full.index_of(&a).unwrap(), full.index_of(&b).unwrap())];
                    }
                }
                q_full[(i, j)] = acc;
            }
        }
        let small = MonomialBasis::new(n, d - 1);
        let m = small.len();
        let q = RealForm { basis: small, matrix: q_full.view((0, 0), (m, m)).into_owned() };
        let back = RealForm::sphere(n).mul(&q);
        let residual = self.sub(&back).max_abs();
        (q, residual)
    }

    /// `q` with `r = (1 - ||z||^2) q`, or `None` when `r` does not vanish on
    /// the sphere.
    pub fn divide_by_sphere(&self) -> Option<RealForm> {
        let (q, residual) = self.divide_by_sphere_with_residual();
        (residual <= DIVISION_TOL * self.max_abs().max(f64::MIN_POSITIVE)).then_some(q)
    }
}

/// `||P||^2 - ||G||^2` on the smallest basis covering both maps.
pub fn form_from_squares(p: &PolyMap, g: &PolyMap) -> Result<RealForm> {
    if p.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), found: g.n() });
    }
    let d = p.degree().unwrap_or(0).max(g.degree().unwrap_or(0));
    form_from_squares_with_degree(p, g, d)
}

pub fn form_from_squares_with_degree(p: &PolyMap, g: &PolyMap, d: usize) -> Result<RealForm> {
    if p.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), found: g.n() });
    }
    let basis = MonomialBasis::new(p.n(), d);
    let mut matrix = DMatrix::<Complex>::zeros(basis.len(), basis.len());
    for comp in p.components() {
        let v = basis.coefficients(comp)?;
        matrix += &v * v.adjoint();
    }
    for comp in g.components() {
        let v = basis.coefficients(comp)?;
        matrix -= &v * v.adjoint();
    }
    Ok(RealForm { basis, matrix })
}

// JSON: {"n": 2, "d": 1, "entries": [{"a": [0,0], "b": [0,0], "re": 1, "im": 0}, ...]}
// holding the diagonal and upper triangle only.

#[derive(Serialize, Deserialize)]
struct EntryWire {
    a: Vec<u32>,
    b: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct RealFormWire {
    n: usize,
    d: usize,
    entries: Vec<EntryWire>,
}

impl Serialize for RealForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::new();
        for i in 0..self.basis.len() {
            for j in i..self.basis.len() {
                let c = self.matrix[(i, j)];
                if c != Complex::new(0.0, 0.0) {
                    entries.push(EntryWire {
                        a: self.basis.monomials[i].exponents().to_vec(),
                        b: self.basis.monomials[j].exponents().to_vec(),
                        re: c.re,
                        im: c.im,
                    });
                }
            }
        }
        RealFormWire { n: self.n(), d: self.degree(), entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = RealFormWire::deserialize(d)?;
        let basis = MonomialBasis::new(wire.n, wire.d);
        let mut matrix = DMatrix::<Complex>::zeros(basis.len(), basis.len());
        for e in wire.entries {
            let (i, j) = match (basis.index_of(&Multiindex::new(e.a)), basis.index_of(&Multiindex::new(e.b))) {
                (Some(i), Some(j)) => (i, j),
                _ => return Err(D::Error::custom("entry outside the monomial basis")),
            };
            if i > j {
                return Err(D::Error::custom("entries must lie on or above the diagonal"));
            }
            let c = Complex::new(e.re, e.im);
            matrix[(i, j)] = c;
            matrix[(j, i)] = c.conj();
        }
        RealForm::from_matrix(basis, matrix).map_err(D::Error::custom)
    }
}
