//! Rational maps `f = p / g` between unit balls, their underlying forms
//! `|g|^2 - ||p||^2`, and the automorphism and tensor calculus on them.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Complex, Multiindex, PolyMap, Polynomial};
use crate::real_form::{form_from_squares, DegreeSpec, RealForm, DIVISION_TOL};
use crate::unitary::{ball_point, inner, norm, seeded_rng, sphere_point, UnitaryElement};

pub const DEFAULT_SPHERE_SAMPLES: usize = 500;
/// Sphere residual threshold, scaled by `1 + max |coefficient|` of the form.
pub const PROPERNESS_TOL: f64 = 1e-9;
/// Random lines used by the sampled tier of [`lowest_terms_check`].
pub const LOWEST_TERMS_LINES: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalBallMap {
    numerator: PolyMap,
    denominator: Polynomial,
}

impl RationalBallMap {
    /// Builds `p / g`, rescaling both so that `g(0) = 1`.
    pub fn new(numerator: PolyMap, denominator: Polynomial) -> Result<Self> {
        if numerator.n() != denominator.n() {
            return Err(Error::DimensionMismatch { expected: numerator.n(), found: denominator.n() });
        }
        let g0 = denominator.constant_term();
        let scale = denominator.max_coeff_modulus().max(numerator.max_coeff_modulus());
        if g0.norm() <= 1e-12 * scale || g0 == Complex::new(0.0, 0.0) {
            return Err(Error::InvalidMap("denominator vanishes at the origin".into()));
        }
        let inv = Complex::new(1.0, 0.0) / g0;
        let denominator = denominator.scale(inv).with_coeff(Multiindex::zero(numerator.n()), Complex::new(1.0, 0.0));
        Ok(RationalBallMap { numerator: numerator.scale(inv), denominator })
    }

    pub fn polynomial(numerator: PolyMap) -> Self {
        let n = numerator.n();
        RationalBallMap { numerator, denominator: Polynomial::one(n) }
    }

    pub fn identity(n: usize) -> Self {
        Self::polynomial(PolyMap::identity(n))
    }

    /// Source dimension.
    pub fn n(&self) -> usize {
        self.numerator.n()
    }

    /// Target dimension.
    pub fn target_dim(&self) -> usize {
        self.numerator.len()
    }

    pub fn numerator(&self) -> &PolyMap {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// `max(deg p, deg g)`.
    pub fn degree(&self) -> usize {
        self.numerator.degree().unwrap_or(0).max(self.denominator.degree().unwrap_or(0))
    }

    pub fn is_linear(&self) -> bool {
        self.degree() <= 1
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.numerator.max_coeff_modulus().max(self.denominator.max_coeff_modulus())
    }

    pub fn evaluate(&self, z: &[Complex]) -> Result<Vec<Complex>> {
        let g = self.denominator.evaluate(z)?;
        Ok(self.numerator.evaluate(z)?.into_iter().map(|p| p / g).collect())
    }

    /// `V p(Uz) / g(Uz)`.
    pub fn compose_unitaries(&self, source: Option<&UnitaryElement>, target: Option<&UnitaryElement>) -> Result<Self> {
        let (mut p, mut g) = (self.numerator.clone(), self.denominator.clone());
        if let Some(u) = source {
            p = p.compose_linear(u.matrix())?;
            g = g.compose_linear(u.matrix())?;
        }
        if let Some(v) = target {
            p = p.left_multiply(v.matrix())?;
        }
        Ok(RationalBallMap { numerator: p, denominator: g })
    }

    pub fn from_parts_unchecked(numerator: PolyMap, denominator: Polynomial) -> Self {
        RationalBallMap { numerator, denominator }
    }
}

/// `|g|^2 - ||p||^2` without normalization.
pub fn raw_underlying_form(f: &RationalBallMap) -> Result<RealForm> {
    let g = PolyMap::new(f.n(), vec![f.denominator.clone()])?;
    let d = f.degree();
    crate::real_form::form_from_squares_with_degree(&g, &f.numerator, d)
}

/// Underlying form normalized so that `r(0,0) = 1`.
pub fn underlying_form(f: &RationalBallMap) -> Result<RealForm> {
    let r = raw_underlying_form(f)?;
    let c = r.constant_term();
    if c <= 0.0 {
        return Err(Error::OriginOutsideBall { value: c });
    }
    Ok(r.scale(1.0 / c))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropernessReport {
    pub max_sphere_residual: f64,
    pub divisibility_residual: f64,
    pub min_interior_value: f64,
    pub threshold: f64,
    pub samples: usize,
    pub verdict: bool,
}

/// Certifies properness: the underlying form is divisible by `1 - ||z||^2`,
/// vanishes at `samples` random sphere points, and is positive at random
/// interior points (so `f` maps into the ball).
pub fn is_proper(f: &RationalBallMap, samples: usize, seed: u64) -> PropernessReport {
    let raw = match raw_underlying_form(f) {
        Ok(r) => r,
        Err(_) => {
            return PropernessReport {
                max_sphere_residual: f64::INFINITY,
                divisibility_residual: f64::INFINITY,
                min_interior_value: f64::NEG_INFINITY,
                threshold: 0.0,
                samples,
                verdict: false,
            }
        }
    };
    let c = raw.constant_term();
    let r = if c > 0.0 { raw.scale(1.0 / c) } else { raw };
    let scale = r.max_abs();
    let threshold = PROPERNESS_TOL * (1.0 + scale);
    let (_, divisibility_residual) = r.divide_by_sphere_with_residual();
    let mut rng = seeded_rng(seed);
    let n = f.n();
    let mut max_sphere_residual: f64 = 0.0;
    for _ in 0..samples {
        let z = sphere_point(n, &mut rng);
        let v = r.evaluate(&z).map(f64::abs).unwrap_or(f64::INFINITY);
        max_sphere_residual = max_sphere_residual.max(v);
    }
    let mut min_interior_value = r.constant_term();
    for _ in 0..samples.clamp(1, 100) {
        let z = ball_point(n, 0.95, &mut rng);
        let v = r.evaluate(&z).unwrap_or(f64::NEG_INFINITY);
        min_interior_value = min_interior_value.min(v);
    }
    let verdict = c > 0.0
        && divisibility_residual <= DIVISION_TOL * scale.max(f64::MIN_POSITIVE)
        && max_sphere_residual <= threshold
        && min_interior_value > 0.0;
    PropernessReport { max_sphere_residual, divisibility_residual, min_interior_value, threshold, samples, verdict }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowestTerms {
    /// Top bidegree of the form is a negative multiple of `||z||^(2d)`, or
    /// the denominator is constant.
    Certified,
    /// No common zero of numerator and denominator on some random line.
    Likely,
    /// Every sampled line carries a common zero.
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowestTermsReport {
    pub verdict: LowestTerms,
    /// Relative defect of `r_(d,d) = c ||z||^(2d)`, and `c`.
    pub top_defect: f64,
    pub top_coefficient: f64,
    pub lines_with_common_zero: usize,
    pub lines: usize,
}

pub fn lowest_terms_check(f: &RationalBallMap, samples: usize, seed: u64) -> LowestTermsReport {
    let d = f.degree();
    let lines = samples.max(1);
    let mut report = LowestTermsReport {
        verdict: LowestTerms::Likely,
        top_defect: f64::INFINITY,
        top_coefficient: 0.0,
        lines_with_common_zero: 0,
        lines,
    };
    if f.denominator.degree().unwrap_or(0) == 0 {
        report.verdict = LowestTerms::Certified;
        return report;
    }
    // In one variable every top form is a multiple of |z|^{2d}, so the
    // shortcut says nothing there.
    if let (true, Ok(r)) = (f.n() >= 2, underlying_form(f)) {
        let top = r.bidegree_part(DegreeSpec::Exact(d), DegreeSpec::Exact(d));
        let first = Multiindex::new({
            let mut e = vec![0; f.n()];
            e[0] = d as u32;
            e
        });
        let c = top.coeff(&first, &first).re;
        let defect = top.sub(&RealForm::norm_power(f.n(), d).scale(c)).max_abs() / r.max_abs().max(f64::MIN_POSITIVE);
        report.top_defect = defect;
        report.top_coefficient = c;
        if defect <= 1e-10 && c < -1e-10 {
            report.verdict = LowestTerms::Certified;
            return report;
        }
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..lines {
        if line_has_common_zero(f, &mut rng) {
            report.lines_with_common_zero += 1;
        }
    }
    if report.lines_with_common_zero == lines {
        report.verdict = LowestTerms::Failed;
    }
    report
}

/// Restricts to `t -> a + t b` and checks whether some root of `g` is also a
/// root of every numerator component.
fn line_has_common_zero<R: Rng + ?Sized>(f: &RationalBallMap, rng: &mut R) -> bool {
    let n = f.n();
    let a = sphere_point(n, rng);
    let b = sphere_point(n, rng);
    let line: Vec<Polynomial> = (0..n)
        .map(|i| {
            Polynomial::from_terms(1, vec![(vec![0], a[i]), (vec![1], b[i])]).expect("univariate")
        })
        .collect();
    let restrict = |p: &Polynomial| -> Vec<Complex> {
        let q = p.substitute(&line).expect("line substitution");
        let deg = q.degree().unwrap_or(0);
        (0..=deg).map(|k| q.coeff_of(&[k as u32])).collect()
    };
    let g = restrict(&f.denominator);
    let roots = univariate_roots(&g);
    let comps: Vec<Vec<Complex>> = f.numerator.components().iter().map(restrict).collect();
    roots.iter().any(|&t| {
        comps.iter().all(|c| {
            let scale: f64 = c.iter().enumerate().map(|(k, x)| x.norm() * t.norm().powi(k as i32)).sum::<f64>().max(1e-300);
            horner(c, t).norm() <= 1e-7 * scale.max(1.0)
        })
    })
}

fn horner(c: &[Complex], t: Complex) -> Complex {
    c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &x| acc * t + x)
}

/// Roots of a univariate polynomial (ascending coefficients) from the
/// companion matrix, polished by Newton steps.
fn univariate_roots(c: &[Complex]) -> Vec<Complex> {
    let mut c = c.to_vec();
    let lead_tol = 1e-12 * c.iter().fold(0.0f64, |a, x| a.max(x.norm()));
    while c.len() > 1 && c.last().unwrap().norm() <= lead_tol {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let mut comp = DMatrix::<Complex>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    let roots: Vec<Complex> = match comp.clone().schur().eigenvalues() {
        Some(ev) => ev.iter().copied().collect(),
        None => return Vec::new(),
    };
    let deriv: Vec<Complex> = (1..=deg).map(|k| c[k] * k as f64).collect();
    roots
        .into_iter()
        .map(|mut t| {
            for _ in 0..5 {
                let dp = horner(&deriv, t);
                if dp.norm() == 0.0 {
                    break;
                }
                t -= horner(&c, t) / dp;
            }
            t
        })
        .collect()
}

/// `U phi_alpha` with `phi_alpha(z) = (alpha - L_alpha z) / (1 - <z, alpha>)`
/// and `L_alpha z = <z, alpha> alpha / (t + 1) + t z`, `t = sqrt(1 - |alpha|^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallAutomorphism {
    unitary: UnitaryElement,
    alpha: Vec<Complex>,
    t: f64,
}

impl BallAutomorphism {
    pub fn new(alpha: Vec<Complex>, unitary: UnitaryElement) -> Result<Self> {
        if alpha.len() != unitary.dim() {
            return Err(Error::DimensionMismatch { expected: unitary.dim(), found: alpha.len() });
        }
        let a = norm(&alpha);
        if a >= 1.0 || !a.is_finite() {
            return Err(Error::OutsideBall { norm: a });
        }
        Ok(BallAutomorphism { unitary, alpha, t: (1.0 - a * a).sqrt() })
    }

    pub fn involution(alpha: Vec<Complex>) -> Result<Self> {
        let n = alpha.len();
        Self::new(alpha, UnitaryElement::identity(n))
    }

    pub fn unitary_only(u: UnitaryElement) -> Self {
        let n = u.dim();
        BallAutomorphism { unitary: u, alpha: vec![Complex::new(0.0, 0.0); n], t: 1.0 }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Complex] {
        &self.alpha
    }

    pub fn unitary(&self) -> &UnitaryElement {
        &self.unitary
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    fn l_alpha(&self, z: &[Complex]) -> Vec<Complex> {
        let za = inner(z, &self.alpha);
        z.iter().zip(&self.alpha).map(|(zi, ai)| za / (self.t + 1.0) * ai + zi * self.t).collect()
    }

    pub fn apply(&self, z: &[Complex]) -> Result<Vec<Complex>> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: z.len() });
        }
        let den = Complex::new(1.0, 0.0) - inner(z, &self.alpha);
        let lz = self.l_alpha(z);
        let w: Vec<Complex> = self.alpha.iter().zip(&lz).map(|(a, l)| (a - l) / den).collect();
        let u = self.unitary.matrix();
        Ok((0..self.dim()).map(|i| (0..self.dim()).map(|j| u[(i, j)] * w[j]).sum()).collect())
    }

    /// Numerator components `U (alpha - L_alpha z)` and denominator
    /// `1 - <z, alpha>` as polynomials.
    pub fn as_rational(&self) -> (Vec<Polynomial>, Polynomial) {
        let n = self.dim();
        let l = self.linear_pairing(n);
        let raw: Vec<Polynomial> = (0..n)
            .map(|i| {
                let a = self.alpha[i];
                let lz = &l.scale(a / (self.t + 1.0)) + &Polynomial::variable(n, i).scale(Complex::new(self.t, 0.0));
                &Polynomial::constant(n, a) - &lz
            })
            .collect();
        let u = self.unitary.matrix();
        let num = (0..n)
            .map(|i| {
                raw.iter()
                    .enumerate()
                    .fold(Polynomial::zero(n), |acc, (j, p)| &acc + &p.scale(u[(i, j)]))
            })
            .collect();
        (num, &Polynomial::one(n) - &l)
    }

    /// `<z, alpha>` as a linear polynomial in `z`.
    fn linear_pairing(&self, n: usize) -> Polynomial {
        (0..n).fold(Polynomial::zero(n), |acc, i| &acc + &Polynomial::variable(n, i).scale(self.alpha[i].conj()))
    }
}

/// `f o phi`, cleared of the `(1 - <z, alpha>)^d` factors introduced by the
/// substitution and renormalized to `g(0) = 1`.
pub fn compose_source_automorphism(f: &RationalBallMap, phi: &BallAutomorphism) -> Result<RationalBallMap> {
    if phi.dim() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), found: phi.dim() });
    }
    let d = f.degree();
    let (num, den) = phi.as_rational();
    let mut p: Vec<Polynomial> = f
        .numerator
        .components()
        .iter()
        .map(|c| c.substitute_homogenized(&num, &den, d))
        .collect::<Result<_>>()?;
    let mut g = f.denominator.substitute_homogenized(&num, &den, d)?;
    let l = &Polynomial::one(f.n()) - &den;
    if !l.is_zero() {
        loop {
            let scale = g.max_coeff_modulus().max(p.iter().fold(0.0, |a, c| a.max(c.max_coeff_modulus())));
            let (gq, grem) = g.divide_one_minus_linear(&l);
            if grem > 1e-10 * scale || g.degree().unwrap_or(0) == 0 && p.iter().all(|c| c.degree().unwrap_or(0) == 0) {
                break;
            }
            let divided: Vec<(Polynomial, f64)> = p.iter().map(|c| c.divide_one_minus_linear(&l)).collect();
            if divided.iter().any(|(_, rem)| *rem > 1e-10 * scale) {
                break;
            }
            g = gq;
            p = divided.into_iter().map(|(q, _)| q).collect();
        }
    }
    let g0 = g.constant_term();
    let scale = g.max_coeff_modulus().max(1e-300);
    if g0.norm() <= 1e-10 * scale {
        return Err(Error::PoleAtOrigin);
    }
    RationalBallMap::new(PolyMap::new(f.n(), p)?, g).map_err(|_| Error::PoleAtOrigin)
}

/// `tau o f` for `tau = V phi_beta` on the target ball: numerator
/// `V (beta g - L_beta p)`, denominator `g - <p, beta>`.
pub fn compose_target_automorphism(f: &RationalBallMap, tau: &BallAutomorphism) -> Result<RationalBallMap> {
    if tau.dim() != f.target_dim() {
        return Err(Error::DimensionMismatch { expected: f.target_dim(), found: tau.dim() });
    }
    let n = f.n();
    let beta = tau.alpha();
    let t = tau.t();
    let p = f.numerator.components();
    let pairing = p
        .iter()
        .zip(beta)
        .fold(Polynomial::zero(n), |acc, (pj, bj)| &acc + &pj.scale(bj.conj()));
    let den = &f.denominator - &pairing;
    let raw: Vec<Polynomial> = p
        .iter()
        .zip(beta)
        .map(|(pj, &bj)| {
            let lp = &pairing.scale(bj / (t + 1.0)) + &pj.scale(Complex::new(t, 0.0));
            &f.denominator.scale(bj) - &lp
        })
        .collect();
    let numerator = PolyMap::new(n, raw)?.left_multiply(tau.unitary().matrix())?;
    let g0 = den.constant_term();
    if g0.norm() <= 1e-12 * den.max_coeff_modulus().max(1e-300) {
        return Err(Error::PoleAtOrigin);
    }
    RationalBallMap::new(numerator, den).map_err(|_| Error::PoleAtOrigin)
}

/// `(sqrt(k!/a!) z^a)_{|a| = k}`, whose squared norm is `||z||^(2k)`.
pub fn sphere_tensor(n: usize, k: usize) -> PolyMap {
    let kf: f64 = (1..=k).map(|i| i as f64).product();
    let comps = Multiindex::all_of_degree(n, k)
        .into_iter()
        .map(|a| {
            let c = (kf / a.factorial()).sqrt();
            Polynomial::monomial(a, Complex::new(c, 0.0))
        })
        .collect();
    PolyMap::new(n, comps).expect("common dimension")
}

/// Replaces each selected component `psi_i` by `(psi_i h_1, ..., psi_i h_m)`.
/// The tensored blocks come first, in the order of `indices`, followed by
/// the untouched components in their original order.
pub fn tensor_components(f: &RationalBallMap, indices: &[usize], h: &PolyMap) -> Result<RationalBallMap> {
    if h.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), found: h.n() });
    }
    let len = f.target_dim();
    let mut seen = vec![false; len];
    for &i in indices {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        if seen[i] {
            return Err(Error::Precondition(format!("component {i} selected twice")));
        }
        seen[i] = true;
    }
    let k = h.degree().unwrap_or(0);
    let form = form_from_squares(h, &PolyMap::empty(h.n()))?;
    let defect = form.sub(&RealForm::norm_power(h.n(), k)).max_abs();
    if defect > 1e-10 || h.is_empty() {
        return Err(Error::NormIdentity { defect });
    }
    let p = f.numerator.components();
    let mut out = Vec::with_capacity(len - indices.len() + indices.len() * h.len());
    for &i in indices {
        for hk in h.components() {
            out.push(&p[i] * hk);
        }
    }
    out.extend(p.iter().enumerate().filter(|(i, _)| !seen[*i]).map(|(_, c)| c.clone()));
    Ok(RationalBallMap { numerator: PolyMap::new(f.n(), out)?, denominator: f.denominator.clone() })
}

// Map JSON: {"v": 1, "n": 2, "N": 7, "numerator": [...], "denominator": {...}}

#[derive(Serialize, Deserialize)]
struct MapWire {
    #[serde(default = "schema_version")]
    v: u32,
    n: usize,
    #[serde(rename = "N")]
    target: usize,
    numerator: Vec<Polynomial>,
    denominator: Polynomial,
}

fn schema_version() -> u32 {
    1
}

impl Serialize for RationalBallMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapWire {
            v: 1,
            n: self.n(),
            target: self.target_dim(),
            numerator: self.numerator.components().to_vec(),
            denominator: self.denominator.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalBallMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = MapWire::deserialize(d)?;
        if w.v != 1 {
            return Err(D::Error::custom(format!("unsupported schema version {}", w.v)));
        }
        if w.numerator.len() != w.target {
            return Err(D::Error::custom(format!("N = {} but {} numerator components", w.target, w.numerator.len())));
        }
        if w.denominator.n() != w.n {
            return Err(D::Error::custom("denominator dimension differs from n"));
        }
        let p = PolyMap::new(w.n, w.numerator).map_err(D::Error::custom)?;
        RationalBallMap::new(p, w.denominator).map_err(D::Error::custom)
    }
}
