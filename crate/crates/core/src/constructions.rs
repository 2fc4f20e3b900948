//! Explicit constructions of proper maps with prescribed denominators or
//! symmetry groups.

use serde::{Deserialize, Serialize};

use crate::ball_map::{
    compose_target_automorphism, is_proper, lowest_terms_check, sphere_tensor, tensor_components, BallAutomorphism,
    LowestTermsReport, PropernessReport, RationalBallMap, DEFAULT_SPHERE_SAMPLES, LOWEST_TERMS_LINES,
};
use crate::error::{Error, Result};
use crate::poly::{Complex, Multiindex, PolyMap, Polynomial};
use crate::real_form::{RealForm, DEFAULT_EIGEN_REL_TOL};
use crate::unitary::UnitaryElement;

pub const MAX_HALVINGS: usize = 60;

/// Real forms `rho_j`, each bihomogeneous of bidegree `(d_j, d_j)` with
/// `d_j >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantPolynomialSpec {
    pub n: usize,
    pub forms: Vec<RealForm>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsdStep {
    pub epsilon: f64,
    pub min_eigenvalue: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionResult {
    pub map: RationalBallMap,
    pub epsilon: f64,
    pub properness: PropernessReport,
    pub lowest_terms: LowestTermsReport,
    pub psd_log: Vec<PsdStep>,
    /// Whether `epsilon / 2` also passes the definiteness test.
    pub half_epsilon_admissible: bool,
}

fn c(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Sum of `|c_a|`, a bound for `|G|` on the closed ball.
fn ball_bound(g: &Polynomial) -> f64 {
    g.terms().map(|(_, c)| c.norm()).sum()
}

/// `sum_{j=1}^d (1/d) ||z||^(2j)`.
fn averaged_norm_powers(n: usize, d: usize) -> RealForm {
    (1..=d).fold(RealForm::zero(n, d), |acc, j| acc.add(&RealForm::norm_power(n, j).scale(1.0 / d as f64)))
}

fn nonconstant(form: &RealForm) -> Vec<usize> {
    form.basis().indices_where(|deg| deg > 0)
}

/// Minimum eigenvalue on the block when the form has no pure terms and is
/// definite there, otherwise the reason it is not.
fn definiteness(form: &RealForm, indices: &[usize]) -> (bool, f64) {
    let rep = form.psd_check_on(indices, DEFAULT_EIGEN_REL_TOL);
    let full = form.psd_check(DEFAULT_EIGEN_REL_TOL);
    let ok = full.pure_terms_vanish && rep.is_nonconstant_definite() && rep.min_eigenvalue > rep.threshold;
    (ok, rep.min_eigenvalue)
}

struct Search {
    epsilon: f64,
    form: RealForm,
    log: Vec<PsdStep>,
    half_ok: bool,
}

/// Halves `epsilon` from 1 until `build(epsilon)` is definite on its
/// non-constant block and `admissible(epsilon)` holds.
fn epsilon_search(
    build: impl Fn(f64) -> RealForm,
    admissible: impl Fn(f64) -> bool,
    block: impl Fn(&RealForm) -> Vec<usize>,
) -> Result<Search> {
    let mut log = Vec::new();
    let mut eps = 1.0;
    for _ in 0..=MAX_HALVINGS {
        let form = build(eps);
        let (ok, min_eig) = definiteness(&form, &block(&form));
        let accepted = ok && admissible(eps);
        log.push(PsdStep { epsilon: eps, min_eigenvalue: min_eig, accepted });
        if accepted {
            let half = build(eps / 2.0);
            let half_ok = definiteness(&half, &block(&half)).0 && admissible(eps / 2.0);
            return Ok(Search { epsilon: eps, form, log, half_ok });
        }
        eps /= 2.0;
    }
    let last = log.last().map(|s| s.min_eigenvalue).unwrap_or(f64::NAN);
    Err(Error::EpsilonExhausted { halvings: MAX_HALVINGS, min_eigenvalue: last })
}

fn finish(map: RationalBallMap, epsilon: f64, psd_log: Vec<PsdStep>, half_ok: bool) -> Result<ConstructionResult> {
    let properness = is_proper(&map, DEFAULT_SPHERE_SAMPLES, 0);
    if !properness.verdict {
        return Err(Error::ConstructionFailed(format!(
            "output is not proper (sphere residual {:.3e}, interior minimum {:.3e})",
            properness.max_sphere_residual, properness.min_interior_value
        )));
    }
    let lowest_terms = lowest_terms_check(&map, LOWEST_TERMS_LINES, 0);
    Ok(ConstructionResult { map, epsilon, properness, lowest_terms, psd_log, half_epsilon_admissible: half_ok })
}

/// `G(eps z)`.
fn dilated(g: &Polynomial, eps: f64) -> Polynomial {
    let terms = g.terms().map(|(e, c)| (e.exponents().to_vec(), c * eps.powi(e.degree() as i32)));
    Polynomial::from_terms(g.n(), terms).expect("same dimension")
}

/// A degree `d` polynomial proper map `P / (1 + eps G)`.
///
/// With `dilate` the denominator is `1 + G(eps z)` instead.
pub fn construct_with_denominator(g: &Polynomial, d: usize, dilate: bool) -> Result<ConstructionResult> {
    if d < 2 {
        return Err(Error::Precondition(format!("degree must be at least 2, got {d}")));
    }
    if g.constant_term().norm() > 0.0 {
        return Err(Error::Precondition("G(0) must vanish".into()));
    }
    if let Some(k) = g.degree() {
        if k + 1 > d {
            return Err(Error::Precondition(format!("deg G = {k} exceeds d - 1 = {}", d - 1)));
        }
    }
    let n = g.n();
    let r_avg = averaged_norm_powers(n, d);
    let scaled = |eps: f64| if dilate { dilated(g, eps) } else { g.scale(c(eps)) };
    // -(r - |1 + eps G|^2) = R + (eps G + conj) ||z||^2 + |eps G|^2
    let build = |eps: f64| {
        let ge = scaled(eps);
        r_avg
            .add(&RealForm::twice_real_part(&ge).mul(&RealForm::norm_power(n, 1)))
            .add(&RealForm::hermitian_square(&ge))
    };
    let admissible = |eps: f64| ball_bound(&scaled(eps)) < 1.0;
    let search = epsilon_search(build, admissible, nonconstant)?;
    let dec = search.form.decompose_on(&nonconstant(&search.form), DEFAULT_EIGEN_REL_TOL)?;
    let den = &Polynomial::one(n) + &scaled(search.epsilon);
    let map = RationalBallMap::new(dec.positive, den)?;
    finish(map, search.epsilon, search.log, search.half_ok)
}

/// An even degree 4 map with denominator `1 + sum sigma_j z_j^2`.
pub fn construct_even_quartic(sigma: &[f64]) -> Result<ConstructionResult> {
    let n = sigma.len();
    if n == 0 {
        return Err(Error::Precondition("sigma must be nonempty".into()));
    }
    if sigma[0] <= 0.0 || sigma.windows(2).any(|w| w[1] <= w[0]) || sigma.iter().any(|s| !s.is_finite()) {
        return Err(Error::Precondition("sigma must satisfy 0 < sigma_1 < ... < sigma_n".into()));
    }
    let r_avg = RealForm::norm_power(n, 2).scale(0.5).add(&RealForm::norm_power(n, 4).scale(0.5));
    let terms = sigma.iter().enumerate().map(|(j, &s)| {
        let mut e = vec![0u32; n];
        e[j] = 2;
        (e, c(s))
    });
    let g = Polynomial::from_terms(n, terms)?;
    // -(r - |1 + G|^2) = R + (G + conj G) ||z||^4 + |G|^2 on the even block
    let form = r_avg
        .add(&RealForm::twice_real_part(&g).mul(&RealForm::norm_power(n, 2)))
        .add(&RealForm::hermitian_square(&g));
    let block = form.basis().indices_where(|deg| deg == 2 || deg == 4);
    let bound = 1.0 / (n as f64).sqrt();
    let (ok, min_eigenvalue) = definiteness(&form, &block);
    if !ok {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue, bound });
    }
    let dec = form.decompose_on(&block, DEFAULT_EIGEN_REL_TOL)?;
    let den = &Polynomial::one(n) + &g;
    let map = RationalBallMap::new(dec.positive, den)?;
    let log = vec![PsdStep { epsilon: 1.0, min_eigenvalue, accepted: true }];
    finish(map, 1.0, log, true)
}

/// Degree `d` with every entry of the form on bidegree `(d, d)`.
fn bihomogeneous_degree(form: &RealForm) -> Result<usize> {
    let basis = form.basis();
    let scale = form.max_abs();
    if scale == 0.0 {
        return Err(Error::Precondition("invariant form is zero".into()));
    }
    let mut degree = None;
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if form.matrix()[(i, j)].norm() <= 1e-14 * scale {
                continue;
            }
            let (a, b) = (basis.get(i).degree(), basis.get(j).degree());
            if a != b || degree.is_some_and(|d| d != a) {
                return Err(Error::Precondition(format!(
                    "invariant form is not bihomogeneous (entry of bidegree ({a},{b}))"
                )));
            }
            degree = Some(a);
        }
    }
    match degree {
        Some(0) | None => Err(Error::Precondition("invariant forms must vanish at the origin".into())),
        Some(d) => Ok(d),
    }
}

impl InvariantPolynomialSpec {
    pub fn new(n: usize, forms: Vec<RealForm>) -> Result<Self> {
        let spec = InvariantPolynomialSpec { n, forms };
        spec.degrees()?;
        Ok(spec)
    }

    /// `d_j` for each form.
    pub fn degrees(&self) -> Result<Vec<usize>> {
        self.forms
            .iter()
            .map(|f| {
                if f.n() != self.n {
                    return Err(Error::DimensionMismatch { expected: self.n, found: f.n() });
                }
                let defect = f.hermitian_defect();
                if defect > crate::real_form::HERMITIAN_TOL {
                    return Err(Error::NonHermitian { defect });
                }
                bihomogeneous_degree(f)
            })
            .collect()
    }

    /// Offsets `k_j = d_1 + ... + d_j`.
    pub fn offsets(&self) -> Result<Vec<usize>> {
        let mut acc = 0;
        Ok(self
            .degrees()?
            .into_iter()
            .map(|d| {
                acc += d;
                acc
            })
            .collect())
    }
}

impl InvariantPolynomialSpec {
    /// Power `m_j` of `||z||^2` multiplying `rho_j`: `1 + k_j`, raised where
    /// needed so that the bidegrees `m_j + d_j` are pairwise distinct.
    pub fn block_powers(&self) -> Result<Vec<usize>> {
        let degrees = self.degrees()?;
        let mut used: Vec<usize> = Vec::new();
        let mut powers = Vec::new();
        for (d, k) in degrees.iter().zip(self.offsets()?) {
            let mut m = 1 + k;
            while used.contains(&(m + d)) {
                m += 1;
            }
            used.push(m + d);
            powers.push(m);
        }
        Ok(powers)
    }
}

/// `rho = sum_j ||z||^(2 m_j) rho_j` with `m_j = 1 + k_j` (see
/// [`InvariantPolynomialSpec::block_powers`]). The blocks occupy distinct
/// bidegrees, so a unitary preserves `rho` if and only if it preserves every
/// `rho_j`.
pub fn combine_invariants(spec: &InvariantPolynomialSpec) -> Result<RealForm> {
    let mut rho = RealForm::zero(spec.n, 0);
    for (form, m) in spec.forms.iter().zip(spec.block_powers()?) {
        rho = rho.add(&RealForm::norm_power(spec.n, m).mul(&form.trimmed(0.0)));
    }
    Ok(rho)
}

/// Bidegrees occupied by each block of the combined form.
pub fn block_bidegrees(spec: &InvariantPolynomialSpec) -> Result<Vec<usize>> {
    Ok(spec.degrees()?.iter().zip(spec.block_powers()?).map(|(d, m)| m + d).collect())
}

/// A polynomial proper map `f` with `f(0) = 0` whose source symmetry group
/// is the common stabilizer of the forms in `spec`.
pub fn construct_invariant_map(spec: &InvariantPolynomialSpec) -> Result<ConstructionResult> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    let rho = combine_invariants(spec)?;
    let rho_degree = block_bidegrees(spec)?.into_iter().max().unwrap_or(0);
    // rho (1 - ||z||^2) reaches bidegree rho_degree + 1
    let d = (rho_degree + 1).max(2);
    let r_avg = averaged_norm_powers(n, d);
    let tail = rho.mul(&RealForm::sphere(n));
    let build = |eps: f64| r_avg.add(&tail.scale(eps));
    let search = epsilon_search(build, |_| true, nonconstant)?;
    let dec = search.form.decompose_on(&nonconstant(&search.form), DEFAULT_EIGEN_REL_TOL)?;
    let map = RationalBallMap::polynomial(dec.positive);
    finish(map, search.epsilon, search.log, search.half_ok)
}

/// Degree 4 map `B_2 -> B_7` in normal form with denominator
/// `1 + sigma_1 z_1^2 + sigma_2 z_2^2`.
pub fn example_map(sigma1: f64, sigma2: f64) -> Result<RationalBallMap> {
    if !(sigma1.is_finite() && sigma2.is_finite()) || sigma1 * sigma1 + sigma2 * sigma2 >= 1.0 {
        return Err(Error::Precondition("sigma_1^2 + sigma_2^2 must be below 1".into()));
    }
    let h = sphere_tensor(2, 2);
    let hmap = RationalBallMap::polynomial(h.clone());
    let alpha = vec![c(-sigma1), c(0.0), c(-sigma2)];
    let phi = BallAutomorphism::new(alpha, UnitaryElement::identity(3))?;
    let psi = compose_target_automorphism(&hmap, &phi)?;
    let f = tensor_components(&psi, &[0, 2], &h)?;
    // the first numerator is exactly 1 - <H, alpha>; pin the constant
    let den = f.denominator().clone().with_coeff(Multiindex::zero(2), c(1.0));
    RationalBallMap::new(PolyMap::new(2, f.numerator().components().to_vec())?, den)
}
