//! The Lambda function, its critical point, sigma invariants and the
//! normalization pipeline.

mod takagi;

pub use takagi::{takagi, Takagi};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::ball_map::{
    compose_source_automorphism, compose_target_automorphism, lowest_terms_check, underlying_form, BallAutomorphism,
    LowestTerms, RationalBallMap, LOWEST_TERMS_LINES,
};
use crate::error::{Error, Result};
use crate::poly::{Complex, Multiindex, Polynomial};
use crate::real_form::RealForm;
use crate::unitary::UnitaryElement;

/// Gradient tolerance for the critical-point search.
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-12;
/// Newton iterates are kept inside this radius.
pub const CRITICAL_RADIUS_CAP: f64 = 0.999;
/// Linear terms of the normalized denominator above this (relative to the
/// coefficient scale) are an error.
pub const LINEAR_TERM_TOL: f64 = 1e-8;
pub const DEFAULT_NORMAL_FORM_TOL: f64 = 1e-8;
const MAX_NEWTON_ITERATIONS: usize = 200;
const EXTRA_STARTS: usize = 8;

/// `Lambda(z) = r(z, z) / (1 - ||z||^2)^d`.
#[derive(Clone, Debug)]
pub struct LambdaFunction {
    form: RealForm,
    degree: usize,
}

/// Value, real gradient and real Hessian of `log Lambda` in the coordinates
/// `(x_1..x_n, y_1..y_n)`.
#[derive(Clone, Debug)]
pub struct LogLambdaJet {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

impl LambdaFunction {
    pub fn new(f: &RationalBallMap) -> Result<Self> {
        Ok(LambdaFunction { form: underlying_form(f)?, degree: f.degree() })
    }

    pub fn from_form(form: RealForm, degree: usize) -> Self {
        LambdaFunction { form, degree }
    }

    pub fn n(&self) -> usize {
        self.form.n()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn form(&self) -> &RealForm {
        &self.form
    }

    pub fn value(&self, z: &[Complex]) -> Result<f64> {
        let s = check_in_ball(z, self.n())?;
        let r = self.form.evaluate(z)?;
        Ok(r / (1.0 - s).powi(self.degree as i32))
    }

    pub fn log_jet(&self, z: &[Complex]) -> Result<LogLambdaJet> {
        let n = self.n();
        let s = check_in_ball(z, n)?;
        let r = self.form.evaluate(z)?;
        if r <= 0.0 {
            return Err(Error::Precondition(format!("underlying form is {r:.3e} <= 0 at the point")));
        }
        let d = self.degree as f64;
        let big_d = 1.0 - s;
        let zero = Multiindex::zero(n);
        let unit: Vec<Multiindex> = (0..n).map(|j| Multiindex::unit(n, j)).collect();
        let r_bar: Vec<Complex> = unit.iter().map(|e| self.form.evaluate_derivative(z, &zero, e)).collect();
        let r_hol: Vec<Complex> = r_bar.iter().map(|c| c.conj()).collect();

        let mut grad = DVector::<f64>::zeros(2 * n);
        let mut fz = vec![Complex::new(0.0, 0.0); n];
        for j in 0..n {
            fz[j] = r_bar[j] / r + z[j] * (d / big_d);
            grad[j] = 2.0 * fz[j].re;
            grad[n + j] = 2.0 * fz[j].im;
        }
        let mut hess = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for j in 0..n {
            for k in 0..n {
                let r_bb = self.form.evaluate_derivative(z, &zero, &unit[j].add(&unit[k]));
                let r_bh = self.form.evaluate_derivative(z, &unit[k], &unit[j]);
                let a = r_bb / r - r_bar[j] * r_bar[k] / (r * r) + z[j] * z[k] * (d / (big_d * big_d));
                let delta = if j == k { d / big_d } else { 0.0 };
                let b = r_bh / r - r_bar[j] * r_hol[k] / (r * r)
                    + Complex::new(delta, 0.0)
                    + z[j] * z[k].conj() * (d / (big_d * big_d));
                hess[(j, k)] = 2.0 * (a.re + b.re);
                hess[(n + j, n + k)] = 2.0 * (b.re - a.re);
                hess[(j, n + k)] = 2.0 * (a.im - b.im);
            }
        }
        for j in 0..n {
            for k in 0..n {
                hess[(n + k, j)] = hess[(j, n + k)];
            }
        }
        Ok(LogLambdaJet { value: r.ln() - d * big_d.ln(), gradient: grad, hessian: hess })
    }

    pub fn log_gradient(&self, z: &[Complex]) -> Result<Vec<f64>> {
        Ok(self.log_jet(z)?.gradient.iter().copied().collect())
    }
}

fn check_in_ball(z: &[Complex], n: usize) -> Result<f64> {
    if z.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: z.len() });
    }
    if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let s: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    if s >= 1.0 {
        return Err(Error::OutsideBall { norm: s.sqrt() });
    }
    Ok(s)
}

pub fn lambda_eval(f: &RationalBallMap, z: &[Complex]) -> Result<f64> {
    LambdaFunction::new(f)?.value(z)
}

fn to_complex(x: &DVector<f64>, n: usize) -> Vec<Complex> {
    (0..n).map(|j| Complex::new(x[j], x[n + j])).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    #[serde(serialize_with = "serialize_pairs")]
    pub alpha: Vec<Complex>,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub start_index: usize,
}

struct NewtonOutcome {
    point: DVector<f64>,
    gradient_norm: f64,
    iterations: usize,
    converged: bool,
}

fn newton(lambda: &LambdaFunction, start: DVector<f64>, tol: f64) -> Option<NewtonOutcome> {
    let n = lambda.n();
    let mut x = start;
    let mut jet = lambda.log_jet(&to_complex(&x, n)).ok()?;
    let mut gnorm = jet.gradient.norm();
    for it in 0..MAX_NEWTON_ITERATIONS {
        if gnorm <= tol {
            return Some(NewtonOutcome { point: x, gradient_norm: gnorm, iterations: it, converged: true });
        }
        let step = match jet.hessian.clone().cholesky() {
            Some(ch) => -ch.solve(&jet.gradient),
            None => -&jet.gradient,
        };
        let slope = jet.gradient.dot(&step);
        let mut s = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let cand = &x + &step * s;
            if cand.norm() <= CRITICAL_RADIUS_CAP {
                if let Ok(cj) = lambda.log_jet(&to_complex(&cand, n)) {
                    let armijo = cj.value <= jet.value + 1e-4 * s * slope;
                    // near the minimum the value stalls at rounding level
                    let flat = cj.value <= jet.value + 1e-12 * jet.value.abs().max(1.0)
                        && cj.gradient.norm() < gnorm;
                    if cj.value.is_finite() && (armijo || flat) {
                        accepted = Some((cand, cj));
                        break;
                    }
                }
            }
            s *= 0.5;
        }
        match accepted {
            Some((cand, cj)) => {
                x = cand;
                jet = cj;
                gnorm = jet.gradient.norm();
            }
            None => {
                return Some(NewtonOutcome { point: x, gradient_norm: gnorm, iterations: it, converged: false });
            }
        }
    }
    let converged = gnorm <= tol;
    Some(NewtonOutcome { point: x, gradient_norm: gnorm, iterations: MAX_NEWTON_ITERATIONS, converged })
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut out = 0.0;
    while i > 0 {
        f /= base as f64;
        out += f * (i % base) as f64;
        i /= base;
    }
    out
}

fn primes(count: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(count);
    let mut k = 2;
    while out.len() < count {
        if (2..k).take_while(|p| p * p <= k).all(|p| k % p != 0) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// The origin, then Halton points with norm at most 0.5.
fn starts(n: usize) -> Vec<DVector<f64>> {
    let bases = primes(2 * n);
    let mut out = vec![DVector::zeros(2 * n)];
    for i in 1..=EXTRA_STARTS {
        let mut v = DVector::from_fn(2 * n, |k, _| 2.0 * radical_inverse(i, bases[k]) - 1.0);
        let norm = v.norm();
        if norm > 0.0 {
            v *= 0.5 * radical_inverse(i, 2).max(0.1) / norm;
        }
        out.push(v);
    }
    out
}

/// Minimizer of `Lambda` by damped Newton with multistart.
pub fn lambda_critical_point(f: &RationalBallMap, tol: f64) -> Result<CriticalPoint> {
    if f.degree() <= 1 {
        return Err(Error::LinearMap);
    }
    let lambda = LambdaFunction::new(f)?;
    let n = lambda.n();
    let mut best = f64::INFINITY;
    for (index, start) in starts(n).into_iter().enumerate() {
        let Some(out) = newton(&lambda, start, tol) else { continue };
        if out.converged {
            let alpha = to_complex(&out.point, n);
            let norm = out.point.norm();
            if norm >= CRITICAL_RADIUS_CAP - 1e-9 {
                return Err(Error::CriticalPointNearBoundary { norm });
            }
            return Ok(CriticalPoint {
                alpha,
                gradient_norm: out.gradient_norm,
                iterations: out.iterations,
                start_index: index,
            });
        }
        best = best.min(out.gradient_norm);
    }
    Err(Error::NonConvergence { gradient_norm: best })
}

/// Symmetric matrix `A` with `g_2(z) = z^T A z`.
pub fn quadratic_matrix(g: &Polynomial) -> DMatrix<Complex> {
    let n = g.n();
    DMatrix::from_fn(n, n, |i, j| {
        let e = Multiindex::unit(n, i).add(&Multiindex::unit(n, j));
        if i == j {
            g.coeff(&e)
        } else {
            g.coeff(&e) * 0.5
        }
    })
}

fn coefficient_scale(f: &RationalBallMap) -> f64 {
    1.0 + f.max_coeff_modulus()
}

fn linear_residual(f: &RationalBallMap) -> f64 {
    f.denominator().homogeneous_part(1).max_coeff_modulus() / coefficient_scale(f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaInvariants {
    /// Ascending, nonnegative.
    pub values: Vec<f64>,
    /// `W` with `g_2(Wz) = sum sigma_j z_j^2`.
    pub takagi_unitary: UnitaryElement,
}

/// Takagi values of the quadratic part of the denominator. Requires the
/// linear part to vanish.
pub fn sigma_invariants(f: &RationalBallMap) -> Result<SigmaInvariants> {
    let residual = linear_residual(f);
    if residual > LINEAR_TERM_TOL {
        return Err(Error::LinearTerms { residual });
    }
    let a = quadratic_matrix(f.denominator());
    let t = takagi(&a);
    Ok(SigmaInvariants { values: t.sigma, takagi_unitary: UnitaryElement::new(t.unitary)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    /// `sigma = 0`: the block admits any unitary.
    Unitary,
    /// `sigma > 0`: real orthogonal matrices only.
    Orthogonal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaBlock {
    pub value: f64,
    pub indices: Vec<usize>,
    pub kind: BlockKind,
}

/// Groups equal entries of an ascending sigma vector.
pub fn sigma_blocks(sigma: &[f64], tol: f64) -> Vec<SigmaBlock> {
    let mut blocks: Vec<SigmaBlock> = Vec::new();
    for (i, &s) in sigma.iter().enumerate() {
        match blocks.last_mut() {
            Some(b) if (s - b.value).abs() <= tol => b.indices.push(i),
            _ => blocks.push(SigmaBlock {
                value: s,
                indices: vec![i],
                kind: if s.abs() <= tol { BlockKind::Unitary } else { BlockKind::Orthogonal },
            }),
        }
    }
    blocks
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalFormReport {
    pub is_normal: bool,
    pub origin_residual: f64,
    pub linear_residual: f64,
    pub quadratic_offdiagonal: f64,
    pub sigma_imaginary: f64,
    pub sigma: Vec<f64>,
    pub sigma_ordered: bool,
    pub degree: usize,
    pub denominator_degree: usize,
    pub failures: Vec<String>,
}

/// Checks `p(0) = 0`, `g(0) = 1`, no linear terms, a diagonal quadratic
/// part with real nondecreasing nonnegative entries, and `deg g < deg f`.
/// Residuals are relative to `1 + max |coefficient|`.
pub fn is_normal_form(f: &RationalBallMap, tol: f64) -> NormalFormReport {
    let n = f.n();
    let scale = coefficient_scale(f);
    let g = f.denominator();
    let origin = f.numerator().components().iter().fold(0.0f64, |a, p| a.max(p.constant_term().norm())) / scale;
    let linear = linear_residual(f);
    let mut off = 0.0f64;
    let mut imag = 0.0f64;
    let mut sigma = Vec::with_capacity(n);
    for i in 0..n {
        for j in i..n {
            let c = g.coeff(&Multiindex::unit(n, i).add(&Multiindex::unit(n, j)));
            if i == j {
                sigma.push(c.re);
                imag = imag.max(c.im.abs());
            } else {
                off = off.max(c.norm());
            }
        }
    }
    off /= scale;
    imag /= scale;
    let ordered = sigma.first().is_none_or(|s| *s >= -tol * scale) && sigma.windows(2).all(|w| w[1] >= w[0] - tol * scale);
    let degree = f.degree();
    let gdeg = g.degree().unwrap_or(0);
    let mut failures = Vec::new();
    if (g.constant_term() - 1.0).norm() > tol {
        failures.push("denominator is not normalized to g(0) = 1".to_string());
    }
    if origin > tol {
        failures.push(format!("f(0) != 0 (residual {origin:.3e})"));
    }
    if linear > tol {
        failures.push(format!("denominator has linear terms (residual {linear:.3e})"));
    }
    if off > tol || imag > tol {
        failures.push(format!("quadratic part of the denominator is not real diagonal ({off:.3e}, {imag:.3e})"));
    }
    if !ordered {
        failures.push("sigma entries are negative or out of order".to_string());
    }
    if gdeg > 0 && gdeg + 1 > degree {
        failures.push(format!("denominator degree {gdeg} is not below the map degree {degree}"));
    }
    NormalFormReport {
        is_normal: failures.is_empty(),
        origin_residual: origin,
        linear_residual: linear,
        quadratic_offdiagonal: off,
        sigma_imaginary: imag,
        sigma,
        sigma_ordered: ordered,
        degree,
        denominator_degree: gdeg,
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizationCertificate {
    /// Critical point of `Lambda` for the input map.
    #[serde(serialize_with = "serialize_pairs")]
    pub alpha: Vec<Complex>,
    /// Source automorphism, sending `0` to `alpha`.
    pub source_automorphism: AutomorphismRecord,
    /// Target automorphism, sending `f(alpha)` to `0`.
    pub target_automorphism: AutomorphismRecord,
    /// Final source rotation applied after the automorphisms.
    pub takagi_unitary: UnitaryElement,
    pub critical_gradient_norm: f64,
    /// Gradient of `log Lambda` at the origin for the output map.
    pub output_gradient_norm: f64,
    pub linear_residual: f64,
    pub sigma: Vec<f64>,
    pub sigma_blocks: Vec<SigmaBlock>,
    pub lowest_terms: LowestTerms,
    pub retried: bool,
}

/// `U phi_a` in the serialized certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutomorphismRecord {
    #[serde(serialize_with = "serialize_pairs")]
    pub alpha: Vec<Complex>,
    pub unitary: UnitaryElement,
}

impl From<&BallAutomorphism> for AutomorphismRecord {
    fn from(a: &BallAutomorphism) -> Self {
        AutomorphismRecord { alpha: a.alpha().to_vec(), unitary: a.unitary().clone() }
    }
}

fn serialize_pairs<S: serde::Serializer>(v: &[Complex], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub map: RationalBallMap,
    pub certificate: NormalizationCertificate,
}

fn recenter(f: &RationalBallMap, tol: f64) -> Result<(RationalBallMap, CriticalPoint, BallAutomorphism, BallAutomorphism)> {
    let n = f.n();
    let crit = lambda_critical_point(f, tol)?;
    // -phi_{-alpha} sends 0 to alpha and is the identity when alpha = 0
    let minus: Vec<Complex> = crit.alpha.iter().map(|c| -c).collect();
    let source = BallAutomorphism::new(minus, UnitaryElement::negative_identity(n))?;
    let f1 = compose_source_automorphism(f, &source)?;
    let beta: Vec<Complex> = f1.numerator().components().iter().map(|p| p.constant_term()).collect();
    let target = BallAutomorphism::new(beta, UnitaryElement::negative_identity(f.target_dim()))?;
    let f2 = compose_target_automorphism(&f1, &target)?;
    Ok((f2, crit, source, target))
}

/// Moves the critical point of `Lambda` to the origin, sends `f(0)` to `0`
/// and diagonalizes the quadratic part of the denominator.
pub fn normalize(f: &RationalBallMap) -> Result<Normalized> {
    if f.is_linear() {
        return Err(Error::LinearMap);
    }
    let lt = lowest_terms_check(f, LOWEST_TERMS_LINES, 0);
    if lt.verdict == LowestTerms::Failed {
        return Err(Error::NotLowestTerms);
    }
    let (mut centered, mut crit, mut source, mut target) = recenter(f, DEFAULT_CRITICAL_TOL)?;
    let mut residual = linear_residual(&centered);
    let mut retried = false;
    if residual > LINEAR_TERM_TOL {
        retried = true;
        match recenter(f, DEFAULT_CRITICAL_TOL * 1e-2) {
            Ok(again) => {
                (centered, crit, source, target) = again;
                residual = linear_residual(&centered);
            }
            Err(_) => return Err(Error::LinearTerms { residual }),
        }
        if residual > LINEAR_TERM_TOL {
            return Err(Error::LinearTerms { residual });
        }
    }
    let sigma = sigma_invariants(&centered)?;
    let map = centered.compose_unitaries(Some(&sigma.takagi_unitary), None)?;
    let output_gradient_norm = LambdaFunction::new(&map)?
        .log_gradient(&vec![Complex::new(0.0, 0.0); map.n()])?
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let blocks = sigma_blocks(&sigma.values, 1e-9);
    Ok(Normalized {
        map,
        certificate: NormalizationCertificate {
            alpha: crit.alpha.clone(),
            source_automorphism: (&source).into(),
            target_automorphism: (&target).into(),
            takagi_unitary: sigma.takagi_unitary,
            critical_gradient_norm: crit.gradient_norm,
            output_gradient_norm,
            linear_residual: residual,
            sigma: sigma.values,
            sigma_blocks: blocks,
            lowest_terms: lt.verdict,
            retried,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyMap;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    fn whitney() -> RationalBallMap {
        let z1 = Polynomial::variable(2, 0);
        let z2 = Polynomial::variable(2, 1);
        RationalBallMap::polynomial(PolyMap::new(2, vec![z1.clone(), &z1 * &z2, &z2 * &z2]).unwrap())
    }

    fn h_map() -> RationalBallMap {
        let z1 = Polynomial::variable(2, 0);
        let z2 = Polynomial::variable(2, 1);
        let s = c(2f64.sqrt());
        RationalBallMap::polynomial(PolyMap::new(2, vec![&z1 * &z1, (&z1 * &z2).scale(s), &z2 * &z2]).unwrap())
    }

    #[test]
    fn lambda_of_homogeneous_map_is_constant_ratio() {
        let f = h_map();
        // r = 1 - ||z||^4 = (1 - ||z||^2)(1 + ||z||^2)
        let z = [Complex::new(0.3, 0.1), c(-0.2)];
        let s: f64 = z.iter().map(|x| x.norm_sqr()).sum();
        let v = lambda_eval(&f, &z).unwrap();
        assert!((v - (1.0 + s) / (1.0 - s)).abs() < 1e-13);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let phi = BallAutomorphism::involution(vec![Complex::new(0.2, 0.1), c(-0.15)]).unwrap();
        let f = compose_source_automorphism(&whitney(), &phi).unwrap();
        let lambda = LambdaFunction::new(&f).unwrap();
        let x0 = DVector::from_vec(vec![0.1, -0.2, 0.05, 0.15]);
        let jet = lambda.log_jet(&to_complex(&x0, 2)).unwrap();
        let h = 1e-6;
        for k in 0..4 {
            let mut xp = x0.clone();
            let mut xm = x0.clone();
            xp[k] += h;
            xm[k] -= h;
            let jp = lambda.log_jet(&to_complex(&xp, 2)).unwrap();
            let jm = lambda.log_jet(&to_complex(&xm, 2)).unwrap();
            let fd = (jp.value - jm.value) / (2.0 * h);
            assert!((fd - jet.gradient[k]).abs() < 1e-7, "gradient {k}: {fd} vs {}", jet.gradient[k]);
            for l in 0..4 {
                let fd2 = (jp.gradient[l] - jm.gradient[l]) / (2.0 * h);
                assert!((fd2 - jet.hessian[(k, l)]).abs() < 1e-6, "hessian {k}{l}");
            }
        }
    }

    #[test]
    fn critical_point_of_displaced_map() {
        let alpha = vec![Complex::new(0.3, -0.1), c(0.2)];
        let phi = BallAutomorphism::involution(alpha.clone()).unwrap();
        let f = compose_source_automorphism(&whitney(), &phi).unwrap();
        let cp = lambda_critical_point(&f, 1e-12).unwrap();
        // phi is an involution, so the critical point of f o phi is phi(0) = alpha
        for (a, b) in cp.alpha.iter().zip(&alpha) {
            assert!((a - b).norm() < 1e-9, "{:?}", cp.alpha);
        }
    }

    #[test]
    fn linear_maps_have_no_critical_search() {
        assert_eq!(lambda_critical_point(&RationalBallMap::identity(2), 1e-12), Err(Error::LinearMap));
    }

    #[test]
    fn whitney_is_normal() {
        let rep = is_normal_form(&whitney(), 1e-10);
        assert!(rep.is_normal, "{:?}", rep.failures);
        let s = sigma_invariants(&whitney()).unwrap();
        assert_eq!(s.values, vec![0.0, 0.0]);
    }

    #[test]
    fn normalize_recovers_normal_form() {
        let phi = BallAutomorphism::new(
            vec![Complex::new(0.25, 0.1), c(-0.3)],
            UnitaryElement::torus(&[0.3, 1.1]),
        )
        .unwrap();
        let f = compose_source_automorphism(&whitney(), &phi).unwrap();
        let out = normalize(&f).unwrap();
        let rep = is_normal_form(&out.map, 1e-8);
        assert!(rep.is_normal, "{:?}", rep.failures);
        assert!(out.certificate.output_gradient_norm < 1e-8);
        for s in &out.certificate.sigma {
            assert!(s.abs() < 1e-8);
        }
    }

    #[test]
    fn blocks_group_equal_values() {
        let b = sigma_blocks(&[0.0, 0.0, 0.2, 0.2, 0.5], 1e-9);
        assert_eq!(b.len(), 3);
        assert_eq!(b[0].kind, BlockKind::Unitary);
        assert_eq!(b[1].indices, vec![2, 3]);
        assert_eq!(b[2].kind, BlockKind::Orthogonal);
    }
}
