//! Membership tests and enumeration for the symmetry groups of a ball map.
//!
//! Every predicate is a polynomial identity checked coefficient by
//! coefficient. Residuals are the largest coefficient modulus of the defect
//! divided by `1 + max |coefficient of f|`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::ball_map::{raw_underlying_form, RationalBallMap};
use crate::error::{Error, Result};
use crate::normal_form::{is_normal_form, sigma_blocks, BlockKind, DEFAULT_NORMAL_FORM_TOL};
use crate::poly::{PolyMap, Polynomial};
use crate::real_form::{DegreeSpec, RealForm};
pub use crate::unitary::UnitaryElement;
use crate::unitary::seeded_rng;

pub const MEMBERSHIP_THRESHOLD: f64 = 1e-9;
pub const SIGN_DIAGONAL_MAX_N: usize = 8;
pub const SIGNED_PERMUTATION_MAX_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupId {
    /// Pairs `(U, V)` with `V f(Uz) = f(z)`.
    A,
    /// Source unitaries preserving the underlying form.
    Gamma,
    /// `f o U = f`.
    G,
    /// Target unitaries `V` for which some source unitary `U` pairs with it in `A`.
    T,
    /// `V o f = f`.
    H,
    /// `g o U = g`.
    D,
    /// `g_2 o U = g_2`.
    Sigma,
    /// `r_(a,b) o U = r_(a,b)`.
    Delta(DegreeSpec, DegreeSpec),
}

impl GroupId {
    fn needs_normal_form(self) -> bool {
        matches!(self, GroupId::A | GroupId::Gamma | GroupId::T)
    }

    fn criterion(self) -> String {
        match self {
            GroupId::A | GroupId::T => "V p(Uz) g(z) - p(z) g(Uz) = 0".into(),
            GroupId::Gamma => "|g(Uz)|^2 - ||p(Uz)||^2 = |g(z)|^2 - ||p(z)||^2".into(),
            GroupId::G => "p(Uz) g(z) - p(z) g(Uz) = 0".into(),
            GroupId::H => "V p - p = 0".into(),
            GroupId::D => "g(Uz) - g(z) = 0".into(),
            GroupId::Sigma => "g_2(Uz) - g_2(z) = 0".into(),
            GroupId::Delta(a, b) => format!("r_({a},{b})(Uz) = r_({a},{b})(z)"),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::A => write!(f, "A"),
            GroupId::Gamma => write!(f, "Gamma"),
            GroupId::G => write!(f, "G"),
            GroupId::T => write!(f, "T"),
            GroupId::H => write!(f, "H"),
            GroupId::D => write!(f, "D"),
            GroupId::Sigma => write!(f, "Sigma"),
            GroupId::Delta(a, b) => write!(f, "Delta({a},{b})"),
        }
    }
}

impl std::str::FromStr for GroupId {
    type Err = Error;

    /// Accepts `a`, `gamma`, `g`, `t`, `h`, `d`, `sigma` and `delta(a,b)` with
    /// `*` as a wildcard degree, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let id = match lower.as_str() {
            "a" => GroupId::A,
            "gamma" => GroupId::Gamma,
            "g" => GroupId::G,
            "t" => GroupId::T,
            "h" => GroupId::H,
            "d" => GroupId::D,
            "sigma" => GroupId::Sigma,
            other => {
                let inner = other
                    .strip_prefix("delta(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Precondition(format!("unknown group '{s}'")))?;
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(Error::Precondition(format!("delta needs two degrees, got '{s}'")));
                }
                let parse = |p: &str| -> Result<DegreeSpec> {
                    if p == "*" {
                        Ok(DegreeSpec::Any)
                    } else {
                        p.parse::<usize>()
                            .map(DegreeSpec::Exact)
                            .map_err(|_| Error::Precondition(format!("bad degree '{p}' in '{s}'")))
                    }
                };
                GroupId::Delta(parse(parts[0])?, parse(parts[1])?)
            }
        };
        Ok(id)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupVerdict {
    pub member: bool,
    pub residual: f64,
    pub threshold: f64,
    pub criterion: String,
}

fn scale(f: &RationalBallMap) -> f64 {
    1.0 + f.max_coeff_modulus()
}

fn check_dim(u: &UnitaryElement, expected: usize) -> Result<()> {
    if u.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: u.dim() });
    }
    Ok(())
}

fn max_poly(ps: &[Polynomial]) -> f64 {
    ps.iter().fold(0.0, |a, p| a.max(p.max_coeff_modulus()))
}

fn form_defect(r: &RealForm, u: &UnitaryElement, part: Option<(DegreeSpec, DegreeSpec)>) -> Result<f64> {
    let diff = r.compose_linear(u.matrix())?.sub(r);
    Ok(match part {
        Some((a, b)) => diff.bidegree_part(a, b).max_abs(),
        None => diff.max_abs(),
    })
}

/// `V p(Uz) g(z) - p(z) g(Uz)`, with `V = I` when absent.
fn intertwining_defect(f: &RationalBallMap, u: &UnitaryElement, v: Option<&UnitaryElement>) -> Result<f64> {
    let g = f.denominator();
    let gu = g.compose_linear(u.matrix())?;
    let mut pu = f.numerator().compose_linear(u.matrix())?;
    if let Some(v) = v {
        pu = pu.left_multiply(v.matrix())?;
    }
    let defects: Vec<Polynomial> = pu
        .components()
        .iter()
        .zip(f.numerator().components())
        .map(|(a, p)| &(a * g) - &(p * &gu))
        .collect();
    Ok(max_poly(&defects))
}

/// Raw defect of the identity defining `id`, before normalization.
fn raw_defect(f: &RationalBallMap, id: GroupId, u: &UnitaryElement, v: Option<&UnitaryElement>) -> Result<f64> {
    match id {
        GroupId::A | GroupId::T => {
            let v = v.ok_or(Error::MissingTarget)?;
            intertwining_defect(f, u, Some(v))
        }
        GroupId::G => intertwining_defect(f, u, None),
        GroupId::H => {
            let v = v.unwrap_or(u);
            let vp = f.numerator().left_multiply(v.matrix())?;
            let d: Vec<Polynomial> = vp.components().iter().zip(f.numerator().components()).map(|(a, b)| a - b).collect();
            Ok(max_poly(&d))
        }
        GroupId::D => {
            let g = f.denominator();
            Ok((&g.compose_linear(u.matrix())? - g).max_coeff_modulus())
        }
        GroupId::Sigma => {
            let g2 = f.denominator().homogeneous_part(2);
            Ok((&g2.compose_linear(u.matrix())? - &g2).max_coeff_modulus())
        }
        GroupId::Gamma => form_defect(&raw_underlying_form(f)?, u, None),
        GroupId::Delta(a, b) => form_defect(&raw_underlying_form(f)?, u, Some((a, b))),
    }
}

fn check_inputs(f: &RationalBallMap, id: GroupId, u: &UnitaryElement, v: Option<&UnitaryElement>) -> Result<()> {
    match id {
        GroupId::H => match v {
            Some(v) => check_dim(v, f.target_dim())?,
            None => check_dim(u, f.target_dim())?,
        },
        _ => check_dim(u, f.n())?,
    }
    if matches!(id, GroupId::A | GroupId::T) {
        check_dim(v.ok_or(Error::MissingTarget)?, f.target_dim())?;
    }
    if id.needs_normal_form() {
        if f.is_linear() {
            return Err(Error::LinearMap);
        }
        let report = is_normal_form(f, DEFAULT_NORMAL_FORM_TOL);
        if !report.is_normal {
            return Err(Error::NotNormalForm(report.failures.join("; ")));
        }
    }
    Ok(())
}

/// Membership of `U` (or of the pair `(U, V)`) in the group `id`.
///
/// For `H` the tested target unitary is `V` if given, otherwise `U`. For `T`
/// the source unitary `U` serves as the witness.
pub fn membership(f: &RationalBallMap, id: GroupId, u: &UnitaryElement, v: Option<&UnitaryElement>) -> Result<GroupVerdict> {
    membership_with_threshold(f, id, u, v, MEMBERSHIP_THRESHOLD)
}

pub fn membership_with_threshold(
    f: &RationalBallMap,
    id: GroupId,
    u: &UnitaryElement,
    v: Option<&UnitaryElement>,
    threshold: f64,
) -> Result<GroupVerdict> {
    check_inputs(f, id, u, v)?;
    let residual = raw_defect(f, id, u, v)? / scale(f);
    Ok(GroupVerdict { member: residual <= threshold, residual, threshold, criterion: id.criterion() })
}

/// First candidate `U` with `(U, V)` in `A`.
pub fn t_group_search(f: &RationalBallMap, v: &UnitaryElement, candidates: &[UnitaryElement]) -> Result<Option<UnitaryElement>> {
    for u in candidates {
        if membership(f, GroupId::A, u, Some(v))?.member {
            return Ok(Some(u.clone()));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaGroupBlock {
    pub kind: BlockKind,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaGroupStructure {
    pub blocks: Vec<SigmaGroupBlock>,
}

impl fmt::Display for SigmaGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| match b.kind {
                BlockKind::Unitary => format!("U({})", b.size),
                BlockKind::Orthogonal => format!("O({})", b.size),
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Block structure of the unitaries fixing `sum sigma_j z_j^2`.
pub fn sigma_group_structure(sigma: &[f64], tol: f64) -> SigmaGroupStructure {
    SigmaGroupStructure {
        blocks: sigma_blocks(sigma, tol).into_iter().map(|b| SigmaGroupBlock { kind: b.kind, size: b.indices.len() }).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CandidateFamily {
    /// All `diag(+-1)`.
    SignDiagonal,
    /// All signed permutation matrices.
    SignedPermutation,
    /// Random points of the diagonal torus.
    DiagonalTorus { samples: usize, seed: u64 },
    Explicit(Vec<UnitaryElement>),
}

impl CandidateFamily {
    pub fn is_group(&self) -> bool {
        matches!(self, CandidateFamily::SignDiagonal | CandidateFamily::SignedPermutation)
    }

    pub fn generate(&self, n: usize) -> Result<Vec<UnitaryElement>> {
        match self {
            CandidateFamily::SignDiagonal => {
                if n > SIGN_DIAGONAL_MAX_N {
                    return Err(Error::BudgetExceeded { family: "sign_diagonal", limit: SIGN_DIAGONAL_MAX_N, n });
                }
                Ok((0..1usize << n).map(|mask| sign_diagonal(n, mask)).collect())
            }
            CandidateFamily::SignedPermutation => {
                if n > SIGNED_PERMUTATION_MAX_N {
                    return Err(Error::BudgetExceeded {
                        family: "signed_permutation",
                        limit: SIGNED_PERMUTATION_MAX_N,
                        n,
                    });
                }
                let mut out = Vec::new();
                for perm in permutations(n) {
                    for mask in 0..1usize << n {
                        let signs: Vec<f64> = (0..n).map(|j| if mask >> j & 1 == 1 { -1.0 } else { 1.0 }).collect();
                        out.push(UnitaryElement::signed_permutation(&perm, &signs)?);
                    }
                }
                Ok(out)
            }
            CandidateFamily::DiagonalTorus { samples, seed } => {
                let mut rng = seeded_rng(*seed);
                Ok((0..*samples).map(|_| UnitaryElement::random_diagonal(n, &mut rng)).collect())
            }
            CandidateFamily::Explicit(list) => {
                for u in list {
                    check_dim(u, n)?;
                }
                Ok(list.clone())
            }
        }
    }
}

fn sign_diagonal(n: usize, mask: usize) -> UnitaryElement {
    let angles: Vec<f64> = (0..n).map(|j| if mask >> j & 1 == 1 { std::f64::consts::PI } else { 0.0 }).collect();
    let mut u = UnitaryElement::torus(&angles);
    // exact signs rather than e^{i pi}
    let entries: Vec<crate::poly::Complex> =
        (0..n).map(|j| crate::poly::Complex::new(if mask >> j & 1 == 1 { -1.0 } else { 1.0 }, 0.0)).collect();
    if let Ok(exact) = UnitaryElement::diagonal(&entries) {
        u = exact;
    }
    u
}

/// Permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub members: Vec<UnitaryElement>,
    /// Closure under products and inverses; checked only for group-shaped
    /// families.
    pub closed: Option<bool>,
}

fn contains(set: &[UnitaryElement], u: &UnitaryElement) -> bool {
    set.iter().any(|m| m.distance(u) <= 1e-10)
}

pub fn is_closed(set: &[UnitaryElement]) -> bool {
    set.iter().all(|a| contains(set, &a.inverse()) && set.iter().all(|b| contains(set, &a.compose(b))))
}

/// Filters a candidate family through the membership predicate, keeping
/// the family's order.
pub fn enumerate_members(f: &RationalBallMap, id: GroupId, family: &CandidateFamily) -> Result<Enumeration> {
    enumerate_members_with_target(f, id, family, None)
}

pub fn enumerate_members_with_target(
    f: &RationalBallMap,
    id: GroupId,
    family: &CandidateFamily,
    target: Option<&UnitaryElement>,
) -> Result<Enumeration> {
    let dim = if id == GroupId::H && target.is_none() { f.target_dim() } else { f.n() };
    let candidates = family.generate(dim)?;
    let verdicts: Vec<Result<bool>> =
        candidates.par_iter().map(|u| membership(f, id, u, target).map(|v| v.member)).collect();
    let mut members = Vec::new();
    for (u, verdict) in candidates.into_iter().zip(verdicts) {
        if verdict? {
            members.push(u);
        }
    }
    let closed = family.is_group().then(|| is_closed(&members));
    Ok(Enumeration { members, closed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditViolation {
    pub candidate: usize,
    pub rule: String,
    pub residuals: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRow {
    pub g: bool,
    pub gamma: bool,
    pub d: bool,
    pub sigma: bool,
    pub delta_2_0: bool,
    pub delta_any_0: bool,
    pub delta_all: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainmentReport {
    pub candidates: usize,
    pub rows: Vec<AuditRow>,
    pub violations: Vec<AuditViolation>,
}

/// Checks the chain `G <= Gamma <= D <= Sigma`, `Gamma <= Delta(a,b)` for
/// `0 <= a, b <= deg f`, and the equalities `Delta(2,0) = Sigma`,
/// `Delta(*,0) = D` on each candidate.
pub fn containment_audit(f: &RationalBallMap, family: &CandidateFamily) -> Result<ContainmentReport> {
    let candidates = family.generate(f.n())?;
    let d = f.degree();
    let rows: Vec<Result<(AuditRow, Vec<AuditViolation>)>> = candidates
        .par_iter()
        .enumerate()
        .map(|(index, u)| audit_one(f, u, index, d))
        .collect();
    let mut report = ContainmentReport { candidates: candidates.len(), rows: Vec::new(), violations: Vec::new() };
    for row in rows {
        let (row, violations) = row?;
        report.rows.push(row);
        report.violations.extend(violations);
    }
    Ok(report)
}

fn audit_one(f: &RationalBallMap, u: &UnitaryElement, index: usize, d: usize) -> Result<(AuditRow, Vec<AuditViolation>)> {
    let check = |id: GroupId| membership(f, id, u, None);
    let g = check(GroupId::G)?;
    let gamma = check(GroupId::Gamma)?;
    let dd = check(GroupId::D)?;
    let sigma = check(GroupId::Sigma)?;
    // the Delta predicates share one composed form
    let r = raw_underlying_form(f)?;
    let diff = r.compose_linear(u.matrix())?.sub(&r);
    let s = scale(f);
    let delta = |a: DegreeSpec, b: DegreeSpec| {
        let residual = diff.bidegree_part(a, b).max_abs() / s;
        (residual <= MEMBERSHIP_THRESHOLD, residual)
    };
    let d20 = delta(DegreeSpec::Exact(2), DegreeSpec::Exact(0));
    let dany = delta(DegreeSpec::Any, DegreeSpec::Exact(0));
    let mut violations = Vec::new();
    let mut flag = |rule: &str, residuals: Vec<f64>| {
        violations.push(AuditViolation { candidate: index, rule: rule.to_string(), residuals });
    };
    if g.member && !gamma.member {
        flag("G => Gamma", vec![g.residual, gamma.residual]);
    }
    if gamma.member && !dd.member {
        flag("Gamma => D", vec![gamma.residual, dd.residual]);
    }
    if dd.member && !sigma.member {
        flag("D => Sigma", vec![dd.residual, sigma.residual]);
    }
    if d20.0 != sigma.member {
        flag("Delta(2,0) <=> Sigma", vec![d20.1, sigma.residual]);
    }
    if dany.0 != dd.member {
        flag("Delta(*,0) <=> D", vec![dany.1, dd.residual]);
    }
    let mut delta_all = true;
    for a in 0..=d {
        for b in 0..=d {
            let (member, residual) = delta(DegreeSpec::Exact(a), DegreeSpec::Exact(b));
            delta_all &= member;
            if gamma.member && !member {
                flag(&format!("Gamma => Delta({a},{b})"), vec![gamma.residual, residual]);
            }
        }
    }
    let row = AuditRow {
        g: g.member,
        gamma: gamma.member,
        d: dd.member,
        sigma: sigma.member,
        delta_2_0: d20.0,
        delta_any_0: dany.0,
        delta_all,
    };
    Ok((row, violations))
}

/// Largest coefficient of `p(z) - p(-z)` and `g(z) - g(-z)`.
pub fn oddness_residual(f: &RationalBallMap) -> f64 {
    let odd = |p: &Polynomial| -> f64 {
        p.terms().filter(|(e, _)| e.degree() % 2 == 1).fold(0.0, |a, (_, c)| a.max(2.0 * c.norm()))
    };
    let p: &PolyMap = f.numerator();
    p.components().iter().map(odd).fold(odd(f.denominator()), f64::max)
}
