//! Sparse multivariate polynomials over `Complex64`.
//!
//! Terms are keyed by [`Multiindex`] and kept in graded lexicographic order:
//! lower total degree first, and within a degree `z1` outranks `z2`, so the
//! degree-two monomials in two variables come out as `z1^2, z1 z2, z2^2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Coefficients with modulus at or below this fraction of the largest
/// coefficient are dropped after arithmetic.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multiindex(Vec<u32>);

impl Multiindex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Multiindex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Multiindex(vec![0; n])
    }

    pub fn unit(n: usize, axis: usize) -> Self {
        let mut e = vec![0; n];
        e[axis] = 1;
        Multiindex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn add(&self, other: &Multiindex) -> Multiindex {
        Multiindex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when every entry stays nonnegative.
    pub fn checked_sub(&self, other: &Multiindex) -> Option<Multiindex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Multiindex)
    }

    /// `z^alpha` at a point.
    pub fn eval(&self, z: &[Complex]) -> Complex {
        self.0
            .iter()
            .zip(z)
            .fold(Complex::new(1.0, 0.0), |acc, (&e, &zi)| acc * zi.powu(e))
    }

    /// `alpha!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&e| (1..=e).map(f64::from).product::<f64>()).product()
    }

    /// All multiindices of exact total degree `k` in `n` variables, in
    /// graded-lex order.
    pub fn all_of_degree(n: usize, k: usize) -> Vec<Multiindex> {
        fn rec(prefix: &mut Vec<u32>, vars_left: usize, remaining: u32, out: &mut Vec<Multiindex>) {
            if vars_left == 1 {
                prefix.push(remaining);
                out.push(Multiindex(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=remaining).rev() {
                prefix.push(e);
                rec(prefix, vars_left - 1, remaining - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if k == 0 {
                out.push(Multiindex(Vec::new()));
            }
            return out;
        }
        rec(&mut Vec::with_capacity(n), n, k as u32, &mut out);
        out
    }
}

impl Ord for Multiindex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Multiindex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Multiindex, Complex>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex) -> Self {
        Self::monomial(Multiindex::zero(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Complex::new(1.0, 0.0))
    }

    /// The coordinate function `z_axis` (0-based).
    pub fn variable(n: usize, axis: usize) -> Self {
        Self::monomial(Multiindex::unit(n, axis), Complex::new(1.0, 0.0))
    }

    pub fn monomial(e: Multiindex, c: Complex) -> Self {
        let mut p = Polynomial::zero(e.len());
        if c != Complex::new(0.0, 0.0) {
            p.terms.insert(e, c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex)>,
    {
        let mut p = Polynomial::zero(n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: e.len() });
            }
            *p.terms.entry(Multiindex(e)).or_default() += c;
        }
        p.prune(0.0);
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multiindex, &Complex)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Multiindex) -> Complex {
        self.terms.get(e).copied().unwrap_or_default()
    }

    pub fn coeff_of(&self, exponents: &[u32]) -> Complex {
        self.coeff(&Multiindex(exponents.to_vec()))
    }

    pub fn constant_term(&self) -> Complex {
        self.coeff(&Multiindex::zero(self.n))
    }

    /// Same polynomial with the coefficient of `e` replaced.
    pub fn with_coeff(mut self, e: Multiindex, c: Complex) -> Polynomial {
        assert_eq!(e.len(), self.n, "multiindex length");
        if c == Complex::new(0.0, 0.0) {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal total degree of a stored term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Multiindex::degree).max()
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.norm()))
    }

    /// Drops terms with modulus `<= rel_tol * max modulus`, and exact zeros.
    pub fn prune(&mut self, rel_tol: f64) {
        let cut = rel_tol * self.max_coeff_modulus();
        self.terms.retain(|_, c| c.norm() > cut && *c != Complex::new(0.0, 0.0));
    }

    fn pruned(mut self) -> Self {
        self.prune(DEFAULT_ZERO_TOL);
        self
    }

    fn check_dim(&self, other: &Polynomial) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn arith(&self, other: &Polynomial, op: ArithOp) -> Result<Polynomial> {
        match op {
            ArithOp::Add => self.checked_add(other),
            ArithOp::Sub => self.checked_sub(other),
            ArithOp::Mul => self.checked_mul(other),
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_default() += c;
        }
        Ok(out.pruned())
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_default() -= c;
        }
        Ok(out.pruned())
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = Polynomial::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *out.terms.entry(ea.add(eb)).or_default() += ca * cb;
            }
        }
        Ok(out.pruned())
    }

    pub fn scale(&self, c: Complex) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
        .pruned()
    }

    /// Coefficient-wise conjugate, i.e. the polynomial `conj(p(conj z))`.
    pub fn conj(&self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.conj())).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Polynomial {
        let mut acc = Polynomial::one(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, z: &[Complex]) -> Result<Complex> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: z.len() });
        }
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(self.terms.iter().map(|(e, c)| c * e.eval(z)).sum())
    }

    /// Formal `d/dz_axis` (0-based axis).
    pub fn partial_derivative(&self, axis: usize) -> Result<Polynomial> {
        if axis >= self.n {
            return Err(Error::AxisOutOfRange { axis, dimension: self.n });
        }
        let mut out = Polynomial::zero(self.n);
        for (e, c) in &self.terms {
            let k = e.0[axis];
            if k == 0 {
                continue;
            }
            let mut d = e.0.clone();
            d[axis] -= 1;
            *out.terms.entry(Multiindex(d)).or_default() += c * f64::from(k);
        }
        Ok(out.pruned())
    }

    pub fn homogeneous_part(&self, k: usize) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == k)
                .map(|(e, c)| (e.clone(), *c))
                .collect(),
        }
    }

    /// Substitutes `z_i -> subs[i]`.
    pub fn substitute(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        if subs.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: subs.len() });
        }
        let m = subs.first().map_or(0, Polynomial::n);
        if let Some(bad) = subs.iter().find(|s| s.n != m) {
            return Err(Error::DimensionMismatch { expected: m, found: bad.n });
        }
        let mut powers = PowerCache::new(subs);
        let mut out = Polynomial::zero(m);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(m, *c);
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    term = &term * powers.get(i, k as usize);
                }
            }
            for (te, tc) in term.terms {
                *out.terms.entry(te).or_default() += tc;
            }
        }
        Ok(out.pruned())
    }

    /// `sum_beta c_beta num^beta den^(d - |beta|)`: the numerator of
    /// `self(num / den)` after clearing `den^d`.
    pub fn substitute_homogenized(&self, num: &[Polynomial], den: &Polynomial, d: usize) -> Result<Polynomial> {
        if num.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: num.len() });
        }
        if self.degree().unwrap_or(0) > d {
            return Err(Error::Precondition(format!(
                "homogenizing degree {d} below polynomial degree {}",
                self.degree().unwrap_or(0)
            )));
        }
        let m = den.n;
        let mut powers = PowerCache::new(num);
        let mut den_powers = vec![Polynomial::one(m)];
        for k in 1..=d {
            let next = &den_powers[k - 1] * den;
            den_powers.push(next);
        }
        let mut out = Polynomial::zero(m);
        for (e, c) in &self.terms {
            let mut term = den_powers[d - e.degree()].scale(*c);
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    term = &term * powers.get(i, k as usize);
                }
            }
            for (te, tc) in term.terms {
                *out.terms.entry(te).or_default() += tc;
            }
        }
        Ok(out.pruned())
    }

    /// `p(Mz)`.
    pub fn compose_linear(&self, m: &DMatrix<Complex>) -> Result<Polynomial> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: m.nrows().max(m.ncols()) });
        }
        let forms = linear_forms(m);
        self.substitute(&forms)
    }

    /// Divides by `1 - l` with `l` homogeneous linear, returning the quotient
    /// and the coefficient modulus of the remainder.
    pub fn divide_one_minus_linear(&self, l: &Polynomial) -> (Polynomial, f64) {
        let top = match self.degree() {
            Some(t) if t > 0 => t,
            _ => return (Polynomial::zero(self.n), self.max_coeff_modulus()),
        };
        // q_k = p_k + l q_{k-1}, k < top; remainder p_top + l q_{top-1}
        let mut quotient = Polynomial::zero(self.n);
        let mut prev = Polynomial::zero(self.n);
        for k in 0..top {
            let qk = &self.homogeneous_part(k) + &(l * &prev);
            quotient = &quotient + &qk;
            prev = qk;
        }
        let rem = &self.homogeneous_part(top) + &(l * &prev);
        (quotient, rem.max_coeff_modulus())
    }
}

/// Rows of `M` as linear polynomials: `(Mz)_i = sum_j M_ij z_j`.
pub fn linear_forms(m: &DMatrix<Complex>) -> Vec<Polynomial> {
    let n = m.ncols();
    (0..m.nrows())
        .map(|i| {
            let mut p = Polynomial::zero(n);
            for j in 0..n {
                let c = m[(i, j)];
                if c != Complex::new(0.0, 0.0) {
                    p.terms.insert(Multiindex::unit(n, j), c);
                }
            }
            p
        })
        .collect()
}

struct PowerCache<'a> {
    base: &'a [Polynomial],
    powers: Vec<Vec<Polynomial>>,
}

impl<'a> PowerCache<'a> {
    fn new(base: &'a [Polynomial]) -> Self {
        PowerCache {
            base,
            powers: base.iter().map(|b| vec![Polynomial::one(b.n)]).collect(),
        }
    }

    fn get(&mut self, i: usize, k: usize) -> &Polynomial {
        while self.powers[i].len() <= k {
            let next = self.powers[i].last().unwrap() * &self.base[i];
            self.powers[i].push(next);
        }
        &self.powers[i][k]
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> std::ops::$trait<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            /// Panics on dimension mismatch; use the `checked_*` form for
            /// untrusted operands.
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial dimension mismatch")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for (i, &p) in e.0.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*z{}", i + 1)?,
                    _ => write!(f, "*z{}^{}", i + 1, p)?,
                }
            }
        }
        Ok(())
    }
}

/// A tuple of polynomials on a common `C^n`.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyMap {
    n: usize,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(n: usize, components: Vec<Polynomial>) -> Result<Self> {
        if let Some(bad) = components.iter().find(|c| c.n != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.n });
        }
        Ok(PolyMap { n, components })
    }

    pub fn empty(n: usize) -> Self {
        PolyMap { n, components: Vec::new() }
    }

    /// The identity map `z -> z`.
    pub fn identity(n: usize) -> Self {
        PolyMap { n, components: (0..n).map(|i| Polynomial::variable(n, i)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    pub fn degree(&self) -> Option<usize> {
        self.components.iter().filter_map(Polynomial::degree).max()
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.components.iter().fold(0.0, |acc, p| acc.max(p.max_coeff_modulus()))
    }

    pub fn evaluate(&self, z: &[Complex]) -> Result<Vec<Complex>> {
        self.components.iter().map(|p| p.evaluate(z)).collect()
    }

    pub fn compose_linear(&self, m: &DMatrix<Complex>) -> Result<PolyMap> {
        Ok(PolyMap {
            n: self.n,
            components: self.components.iter().map(|p| p.compose_linear(m)).collect::<Result<_>>()?,
        })
    }

    /// `V p` for an `N x N` matrix `V` acting on the components.
    pub fn left_multiply(&self, v: &DMatrix<Complex>) -> Result<PolyMap> {
        if v.ncols() != self.components.len() {
            return Err(Error::DimensionMismatch { expected: self.components.len(), found: v.ncols() });
        }
        let components = (0..v.nrows())
            .map(|i| {
                let mut acc = Polynomial::zero(self.n);
                for (j, p) in self.components.iter().enumerate() {
                    let c = v[(i, j)];
                    if c != Complex::new(0.0, 0.0) {
                        acc = &acc + &p.scale(c);
                    }
                }
                acc
            })
            .collect();
        Ok(PolyMap { n: self.n, components })
    }

    pub fn scale(&self, c: Complex) -> PolyMap {
        PolyMap { n: self.n, components: self.components.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn push(&mut self, p: Polynomial) -> Result<()> {
        if p.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n });
        }
        self.components.push(p);
        Ok(())
    }
}

// JSON wire format: {"n": 2, "terms": [{"e": [1, 0], "re": 1.0, "im": 0.0}]}

#[derive(Serialize, Deserialize)]
struct TermWire {
    e: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolynomialWire {
    n: usize,
    terms: Vec<TermWire>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialWire {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermWire { e: e.0.clone(), re: c.re, im: c.im })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PolynomialWire::deserialize(d)?;
        if wire.terms.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(serde::de::Error::custom("non-finite coefficient"));
        }
        Polynomial::from_terms(wire.n, wire.terms.into_iter().map(|t| (t.e, Complex::new(t.re, t.im))))
            .map_err(serde::de::Error::custom)
    }
}
