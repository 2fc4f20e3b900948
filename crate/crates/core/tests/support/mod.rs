//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the library's linear algebra: the eigensolver is
//! a cyclic Jacobi iteration on the real symmetric embedding of a Hermitian
//! matrix, written directly over `Vec<f64>`.

#![allow(dead_code)]

/// Eigenvalues (ascending) of the Hermitian matrix given as row-major
/// `(re, im)` pairs.
///
/// The Hermitian `A + iB` is embedded as the real symmetric
/// `[[A, -B], [B, A]]`, whose spectrum is that of the original with every
/// eigenvalue doubled. Jacobi sweeps run until the off-diagonal mass is
/// negligible; every second sorted eigenvalue is returned.
pub fn jacobi_hermitian_eigenvalues(m: &[Vec<(f64, f64)>]) -> Vec<f64> {
    let n = m.len();
    let size = 2 * n;
    let mut a = vec![0.0f64; size * size];
    for i in 0..n {
        for j in 0..n {
            let (re, im) = m[i][j];
            a[i * size + j] = re;
            a[(i + n) * size + (j + n)] = re;
            a[i * size + (j + n)] = -im;
            a[(i + n) * size + j] = im;
        }
    }
    // symmetrize against input noise
    for i in 0..size {
        for j in (i + 1)..size {
            let s = 0.5 * (a[i * size + j] + a[j * size + i]);
            a[i * size + j] = s;
            a[j * size + i] = s;
        }
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..100 {
        let off: f64 = (0..size)
            .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * size + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..size {
            for q in (p + 1)..size {
                let apq = a[p * size + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * size + p];
                let aqq = a[q * size + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..size {
                    let akp = a[k * size + p];
                    let akq = a[k * size + q];
                    a[k * size + p] = c * akp - s * akq;
                    a[k * size + q] = s * akp + c * akq;
                }
                for k in 0..size {
                    let apk = a[p * size + k];
                    let aqk = a[q * size + k];
                    a[p * size + k] = c * apk - s * aqk;
                    a[q * size + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..size).map(|i| a[i * size + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig.into_iter().step_by(2).collect()
}

/// Inertia `(positives, negatives)` with the usual relative threshold.
pub fn jacobi_signature(m: &[Vec<(f64, f64)>], rel_tol: f64) -> (usize, usize) {
    let eig = jacobi_hermitian_eigenvalues(m);
    let top = eig.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let tol = rel_tol * top.max(1e-300);
    let pos = eig.iter().filter(|&&x| x > tol).count();
    let neg = eig.iter().filter(|&&x| x < -tol).count();
    (pos, neg)
}

/// `C(n + d, d)` by repeated multiplication.
pub fn binomial(n: usize, k: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc as usize
}

/// Count monomials of exact total degree `k` in `n` variables by brute-force
/// enumeration of exponent vectors.
pub fn count_monomials_of_degree(n: usize, k: usize) -> usize {
    fn rec(vars: usize, remaining: usize) -> usize {
        if vars == 1 {
            return 1;
        }
        (0..=remaining).map(|e| rec(vars - 1, remaining - e)).sum()
    }
    rec(n, k)
}

/// Complex numbers as pairs, kept local so the oracles do not share types
/// with the implementation.
pub fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

pub fn cabs(a: (f64, f64)) -> f64 {
    a.0.hypot(a.1)
}

/// Determinant by Gaussian elimination with partial pivoting over complex
/// pairs.
pub fn cdet(mut m: Vec<Vec<(f64, f64)>>) -> (f64, f64) {
    let n = m.len();
    let mut det = (1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| cabs(m[i][col]).partial_cmp(&cabs(m[j][col])).unwrap())
            .unwrap();
        if cabs(m[pivot][col]) == 0.0 {
            return (0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = (-det.0, -det.1);
        }
        let p = m[col][col];
        det = cmul(det, p);
        let pn = p.0 * p.0 + p.1 * p.1;
        let pinv = (p.0 / pn, -p.1 / pn);
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let factor = cmul(row[col], pinv);
            for (entry, &above) in row.iter_mut().zip(&pivot_row).skip(col) {
                let sub = cmul(factor, above);
                *entry = (entry.0 - sub.0, entry.1 - sub.1);
            }
        }
    }
    det
}

/// Sylvester resultant of two univariate polynomials given by coefficient
/// lists in ascending degree, normalized by the product of coefficient norms
/// raised to the matching powers so the value is scale free.
pub fn normalized_resultant(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let trim = |p: &[(f64, f64)]| {
        let mut v = p.to_vec();
        while v.len() > 1 && cabs(*v.last().unwrap()) < 1e-14 {
            v.pop();
        }
        v
    };
    let a = trim(a);
    let b = trim(b);
    let da = a.len() - 1;
    let db = b.len() - 1;
    if da == 0 || db == 0 {
        return 1.0;
    }
    let size = da + db;
    let mut s = vec![vec![(0.0, 0.0); size]; size];
    for row in 0..db {
        for (k, c) in a.iter().rev().enumerate() {
            s[row][row + k] = *c;
        }
    }
    for row in 0..da {
        for (k, c) in b.iter().rev().enumerate() {
            s[db + row][row + k] = *c;
        }
    }
    let norm = |p: &[(f64, f64)]| p.iter().map(|c| c.0 * c.0 + c.1 * c.1).sum::<f64>().sqrt();
    let r = cabs(cdet(s));
    r / (norm(&a).powi(db as i32) * norm(&b).powi(da as i32))
}

#[test]
fn jacobi_matches_known_spectrum() {
    // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
    let m = vec![vec![(2.0, 0.0), (0.0, 1.0)], vec![(0.0, -1.0), (2.0, 0.0)]];
    let eig = jacobi_hermitian_eigenvalues(&m);
    assert!((eig[0] - 1.0).abs() < 1e-12);
    assert!((eig[1] - 3.0).abs() < 1e-12);
}

#[test]
fn resultant_detects_shared_root() {
    // (t - 1)(t + 2) and (t - 1)(t - 5)
    let a = [(-2.0, 0.0), (1.0, 0.0), (1.0, 0.0)];
    let b = [(5.0, 0.0), (-6.0, 0.0), (1.0, 0.0)];
    assert!(normalized_resultant(&a, &b) < 1e-12);
    let c = [(3.0, 0.0), (1.0, 0.0)];
    assert!(normalized_resultant(&a, &c) > 1e-3);
}

#[test]
fn monomial_counts() {
    assert_eq!(count_monomials_of_degree(2, 2), 3);
    assert_eq!(count_monomials_of_degree(2, 4), 5);
    assert_eq!(count_monomials_of_degree(3, 2), 6);
    assert_eq!(count_monomials_of_degree(3, 4), 15);
    assert_eq!(binomial(6, 4), 15);
}
