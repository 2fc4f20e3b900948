//! Takagi factorization `A = conj(W) diag(sigma) W*` of a complex symmetric
//! matrix.
//!
//! Writing `A = X + iY` and `w = u + iv`, the column equation
//! `A w = sigma conj(w)` is the real symmetric eigenproblem
//! `[[X, -Y], [-Y, -X]] (u; v) = sigma (u; v)`. Its spectrum is `+-sigma`;
//! eigenvectors for positive eigenvalues give orthonormal Takagi vectors
//! directly, and the null space is completed by complex Gram-Schmidt.

use nalgebra::{DMatrix, DVector};

use crate::poly::Complex;

#[derive(Clone, Debug)]
pub struct Takagi {
    /// Ascending.
    pub sigma: Vec<f64>,
    /// Unitary with `W^T A W = diag(sigma)`.
    pub unitary: DMatrix<Complex>,
}

pub fn takagi(a: &DMatrix<Complex>) -> Takagi {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "Takagi factorization needs a square matrix");
    if n == 0 {
        return Takagi { sigma: Vec::new(), unitary: DMatrix::zeros(0, 0) };
    }
    let sym = (a + a.transpose()).scale(0.5);
    let big = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, ii) = (i / n, i % n);
        let (bj, jj) = (j / n, j % n);
        let c = sym[(ii, jj)];
        match (bi, bj) {
            (0, 0) => c.re,
            (0, 1) | (1, 0) => -c.im,
            _ => -c.re,
        }
    });
    let eig = big.symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let tol = 1e-12 * scale.max(1.0);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].partial_cmp(&eig.eigenvalues[x]).unwrap());

    let mut columns: Vec<(f64, DVector<Complex>)> = Vec::with_capacity(n);
    for &k in &order {
        if columns.len() == n {
            break;
        }
        let lambda = eig.eigenvalues[k];
        if lambda < -tol {
            break;
        }
        let col = eig.eigenvectors.column(k);
        let mut w = DVector::from_fn(n, |i, _| Complex::new(col[i], col[i + n]));
        if lambda > tol {
            columns.push((lambda, w));
            continue;
        }
        // null space: keep only directions not already spanned over C
        for (_, prev) in &columns {
            let proj = prev.dotc(&w);
            w -= prev * proj;
        }
        let norm = w.norm();
        if norm > 0.5 {
            columns.push((0.0, w / Complex::new(norm, 0.0)));
        }
    }
    // pathological rounding: complete with Gram-Schmidt on the standard basis
    let mut axis = 0;
    while columns.len() < n && axis < n {
        let mut w = DVector::<Complex>::zeros(n);
        w[axis] = Complex::new(1.0, 0.0);
        for (_, prev) in &columns {
            let proj = prev.dotc(&w);
            w -= prev * proj;
        }
        let norm = w.norm();
        if norm > 1e-6 {
            columns.push((0.0, w / Complex::new(norm, 0.0)));
        }
        axis += 1;
    }
    columns.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let sigma = columns.iter().map(|(s, _)| *s).collect();
    let mut unitary = DMatrix::<Complex>::zeros(n, n);
    for (j, (_, w)) in columns.iter().enumerate() {
        unitary.set_column(j, w);
    }
    Takagi { sigma, unitary }
}
