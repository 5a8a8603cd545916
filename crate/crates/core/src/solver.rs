//! Linear-algebra workhorses for the grid solves: a fast cosine transform
//! that diagonalizes the reflected/Dirichlet Laplacian, an exact Helmholtz
//! solver built on it, matrix-free Krylov iterations and a preconditioned
//! LOBPCG for smallest eigenvalues.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::Error;
use crate::fields::Quadrant;
use crate::Result;

/// Matrix-free linear operator on flat vectors.
pub trait LinOp {
    fn size(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl<F: Fn(&[f64], &mut [f64])> LinOp for (usize, F) {
    fn size(&self) -> usize {
        self.0
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (self.1)(x, y)
    }
}

/// Similarity wrap D^{1/2} A D^{-1/2} of an operator that is self-adjoint in
/// a weighted inner product (weights = diagonal of D). Quadrant stencils with
/// even reflection are of this kind; the wrap makes them Euclidean-symmetric
/// so LOBPCG and singular-value iterations apply.
pub struct WeightedSym<'a, A: LinOp + ?Sized> {
    pub inner: &'a A,
    pub sqrt_w: Vec<f64>,
}

impl<'a, A: LinOp + ?Sized> WeightedSym<'a, A> {
    pub fn new(inner: &'a A, weights: &[f64]) -> Self {
        Self { inner, sqrt_w: weights.iter().map(|w| w.sqrt()).collect() }
    }

    pub fn to_plain(&self, x_sym: &[f64]) -> Vec<f64> {
        x_sym.iter().zip(&self.sqrt_w).map(|(v, s)| v / s).collect()
    }

    pub fn from_plain(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.sqrt_w).map(|(v, s)| v * s).collect()
    }
}

impl<'a, A: LinOp + ?Sized> LinOp for WeightedSym<'a, A> {
    fn size(&self) -> usize {
        self.inner.size()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let plain = self.to_plain(x);
        self.inner.apply(&plain, y);
        for (yi, s) in y.iter_mut().zip(&self.sqrt_w) {
            *yi *= s;
        }
    }
}

// ---------------------------------------------------------------------------
// cosine transform and Helmholtz solve
// ---------------------------------------------------------------------------

/// Half-sample cosine transform pair adapted to even reflection at node 0 and
/// a Dirichlet ghost at node n: the basis is phi_k(i) = cos(pi (2k+1) i / 2n).
pub struct CosTransform {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    twiddle: Vec<Complex64>,
}

impl CosTransform {
    pub fn new(n: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(2 * n);
        let twiddle = (0..2 * n)
            .map(|i| Complex64::from_polar(1.0, -std::f64::consts::PI * i as f64 / (2.0 * n as f64)))
            .collect();
        Self { n, fft, twiddle }
    }

    /// Eigenvalue of -d2/dx2 (reflected/Dirichlet second difference) for
    /// mode k at grid spacing h.
    pub fn eigenvalue(&self, k: usize, h: f64) -> f64 {
        let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2.0 * self.n as f64);
        (2.0 - 2.0 * theta.cos()) / (h * h)
    }

    /// Synthesis: u_i = sum_k y_k cos(pi (2k+1) i / 2n).
    pub fn synthesis(&self, y: &[f64], out: &mut [f64]) {
        let n = self.n;
        let mut buf = vec![Complex64::default(); 2 * n];
        for (k, &v) in y.iter().enumerate() {
            buf[k] = Complex64::new(v, 0.0);
        }
        self.fft.process(&mut buf);
        for i in 0..n {
            out[i] = (self.twiddle[i] * buf[i]).re;
        }
    }

    /// Analysis: y_k = (2/n) sum_i w_i u_i cos(pi (2k+1) i / 2n), w_0 = 1/2.
    pub fn analysis(&self, u: &[f64], out: &mut [f64]) {
        let n = self.n;
        let mut buf = vec![Complex64::default(); 2 * n];
        buf[0] = Complex64::new(0.5 * u[0], 0.0);
        for i in 1..n {
            buf[i] = self.twiddle[i] * u[i];
        }
        self.fft.process(&mut buf);
        for k in 0..n {
            out[k] = 2.0 / n as f64 * buf[k].re;
        }
    }
}

/// Exact solver for (-Delta_h + c) u = f on a quadrant grid, via the cosine
/// eigenbasis in both directions. Requires c > -lambda_min (c >= 0 is safe).
pub struct HelmholtzSolver {
    grid: Quadrant,
    ct: CosTransform,
    pub shift: f64,
}

impl HelmholtzSolver {
    pub fn new(grid: Quadrant, shift: f64) -> Self {
        Self { grid, ct: CosTransform::new(grid.n), shift }
    }

    /// In-place row transform followed by transpose.
    fn pass(&self, v: &mut Vec<f64>, forward: bool) {
        let n = self.grid.n;
        let mut row_out = vec![0.0; n];
        for i in 0..n {
            let row = &v[i * n..(i + 1) * n];
            if forward {
                self.ct.analysis(row, &mut row_out);
            } else {
                self.ct.synthesis(row, &mut row_out);
            }
            v[i * n..(i + 1) * n].copy_from_slice(&row_out);
        }
        // transpose
        for i in 0..n {
            for j in (i + 1)..n {
                v.swap(i * n + j, j * n + i);
            }
        }
    }

    /// Solve (-Delta_h + shift) u = f; `f` is consumed as workspace.
    pub fn solve(&self, mut f: Vec<f64>) -> Vec<f64> {
        let n = self.grid.n;
        let h = self.grid.h;
        self.pass(&mut f, true);
        self.pass(&mut f, true);
        for k in 0..n {
            let lk = self.ct.eigenvalue(k, h);
            for l in 0..n {
                let ll = self.ct.eigenvalue(l, h);
                f[k * n + l] /= lk + ll + self.shift;
            }
        }
        self.pass(&mut f, false);
        self.pass(&mut f, false);
        f
    }

    pub fn grid(&self) -> Quadrant {
        self.grid
    }
}

// ---------------------------------------------------------------------------
// Krylov iterations
// ---------------------------------------------------------------------------

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn nrm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Preconditioned BiCGStab for a general (nonsymmetric) operator.
/// `precond` applies an approximate inverse.
pub fn bicgstab<A, M>(
    op: &A,
    precond: &M,
    b: &[f64],
    x0: Option<&[f64]>,
    rel_tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>>
where
    A: LinOp + ?Sized,
    M: Fn(&[f64]) -> Vec<f64>,
{
    let n = b.len();
    let mut x = x0.map(|v| v.to_vec()).unwrap_or_else(|| vec![0.0; n]);
    let mut r = vec![0.0; n];
    op.apply(&x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let bnorm = nrm2(b).max(1e-300);
    if nrm2(&r) / bnorm <= rel_tol {
        return Ok(x);
    }
    let r_hat = r.clone();
    let mut rho = 1.0;
    let mut alpha = 1.0;
    let mut omega = 1.0;
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for _ in 0..max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new.abs() < 1e-300 {
            return Err(Error::JacobianSingular("BiCGStab breakdown (rho)".into()));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        let p_hat = precond(&p);
        op.apply(&p_hat, &mut v);
        let denom = dot(&r_hat, &v);
        if denom.abs() < 1e-300 {
            return Err(Error::JacobianSingular("BiCGStab breakdown (r_hat.v)".into()));
        }
        alpha = rho / denom;
        let mut s = r.clone();
        axpy(-alpha, &v, &mut s);
        if nrm2(&s) / bnorm <= rel_tol {
            axpy(alpha, &p_hat, &mut x);
            return Ok(x);
        }
        let s_hat = precond(&s);
        let mut t = vec![0.0; n];
        op.apply(&s_hat, &mut t);
        let tt = dot(&t, &t);
        if tt < 1e-300 {
            return Err(Error::JacobianSingular("BiCGStab breakdown (t.t)".into()));
        }
        omega = dot(&t, &s) / tt;
        axpy(alpha, &p_hat, &mut x);
        axpy(omega, &s_hat, &mut x);
        r = s;
        axpy(-omega, &t, &mut r);
        if nrm2(&r) / bnorm <= rel_tol {
            return Ok(x);
        }
        if omega.abs() < 1e-300 {
            return Err(Error::JacobianSingular("BiCGStab breakdown (omega)".into()));
        }
    }
    Err(Error::JacobianSingular(format!(
        "BiCGStab stalled at relative residual {:.3e}",
        {
            let mut ax = vec![0.0; n];
            op.apply(&x, &mut ax);
            for i in 0..n {
                ax[i] = b[i] - ax[i];
            }
            nrm2(&ax) / bnorm
        }
    )))
}

/// Restarted GMRES(m), right-preconditioned; fallback for hard systems.
pub fn gmres<A, M>(
    op: &A,
    precond: &M,
    b: &[f64],
    x0: Option<&[f64]>,
    rel_tol: f64,
    restart: usize,
    max_outer: usize,
) -> Result<Vec<f64>>
where
    A: LinOp + ?Sized,
    M: Fn(&[f64]) -> Vec<f64>,
{
    let n = b.len();
    let mut x = x0.map(|v| v.to_vec()).unwrap_or_else(|| vec![0.0; n]);
    let bnorm = nrm2(b).max(1e-300);
    for _ in 0..max_outer {
        let mut r = vec![0.0; n];
        op.apply(&x, &mut r);
        for i in 0..n {
            r[i] = b[i] - r[i];
        }
        let beta = nrm2(&r);
        if beta / bnorm <= rel_tol {
            return Ok(x);
        }
        let m = restart;
        let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        v.push(r.iter().map(|x| x / beta).collect());
        let mut h = vec![vec![0.0; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..m {
            let z = precond(&v[k]);
            let mut w = vec![0.0; n];
            op.apply(&z, &mut w);
            for (i, vi) in v.iter().enumerate() {
                h[i][k] = dot(&w, vi);
                axpy(-h[i][k], vi, &mut w);
            }
            h[k + 1][k] = nrm2(&w);
            if h[k + 1][k] > 1e-300 {
                v.push(w.iter().map(|x| x / h[k + 1][k]).collect());
            } else {
                v.push(vec![0.0; n]);
            }
            // Givens rotations
            for i in 0..k {
                let tmp = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = tmp;
            }
            let denom = (h[k][k] * h[k][k] + h[k + 1][k] * h[k + 1][k]).sqrt();
            if denom < 1e-300 {
                k_used = k;
                break;
            }
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            if g[k + 1].abs() / bnorm <= rel_tol {
                break;
            }
        }
        // back substitution
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in (i + 1)..k_used {
                s -= h[i][j] * y[j];
            }
            y[i] = s / h[i][i];
        }
        let mut update = vec![0.0; n];
        for (j, &yj) in y.iter().enumerate() {
            axpy(yj, &v[j], &mut update);
        }
        let z = precond(&update);
        axpy(1.0, &z, &mut x);
    }
    let mut r = vec![0.0; n];
    op.apply(&x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let rel = nrm2(&r) / bnorm;
    if rel <= rel_tol * 10.0 {
        return Ok(x);
    }
    Err(Error::JacobianSingular(format!("GMRES stalled at relative residual {rel:.3e}")))
}

// ---------------------------------------------------------------------------
// LOBPCG for the smallest eigenvalue of an SPD operator
// ---------------------------------------------------------------------------

fn project_out(x: &mut [f64], constraints: &[Vec<f64>]) {
    for c in constraints {
        let alpha = dot(x, c);
        axpy(-alpha, c, x);
    }
}

/// Smallest eigenvalue (and eigenvector) of an SPD operator by single-vector
/// LOBPCG with a preconditioner and optional orthonormal constraints.
pub fn lobpcg_smallest<A, M>(
    op: &A,
    precond: &M,
    constraints: &[Vec<f64>],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<f64>)>
where
    A: LinOp + ?Sized,
    M: Fn(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    project_out(&mut x, constraints);
    let nx = nrm2(&x);
    if nx < 1e-300 {
        return Err(Error::EigensolverFailure("start vector inside constraint span".into()));
    }
    for xi in x.iter_mut() {
        *xi /= nx;
    }
    let mut ax = vec![0.0; n];
    op.apply(&x, &mut ax);
    let mut lambda = dot(&x, &ax);
    let mut p: Option<Vec<f64>> = None;
    for _iter in 0..max_iter {
        // residual
        let mut r: Vec<f64> = ax.iter().zip(&x).map(|(a, xi)| a - lambda * xi).collect();
        let rn = nrm2(&r);
        if rn <= tol * lambda.abs().max(1e-300) {
            return Ok((lambda, x));
        }
        r = precond(&r);
        project_out(&mut r, constraints);
        // basis {x, r, p} orthonormalized by modified Gram-Schmidt
        let mut basis: Vec<Vec<f64>> = vec![x.clone()];
        let push = |w: &[f64], basis: &mut Vec<Vec<f64>>| {
            let mut w = w.to_vec();
            for bvec in basis.iter() {
                let a = dot(&w, bvec);
                axpy(-a, bvec, &mut w);
            }
            let nw = nrm2(&w);
            if nw > 1e-10 {
                for wi in w.iter_mut() {
                    *wi /= nw;
                }
                basis.push(w);
            }
        };
        push(&r, &mut basis);
        if let Some(pv) = &p {
            push(pv, &mut basis);
        }
        let m = basis.len();
        // Rayleigh-Ritz on the basis (basis[0] is x, whose product is cached)
        let mut avs: Vec<Vec<f64>> = Vec::with_capacity(m);
        for (idx, bvec) in basis.iter().enumerate() {
            if idx == 0 {
                avs.push(ax.clone());
            } else {
                let mut t = vec![0.0; n];
                op.apply(bvec, &mut t);
                avs.push(t);
            }
        }
        let mut gram = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                gram[i][j] = dot(&basis[i], &avs[j]);
            }
        }
        let (eval, evec) = sym_smallest(&gram)?;
        // new iterate
        let mut xn = vec![0.0; n];
        let mut axn = vec![0.0; n];
        for (j, c) in evec.iter().enumerate() {
            axpy(*c, &basis[j], &mut xn);
            axpy(*c, &avs[j], &mut axn);
        }
        // implicit p: the part of the new iterate orthogonal to x
        let alpha = dot(&xn, &x);
        let mut pn: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - alpha * b).collect();
        let np = nrm2(&pn);
        if np > 1e-12 {
            for v in pn.iter_mut() {
                *v /= np;
            }
            p = Some(pn);
        } else {
            p = None;
        }
        let nxn = nrm2(&xn);
        x = xn.iter().map(|v| v / nxn).collect();
        ax = axn.iter().map(|v| v / nxn).collect();
        lambda = eval;
    }
    Ok((lambda, x)) // best effort after max_iter; caller checks plausibility
}

/// Smallest eigenpair of a small dense symmetric matrix by Jacobi rotations.
fn sym_smallest(a: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let m = a.len();
    let mut mat: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; m]; m];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                off += mat[i][j] * mat[i][j];
            }
        }
        if off < 1e-28 {
            break;
        }
        for i in 0..m {
            for j in (i + 1)..m {
                if mat[i][j].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (mat[j][j] - mat[i][i]) / mat[i][j];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let (aik, ajk) = (mat[i][k], mat[j][k]);
                    mat[i][k] = c * aik - s * ajk;
                    mat[j][k] = s * aik + c * ajk;
                }
                for k in 0..m {
                    let (aki, akj) = (mat[k][i], mat[k][j]);
                    mat[k][i] = c * aki - s * akj;
                    mat[k][j] = s * aki + c * akj;
                }
                for k in 0..m {
                    let (vki, vkj) = (v[k][i], v[k][j]);
                    v[k][i] = c * vki - s * vkj;
                    v[k][j] = s * vki + c * vkj;
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..m {
        if mat[i][i] < mat[best][best] {
            best = i;
        }
    }
    Ok((mat[best][best], (0..m).map(|k| v[k][best]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_analysis(u: &[f64]) -> Vec<f64> {
        let n = u.len();
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for (i, &ui) in u.iter().enumerate() {
                    let w = if i == 0 { 0.5 } else { 1.0 };
                    s += w * ui
                        * (std::f64::consts::PI * (2 * k + 1) as f64 * i as f64
                            / (2.0 * n as f64))
                            .cos();
                }
                2.0 / n as f64 * s
            })
            .collect()
    }

    fn naive_synthesis(y: &[f64]) -> Vec<f64> {
        let n = y.len();
        (0..n)
            .map(|i| {
                let mut s = 0.0;
                for (k, &yk) in y.iter().enumerate() {
                    s += yk
                        * (std::f64::consts::PI * (2 * k + 1) as f64 * i as f64
                            / (2.0 * n as f64))
                            .cos();
                }
                s
            })
            .collect()
    }

    #[test]
    fn cosine_transform_matches_naive_and_inverts() {
        for n in [8usize, 13, 32] {
            let ct = CosTransform::new(n);
            let u: Vec<f64> = (0..n).map(|i| ((i * i + 1) as f64 * 0.13).sin()).collect();
            let mut y = vec![0.0; n];
            ct.analysis(&u, &mut y);
            let y_naive = naive_analysis(&u);
            for (a, b) in y.iter().zip(&y_naive) {
                assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
            }
            let mut back = vec![0.0; n];
            ct.synthesis(&y, &mut back);
            let s_naive = naive_synthesis(&y_naive);
            for ((a, b), orig) in back.iter().zip(&s_naive).zip(&u) {
                assert!((a - b).abs() < 1e-12);
                assert!((a - orig).abs() < 1e-12, "round trip failed: {a} vs {orig}");
            }
        }
    }

    #[test]
    fn helmholtz_inverts_operator() {
        let g = Quadrant::new(48, 0.21);
        let hs = HelmholtzSolver::new(g, 1.7);
        let f = g.tabulate(|x, y| (-(x * x + 2.0 * y * y)).exp() * (1.0 + x));
        let u = hs.solve(f.clone());
        let mut back = vec![0.0; g.n * g.n];
        g.add_neg_laplacian(&u, &mut back, 1.0);
        for (b, ui) in back.iter_mut().zip(&u) {
            *b += 1.7 * ui;
        }
        let err: f64 = back
            .iter()
            .zip(&f)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-10, "Helmholtz defect {err}");
    }

    #[test]
    fn bicgstab_solves_shifted_poisson() {
        let g = Quadrant::new(32, 0.25);
        let pot = g.tabulate(|x, y| 1.0 + 0.3 * (x + y).sin().powi(2));
        let n = g.n * g.n;
        let op = (n, move |x: &[f64], y: &mut [f64]| {
            y.iter_mut().for_each(|v| *v = 0.0);
            g.add_neg_laplacian(x, y, 1.0);
            for i in 0..x.len() {
                y[i] += pot[i] * x[i];
            }
        });
        let hs = HelmholtzSolver::new(g, 1.0);
        let precond = |r: &[f64]| hs.solve(r.to_vec());
        let b = g.tabulate(|x, y| (-(x * x + y * y)).exp());
        let x = bicgstab(&op, &precond, &b, None, 1e-12, 200).unwrap();
        let mut r = vec![0.0; n];
        op.apply(&x, &mut r);
        let res: f64 = r.iter().zip(&b).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
        assert!(res < 1e-10 * nrm2(&b), "residual {res}");
    }

    #[test]
    fn gmres_matches_bicgstab() {
        let g = Quadrant::new(24, 0.3);
        let n = g.n * g.n;
        let pot = g.tabulate(|x, y| 2.0 + (x * y).cos());
        let op = (n, move |x: &[f64], y: &mut [f64]| {
            y.iter_mut().for_each(|v| *v = 0.0);
            g.add_neg_laplacian(x, y, 1.0);
            for i in 0..x.len() {
                y[i] += pot[i] * x[i];
            }
        });
        let hs = HelmholtzSolver::new(g, 2.0);
        let precond = |r: &[f64]| hs.solve(r.to_vec());
        let b = g.tabulate(|x, _| (-(x * x)).exp());
        let xa = bicgstab(&op, &precond, &b, None, 1e-12, 300).unwrap();
        let xb = gmres(&op, &precond, &b, None, 1e-12, 40, 10).unwrap();
        let diff: f64 = xa.iter().zip(&xb).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        assert!(diff < 1e-8 * nrm2(&xa).max(1.0));
    }

    #[test]
    fn lobpcg_finds_smallest_laplacian_mode() {
        // smallest eigenvalue of (-Delta_h + 0.5) on the quadrant is
        // 2 * (2 - 2 cos(pi/(2n)))/h^2 + 0.5 for the lowest cosine mode;
        // the stencil is self-adjoint only in the multiplicity-weighted
        // product, so the solve runs in similarity-transformed variables
        let g = Quadrant::new(24, 0.4);
        let n = g.n * g.n;
        let op = (n, move |x: &[f64], y: &mut [f64]| {
            y.iter_mut().for_each(|v| *v = 0.0);
            g.add_neg_laplacian(x, y, 1.0);
            for i in 0..x.len() {
                y[i] += 0.5 * x[i];
            }
        });
        let weights: Vec<f64> = (0..n)
            .map(|k| g.mult(k / g.n, k % g.n) * g.h * g.h)
            .collect();
        let sym = WeightedSym::new(&op, &weights);
        let hs = HelmholtzSolver::new(g, 0.5);
        let precond = |r: &[f64]| {
            let plain = sym.to_plain(r);
            sym.from_plain(&hs.solve(plain))
        };
        let x0: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * 0.37).sin()).collect();
        let (eig, _) = lobpcg_smallest(&sym, &precond, &[], &x0, 1e-10, 400).unwrap();
        let ct = CosTransform::new(g.n);
        let expect = 2.0 * ct.eigenvalue(0, g.h) + 0.5;
        assert!((eig - expect).abs() < 1e-8 * expect, "{eig} vs {expect}");
    }
}
