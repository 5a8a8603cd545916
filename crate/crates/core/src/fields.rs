//! Even-symmetric quadrant grids and scalar fields on them.
//!
//! A field stores one quadrant of a function that is even in each variable:
//! nodes x = i h, y = j h for 0 <= i, j < n, with the origin on a node.
//! Reflection across the axes is exact by construction; a homogeneous
//! Dirichlet ghost layer sits just outside i = n - 1 (and j = n - 1).

use crate::error::Error;
use crate::Result;

/// Quadrant grid geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrant {
    pub n: usize,
    pub h: f64,
}

impl Quadrant {
    pub fn new(n: usize, h: f64) -> Self {
        Self { n, h }
    }

    /// Box side covered by the stored quadrant (to the Dirichlet ghost).
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.h
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// Even-extension multiplicity of a node (4 interior, 2 on an axis,
    /// 1 at the origin); full-plane integrals use mult * h^2.
    #[inline]
    pub fn mult(&self, i: usize, j: usize) -> f64 {
        let mi = if i == 0 { 1.0 } else { 2.0 };
        let mj = if j == 0 { 1.0 } else { 2.0 };
        mi * mj
    }

    /// Full-plane inner product of two quadrant fields.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            let mi = if i == 0 { 1.0 } else { 2.0 };
            let mut row = 0.0;
            for j in 0..n {
                let mj = if j == 0 { 1.0 } else { 2.0 };
                row += mj * a[i * n + j] * b[i * n + j];
            }
            acc += mi * row;
        }
        acc * self.h * self.h
    }

    pub fn norm(&self, a: &[f64]) -> f64 {
        self.inner(a, a).sqrt()
    }

    /// y += alpha * (-Delta_h x) with even reflection at the axes and a
    /// Dirichlet ghost beyond the outer edges (5-point stencil).
    pub fn add_neg_laplacian(&self, x: &[f64], y: &mut [f64], alpha: f64) {
        let n = self.n;
        let ih2 = alpha / (self.h * self.h);
        for i in 0..n {
            for j in 0..n {
                let c = x[i * n + j];
                let xm = if i == 0 { x[n + j] } else { x[(i - 1) * n + j] };
                let xp = if i + 1 < n { x[(i + 1) * n + j] } else { 0.0 };
                let ym = if j == 0 { x[i * n + 1] } else { x[i * n + j - 1] };
                let yp = if j + 1 < n { x[i * n + j + 1] } else { 0.0 };
                y[i * n + j] += ih2 * (4.0 * c - xm - xp - ym - yp);
            }
        }
    }

    /// Bilinear interpolation of an even field at physical coordinates
    /// (possibly negative; reflected), zero beyond the outer edge.
    pub fn interp(&self, v: &[f64], x: f64, y: f64) -> f64 {
        let n = self.n;
        let (ax, ay) = (x.abs() / self.h, y.abs() / self.h);
        if ax >= (n - 1) as f64 || ay >= (n - 1) as f64 {
            return 0.0;
        }
        let (i, j) = (ax.floor() as usize, ay.floor() as usize);
        let (tx, ty) = (ax - i as f64, ay - j as f64);
        let v00 = v[i * n + j];
        let v10 = v[(i + 1) * n + j];
        let v01 = v[i * n + j + 1];
        let v11 = v[(i + 1) * n + j + 1];
        v00 * (1.0 - tx) * (1.0 - ty) + v10 * tx * (1.0 - ty) + v01 * (1.0 - tx) * ty
            + v11 * tx * ty
    }

    /// Tabulate a function of the physical coordinates onto the quadrant.
    pub fn tabulate<F: Fn(f64, f64) -> f64>(&self, f: F) -> Vec<f64> {
        let n = self.n;
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                v[i * n + j] = f(i as f64 * self.h, j as f64 * self.h);
            }
        }
        v
    }

    /// Discrete H2 surrogate: sum of second differences, gradient and the
    /// weighted zero-order term, as a full-plane integral.
    pub fn h2_norm(&self, v: &[f64], weight: impl Fn(f64, f64) -> f64) -> f64 {
        let n = self.n;
        let h = self.h;
        let get = |i: isize, j: isize| -> f64 {
            let ii = if i < 0 { (-i) as usize } else { i as usize };
            let jj = if j < 0 { (-j) as usize } else { j as usize };
            if ii >= n || jj >= n {
                0.0
            } else {
                v[ii * n + jj]
            }
        };
        let mut acc = 0.0;
        for i in 0..n as isize {
            for j in 0..n as isize {
                let m = self.mult(i as usize, j as usize);
                let c = get(i, j);
                let dxx = (get(i + 1, j) - 2.0 * c + get(i - 1, j)) / (h * h);
                let dyy = (get(i, j + 1) - 2.0 * c + get(i, j - 1)) / (h * h);
                let dxy = (get(i + 1, j + 1) - get(i + 1, j - 1) - get(i - 1, j + 1)
                    + get(i - 1, j - 1))
                    / (4.0 * h * h);
                let dx = (get(i + 1, j) - get(i - 1, j)) / (2.0 * h);
                let dy = (get(i, j + 1) - get(i, j - 1)) / (2.0 * h);
                let w = weight(i as f64 * h, j as f64 * h);
                acc += m
                    * (dxx * dxx + 2.0 * dxy * dxy + dyy * dyy + dx * dx + dy * dy
                        + w * c * c);
            }
        }
        (acc * h * h).sqrt()
    }

    pub fn max_abs(&self, v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }
}

/// A scalar field on a quadrant grid.
#[derive(Debug, Clone)]
pub struct GridField {
    pub grid: Quadrant,
    pub v: Vec<f64>,
}

impl GridField {
    pub fn zeros(grid: Quadrant) -> Self {
        Self { grid, v: vec![0.0; grid.n * grid.n] }
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: Quadrant, f: F) -> Self {
        Self { grid, v: grid.tabulate(f) }
    }

    pub fn value_at_origin(&self) -> f64 {
        self.v[0]
    }

    pub fn check_compatible(&self, other: &GridField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{}x{} (h={}) vs {}x{} (h={})",
                self.grid.n, self.grid.n, self.grid.h, other.grid.n, other.grid.n, other.grid.h
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_product_weights_reproduce_plane_integral() {
        // integral of exp(-x^2-y^2) over the plane is pi
        let g = Quadrant::new(256, 6.0 / 256.0);
        let f = g.tabulate(|x, y| (-(x * x + y * y)).exp());
        let ones = vec![1.0; g.n * g.n];
        let val = g.inner(&f, &ones);
        assert!((val - std::f64::consts::PI).abs() < 1e-4, "{val}");
    }

    #[test]
    fn laplacian_symmetric_in_weighted_product() {
        let g = Quadrant::new(24, 0.3);
        let a = g.tabulate(|x, y| (-(x * x) - 0.5 * y * y).exp());
        let b = g.tabulate(|x, y| (x * x - y).cos());
        let mut la = vec![0.0; g.n * g.n];
        let mut lb = vec![0.0; g.n * g.n];
        g.add_neg_laplacian(&a, &mut la, 1.0);
        g.add_neg_laplacian(&b, &mut lb, 1.0);
        let lhs = g.inner(&la, &b);
        let rhs = g.inner(&a, &lb);
        assert!(
            (lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0),
            "{lhs} vs {rhs}"
        );
    }

    #[test]
    fn interp_reflects_evenly() {
        let g = Quadrant::new(32, 0.25);
        let f = g.tabulate(|x, y| x * x + 3.0 * y * y);
        let a = g.interp(&f, 1.3, 2.1);
        let b = g.interp(&f, -1.3, 2.1);
        assert_eq!(a, b);
    }
}
