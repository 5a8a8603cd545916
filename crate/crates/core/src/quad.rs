//! Quadrature of cross-peak interaction integrals: tensor midpoint rules in
//! the plane and an axisymmetric cylindrical reduction for N = 3, with
//! Richardson refinement until the requested relative accuracy is reached.

use crate::error::Error;
use crate::profile::RadialProfile;
use crate::Result;

pub const QUAD_REL_TOL: f64 = 1e-7;
const MAX_CELLS: usize = 8000;

/// Midpoint rule over the box [-w, w]^2; returns (integral, integral of |f|).
fn midpoint_box<F: Fn(f64, f64) -> f64>(f: &F, w: f64, n: usize) -> (f64, f64) {
    let h = 2.0 * w / n as f64;
    let mut acc = 0.0;
    let mut mag = 0.0;
    for i in 0..n {
        let x = -w + (i as f64 + 0.5) * h;
        let mut row = 0.0;
        let mut rmag = 0.0;
        for j in 0..n {
            let y = -w + (j as f64 + 0.5) * h;
            let v = f(x, y);
            row += v;
            rmag += v.abs();
        }
        acc += row;
        mag += rmag;
    }
    (acc * h * h, mag * h * h)
}

/// Midpoint rule over z in [-w, w], s in (0, w] with cylindrical weight
/// 2 pi s (axisymmetric N = 3 reduction).
fn midpoint_cylinder<F: Fn(f64, f64) -> f64>(f: &F, w: f64, n: usize) -> (f64, f64) {
    let hz = 2.0 * w / n as f64;
    let m = (n / 2).max(1);
    let hs = w / m as f64;
    let mut acc = 0.0;
    let mut mag = 0.0;
    for i in 0..n {
        let z = -w + (i as f64 + 0.5) * hz;
        for j in 0..m {
            let s = (j as f64 + 0.5) * hs;
            let v = s * f(z, s);
            acc += v;
            mag += v.abs();
        }
    }
    let scale = 2.0 * std::f64::consts::PI * hz * hs;
    (acc * scale, mag * scale)
}

/// Refine until two successive levels agree to `QUAD_REL_TOL` relative (with
/// an absolute floor tied to the integral of |f|, so odd integrands that
/// cancel to roundoff are accepted). Returns the Richardson-extrapolated
/// value of the last two midpoint levels.
fn refine<G: Fn(usize) -> (f64, f64)>(eval: &G, n0: usize) -> Result<f64> {
    let (mut prev, _) = eval(n0);
    let mut n = n0;
    loop {
        n *= 2;
        if n > MAX_CELLS {
            return Err(Error::QuadratureStall { rel: f64::NAN, levels: n / n0 });
        }
        let (cur, mag) = eval(n);
        let err = (cur - prev).abs();
        if err <= QUAD_REL_TOL * cur.abs() + 1e-10 * mag {
            return Ok(cur + (cur - prev) / 3.0);
        }
        prev = cur;
    }
}

fn check_dims(u: &RadialProfile, v: &RadialProfile) -> Result<usize> {
    if u.dim != v.dim {
        return Err(Error::GridMismatch(format!(
            "profile dimensions differ: {} vs {}",
            u.dim, v.dim
        )));
    }
    if !(2..=3).contains(&u.dim) {
        return Err(Error::InvalidInput(format!("dimension {} not in 2..=3", u.dim)));
    }
    Ok(u.dim)
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Overlap integral of two shifted profiles over R^N.
///
/// The peaks are placed symmetrically at +-xi/2 (the value only depends on
/// |xi| by radial symmetry); for N = 3 the integral reduces to cylindrical
/// coordinates about the separation axis.
pub fn overlap_integral(u: &RadialProfile, v: &RadialProfile, xi: &[f64]) -> Result<f64> {
    let dim = check_dims(u, v)?;
    let sep = norm(xi);
    let b_min = u.lambda.sqrt().min(v.lambda.sqrt());
    let w = 0.5 * sep + 25.0 / b_min;
    let d = 0.5 * sep;
    match dim {
        2 => {
            let f = |x: f64, y: f64| {
                u.eval(((x - d) * (x - d) + y * y).sqrt())
                    * v.eval(((x + d) * (x + d) + y * y).sqrt())
            };
            let n0 = (((2.0 * w) * b_min / 0.4).ceil() as usize).max(64);
            refine(&|n| midpoint_box(&f, w, n), n0)
        }
        _ => {
            let f = |z: f64, s: f64| {
                u.eval(((z - d) * (z - d) + s * s).sqrt())
                    * v.eval(((z + d) * (z + d) + s * s).sqrt())
            };
            let n0 = (((2.0 * w) * b_min / 0.8).ceil() as usize).max(64);
            refine(&|n| midpoint_cylinder(&f, w, n), n0)
        }
    }
}

/// Gradient-coupled interaction: integral of u_j^s(x + zeta) d/dx_axis u_i^t(x).
///
/// The derivative of the profile power uses the stored radial derivative and
/// the chain rule. For N = 3 the axial component is computed about the
/// separation axis and the requested component recovered by symmetry (the
/// integral vector is parallel to zeta).
pub fn theta_integral(
    s: u32,
    t: u32,
    u_shifted: &RadialProfile,
    u_core: &RadialProfile,
    zeta: &[f64],
    axis: usize,
) -> Result<f64> {
    let dim = check_dims(u_shifted, u_core)?;
    if s < 1 || t < 1 {
        return Err(Error::InvalidCase { s: s as f64, t: t as f64 });
    }
    if axis >= dim {
        return Err(Error::InvalidInput(format!("axis {axis} out of range for N={dim}")));
    }
    let sep = norm(zeta);
    let b_box = u_shifted.lambda.sqrt().min(u_core.lambda.sqrt());
    let w = 0.5 * sep + 25.0 / b_box;

    let dpow = |p: &RadialProfile, tt: u32, r: f64, yl: f64| -> f64 {
        if r < 1e-12 {
            return 0.0;
        }
        let uv = p.eval(r);
        tt as f64 * uv.powi(tt as i32 - 1) * p.eval_deriv(r) * yl / r
    };

    match dim {
        2 => {
            let (z1, z2) = (zeta[0], zeta[1]);
            let f = move |x: f64, y: f64| {
                let (cx, cy) = (x - 0.5 * z1, y - 0.5 * z2);
                let (sx, sy) = (x + 0.5 * z1, y + 0.5 * z2);
                let rc = (cx * cx + cy * cy).sqrt();
                let rs = (sx * sx + sy * sy).sqrt();
                let yl = if axis == 0 { cx } else { cy };
                u_shifted.eval(rs).powi(s as i32) * dpow(u_core, t, rc, yl)
            };
            let n0 = (((2.0 * w) * b_box / 0.4).ceil() as usize).max(64);
            refine(&|n| midpoint_box(&f, w, n), n0)
        }
        _ => {
            if sep < 1e-14 {
                return Ok(0.0); // odd integrand
            }
            let d = 0.5 * sep;
            let f = move |z: f64, sr: f64| {
                let rc = ((z - d) * (z - d) + sr * sr).sqrt();
                let rs = ((z + d) * (z + d) + sr * sr).sqrt();
                u_shifted.eval(rs).powi(s as i32) * dpow(u_core, t, rc, z - d)
            };
            let n0 = (((2.0 * w) * b_box / 0.8).ceil() as usize).max(64);
            let axial = refine(&|n| midpoint_cylinder(&f, w, n), n0)?;
            Ok(axial * zeta[axis] / sep)
        }
    }
}

/// Refined planar quadrature of an arbitrary integrand over [-w, w]^2; the
/// initial resolution is tied to the slowest decay rate `b`.
pub fn refine_box<F: Fn(f64, f64) -> f64>(f: &F, w: f64, b: f64) -> Result<f64> {
    let n0 = (((2.0 * w) * b / 0.4).ceil() as usize).max(64);
    refine(&|n| midpoint_box(f, w, n), n0)
}

/// Refined axisymmetric quadrature of an integrand f(z, s) with cylindrical
/// weight over z in [-w, w], s in (0, w].
pub fn refine_cylinder<F: Fn(f64, f64) -> f64>(f: &F, w: f64, b: f64) -> Result<f64> {
    let n0 = (((2.0 * w) * b / 0.8).ceil() as usize).max(64);
    refine(&|n| midpoint_cylinder(f, w, n), n0)
}

/// Weighted radial moment: integral over R^N of f(r, U, U') with the surface
/// measure, by composite Simpson on a dense uniform grid.
pub fn radial_moment<F: Fn(f64, f64, f64) -> f64>(p: &RadialProfile, f: F) -> f64 {
    let n = 262_144usize; // even
    let r_max = *p.r.last().unwrap();
    let h = r_max / n as f64;
    let g = |r: f64| f(r, p.eval(r), p.eval_deriv(r)) * r.powi(p.dim as i32 - 1);
    let mut acc = g(0.0) + g(r_max);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(k as f64 * h);
    }
    let surface = match p.dim {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        _ => 4.0 * std::f64::consts::PI,
    };
    surface * acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::solve_ground_state;

    #[test]
    fn radial_reduction_at_zero_offset() {
        let p = solve_ground_state(2, 1.0, 1.0, 1e-8).unwrap();
        let full = overlap_integral(&p, &p, &[0.0, 0.0]).unwrap();
        let radial = radial_moment(&p, |_, u, _| u * u);
        assert!(
            ((full - radial) / radial).abs() < 1e-8,
            "2-D {full} vs radial {radial}"
        );
    }

    #[test]
    fn overlap_symmetric_in_shift() {
        let p = solve_ground_state(2, 1.0, 1.0, 1e-8).unwrap();
        let a = overlap_integral(&p, &p, &[7.0, 2.0]).unwrap();
        let b = overlap_integral(&p, &p, &[-7.0, -2.0]).unwrap();
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn theta_odd_in_zeta() {
        let p = solve_ground_state(2, 1.0, 1.0, 1e-8).unwrap();
        let plus = theta_integral(1, 2, &p, &p, &[9.0, 1.5], 0).unwrap();
        let minus = theta_integral(1, 2, &p, &p, &[-9.0, -1.5], 0).unwrap();
        assert!((plus + minus).abs() <= 1e-10 * plus.abs().max(1e-12));
    }

    #[test]
    fn theta_zero_at_origin_shift() {
        let p = solve_ground_state(2, 1.0, 1.0, 1e-8).unwrap();
        let v = theta_integral(1, 1, &p, &p, &[0.0, 0.0], 0).unwrap();
        assert!(v.abs() < 1e-10, "odd integrand should vanish, got {v}");
    }
}
