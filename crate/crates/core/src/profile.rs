//! Radial ground states of -U'' - (N-1)/r U' + lambda U = mu U^3 with
//! certified exponential tails, and the spectral nondegeneracy check of the
//! linearized operator.

use crate::error::Error;
use crate::Result;

/// Tabulated radial ground state with an analytic far tail.
///
/// Values are stored on a graded grid `r[0] = 0 < r[1] < ...` together with
/// the exact radial derivative at every node. Beyond `r_tail` evaluation
/// switches to the decay law `c0 * exp(-sqrt(lambda) r) * r^(-(N-1)/2)`;
/// the grid keeps going past `r_tail` so the decay plateau can be verified
/// against ODE-integrated values rather than against the fitted law itself.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub dim: usize,
    pub lambda: f64,
    pub mu: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    /// Radius past which the tail law is used for evaluation.
    pub r_tail: f64,
    /// Decay constant of `u ~ c0 exp(-sqrt(lambda) r) r^(-(N-1)/2)`.
    pub c0: f64,
    /// Certified pointwise defect bound of the stored interpolant in the ODE.
    pub resid_tol: f64,
}

const HEIGHT_BRACKET: (f64, f64) = (0.1, 20.0);
const SHOOT_RTOL: f64 = 1e-12;
const GRID_END: f64 = 80.0; // in units of 1/sqrt(lambda)
const MATCH_RADIUS: f64 = 8.0;
const TAIL_CUTOFF: f64 = 1e-6; // r_tail: where U drops below this * U(0)

#[derive(Clone, Copy, PartialEq, Debug)]
enum Shot {
    Undershoot, // turned upward while positive: height too small
    Overshoot,  // crossed zero: height too large
}

/// Right-hand side of the first-order system (U, U').
#[inline]
fn rhs(dim: usize, lambda: f64, mu: f64, r: f64, y: [f64; 2]) -> [f64; 2] {
    let geom = if dim > 1 { (dim as f64 - 1.0) / r * y[1] } else { 0.0 };
    [y[1], lambda * y[0] - mu * y[0] * y[0] * y[0] - geom]
}

/// One adaptive Dormand-Prince 5(4) step; returns (y_new, err_estimate).
fn dp45_step(
    dim: usize,
    lambda: f64,
    mu: f64,
    r: f64,
    y: [f64; 2],
    h: f64,
) -> ([f64; 2], f64) {
    // Dormand-Prince coefficients
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let mut k = [[0.0f64; 2]; 7];
    k[0] = rhs(dim, lambda, mu, r, y);
    for s in 0..6 {
        let mut ys = y;
        for (j, kj) in k.iter().enumerate().take(s + 1) {
            ys[0] += h * A[s][j] * kj[0];
            ys[1] += h * A[s][j] * kj[1];
        }
        k[s + 1] = rhs(dim, lambda, mu, r + C[s] * h, ys);
    }
    let mut ynew = y;
    for (j, kj) in k.iter().enumerate().take(6) {
        ynew[0] += h * A[5][j] * kj[0];
        ynew[1] += h * A[5][j] * kj[1];
    }
    let mut err = [0.0f64; 2];
    for (j, kj) in k.iter().enumerate() {
        err[0] += E[j] * kj[0];
        err[1] += E[j] * kj[1];
    }
    let scale0 = y[0].abs().max(ynew[0].abs()).max(1e-300);
    let scale1 = y[1].abs().max(ynew[1].abs()).max(1e-300);
    let e = h.abs() * ((err[0] / scale0).powi(2) + (err[1] / scale1).powi(2)).sqrt();
    (ynew, e)
}

/// Adaptive integrator that lands exactly on `r_target` (works for
/// decreasing targets as well, for the inward tail pass).
struct Integrator {
    dim: usize,
    lambda: f64,
    mu: f64,
    r: f64,
    y: [f64; 2],
    h: f64,
    rtol: f64,
}

impl Integrator {
    fn advance_to(&mut self, r_target: f64) {
        let dir = (r_target - self.r).signum();
        if dir == 0.0 {
            return;
        }
        if self.h.signum() != dir {
            self.h = -self.h;
        }
        while (r_target - self.r) * dir > 1e-14 * r_target.abs().max(1.0) {
            let mut h = if (self.r + self.h - r_target) * dir > 0.0 {
                r_target - self.r
            } else {
                self.h
            };
            loop {
                let (ynew, err) = dp45_step(self.dim, self.lambda, self.mu, self.r, self.y, h);
                if err <= self.rtol || h.abs() < 1e-14 {
                    self.r += h;
                    self.y = ynew;
                    let grow = (self.rtol / err.max(1e-300)).powf(0.2).min(4.0).max(0.2);
                    self.h = h * (0.9 * grow).max(0.2);
                    break;
                }
                h *= 0.5 * (self.rtol / err).powf(0.25).max(0.2);
            }
        }
    }
}

/// Series start near r = 0: U = s + a r^2 + b r^4 + O(r^6).
fn series_start(dim: usize, lambda: f64, mu: f64, s: f64, r0: f64) -> [f64; 2] {
    let n = dim as f64;
    let a = (lambda * s - mu * s * s * s) / (2.0 * n);
    let b = (lambda - 3.0 * mu * s * s) * a / (4.0 * (n + 2.0));
    [s + a * r0 * r0 + b * r0.powi(4), 2.0 * a * r0 + 4.0 * b * r0.powi(3)]
}

/// Classify a shooting height: integrate until zero crossing, upward turn or
/// escape above 10 U(0).
fn classify(dim: usize, lambda: f64, mu: f64, s: f64, r_max: f64) -> Shot {
    let sq = lambda.sqrt();
    let r0 = 1e-4 / sq;
    let y0 = series_start(dim, lambda, mu, s, r0);
    if y0[1] >= 0.0 {
        return Shot::Undershoot;
    }
    let mut it = Integrator { dim, lambda, mu, r: r0, y: y0, h: 1e-3 / sq, rtol: SHOOT_RTOL };
    let step = 0.05 / sq;
    let mut r = r0;
    while r < r_max {
        r = (r + step).min(r_max);
        it.advance_to(r);
        if it.y[0] <= 0.0 {
            return Shot::Overshoot;
        }
        if it.y[1] >= 0.0 || it.y[0] > 10.0 * s {
            return Shot::Undershoot;
        }
    }
    Shot::Undershoot
}

/// Graded radial grid: geometric refinement near zero, two uniform zones
/// beyond, everything in units of 1/sqrt(lambda). About 4000 nodes.
fn build_grid(lambda: f64) -> Vec<f64> {
    let sq = lambda.sqrt();
    let mut r = vec![0.0];
    let n_geo = 400;
    let r_lo = 1e-3 / sq;
    let r_mid = 1.0 / sq;
    let ratio = (r_mid / r_lo).powf(1.0 / (n_geo as f64 - 1.0));
    let mut x = r_lo;
    for _ in 0..n_geo {
        r.push(x);
        x *= ratio;
    }
    let h1 = 0.012 / sq;
    let mut x = r_mid + h1;
    while x < 20.0 / sq {
        r.push(x);
        x += h1;
    }
    let h2 = 0.03 / sq;
    let mut x = 20.0 / sq;
    while x <= GRID_END / sq + 1e-12 {
        r.push(x);
        x += h2;
    }
    r
}

/// Solve the radial ground-state ODE by shooting on U(0), with the far tail
/// produced by a stable inward integration matched at `MATCH_RADIUS`.
pub fn solve_ground_state(dim: usize, lambda: f64, mu: f64, tol: f64) -> Result<RadialProfile> {
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidInput(format!("dimension {dim} not in 1..=3")));
    }
    if lambda <= 0.0 || mu <= 0.0 {
        return Err(Error::InvalidInput("lambda and mu must be positive".into()));
    }
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::InvalidInput(format!("tol {tol} outside (0, 1e-4]")));
    }
    let sq = lambda.sqrt();
    let height = (lambda / mu).sqrt();
    let (mut lo, mut hi) = (HEIGHT_BRACKET.0 * height, HEIGHT_BRACKET.1 * height);
    let r_shoot = 16.0 / sq;
    if classify(dim, lambda, mu, lo, r_shoot) != Shot::Undershoot
        || classify(dim, lambda, mu, hi, r_shoot) != Shot::Overshoot
    {
        return Err(Error::NoDecayingBranch { lo, hi });
    }
    // bisect to machine precision in the height
    for _ in 0..70 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match classify(dim, lambda, mu, mid, r_shoot) {
            Shot::Overshoot => hi = mid,
            Shot::Undershoot => lo = mid,
        }
    }
    let s = 0.5 * (lo + hi);

    // outward pass recording grid nodes up to the matching radius
    let grid = build_grid(lambda);
    let r_match = MATCH_RADIUS / sq;
    let r0 = 1e-4 / sq;
    let mut u = vec![s];
    let mut du = vec![0.0];
    let mut it = Integrator {
        dim,
        lambda,
        mu,
        r: r0,
        y: series_start(dim, lambda, mu, s, r0),
        h: 1e-3 / sq,
        rtol: SHOOT_RTOL,
    };
    let mut i_match = grid.len() - 1;
    for (i, &rk) in grid.iter().enumerate().skip(1) {
        if rk > r_match {
            i_match = i;
            break;
        }
        if rk < r0 {
            let y = series_start(dim, lambda, mu, s, rk);
            u.push(y[0]);
            du.push(y[1]);
            continue;
        }
        it.advance_to(rk);
        u.push(it.y[0]);
        du.push(it.y[1]);
        i_match = i;
    }

    // inward pass from the asymptotic seed, matched by amplitude
    let m = (dim as f64 - 1.0) / 2.0;
    let r_far = grid[grid.len() - 1];
    let bessel = 1.0 + (dim as f64 - 1.0) * (dim as f64 - 3.0) / (8.0 * sq * r_far);
    let seed_u = (-sq * r_far).exp() * r_far.powf(-m) * bessel;
    let seed_du = seed_u * (-sq - m / r_far - 0.0); // next order absorbed by matching
    let mut inward = Integrator {
        dim,
        lambda,
        mu,
        r: r_far,
        y: [seed_u, seed_du],
        h: -1e-2 / sq,
        rtol: SHOOT_RTOL,
    };
    let mut tail_u = Vec::new();
    let mut tail_du = Vec::new();
    for &rk in grid[i_match..].iter().rev() {
        inward.advance_to(rk);
        tail_u.push(inward.y[0]);
        tail_du.push(inward.y[1]);
    }
    tail_u.reverse();
    tail_du.reverse();
    // scale so the amplitudes agree at the matching node, then check that the
    // logarithmic derivatives agree there (they must, if shooting converged)
    let u_out_match = {
        let mut probe = it;
        probe.advance_to(grid[i_match]);
        probe.y
    };
    let scale = u_out_match[0] / tail_u[0];
    let dlog_out = u_out_match[1] / u_out_match[0];
    let dlog_in = tail_du[0] / tail_u[0];
    let dlog_err = ((dlog_out - dlog_in) / sq).abs();
    if dlog_err > 1e-5 {
        return Err(Error::ToleranceNotReached { achieved: dlog_err, required: 1e-5 });
    }
    for (uu, dd) in tail_u.iter_mut().zip(tail_du.iter_mut()) {
        *uu *= scale;
        *dd *= scale;
    }
    u.extend_from_slice(&tail_u);
    du.extend_from_slice(&tail_du);
    let r = grid;
    debug_assert_eq!(r.len(), u.len());

    // tail switch radius and decay-constant fit
    let u0 = u[0];
    let i_tail = u
        .iter()
        .position(|&v| v < TAIL_CUTOFF * u0)
        .unwrap_or(r.len() - 1);
    let r_tail = r[i_tail];
    let fit_lo = 0.7 * r_tail;
    let mut acc = 0.0;
    let mut cnt = 0usize;
    for k in 0..=i_tail {
        if r[k] >= fit_lo && u[k] > 0.0 {
            acc += u[k].ln() + m * r[k].ln() + sq * r[k];
            cnt += 1;
        }
    }
    if cnt == 0 {
        return Err(Error::NoDecayingBranch { lo, hi });
    }
    let c0 = (acc / cnt as f64).exp();

    // certified interpolant defect: Hermite second derivative at segment
    // midpoints against the ODE right-hand side; the ceiling scales with the
    // size of the equation terms
    let prof = RadialProfile { dim, lambda, mu, r, u, du, r_tail, c0, resid_tol: 0.0 };
    let defect = prof.max_defect();
    let defect_ceiling = 2e-4 * (lambda * u0 + mu * u0 * u0 * u0);
    if defect > defect_ceiling {
        return Err(Error::ToleranceNotReached { achieved: defect, required: defect_ceiling });
    }
    let mut prof = prof;
    prof.resid_tol = defect;
    prof.validate()?;
    Ok(prof)
}

impl RadialProfile {
    /// Grid segment index such that r is in [r[k], r[k+1]].
    #[inline]
    fn segment(&self, r: f64) -> usize {
        match self.r.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(k) => k.min(self.r.len() - 2),
            Err(k) => k.saturating_sub(1).min(self.r.len() - 2),
        }
    }

    /// Evaluate the profile: cubic Hermite on the grid up to `r_tail`, the
    /// decay law beyond.
    pub fn eval(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        if r > self.r_tail {
            return self.tail(r);
        }
        let k = self.segment(r);
        let (h, t) = (self.r[k + 1] - self.r[k], (r - self.r[k]) / (self.r[k + 1] - self.r[k]));
        let (h00, h10, h01, h11) = hermite_basis(t);
        h00 * self.u[k] + h10 * h * self.du[k] + h01 * self.u[k + 1] + h11 * h * self.du[k + 1]
    }

    /// Evaluate the radial derivative U'(r).
    pub fn eval_deriv(&self, r: f64) -> f64 {
        if r > self.r_tail {
            let m = (self.dim as f64 - 1.0) / 2.0;
            return self.tail(r) * (-self.lambda.sqrt() - m / r);
        }
        let k = self.segment(r);
        let h = self.r[k + 1] - self.r[k];
        let t = (r - self.r[k]) / h;
        // Hermite on (U', U'') with U'' from the ODE at the nodes
        let dd0 = self.ode_second(k);
        let dd1 = self.ode_second(k + 1);
        let (h00, h10, h01, h11) = hermite_basis(t);
        h00 * self.du[k] + h10 * h * dd0 + h01 * self.du[k + 1] + h11 * h * dd1
    }

    #[inline]
    fn tail(&self, r: f64) -> f64 {
        let m = (self.dim as f64 - 1.0) / 2.0;
        self.c0 * (-self.lambda.sqrt() * r).exp() * r.powf(-m)
    }

    /// U'' at node k from the ODE (regularized at the origin by the series).
    #[inline]
    fn ode_second(&self, k: usize) -> f64 {
        let (r, u, du) = (self.r[k], self.u[k], self.du[k]);
        if k == 0 {
            return (self.lambda * u - self.mu * u * u * u) / self.dim as f64;
        }
        self.lambda * u - self.mu * u * u * u - (self.dim as f64 - 1.0) / r * du
    }

    /// Max interpolant defect |p'' - f(r, p, p')| at segment midpoints.
    fn max_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 1..self.r.len() - 1 {
            let (r0, r1) = (self.r[k], self.r[k + 1]);
            let h = r1 - r0;
            let rm = 0.5 * (r0 + r1);
            // Hermite second derivative at the segment midpoint
            let p2 = (self.du[k + 1] - self.du[k]) / h;
            let um = self.eval(rm.min(self.r_tail));
            let dum = {
                let (h00, h10, h01, h11) = hermite_basis_deriv(0.5);
                (h00 * self.u[k] + h01 * self.u[k + 1]) / h + h10 * self.du[k] + h11 * self.du[k + 1]
            };
            let f = self.lambda * um - self.mu * um.powi(3) - (self.dim as f64 - 1.0) / rm * dum;
            worst = worst.max((p2 - f).abs());
        }
        worst
    }

    /// Check the structural invariants of the type.
    pub fn validate(&self) -> Result<()> {
        for k in 1..self.u.len() {
            if !(self.u[k] > 0.0) || self.u[k] >= self.u[k - 1] {
                return Err(Error::InvalidInput(format!(
                    "profile not positive strictly decreasing at node {k}"
                )));
            }
        }
        let m = (self.dim as f64 - 1.0) / 2.0;
        let sq = self.lambda.sqrt();
        for (k, &r) in self.r.iter().enumerate() {
            if r >= self.r_tail && r > 0.0 {
                let plateau = self.u[k] * (sq * r).exp() * r.powf(m);
                if ((plateau - self.c0) / self.c0).abs() > 0.02 {
                    return Err(Error::InvalidInput(format!(
                        "decay law violated at r = {r}: plateau {plateau} vs c0 {}",
                        self.c0
                    )));
                }
            }
        }
        Ok(())
    }

    /// Plateau sequence U(r_k) exp(sq r_k) r_k^m over the trailing decade of
    /// the grid; returns (min, max) of the sequence.
    pub fn decay_plateau(&self) -> (f64, f64) {
        let r_end = *self.r.last().unwrap();
        let sq = self.lambda.sqrt();
        let m = (self.dim as f64 - 1.0) / 2.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for (k, &r) in self.r.iter().enumerate() {
            if r >= 0.1 * r_end {
                let p = self.u[k] * (sq * r).exp() * r.powf(m);
                min = min.min(p);
                max = max.max(p);
            }
        }
        (min, max)
    }

    /// L2 mass of the profile over R^N by the trapezoid rule in r.
    pub fn mass_l2(&self) -> f64 {
        let n = self.dim as f64;
        let surface = match self.dim {
            1 => 2.0,
            2 => 2.0 * std::f64::consts::PI,
            _ => 4.0 * std::f64::consts::PI,
        };
        let mut acc = 0.0;
        for k in 0..self.r.len() - 1 {
            let (r0, r1) = (self.r[k], self.r[k + 1]);
            let f0 = self.u[k] * self.u[k] * r0.powf(n - 1.0);
            let f1 = self.u[k + 1] * self.u[k + 1] * r1.powf(n - 1.0);
            acc += 0.5 * (f0 + f1) * (r1 - r0);
        }
        surface * acc
    }
}

#[inline]
fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )
}

#[inline]
fn hermite_basis_deriv(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    (
        6.0 * t2 - 6.0 * t,
        3.0 * t2 - 4.0 * t + 1.0,
        -6.0 * t2 + 6.0 * t,
        3.0 * t2 - 2.0 * t,
    )
}

// ---------------------------------------------------------------------------
// spectral nondegeneracy check
// ---------------------------------------------------------------------------

/// Result of discretizing the linearized operator -Delta + lambda - 3 mu U^2
/// in the even (angular mode 0) and translation (angular mode 1) sectors.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    /// Smallest-magnitude eigenvalue in the even sector.
    pub mode0_eig: f64,
    /// Smallest-magnitude eigenvalue in mode 1 (the translation kernel).
    pub mode1_eig: f64,
    /// Cosine similarity between the mode-1 eigenfunction and U'(r).
    pub kernel_cosine: f64,
}

/// Effective radial potential of the linearized operator in angular mode m.
fn linearized_potential(p: &RadialProfile, mode: usize, r: f64) -> f64 {
    let u = p.eval(r);
    let centrifugal = if p.dim == 1 {
        0.0
    } else {
        (mode * (mode + p.dim - 2)) as f64 / (r * r)
    };
    p.lambda - 3.0 * p.mu * u * u + centrifugal
}

/// Smallest-magnitude eigenvalues of the linearized operator around the
/// ground state, in the even and the translation sector.
pub fn kernel_check(p: &RadialProfile) -> Result<SpectralReport> {
    let sq = p.lambda.sqrt();
    let r_max = 30.0 / sq;
    let n = 3000usize;
    let h = r_max / n as f64;

    let assemble = |mode: usize| -> (Vec<f64>, Vec<f64>) {
        // flux-form discretization of -(r^{N-1} u')'/r^{N-1} + q(r) u on
        // half-offset nodes r_j = (j+1/2) h, symmetrized by w = r^{N-1}
        let nu = (p.dim - 1) as f64;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n - 1];
        for j in 0..n {
            let r = (j as f64 + 0.5) * h;
            let w = r.powf(nu);
            let w_plus = ((j as f64 + 1.0) * h).powf(nu);
            let w_minus = (j as f64 * h).powf(nu);
            let mut d = (w_plus + w_minus) / (w * h * h);
            // mode parity at the origin: even -> mirror (Neumann), odd ->
            // antimirror (Dirichlet); only the N=1 operator has flux there
            if j == 0 {
                if p.dim == 1 {
                    d = match mode {
                        0 => (w_plus - 0.0) / (w * h * h) + 0.0, // u_{-1}=u_0: flux cancels
                        _ => (w_plus + 2.0) / (w * h * h),       // u_{-1}=-u_0
                    };
                } else {
                    d = w_plus / (w * h * h);
                }
            }
            diag[j] = d + linearized_potential(p, mode, r);
            if j + 1 < n {
                let wf = w_plus;
                let wj = ((j as f64 + 0.5) * h).powf(nu);
                let wj1 = ((j as f64 + 1.5) * h).powf(nu);
                off[j] = -wf / (h * h * (wj * wj1).sqrt());
            }
        }
        (diag, off)
    };

    let (d0, o0) = assemble(0);
    let (d1, o1) = assemble(1);
    let mode0 = smallest_magnitude_eig(&d0, &o0)?;
    let mode1 = smallest_magnitude_eig(&d1, &o1)?;

    // eigenvector of the mode-1 eigenvalue by inverse iteration, compared
    // against U'(r) (the translation kernel)
    let v = inverse_iteration(&d1, &o1, mode1)?;
    let mut dot = 0.0;
    let mut nv = 0.0;
    let mut nu_ = 0.0;
    let nuexp = (p.dim - 1) as f64;
    for (j, &vj) in v.iter().enumerate() {
        let r = (j as f64 + 0.5) * h;
        // undo the symmetrizing weight r^{(N-1)/2}
        let uprime = p.eval_deriv(r) * r.powf(nuexp / 2.0);
        dot += vj * uprime;
        nv += vj * vj;
        nu_ += uprime * uprime;
    }
    let cosine = (dot / (nv.sqrt() * nu_.sqrt())).abs();

    if mode0.abs() < 10.0 * mode1.abs() {
        return Err(Error::DegenerateGroundState { mode0, mode1 });
    }
    Ok(SpectralReport { mode0_eig: mode0, mode1_eig: mode1, kernel_cosine: cosine })
}

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x,
/// by the Sturm sequence.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for j in 1..diag.len() {
        let denom = if d.abs() < 1e-300 { 1e-300f64.copysign(d) } else { d };
        d = diag[j] - x - off[j - 1] * off[j - 1] / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalue of the symmetric tridiagonal closest to zero.
fn smallest_magnitude_eig(diag: &[f64], off: &[f64]) -> Result<f64> {
    let bound = diag
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            let mut b = d.abs();
            if j > 0 {
                b += off[j - 1].abs();
            }
            if j < off.len() {
                b += off[j].abs();
            }
            b
        })
        .fold(0.0f64, f64::max);
    let below_zero = sturm_count(diag, off, 0.0);
    let eig_at = |k: usize| -> f64 {
        // k-th eigenvalue (0-based) by bisection
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if sturm_count(diag, off, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-13 * bound.max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    };
    let n = diag.len();
    let mut best = f64::INFINITY;
    // nearest eigenvalue below zero (index below_zero-1) and above (below_zero)
    if below_zero > 0 {
        let e = eig_at(below_zero - 1);
        if e.abs() < best.abs() || best.is_infinite() {
            best = e;
        }
    }
    if below_zero < n {
        let e = eig_at(below_zero);
        if e.abs() < best.abs() {
            best = e;
        }
    }
    if best.is_infinite() {
        return Err(Error::EigensolverFailure("empty spectrum window".into()));
    }
    Ok(best)
}

/// Inverse iteration for the eigenvector at a known eigenvalue of a
/// symmetric tridiagonal matrix.
fn inverse_iteration(diag: &[f64], off: &[f64], eig: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    let shift = eig + 1e-10 * (1.0 + eig.abs());
    let mut v = vec![1.0; n];
    for sweep in 0..6 {
        // Thomas solve (A - shift I) w = v
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = diag[0] - shift;
        if denom.abs() < 1e-300 {
            denom = 1e-300;
        }
        c[0] = off.first().copied().unwrap_or(0.0) / denom;
        d[0] = v[0] / denom;
        for j in 1..n {
            let oj = off[j - 1];
            let mut m = diag[j] - shift - oj * c[j - 1];
            if m.abs() < 1e-300 {
                m = 1e-300;
            }
            c[j] = if j < n - 1 { off[j] / m } else { 0.0 };
            d[j] = (v[j] - oj * d[j - 1]) / m;
        }
        let mut w = vec![0.0; n];
        w[n - 1] = d[n - 1];
        for j in (0..n - 1).rev() {
            w[j] = d[j] - c[j] * w[j + 1];
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::EigensolverFailure("inverse iteration diverged".into()));
        }
        for (vj, wj) in v.iter_mut().zip(&w) {
            *vj = wj / norm;
        }
        if sweep >= 2 {
            break;
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soliton_matches_sech() {
        let p = solve_ground_state(1, 1.0, 1.0, 1e-8).unwrap();
        let exact = |r: f64| 2f64.sqrt() / r.cosh();
        let mut worst = 0.0f64;
        let mut r = 0.0;
        while r <= 15.0 {
            worst = worst.max((p.eval(r) - exact(r)).abs());
            r += 0.0173;
        }
        assert!(worst < 1e-8, "max error {worst:.3e}");
        assert!((p.u[0] - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn scaling_identity_n2() {
        let base = solve_ground_state(2, 1.0, 1.0, 1e-8).unwrap();
        let scaled = solve_ground_state(2, 4.0, 1.0, 1e-8).unwrap();
        // U_{4,1}(r) = 2 U_{1,1}(2 r)
        for &r in &[0.0, 0.3, 1.1, 2.7, 4.9] {
            let lhs = scaled.eval(r);
            let rhs = 2.0 * base.eval(2.0 * r);
            assert!(
                ((lhs - rhs) / rhs).abs() < 1e-6,
                "r={r}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn central_height_n2() {
        // frozen from an independent collocation solve (see tests/oracles.rs)
        let p = solve_ground_state(2, 1.0, 1.0, 1e-8).unwrap();
        assert!(((p.u[0] - 2.2062008647) / 2.2062008647).abs() < 1e-7);
    }

    #[test]
    fn tail_is_continuous_at_switch() {
        for dim in 1..=3 {
            let p = solve_ground_state(dim, 1.0, 1.0, 1e-8).unwrap();
            let below = p.eval(p.r_tail - 1e-9);
            let above = p.eval(p.r_tail + 1e-9);
            assert!(
                ((below - above) / below).abs() < 0.01,
                "N={dim}: {below} vs {above}"
            );
        }
    }

    #[test]
    fn decay_plateau_tight() {
        for dim in 2..=3 {
            let p = solve_ground_state(dim, 1.0, 1.0, 1e-8).unwrap();
            let (lo, hi) = p.decay_plateau();
            assert!((hi - lo) / lo < 0.02, "N={dim}: spread {}", (hi - lo) / lo);
        }
    }

    #[test]
    fn log_derivative_tends_to_rate() {
        // the standard decay result carries the sqrt(lambda) factor (the
        // limit is -sqrt(lambda), not -1); subtract the geometric -m/r part
        let p = solve_ground_state(2, 2.25, 1.0, 1e-8).unwrap();
        let r = 0.9 * p.r_tail;
        let ratio = p.eval_deriv(r) / p.eval(r) + 0.5 / r;
        assert!((ratio + 1.5).abs() < 0.01, "U'/U + m/r = {ratio}, want -1.5");
    }

    #[test]
    fn mass_positive_finite() {
        let p = solve_ground_state(2, 1.0, 1.0, 1e-8).unwrap();
        let m = p.mass_l2();
        assert!(m.is_finite() && m > 0.0);
        // 2 b = ||U||^2 with b = 5.8504 (independent radial quadrature)
        assert!((m - 11.7009).abs() < 1e-2, "mass {m}");
    }

    #[test]
    fn kernel_check_n2() {
        let p = solve_ground_state(2, 1.0, 1.0, 1e-8).unwrap();
        let rep = kernel_check(&p).unwrap();
        assert!(rep.mode1_eig.abs() <= 1e-4, "mode1 {:e}", rep.mode1_eig);
        assert!(rep.mode0_eig.abs() >= 0.1, "mode0 {}", rep.mode0_eig);
    }

    #[test]
    fn kernel_is_translation_n1() {
        let p = solve_ground_state(1, 1.0, 1.0, 1e-8).unwrap();
        let rep = kernel_check(&p).unwrap();
        assert!(rep.kernel_cosine >= 0.999, "cosine {}", rep.kernel_cosine);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_ground_state(4, 1.0, 1.0, 1e-6).is_err());
        assert!(solve_ground_state(2, -1.0, 1.0, 1e-6).is_err());
        assert!(solve_ground_state(2, 1.0, 1.0, 1e-3).is_err());
    }
}
