//! Problem data: potentials, coupling matrices, the full coupled-system
//! specification and the peak configuration on the fixed rays.

use crate::error::Error;
use crate::Result;

/// Even radial polynomial potential v0 + v2 |x|^2 + v4 |x|^4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoly {
    pub v0: f64,
    pub v2: f64,
    pub v4: f64,
}

impl RadialPoly {
    pub fn constant(v0: f64) -> Self {
        Self { v0, v2: 0.0, v4: 0.0 }
    }

    #[inline]
    pub fn eval_r(&self, r: f64) -> f64 {
        self.v0 + self.v2 * r * r + self.v4 * r.powi(4)
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.eval_r((x * x + y * y).sqrt())
    }
}

/// Even anisotropic quadratic potential w0 + cx x1^2 + cy x2^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisoQuad {
    pub w0: f64,
    pub cx: f64,
    pub cy: f64,
}

impl AnisoQuad {
    pub fn constant(w0: f64) -> Self {
        Self { w0, cx: 0.0, cy: 0.0 }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.w0 + self.cx * x * x + self.cy * y * y
    }
}

/// Interaction type of the coupled system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// Bilinear interaction u_i u_j.
    LotkaVolterra,
    /// Cubic interaction u_i u_j^2.
    GrossPitaevskii,
}

/// Off-diagonal interaction coefficients. In Lotka-Volterra mode these are
/// the a_ij; in Gross-Pitaevskii mode they are read as the beta_ij.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingMatrix {
    pub a12: f64,
    pub a13: f64,
    pub a21: f64,
    pub a23: f64,
    pub a31: f64,
    pub a32: f64,
}

impl CouplingMatrix {
    pub fn zero() -> Self {
        Self { a12: 0.0, a13: 0.0, a21: 0.0, a23: 0.0, a31: 0.0, a32: 0.0 }
    }
}

/// Number of active equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    /// One quantum component and two concentrating components.
    ThreeComponent,
    /// One quantum component and a single concentrating component.
    TwoComponent,
}

/// Full specification of the coupled system.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub dim: usize,
    pub eps: f64,
    pub beta: f64,
    pub coupling: Coupling,
    pub kind: SystemKind,
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub cpl: CouplingMatrix,
    pub v_pot: RadialPoly,
    pub w2: AnisoQuad,
    pub w3: AnisoQuad,
}

impl ProblemSpec {
    /// Structural checks that do not need the limit profile: positivity of
    /// the potentials on a computational box of half-side `box_half` and the
    /// repulsion signs in Lotka-Volterra mode.
    pub fn validate(&self, box_half: f64) -> Result<()> {
        if !(2..=3).contains(&self.dim) {
            return Err(Error::InvalidInput(format!("dimension {} not in 2..=3", self.dim)));
        }
        if self.eps <= 0.0 {
            return Err(Error::InvalidInput("eps must be positive".into()));
        }
        if self.mu1 <= 0.0 || self.mu2 <= 0.0 || self.mu3 <= 0.0 {
            return Err(Error::InvalidInput("mu coefficients must be positive".into()));
        }
        // inf over the box of an even quadratic/quartic is attained at a
        // corner or at the origin
        let corners = [(0.0, 0.0), (box_half, 0.0), (0.0, box_half), (box_half, box_half)];
        for &(x, y) in &corners {
            if self.v_pot.eval(x, y) <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "V not positive on the computational box at ({x}, {y})"
                )));
            }
            if self.w2.eval(x, y) <= 0.0 || self.w3.eval(x, y) <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "W_i not positive on the computational box at ({x}, {y})"
                )));
            }
        }
        if self.coupling == Coupling::LotkaVolterra {
            if self.cpl.a21 >= 0.0 {
                return Err(Error::InvalidInput("Lotka-Volterra mode needs a21 < 0".into()));
            }
            if self.kind == SystemKind::ThreeComponent && self.cpl.a31 >= 0.0 {
                return Err(Error::InvalidInput("Lotka-Volterra mode needs a31 < 0".into()));
            }
        }
        Ok(())
    }
}

/// Peak configuration on the fixed rays: component 2 concentrates at
/// +-rho2 e1, component 3 at +-rho3 e2.
#[derive(Debug, Clone, Copy)]
pub struct PeakConfiguration {
    pub rho2: f64,
    pub rho3: f64,
    pub eps: f64,
}

impl PeakConfiguration {
    pub fn new(rho2: f64, rho3: f64, eps: f64) -> Result<Self> {
        if rho2 <= 0.0 || rho3 < 0.0 || eps <= 0.0 {
            return Err(Error::InvalidInput("need rho2 > 0, rho3 >= 0, eps > 0".into()));
        }
        let cfg = Self { rho2, rho3, eps };
        if cfg.rho2 / eps < 5.0 {
            return Err(Error::PeaksTooClose { component: 2, ratio: cfg.rho2 / eps });
        }
        if rho3 > 0.0 && rho3 / eps < 5.0 {
            return Err(Error::PeaksTooClose { component: 3, ratio: rho3 / eps });
        }
        Ok(cfg)
    }

    /// |rho_eps| = sqrt(rho2^2 + rho3^2).
    pub fn rho_norm(&self) -> f64 {
        (self.rho2 * self.rho2 + self.rho3 * self.rho3).sqrt()
    }

    /// Difference vector (P3 - P2)/eps in the stretched variables.
    pub fn zeta(&self) -> [f64; 2] {
        [-self.rho2 / self.eps, self.rho3 / self.eps]
    }

    /// Sum vector (P3 + P2)/eps in the stretched variables.
    pub fn xi(&self) -> [f64; 2] {
        [self.rho2 / self.eps, self.rho3 / self.eps]
    }

    /// Mutual separation |zeta| = |xi| = |rho_eps|/eps.
    pub fn separation(&self) -> f64 {
        self.rho_norm() / self.eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_spec() -> ProblemSpec {
        ProblemSpec {
            dim: 2,
            eps: 0.05,
            beta: 0.0,
            coupling: Coupling::LotkaVolterra,
            kind: SystemKind::TwoComponent,
            mu1: 1.0,
            mu2: 1.0,
            mu3: 1.0,
            cpl: CouplingMatrix { a21: -0.05, ..CouplingMatrix::zero() },
            v_pot: RadialPoly { v0: 1.0, v2: 0.1, v4: 0.0 },
            w2: AnisoQuad::constant(0.13),
            w3: AnisoQuad::constant(0.13),
        }
    }

    #[test]
    fn validates_demo_spec() {
        demo_spec().validate(40.0).unwrap();
    }

    #[test]
    fn rejects_attractive_first_coupling() {
        let mut s = demo_spec();
        s.cpl.a21 = 0.1;
        assert!(s.validate(40.0).is_err());
    }

    #[test]
    fn peak_geometry() {
        let p = PeakConfiguration::new(0.3, 0.4, 0.05).unwrap();
        assert!((p.rho_norm() - 0.5).abs() < 1e-15);
        assert!((p.separation() - 10.0).abs() < 1e-12);
        let z = p.zeta();
        let x = p.xi();
        let nz = (z[0] * z[0] + z[1] * z[1]).sqrt();
        let nx = (x[0] * x[0] + x[1] * x[1]).sqrt();
        assert!((nz - nx).abs() < 1e-12 && (nz - p.separation()).abs() < 1e-12);
    }

    #[test]
    fn rejects_close_peaks() {
        assert!(PeakConfiguration::new(0.2, 0.2, 0.05).is_err());
    }
}
