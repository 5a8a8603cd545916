//! Closed-form leading-order laws for cross-peak interaction integrals and
//! the cross-peak error scale, together with ratio-convergence sweeps that
//! compare them against direct quadrature.

use crate::error::Error;
use crate::profile::RadialProfile;
use crate::quad;
use crate::Result;

/// Exponential-polynomial decay class u(x) ~ |x|^power e^{-rate |x|}.
#[derive(Debug, Clone, Copy)]
pub struct DecayClass {
    pub power: f64,
    pub rate: f64,
}

impl DecayClass {
    pub fn new(power: f64, rate: f64) -> Result<Self> {
        if rate <= 0.0 {
            return Err(Error::InvalidDecayClass { b: rate });
        }
        Ok(Self { power, rate })
    }

    /// Decay class of a ground-state profile (power -(N-1)/2, rate sqrt(lambda)).
    pub fn of_profile(p: &RadialProfile) -> Self {
        Self { power: -((p.dim as f64 - 1.0) / 2.0), rate: p.lambda.sqrt() }
    }

    /// Decay class of the k-th power of a profile.
    pub fn of_profile_power(p: &RadialProfile, k: u32) -> Self {
        let base = Self::of_profile(p);
        Self { power: base.power * k as f64, rate: base.rate * k as f64 }
    }
}

/// Which branch of the convolution estimate produced the leading form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapCase {
    /// Distinct rates: the slower-decaying factor wins.
    DistinctRates,
    /// Equal rates, power above the threshold -(N+1)/2.
    EqualRatesPower,
    /// Equal rates at the threshold: logarithmic correction.
    EqualRatesLog,
    /// Equal rates below the threshold.
    EqualRatesPlain,
}

/// Exact-decimal equality guard for rate comparisons (the regime tables key
/// on user-supplied exact values, never on computed floats).
#[inline]
fn rates_equal(b: f64, bp: f64) -> bool {
    (b - bp).abs() <= 1e-12 * b.abs().max(bp.abs())
}

/// Leading-order form (up to a constant) of the overlap of two decaying
/// radial factors at separation `sep`.
pub fn acr_leading(u: DecayClass, v: DecayClass, dim: usize, sep: f64) -> Result<(f64, OverlapCase)> {
    if u.rate <= 0.0 {
        return Err(Error::InvalidDecayClass { b: u.rate });
    }
    if v.rate <= 0.0 {
        return Err(Error::InvalidDecayClass { b: v.rate });
    }
    if !rates_equal(u.rate, v.rate) {
        // slower rate wins; its own power carries over
        let lead = if u.rate < v.rate { u } else { v };
        return Ok(((-lead.rate * sep).exp() * sep.powf(lead.power), OverlapCase::DistinctRates));
    }
    // equal rates: order so that a >= a'
    let (a, ap) = if u.power >= v.power { (u.power, v.power) } else { (v.power, u.power) };
    let b = u.rate;
    let thresh = -((dim as f64 + 1.0) / 2.0);
    let (val, case) = if (ap - thresh).abs() <= 1e-12 {
        ((-b * sep).exp() * sep.powf(a) * sep.ln(), OverlapCase::EqualRatesLog)
    } else if ap > thresh {
        ((-b * sep).exp() * sep.powf(a + ap + (dim as f64 + 1.0) / 2.0), OverlapCase::EqualRatesPower)
    } else {
        ((-b * sep).exp() * sep.powf(a), OverlapCase::EqualRatesPlain)
    };
    Ok((val, case))
}

/// Case selector for the gradient-coupled interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaCase {
    /// s sqrt(lambda_j) < t sqrt(lambda_i): the shifted factor sets the rate.
    ShiftedSlower,
    /// Equal rates, t below the dimensional threshold (N+1)/(N-1).
    EqualPower,
    /// Equal rates at the threshold: logarithmic correction.
    EqualLog,
    /// Equal rates above the threshold.
    EqualPlain,
    /// s sqrt(lambda_j) > t sqrt(lambda_i): the differentiated factor sets it.
    CoreSlower,
}

/// Signed leading-order form (up to a positive constant) of the
/// gradient-coupled interaction of U_{lambda_j}^s shifted by zeta against
/// d/dx_axis U_{lambda_i}^t.
pub fn theta_leading(
    s: f64,
    t: f64,
    lambda_i: f64,
    lambda_j: f64,
    dim: usize,
    zeta: &[f64],
    axis: usize,
) -> Result<(f64, ThetaCase)> {
    if s < 1.0 || t < 1.0 {
        return Err(Error::InvalidCase { s, t });
    }
    let sep = zeta.iter().map(|z| z * z).sum::<f64>().sqrt();
    let dir = zeta[axis] / sep;
    let nm = dim as f64 - 1.0;
    // compare s sqrt(l_j) with t sqrt(l_i) through the exact products
    let lhs = s * s * lambda_j;
    let rhs = t * t * lambda_i;
    if (lhs - rhs).abs() <= 1e-12 * lhs.max(rhs) {
        let rate = s * lambda_j.sqrt();
        let thresh = (dim as f64 + 1.0) / (dim as f64 - 1.0);
        let (val, case) = if (t - thresh).abs() <= 1e-12 {
            (dir * (-rate * sep).exp() * sep.powf(-s * nm / 2.0) * sep.ln(), ThetaCase::EqualLog)
        } else if t < thresh {
            (
                dir * (-rate * sep).exp() * sep.powf(-nm * (s + t) / 2.0 + (dim as f64 + 1.0) / 2.0),
                ThetaCase::EqualPower,
            )
        } else {
            (dir * (-rate * sep).exp() * sep.powf(-s * nm / 2.0), ThetaCase::EqualPlain)
        };
        return Ok((val, case));
    }
    if lhs < rhs {
        let rate = s * lambda_j.sqrt();
        Ok((s * dir * (-rate * sep).exp() * sep.powf(-s * nm / 2.0), ThetaCase::ShiftedSlower))
    } else {
        let rate = t * lambda_i.sqrt();
        Ok((t * dir * (-rate * sep).exp() * sep.powf(-t * nm / 2.0), ThetaCase::CoreSlower))
    }
}

/// Cross-peak interaction scale: the L2 size of the product of two bump
/// families at mutual distance `ratio = |rho_eps| / eps`.
pub fn eta_epsilon(omega2: f64, omega3: f64, dim: usize, ratio: f64) -> f64 {
    assert!(omega2 > 0.0 && omega3 > 0.0 && ratio > 1.0);
    let m0 = omega2.min(omega3).sqrt();
    let equal = rates_equal(omega2, omega3);
    if !equal {
        (-m0 * ratio).exp() * ratio.powf(-(dim as f64 - 1.0) / 2.0)
    } else if dim == 2 {
        (-m0 * ratio).exp() * ratio.powf(-0.25)
    } else {
        (-m0 * ratio).exp() / ratio * ratio.ln().sqrt()
    }
}

/// One row of a ratio-convergence sweep.
#[derive(Debug, Clone)]
pub struct RatioRow {
    pub separation: f64,
    pub quadrature: f64,
    pub leading: f64,
    pub ratio: f64,
}

/// Interaction estimate at a single separation: quadrature value, the
/// asymptotic leading form, its case tag and the fitted prefactor.
#[derive(Debug, Clone)]
pub struct InteractionEstimate {
    pub value: f64,
    pub leading: f64,
    pub case: String,
    pub separation: f64,
    pub prefactor: f64,
}

/// Sweep the overlap of two profile powers over separations and report the
/// quadrature/leading ratios (the empirical check that the tilde relation
/// stabilizes).
pub fn overlap_ratio_sweep(
    u: &RadialProfile,
    pow_u: u32,
    v: &RadialProfile,
    pow_v: u32,
    separations: &[f64],
) -> Result<Vec<RatioRow>> {
    let cu = DecayClass::of_profile_power(u, pow_u);
    let cv = DecayClass::of_profile_power(v, pow_v);
    let mut rows = Vec::with_capacity(separations.len());
    for &sep in separations {
        let q = if pow_u == 1 && pow_v == 1 {
            quad::overlap_integral(u, v, &[sep, 0.0])?
        } else {
            overlap_power_integral(u, pow_u, v, pow_v, sep)?
        };
        let (lead, _) = acr_leading(cu, cv, u.dim, sep)?;
        rows.push(RatioRow { separation: sep, quadrature: q, leading: lead, ratio: q / lead });
    }
    Ok(rows)
}

/// Quadrature of the overlap of profile powers (used by the sweeps that need
/// u^p against v^q rather than plain profiles).
pub fn overlap_power_integral(
    u: &RadialProfile,
    pow_u: u32,
    v: &RadialProfile,
    pow_v: u32,
    sep: f64,
) -> Result<f64> {
    // piggyback on the theta machinery's box layout by direct midpoint here
    let dim = u.dim;
    let b_min = (u.lambda.sqrt() * pow_u as f64).min(v.lambda.sqrt() * pow_v as f64);
    let b_box = u.lambda.sqrt().min(v.lambda.sqrt());
    let _ = b_min;
    let w = 0.5 * sep + 25.0 / b_box;
    let d = 0.5 * sep;
    match dim {
        2 => {
            let f = |x: f64, y: f64| {
                u.eval(((x - d) * (x - d) + y * y).sqrt()).powi(pow_u as i32)
                    * v.eval(((x + d) * (x + d) + y * y).sqrt()).powi(pow_v as i32)
            };
            crate::quad::refine_box(&f, w, b_box)
        }
        _ => {
            let f = |z: f64, s: f64| {
                u.eval(((z - d) * (z - d) + s * s).sqrt()).powi(pow_u as i32)
                    * v.eval(((z + d) * (z + d) + s * s).sqrt()).powi(pow_v as i32)
            };
            crate::quad::refine_cylinder(&f, w, b_box)
        }
    }
}

/// Sweep the gradient-coupled interaction over separations along the first
/// axis and report quadrature/leading ratios.
pub fn theta_ratio_sweep(
    s: u32,
    t: u32,
    u_shifted: &RadialProfile,
    u_core: &RadialProfile,
    separations: &[f64],
) -> Result<Vec<RatioRow>> {
    let mut rows = Vec::with_capacity(separations.len());
    for &sep in separations {
        let zeta = if u_core.dim == 2 { vec![sep, 0.0] } else { vec![sep, 0.0, 0.0] };
        let q = quad::theta_integral(s, t, u_shifted, u_core, &zeta, 0)?;
        let (lead, _) = theta_leading(
            s as f64,
            t as f64,
            u_core.lambda,
            u_shifted.lambda,
            u_core.dim,
            &zeta,
            0,
        )?;
        rows.push(RatioRow { separation: sep, quadrature: q, leading: lead, ratio: q / lead });
    }
    Ok(rows)
}

/// Relative spread of the ratios over the trailing `k` rows of a sweep.
pub fn trailing_spread(rows: &[RatioRow], k: usize) -> f64 {
    let tail = &rows[rows.len().saturating_sub(k)..];
    let lo = tail.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let hi = tail.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    (hi - lo).abs() / lo.abs().max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acr_case_i_value() {
        let u = DecayClass::new(-0.5, 1.0).unwrap();
        let v = DecayClass::new(-0.5, 2.0).unwrap();
        let (val, case) = acr_leading(u, v, 2, 10.0).unwrap();
        assert_eq!(case, OverlapCase::DistinctRates);
        let expect = (-10.0f64).exp() * 10.0f64.powf(-0.5);
        assert!((val - expect).abs() < 1e-15 * expect.abs());
    }

    #[test]
    fn acr_case_ii_power_value() {
        let u = DecayClass::new(-0.5, 1.0).unwrap();
        let v = DecayClass::new(-0.5, 1.0).unwrap();
        let (val, case) = acr_leading(u, v, 2, 10.0).unwrap();
        assert_eq!(case, OverlapCase::EqualRatesPower);
        // a + a' + (N+1)/2 = -1/2 - 1/2 + 3/2 = 1/2
        let expect = (-10.0f64).exp() * 10.0f64.sqrt();
        assert!((val - expect).abs() < 1e-15 * expect.abs());
    }

    #[test]
    fn acr_case_ii_log_value() {
        let u = DecayClass::new(-0.5, 1.0).unwrap();
        let v = DecayClass::new(-1.5, 1.0).unwrap();
        let (val, case) = acr_leading(u, v, 2, 10.0).unwrap();
        assert_eq!(case, OverlapCase::EqualRatesLog);
        let expect = (-10.0f64).exp() * 10.0f64.powf(-0.5) * 10.0f64.ln();
        assert!((val - expect).abs() < 1e-15 * expect.abs());
    }

    #[test]
    fn acr_symmetric_under_swap() {
        let u = DecayClass::new(-0.7, 1.3).unwrap();
        let v = DecayClass::new(-0.7, 1.3).unwrap();
        let (a, _) = acr_leading(u, v, 3, 9.0).unwrap();
        let (b, _) = acr_leading(v, u, 3, 9.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn acr_rejects_bad_rate() {
        assert!(DecayClass::new(0.0, -1.0).is_err());
    }

    #[test]
    fn theta_case_i_value() {
        // s=1, t=2, lambda_j < 4 lambda_i, N=3: (zeta_l/|zeta|) e^{-sqrt(l_j) R} R^{-1}
        let r = 12.0;
        let (val, case) =
            theta_leading(1.0, 2.0, 1.0, 1.0, 3, &[r, 0.0, 0.0], 0).unwrap();
        assert_eq!(case, ThetaCase::ShiftedSlower);
        let expect = (-r).exp() / r;
        assert!((val - expect).abs() < 1e-15 * expect.abs());
    }

    #[test]
    fn theta_equal_rate_power_value() {
        // s=t=2, equal lambda, N=2: t < 3 so exponent -(N-1)(s+t)/2 + (N+1)/2 = -1/2
        let r = 10.0;
        let (val, case) = theta_leading(2.0, 2.0, 1.0, 1.0, 2, &[r, 0.0], 0).unwrap();
        assert_eq!(case, ThetaCase::EqualPower);
        let expect = (-2.0 * r).exp() * r.powf(-0.5);
        assert!((val - expect).abs() < 1e-15 * expect.abs());
    }

    #[test]
    fn theta_case_iii_value() {
        // s=2, t=1 with 2 sqrt(l_j) > sqrt(l_i): t (zeta_l/|zeta|) e^{-t sqrt(l_i) R} R^{-t(N-1)/2}
        let r = 11.0;
        let (val, case) =
            theta_leading(2.0, 1.0, 1.0, 1.0, 2, &[r, 0.0], 0).unwrap();
        assert_eq!(case, ThetaCase::CoreSlower);
        let expect = (-r).exp() * r.powf(-0.5);
        assert!((val - expect).abs() < 1e-15 * expect.abs());
    }

    #[test]
    fn theta_rejects_small_powers() {
        assert!(theta_leading(0.5, 2.0, 1.0, 1.0, 2, &[5.0, 0.0], 0).is_err());
    }

    #[test]
    fn eta_epsilon_cases() {
        let r = 20.0;
        let distinct = eta_epsilon(1.0, 4.0, 2, r);
        assert!((distinct - (-r).exp() * r.powf(-0.5)).abs() < 1e-15);
        let equal3 = eta_epsilon(1.0, 1.0, 3, r);
        assert!((equal3 - (-r).exp() / r * r.ln().sqrt()).abs() < 1e-15);
        // monotone decay toward zero
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let v = eta_epsilon(2.0, 3.0, 3, 10.0 * k as f64);
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }
}
