//! Scalar building blocks: Bernoulli entropy, equilibrium entropy and
//! pressure, and the derived constants (xi0, xi_hat0, W, theta0, gamma
//! lines, f_theta, m(theta), E0) used by the closed forms.
//!
//! Conventions, used throughout the crate:
//!
//! ```text
//! phi(rho)  = log(rho/(1-rho))                      (chemical potential)
//! s(t)      = t log t + (1-t) log(1-t),  s(0)=s(1)=0
//! S_{rho,rho}(E) = -s((-E + log(1+e^phi))/phi)      (finite iff arg in [0,1])
//! P(phi,theta)   = theta log(1+e^phi) - log(1+e^{phi theta})
//! ```

use crate::curve::Value;
use crate::error::Error;

/// log(1+e^x) without overflow.
pub fn log1pexp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// phi = log(rho/(1-rho)).
pub fn chemical_potential(rho: f64) -> Result<f64, Error> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("density {rho} outside (0,1)")));
    }
    Ok((rho / (1.0 - rho)).ln())
}

/// rho = e^phi/(1+e^phi), inverse of [`chemical_potential`].
pub fn density_from_potential(phi: f64) -> Result<f64, Error> {
    if !phi.is_finite() {
        return Err(Error::domain(format!("potential {phi} not finite")));
    }
    // 1/(1+e^-phi) is accurate on both tails.
    Ok(1.0 / (1.0 + (-phi).exp()))
}

/// s(theta) = theta log theta + (1-theta) log(1-theta), with s(0)=s(1)=0.
pub fn bernoulli_entropy_s(theta: f64) -> Result<f64, Error> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::domain(format!("argument {theta} outside [0,1]")));
    }
    Ok(s_unchecked(theta))
}

pub(crate) fn s_unchecked(t: f64) -> f64 {
    let a = if t > 0.0 { t * t.ln() } else { 0.0 };
    let b = if t < 1.0 { (1.0 - t) * (1.0 - t).ln() } else { 0.0 };
    a + b
}

/// s'(t) = log(t/(1-t)); +-infinity at the endpoints.
pub(crate) fn s_prime(t: f64) -> f64 {
    if t <= 0.0 {
        f64::NEG_INFINITY
    } else if t >= 1.0 {
        f64::INFINITY
    } else {
        (t / (1.0 - t)).ln()
    }
}

/// Equilibrium entropy S_{rho,rho}(E) for rho != 1/2.
///
/// rho = 1/2 makes the formula 0/0; that equilibrium is degenerate (the
/// measure is uniform, Y is identically log 2) and is reported through
/// [`uniform_spectrum`] instead.
pub fn equilibrium_entropy(rho: f64, e: f64) -> Result<Value, Error> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("density {rho} outside (0,1)")));
    }
    if rho == 0.5 {
        return Err(Error::degenerate(
            "rho = 1/2 has phi = 0; spectrum is the single atom (log 2, log 2)",
        ));
    }
    let phi = (rho / (1.0 - rho)).ln();
    Ok(equilibrium_entropy_phi(phi, e))
}

/// S_{rho,rho}(E) parameterized by phi != 0.
pub(crate) fn equilibrium_entropy_phi(phi: f64, e: f64) -> Value {
    let u = (-e + log1pexp(phi)) / phi;
    if (0.0..=1.0).contains(&u) {
        Value::Finite(-s_unchecked(u))
    } else {
        Value::NegInf
    }
}

/// The degenerate rho = 1/2 spectrum: the single atom (E, S) = (log 2, log 2).
pub fn uniform_spectrum() -> (f64, f64) {
    (std::f64::consts::LN_2, std::f64::consts::LN_2)
}

/// Equilibrium pressure P(phi,theta) = theta log(1+e^phi) - log(1+e^{phi theta}).
pub fn equilibrium_pressure(phi: f64, theta: f64) -> f64 {
    theta * log1pexp(phi) - log1pexp(phi * theta)
}

/// Constants attached to an ordered pair of reservoir potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConstants {
    /// xi0 = (log(1+e^{phi+}) - log(1+e^{phi-}))/(phi+ - phi-), in (0,1).
    pub xi0: f64,
    /// xi_hat0 = (log(1+e^{phi+}) + log(1+e^{phi-}))/(phi+ - phi-).
    pub xi_hat0: f64,
    /// W = (phi- log(1+e^{phi+}) - phi+ log(1+e^{phi-}))/(phi+ - phi-).
    pub w: f64,
    /// theta0- = -s'(xi0)/phi-.
    pub theta0_minus: f64,
    /// theta0+ = -s'(xi0)/phi+.
    pub theta0_plus: f64,
}

pub fn pair_constants(rho_minus: f64, rho_plus: f64) -> Result<PairConstants, Error> {
    if !(rho_minus > 0.0 && rho_minus < rho_plus && rho_plus < 1.0) {
        return Err(Error::degenerate(format!(
            "need 0 < rho- < rho+ < 1, got ({rho_minus}, {rho_plus})"
        )));
    }
    let pm = chemical_potential(rho_minus)?;
    let pp = chemical_potential(rho_plus)?;
    let lm = log1pexp(pm);
    let lp = log1pexp(pp);
    let d = pp - pm;
    let xi0 = (lp - lm) / d;
    let sp = s_prime(xi0);
    Ok(PairConstants {
        xi0,
        xi_hat0: (lp + lm) / d,
        w: (pm * lp - pp * lm) / d,
        theta0_minus: -sp / pm,
        theta0_plus: -sp / pp,
    })
}

/// gamma_{+-}(y) = y*phi - log(1+e^phi) for the given side potential.
pub fn gamma_line(phi_side: f64, y: f64) -> f64 {
    y * phi_side - log1pexp(phi_side)
}

/// f_theta(t) from the cooperative pressure reduction. The printed
/// theta = 0 branch exp{t/2 + log(1+e^{-t})} is implemented verbatim;
/// the pressure uses its own theta -> 0 convention (see `closed`).
pub fn f_theta(theta: f64, t: f64) -> f64 {
    ln_f_theta(theta, t).exp()
}

pub(crate) fn ln_f_theta(theta: f64, t: f64) -> f64 {
    if theta == 0.0 {
        t / 2.0 + log1pexp(-t)
    } else {
        log1pexp(theta * t) / theta + log1pexp(-t)
    }
}

/// m(theta) = inf of f_theta over [phi-, phi+]. By the monotonicity of
/// f_theta on each side of 0 the infimum is attained at phi-, phi+, or 0
/// (when 0 lies in the interval).
pub fn m_of_theta(theta: f64, rho_minus: f64, rho_plus: f64) -> Result<f64, Error> {
    Ok(ln_m_of_theta(theta, rho_minus, rho_plus)?.exp())
}

pub(crate) fn ln_m_of_theta(theta: f64, rho_minus: f64, rho_plus: f64) -> Result<f64, Error> {
    let pm = chemical_potential(rho_minus)?;
    let pp = chemical_potential(rho_plus)?;
    let mut best = ln_f_theta(theta, pm).min(ln_f_theta(theta, pp));
    if pm <= 0.0 && 0.0 <= pp {
        best = best.min(ln_f_theta(theta, 0.0));
    }
    Ok(best)
}

/// E0(rho) = -rho log(1-rho) - (1-rho) log rho, the energy where the
/// tangent to S_{rho,rho} has slope -1; S_{rho,rho}(E0) = -s(rho).
pub fn tangent_energy_e0(rho: f64) -> Result<f64, Error> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("density {rho} outside (0,1)")));
    }
    Ok(-rho * (1.0 - rho).ln() - (1.0 - rho) * rho.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const LN_2: f64 = std::f64::consts::LN_2;

    #[test]
    fn chemical_potential_values() {
        assert_eq!(chemical_potential(0.5).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert_abs_diff_eq!(chemical_potential(e / (1.0 + e)).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            chemical_potential(0.1).unwrap(),
            -2.197224577336219,
            epsilon = 1e-12
        );
        assert!(chemical_potential(0.0).is_err());
        assert!(chemical_potential(1.0).is_err());
    }

    #[test]
    fn density_round_trip() {
        assert_eq!(density_from_potential(0.0).unwrap(), 0.5);
        let e = std::f64::consts::E;
        assert_abs_diff_eq!(density_from_potential(1.0).unwrap(), e / (1.0 + e), epsilon = 1e-15);
        assert_abs_diff_eq!(density_from_potential(-2.1972246).unwrap(), 0.1, epsilon = 1e-7);
        for &rho in &[1e-6, 0.1, 0.37, 0.5, 0.92, 1.0 - 1e-6] {
            let phi = chemical_potential(rho).unwrap();
            assert_abs_diff_eq!(density_from_potential(phi).unwrap(), rho, epsilon = 1e-12);
        }
        assert!(density_from_potential(f64::NAN).is_err());
    }

    #[test]
    fn bernoulli_entropy_values() {
        assert_abs_diff_eq!(bernoulli_entropy_s(0.5).unwrap(), -LN_2, epsilon = 1e-15);
        assert_eq!(bernoulli_entropy_s(0.0).unwrap(), 0.0);
        assert_eq!(bernoulli_entropy_s(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            bernoulli_entropy_s(0.3).unwrap(),
            -0.6108643020548935,
            epsilon = 1e-12
        );
        assert!(bernoulli_entropy_s(-0.1).is_err());
    }

    #[test]
    fn equilibrium_entropy_window() {
        let phi = chemical_potential(0.7).unwrap();
        let l = log1pexp(phi);
        assert_eq!(equilibrium_entropy(0.7, l).unwrap(), Value::Finite(0.0));
        match equilibrium_entropy(0.7, l - phi / 2.0).unwrap() {
            Value::Finite(v) => assert_abs_diff_eq!(v, LN_2, epsilon = 1e-12),
            Value::NegInf => panic!("expected finite"),
        }
        assert_eq!(equilibrium_entropy(0.7, l + 1.0).unwrap(), Value::NegInf);
        assert!(equilibrium_entropy(0.5, 0.0).is_err());
    }

    #[test]
    fn equilibrium_entropy_density_symmetry() {
        for &rho in &[0.1, 0.3, 0.45, 0.8] {
            for i in 0..50 {
                let e = -1.0 + 0.06 * i as f64;
                let a = equilibrium_entropy(rho, e).unwrap();
                let b = equilibrium_entropy(1.0 - rho, e).unwrap();
                match (a, b) {
                    (Value::Finite(a), Value::Finite(b)) => {
                        assert_abs_diff_eq!(a, b, epsilon = 1e-12)
                    }
                    _ => assert_eq!(a, b),
                }
            }
        }
    }

    #[test]
    fn equilibrium_pressure_values() {
        for &phi in &[-3.0, -0.4, 0.0, 1.3, 7.0] {
            assert_abs_diff_eq!(equilibrium_pressure(phi, 0.0), -LN_2, epsilon = 1e-14);
            assert_abs_diff_eq!(equilibrium_pressure(phi, 1.0), 0.0, epsilon = 1e-14);
        }
        for i in 0..20 {
            let th = -3.0 + 0.3 * i as f64;
            assert_abs_diff_eq!(equilibrium_pressure(0.0, th), (th - 1.0) * LN_2, epsilon = 1e-13);
        }
    }

    #[test]
    fn pressure_sign_symmetry() {
        for &phi in &[0.2, 1.0, 2.9] {
            for i in 0..30 {
                let th = -3.0 + 0.2 * i as f64;
                assert_abs_diff_eq!(
                    equilibrium_pressure(phi, th),
                    equilibrium_pressure(-phi, th),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn pair_constants_values() {
        let c = pair_constants(0.1, 0.3).unwrap();
        assert_abs_diff_eq!(c.w, -0.5144154899204497, epsilon = 1e-12);
        assert_abs_diff_eq!(c.xi0, 0.18616894171033563, epsilon = 1e-12);
        assert_abs_diff_eq!(c.xi_hat0, 0.34226706812708335, epsilon = 1e-12);
        assert_abs_diff_eq!(c.theta0_minus, -0.6713461447431517, epsilon = 1e-12);
        assert_abs_diff_eq!(c.theta0_plus, -1.7409441450205856, epsilon = 1e-12);
        // phi+ = -phi- forces xi0 = 1/2
        let c = pair_constants(0.3, 0.7).unwrap();
        assert_abs_diff_eq!(c.xi0, 0.5, epsilon = 1e-13);
        assert!(pair_constants(0.3, 0.3).is_err());
    }

    #[test]
    fn w_intersection_property() {
        // S_{rho-,rho-}(-W) = S_{rho+,rho+}(-W) whenever both are finite.
        for &(rm, rp) in &[(0.1, 0.3), (0.1, 0.7), (0.6, 0.9), (0.3, 0.8)] {
            let c = pair_constants(rm, rp).unwrap();
            let a = equilibrium_entropy(rm, -c.w).unwrap();
            let b = equilibrium_entropy(rp, -c.w).unwrap();
            if let (Value::Finite(a), Value::Finite(b)) = (a, b) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-9);
            } else {
                panic!("W should lie in both finite windows for ({rm},{rp})");
            }
        }
    }

    #[test]
    fn gamma_line_values() {
        let pp = chemical_potential(0.6).unwrap();
        assert_abs_diff_eq!(gamma_line(pp, 0.0), -log1pexp(pp), epsilon = 1e-14);
        assert_abs_diff_eq!(gamma_line(pp, 1.0), -log1pexp(-pp), epsilon = 1e-12);
        // gamma(rho) at the side's own density equals s(rho)
        let pm = chemical_potential(0.2).unwrap();
        assert_abs_diff_eq!(gamma_line(pm, 0.2), s_unchecked(0.2), epsilon = 1e-12);
    }

    #[test]
    fn f_theta_values() {
        for &t in &[-2.0, -0.3, 0.0, 1.1, 4.0] {
            assert_abs_diff_eq!(f_theta(-1.0, t), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(f_theta(1.0, t), (1.0 + t.exp()) * (1.0 + (-t).exp()), epsilon = 1e-10);
        }
        // MC-type interval, theta = 1: min of (1+e^t)(1+e^{-t}) at t=0 is 4
        assert_abs_diff_eq!(m_of_theta(1.0, 0.3, 0.8).unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn f_theta_monotone_pattern() {
        // theta > -1: decreasing then increasing; theta < -1: reversed
        for &theta in &[-3.0, -1.5, -0.5, 0.5, 2.0] {
            let mut prev_neg = ln_f_theta(theta, -5.0);
            let mut prev_pos = ln_f_theta(theta, 0.05);
            for i in 1..100 {
                let tn = -5.0 + 4.95 * i as f64 / 100.0;
                let tp = 0.05 + 4.95 * i as f64 / 100.0;
                let vn = ln_f_theta(theta, tn);
                let vp = ln_f_theta(theta, tp);
                if theta > -1.0 {
                    assert!(vn <= prev_neg + 1e-12, "theta={theta} t={tn}");
                    assert!(vp >= prev_pos - 1e-12, "theta={theta} t={tp}");
                } else {
                    assert!(vn >= prev_neg - 1e-12, "theta={theta} t={tn}");
                    assert!(vp <= prev_pos + 1e-12, "theta={theta} t={tp}");
                }
                prev_neg = vn;
                prev_pos = vp;
            }
        }
    }

    #[test]
    fn tangent_energy_values() {
        assert_abs_diff_eq!(tangent_energy_e0(0.5).unwrap(), LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(tangent_energy_e0(0.7).unwrap(), 0.9497834462097748, epsilon = 1e-12);
    }

    #[test]
    fn tangent_slope_is_minus_one() {
        for &rho in &[0.15, 0.35, 0.7, 0.9] {
            let e0 = tangent_energy_e0(rho).unwrap();
            let h = 1e-6;
            let f = |e: f64| match equilibrium_entropy(rho, e).unwrap() {
                Value::Finite(v) => v,
                Value::NegInf => panic!("E0 must be interior"),
            };
            let slope = (f(e0 + h) - f(e0 - h)) / (2.0 * h);
            assert_abs_diff_eq!(slope, -1.0, epsilon = 1e-6);
        }
    }

    proptest! {
        #[test]
        fn s_symmetric_and_bounded(t in 0.0f64..=1.0) {
            let a = bernoulli_entropy_s(t).unwrap();
            let b = bernoulli_entropy_s(1.0 - t).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!(a <= 0.0 && a >= -LN_2 - 1e-15);
        }

        #[test]
        fn xi0_in_unit_interval(rm in 0.001f64..0.998, d in 0.001f64..0.997) {
            let rp = rm + d * (1.0 - rm - 0.001);
            prop_assume!(rp > rm && rp < 1.0);
            let c = pair_constants(rm, rp).unwrap();
            prop_assert!(c.xi0 > 0.0 && c.xi0 < 1.0);
        }
    }

    #[test]
    fn equilibrium_duality() {
        // numerical Legendre transform of S_{rho,rho} matches P(phi,theta)
        for &rho in &[0.2, 0.4, 0.85] {
            let phi = chemical_potential(rho).unwrap();
            let (e1, e2) = (log1pexp(phi), log1pexp(phi) - phi);
            let (lo, hi) = (e1.min(e2), e1.max(e2));
            let n = 40_000;
            let es: Vec<f64> = (0..=n)
                .map(|i| lo + (hi - lo) * i as f64 / n as f64)
                .collect();
            for j in 0..=60 {
                let th = -3.0 + 0.1 * j as f64;
                let mut inf = f64::INFINITY;
                for &e in &es {
                    if let Value::Finite(s) = equilibrium_entropy(rho, e).unwrap() {
                        inf = inf.min(th * e - s);
                    }
                }
                assert_abs_diff_eq!(inf, equilibrium_pressure(phi, th), epsilon = 1e-5);
            }
        }
    }
}
