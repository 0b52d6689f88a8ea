//! Closed forms: phase classification, energy bands, the entropies
//! S+/S-, the pressures P+/P-, maximizer profiles, rate functions and
//! Gaussian variances.
//!
//! Both entropies are expressed through the equilibrium curve
//! S_{rho,rho}(-(E+Vbar)) with a case split on the position of the
//! reservoir densities relative to 1/2. The split here is by densities,
//! not by the phase diagram: competitive (0.1, 0.7) is in the
//! low-density phase yet uses the rho- <= 1/2 <= rho+ entropy branch.

use crate::curve::Value;
use crate::error::Error;
use crate::params::{Direction, Params};
use crate::scalar::{equilibrium_pressure, ln_m_of_theta, log1pexp, s_unchecked};
use serde::{Deserialize, Serialize};

pub use crate::profile::gibbs_shannon;

const LN_2: f64 = std::f64::consts::LN_2;
/// Absorbs rounding at band endpoints; the band itself is closed.
const BAND_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    LowDensity,
    HighDensity,
    MaximalCurrent,
    ShockLine,
}

/// Stationary bulk density: flat in a pure phase, a step on the
/// competitive first-order line (the shock position itself is uniform).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RhoBar {
    Flat(f64),
    Shock { left: f64, right: f64 },
}

impl RhoBar {
    /// Representative density (for a shock, the two ends have equal
    /// mobility and |phi|, which is all the closed forms consume).
    pub fn representative(&self) -> f64 {
        match *self {
            RhoBar::Flat(r) => r,
            RhoBar::Shock { right, .. } => right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseInfo {
    pub phase: Phase,
    pub rho_bar: RhoBar,
    /// For competitive: sup(phi+, -phi-). For cooperative: phi(rho_bar).
    pub phi_bar: f64,
    pub phi0: f64,
    pub rho0: f64,
    /// Vbar+ (competitive) or Vbar- (cooperative).
    pub vbar: f64,
}

fn chi(rho: f64) -> f64 {
    rho * (1.0 - rho)
}

/// Vbar+ = log min chi over [rho-, rho+] (chi is concave: an endpoint).
pub(crate) fn vbar_plus(p: &Params) -> f64 {
    chi(p.rho_minus()).min(chi(p.rho_plus())).ln()
}

/// Vbar- = log max chi over [rho-, rho+].
pub(crate) fn vbar_minus(p: &Params) -> f64 {
    if p.rho_minus() <= 0.5 && 0.5 <= p.rho_plus() {
        (0.25f64).ln()
    } else {
        chi(p.rho_minus()).max(chi(p.rho_plus())).ln()
    }
}

pub fn classify(p: &Params) -> PhaseInfo {
    let (rm, rp) = (p.rho_minus(), p.rho_plus());
    let (phase, rho_bar, phi_bar) = match p.direction() {
        Direction::Competitive => {
            let sum = rm + rp;
            let phi_bar = p.phi_plus().max(-p.phi_minus());
            if sum < 1.0 {
                (Phase::LowDensity, RhoBar::Flat(rm), phi_bar)
            } else if sum > 1.0 {
                (Phase::HighDensity, RhoBar::Flat(rp), phi_bar)
            } else {
                (Phase::ShockLine, RhoBar::Shock { left: rm, right: rp }, phi_bar)
            }
        }
        Direction::Cooperative => {
            if rp < 0.5 {
                (Phase::HighDensity, RhoBar::Flat(rp), p.phi_plus())
            } else if rm > 0.5 {
                (Phase::LowDensity, RhoBar::Flat(rm), p.phi_minus())
            } else {
                (Phase::MaximalCurrent, RhoBar::Flat(0.5), 0.0)
            }
        }
    };
    let vbar = match p.direction() {
        Direction::Competitive => vbar_plus(p),
        Direction::Cooperative => vbar_minus(p),
    };
    PhaseInfo {
        phase,
        rho_bar,
        phi_bar,
        phi0: p.phi0(),
        rho0: p.rho0(),
        vbar,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBand {
    pub lo: f64,
    pub hi: f64,
}

impl EnergyBand {
    pub fn contains(&self, e: f64) -> bool {
        e >= self.lo - BAND_EPS && e <= self.hi + BAND_EPS
    }
}

/// Density-side case split shared by the entropy and pressure formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    /// rho- <= 1/2 <= rho+
    Mid,
    /// rho- < rho+ < 1/2
    Low,
    /// 1/2 < rho- < rho+
    High,
}

fn side(p: &Params) -> Side {
    if p.rho_plus() < 0.5 {
        Side::Low
    } else if p.rho_minus() > 0.5 {
        Side::High
    } else {
        Side::Mid
    }
}

/// The boundary chemical potential of largest modulus (sign kept).
fn phi_star(p: &Params) -> f64 {
    let (pm, pp) = (p.phi_minus(), p.phi_plus());
    if pp.abs() >= pm.abs() {
        pp
    } else {
        pm
    }
}

pub fn energy_band(p: &Params) -> EnergyBand {
    let (pm, pp) = (p.phi_minus(), p.phi_plus());
    let phi0 = p.phi0();
    match p.direction() {
        Direction::Competitive => {
            let vb = vbar_plus(p);
            let lo = -vb - log1pexp(phi0);
            let hi = -vb
                + match side(p) {
                    Side::Mid => p.pair().w,
                    Side::Low => -log1pexp(pp),
                    Side::High => -log1pexp(-pm),
                };
            EnergyBand { lo, hi }
        }
        Direction::Cooperative => {
            let vb = vbar_minus(p);
            let lo = -vb
                + match side(p) {
                    Side::Mid => -LN_2,
                    Side::Low => -log1pexp(-pp),
                    Side::High => -log1pexp(pm),
                };
            let hi = -vb - log1pexp(-phi0);
            EnergyBand { lo, hi }
        }
    }
}

/// -s((x + log(1+e^phi))/phi), the equilibrium branch at shifted energy
/// x = E + Vbar, with endpoint rounding absorbed.
fn branch(phi: f64, x: f64) -> Value {
    let u = (x + log1pexp(phi)) / phi;
    let u = if (-1e-9..=1.0 + 1e-9).contains(&u) {
        u.clamp(0.0, 1.0)
    } else {
        return Value::NegInf;
    };
    Value::Finite(-s_unchecked(u))
}

/// Competitive entropy S+(E).
pub fn entropy_plus(p: &Params, e: f64) -> Result<Value, Error> {
    if p.direction() != Direction::Competitive {
        return Err(Error::invalid("entropy_plus needs competitive params"));
    }
    let band = energy_band(p);
    if !band.contains(e) {
        return Ok(Value::NegInf);
    }
    let x = e + vbar_plus(p);
    let w = p.pair().w;
    let v = match side(p) {
        Side::Mid => branch(phi_star(p), x),
        Side::Low => {
            if x <= w {
                branch(p.phi_minus(), x)
            } else {
                branch(p.phi_plus(), x)
            }
        }
        Side::High => {
            if x >= w {
                branch(p.phi_minus(), x)
            } else {
                branch(p.phi_plus(), x)
            }
        }
    };
    Ok(v)
}

/// Cooperative entropy S-(E). Between the curved branches sits the
/// linear branch -(E+Vbar-), realized by a family of monotone profiles.
pub fn entropy_minus(p: &Params, e: f64) -> Result<Value, Error> {
    if p.direction() != Direction::Cooperative {
        return Err(Error::invalid("entropy_minus needs cooperative params"));
    }
    let band = energy_band(p);
    if !band.contains(e) {
        return Ok(Value::NegInf);
    }
    let x = e + vbar_minus(p);
    let (sm, sp) = (s_unchecked(p.rho_minus()), s_unchecked(p.rho_plus()));
    let v = match side(p) {
        Side::Mid => {
            let s0 = s_unchecked(p.rho0());
            if x <= s0 {
                Value::Finite(-x)
            } else {
                branch(phi_star(p), x)
            }
        }
        // rho+ < 1/2: s(rho+) <= s(rho-)
        Side::Low => {
            if x < sp {
                branch(p.phi_plus(), x)
            } else if x <= sm {
                Value::Finite(-x)
            } else {
                branch(p.phi_minus(), x)
            }
        }
        // rho- > 1/2: s(rho-) <= s(rho+)
        Side::High => {
            if x < sm {
                branch(p.phi_minus(), x)
            } else if x <= sp {
                Value::Finite(-x)
            } else {
                branch(p.phi_plus(), x)
            }
        }
    };
    Ok(v)
}

/// Interior energies where S changes branch (kinks of S+, junctions of
/// the linear piece of S-). Useful for sampling grids: the Legendre inf
/// can sit exactly on a kink.
pub fn entropy_breakpoints(p: &Params) -> Vec<f64> {
    let band = energy_band(p);
    let xs = match (p.direction(), side(p)) {
        (Direction::Competitive, Side::Mid) => vec![],
        (Direction::Competitive, _) => vec![p.pair().w - vbar_plus(p)],
        (Direction::Cooperative, Side::Mid) => {
            vec![s_unchecked(p.rho0()) - vbar_minus(p)]
        }
        (Direction::Cooperative, _) => {
            let vb = vbar_minus(p);
            vec![
                s_unchecked(p.rho_minus()) - vb,
                s_unchecked(p.rho_plus()) - vb,
            ]
        }
    };
    xs.into_iter()
        .filter(|&e| e > band.lo + BAND_EPS && e < band.hi - BAND_EPS)
        .collect()
}

/// S(E) for either direction.
pub fn entropy(p: &Params, e: f64) -> Value {
    match p.direction() {
        Direction::Competitive => entropy_plus(p, e).expect("direction checked"),
        Direction::Cooperative => entropy_minus(p, e).expect("direction checked"),
    }
}

/// Competitive pressure P+(theta), the concave C^1 Legendre dual of S+.
pub fn pressure_plus(p: &Params, theta: f64) -> Result<f64, Error> {
    if p.direction() != Direction::Competitive {
        return Err(Error::invalid("pressure_plus needs competitive params"));
    }
    let vb = vbar_plus(p);
    let c = p.pair();
    let curve = |phi: f64, th: f64| equilibrium_pressure(phi, -th) - th * vb;
    let v = match side(p) {
        Side::Mid => {
            // the band truncates the equilibrium curve at slope theta*;
            // below theta* the dual is linear with slope = band top
            let (phs, th_star) = if p.phi_plus() >= -p.phi_minus() {
                (p.phi_plus(), c.theta0_plus)
            } else {
                (p.phi_minus(), c.theta0_minus)
            };
            if theta >= th_star {
                curve(phs, theta)
            } else {
                curve(phs, th_star) + energy_band(p).hi * (theta - th_star)
            }
        }
        Side::Low => {
            // theta0+ <= theta0- since xi0 < 1/2; chord across the S+ kink
            if theta >= c.theta0_minus {
                curve(p.phi_minus(), theta)
            } else if theta <= c.theta0_plus {
                curve(p.phi_plus(), theta)
            } else {
                chord(
                    c.theta0_plus,
                    curve(p.phi_plus(), c.theta0_plus),
                    c.theta0_minus,
                    curve(p.phi_minus(), c.theta0_minus),
                    theta,
                )
            }
        }
        Side::High => {
            if theta >= c.theta0_plus {
                curve(p.phi_plus(), theta)
            } else if theta <= c.theta0_minus {
                curve(p.phi_minus(), theta)
            } else {
                chord(
                    c.theta0_minus,
                    curve(p.phi_minus(), c.theta0_minus),
                    c.theta0_plus,
                    curve(p.phi_plus(), c.theta0_plus),
                    theta,
                )
            }
        }
    };
    Ok(v)
}

fn chord(x0: f64, y0: f64, x1: f64, y1: f64, x: f64) -> f64 {
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Cooperative pressure P-(theta) = -theta (log m(theta) + Vbar-).
///
/// The printed theta = 0 branch of f_theta is not the theta -> 0 limit
/// and would give P-(0) = 0, violating duality with S-; the defining
/// Legendre property forces P-(0) = -sup_E S-(E) = -log 2, which is
/// also the two-sided limit of the theta != 0 formula.
pub fn pressure_minus(p: &Params, theta: f64) -> Result<f64, Error> {
    if p.direction() != Direction::Cooperative {
        return Err(Error::invalid("pressure_minus needs cooperative params"));
    }
    if theta == 0.0 {
        return Ok(-LN_2);
    }
    let lnm = ln_m_of_theta(theta, p.rho_minus(), p.rho_plus())?;
    Ok(-theta * (lnm + vbar_minus(p)))
}

/// P(theta) for either direction.
pub fn pressure(p: &Params, theta: f64) -> f64 {
    match p.direction() {
        Direction::Competitive => pressure_plus(p, theta).expect("direction checked"),
        Direction::Cooperative => pressure_minus(p, theta).expect("direction checked"),
    }
}

/// The entropy maximizer at energy E: a single constant profile, or the
/// cooperative plateau family of non-increasing profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MaximizerFamily {
    Constant { u: f64 },
    /// Non-increasing profiles with values in [lo, hi] and Gibbs-Shannon
    /// entropy equal to `target`.
    Monotone { lo: f64, hi: f64, target: f64 },
}

/// Constant maximizer value u_rho = (log rho - x)/(log rho - log(1-rho)).
fn u_const(rho: f64, x: f64) -> MaximizerFamily {
    let u = (rho.ln() - x) / (rho.ln() - (1.0 - rho).ln());
    MaximizerFamily::Constant {
        u: u.clamp(0.0, 1.0),
    }
}

pub fn maximizer(p: &Params, e: f64) -> Result<MaximizerFamily, Error> {
    let band = energy_band(p);
    if !band.contains(e) {
        return Err(Error::domain(format!(
            "E = {e} outside the energy band [{}, {}]",
            band.lo, band.hi
        )));
    }
    let (rm, rp) = (p.rho_minus(), p.rho_plus());
    // boundary density carrying phi0 (on the shock line both work; the
    // two constants are mirror images with equal entropy)
    let rho_sel = if p.phi_plus().abs() >= p.phi_minus().abs() {
        rp
    } else {
        rm
    };
    match p.direction() {
        Direction::Competitive => {
            let x = e + vbar_plus(p);
            let w = p.pair().w;
            Ok(match side(p) {
                Side::Mid => u_const(rho_sel, x),
                Side::Low => u_const(if x <= w { rm } else { rp }, x),
                Side::High => u_const(if x >= w { rm } else { rp }, x),
            })
        }
        Direction::Cooperative => {
            let x = e + vbar_minus(p);
            let family = MaximizerFamily::Monotone {
                lo: 1.0 - rp,
                hi: 1.0 - rm,
                target: -x,
            };
            let (sm, sp) = (s_unchecked(rm), s_unchecked(rp));
            Ok(match side(p) {
                Side::Mid => {
                    if x <= s_unchecked(p.rho0()) {
                        family
                    } else {
                        u_const(rho_sel, x)
                    }
                }
                Side::Low => {
                    if x < sp {
                        u_const(rp, x)
                    } else if x <= sm {
                        family
                    } else {
                        u_const(rm, x)
                    }
                }
                Side::High => {
                    if x < sm {
                        u_const(rm, x)
                    } else if x <= sp {
                        family
                    } else {
                        u_const(rp, x)
                    }
                }
            })
        }
    }
}

/// Rate function J(E) = E - S(E); +infinity outside the band.
pub fn rate_function(p: &Params, e: f64) -> f64 {
    match entropy(p, e) {
        Value::Finite(s) => e - s,
        Value::NegInf => f64::INFINITY,
    }
}

/// Variance of the Gaussian fluctuations of Y around S(rho_bar):
/// chi(rho_bar) phi_bar^2. None in the cooperative maximal-current
/// phase, where the fluctuations are not Gaussian.
pub fn gaussian_variance(p: &Params) -> Option<f64> {
    let info = classify(p);
    match (p.direction(), info.phase) {
        (Direction::Cooperative, Phase::MaximalCurrent) => None,
        _ => {
            let r = info.rho_bar.representative();
            Some(chi(r) * info.phi_bar * info.phi_bar)
        }
    }
}

/// 𝕊(rho_bar) = -s(rho_bar): the energy where J vanishes.
pub fn stationary_energy(p: &Params) -> f64 {
    match classify(p).rho_bar {
        RhoBar::Flat(r) => -s_unchecked(r),
        RhoBar::Shock { left, right } => -(s_unchecked(left) + s_unchecked(right)) / 2.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn comp(rm: f64, rp: f64) -> Params {
        Params::new(rm, rp, Direction::Competitive).unwrap()
    }

    fn coop(rm: f64, rp: f64) -> Params {
        Params::new(rm, rp, Direction::Cooperative).unwrap()
    }

    #[test]
    fn classify_examples() {
        let i = classify(&comp(0.1, 0.7));
        assert_eq!(i.phase, Phase::LowDensity);
        assert_eq!(i.rho_bar, RhoBar::Flat(0.1));
        assert_eq!(classify(&comp(0.3, 0.7)).phase, Phase::ShockLine);
        let i = classify(&coop(0.2, 0.6));
        assert_eq!(i.phase, Phase::MaximalCurrent);
        assert_eq!(i.rho_bar, RhoBar::Flat(0.5));
        assert_abs_diff_eq!(i.vbar, -2.0 * LN_2, epsilon = 1e-14);
        assert_eq!(classify(&coop(0.25, 0.4)).rho_bar, RhoBar::Flat(0.4));
        assert_eq!(classify(&coop(0.6, 0.9)).rho_bar, RhoBar::Flat(0.6));
    }

    #[test]
    fn band_examples() {
        let b = energy_band(&comp(0.1, 0.7));
        assert_abs_diff_eq!(b.lo, -(0.9f64).ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.hi, 1.509719226178433, epsilon = 1e-12);
        let b = energy_band(&coop(0.2, 0.6));
        assert_abs_diff_eq!(b.lo, LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(b.hi, 1.1631508098056809, epsilon = 1e-12);
        // cooperative low case: lo = -log(1-rho+)
        let b = energy_band(&coop(0.25, 0.4));
        assert_abs_diff_eq!(b.lo, -(0.6f64).ln(), epsilon = 1e-12);
    }

    #[test]
    fn entropy_plus_examples() {
        let p = comp(0.1, 0.7);
        let b = energy_band(&p);
        assert_eq!(entropy_plus(&p, b.lo).unwrap(), Value::Finite(0.0));
        assert_eq!(entropy_plus(&p, b.hi + 1e-6).unwrap(), Value::NegInf);
        assert_eq!(entropy_plus(&p, b.lo - 1e-6).unwrap(), Value::NegInf);
        // kink energy: both branches agree
        let p = comp(0.1, 0.3);
        let e_w = p.pair().w - vbar_plus(&p);
        let l = branch(p.phi_minus(), p.pair().w).finite().unwrap();
        let r = branch(p.phi_plus(), p.pair().w).finite().unwrap();
        assert_abs_diff_eq!(l, r, epsilon = 1e-10);
        assert!(energy_band(&p).contains(e_w));
    }

    #[test]
    fn entropy_minus_examples() {
        let p = coop(0.2, 0.6);
        let b = energy_band(&p);
        match entropy_minus(&p, b.lo).unwrap() {
            Value::Finite(v) => assert_abs_diff_eq!(v, LN_2, epsilon = 1e-12),
            Value::NegInf => panic!(),
        }
        // linear branch slope is exactly -1
        let e = b.lo + 0.01;
        let h = 1e-6;
        let f = |e: f64| entropy_minus(&p, e).unwrap().finite().unwrap();
        assert_abs_diff_eq!((f(e + h) - f(e - h)) / (2.0 * h), -1.0, epsilon = 1e-9);
    }

    #[test]
    fn entropy_minus_c1_at_junction() {
        // first derivatives agree at the branch junction, second do not
        for p in [coop(0.2, 0.6), coop(0.25, 0.4), coop(0.6, 0.9)] {
            let vb = vbar_minus(&p);
            let s0 = match side(&p) {
                Side::Mid => s_unchecked(p.rho0()),
                Side::Low => s_unchecked(p.rho_minus()),
                Side::High => s_unchecked(p.rho_plus()),
            };
            let e_j = s0 - vb;
            let h = 1e-5;
            let f = |e: f64| entropy_minus(&p, e).unwrap().finite().unwrap();
            let left = (f(e_j) - f(e_j - h)) / h;
            let right = (f(e_j + h) - f(e_j)) / h;
            assert_abs_diff_eq!(left, right, epsilon = 1e-4);
            let d2_left = (f(e_j - 2.0 * h) - 2.0 * f(e_j - h) + f(e_j)) / (h * h);
            let d2_right = (f(e_j) - 2.0 * f(e_j + h) + f(e_j + 2.0 * h)) / (h * h);
            assert!((d2_left - d2_right).abs() > 0.1, "S- should have a C^2 break");
        }
    }

    #[test]
    fn band_matches_finiteness() {
        let cases = [
            comp(0.1, 0.7),
            comp(0.1, 0.3),
            comp(0.6, 0.9),
            comp(0.3, 0.7),
            coop(0.2, 0.6),
            coop(0.25, 0.4),
            coop(0.6, 0.9),
        ];
        for p in cases {
            let b = energy_band(&p);
            assert!(b.lo <= b.hi);
            let n = 10_000;
            for i in 0..=n {
                let e = b.lo - 0.3 + (b.hi - b.lo + 0.6) * i as f64 / n as f64;
                let inside = e >= b.lo - 1e-9 && e <= b.hi + 1e-9;
                let fin = entropy(&p, e).is_finite();
                if (e - b.lo).abs() > 1e-9 && (e - b.hi).abs() > 1e-9 {
                    assert_eq!(inside, fin, "{p:?} E={e}");
                }
            }
        }
    }

    #[test]
    fn entropy_concave_on_band() {
        for p in [
            comp(0.1, 0.7),
            comp(0.1, 0.3),
            comp(0.6, 0.9),
            coop(0.2, 0.6),
            coop(0.25, 0.4),
            coop(0.6, 0.9),
        ] {
            let b = energy_band(&p);
            let n = 2000;
            let h = (b.hi - b.lo) / n as f64;
            let vals: Vec<f64> = (0..=n)
                .map(|i| entropy(&p, b.lo + i as f64 * h).finite().unwrap())
                .collect();
            for w in vals.windows(3) {
                assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-8, "{p:?}");
            }
        }
    }

    #[test]
    fn pressure_normalization() {
        for p in [
            comp(0.1, 0.7),
            comp(0.1, 0.3),
            comp(0.6, 0.9),
            comp(0.3, 0.7),
        ] {
            assert_abs_diff_eq!(pressure_plus(&p, 1.0).unwrap(), 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(pressure_plus(&p, 0.0).unwrap(), -LN_2, epsilon = 1e-10);
        }
        for p in [coop(0.2, 0.6), coop(0.25, 0.4), coop(0.6, 0.9)] {
            assert_abs_diff_eq!(pressure_minus(&p, 1.0).unwrap(), 0.0, epsilon = 1e-10);
            assert_eq!(pressure_minus(&p, 0.0).unwrap(), -LN_2);
            assert_abs_diff_eq!(
                pressure_minus(&p, -1.0).unwrap(),
                vbar_minus(&p),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn pressure_minus_frozen_values() {
        let p = coop(0.25, 0.4);
        for (th, want) in [
            (2.0, 0.6539264674066643),
            (0.5, -0.3414968785635385),
            (-0.5, -1.0550550563836116),
            (-2.0, -2.384229082034556),
        ] {
            assert_abs_diff_eq!(pressure_minus(&p, th).unwrap(), want, epsilon = 1e-12);
        }
    }

    #[test]
    fn pressure_minus_theta0_continuity() {
        for p in [coop(0.2, 0.6), coop(0.25, 0.4), coop(0.6, 0.9)] {
            let at0 = pressure_minus(&p, 0.0).unwrap();
            for h in [1e-4, -1e-4, 1e-6, -1e-6] {
                let v = pressure_minus(&p, h).unwrap();
                // the theta != 0 branch approaches -log 2 at linear order
                assert!((v - at0).abs() < 3.0 * h.abs(), "{p:?} h={h}");
            }
        }
    }

    #[test]
    fn pressure_concave() {
        for (dir, rm, rp) in [
            (Direction::Competitive, 0.1, 0.7),
            (Direction::Competitive, 0.1, 0.3),
            (Direction::Competitive, 0.6, 0.9),
            (Direction::Cooperative, 0.2, 0.6),
            (Direction::Cooperative, 0.25, 0.4),
            (Direction::Cooperative, 0.6, 0.9),
        ] {
            let p = Params::new(rm, rp, dir).unwrap();
            let n = 1200;
            let vals: Vec<f64> = (0..=n)
                .map(|i| pressure(&p, -3.0 + 6.0 * i as f64 / n as f64))
                .collect();
            for w in vals.windows(3) {
                assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-8, "{dir:?} ({rm},{rp})");
            }
        }
    }

    #[test]
    fn maximizer_examples() {
        let p = comp(0.1, 0.7);
        let b = energy_band(&p);
        for i in 1..10 {
            let e = b.lo + (b.hi - b.lo) * i as f64 / 10.0;
            match maximizer(&p, e).unwrap() {
                MaximizerFamily::Constant { u } => assert!((0.0..=1.0).contains(&u)),
                _ => panic!("competitive maximizer is constant"),
            }
        }
        let p = coop(0.2, 0.6);
        let e = energy_band(&p).lo + 0.01;
        match maximizer(&p, e).unwrap() {
            MaximizerFamily::Monotone { lo, hi, target } => {
                assert_abs_diff_eq!(lo, 0.4, epsilon = 1e-12);
                assert_abs_diff_eq!(hi, 0.8, epsilon = 1e-12);
                assert_abs_diff_eq!(target, -(e + vbar_minus(&p)), epsilon = 1e-12);
            }
            _ => panic!("plateau maximizer is a family"),
        }
        assert!(maximizer(&p, energy_band(&p).hi + 0.5).is_err());
    }

    #[test]
    fn rate_function_zero_and_nonneg() {
        for p in [
            comp(0.1, 0.7),
            comp(0.3, 0.8),
            comp(0.1, 0.3),
            comp(0.6, 0.9),
            coop(0.2, 0.6),
            coop(0.25, 0.4),
            coop(0.6, 0.9),
        ] {
            let e_star = stationary_energy(&p);
            assert_abs_diff_eq!(rate_function(&p, e_star), 0.0, epsilon = 1e-9);
            let b = energy_band(&p);
            for i in 0..=500 {
                let e = b.lo + (b.hi - b.lo) * i as f64 / 500.0;
                assert!(rate_function(&p, e) >= -1e-10);
            }
        }
    }

    #[test]
    fn variance_matches_rate_curvature() {
        for p in [
            comp(0.1, 0.7),
            comp(0.3, 0.8),
            comp(0.1, 0.3),
            comp(0.6, 0.9),
            coop(0.25, 0.4),
            coop(0.6, 0.9),
        ] {
            let sigma = gaussian_variance(&p).unwrap();
            let e_star = stationary_energy(&p);
            let h = 1e-4;
            let j = |e: f64| rate_function(&p, e);
            let j2 = (j(e_star - h) - 2.0 * j(e_star) + j(e_star + h)) / (h * h);
            assert_abs_diff_eq!(1.0 / j2, sigma, epsilon = 1e-4 * sigma);
        }
        assert_eq!(gaussian_variance(&coop(0.2, 0.6)), None);
    }

    #[test]
    fn cooperative_mc_rate_is_affine() {
        let p = coop(0.3, 0.8);
        let vb = vbar_minus(&p);
        let e_star = stationary_energy(&p);
        assert_abs_diff_eq!(e_star, LN_2, epsilon = 1e-12);
        // ln 2 is the band bottom here: the affine branch extends rightwards
        for i in 0..=100 {
            let e = e_star + 0.1 * i as f64 / 100.0;
            assert_abs_diff_eq!(rate_function(&p, e), 2.0 * e + vb, epsilon = 1e-10);
        }
    }
}
