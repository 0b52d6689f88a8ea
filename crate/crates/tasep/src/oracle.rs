//! Independent verification layer: the entropies recomputed from their
//! reduced variational characterizations, the energy bands from the
//! underlying optimizations, quasipotentials evaluated on explicit
//! profiles, and a numerical Legendre transform.
//!
//! Nothing here calls into `closed`; agreement between the two layers is
//! the point.

use crate::closed::{vbar_minus, vbar_plus};
use crate::curve::{Curve, Value};
use crate::error::Error;
use crate::params::{Direction, Params};
use crate::profile::{gibbs_shannon, Profile};
use crate::scalar::{gamma_line, log1pexp, s_unchecked};

/// Coarse grid points per axis for the variational searches.
const COARSE: usize = 200;
/// Refinement rounds; each re-grids a one-cell neighborhood of the best.
const ROUNDS: usize = 3;
const FINE: usize = 20;

/// H(rho, phi) = (1/2) int [(1-rho) phi - log(1+e^phi)] for a
/// piecewise-constant density and a step potential phi_y jumping from
/// phi- to phi+ at y. Exact.
pub fn h_step(p: &Params, rho: &Profile, y: f64) -> f64 {
    let (pm, pp) = (p.phi_minus(), p.phi_plus());
    let (lm, lp) = (log1pexp(pm), log1pexp(pp));
    let mut acc = 0.0;
    for (w, &v) in rho.breakpoints().windows(2).zip(rho.values()) {
        let (a, b) = (w[0], w[1]);
        // length of the cell left of y (potential phi-) and right of it
        let left = (y.clamp(a, b)) - a;
        let right = b - y.clamp(a, b);
        acc += left * ((1.0 - v) * pm - lm) + right * ((1.0 - v) * pp - lp);
    }
    acc / 2.0
}

/// Competitive quasipotential V+(rho): the inner infimum over step
/// potentials is affine in the jump point on each cell of the profile,
/// so scanning breakpoints is exact.
pub fn quasipotential_plus(p: &Params, rho: &Profile) -> Result<f64, Error> {
    if p.direction() != Direction::Competitive {
        return Err(Error::invalid("quasipotential_plus needs competitive params"));
    }
    let inf = rho
        .breakpoints()
        .iter()
        .map(|&y| h_step(p, rho, y))
        .fold(f64::INFINITY, f64::min);
    Ok(-gibbs_shannon(rho) + inf - vbar_plus(p))
}

/// Lower convex hull of the points (xs[i], ys[i]), xs increasing.
/// Returns the indices of hull vertices (monotone chain).
fn lower_hull(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (xs[i] - xs[a]) * (ys[b] - ys[a]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Cooperative quasipotential V-(rho). The outer supremum is attained
/// at the potential built from the convex envelope G of
/// H_rho(x) = int_{-1}^x (1-rho); for piecewise-constant rho the
/// envelope is the lower hull of the breakpoint vertices of H_rho,
/// so the evaluation is exact.
pub fn quasipotential_minus(p: &Params, rho: &Profile) -> Result<f64, Error> {
    if p.direction() != Direction::Cooperative {
        return Err(Error::invalid("quasipotential_minus needs cooperative params"));
    }
    let bps = rho.breakpoints();
    let mut h = Vec::with_capacity(bps.len());
    let mut acc = 0.0;
    h.push(0.0);
    for (w, &v) in bps.windows(2).zip(rho.values()) {
        acc += (w[1] - w[0]) * (1.0 - v);
        h.push(acc);
    }
    let hull = lower_hull(bps, &h);
    let (rm, rp) = (p.rho_minus(), p.rho_plus());
    let mut integral = 0.0;
    for seg in hull.windows(2) {
        let (i, j) = (seg[0], seg[1]);
        let dx = bps[j] - bps[i];
        let slope = (h[j] - h[i]) / dx;
        let phi = if slope <= rm {
            p.phi_minus()
        } else if slope >= rp {
            p.phi_plus()
        } else {
            (slope / (1.0 - slope)).ln()
        };
        integral += dx * (slope * phi - log1pexp(phi));
    }
    Ok(-gibbs_shannon(rho) + integral / 2.0 - vbar_minus(p))
}

/// One axis of a grid search: best (arg, value) of f on [lo, hi],
/// n+1 points, strict improvement only (first best wins ties).
fn grid_max(lo: f64, hi: f64, n: usize, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let mut best = (lo, f(lo));
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Competitive entropy from the two-variable reduced optimization over
/// (y, m): the net flux m in [0,2] fixes a level
/// e(m) = (phi+ m - 2 Vbar+ - 2E)/(phi+ - phi-) - xi_hat0 and the
/// objective is
/// F(y,m) = -(y+1) s((y xi0 + e(m))/(y+1)) - (1-y) s((m - y xi0 - e(m))/(1-y)),
/// with S+(E) = (1/2) sup F over the feasible polygon.
pub fn oracle_entropy_plus(p: &Params, e: f64) -> Result<Value, Error> {
    if p.direction() != Direction::Competitive {
        return Err(Error::invalid("oracle_entropy_plus needs competitive params"));
    }
    let (pm, pp) = (p.phi_minus(), p.phi_plus());
    let d = pp - pm;
    let c = p.pair();
    let vb = vbar_plus(p);
    let xi0 = c.xi0;
    let em = |m: f64| (pp * m - 2.0 * vb - 2.0 * e) / d - c.xi_hat0;
    // y-interval from 0 <= y xi0 + e(m) <= y+1 and 0 <= m - y xi0 - e(m) <= 1-y
    let y_range = |m: f64| -> Option<(f64, f64)> {
        let ev = em(m);
        if ev < xi0.max(m - xi0) - 1e-12 || ev > m - (m - 1.0) * xi0 + 1e-12 {
            return None;
        }
        let lo = (-ev / xi0).max((ev - 1.0) / (1.0 - xi0)).max(-1.0);
        let hi = ((m - ev) / xi0).min((1.0 + ev - m) / (1.0 - xi0)).min(1.0);
        if lo <= hi + 1e-12 {
            Some((lo, hi.max(lo)))
        } else {
            None
        }
    };
    let objective = |m: f64, y: f64| -> f64 {
        let ev = em(m);
        let t1 = if y + 1.0 > 1e-13 {
            let u = ((y * xi0 + ev) / (y + 1.0)).clamp(0.0, 1.0);
            -(y + 1.0) * s_unchecked(u)
        } else {
            0.0
        };
        let t2 = if 1.0 - y > 1e-13 {
            let u = ((m - y * xi0 - ev) / (1.0 - y)).clamp(0.0, 1.0);
            -(1.0 - y) * s_unchecked(u)
        } else {
            0.0
        };
        t1 + t2
    };
    // joint search: for each m, 1-D search in y, then refine both
    let best_for_m = |m: f64, ny: usize| -> f64 {
        match y_range(m) {
            Some((lo, hi)) => grid_max(lo, hi, ny, |y| objective(m, y)).1,
            None => f64::NEG_INFINITY,
        }
    };
    let (mut m_lo, mut m_hi, mut n) = (0.0f64, 2.0f64, COARSE);
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for round in 0..=ROUNDS {
        let b = grid_max(m_lo, m_hi, n, |m| best_for_m(m, n));
        if b.1 > best.1 {
            best = b;
        }
        if round < ROUNDS {
            let step = (m_hi - m_lo) / n as f64;
            m_lo = (best.0 - step).max(0.0);
            m_hi = (best.0 + step).min(2.0);
            n = FINE;
        }
    }
    if best.1.is_finite() {
        Ok(Value::Finite(best.1 / 2.0))
    } else {
        Ok(Value::NegInf)
    }
}

/// Cooperative entropy from the four-variable reduced optimization over
/// (x-, x+, y-, y+). For fixed (y-, y+) the objective and the two level
/// constraints are affine in (x-, x+), so the supremum sits on a vertex
/// of the constraint polygon; all pairwise line intersections of its
/// five boundary lines are enumerated.
pub fn oracle_entropy_minus(p: &Params, e: f64) -> Result<Value, Error> {
    if p.direction() != Direction::Cooperative {
        return Err(Error::invalid("oracle_entropy_minus needs cooperative params"));
    }
    let (rm, rp) = (p.rho_minus(), p.rho_plus());
    let (pm, pp) = (p.phi_minus(), p.phi_plus());
    let vb = vbar_minus(p);
    let xhat = e + vb;
    // extremes of -s over [rho-, rho+]
    let s_at = |r: f64| -s_unchecked(r);
    let mid = (0.5f64).clamp(rm, rp);
    let m_lo = s_at(rm).min(s_at(rp));
    let m_hi = s_at(rm).max(s_at(rp)).max(s_at(mid));
    let eval_pair = |ym: f64, yp: f64| -> f64 {
        let gm = gamma_line(pm, ym);
        let gp = gamma_line(pp, yp);
        // F = am*x- + ap*x+ + const; constraints c(x-,x+) cmp 0 affine
        let f = |xm: f64, xp: f64| 0.5 * ((xm + 1.0) * (s_at(ym) + gm) + (1.0 - xp) * (s_at(yp) + gp));
        let level = |xm: f64, xp: f64, lvl: f64| {
            0.5 * ((xm + 1.0) * (gm + lvl) + (1.0 - xp) * (gp + lvl)) - (xhat + lvl)
        };
        // boundary lines as a*x- + b*x+ = c
        let lines = [
            (1.0, 0.0, -1.0),                                      // x- = -1
            (0.0, 1.0, 1.0),                                       // x+ = 1
            (1.0, -1.0, 0.0),                                      // x- = x+
            (gm + m_lo, -(gp + m_lo), 2.0 * (xhat + m_lo) - (gm + gp + 2.0 * m_lo)),
            (gm + m_hi, -(gp + m_hi), 2.0 * (xhat + m_hi) - (gm + gp + 2.0 * m_hi)),
        ];
        let feasible = |xm: f64, xp: f64| -> bool {
            let tol = 1e-9;
            (-1.0 - tol..=1.0 + tol).contains(&xm)
                && (-1.0 - tol..=1.0 + tol).contains(&xp)
                && xm <= xp + tol
                && level(xm, xp, m_lo) >= -tol
                && level(xm, xp, m_hi) <= tol
        };
        let mut best = f64::NEG_INFINITY;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, c1) = lines[i];
                let (a2, b2, c2) = lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.abs() < 1e-13 {
                    continue;
                }
                let xm = (c1 * b2 - c2 * b1) / det;
                let xp = (a1 * c2 - a2 * c1) / det;
                if feasible(xm, xp) {
                    let v = f(xm.clamp(-1.0, 1.0), xp.clamp(-1.0, 1.0));
                    if v > best {
                        best = v;
                    }
                }
            }
        }
        best
    };
    let mut win = ((0.0, rm), (rp, 1.0));
    let mut n = COARSE;
    let mut best = (f64::NAN, f64::NAN, f64::NEG_INFINITY);
    for round in 0..=ROUNDS {
        let ((ym_lo, ym_hi), (yp_lo, yp_hi)) = win;
        for i in 0..=n {
            let ym = ym_lo + (ym_hi - ym_lo) * i as f64 / n as f64;
            for j in 0..=n {
                let yp = yp_lo + (yp_hi - yp_lo) * j as f64 / n as f64;
                let v = eval_pair(ym, yp);
                if v > best.2 {
                    best = (ym, yp, v);
                }
            }
        }
        if round < ROUNDS && best.2.is_finite() {
            let sm = (ym_hi - ym_lo) / n as f64;
            let sp = (yp_hi - yp_lo) / n as f64;
            win = (
                ((best.0 - sm).max(0.0), (best.0 + sm).min(rm)),
                ((best.1 - sp).max(rp), (best.1 + sp).min(1.0)),
            );
            n = FINE;
        }
    }
    if best.2.is_finite() {
        Ok(Value::Finite(best.2 - xhat))
    } else {
        Ok(Value::NegInf)
    }
}

/// S(E) from the reduced optimization, either direction.
pub fn oracle_entropy(p: &Params, e: f64) -> Value {
    match p.direction() {
        Direction::Competitive => oracle_entropy_plus(p, e).expect("direction checked"),
        Direction::Cooperative => oracle_entropy_minus(p, e).expect("direction checked"),
    }
}

/// Energy band endpoints from the underlying optimizations (not from
/// the closed-form case table).
pub fn oracle_energy_band(p: &Params) -> (f64, f64) {
    let (pm, pp) = (p.phi_minus(), p.phi_plus());
    let (lm, lp) = (log1pexp(pm), log1pexp(pp));
    match p.direction() {
        Direction::Competitive => {
            let vb = vbar_plus(p);
            // bottom: infimum of H(rho_const, phi_y) - Vbar+ over the
            // constant maximizing profiles; reduces to the two ends
            let lo = (pm.min(0.0) - lm).min(pp.min(0.0) - lp) - vb;
            // top: largest E keeping the (y,m) polygon nonempty,
            // e(m) <= ... becomes E <= phi+ m/2 - Vbar+ - (d/2)(xi_hat0 + sup{xi0, m-xi0})
            let c = p.pair();
            let d = pp - pm;
            let cap = |m: f64| {
                pp * m / 2.0 - vb - d / 2.0 * (c.xi_hat0 + c.xi0.max(m - c.xi0))
            };
            // cap is piecewise linear with one kink: a cheap 1-D search,
            // so refine deeper than the 2-D problems
            let mut lo_m = 0.0;
            let mut hi_m = 2.0;
            let mut n = COARSE;
            let mut best = f64::NEG_INFINITY;
            for round in 0..=2 * ROUNDS {
                let b = grid_max(lo_m, hi_m, n, cap);
                if b.1 > best {
                    best = b.1;
                }
                if round < 2 * ROUNDS {
                    let step = (hi_m - lo_m) / n as f64;
                    lo_m = (b.0 - step).max(0.0);
                    hi_m = (b.0 + step).min(2.0);
                    n = FINE;
                }
            }
            (lo, best)
        }
        Direction::Cooperative => {
            let vb = vbar_minus(p);
            // top: sup over jump points of the optimal step potential
            let top = grid_max(-1.0, 1.0, COARSE * 10, |x| {
                -(x + 1.0) / 2.0 * lm + (1.0 - x) / 2.0 * (pp - lp)
            })
            .1 - vb;
            // bottom: the 4-variable infimum is multilinear, attained on
            // the corner set below
            let s_min = s_unchecked((0.5f64).clamp(p.rho_minus(), p.rho_plus()));
            let mut bottom = f64::INFINITY;
            for &(xm, xp) in &[(-1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                for &ym in &[0.0, p.rho_minus()] {
                    for &yp in &[p.rho_plus(), 1.0] {
                        let v = 0.5
                            * ((xm + 1.0) * (pm * ym - lm)
                                + (1.0 - xp) * (pp * yp - lp)
                                + (xp - xm) * s_min);
                        bottom = bottom.min(v);
                    }
                }
            }
            (bottom - vb, top)
        }
    }
}

/// Numerical Legendre transform inf_E { theta E - S(E) } of a sampled
/// entropy curve.
pub fn legendre_transform(curve: &Curve, theta: f64) -> f64 {
    curve
        .finite_points()
        .map(|(e, s)| theta * e - s)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed;
    use approx::assert_abs_diff_eq;

    fn comp(rm: f64, rp: f64) -> Params {
        Params::new(rm, rp, Direction::Competitive).unwrap()
    }

    fn coop(rm: f64, rp: f64) -> Params {
        Params::new(rm, rp, Direction::Cooperative).unwrap()
    }

    #[test]
    fn band_oracle_matches_closed_form() {
        for p in [
            comp(0.1, 0.7),
            comp(0.1, 0.3),
            comp(0.6, 0.9),
            comp(0.3, 0.7),
            coop(0.2, 0.6),
            coop(0.25, 0.4),
            coop(0.6, 0.9),
        ] {
            let (lo, hi) = oracle_energy_band(&p);
            let b = closed::energy_band(&p);
            assert_abs_diff_eq!(lo, b.lo, epsilon = 1e-6);
            assert_abs_diff_eq!(hi, b.hi, epsilon = 1e-6);
        }
    }

    #[test]
    fn entropy_oracle_spot_checks() {
        for p in [comp(0.1, 0.7), comp(0.1, 0.3)] {
            let b = closed::energy_band(&p);
            for i in [2, 5, 8] {
                let e = b.lo + (b.hi - b.lo) * i as f64 / 10.0;
                let want = closed::entropy(&p, e).finite().unwrap();
                let got = oracle_entropy(&p, e).finite().unwrap();
                assert_abs_diff_eq!(got, want, epsilon = 1e-3);
            }
        }
        for p in [coop(0.2, 0.6), coop(0.25, 0.4)] {
            let b = closed::energy_band(&p);
            for i in [2, 5, 8] {
                let e = b.lo + (b.hi - b.lo) * i as f64 / 10.0;
                let want = closed::entropy(&p, e).finite().unwrap();
                let got = oracle_entropy(&p, e).finite().unwrap();
                assert_abs_diff_eq!(got, want, epsilon = 5e-3);
            }
        }
    }

    #[test]
    fn quasipotential_vanishes_at_stationary_profile() {
        let p = comp(0.1, 0.7);
        let rho = Profile::constant(0.1, 400).unwrap();
        assert_abs_diff_eq!(quasipotential_plus(&p, &rho).unwrap(), 0.0, epsilon = 1e-10);
        // on the shock line every shock position has zero cost
        let p = comp(0.3, 0.7);
        for at in [-0.5, 0.0, 0.4] {
            let rho = Profile::step(0.3, 0.7, at).unwrap();
            assert_abs_diff_eq!(quasipotential_plus(&p, &rho).unwrap(), 0.0, epsilon = 1e-10);
        }
        let p = coop(0.25, 0.4);
        let rho = Profile::constant(0.4, 400).unwrap();
        assert_abs_diff_eq!(quasipotential_minus(&p, &rho).unwrap(), 0.0, epsilon = 1e-10);
        let p = coop(0.2, 0.6);
        let rho = Profile::constant(0.5, 400).unwrap();
        assert_abs_diff_eq!(quasipotential_minus(&p, &rho).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn quasipotential_positive_off_stationary() {
        let p = comp(0.1, 0.7);
        for rho in [
            Profile::constant(0.4, 100).unwrap(),
            Profile::step(0.7, 0.1, 0.2).unwrap(),
        ] {
            assert!(quasipotential_plus(&p, &rho).unwrap() > 1e-4);
        }
        let p = coop(0.25, 0.4);
        for rho in [
            Profile::constant(0.25, 100).unwrap(),
            Profile::step(0.9, 0.1, 0.0).unwrap(),
        ] {
            assert!(quasipotential_minus(&p, &rho).unwrap() > 1e-4);
        }
    }

    #[test]
    fn legendre_of_equilibrium_curve() {
        use crate::scalar::{chemical_potential, equilibrium_entropy_phi, equilibrium_pressure};
        let phi = chemical_potential(0.3).unwrap();
        let (e1, e2) = (log1pexp(phi), log1pexp(phi) - phi);
        let curve = Curve::sample(e1.min(e2), e1.max(e2), 40_000, |e| {
            equilibrium_entropy_phi(phi, e)
        });
        for th in [-2.0, -0.3, 0.7, 1.0, 2.5] {
            assert_abs_diff_eq!(
                legendre_transform(&curve, th),
                equilibrium_pressure(phi, th),
                epsilon = 1e-5
            );
        }
    }
}
