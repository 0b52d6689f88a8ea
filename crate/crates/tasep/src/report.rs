//! The verification suite: nine numbered checks tying the closed forms
//! to the independent layers (Legendre duality, variational oracles,
//! exact measures, finite-size trends, simulation). Shared between the
//! `verify` subcommand and the integration test.

use crate::closed::{
    self, classify, energy_band, entropy, entropy_breakpoints, pressure, rate_function,
    stationary_energy, Phase,
};
use crate::curve::Curve;
use crate::exact::{self, master::master_equation_stationary};
use crate::oracle;
use crate::params::{Direction, Params};
use crate::scalar::log1pexp;
use crate::sim::{self, SimConfig};
use num::rational::BigRational;
use num::BigInt;
use serde::{Deserialize, Serialize};
use std::time::Instant;

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub details: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {} ({:.1}s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.details
        )
    }
}

fn comp(rm: f64, rp: f64) -> Params {
    Params::new(rm, rp, Direction::Competitive).expect("valid test pair")
}

fn coop(rm: f64, rp: f64) -> Params {
    Params::new(rm, rp, Direction::Cooperative).expect("valid test pair")
}

/// The 8 pairs of criterion 1: every entropy/pressure case branch of
/// both directions.
fn duality_pairs() -> Vec<Params> {
    vec![
        comp(0.1, 0.7),   // rho- <= 1/2 <= rho+
        comp(0.1, 0.3),   // both below 1/2
        comp(0.6, 0.9),   // both above 1/2
        comp(0.15, 0.95), // wide mid case
        coop(0.2, 0.6),   // maximal current
        coop(0.3, 0.8),   // maximal current, phi0 from rho+
        coop(0.25, 0.4),  // both below 1/2
        coop(0.55, 0.7),  // both above 1/2
    ]
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn timed(
    id: usize,
    name: &str,
    budget: Option<f64>,
    f: impl FnOnce() -> (bool, String),
) -> CriterionResult {
    let start = Instant::now();
    let (mut passed, mut details) = f();
    let seconds = start.elapsed().as_secs_f64();
    if let Some(b) = budget {
        if seconds > b {
            passed = false;
            details = format!("{details}; over budget {b}s");
        }
    }
    CriterionResult {
        id,
        name: name.to_string(),
        passed,
        details,
        seconds,
    }
}

/// 1: numerical Legendre transform of S matches P to 1e-5.
pub fn criterion1(_quick: bool) -> CriterionResult {
    timed(1, "Legendre duality S -> P", Some(10.0), || {
        // the full grid already runs in well under a second
        let n_grid = 10_000;
        let mut worst = 0.0f64;
        let mut worst_at = String::new();
        for p in duality_pairs() {
            let band = energy_band(&p);
            // uniform grid plus the exact kink energies: the Legendre inf
            // sits on a kink for theta in the chord range
            let mut xs: Vec<f64> = (0..n_grid)
                .map(|i| band.lo + (band.hi - band.lo) * i as f64 / (n_grid - 1) as f64)
                .chain(entropy_breakpoints(&p))
                .collect();
            xs.sort_by(|a, b| a.total_cmp(b));
            let ys = xs.iter().map(|&e| entropy(&p, e)).collect();
            let curve = Curve::new(xs, ys);
            let mut th = -3.0f64;
            while th <= 3.0 + 1e-9 {
                let skip = p.direction() == Direction::Cooperative && (th + 1.0).abs() < 0.05;
                if !skip {
                    let lhs = oracle::legendre_transform(&curve, th);
                    let gap = (lhs - pressure(&p, th)).abs();
                    if gap > worst {
                        worst = gap;
                        worst_at = format!("{p:?} theta={th:.2}");
                    }
                }
                th += 0.05;
            }
        }
        (
            worst < 1e-5,
            format!("max |transform - closed| = {worst:.2e} at {worst_at}"),
        )
    })
}

/// 2: reduced variational oracles reproduce S and the band.
pub fn criterion2(quick: bool) -> CriterionResult {
    timed(2, "variational oracles for S and the band", Some(60.0), || {
        let pairs: Vec<Params> = if quick {
            vec![comp(0.1, 0.7), coop(0.25, 0.4)]
        } else {
            duality_pairs()
        };
        let n_e = if quick { 5 } else { 20 };
        let mut worst_s = 0.0f64;
        let mut worst_band = 0.0f64;
        let mut ok = true;
        for p in &pairs {
            let band = energy_band(p);
            let (olo, ohi) = oracle::oracle_energy_band(p);
            worst_band = worst_band.max((olo - band.lo).abs()).max((ohi - band.hi).abs());
            let tol = match p.direction() {
                Direction::Competitive => 1e-3,
                Direction::Cooperative => 5e-3,
            };
            for i in 1..=n_e {
                let e = band.lo + (band.hi - band.lo) * i as f64 / (n_e + 1) as f64;
                let want = entropy(p, e).finite();
                let got = oracle::oracle_entropy(p, e).finite();
                match (want, got) {
                    (Some(w), Some(g)) => {
                        let gap = (w - g).abs();
                        worst_s = worst_s.max(gap);
                        if gap > tol {
                            ok = false;
                        }
                    }
                    _ => ok = false,
                }
            }
        }
        ok &= worst_band < 1e-6;
        (
            ok,
            format!("max entropy gap {worst_s:.2e}, max band gap {worst_band:.2e}"),
        )
    })
}

/// 3: matrix-product measure vs master equation, plus the Bernoulli line.
pub fn criterion3(quick: bool) -> CriterionResult {
    timed(3, "matrix product vs master equation", Some(30.0), || {
        let densities = [(0.1, 0.7), (0.1, 0.3), (0.6, 0.9), (0.3, 0.7), (0.25, 0.4)];
        let l_max = if quick { 6 } else { 8 };
        let mut worst = 0.0f64;
        for dir in [Direction::Competitive, Direction::Cooperative] {
            for &(rm, rp) in &densities {
                let p = Params::new(rm, rp, dir).expect("valid pair");
                for l in 2..=l_max {
                    let m = exact::stationary_measure(&p, l).expect("within cap");
                    let pi = master_equation_stationary(&p, l).expect("within cap");
                    for c in 0..(1usize << l) {
                        worst = worst.max((m.probability(c) - pi[c]).abs());
                    }
                }
            }
        }
        // equal reservoir densities: Bernoulli product measure
        let mut worst_bern = 0.0f64;
        for rho in [0.3, 0.5, 0.8] {
            let l = 8;
            let m = exact::equilibrium_measure(rho, l).expect("within cap");
            for c in 0..(1usize << l) {
                let k = (c as u32).count_ones() as i32;
                let bern = rho.powi(k) * (1.0 - rho).powi(l as i32 - k);
                worst_bern = worst_bern.max((m.probability(c) - bern).abs());
            }
        }
        (
            worst < 1e-10 && worst_bern < 1e-12,
            format!("max cross-oracle gap {worst:.2e}, max Bernoulli gap {worst_bern:.2e}"),
        )
    })
}

/// 4: exhaustive exact sign check of the weight-exchange monotonicity.
pub fn criterion4(quick: bool) -> CriterionResult {
    timed(4, "exact weight-exchange sign check", Some(120.0), || {
        let pairs = [
            (ratio(1, 10), ratio(7, 10)),
            (ratio(1, 10), ratio(3, 10)),
            (ratio(3, 5), ratio(9, 10)),
            (ratio(3, 10), ratio(7, 10)),
            (ratio(1, 4), ratio(2, 5)),
        ];
        let l_max = if quick { 7 } else { 10 };
        let mut checked = 0usize;
        let mut zeros = 0usize;
        let mut violations = 0usize;
        for dir in [Direction::Competitive, Direction::Cooperative] {
            for (rm, rp) in &pairs {
                for l in 2..=l_max {
                    let r = exact::lemma_sign_check(rm, rp, dir, l).expect("within cap");
                    checked += r.pairs_checked;
                    zeros += r.zeros;
                    violations += r.violations;
                }
            }
        }
        (
            violations == 0 && zeros == 0,
            format!("{checked} exchanges checked, {violations} violations, {zeros} exact zeros"),
        )
    })
}

/// 5: exact finite-size identities.
pub fn criterion5(_quick: bool) -> CriterionResult {
    timed(5, "exact finite-size identities", None, || {
        let mut worst = 0.0f64;
        for p in [comp(0.1, 0.7), coop(0.25, 0.4)] {
            for l in [4usize, 7, 10] {
                let m = exact::stationary_measure(&p, l).expect("within cap");
                worst = worst.max(exact::finite_pressure(&m, 1.0).abs());
                worst = worst.max((exact::finite_pressure(&m, 0.0) + LN_2).abs());
                worst = worst.max(exact::local_eq_diagnostic(&m, l).expect("K=L divides"));
            }
        }
        // equilibrium line: L Var(Y) = chi phi^2 and flat (H) diagnostic
        for rho in [0.2, 0.45, 0.7] {
            for l in [4usize, 8] {
                let m = exact::equilibrium_measure(rho, l).expect("within cap");
                let (_, var) = exact::y_mean_var(&m);
                let phi = (rho / (1.0 - rho)).ln();
                worst = worst.max((l as f64 * var - rho * (1.0 - rho) * phi * phi).abs());
                for k in [1, 2, l] {
                    if l % k == 0 {
                        worst = worst.max(exact::local_eq_diagnostic(&m, k).expect("divides"));
                    }
                }
            }
        }
        (worst < 1e-11, format!("max identity residual {worst:.2e}"))
    })
}

fn nonincreasing_with_one_slip(xs: &[f64]) -> (bool, usize) {
    let slips = xs
        .windows(2)
        .filter(|w| w[1] > w[0] + 1e-12 * w[0].abs().max(1.0))
        .count();
    (slips <= 1, slips)
}

/// 6: finite-size gaps to the asymptotic limits shrink with L.
pub fn criterion6(quick: bool) -> CriterionResult {
    timed(6, "finite-size trends toward the limits", None, || {
        let ls: Vec<usize> = if quick {
            vec![6, 8, 10]
        } else {
            vec![6, 8, 10, 12, 14]
        };
        let mut ok = true;
        let mut details = String::new();
        for p in [comp(0.1, 0.7), coop(0.25, 0.4)] {
            let s_inf = stationary_energy(&p);
            let mut gap_s = Vec::new();
            let mut gap_p05 = Vec::new();
            let mut gap_p2 = Vec::new();
            let mut diag_h = Vec::new();
            for &l in &ls {
                let m = exact::stationary_measure(&p, l).expect("within cap");
                gap_s.push((exact::gibbs_shannon_exact(&m) / l as f64 - s_inf).abs());
                gap_p05.push((exact::finite_pressure(&m, 0.5) - pressure(&p, 0.5)).abs());
                gap_p2.push((exact::finite_pressure(&m, 2.0) - pressure(&p, 2.0)).abs());
                diag_h.push(exact::local_eq_diagnostic(&m, 2).expect("2 divides"));
            }
            for (name, series) in [("S/L", &gap_s), ("P(0.5)", &gap_p05), ("P(2)", &gap_p2)] {
                let (mono, slips) = nonincreasing_with_one_slip(series);
                ok &= mono;
                details.push_str(&format!(
                    "{} {name}: final gap {:.3e} ({} slips); ",
                    p.direction(),
                    series.last().unwrap(),
                    slips
                ));
            }
            // At fixed K the sup-norm diagnostic converges upward to a
            // nonzero plateau C(K); only the subsequent K -> infinity limit
            // kills it, so no decay in L is possible at fixed K. The raw
            // series is reported but not gated.
            details.push_str(&format!(
                "{} (H)K=2: {} (grows toward its fixed-K limit, reported only); ",
                p.direction(),
                diag_h
                    .iter()
                    .map(|v| format!("{v:.3}"))
                    .collect::<Vec<_>>()
                    .join(" -> ")
            ));
        }
        (ok, details.trim_end_matches("; ").to_string())
    })
}

/// 7: Gaussian curvature identity, and the affine non-Gaussian branch
/// of the cooperative maximal-current phase.
pub fn criterion7(_quick: bool) -> CriterionResult {
    timed(7, "fluctuation shape at the stationary point", None, || {
        let mut worst_rel = 0.0f64;
        for p in [
            comp(0.1, 0.7),
            comp(0.1, 0.3),
            comp(0.6, 0.9),
            comp(0.3, 0.8),
            coop(0.25, 0.4),
            coop(0.6, 0.9),
        ] {
            let sigma = closed::gaussian_variance(&p).expect("Gaussian case");
            let e0 = stationary_energy(&p);
            let h = 1e-4;
            let j2 = (rate_function(&p, e0 - h) - 2.0 * rate_function(&p, e0)
                + rate_function(&p, e0 + h))
                / (h * h);
            worst_rel = worst_rel.max((1.0 / j2 - sigma).abs() / sigma);
        }
        let mut worst_affine = 0.0f64;
        for p in [coop(0.2, 0.6), coop(0.3, 0.8)] {
            assert_eq!(classify(&p).phase, Phase::MaximalCurrent);
            assert!(closed::gaussian_variance(&p).is_none());
            let vb = -classify(&p).vbar;
            for i in 0..=200 {
                let e = LN_2 + 0.05 * i as f64 / 200.0;
                worst_affine = worst_affine.max((rate_function(&p, e) - (2.0 * e - vb)).abs());
            }
        }
        (
            worst_rel < 1e-4 && worst_affine < 1e-10,
            format!(
                "max |1/J'' - chi phi^2|/sigma = {worst_rel:.2e}, max affine residual {worst_affine:.2e}"
            ),
        )
    })
}

/// 8: simulated phase diagram, both directions.
pub fn criterion8(quick: bool) -> CriterionResult {
    timed(8, "phase diagram by simulation", Some(600.0), || {
        let cfg = SimConfig {
            l: if quick { 100 } else { 200 },
            params: comp(0.1, 0.7), // placeholder, replaced per point
            t_burnin: if quick { 1000.0 } else { 3000.0 },
            t_measure: if quick { 3000.0 } else { 6000.0 },
            seed: 20260823,
            n_replicas: if quick { 2 } else { 6 },
        };
        let grid = sim::default_sweep_grid();
        let mut details = String::new();
        let mut ok = true;
        for dir in [Direction::Competitive, Direction::Cooperative] {
            let rows = sim::phase_sweep(&grid, dir, &cfg, 0.03, 0.05).expect("valid grid");
            let judged: Vec<bool> = rows.iter().filter_map(|r| r.agree).collect();
            let agreeing = judged.iter().filter(|&&a| a).count();
            let frac = agreeing as f64 / judged.len().max(1) as f64;
            ok &= frac >= 0.9;
            details.push_str(&format!(
                "{dir}: {agreeing}/{} judged points agree ({} excluded); ",
                judged.len(),
                rows.len() - judged.len()
            ));
        }
        (ok, details.trim_end_matches("; ").to_string())
    })
}

/// Analytic slope of the equilibrium branch of S at shifted energy x.
fn branch_slope(phi: f64, x: f64) -> f64 {
    let u = (x + log1pexp(phi)) / phi;
    -(u / (1.0 - u)).ln() / phi
}

/// Analytic slope of the curved pressure branch P(phi,-theta) - theta vb.
fn pressure_branch_slope(phi: f64, theta: f64, vb: f64) -> f64 {
    -log1pexp(phi) + phi / (1.0 + (phi * theta).exp()) - vb
}

/// 9: structural properties of the closed forms.
pub fn criterion9(_quick: bool) -> CriterionResult {
    timed(9, "concavity, kinks, and smoothness", None, || {
        let mut ok = true;
        let mut notes = Vec::new();
        // concavity of S on the band, all case branches
        let mut worst_d2 = f64::NEG_INFINITY;
        for p in duality_pairs() {
            let band = energy_band(&p);
            let n = 2_000;
            let h = (band.hi - band.lo) / n as f64;
            let vals: Vec<f64> = (0..=n)
                .map(|i| entropy(&p, band.lo + i as f64 * h).finite().expect("on band"))
                .collect();
            for w in vals.windows(3) {
                worst_d2 = worst_d2.max(w[0] - 2.0 * w[1] + w[2]);
            }
        }
        ok &= worst_d2 <= 1e-8;
        notes.push(format!("max second difference {worst_d2:.2e}"));
        // S+ kink exactly at E = W - Vbar+ in the off-mid cases
        for p in [comp(0.1, 0.3), comp(0.6, 0.9)] {
            let c = p.pair();
            let vb = -classify(&p).vbar;
            let x_w = c.w;
            let sl = branch_slope(p.phi_minus(), x_w);
            let sr = branch_slope(p.phi_plus(), x_w);
            let kink_inside = energy_band(&p).contains(x_w + vb);
            ok &= kink_inside && (sl - sr).abs() > 1e-2;
            notes.push(format!(
                "S+ kink slope jump {:.3} at E={:.4} for ({},{})",
                (sl - sr).abs(),
                x_w + vb,
                p.rho_minus(),
                p.rho_plus()
            ));
        }
        // (S-)' continuous at branch junctions: analytic one-sided slopes
        let mut worst_junction = 0.0f64;
        for p in [coop(0.2, 0.6), coop(0.25, 0.4), coop(0.55, 0.7)] {
            let junctions: Vec<(f64, f64)> = match () {
                _ if p.rho_plus() < 0.5 || p.rho_minus() > 0.5 => {
                    // linear piece between the two curved branches
                    let (s_m, s_p) = (
                        crate::scalar::bernoulli_entropy_s(p.rho_minus()).expect("in range"),
                        crate::scalar::bernoulli_entropy_s(p.rho_plus()).expect("in range"),
                    );
                    vec![(s_p, p.phi_plus()), (s_m, p.phi_minus())]
                }
                _ => {
                    let x0 = crate::scalar::bernoulli_entropy_s(p.rho0()).expect("in range");
                    let phi_star = if p.phi_plus().abs() >= p.phi_minus().abs() {
                        p.phi_plus()
                    } else {
                        p.phi_minus()
                    };
                    vec![(x0, phi_star)]
                }
            };
            for (x_j, phi) in junctions {
                // one side is the linear branch of slope -1 exactly
                worst_junction = worst_junction.max((branch_slope(phi, x_j) - (-1.0)).abs());
            }
        }
        ok &= worst_junction < 1e-6;
        notes.push(format!("max (S-)' junction mismatch {worst_junction:.2e}"));
        // P+ is C1 where the linear segment meets the curved branches
        let mut worst_p = 0.0f64;
        for p in [comp(0.1, 0.7), comp(0.15, 0.95), comp(0.3, 0.8)] {
            let c = p.pair();
            let vbar = classify(&p).vbar;
            let (phs, th_star) = if p.phi_plus() >= -p.phi_minus() {
                (p.phi_plus(), c.theta0_plus)
            } else {
                (p.phi_minus(), c.theta0_minus)
            };
            let gap = pressure_branch_slope(phs, th_star, vbar) - energy_band(&p).hi;
            worst_p = worst_p.max(gap.abs());
        }
        for p in [comp(0.1, 0.3), comp(0.6, 0.9)] {
            let c = p.pair();
            let vbar = classify(&p).vbar;
            let e_w = c.w - vbar;
            for (phi, th) in [(p.phi_minus(), c.theta0_minus), (p.phi_plus(), c.theta0_plus)] {
                worst_p = worst_p.max((pressure_branch_slope(phi, th, vbar) - e_w).abs());
            }
            // and the chord between the branch endpoints has slope E_W
            let a = pressure(&p, c.theta0_plus.min(c.theta0_minus));
            let b = pressure(&p, c.theta0_plus.max(c.theta0_minus));
            let chord = (b - a) / (c.theta0_plus - c.theta0_minus).abs();
            worst_p = worst_p.max((chord - e_w).abs());
        }
        ok &= worst_p < 1e-6;
        notes.push(format!("max P+ C1 mismatch {worst_p:.2e}"));
        // P- slope jumps at theta = -1
        let mut min_jump = f64::INFINITY;
        for p in [coop(0.2, 0.6), coop(0.25, 0.4), coop(0.55, 0.7)] {
            let d = 1e-4;
            let left = (pressure(&p, -1.0) - pressure(&p, -1.0 - d)) / d;
            let right = (pressure(&p, -1.0 + d) - pressure(&p, -1.0)) / d;
            min_jump = min_jump.min((left - right).abs());
        }
        ok &= min_jump > 1e-3;
        notes.push(format!("min P- slope jump at theta=-1: {min_jump:.3}"));
        (ok, notes.join("; "))
    })
}

/// Run every criterion. `quick` trims sizes for an interactive run; the
/// acceptance suite uses the full configuration.
pub fn run_all(quick: bool) -> Vec<CriterionResult> {
    vec![
        criterion1(quick),
        criterion2(quick),
        criterion3(quick),
        criterion4(quick),
        criterion5(quick),
        criterion6(quick),
        criterion7(quick),
        criterion8(quick),
        criterion9(quick),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_structural_criteria_pass() {
        // cheap subset as a unit smoke test; the full suite runs in the
        // integration test
        for c in [criterion5(true), criterion7(true), criterion9(true)] {
            assert!(c.passed, "{}", c.line());
        }
    }
}
