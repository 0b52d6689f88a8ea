//! Kinetic Monte Carlo for the boundary-driven chain at sizes beyond
//! exact enumeration. Continuous-time, event-driven with exact rates;
//! no discrete-time approximation.

use crate::closed::{classify, RhoBar};
use crate::error::Error;
use crate::exact;
use crate::params::{Direction, Params};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Batch count for batch-means standard errors of the correlated series.
const BATCHES: usize = 20;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub l: usize,
    pub params: Params,
    pub t_burnin: f64,
    pub t_measure: f64,
    pub seed: u64,
    pub n_replicas: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.l < 2 {
            return Err(Error::invalid("need at least 2 sites"));
        }
        if !(self.t_burnin > 0.0 && self.t_measure > 0.0) {
            return Err(Error::invalid("burn-in and measurement times must be positive"));
        }
        if self.n_replicas == 0 {
            return Err(Error::invalid("need at least one replica"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Time-averaged occupation per site.
    pub profile: Vec<f64>,
    pub profile_stderr: Vec<f64>,
    /// Average over the middle third of the chain.
    pub bulk_density: f64,
    pub bulk_stderr: f64,
    /// Net particle flux, rightward positive (negative for cooperative).
    pub current: f64,
    pub current_stderr: f64,
}

/// Occupation time integrals and injection counts for one batch.
struct Batch {
    occ: Vec<f64>,
    injections: f64,
    span: f64,
}

fn run_replica(cfg: &SimConfig, replica: u64) -> Vec<Batch> {
    let l = cfg.l;
    let p = &cfg.params;
    let (inject, eject, rightward) = match p.direction() {
        Direction::Competitive => (p.rho_minus(), 1.0 - p.rho_plus(), true),
        Direction::Cooperative => (p.rho_plus(), 1.0 - p.rho_minus(), false),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(replica);
    let mut eta = vec![0u8; l];
    // start from an uncorrelated random half-filled state
    for site in eta.iter_mut() {
        *site = u8::from(rng.gen_bool(0.5));
    }
    let batch_len = cfg.t_measure / BATCHES as f64;
    let mut batches: Vec<Batch> = (0..BATCHES)
        .map(|_| Batch {
            occ: vec![0.0; l],
            injections: 0.0,
            span: batch_len,
        })
        .collect();
    let t_end = cfg.t_burnin + cfg.t_measure;
    let mut t = 0.0f64;
    // site adjacent to the injecting reservoir
    let entry: usize = if rightward { 0 } else { l - 1 };
    loop {
        // total rate in one pass
        let mut rate = 0.0;
        if eta[entry] == 0 {
            rate += inject;
        }
        let exit = if rightward { l - 1 } else { 0 };
        if eta[exit] == 1 {
            rate += eject;
        }
        let mut pairs = 0u32;
        for i in 0..l - 1 {
            let (from, to) = if rightward { (i, i + 1) } else { (i + 1, i) };
            if eta[from] == 1 && eta[to] == 0 {
                pairs += 1;
            }
        }
        rate += pairs as f64;
        let dt = -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln() / rate;
        // deposit occupation time over [t, t+dt), split across batches
        let mut a = t.max(cfg.t_burnin);
        let seg_end = (t + dt).min(t_end);
        while a < seg_end {
            let bi = (((a - cfg.t_burnin) / batch_len) as usize).min(BATCHES - 1);
            let b_end = (cfg.t_burnin + (bi + 1) as f64 * batch_len).min(t_end);
            let w = b_end.min(seg_end) - a;
            let batch = &mut batches[bi];
            for (acc, &site) in batch.occ.iter_mut().zip(&eta) {
                *acc += w * site as f64;
            }
            a = b_end;
        }
        t += dt;
        if t >= t_end {
            break;
        }
        // pick the transition
        let mut u = rng.gen_range(0.0..rate);
        if eta[entry] == 0 {
            if u < inject {
                eta[entry] = 1;
                if t >= cfg.t_burnin {
                    let bi = (((t - cfg.t_burnin) / batch_len) as usize).min(BATCHES - 1);
                    batches[bi].injections += 1.0;
                }
                continue;
            }
            u -= inject;
        }
        if eta[exit] == 1 {
            if u < eject {
                eta[exit] = 0;
                continue;
            }
            u -= eject;
        }
        let mut k = u as usize; // each enabled pair has rate 1
        let mut moved = false;
        for i in 0..l - 1 {
            let (from, to) = if rightward { (i, i + 1) } else { (i + 1, i) };
            if eta[from] == 1 && eta[to] == 0 {
                if k == 0 {
                    eta[from] = 0;
                    eta[to] = 1;
                    moved = true;
                    break;
                }
                k -= 1;
            }
        }
        if !moved && pairs > 0 {
            // floating-point edge: apply the last enabled pair
            for i in (0..l - 1).rev() {
                let (from, to) = if rightward { (i, i + 1) } else { (i + 1, i) };
                if eta[from] == 1 && eta[to] == 0 {
                    eta[from] = 0;
                    eta[to] = 1;
                    break;
                }
            }
        }
    }
    batches
}

fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Run the chain and report time-averaged profile, bulk density, and
/// current with batch-means standard errors. Deterministic for a fixed
/// config; replicas use independent, reproducible RNG streams.
pub fn simulate(cfg: &SimConfig) -> Result<SimResult, Error> {
    cfg.validate()?;
    let all: Vec<Vec<Batch>> = (0..cfg.n_replicas as u64)
        .into_par_iter()
        .map(|r| run_replica(cfg, r))
        .collect();
    let batches: Vec<&Batch> = all.iter().flatten().collect();
    let l = cfg.l;
    let mut profile = vec![0.0; l];
    let mut profile_stderr = vec![0.0; l];
    for i in 0..l {
        let per_batch: Vec<f64> = batches.iter().map(|b| b.occ[i] / b.span).collect();
        let (m, se) = mean_stderr(&per_batch);
        profile[i] = m.clamp(0.0, 1.0);
        profile_stderr[i] = se;
    }
    let bulk_sites = l / 3..l - l / 3;
    let width = bulk_sites.len() as f64;
    let bulk_batch: Vec<f64> = batches
        .iter()
        .map(|b| bulk_sites.clone().map(|i| b.occ[i] / b.span).sum::<f64>() / width)
        .collect();
    let (bulk_density, bulk_stderr) = mean_stderr(&bulk_batch);
    let sign = match cfg.params.direction() {
        Direction::Competitive => 1.0,
        Direction::Cooperative => -1.0,
    };
    let cur_batch: Vec<f64> = batches
        .iter()
        .map(|b| sign * b.injections / b.span)
        .collect();
    let (current, current_stderr) = mean_stderr(&cur_batch);
    Ok(SimResult {
        profile,
        profile_stderr,
        bulk_density: bulk_density.clamp(0.0, 1.0),
        bulk_stderr,
        current,
        current_stderr,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub predicted: f64,
    pub measured: f64,
    /// None when the point sits within the exclusion band around a
    /// phase boundary (shock line / maximal-current borders).
    pub agree: Option<bool>,
}

/// Distance to the nearest phase boundary in parameter space.
fn boundary_distance(p: &Params) -> f64 {
    match p.direction() {
        Direction::Competitive => (p.rho_minus() + p.rho_plus() - 1.0).abs(),
        Direction::Cooperative => (p.rho_minus() - 0.5)
            .abs()
            .min((p.rho_plus() - 0.5).abs()),
    }
}

/// Default 5x5 parameter grid inside the triangle 0 < rho- < rho+ < 1,
/// chosen to visit every phase of both directions.
pub fn default_sweep_grid() -> Vec<(f64, f64)> {
    let mut grid = Vec::with_capacity(25);
    for i in 0..5 {
        let rm = 0.06 + 0.16 * i as f64;
        for j in 0..5 {
            let rp = rm + (0.94 - rm) * (j + 1) as f64 / 6.0;
            grid.push((rm, rp));
        }
    }
    grid
}

/// Simulate each grid point and compare the measured bulk density with
/// the predicted stationary density at tolerance `tol`.
pub fn phase_sweep(
    grid: &[(f64, f64)],
    direction: Direction,
    cfg: &SimConfig,
    tol: f64,
    exclusion: f64,
) -> Result<Vec<SweepRow>, Error> {
    grid.par_iter()
        .map(|&(rm, rp)| {
            let p = Params::new(rm, rp, direction)?;
            let mut c = cfg.clone();
            c.params = p;
            let res = simulate(&c)?;
            let predicted = match classify(&p).rho_bar {
                RhoBar::Flat(r) => r,
                RhoBar::Shock { left, right } => (left + right) / 2.0,
            };
            let excluded = boundary_distance(&p) < exclusion
                || matches!(classify(&p).rho_bar, RhoBar::Shock { .. });
            Ok(SweepRow {
                rho_minus: rm,
                rho_plus: rp,
                predicted,
                measured: res.bulk_density,
                agree: if excluded {
                    None
                } else {
                    Some((res.bulk_density - predicted).abs() <= tol)
                },
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub l: usize,
    pub max_z: f64,
    pub within_three_sigma: bool,
}

/// Compare simulated per-site densities against the exact marginals of
/// the matrix-product measure at small L.
pub fn small_l_cross_check(cfg: &SimConfig) -> Result<CrossCheckReport, Error> {
    let l = cfg.l;
    if l > 8 {
        return Err(Error::resource("cross-check is for L <= 8"));
    }
    let measure = exact::stationary_measure(&cfg.params, l)?;
    let probs = measure.probabilities();
    let mut marginals = vec![0.0; l];
    for (c, &mu) in probs.iter().enumerate() {
        for (i, marg) in marginals.iter_mut().enumerate() {
            if c & (1 << i) != 0 {
                *marg += mu;
            }
        }
    }
    let res = simulate(cfg)?;
    let mut max_z: f64 = 0.0;
    for i in 0..l {
        let se = res.profile_stderr[i].max(1e-12);
        max_z = max_z.max((res.profile[i] - marginals[i]).abs() / se);
    }
    Ok(CrossCheckReport {
        l,
        max_z,
        within_three_sigma: max_z <= 3.0,
    })
}
