//! Simulated bulk density over the default 5x5 parameter grid against
//! the predicted stationary density, both directions. Points within the
//! exclusion band around a phase boundary are reported but not judged.
//!
//!     cargo run --release --example phase_sweep

use tasep::sim::{default_sweep_grid, phase_sweep, SimConfig};
use tasep::{Direction, Params};

fn main() {
    let cfg = SimConfig {
        l: 150,
        params: Params::new(0.1, 0.7, Direction::Competitive).unwrap(),
        t_burnin: 1500.0,
        t_measure: 3000.0,
        seed: 11,
        n_replicas: 3,
    };
    for dir in [Direction::Competitive, Direction::Cooperative] {
        let rows = phase_sweep(&default_sweep_grid(), dir, &cfg, 0.03, 0.05).unwrap();
        println!("== {dir} ==");
        println!("{:>6} {:>6} {:>10} {:>10} {:>9}", "rho-", "rho+", "predicted", "measured", "verdict");
        let (mut judged, mut agreeing) = (0, 0);
        for r in &rows {
            let verdict = match r.agree {
                None => "excluded",
                Some(true) => {
                    judged += 1;
                    agreeing += 1;
                    "ok"
                }
                Some(false) => {
                    judged += 1;
                    "off"
                }
            };
            println!(
                "{:>6.2} {:>6.3} {:>10.3} {:>10.4} {verdict:>9}",
                r.rho_minus, r.rho_plus, r.predicted, r.measured
            );
        }
        println!("{agreeing}/{judged} judged points agree\n");
    }
}
