//! Kinetic Monte Carlo simulation of the open chain: stationary density
//! profile, bulk density against the predicted phase, and the current.
//!
//!     cargo run --release --example kmc_simulation

use tasep::closed::{classify, RhoBar};
use tasep::sim::{simulate, SimConfig};
use tasep::{Direction, Params};

fn main() {
    for (rm, rp, dir) in [
        (0.2, 0.9, Direction::Competitive),
        (0.3, 0.8, Direction::Cooperative),
    ] {
        let p = Params::new(rm, rp, dir).unwrap();
        let cfg = SimConfig {
            l: 200,
            params: p,
            t_burnin: 2000.0,
            t_measure: 4000.0,
            seed: 7,
            n_replicas: 4,
        };
        let res = simulate(&cfg).unwrap();
        let predicted = match classify(&p).rho_bar {
            RhoBar::Flat(r) => r,
            RhoBar::Shock { left, right } => (left + right) / 2.0,
        };
        println!("== {dir} (rho- = {rm}, rho+ = {rp}), L = {} ==", cfg.l);
        println!(
            "bulk density {:.4} +- {:.4} (predicted {predicted:.4})",
            res.bulk_density, res.bulk_stderr
        );
        println!("current {:.4} +- {:.4}", res.current, res.current_stderr);
        // coarse profile: average of 20-site blocks
        print!("profile ");
        for block in res.profile.chunks(20) {
            print!("{:.3} ", block.iter().sum::<f64>() / block.len() as f64);
        }
        println!("\n");
    }
}
