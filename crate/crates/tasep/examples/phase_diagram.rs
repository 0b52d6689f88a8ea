//! Phase classification, stationary bulk density, stationary energy and
//! the Gaussian variance of energy fluctuations across parameter space.
//!
//!     cargo run --example phase_diagram

use tasep::closed::{classify, gaussian_variance, stationary_energy, RhoBar};
use tasep::{Direction, Params};

fn main() {
    for dir in [Direction::Competitive, Direction::Cooperative] {
        println!("== {dir} ==");
        println!(
            "{:>6} {:>6} {:>16} {:>18} {:>12} {:>12}",
            "rho-", "rho+", "phase", "rho_bar", "S(rho_bar)", "variance"
        );
        for (rm, rp) in [
            (0.1, 0.3),
            (0.1, 0.7),
            (0.2, 0.6),
            (0.3, 0.7),
            (0.6, 0.9),
            (0.15, 0.95),
        ] {
            let p = Params::new(rm, rp, dir).unwrap();
            let info = classify(&p);
            let rho_bar = match info.rho_bar {
                RhoBar::Flat(r) => format!("{r:.3}"),
                RhoBar::Shock { left, right } => format!("{left:.3}|{right:.3} shock"),
            };
            let var = match gaussian_variance(&p) {
                Some(v) => format!("{v:.6}"),
                None => "non-Gaussian".into(),
            };
            println!(
                "{rm:>6.2} {rp:>6.2} {:>16} {rho_bar:>18} {:>12.6} {var:>12}",
                format!("{:?}", info.phase),
                stationary_energy(&p),
            );
        }
        println!();
    }
}
