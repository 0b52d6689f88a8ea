//! The local-equilibrium diagnostic sup_M sup_eta |log(Z mu(eta|M))|:
//! zero when the measure conditioned on box occupation numbers is
//! uniform (K = L, or equilibrium parameters), nonzero and converging
//! upward to a fixed-K plateau for the driven chain.
//!
//!     cargo run --release --example local_equilibrium

use tasep::exact::{local_eq_diagnostic, stationary_measure};
use tasep::{Direction, Params};

fn main() {
    for (rm, rp, dir) in [
        (0.1, 0.7, Direction::Competitive),
        (0.25, 0.4, Direction::Cooperative),
    ] {
        let p = Params::new(rm, rp, dir).unwrap();
        println!("== {dir} (rho- = {rm}, rho+ = {rp}) ==");
        println!("{:>4} {:>4} {:>12}", "L", "K", "diagnostic");
        for l in [6usize, 8, 10, 12] {
            let m = stationary_measure(&p, l).unwrap();
            for k in (1..=l).filter(|k| l % k == 0) {
                println!("{l:>4} {k:>4} {:>12.6}", local_eq_diagnostic(&m, k).unwrap());
            }
        }
        println!();
    }
}
