//! P(theta) equals the Legendre transform sup_E [theta E + S(E)] with
//! the opposite sign convention absorbed; here we verify the numerical
//! transform of the closed-form S against the closed-form P.
//!
//!     cargo run --release --example legendre_duality

use tasep::closed::{energy_band, entropy, entropy_breakpoints, pressure};
use tasep::oracle::legendre_transform;
use tasep::{Curve, Direction, Params};

fn main() {
    for (rm, rp, dir) in [
        (0.1, 0.7, Direction::Competitive),
        (0.1, 0.3, Direction::Competitive),
        (0.25, 0.4, Direction::Cooperative),
        (0.2, 0.6, Direction::Cooperative),
    ] {
        let p = Params::new(rm, rp, dir).unwrap();
        let band = energy_band(&p);
        // uniform grid plus the exact kink energies of S
        let mut xs: Vec<f64> = (0..10_000)
            .map(|i| band.lo + (band.hi - band.lo) * i as f64 / 9_999.0)
            .chain(entropy_breakpoints(&p))
            .collect();
        xs.sort_by(|a, b| a.total_cmp(b));
        let ys = xs.iter().map(|&e| entropy(&p, e)).collect();
        let curve = Curve::new(xs, ys);
        let mut worst = 0.0f64;
        let mut th = -3.0;
        while th <= 3.0 {
            // P- has a genuine slope jump at theta = -1
            if !(dir == Direction::Cooperative && (th + 1.0f64).abs() < 0.05) {
                worst = worst.max((legendre_transform(&curve, th) - pressure(&p, th)).abs());
            }
            th += 0.05;
        }
        println!("{dir} (rho- = {rm}, rho+ = {rp}): max |transform - closed| = {worst:.2e}");
    }
}
