//! Closed-form entropy S(E) over the energy band and pressure P(theta),
//! for one parameter pair per driving direction.
//!
//!     cargo run --example entropy_pressure_curves

use tasep::closed::{energy_band, entropy, pressure};
use tasep::{Direction, Params, Value};

fn main() {
    for (rm, rp, dir) in [
        (0.1, 0.7, Direction::Competitive),
        (0.25, 0.4, Direction::Cooperative),
    ] {
        let p = Params::new(rm, rp, dir).unwrap();
        let band = energy_band(&p);
        println!("== {dir} (rho- = {rm}, rho+ = {rp}) ==");
        println!("energy band [{:.6}, {:.6}]", band.lo, band.hi);
        println!("{:>10} {:>12}", "E", "S(E)");
        for i in 0..=10 {
            let e = band.lo + (band.hi - band.lo) * i as f64 / 10.0;
            match entropy(&p, e) {
                Value::Finite(s) => println!("{e:>10.5} {s:>12.6}"),
                Value::NegInf => println!("{e:>10.5} {:>12}", "-inf"),
            }
        }
        println!("{:>10} {:>12}", "theta", "P(theta)");
        for i in 0..=12 {
            let th = -3.0 + 6.0 * i as f64 / 12.0;
            println!("{th:>10.2} {:>12.6}", pressure(&p, th));
        }
        println!();
    }
}
