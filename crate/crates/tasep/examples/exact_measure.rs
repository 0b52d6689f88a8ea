//! The exact matrix-product stationary measure at small L: rational
//! probabilities, cross-check against a dense master-equation solve,
//! the per-configuration energy spectrum and finite-size pressure.
//!
//!     cargo run --example exact_measure

use num::rational::BigRational;
use num::BigInt;
use tasep::exact::{
    self, finite_pressure, gibbs_shannon_exact, master::master_equation_stationary,
    stationary_measure, stationary_measure_rational, y_mean_var, y_spectrum,
};
use tasep::{Direction, Params};

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn main() {
    let l = 3;
    let p = Params::new(0.1, 0.7, Direction::Competitive).unwrap();

    // exact rational probabilities
    let rational = stationary_measure_rational(&ratio(1, 10), &ratio(7, 10), p.direction(), l).unwrap();
    println!("exact stationary measure, {} (rho- = 1/10, rho+ = 7/10), L = {l}:", p.direction());
    for (c, q) in rational.probabilities().iter().enumerate() {
        println!("  {c:0l$b}  {q}");
    }

    // the float measure agrees with the independent master-equation solve
    let m = stationary_measure(&p, l).unwrap();
    let pi = master_equation_stationary(&p, l).unwrap();
    let gap = m
        .probabilities()
        .iter()
        .zip(&pi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("max |matrix product - master equation| = {gap:.2e}");

    // per-configuration energies Y = -(1/L) log mu and their statistics
    let m8 = stationary_measure(&p, 8).unwrap();
    let spectrum = y_spectrum(&m8);
    let (lo, hi) = (spectrum.first().unwrap().0, spectrum.last().unwrap().0);
    let (mean, var) = y_mean_var(&m8);
    println!("L = 8: Y range [{lo:.4}, {hi:.4}], mean {mean:.4}, L*var {:.4}", 8.0 * var);
    println!(
        "S(mu)/L = {:.4}, P_8(1) = {:.1e}, P_8(0) + log 2 = {:.1e}",
        gibbs_shannon_exact(&m8) / 8.0,
        finite_pressure(&m8, 1.0),
        finite_pressure(&m8, 0.0) + std::f64::consts::LN_2,
    );

    // the equilibrium line carries the Bernoulli product measure
    let eq = exact::equilibrium_measure(0.3, 4).unwrap();
    println!("equilibrium rho = 0.3, L = 4: mu(0000) = {:.10} (0.7^4 = {:.10})", eq.probability(0), 0.7f64.powi(4));
}
