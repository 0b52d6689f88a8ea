//! The closed forms against their defining variational problems: the
//! quasipotential of explicit density profiles, the reduced entropy
//! maximizations, and the energy band edges.
//!
//!     cargo run --release --example variational_oracles

use tasep::closed::{energy_band, entropy};
use tasep::oracle::{
    oracle_energy_band, oracle_entropy, quasipotential_minus, quasipotential_plus,
};
use tasep::{Direction, Params, Profile};

fn main() {
    // quasipotential of a few explicit profiles, each direction with
    // its own functional
    let comp = Params::new(0.1, 0.7, Direction::Competitive).unwrap();
    let coop = Params::new(0.1, 0.7, Direction::Cooperative).unwrap();
    for (label, profile) in [
        ("constant 0.1", Profile::constant(0.1, 1).unwrap()),
        ("constant 0.4", Profile::constant(0.4, 1).unwrap()),
        ("step 0.1 -> 0.7 at 0.5", Profile::step(0.1, 0.7, 0.5).unwrap()),
        ("step 0.7 -> 0.1 at 0.5", Profile::step(0.7, 0.1, 0.5).unwrap()),
    ] {
        println!(
            "V+[{label}] = {:.6}   V-[{label}] = {:.6}",
            quasipotential_plus(&comp, &profile).unwrap(),
            quasipotential_minus(&coop, &profile).unwrap(),
        );
    }
    println!();

    // entropy and band against the grid-search oracles
    for (rm, rp, dir) in [
        (0.1, 0.7, Direction::Competitive),
        (0.25, 0.4, Direction::Cooperative),
    ] {
        let p = Params::new(rm, rp, dir).unwrap();
        let band = energy_band(&p);
        let (olo, ohi) = oracle_energy_band(&p);
        println!("== {dir} (rho- = {rm}, rho+ = {rp}) ==");
        println!(
            "band closed [{:.8}, {:.8}]  oracle [{olo:.8}, {ohi:.8}]",
            band.lo, band.hi
        );
        println!("{:>10} {:>12} {:>12} {:>10}", "E", "closed", "oracle", "gap");
        for i in 1..=6 {
            let e = band.lo + (band.hi - band.lo) * i as f64 / 7.0;
            let c = entropy(&p, e).finite().unwrap();
            let o = oracle_entropy(&p, e).finite().unwrap();
            println!("{e:>10.5} {c:>12.7} {o:>12.7} {:>10.2e}", (c - o).abs());
        }
        println!();
    }
}
