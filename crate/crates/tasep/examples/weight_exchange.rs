//! Exhaustive exact check of the weight-exchange sign property: moving
//! a particle one site forward changes the stationary weight with a
//! strict, direction-dependent sign, for every configuration and every
//! exchangeable position.
//!
//!     cargo run --release --example weight_exchange

use num::rational::BigRational;
use num::BigInt;
use tasep::exact::lemma_sign_check;
use tasep::Direction;

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn main() {
    for dir in [Direction::Competitive, Direction::Cooperative] {
        for (pn, pd, qn, qd) in [(1, 10, 7, 10), (1, 4, 3, 4), (2, 5, 9, 10)] {
            let rep = lemma_sign_check(&ratio(pn, pd), &ratio(qn, qd), dir, 8).unwrap();
            println!(
                "{dir} rho- = {pn}/{pd}, rho+ = {qn}/{qd}, L = {}: {} exchanges, {} violations, {} zeros -> {}",
                rep.l,
                rep.pairs_checked,
                rep.violations,
                rep.zeros,
                if rep.holds_strictly() { "strict" } else { "FAILED" },
            );
        }
    }
}
