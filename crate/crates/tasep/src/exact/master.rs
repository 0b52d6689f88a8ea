//! Independent small-size oracle: the stationary distribution from a
//! dense linear solve of the full 2^L master equation, built from the
//! jump rates directly (no algebra involved).

use crate::error::Error;
use crate::params::{Direction, Params};
use nalgebra::{DMatrix, DVector};

pub const MASTER_CAP: usize = 12;

/// Stationary probability vector over {0,1}^L (bit i-1 = site i).
///
/// Competitive: unit-rate right hops, injection rho- at site 1,
/// ejection 1-rho+ at site L. Cooperative: unit-rate left hops,
/// injection rho+ at site L, ejection 1-rho- at site 1.
pub fn master_equation_stationary(p: &Params, l: usize) -> Result<Vec<f64>, Error> {
    if l == 0 || l > MASTER_CAP {
        return Err(Error::resource(format!(
            "L = {l} outside master-equation range 1..={MASTER_CAP}"
        )));
    }
    let n = 1usize << l;
    // a[j*n + i] = rate i -> j accumulated into Q^T
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut add = |from: usize, to: usize, rate: f64| {
        a[(to, from)] += rate;
        a[(from, from)] -= rate;
    };
    for c in 0..n {
        match p.direction() {
            Direction::Competitive => {
                if c & 1 == 0 {
                    add(c, c | 1, p.rho_minus());
                }
                if c & (1 << (l - 1)) != 0 {
                    add(c, c & !(1 << (l - 1)), 1.0 - p.rho_plus());
                }
                for i in 0..l - 1 {
                    if c & (1 << i) != 0 && c & (1 << (i + 1)) == 0 {
                        add(c, c ^ (1 << i) ^ (1 << (i + 1)), 1.0);
                    }
                }
            }
            Direction::Cooperative => {
                if c & (1 << (l - 1)) == 0 {
                    add(c, c | (1 << (l - 1)), p.rho_plus());
                }
                if c & 1 != 0 {
                    add(c, c & !1usize, 1.0 - p.rho_minus());
                }
                for i in 0..l - 1 {
                    if c & (1 << i) == 0 && c & (1 << (i + 1)) != 0 {
                        add(c, c ^ (1 << i) ^ (1 << (i + 1)), 1.0);
                    }
                }
            }
        }
    }
    // replace one balance equation by the normalization
    for i in 0..n {
        a[(n - 1, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[n - 1] = 1.0;
    let pi = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::invalid("singular master-equation system"))?;
    Ok(pi.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::stationary_measure;
    use approx::assert_abs_diff_eq;

    #[test]
    fn l1_two_state_balance() {
        let p = Params::new(0.1, 0.7, Direction::Competitive).unwrap();
        let pi = master_equation_stationary(&p, 1).unwrap();
        let (a, b) = (0.1, 0.3);
        assert_abs_diff_eq!(pi[1], a / (a + b), epsilon = 1e-13);
    }

    #[test]
    fn matches_matrix_product_both_directions() {
        for dir in [Direction::Competitive, Direction::Cooperative] {
            let p = Params::new(0.1, 0.7, dir).unwrap();
            for l in 2..=6 {
                let pi = master_equation_stationary(&p, l).unwrap();
                let m = stationary_measure(&p, l).unwrap();
                for c in 0..(1usize << l) {
                    assert_abs_diff_eq!(pi[c], m.probability(c), epsilon = 1e-11);
                }
            }
        }
    }
}
