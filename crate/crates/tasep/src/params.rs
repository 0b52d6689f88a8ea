//! Model parameters: the two reservoir densities and the drive direction.

use crate::error::Error;
use crate::scalar::{self, PairConstants};
use serde::{Deserialize, Serialize};

/// The two totally asymmetric specializations. Competitive is the p=1
/// chain with injection alpha = rho- at the left and ejection
/// beta = 1-rho+ at the right; cooperative is the p=0 chain with
/// injection rho+ at the right and ejection 1-rho- at the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Competitive,
    Cooperative,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Competitive => write!(f, "competitive"),
            Direction::Cooperative => write!(f, "cooperative"),
        }
    }
}

/// Validated reservoir densities 0 < rho- < rho+ < 1 with a direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    rho_minus: f64,
    rho_plus: f64,
    direction: Direction,
}

impl Params {
    pub fn new(rho_minus: f64, rho_plus: f64, direction: Direction) -> Result<Self, Error> {
        if !(rho_minus > 0.0 && rho_minus < rho_plus && rho_plus < 1.0) {
            return Err(Error::invalid(format!(
                "need 0 < rho- < rho+ < 1, got ({rho_minus}, {rho_plus})"
            )));
        }
        Ok(Params {
            rho_minus,
            rho_plus,
            direction,
        })
    }

    pub fn rho_minus(&self) -> f64 {
        self.rho_minus
    }

    pub fn rho_plus(&self) -> f64 {
        self.rho_plus
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn phi_minus(&self) -> f64 {
        (self.rho_minus / (1.0 - self.rho_minus)).ln()
    }

    pub fn phi_plus(&self) -> f64 {
        (self.rho_plus / (1.0 - self.rho_plus)).ln()
    }

    /// phi0 = sup(|phi-|, |phi+|).
    pub fn phi0(&self) -> f64 {
        self.phi_minus().abs().max(self.phi_plus().abs())
    }

    /// rho0 = e^{phi0}/(1+e^{phi0}) >= 1/2.
    pub fn rho0(&self) -> f64 {
        1.0 / (1.0 + (-self.phi0()).exp())
    }

    /// The boundary density whose |phi| equals phi0 (ties go to rho+).
    pub fn rho_star(&self) -> f64 {
        if self.phi_plus().abs() >= self.phi_minus().abs() {
            self.rho_plus
        } else {
            self.rho_minus
        }
    }

    pub fn pair(&self) -> PairConstants {
        scalar::pair_constants(self.rho_minus, self.rho_plus)
            .expect("Params invariant guarantees valid pair")
    }
}
