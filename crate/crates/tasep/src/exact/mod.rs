//! Exact finite-size stationary measures from the quadratic algebra
//! DE = D + E with <W|E = alpha^{-1}<W| and D|V> = beta^{-1}|V>.
//!
//! Weights are evaluated by symbolic normal ordering (no explicit
//! matrix representation: the standard bidiagonal one has a divergent
//! <W|V> pairing for alpha + beta < 1). Everything is generic over the
//! scalar type so the same code runs in f64 and in exact rationals.

pub mod master;

use crate::error::Error;
use crate::params::{Direction, Params};
use num::bigint::BigUint;
use num::rational::BigRational;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul};

/// Sites are 1..=L; bit i-1 of a configuration index is the occupancy
/// of site i. Site 1 is the injection side of the p=1 chain.
pub const ENUM_CAP: usize = 20;
/// Rational mode is exact but slow; larger L falls back to floats.
pub const RATIONAL_CAP: usize = 14;

/// Scalar abstraction: f64 or BigRational.
pub trait Scalar:
    Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> + Div<Output = Self> + PartialOrd
{
}
impl Scalar for f64 {}
impl Scalar for BigRational {}

/// A word in D, E reduced to the basis E^n D^m with nonnegative integer
/// coefficients, via D^m E = sum_{k=1}^m D^k + E.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub coeffs: BTreeMap<(usize, usize), BigUint>,
    pub word_len: usize,
}

impl NormalForm {
    fn identity() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, 0), BigUint::one());
        NormalForm {
            coeffs,
            word_len: 0,
        }
    }

    /// Right-multiply by D (occupied site) or E (empty site).
    fn push(&mut self, occupied: bool) {
        let mut next: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
        for (&(n, m), c) in &self.coeffs {
            if occupied {
                *next.entry((n, m + 1)).or_insert_with(BigUint::zero) += c;
            } else if m == 0 {
                *next.entry((n + 1, 0)).or_insert_with(BigUint::zero) += c;
            } else {
                // E^n D^m E = sum_{k=1}^m E^n D^k + E^{n+1}
                for k in 1..=m {
                    *next.entry((n, k)).or_insert_with(BigUint::zero) += c;
                }
                *next.entry((n + 1, 0)).or_insert_with(BigUint::zero) += c;
            }
        }
        self.coeffs = next;
        self.word_len += 1;
    }
}

/// Normal-order the word of a configuration (occupied -> D, empty -> E).
pub fn normal_order(bits: &[bool]) -> NormalForm {
    let mut nf = NormalForm::identity();
    for &b in bits {
        nf.push(b);
    }
    nf
}

/// Pair a normal form: <W| sum c_{n,m} E^n D^m |V> = sum c a^{-n} b^{-m}.
pub fn pair<T: Scalar>(nf: &NormalForm, alpha_inv: &T, beta_inv: &T) -> T {
    let mut total = T::zero();
    for (&(n, m), c) in &nf.coeffs {
        let mut term = uint_to_scalar::<T>(c);
        for _ in 0..n {
            term = term * alpha_inv.clone();
        }
        for _ in 0..m {
            term = term * beta_inv.clone();
        }
        total = total + term;
    }
    total
}

fn uint_to_scalar<T: Scalar>(c: &BigUint) -> T {
    // coefficients stay small enough for repeated increment at test
    // sizes, but go through doubling to be safe
    let mut acc = T::zero();
    let one = T::one();
    for bit in c.to_radix_be(2) {
        acc = acc.clone() + acc;
        if bit == 1 {
            acc = acc + one.clone();
        }
    }
    acc
}

/// Single-configuration weight omega = <W| word |V> for the p=1 chain.
pub fn weight<T: Scalar>(bits: &[bool], alpha_inv: &T, beta_inv: &T) -> T {
    // v[m] tracks sum_n c_{n,m} alpha^{-n} while reading the word
    let mut v: Vec<T> = vec![T::one()];
    for &b in bits {
        v = push_letter(&v, b, alpha_inv);
    }
    horner(&v, beta_inv)
}

fn push_letter<T: Scalar>(v: &[T], occupied: bool, alpha_inv: &T) -> Vec<T> {
    if occupied {
        let mut next = Vec::with_capacity(v.len() + 1);
        next.push(T::zero());
        next.extend(v.iter().cloned());
        next
    } else {
        // suffix sums: new v0 = alpha^{-1} * total, new vk = sum_{m>=k} vm
        let len = v.len().max(1);
        let mut next = vec![T::zero(); len];
        let mut suffix = T::zero();
        for k in (1..v.len()).rev() {
            suffix = suffix + v[k].clone();
            next[k] = suffix.clone();
        }
        let total = suffix + v[0].clone();
        next[0] = alpha_inv.clone() * total;
        next
    }
}

fn horner<T: Scalar>(v: &[T], beta_inv: &T) -> T {
    let mut acc = T::zero();
    for m in (0..v.len()).rev() {
        acc = v[m].clone() + beta_inv.clone() * acc;
    }
    acc
}

/// Effective p=1 boundary rates and whether the user's configuration is
/// spatially reflected relative to the p=1 chain.
///
/// Cooperative dynamics is the mirror image of the p=1 chain with
/// injection rho+ and ejection 1-rho-.
pub fn effective_rates(p: &Params) -> (f64, f64, bool) {
    match p.direction() {
        Direction::Competitive => (p.rho_minus(), 1.0 - p.rho_plus(), false),
        Direction::Cooperative => (p.rho_plus(), 1.0 - p.rho_minus(), true),
    }
}

/// The exact stationary measure on {0,1}^L, indexed by configuration
/// bits of the user-facing chain.
#[derive(Debug, Clone)]
pub struct ExactMeasure<T> {
    pub l: usize,
    pub alpha: T,
    pub beta: T,
    pub weights: Vec<T>,
    pub z: T,
}

impl<T: Scalar> ExactMeasure<T> {
    pub fn probability(&self, config: usize) -> T {
        self.weights[config].clone() / self.z.clone()
    }

    pub fn probabilities(&self) -> Vec<T> {
        (0..self.weights.len())
            .map(|c| self.probability(c))
            .collect()
    }
}

/// All 2^L weights of the p=1 chain by depth-first traversal of the
/// word tree; sibling prefixes share the partial normal form.
fn weights_p1<T: Scalar>(l: usize, alpha_inv: &T, beta_inv: &T) -> Vec<T> {
    let mut out = vec![T::zero(); 1usize << l];
    let mut stack: Vec<(usize, usize, Vec<T>)> = vec![(0, 0, vec![T::one()])];
    while let Some((depth, idx, v)) = stack.pop() {
        if depth == l {
            out[idx] = horner(&v, beta_inv);
            continue;
        }
        stack.push((depth + 1, idx | (1 << depth), push_letter(&v, true, alpha_inv)));
        stack.push((depth + 1, idx, push_letter(&v, false, alpha_inv)));
    }
    out
}

fn reflect_bits(c: usize, l: usize) -> usize {
    let mut r = 0;
    for i in 0..l {
        if c & (1 << i) != 0 {
            r |= 1 << (l - 1 - i);
        }
    }
    r
}

fn build_measure<T: Scalar>(l: usize, alpha: T, beta: T, reflected: bool) -> ExactMeasure<T> {
    let alpha_inv = T::one() / alpha.clone();
    let beta_inv = T::one() / beta.clone();
    let w = weights_p1(l, &alpha_inv, &beta_inv);
    let weights: Vec<T> = if reflected {
        (0..w.len()).map(|c| w[reflect_bits(c, l)].clone()).collect()
    } else {
        w
    };
    let z = weights
        .iter()
        .fold(T::zero(), |acc, x| acc + x.clone());
    ExactMeasure {
        l,
        alpha,
        beta,
        weights,
        z,
    }
}

/// Equilibrium chain alpha = rho, beta = 1 - rho: the stationary state
/// is the Bernoulli(rho) product measure.
pub fn equilibrium_measure(rho: f64, l: usize) -> Result<ExactMeasure<f64>, Error> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("density {rho} outside (0,1)")));
    }
    if l == 0 || l > ENUM_CAP {
        return Err(Error::resource(format!(
            "L = {l} outside enumeration range 1..={ENUM_CAP}"
        )));
    }
    Ok(build_measure(l, rho, 1.0 - rho, false))
}

/// Float-mode stationary measure for either direction.
pub fn stationary_measure(p: &Params, l: usize) -> Result<ExactMeasure<f64>, Error> {
    if l == 0 || l > ENUM_CAP {
        return Err(Error::resource(format!(
            "L = {l} outside enumeration range 1..={ENUM_CAP}"
        )));
    }
    let (alpha, beta, reflected) = effective_rates(p);
    Ok(build_measure(l, alpha, beta, reflected))
}

/// Rational-mode stationary measure from exact reservoir densities.
pub fn stationary_measure_rational(
    rho_minus: &BigRational,
    rho_plus: &BigRational,
    direction: Direction,
    l: usize,
) -> Result<ExactMeasure<BigRational>, Error> {
    if l == 0 || l > RATIONAL_CAP {
        return Err(Error::resource(format!(
            "L = {l} outside rational-mode range 1..={RATIONAL_CAP}"
        )));
    }
    let zero = BigRational::zero();
    let one = BigRational::one();
    // equality allowed: on the product line the algebra reduces to the
    // Bernoulli measure
    if !(rho_minus > &zero && rho_minus <= rho_plus && rho_plus < &one) {
        return Err(Error::invalid("need 0 < rho- <= rho+ < 1"));
    }
    let (alpha, beta, reflected) = match direction {
        Direction::Competitive => (rho_minus.clone(), one - rho_plus.clone(), false),
        Direction::Cooperative => (rho_plus.clone(), one - rho_minus.clone(), true),
    };
    Ok(build_measure(l, alpha, beta, reflected))
}

/// Outcome of the exhaustive weight-monotonicity check: exchanging a
/// local "10" pattern changes the weight with the strict sign of
/// rho- - rho+ of the effective p=1 chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub l: usize,
    pub pairs_checked: usize,
    pub violations: usize,
    pub zeros: usize,
}

impl LemmaReport {
    pub fn holds_strictly(&self) -> bool {
        self.violations == 0 && self.zeros == 0
    }
}

/// Exhaustive exact sign check over every configuration and every
/// exchangeable position of the p=1 chain with the given effective
/// densities (already direction-mapped by the caller for cooperative).
pub fn lemma_sign_check(
    rho_minus: &BigRational,
    rho_plus: &BigRational,
    direction: Direction,
    l: usize,
) -> Result<LemmaReport, Error> {
    if !(2..=RATIONAL_CAP).contains(&l) {
        return Err(Error::resource(format!(
            "L = {l} outside sign-check range 2..={RATIONAL_CAP}"
        )));
    }
    let one = BigRational::one();
    // p=1 boundary rates; the sign predicted is that of the effective
    // density difference, which flips between the two directions
    let (alpha, beta) = match direction {
        Direction::Competitive => (rho_minus.clone(), one.clone() - rho_plus.clone()),
        Direction::Cooperative => (rho_plus.clone(), one.clone() - rho_minus.clone()),
    };
    let eff_diff = match direction {
        Direction::Competitive => rho_minus - rho_plus, // negative
        Direction::Cooperative => rho_plus - rho_minus, // positive
    };
    let want_positive = eff_diff > BigRational::zero();
    let alpha_inv = one.clone() / alpha;
    let beta_inv = one / beta;
    let w = weights_p1(l, &alpha_inv, &beta_inv);
    let mut report = LemmaReport {
        l,
        pairs_checked: 0,
        violations: 0,
        zeros: 0,
    };
    for c in 0..w.len() {
        for x in 0..l - 1 {
            // site x+1 occupied, site x+2 empty
            if c & (1 << x) != 0 && c & (1 << (x + 1)) == 0 {
                let swapped = c ^ (1 << x) ^ (1 << (x + 1));
                let diff = w[c].clone() - w[swapped].clone();
                report.pairs_checked += 1;
                if diff.is_zero() {
                    report.zeros += 1;
                } else if (diff > BigRational::zero()) != want_positive {
                    report.violations += 1;
                }
            }
        }
    }
    Ok(report)
}

/// The spectrum of Y = -(1/L) log mu: sorted atoms with merged
/// probabilities.
pub fn y_spectrum(measure: &ExactMeasure<f64>) -> Vec<(f64, f64)> {
    let l = measure.l as f64;
    let mut atoms: Vec<(f64, f64)> = measure
        .probabilities()
        .iter()
        .map(|&mu| (-mu.ln() / l, mu))
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (y, pr) in atoms {
        match merged.last_mut() {
            Some(last) if (last.0 - y).abs() <= 1e-12 => last.1 += pr,
            _ => merged.push((y, pr)),
        }
    }
    merged
}

/// Mean and variance of Y under the exact measure.
pub fn y_mean_var(measure: &ExactMeasure<f64>) -> (f64, f64) {
    let l = measure.l as f64;
    let mut mean = 0.0;
    let mut sq = 0.0;
    for mu in measure.probabilities() {
        let y = -mu.ln() / l;
        mean += mu * y;
        sq += mu * y * y;
    }
    (mean, sq - mean * mean)
}

/// Finite-size pressure P_L(theta) = -(1/L) log sum mu^theta.
pub fn finite_pressure(measure: &ExactMeasure<f64>, theta: f64) -> f64 {
    let sum: f64 = measure.probabilities().iter().map(|mu| mu.powf(theta)).sum();
    -sum.ln() / measure.l as f64
}

/// Gibbs-Shannon entropy sum -mu log mu (not per site).
pub fn gibbs_shannon_exact(measure: &ExactMeasure<f64>) -> f64 {
    measure
        .probabilities()
        .iter()
        .map(|&mu| if mu > 0.0 { -mu * mu.ln() } else { 0.0 })
        .sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Local-equilibrium diagnostic: split the chain into K boxes of equal
/// size, condition on the box occupancy vector M, and report
/// sup_M sup_eta |log(Z(M) mu(eta | M))| with Z(M) = |Omega(M)|.
/// Zero means the conditional law is exactly uniform on each fiber.
pub fn local_eq_diagnostic(measure: &ExactMeasure<f64>, k: usize) -> Result<f64, Error> {
    let l = measure.l;
    if k == 0 || l % k != 0 {
        return Err(Error::invalid(format!("K = {k} must divide L = {l}")));
    }
    let b = l / k;
    let box_mask = (1usize << b) - 1;
    let mut fibers: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let probs = measure.probabilities();
    let occ = |c: usize| -> Vec<usize> {
        (0..k)
            .map(|i| ((c >> (i * b)) & box_mask).count_ones() as usize)
            .collect()
    };
    for (c, &mu) in probs.iter().enumerate() {
        *fibers.entry(occ(c)).or_insert(0.0) += mu;
    }
    let mut sup: f64 = 0.0;
    for (c, &mu) in probs.iter().enumerate() {
        let m = occ(c);
        let z: f64 = m.iter().map(|&mi| binomial(b, mi)).product();
        let total = fibers[&m];
        sup = sup.max((z * mu / total).ln().abs());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num::BigInt;

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn comp(rm: f64, rp: f64) -> Params {
        Params::new(rm, rp, Direction::Competitive).unwrap()
    }

    #[test]
    fn normal_order_examples() {
        let one = BigUint::one();
        // DE = D + E
        let nf = normal_order(&[true, false]);
        assert_eq!(nf.coeffs.len(), 2);
        assert_eq!(nf.coeffs[&(0, 1)], one);
        assert_eq!(nf.coeffs[&(1, 0)], one);
        // ED already ordered
        let nf = normal_order(&[false, true]);
        assert_eq!(nf.coeffs.len(), 1);
        assert_eq!(nf.coeffs[&(1, 1)], one);
        // DDE = D^2 + D + E
        let nf = normal_order(&[true, true, false]);
        assert_eq!(nf.coeffs.len(), 3);
        assert_eq!(nf.coeffs[&(0, 2)], one);
        assert_eq!(nf.coeffs[&(0, 1)], one);
        assert_eq!(nf.coeffs[&(1, 0)], one);
    }

    /// D^m E = sum_{k=1}^m D^k + E re-derived by blind string rewriting
    /// with the single rule X DE Y -> X D Y + X E Y.
    #[test]
    fn reduction_rule_from_rewriting() {
        for m in 1..=4usize {
            let mut words: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
            let mut start = vec![true; m];
            start.push(false);
            words.insert(start, 1);
            loop {
                let target = words.iter().find_map(|(word, _)| {
                    word.windows(2)
                        .position(|w| w == [true, false])
                        .map(|i| (word.clone(), i))
                });
                let Some((word, i)) = target else { break };
                let mult = words.remove(&word).unwrap();
                let mut with_d = word.clone();
                with_d.remove(i + 1);
                let mut with_e = word;
                with_e.remove(i);
                *words.entry(with_d).or_insert(0) += mult;
                *words.entry(with_e).or_insert(0) += mult;
            }
            let mut expected: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
            for k in 1..=m {
                expected.insert(vec![true; k], 1);
            }
            expected.insert(vec![false], 1);
            assert_eq!(words, expected, "m = {m}");
        }
    }

    #[test]
    fn dehp_commutator_scalar() {
        // <W|(DE - ED)|V> = 1/alpha + 1/beta - 1/(alpha beta)
        let (a, b) = (0.1f64, 0.3f64);
        let de = pair(&normal_order(&[true, false]), &(1.0 / a), &(1.0 / b));
        let ed = pair(&normal_order(&[false, true]), &(1.0 / a), &(1.0 / b));
        assert_abs_diff_eq!(de - ed, 1.0 / a + 1.0 / b - 1.0 / (a * b), epsilon = 1e-12);
        // and it cancels exactly on the product-measure line beta = 1-alpha
        let (a, b) = (ratio(2, 7), ratio(5, 7));
        let ai = BigRational::one() / a.clone();
        let bi = BigRational::one() / b.clone();
        let de = pair(&normal_order(&[true, false]), &ai, &bi);
        let ed = pair(&normal_order(&[false, true]), &ai, &bi);
        assert_eq!(de - ed, ai.clone() + bi.clone() - ai * bi);
    }

    #[test]
    fn l2_weights_by_hand() {
        let (a, b) = (0.1f64, 0.3f64);
        let (ai, bi) = (1.0 / a, 1.0 / b);
        assert_abs_diff_eq!(weight(&[true, true], &ai, &bi), 1.0 / (b * b), epsilon = 1e-12);
        assert_abs_diff_eq!(weight(&[true, false], &ai, &bi), 1.0 / a + 1.0 / b, epsilon = 1e-12);
        assert_abs_diff_eq!(weight(&[false, true], &ai, &bi), 1.0 / (a * b), epsilon = 1e-12);
        assert_abs_diff_eq!(weight(&[false, false], &ai, &bi), 1.0 / (a * a), epsilon = 1e-12);
    }

    #[test]
    fn weight_agrees_with_normal_order_pairing() {
        let (ai, bi) = (1.0 / 0.35, 1.0 / 0.8);
        for l in 1..=8usize {
            for c in 0..(1usize << l) {
                let bits: Vec<bool> = (0..l).map(|i| c & (1 << i) != 0).collect();
                let via_nf = pair(&normal_order(&bits), &ai, &bi);
                assert_abs_diff_eq!(weight(&bits, &ai, &bi), via_nf, epsilon = 1e-9 * via_nf);
            }
        }
    }

    #[test]
    fn partition_function_l1() {
        let m = stationary_measure(&comp(0.1, 0.7), 1).unwrap();
        // Z(1) = 1/alpha + 1/beta, mu(1) = alpha/(alpha+beta) pattern
        assert_abs_diff_eq!(m.z, 1.0 / 0.1 + 1.0 / 0.3, epsilon = 1e-12);
        let a = 0.1;
        let b = 0.3;
        assert_abs_diff_eq!(m.probability(1), a / (a + b), epsilon = 1e-12);
    }

    #[test]
    fn bernoulli_on_product_line() {
        // alpha + beta = 1 (rho- = rho+ = rho would be degenerate for
        // Params, so drive the builder directly)
        let rho: f64 = 0.3;
        let m = build_measure(6, rho, 1.0 - rho, false);
        for c in 0..(1usize << 6) {
            let k = (c as u32).count_ones() as f64;
            let bern = rho.powf(k) * (1.0 - rho).powf(6.0 - k);
            assert_abs_diff_eq!(m.probability(c), bern, epsilon = 1e-12);
        }
        // exact in rationals too
        let m = build_measure(5, ratio(2, 5), ratio(3, 5), false);
        for c in 0..(1usize << 5) {
            let k = (c as u32).count_ones();
            let mut bern = BigRational::one();
            for _ in 0..k {
                bern *= ratio(2, 5);
            }
            for _ in 0..(5 - k) {
                bern *= ratio(3, 5);
            }
            assert_eq!(m.probability(c), bern);
        }
    }

    #[test]
    fn cooperative_is_reflected() {
        let p = Params::new(0.25, 0.4, Direction::Cooperative).unwrap();
        let m = stationary_measure(&p, 5).unwrap();
        let direct = build_measure(5, 0.4, 0.75, false);
        for c in 0..(1usize << 5) {
            assert_abs_diff_eq!(
                m.probability(c),
                direct.probability(reflect_bits(c, 5)),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn rational_and_float_measures_agree() {
        let p = comp(0.1, 0.7);
        let mf = stationary_measure(&p, 7).unwrap();
        let mr =
            stationary_measure_rational(&ratio(1, 10), &ratio(7, 10), Direction::Competitive, 7)
                .unwrap();
        for c in 0..(1usize << 7) {
            let exact: f64 = {
                let q = mr.probability(c);
                let num: f64 = q.numer().to_string().parse().unwrap();
                let den: f64 = q.denom().to_string().parse().unwrap();
                num / den
            };
            assert_abs_diff_eq!(mf.probability(c), exact, epsilon = 1e-11);
        }
    }

    #[test]
    fn sign_check_small() {
        let r = lemma_sign_check(&ratio(1, 10), &ratio(7, 10), Direction::Competitive, 6).unwrap();
        assert!(r.holds_strictly());
        assert!(r.pairs_checked > 0);
        let r = lemma_sign_check(&ratio(1, 4), &ratio(2, 5), Direction::Cooperative, 6).unwrap();
        assert!(r.holds_strictly());
    }

    #[test]
    fn finite_pressure_identities() {
        let m = stationary_measure(&comp(0.2, 0.6), 8).unwrap();
        assert_abs_diff_eq!(finite_pressure(&m, 1.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            finite_pressure(&m, 0.0),
            -std::f64::consts::LN_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn equilibrium_y_variance() {
        // product line: L Var(Y) = chi(rho) phi^2 exactly
        let rho: f64 = 0.3;
        let m = build_measure(8, rho, 1.0 - rho, false);
        let (mean, var) = y_mean_var(&m);
        let phi = (rho / (1.0 - rho)).ln();
        let chi = rho * (1.0 - rho);
        assert_abs_diff_eq!(8.0 * var, chi * phi * phi, epsilon = 1e-12);
        let s = rho * rho.ln() + (1.0 - rho) * (1.0 - rho).ln();
        assert_abs_diff_eq!(mean, -s, epsilon = 1e-12);
    }

    #[test]
    fn uniform_atom_at_half() {
        let m = build_measure(6, 0.5, 0.5, false);
        let spec = y_spectrum(&m);
        assert_eq!(spec.len(), 1);
        assert_abs_diff_eq!(spec[0].0, std::f64::consts::LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(spec[0].1, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn local_eq_zero_cases() {
        // singleton boxes
        let m = stationary_measure(&comp(0.1, 0.7), 6).unwrap();
        assert_abs_diff_eq!(local_eq_diagnostic(&m, 6).unwrap(), 0.0, epsilon = 1e-12);
        // equilibrium measure: conditional law uniform for any K
        let m = build_measure(8, 0.3, 0.7, false);
        for k in [1, 2, 4, 8] {
            assert_abs_diff_eq!(local_eq_diagnostic(&m, k).unwrap(), 0.0, epsilon = 1e-11);
        }
        assert!(local_eq_diagnostic(&m, 3).is_err());
    }

    #[test]
    fn gibbs_shannon_product_measure() {
        let rho: f64 = 0.3;
        let m = build_measure(7, rho, 1.0 - rho, false);
        let s = rho * rho.ln() + (1.0 - rho) * (1.0 - rho).ln();
        assert_abs_diff_eq!(gibbs_shannon_exact(&m) / 7.0, -s, epsilon = 1e-12);
        let m = stationary_measure(&comp(0.1, 0.7), 8).unwrap();
        assert!(gibbs_shannon_exact(&m) / 8.0 <= std::f64::consts::LN_2 + 1e-12);
    }

    #[test]
    fn normalization_and_positivity() {
        for p in [
            comp(0.1, 0.7),
            Params::new(0.25, 0.4, Direction::Cooperative).unwrap(),
        ] {
            let m = stationary_measure(&p, 9).unwrap();
            assert!(m.weights.iter().all(|&w| w > 0.0));
            let total: f64 = m.probabilities().iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }
}
