//! Lower-bound linear sieve weights of Rosser type, the combined weights θ,
//! the lower sieve function `f(s)` and the product `Π(z)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, primes_between};
use crate::error::{Error, Result};

/// Default sifting exponent: `z = N^η`.
pub const DEFAULT_ETA: f64 = 1.0 / 24.0 - 1e-4;
/// Default level exponent: `D = N^δ`.
pub const DEFAULT_DELTA: f64 = 1.0 / 12.0 - 1e-4;
/// Default small-prime cutoff.
pub const DEFAULT_P0: f64 = 1000.0;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `λ⁻(d)` for squarefree `d` built from the primes in `(p0, z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveWeightTable {
    pub level: f64,
    pub z: f64,
    pub p0: f64,
    /// Sieving primes, increasing.
    pub primes: Vec<u64>,
    /// Nonzero weights only.
    pub weights: BTreeMap<u64, i8>,
}

impl SieveWeightTable {
    pub fn lambda(&self, d: u64) -> i8 {
        self.weights.get(&d).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.weights.iter().map(|(&d, &l)| (d, l))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ_{d | n} λ(d)` for `n` given as a set of sieving-prime indices.
    fn divisor_sum(&self, mask: u64) -> i64 {
        let mut total = 0i64;
        let mut sub = mask;
        loop {
            total += self.lambda(self.product(sub)) as i64;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        total
    }

    fn product(&self, mask: u64) -> u64 {
        self.primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(1u64, |acc, (_, &p)| acc.saturating_mul(p))
    }
}

/// The Rosser lower-bound weights of level `D`: `λ⁻(d) = μ(d)` for
/// `d = p₁⋯p_r` with `z > p₁ > ⋯ > p_r > p0` and `p₁⋯p_{m-1}p_m³ < D` for
/// every even `m <= r`; zero otherwise.
///
/// Primes are admitted singly without a condition, so every sieving prime
/// must be at most `D` for the support to stay inside `[1, D]`.
pub fn rosser_lambda_minus(level: f64, z: f64, p0: f64) -> Result<SieveWeightTable> {
    if z <= p0 {
        return Err(Error::InvalidParameter(format!("z = {z} must exceed p0 = {p0}")));
    }
    if level < 2.0 || p0 < 2.0 {
        return Err(Error::InvalidParameter(format!("need D >= 2 and p0 >= 2, got D = {level}, p0 = {p0}")));
    }
    let primes = sieving_primes(z, p0);
    if let Some(&p) = primes.iter().find(|&&p| p as f64 > level) {
        return Err(Error::InvalidParameter(format!(
            "sieving prime {p} exceeds the level D = {level}"
        )));
    }
    let mut weights = BTreeMap::new();
    weights.insert(1, 1);
    // primes in decreasing order
    let desc: Vec<u64> = primes.iter().rev().copied().collect();
    descend(&desc, 0, 1, 0, level, &mut weights);
    Ok(SieveWeightTable {
        level,
        z,
        p0,
        primes,
        weights,
    })
}

fn descend(desc: &[u64], start: usize, d: u64, r: usize, level: f64, out: &mut BTreeMap<u64, i8>) {
    for i in start..desc.len() {
        let p = desc[i];
        let m = r + 1;
        if m % 2 == 0 {
            let pf = p as f64;
            if d as f64 * pf * pf * pf >= level {
                // smaller primes may still qualify
                continue;
            }
        }
        let next = d * p;
        out.insert(next, if m % 2 == 0 { 1 } else { -1 });
        descend(desc, i + 1, next, m, level, out);
    }
}

/// Primes `p` with `p0 < p < z`.
pub fn sieving_primes(z: f64, p0: f64) -> Vec<u64> {
    let lo = p0.floor() as u64;
    let hi = z.ceil() as u64;
    primes_between(lo, hi)
        .into_iter()
        .filter(|&p| (p as f64) > p0 && (p as f64) < z)
        .collect()
}

/// Odd primes `p <= p0` with `p < z`.
pub fn small_primes(z: f64, p0: f64) -> Vec<u64> {
    let hi = (p0.floor() as u64).saturating_add(1);
    primes_between(2, hi)
        .into_iter()
        .filter(|&p| (p as f64) < z)
        .collect()
}

/// `θ(d) = μ(δ)λ(t)` for the split `d = δt` into a part over the small primes
/// and a part over the sieving primes; 0 when `d` does not split that way.
pub fn theta(d: u64, small: &[u64], table: &SieveWeightTable) -> i8 {
    if d == 0 || d % 2 == 0 {
        return 0;
    }
    let f = factorize(d).expect("d > 0");
    if !f.is_squarefree() {
        return 0;
    }
    let mut delta_sign = 1i8;
    let mut t = 1u64;
    for p in f.primes() {
        if small.binary_search(&p).is_ok() {
            delta_sign = -delta_sign;
        } else if table.primes.binary_search(&p).is_ok() {
            t *= p;
        } else {
            return 0;
        }
    }
    delta_sign * table.lambda(t)
}

/// All `d` with `θ(d) != 0`, increasing.
pub fn theta_support(small: &[u64], table: &SieveWeightTable) -> Vec<(u64, i8)> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << small.len()) {
        let mut delta = 1u64;
        let mut sign = 1i8;
        for (i, &p) in small.iter().enumerate() {
            if mask >> i & 1 == 1 {
                delta *= p;
                sign = -sign;
            }
        }
        for (t, l) in table.support() {
            out.push((delta * t, sign * l));
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    /// Number of squarefree `n` checked (all subsets of the sieving primes).
    pub checked: u64,
    /// Largest `Σ_{d|n} λ(d) - [n = 1]` seen; the inequality holds iff `<= 0`.
    pub max_excess: i64,
    pub worst_n: u64,
    pub at_one: i64,
}

impl InequalityReport {
    pub fn holds(&self) -> bool {
        self.max_excess <= 0 && self.at_one == 1
    }
}

/// Checks `Σ_{d | n} λ(d) <= [n = 1]` for every squarefree `n` composed of
/// the sieving primes. Exponential in the number of primes.
pub fn check_fundamental_inequality(table: &SieveWeightTable) -> Result<InequalityReport> {
    let k = table.primes.len();
    if k > 24 {
        return Err(Error::InvalidParameter(format!("{k} sieving primes is too many to enumerate")));
    }
    let mut report = InequalityReport {
        checked: 0,
        max_excess: i64::MIN,
        worst_n: 1,
        at_one: table.divisor_sum(0),
    };
    for mask in 0u64..(1u64 << k) {
        let s = table.divisor_sum(mask) - i64::from(mask == 0);
        report.checked += 1;
        if s > report.max_excess {
            report.max_excess = s;
            report.worst_n = table.product(mask);
        }
    }
    Ok(report)
}

/// `f(s) = 2e^γ log(s - 1)/s`, valid on `2 < s < 3`.
pub fn f_lower(s: f64) -> Result<f64> {
    if !(s > 2.0 && s < 3.0) {
        return Err(Error::InvalidParameter(format!("f(s) needs 2 < s < 3, got {s}")));
    }
    Ok(2.0 * EULER_GAMMA.exp() * (s - 1.0).ln() / s)
}

/// Sifting and level exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SieveParams {
    pub eta: f64,
    pub delta: f64,
}

impl Default for SieveParams {
    fn default() -> Self {
        SieveParams {
            eta: DEFAULT_ETA,
            delta: DEFAULT_DELTA,
        }
    }
}

impl SieveParams {
    /// `s₀ = log D / log z = δ/η`.
    pub fn s0(&self) -> f64 {
        self.delta / self.eta
    }

    pub fn z(&self, n: u64) -> f64 {
        (n as f64).powf(self.eta)
    }

    pub fn level(&self, n: u64) -> f64 {
        (n as f64).powf(self.delta)
    }
}

/// `2/η`: the bound on the number of prime factors of a survivor below `N`.
pub fn prime_factor_budget(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter(format!("η must lie in (0, 1), got {eta}")));
    }
    Ok(2.0 / eta)
}

/// `Π_{p0 < p < z} (1 - ψ(p))` for a supplied local density `ψ`.
pub fn pi_product_with<F: FnMut(u64) -> Result<f64>>(z: f64, p0: f64, mut psi: F) -> Result<f64> {
    let mut acc = 1.0;
    for p in sieving_primes(z, p0) {
        acc *= 1.0 - psi(p)?;
    }
    Ok(acc)
}

/// `Π(z) = Π_{p0 < p < z} (1 - Ψ(N, p))`.
pub fn pi_product(n: u64, z: f64, p0: f64) -> Result<f64> {
    pi_product_with(z, p0, |p| crate::localdata::psi_prime(n, p))
}

/// `Π (1 - Ψ(N, p))` over the small primes `2 < p <= p0`.
pub fn small_prime_product(n: u64, small: &[u64]) -> Result<f64> {
    small.iter().try_fold(1.0, |acc, &p| Ok(acc * (1.0 - crate::localdata::psi_prime(n, p)?)))
}

/// `Σ_d λ(d) Ψ(N, d)` over the weight table.
pub fn weighted_psi_sum(n: u64, table: &SieveWeightTable) -> Result<f64> {
    let psi_p: BTreeMap<u64, f64> = table
        .primes
        .iter()
        .map(|&p| Ok((p, crate::localdata::psi_prime(n, p)?)))
        .collect::<Result<_>>()?;
    let mut acc = crate::compensated::CompensatedSum::new();
    for (d, l) in table.support() {
        let f = factorize(d)?;
        let psi: f64 = f.primes().map(|p| psi_p[&p]).product();
        acc.add(l as f64 * psi);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_examples() {
        let t = rosser_lambda_minus(1000.0, 10.0, 2.0).unwrap();
        assert_eq!(t.lambda(1), 1);
        assert_eq!(t.lambda(7), -1);
        let s: i64 = [1u64, 3, 5, 15].iter().map(|&d| t.lambda(d) as i64).sum();
        assert!(s <= 0);
        assert!(rosser_lambda_minus(1000.0, 5.0, 7.0).is_err());
    }

    #[test]
    fn even_index_truncation() {
        // D = 100, primes 3, 5, 7: 7·5³ >= 100 drops 35, 5·3³ = 135 >= 100 drops 15,
        // 7·3³ = 189 drops 21.
        let t = rosser_lambda_minus(100.0, 10.0, 2.0).unwrap();
        let support: Vec<u64> = t.support().map(|(d, _)| d).collect();
        assert_eq!(support, vec![1, 3, 5, 7]);
    }

    #[test]
    fn weights_bounded_and_supported_below_level() {
        for &level in &[1e2, 1e4, 1e8] {
            let t = rosser_lambda_minus(level, 50.0, 7.0).unwrap();
            for (d, l) in t.support() {
                assert!(l.abs() <= 1);
                assert!(d as f64 <= level);
                assert!(factorize(d).unwrap().is_squarefree());
            }
        }
    }

    #[test]
    fn fundamental_inequality_exhaustive() {
        for &level in &[1e2, 1e4, 1e8] {
            let t = rosser_lambda_minus(level, 50.0, 7.0).unwrap();
            assert_eq!(t.primes.len(), 11);
            let r = check_fundamental_inequality(&t).unwrap();
            assert_eq!(r.checked, 2048);
            assert!(r.holds(), "D = {level}: {r:?}");
        }
    }

    #[test]
    fn theta_examples() {
        let table = rosser_lambda_minus(1e4, 50.0, 7.0).unwrap();
        let small = small_primes(50.0, 7.0);
        assert_eq!(small, vec![3, 5, 7]);
        assert_eq!(theta(1, &small, &table), 1);
        assert_eq!(theta(3, &small, &table), -1);
        assert_eq!(theta(3 * 11, &small, &table), 1);
        assert_eq!(theta(9, &small, &table), 0);
        let c0: u64 = small.iter().product();
        for (d, th) in theta_support(&small, &table) {
            assert!(th.abs() <= 1);
            assert!(d as f64 <= c0 as f64 * table.level);
            assert_eq!(theta(d, &small, &table), th);
        }
    }

    #[test]
    fn f_lower_examples() {
        assert!(f_lower(2.0 + 1e-12).unwrap() < 1e-10);
        assert!((f_lower(2.5).unwrap() - 0.5777301764070923).abs() < 1e-12);
        let s0 = SieveParams::default().s0();
        assert!((s0 - 2.0024057738572574).abs() < 1e-12);
        assert!((f_lower(s0).unwrap() - 0.004274569689718063).abs() < 1e-12);
        assert!(f_lower(3.0).is_err());
        let mut prev = 0.0;
        for i in 1..100 {
            let v = f_lower(2.0 + i as f64 / 100.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn budget_examples() {
        let b = prime_factor_budget(DEFAULT_ETA).unwrap();
        assert!(b > 48.0 && b < 49.0);
        assert!((b - 48.11547714514836).abs() < 1e-9);
        assert_eq!(prime_factor_budget(1.0 / 24.0).unwrap(), 48.0);
        assert_eq!(prime_factor_budget(0.1).unwrap(), 20.0);
    }

    #[test]
    fn pi_product_empty_range() {
        assert_eq!(pi_product(101, 11.0, 7.0).unwrap(), 1.0);
        let v = pi_product(101, 50.0, 7.0).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }
}
