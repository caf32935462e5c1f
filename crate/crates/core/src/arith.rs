//! Integer and multiplicative-function primitives.
//!
//! Everything here is exact. Factorization is trial division against a prime
//! table (primes below 10⁶, built once), which is plenty for the moduli and
//! values that show up in desk-scale runs. Modular products go through 128-bit
//! intermediates.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PRIME_TABLE_LIMIT: u64 = 1_000_000;

/// All primes `<= limit`, by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// All primes up to 10⁶, sieved once.
pub fn prime_table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| primes_up_to(PRIME_TABLE_LIMIT))
}

/// Primes `p` with `lo < p < hi`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= PRIME_TABLE_LIMIT {
        prime_table()
            .iter()
            .copied()
            .skip_while(|&p| p <= lo)
            .take_while(|&p| p < hi)
            .collect()
    } else {
        primes_up_to(hi.saturating_sub(1))
            .into_iter()
            .filter(|&p| p > lo)
            .collect()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n <= PRIME_TABLE_LIMIT {
        return prime_table().binary_search(&n).is_ok();
    }
    factorize(n).map(|f| f.factors.len() == 1 && f.factors[0].1 == 1).unwrap_or(false)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `a mod q` in `[0, q)` for a signed `a`.
pub fn reduce(a: i128, q: u64) -> u64 {
    a.rem_euclid(q as i128) as u64
}

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    if (a | b) >> 32 == 0 {
        a * b % q
    } else {
        ((a as u128 * b as u128) % q as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    if q == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    pub value: u64,
    /// `(prime, exponent)` with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn mobius(&self) -> i64 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn divisor_sum(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (0..=e).map(|k| p.pow(k)).sum::<u64>())
            .product()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Exponent of `p` in the factorization (0 when `p` does not divide).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn recompose(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut m = n;
    let mut factors = Vec::new();
    for &p in prime_table() {
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    // Beyond the table: m has no factor below 10⁶, so it is prime when m < 10¹².
    if m >= PRIME_TABLE_LIMIT * PRIME_TABLE_LIMIT {
        let mut p = PRIME_TABLE_LIMIT + 1;
        while (p as u128) * (p as u128) <= m as u128 {
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += 2;
        }
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(FactoredInteger { value: n, factors })
}

/// A residue class `value mod modulus` with `0 <= value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(a: i128, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Residue {
            value: reduce(a, modulus),
            modulus,
        }
    }
}

/// Returns `(g, x)` with `g = gcd(a, m)` and `a x ≡ g (mod m)`.
fn ext_gcd(a: i128, m: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

/// The inverse of `a` modulo `q`.
pub fn mod_inverse(a: i64, q: u64) -> Result<Residue> {
    if q == 0 {
        return Err(Error::Zero);
    }
    let ar = reduce(a as i128, q);
    let (g, x) = ext_gcd(ar as i128, q as i128);
    if g != 1 && q != 1 {
        return Err(Error::NotInvertible { a, modulus: q });
    }
    Ok(Residue::new(x, q))
}

/// Inverse of a residue already known to be coprime to `q`; panics otherwise.
pub(crate) fn inv_unchecked(a: u64, q: u64) -> u64 {
    if q == 1 {
        return 0;
    }
    let (g, x) = ext_gcd((a % q) as i128, q as i128);
    assert_eq!(g, 1, "{a} not invertible mod {q}");
    reduce(x, q)
}

/// Jacobi symbol `(a/q)` for odd `q`, by quadratic reciprocity.
pub fn jacobi_symbol(a: i64, q: u64) -> Result<i8> {
    if q % 2 == 0 {
        return Err(Error::EvenModulus(q));
    }
    let mut a = reduce(a as i128, q);
    let mut n = q;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicativeSuite {
    pub mobius: i64,
    pub phi: u64,
    pub tau: u64,
    pub divisor_sum: u64,
    pub squarefree: bool,
}

pub fn multiplicative_suite(n: u64) -> Result<MultiplicativeSuite> {
    let f = factorize(n)?;
    Ok(MultiplicativeSuite {
        mobius: f.mobius(),
        phi: f.euler_phi(),
        tau: f.divisor_count(),
        divisor_sum: f.divisor_sum(),
        squarefree: f.is_squarefree(),
    })
}

/// The exponent ξ with `p^ξ ∥ n`.
pub fn xi_p(n: u64, p: u64) -> u32 {
    debug_assert!(p >= 2);
    if n == 0 {
        return u32::MAX;
    }
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    e
}

/// Checked `p^s`.
pub fn checked_pow(p: u64, s: u32) -> Option<u64> {
    p.checked_pow(s)
}

/// Lookup tables modulo an odd prime: inverses, Legendre symbols and square roots.
#[derive(Debug, Clone)]
pub struct PrimeFieldTables {
    pub p: u64,
    pub inverse: Vec<u32>,
    pub legendre: Vec<i8>,
    /// For each quadratic residue `x`, some `y` with `y² ≡ x`; 0 elsewhere.
    pub sqrt: Vec<u32>,
}

impl PrimeFieldTables {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < u32::MAX as u64, "odd prime below 2³² expected");
        let n = p as usize;
        let mut inverse = vec![0u32; n];
        if n > 1 {
            inverse[1] = 1;
        }
        for i in 2..n {
            // inv(i) = -(p / i) * inv(p mod i)
            let t = (p - (p / i as u64) % p) % p;
            inverse[i] = mul_mod(t, inverse[n % i] as u64, p) as u32;
        }
        let mut legendre = vec![-1i8; n];
        let mut sqrt = vec![0u32; n];
        legendre[0] = 0;
        for y in 1..=(n - 1) / 2 {
            let x = mul_mod(y as u64, y as u64, p) as usize;
            legendre[x] = 1;
            sqrt[x] = y as u32;
        }
        PrimeFieldTables {
            p,
            inverse,
            legendre,
            sqrt,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap().factors, vec![]);
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(9991).unwrap().factors, vec![(97, 1), (103, 1)]);
        assert_eq!(factorize(0), Err(Error::Zero));
        // product of two primes above the table
        let big = 1_000_003u64 * 1_000_033;
        assert_eq!(
            factorize(big).unwrap().factors,
            vec![(1_000_003, 1), (1_000_033, 1)]
        );
    }

    #[test]
    fn recompose_all_up_to_1e5() {
        for n in 1..=100_000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.recompose(), n);
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.factors.iter().all(|&(p, e)| e >= 1 && is_prime(p)));
        }
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(1, 7).unwrap().value, 1);
        assert_eq!(mod_inverse(2, 5).unwrap().value, 3);
        assert!(matches!(mod_inverse(3, 6), Err(Error::NotInvertible { .. })));
        assert_eq!(mod_inverse(-1, 7).unwrap().value, 6);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(1, 15).unwrap(), 1);
        assert_eq!(jacobi_symbol(2, 3).unwrap(), -1);
        assert_eq!(jacobi_symbol(6, 3).unwrap(), 0);
        assert_eq!(jacobi_symbol(5, 1).unwrap(), 1);
        assert_eq!(jacobi_symbol(3, 4), Err(Error::EvenModulus(4)));
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
            for a in 0..p {
                let e = pow_mod(a, (p - 1) / 2, p);
                let expected = match e {
                    0 => 0,
                    1 => 1,
                    _ => {
                        assert_eq!(e, p - 1);
                        -1
                    }
                };
                assert_eq!(jacobi_symbol(a as i64, p).unwrap(), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn suite_examples() {
        let s = multiplicative_suite(1).unwrap();
        assert_eq!((s.mobius, s.phi, s.tau, s.divisor_sum, s.squarefree), (1, 1, 1, 1, true));
        let s = multiplicative_suite(12).unwrap();
        assert_eq!((s.mobius, s.phi, s.tau, s.divisor_sum, s.squarefree), (0, 4, 6, 28, false));
        let s = multiplicative_suite(30).unwrap();
        assert_eq!((s.mobius, s.phi, s.tau, s.divisor_sum, s.squarefree), (-1, 8, 8, 72, true));
    }

    #[test]
    fn suite_agrees_with_divisor_enumeration() {
        for n in 1..=2000u64 {
            let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            let s = multiplicative_suite(n).unwrap();
            assert_eq!(s.tau, divs.len() as u64);
            assert_eq!(s.divisor_sum, divs.iter().sum::<u64>());
            assert_eq!(s.phi, (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64);
            assert_eq!(factorize(n).unwrap().divisors(), divs);
        }
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_p(9, 3), 2);
        assert_eq!(xi_p(9, 5), 0);
        assert_eq!(xi_p(45, 3), 2);
    }

    #[test]
    fn prime_field_tables() {
        for p in [3u64, 5, 7, 11, 101, 997] {
            let t = PrimeFieldTables::new(p);
            for x in 1..p {
                assert_eq!(mul_mod(x, t.inverse[x as usize] as u64, p), 1);
                assert_eq!(t.legendre[x as usize], jacobi_symbol(x as i64, p).unwrap());
                if t.legendre[x as usize] == 1 {
                    let y = t.sqrt[x as usize] as u64;
                    assert_eq!(mul_mod(y, y, p), x);
                }
            }
        }
    }

    fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
        (1u64..5000, 1u64..5000).prop_filter("coprime", |&(a, b)| gcd(a, b) == 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn multiplicativity((m, n) in coprime_pair()) {
            let a = multiplicative_suite(m).unwrap();
            let b = multiplicative_suite(n).unwrap();
            let ab = multiplicative_suite(m * n).unwrap();
            prop_assert_eq!(ab.phi, a.phi * b.phi);
            prop_assert_eq!(ab.tau, a.tau * b.tau);
            prop_assert_eq!(ab.divisor_sum, a.divisor_sum * b.divisor_sum);
            if a.squarefree && b.squarefree {
                prop_assert_eq!(ab.mobius, a.mobius * b.mobius);
            }
        }

        #[test]
        fn inverse_is_an_involution(q in 2u64..100_000, a in -1_000_000i64..1_000_000) {
            prop_assume!(gcd(reduce(a as i128, q), q) == 1);
            let inv = mod_inverse(a, q).unwrap();
            prop_assert_eq!(mul_mod(reduce(a as i128, q), inv.value, q), 1);
            let back = mod_inverse(inv.value as i64, q).unwrap();
            prop_assert_eq!(back.value, reduce(a as i128, q));
        }

        #[test]
        fn jacobi_completely_multiplicative(a in -500i64..500, b in -500i64..500, half in 0u64..2000) {
            let q = 2 * half + 1;
            let ab = jacobi_symbol(a * b, q).unwrap();
            prop_assert_eq!(ab, jacobi_symbol(a, q).unwrap() * jacobi_symbol(b, q).unwrap());
        }
    }
}
