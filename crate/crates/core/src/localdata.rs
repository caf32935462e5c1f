//! Local solution counts `L(N, d)`, the factors `α(N, d)`, `a(N)`, `Ψ(N, d)`,
//! the singular series through its local factors `χ_p`, and `H(N, d)`.
//!
//! `L(N, d)` counts `b ∈ [1, d]⁴` with `b₁b₂b₃b₄ + 1 ≡ 0` and
//! `b₁² + b₂² + b₃² + b₄² ≡ N (mod d)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::arith::{
    factorize, gcd, inv_unchecked, mul_mod, pow_mod, prime_table, reduce, xi_p, FactoredInteger,
    PrimeFieldTables,
};
use crate::error::{Error, Result};
use crate::expsum::{vq_prime_power, Vec4};

fn check_odd(n: u64) -> Result<()> {
    if n % 2 == 0 {
        return Err(Error::EvenN(n));
    }
    Ok(())
}

fn check_modulus(d: u64) -> Result<FactoredInteger> {
    if d == 0 {
        return Err(Error::Zero);
    }
    let f = factorize(d)?;
    if d % 2 == 0 || !f.is_squarefree() {
        return Err(Error::BadModulus(d));
    }
    Ok(f)
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Whether `b` satisfies both congruences modulo `d`.
pub fn is_admissible(n: u64, d: u64, b: &Vec4) -> bool {
    let prod = b.0.iter().fold(1u64, |acc, &x| mul_mod(acc, reduce(x as i128, d), d));
    (prod + 1) % d == 0 && reduce(b.sum_of_squares() - n as i128, d) == 0
}

/// All admissible `b ∈ [1, d]⁴`, in lexicographic order.
pub fn admissible_classes(n: u64, d: u64) -> Result<Vec<Vec4>> {
    check_odd(n)?;
    check_modulus(d)?;
    let mut out = Vec::new();
    for_each_class(n, d, |b| out.push(b));
    out.sort();
    Ok(out)
}

/// Calls `f` on each admissible class. `b₄` is forced to `-(b₁b₂b₃)⁻¹`, which
/// requires every `b_j` coprime to `d`.
fn for_each_class<F: FnMut(Vec4)>(n: u64, d: u64, mut f: F) {
    if d == 1 {
        f(Vec4::new(1, 1, 1, 1));
        return;
    }
    let units: Vec<(u64, u64)> = (1..d)
        .filter(|&x| gcd(x, d) == 1)
        .map(|x| (x, mul_mod(x, x, d)))
        .collect();
    let mut inverse = vec![0u64; d as usize];
    for &(x, _) in &units {
        inverse[x as usize] = inv_unchecked(x, d);
    }
    let target = n % d;
    for &(b1, s1) in &units {
        for &(b2, s2) in &units {
            let p12 = mul_mod(b1, b2, d);
            let s12 = (s1 + s2) % d;
            for &(b3, s3) in &units {
                let p123 = mul_mod(p12, b3, d);
                let b4 = d - inverse[p123 as usize];
                if (s12 + s3 + mul_mod(b4, b4, d)) % d == target {
                    f(Vec4::new(b1 as i64, b2 as i64, b3 as i64, b4 as i64));
                }
            }
        }
    }
}

/// `L(N, d)` by the `O(d³)` elimination of `b₄`.
pub fn count_l_naive(n: u64, d: u64) -> Result<u64> {
    check_odd(n)?;
    check_modulus(d)?;
    let mut count = 0u64;
    for_each_class(n, d, |_| count += 1);
    Ok(count)
}

/// `L(N, p)` by summing over pairs of quadratic residues.
///
/// With `a_j = b_j²` the conditions become `a₁a₂a₃a₄ = 1`, `Σa_j = N` over
/// residues; each such `a` lifts to 16 sign patterns of which 8 have
/// `Πb_j = -1`. For fixed `(a₁, a₂)`, `a₃` solves `k a₃² + k e a₃ + 1 = 0`
/// with `k = a₁a₂`, `e = a₁ + a₂ - N`. `O(p²)`.
pub fn count_l_prime_direct(n: u64, p: u64) -> Result<u64> {
    check_odd(n)?;
    check_prime(p)?;
    let t = PrimeFieldTables::new(p);
    let residues: Vec<u64> = (1..p).filter(|&x| t.legendre[x as usize] == 1).collect();
    let nm = n % p;
    let inv2 = inv_unchecked(2, p);
    let mut count = 0u64;
    for &a1 in &residues {
        for &a2 in &residues {
            let k = mul_mod(a1, a2, p);
            let e = (a1 + a2 + p - nm) % p;
            // discriminant / k² = e² - 4 k̄
            let kinv = t.inverse[k as usize] as u64;
            let disc = (mul_mod(e, e, p) + p - mul_mod(4, kinv, p)) % p;
            let minus_e_half = mul_mod(p - e, inv2, p) % p;
            match t.legendre[disc as usize] {
                0 => {
                    if t.legendre[minus_e_half as usize] == 1 {
                        count += 1;
                    }
                }
                1 => {
                    // roots multiply to k̄, a residue, so both are residues or neither
                    let r = mul_mod(t.sqrt[disc as usize] as u64, inv2, p);
                    let root = (minus_e_half + r) % p;
                    if t.legendre[root as usize] == 1 {
                        count += 2;
                    }
                }
                _ => {}
            }
        }
    }
    Ok(8 * count)
}

fn primitive_root(p: u64) -> u64 {
    let f = factorize(p - 1).expect("p > 1");
    (2..p)
        .find(|&g| f.primes().all(|q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("primes have primitive roots")
}

fn binomial4(a: usize) -> f64 {
    [1.0, 4.0, 6.0, 4.0, 1.0][a]
}

/// `L(N, p)` through Gauss sums of all multiplicative characters, `O(p log p)`.
///
/// Detecting `Πb_j = -1` with characters leaves only even characters
/// `ψ = φ∘(x ↦ x²)`, and `Σ_{b² = y} ψ(b) = φ(y)(1 + χ(y))`, so `L` is a
/// combination of Jacobi sums `J_N(λ₁, …, λ₄)` with `λ_j ∈ {φ, φχ}`. Each of
/// those is `(1/p)[Π G(λ_j, 0) + Π τ(λ_j) · Σ_{h≠0} Λ̄(h) e(-hN/p)]` with
/// `Λ = Πλ_j`. The Gauss sums `τ(ω^j)` of the powers of a generating
/// character come from a single FFT of length `p - 1`.
pub fn count_l_prime(n: u64, p: u64) -> Result<u64> {
    check_odd(n)?;
    check_prime(p)?;
    let m = (p - 1) as usize;
    let g = primitive_root(p);
    // x_k = e(g^k / p); log table for the character values at -N.
    let mut log = vec![0usize; p as usize];
    let mut buf = Vec::with_capacity(m);
    let mut x = 1u64;
    for k in 0..m {
        log[x as usize] = k;
        let t = 2.0 * std::f64::consts::PI * (x as f64 / p as f64);
        buf.push(Complex64::new(t.cos(), t.sin()));
        x = mul_mod(x, g, p);
    }
    // τ_j = Σ_k e(jk/(p-1)) e(g^k/p): an unnormalized inverse DFT.
    FftPlanner::<f64>::new().plan_fft_inverse(m).process(&mut buf);
    let tau = buf;
    let omega = |j: usize, exp_index: usize| -> Complex64 {
        let t = 2.0 * std::f64::consts::PI * (((j * exp_index) % m) as f64 / m as f64);
        Complex64::new(t.cos(), t.sin())
    };
    let half = m / 2;
    let nm = n % p;
    let pf = p as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for phi in 0..half {
        let phichi = (phi + half) % m;
        for a in 0..=4usize {
            // λ's: (4 - a) copies of φ, a copies of φχ
            let lam = (4 * phi + a * half) % m;
            let mut zero_term = 1.0;
            if phi != 0 && a < 4 {
                zero_term = 0.0;
            }
            if phichi != 0 && a > 0 {
                zero_term = 0.0;
            }
            let zero_term = zero_term * (pf - 1.0).powi(4);
            let prod_tau = tau[phi].powu(4 - a as u32) * tau[phichi].powu(a as u32);
            let twist = if nm == 0 {
                if lam == 0 {
                    Complex64::new(pf - 1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            } else {
                // Λ(-N) τ(Λ̄)
                let minus_n = (p - nm) as usize;
                omega(lam, log[minus_n]) * tau[(m - lam) % m]
            };
            let j = (Complex64::new(zero_term, 0.0) + prod_tau * twist) / pf;
            total += j * binomial4(a);
        }
    }
    let value = total.re / (pf - 1.0);
    let rounded = value.round();
    debug_assert!((value - rounded).abs() < 1e-3 * (1.0 + rounded), "p={p} L={value}");
    Ok(rounded as u64)
}

/// `L(N, d)` as the product of the prime counts over `p | d`.
pub fn count_l_crt(n: u64, d: &FactoredInteger) -> Result<u64> {
    check_odd(n)?;
    if d.value % 2 == 0 || !d.is_squarefree() {
        return Err(Error::BadModulus(d.value));
    }
    d.primes().try_fold(1u64, |acc, p| Ok(acc * count_l_prime(n, p)?))
}

/// `L(N, d)` for odd squarefree `d`.
pub fn count_l(n: u64, d: u64) -> Result<u64> {
    let f = check_modulus(d)?;
    count_l_crt(n, &f)
}

/// The four sums over solutions `(a₁, a₂, a₃)` in reduced residues of
/// `a₁a₂a₃(a₁ + a₂ + a₃ - N) + 1 ≡ 0 (mod p)`, weighted by `1`, `(a₁/p)`,
/// `(a₁a₂/p)` and `(a₁a₂a₃/p)`. The sums are integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharDecomposition {
    pub p: u64,
    pub l1: i64,
    pub l2: i64,
    pub l3: i64,
    pub l4: i64,
}

impl CharDecomposition {
    /// `L₁ + 3L₂ + 3L₃ + L₄`.
    pub fn reconstruct(&self) -> i64 {
        self.l1 + 3 * self.l2 + 3 * self.l3 + self.l4
    }

    /// `L₁ - (p - 1)³/p`.
    pub fn delta(&self) -> f64 {
        let p = self.p as f64;
        self.l1 as f64 - (p - 1.0).powi(3) / p
    }
}

pub fn char_decomposition(n: u64, p: u64) -> Result<CharDecomposition> {
    check_odd(n)?;
    check_prime(p)?;
    let t = PrimeFieldTables::new(p);
    let nm = n % p;
    let inv2 = inv_unchecked(2, p);
    let chi = |x: u64| t.legendre[x as usize] as i64;
    let (mut l1, mut l2, mut l3, mut l4) = (0i64, 0i64, 0i64, 0i64);
    for a1 in 1..p {
        for a2 in 1..p {
            let k = mul_mod(a1, a2, p);
            let e = (a1 + a2 + p - nm) % p;
            let kinv = t.inverse[k as usize] as u64;
            let disc = (mul_mod(e, e, p) + p - mul_mod(4, kinv, p)) % p;
            let minus_e_half = mul_mod(p - e, inv2, p) % p;
            let mut visit = |a3: u64| {
                l1 += 1;
                l2 += chi(a1);
                l3 += chi(k);
                l4 += chi(mul_mod(k, a3, p));
            };
            match t.legendre[disc as usize] {
                0 => visit(minus_e_half),
                1 => {
                    let r = mul_mod(t.sqrt[disc as usize] as u64, inv2, p);
                    visit((minus_e_half + r) % p);
                    visit((minus_e_half + p - r) % p);
                }
                _ => {}
            }
        }
    }
    Ok(CharDecomposition { p, l1, l2, l3, l4 })
}

/// `α(N, d) = Π_{p | d} (1 + 1/p)⁻¹ (1 - p^{-1-ξ_p(N)})⁻¹`, exactly.
pub fn alpha(n: u64, d: u64) -> Result<BigRational> {
    check_odd(n)?;
    let f = check_modulus(d)?;
    let mut acc = BigRational::one();
    for p in f.primes() {
        let pp = BigInt::from(p).pow(1 + xi_p(n, p));
        acc *= BigRational::new(BigInt::from(p), BigInt::from(p + 1));
        acc *= BigRational::new(pp.clone(), pp - 1);
    }
    Ok(acc)
}

/// The local factor `(1 + 1/p)(1 - p^{-1-ξ_p(N)})` of `a(N)`.
pub fn a_local_factor(n: u64, p: u64) -> f64 {
    let pf = p as f64;
    (1.0 + 1.0 / pf) * (1.0 - pf.powi(-(1 + xi_p(n, p).min(1000) as i32)))
}

/// Product of the local factors over odd primes `p <= prime_bound`.
pub fn a_truncated(n: u64, prime_bound: u64) -> f64 {
    let mut acc = 1.0;
    for p in crate::arith::primes_up_to(prime_bound).into_iter().skip(1) {
        acc *= a_local_factor(n, p);
    }
    acc
}

pub const A_PRIME_BOUND: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AEstimate {
    /// Tail-corrected estimate of `a(N)`.
    pub value: f64,
    /// Product over odd primes up to `prime_bound`.
    pub truncated: f64,
    pub prime_bound: u64,
    /// Size of the applied tail correction `Σ_{p > bound} p⁻²`.
    pub tail: f64,
}

/// `a(N)` from the product up to [`A_PRIME_BOUND`], with primes above the
/// bound dividing `N` included exactly and the rest estimated by
/// `Π_{p > B}(1 - p⁻²) ≈ exp(-1/(B log B))`.
pub fn a_estimate(n: u64) -> AEstimate {
    let bound = A_PRIME_BOUND;
    let truncated = a_truncated(n, bound);
    let mut value = truncated;
    for p in factorize(n).expect("n > 0").primes().filter(|&p| p > bound) {
        let pf = p as f64;
        value *= a_local_factor(n, p) / (1.0 - 1.0 / (pf * pf));
    }
    let b = bound as f64;
    let tail = 1.0 / (b * b.ln());
    AEstimate {
        value: value * (-tail).exp(),
        truncated,
        prime_bound: bound,
        tail,
    }
}

pub fn a_of(n: u64) -> f64 {
    a_estimate(n).value
}

/// `α(N, p)` in floating point.
fn alpha_prime_f64(n: u64, p: u64) -> f64 {
    1.0 / a_local_factor(n, p)
}

/// `Ψ(N, p) = α(N, p) L(N, p) / p³`.
pub fn psi_prime(n: u64, p: u64) -> Result<f64> {
    let l = count_l_prime(n, p)?;
    Ok(alpha_prime_f64(n, p) * l as f64 / (p as f64).powi(3))
}

/// `Ψ(N, d) = α(N, d) L(N, d) / d³`.
pub fn psi(n: u64, d: u64) -> Result<f64> {
    Ok(local_density(n, d)?.psi)
}

/// `(N, d)` with `L`, `α` and `Ψ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalDensityRecord {
    pub n: u64,
    pub d: u64,
    pub l: u64,
    #[serde(with = "ratio_string")]
    pub alpha: BigRational,
    pub psi: f64,
    /// How `L` was computed.
    pub l_method: String,
}

mod ratio_string {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

pub fn local_density(n: u64, d: u64) -> Result<LocalDensityRecord> {
    let f = check_modulus(d)?;
    let l = count_l_crt(n, &f)?;
    let alpha = alpha(n, d)?;
    let psi = alpha.to_f64().expect("finite") * l as f64 / (d as f64).powi(3);
    Ok(LocalDensityRecord {
        n,
        d,
        l,
        alpha,
        psi,
        l_method: "prime-product".into(),
    })
}

/// Default number of prime-power terms: `A_{p^s}` vanishes for
/// `s > ξ_p(N) + 1` when `p ∤ 2d`, and for `s >= 2` when `p | d`.
pub fn default_s_max(n: u64, p: u64) -> u32 {
    xi_p(n, p) + 4
}

/// `χ_p = 1 + Σ_{s <= s_max} A_{p^s}` with `A_q = V_q(N, d, 0, b, 0)/q⁴`
/// evaluated through the prime-power closed forms.
pub fn chi_p_series(n: u64, d: u64, b: &Vec4, p: u64, s_max: u32) -> Result<f64> {
    check_odd(n)?;
    check_modulus(d)?;
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d % p == 0 && !is_admissible(n, p, b) {
        return Err(Error::InadmissibleClass { d, b: b.0 });
    }
    let pf = p as f64;
    let mut acc = 1.0;
    for s in 1..=s_max {
        // only d modulo p^(s+1) enters
        let big_d = match p.checked_pow(s + 1) {
            Some(m) => d % m,
            None => d,
        };
        let v = vq_prime_power(p, s, n, big_d, 0, b, &Vec4::ZERO);
        acc += v.re / pf.powi(4 * s as i32);
    }
    Ok(acc)
}

/// Closed forms of the local factor: 1 at `p = 2`, `p` for `p | d`, and
/// `(1 + 1/p)(1 - p^{-1-ξ_p(N)})` otherwise.
pub fn chi_p_closed(n: u64, d: u64, p: u64) -> f64 {
    if p == 2 {
        1.0
    } else if d % p == 0 {
        p as f64
    } else {
        a_local_factor(n, p)
    }
}

fn check_class(n: u64, d: u64, b: &Vec4) -> Result<()> {
    if !is_admissible(n, d, b) {
        return Err(Error::InadmissibleClass { d, b: b.0 });
    }
    Ok(())
}

/// `σ(N, d, b) = d · a(N) · α(N, d)`; independent of the class `b`.
pub fn sigma_closed(n: u64, d: u64, b: &Vec4) -> Result<f64> {
    check_class(n, d, b)?;
    Ok(d as f64 * a_of(n) * alpha(n, d)?.to_f64().expect("finite"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularSeriesRecord {
    pub n: u64,
    pub d: u64,
    pub b: Vec4,
    /// `Π_{p <= bound} χ_p` from the `A_{p^s}` series.
    pub truncated_value: f64,
    pub closed_value: f64,
    pub truncation_prime_bound: u64,
}

impl SingularSeriesRecord {
    pub fn relative_gap(&self) -> f64 {
        (self.truncated_value - self.closed_value).abs() / self.closed_value.abs()
    }
}

/// The Euler product of `χ_p` over primes up to `prime_bound` (and every
/// prime of `d`), next to the closed form.
pub fn singular_series(n: u64, d: u64, b: &Vec4, prime_bound: u64) -> Result<SingularSeriesRecord> {
    let closed_value = sigma_closed(n, d, b)?;
    let df = factorize(d)?;
    let mut acc = 1.0;
    for &p in prime_table().iter().take_while(|&&p| p <= prime_bound) {
        acc *= chi_p_series(n, d, b, p, default_s_max(n, p))?;
    }
    for p in df.primes().filter(|&p| p > prime_bound) {
        acc *= chi_p_series(n, d, b, p, default_s_max(n, p))?;
    }
    Ok(SingularSeriesRecord {
        n,
        d,
        b: *b,
        truncated_value: acc,
        closed_value,
        truncation_prime_bound: prime_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HReport {
    pub n: u64,
    pub d: u64,
    /// `Σ_b σ(N, d, b)` over the admissible classes.
    pub by_classes: f64,
    /// `d⁴ a(N) Ψ(N, d)`.
    pub by_psi: f64,
}

pub fn h_of(n: u64, d: u64) -> Result<HReport> {
    let classes = admissible_classes(n, d)?;
    let mut by_classes = crate::compensated::CompensatedSum::new();
    for b in &classes {
        by_classes.add(sigma_closed(n, d, b)?);
    }
    let by_psi = (d as f64).powi(4) * a_of(n) * psi(n, d)?;
    Ok(HReport {
        n,
        d,
        by_classes: by_classes.value(),
        by_psi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MertensReport {
    pub z1: u64,
    pub z2: u64,
    /// `Π_{z₁ <= p < z₂} (1 - Ψ(N, p))⁻¹`.
    pub product: f64,
    /// Smallest `L₀` with `product <= (log z₂ / log z₁)(1 + L₀ / log z₁)`.
    pub l0: f64,
}

pub fn mertens_product(n: u64, z1: u64, z2: u64) -> Result<MertensReport> {
    let mut product = 1.0;
    for p in crate::arith::primes_between(z1.saturating_sub(1), z2) {
        if p == 2 {
            continue;
        }
        product /= 1.0 - psi_prime(n, p)?;
    }
    let (l1, l2) = ((z1 as f64).ln(), (z2 as f64).ln());
    let l0 = ((product * l1 / l2 - 1.0) * l1).max(0.0);
    Ok(MertensReport { z1, z2, product, l0 })
}
