//! Verification suites. Each returns check rows carrying the measured value
//! and the bound it was held to; the command-line front end and the
//! acceptance tests run the same code.

use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, inv_unchecked, mul_mod, primes_up_to};
use crate::error::{Error, Result};
use crate::expsum::{
    gauss_closed, gauss_direct, ramanujan_closed, vq_bound, vq_direct, vq_fast, vq_tolerance, weil_bound,
    ReducedResidues, Vec4, VqParams, VQ_BOUND_CONSTANT,
};
use crate::lagrange::{r2_table, r4_from_r2, sieve_assembly, RepresentationSet};
use crate::localdata::{
    admissible_classes, char_decomposition, chi_p_closed, chi_p_series, count_l, count_l_crt, count_l_naive,
    count_l_prime, local_density, mertens_product, psi_prime, singular_series,
};
use crate::oscillatory::{kappa_oscillatory, kappa_surface};
use crate::sieve::{
    check_fundamental_inequality, f_lower, prime_factor_budget, rosser_lambda_minus, SieveParams, DEFAULT_ETA,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub bound: f64,
}

impl Check {
    /// Passes when `measured <= bound`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            pass: measured <= bound,
            measured,
            bound,
        }
    }

    /// Passes when `measured >= bound`.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            pass: measured >= bound,
            measured,
            bound,
        }
    }

    /// Passes when `measured > bound`.
    pub fn above(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            pass: measured > bound,
            measured,
            bound,
        }
    }

    /// A count of failures; passes when zero.
    pub fn failures(name: impl Into<String>, failures: u64) -> Self {
        Check::at_most(name, failures as f64, 0.0)
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_odd(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    loop {
        let n = rng.gen_range(lo..=hi) | 1;
        if n <= hi {
            return n;
        }
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

fn odd_squarefree_up_to(limit: u64) -> Vec<u64> {
    (1..=limit)
        .step_by(2)
        .filter(|&d| factorize(d).map(|f| f.is_squarefree()).unwrap_or(false))
        .collect()
}

fn elapsed(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

// ---------------------------------------------------------------------------

/// Gauss sums: closed forms against literal summation.
pub fn gauss_suite(seed: u64, exhaustive_q: u64, samples: usize, sample_q: u64) -> Vec<Check> {
    let mut worst = 0f64;
    for q in 1..=exhaustive_q {
        for m in 0..q as i64 {
            for n in 0..q as i64 {
                worst = worst.max((gauss_direct(q, m, n) - gauss_closed(q, m, n)).norm());
            }
        }
    }
    let mut rng = rng(seed);
    let mut worst_random = 0f64;
    for _ in 0..samples {
        let q = rng.gen_range(1..=sample_q);
        let m = rng.gen_range(-1_000_000i64..=1_000_000);
        let n = rng.gen_range(-1_000_000i64..=1_000_000);
        worst_random = worst_random.max((gauss_direct(q, m, n) - gauss_closed(q, m, n)).norm());
    }
    vec![
        Check::at_most(format!("gauss closed form, all residues, q <= {exhaustive_q}"), worst, 1e-6),
        Check::at_most(format!("gauss closed form, {samples} random q <= {sample_q}"), worst_random, 1e-6),
    ]
}

/// Kloosterman sums: reality, Weil's bound, and the Ramanujan closed form.
pub fn kloosterman_suite(seed: u64, q_max: u64, per_q: usize) -> Vec<Check> {
    let mut rng = rng(seed);
    let mut weil_excess = f64::NEG_INFINITY;
    let mut worst_imag = 0f64;
    let mut worst_ramanujan = 0f64;
    for q in 1..=q_max {
        let ctx = ReducedResidues::new(q);
        let tol = 1e-9 * q as f64;
        for _ in 0..per_q {
            let m = rng.gen_range(-1_000_000i64..=1_000_000);
            let n = rng.gen_range(-1_000_000i64..=1_000_000);
            let k = ctx.kloosterman(m, n);
            worst_imag = worst_imag.max(k.im.abs() / tol);
            weil_excess = weil_excess.max((k.norm() - weil_bound(q, m, n)) / tol);
            let c = ctx.kloosterman(m, 0);
            worst_ramanujan = worst_ramanujan.max((c.re - ramanujan_closed(q, m) as f64).abs().max(c.im.abs()) / tol);
        }
    }
    vec![
        Check::at_most(
            format!("kloosterman imaginary part / (1e-9 q), q <= {q_max}"),
            worst_imag,
            1.0,
        ),
        Check::at_most(
            format!("(|K| - weil bound) / (1e-9 q), q <= {q_max}"),
            weil_excess,
            1.0,
        ),
        Check::at_most(
            format!("ramanujan closed form deviation / (1e-9 q), q <= {q_max}"),
            worst_ramanujan,
            1.0,
        ),
    ]
}

fn random_vec4(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Vec4 {
    Vec4([0; 4].map(|_| rng.gen_range(lo..=hi)))
}

fn random_odd_squarefree(rng: &mut ChaCha8Rng, hi: u64) -> u64 {
    loop {
        let d = random_odd(rng, 1, hi);
        if factorize(d).unwrap().is_squarefree() {
            return d;
        }
    }
}

fn random_vq(rng: &mut ChaCha8Rng, q: u64) -> VqParams {
    let d = random_odd_squarefree(rng, 255);
    let g = gcd(q, d) as i64;
    VqParams {
        q,
        target: random_odd(rng, 1, 10_000_000),
        d,
        v: rng.gen_range(-100_000..=100_000),
        b: random_vec4(rng, -60, 60),
        // (q, d) | n_j is needed for a nonzero value
        n: Vec4(random_vec4(rng, -40, 40).0.map(|x| x * g)),
    }
}

fn random_prime_power(rng: &mut ChaCha8Rng, q_max: u64) -> u64 {
    let primes = primes_up_to(q_max);
    loop {
        let p = primes[rng.gen_range(0..primes.len())];
        let s_max = (q_max as f64).ln() / (p as f64).ln();
        let s = rng.gen_range(1..=(s_max.floor() as u32).max(1));
        if let Some(q) = p.checked_pow(s).filter(|&q| q <= q_max) {
            return q;
        }
    }
}

/// `V_q`: closed forms against literal summation, multiplicativity,
/// vanishing, and the size estimate.
pub fn vq_suite(seed: u64, cases: usize, q_max: u64, pairs: usize, vanishing: usize) -> Vec<Check> {
    let mut rng = rng(seed);
    let mut worst = 0f64;
    let mut bound_ratio = 0f64;
    let mut composites = 0;
    for i in 0..cases {
        let q = if i % 2 == 0 {
            random_prime_power(&mut rng, q_max)
        } else {
            loop {
                let q = rng.gen_range(2..=q_max);
                if factorize(q).unwrap().factors.len() >= 2 {
                    composites += 1;
                    break q;
                }
            }
        };
        let p = random_vq(&mut rng, q);
        let direct = vq_direct(&p);
        let fast = vq_fast(&p);
        worst = worst.max((direct - fast).norm() / vq_tolerance(q, p.d));
        let b = vq_bound(&p);
        bound_ratio = bound_ratio.max(direct.norm().max(fast.norm()) / b);
    }

    // V_{q'q''}(N, d, v) = V_{q'}(N, q''d, q̄''²v) V_{q''}(N, q'd, q̄'²v)
    let mut worst_mult = 0f64;
    let mut done = 0;
    while done < pairs {
        let q1 = rng.gen_range(2..=60u64);
        let q2 = rng.gen_range(2..=60u64);
        if gcd(q1, q2) != 1 {
            continue;
        }
        let p = random_vq(&mut rng, q1 * q2);
        let lhs = vq_direct(&p);
        let part = |qa: u64, qb: u64| {
            let inv = inv_unchecked(qb % qa, qa);
            let v = mul_mod(crate::arith::reduce(p.v as i128, qa), mul_mod(inv, inv, qa), qa);
            vq_direct(&VqParams { q: qa, d: qb * p.d, v: v as i64, ..p })
        };
        let rhs = part(q1, q2) * part(q2, q1);
        worst_mult = worst_mult.max((lhs - rhs).norm() / vq_tolerance(q1 * q2, p.d));
        done += 1;
    }

    // (q, d) ∤ n_j for some j forces V_q = 0
    let mut worst_vanish = 0f64;
    let mut built = 0;
    while built < vanishing {
        let d = random_odd_squarefree(&mut rng, 255);
        if d == 1 {
            continue;
        }
        let k = rng.gen_range(1..=40u64);
        let q = d * k;
        if q > 1500 {
            continue;
        }
        let g = gcd(q, d) as i64;
        let mut p = random_vq(&mut rng, q);
        p.d = d;
        let j = rng.gen_range(0..4);
        p.n.0[j] = p.n.0[j] * g + rng.gen_range(1..g);
        let direct = vq_direct(&p);
        let fast = vq_fast(&p);
        worst_vanish = worst_vanish.max(direct.norm().max(fast.norm()) / vq_tolerance(q, d));
        built += 1;
    }

    vec![
        Check::at_most(
            format!("|fast - direct| / tolerance, {cases} cases q <= {q_max} ({composites} composite)"),
            worst,
            1.0,
        ),
        Check::at_most(format!("multiplicativity deviation / tolerance, {pairs} coprime pairs"), worst_mult, 1.0),
        Check::at_most(format!("|V_q| / tolerance on {vanishing} vanishing cases"), worst_vanish, 1.0),
        Check::at_most("max |V_q| / size estimate", bound_ratio, VQ_BOUND_CONSTANT),
    ]
}

/// Local solution counts: the three counters, the character decomposition
/// and the size estimates.
pub fn local_count_suite(seed: u64, n_count: usize) -> Result<Vec<Check>> {
    let mut rng = rng(seed);
    let ns: Vec<u64> = (0..n_count).map(|_| random_odd(&mut rng, 1, 1_000_000_000)).collect();
    let mut crt_mismatch = 0;
    let ds = odd_squarefree_up_to(105);
    for &n in &ns {
        for &d in &ds {
            if count_l_naive(n, d)? != count_l_crt(n, &factorize(d)?)? {
                crt_mismatch += 1;
            }
        }
    }
    let mut decomposition_mismatch = 0;
    for p in primes_up_to(61).into_iter().skip(1) {
        for &n in &ns {
            if char_decomposition(n, p)?.reconstruct() != count_l_naive(n, p)? as i64 {
                decomposition_mismatch += 1;
            }
        }
    }
    let (mut worst_dev, mut worst_ratio) = (0f64, 0f64);
    for p in primes_up_to(300).into_iter().skip(1) {
        let pf = p as f64;
        for &n in &ns {
            let l = count_l_prime(n, p)? as f64;
            worst_dev = worst_dev.max((l - pf * pf).abs() / pf.powf(1.5));
            worst_ratio = worst_ratio.max(l / (4.0 * (pf - 1.0).powi(2)));
        }
    }
    let (mut worst_l, mut worst_delta) = (0f64, 0f64);
    for p in primes_up_to(100).into_iter().skip(1) {
        let scale = (p as f64).powf(1.5);
        for &n in &ns {
            let c = char_decomposition(n, p)?;
            let m = c.l2.abs().max(c.l3.abs()).max(c.l4.abs()) as f64;
            worst_l = worst_l.max(m / scale);
            worst_delta = worst_delta.max(c.delta().abs() / scale);
        }
    }
    Ok(vec![
        Check::failures(
            format!("naive vs prime-product L, odd squarefree d <= 105, {n_count} N"),
            crt_mismatch,
        ),
        Check::failures("character decomposition reconstructs L, p <= 61", decomposition_mismatch),
        Check::at_most("max |L - p²| / p^1.5, p <= 300", worst_dev, 30.0),
        Check::at_most("max L / 4(p-1)², p <= 300", worst_ratio, 1.0),
        Check::at_most("max |L2|, |L3|, |L4| / p^1.5, p <= 100", worst_l, 3.0),
        Check::at_most("max |Δ| / p^1.5, p <= 100", worst_delta, 4.0),
    ])
}

/// Bounds on `Ψ(N, p)` and its multiplicativity.
pub fn psi_suite(seed: u64, n_count: usize, p_max: u64, pairs: usize) -> Result<Vec<Check>> {
    let mut rng = rng(seed);
    let ns: Vec<u64> = (0..n_count).map(|_| random_odd(&mut rng, 1, 1_000_000_000)).collect();
    let (mut max_psi, mut min_psi_large, mut worst_dev) = (0f64, f64::INFINITY, 0f64);
    for p in primes_up_to(p_max).into_iter().skip(1) {
        let pf = p as f64;
        for &n in &ns {
            let v = psi_prime(n, p)?;
            max_psi = max_psi.max(v);
            if p > 1000 {
                min_psi_large = min_psi_large.min(v);
            }
            if p >= 11 {
                worst_dev = worst_dev.max((v - 1.0 / pf).abs() * pf.powf(1.5));
            }
        }
    }
    let ds = odd_squarefree_up_to(63);
    let mut worst_mult = 0f64;
    let mut done = 0;
    while done < pairs {
        let d1 = ds[rng.gen_range(1..ds.len())];
        let d2 = ds[rng.gen_range(1..ds.len())];
        if gcd(d1, d2) != 1 || d1 * d2 > 255 {
            continue;
        }
        let n = ns[done % ns.len()];
        let joint = count_l_naive(n, d1 * d2)? as f64;
        let alpha = local_density(n, d1 * d2)?.alpha.to_f64().expect("finite");
        let psi_joint = alpha * joint / ((d1 * d2) as f64).powi(3);
        let product = local_density(n, d1)?.psi * local_density(n, d2)?.psi;
        worst_mult = worst_mult.max((psi_joint - product).abs() / product.abs().max(1e-300));
        done += 1;
    }
    Ok(vec![
        Check::at_most(format!("max Ψ(N, p), odd p <= {p_max}"), max_psi, 0.9),
        Check::above(format!("min Ψ(N, p), 1000 < p <= {p_max}"), min_psi_large, 0.0),
        Check::at_most(format!("max |Ψ - 1/p| p^1.5, 11 <= p <= {p_max}"), worst_dev, 35.0),
        Check::at_most(format!("Ψ multiplicativity relative deviation, {pairs} pairs"), worst_mult, 1e-12),
    ])
}

/// `Π (1 - Ψ(N, p))⁻¹` over `[z₁, z₂)` against `(log z₂/log z₁)(1 + L₀/log z₁)`.
pub fn mertens_suite(seed: u64, n_count: usize, ranges: &[(u64, u64)]) -> Result<Vec<Check>> {
    let mut rng = rng(seed);
    let mut checks = Vec::new();
    for &(z1, z2) in ranges {
        let mut worst = 0f64;
        for _ in 0..n_count {
            let n = random_odd(&mut rng, 1, 1_000_000_000);
            worst = worst.max(mertens_product(n, z1, z2)?.l0);
        }
        checks.push(Check::at_most(format!("required L0 on [{z1}, {z2})"), worst, 10.0));
    }
    Ok(checks)
}

/// The singular series as an Euler product against its closed form.
pub fn singular_series_suite(seed: u64, ds: &[u64], n_count: usize, prime_bound: u64) -> Result<Vec<Check>> {
    let mut rng = rng(seed);
    let mut ns = Vec::new();
    while ns.len() < n_count {
        let n = random_odd(&mut rng, 1, 10_000_000);
        // every d needs an admissible class
        if ds.iter().all(|&d| count_l_crt(n, &factorize(d).unwrap()).unwrap() > 0) {
            ns.push(n);
        }
    }
    let mut worst = 0f64;
    let (mut chi2_dev, mut chi_pd_dev) = (0f64, 0f64);
    for &n in &ns {
        for &d in ds {
            let classes = admissible_classes(n, d)?;
            let b = classes[rng.gen_range(0..classes.len())];
            worst = worst.max(singular_series(n, d, &b, prime_bound)?.relative_gap());
            chi2_dev = chi2_dev.max((chi_p_series(n, d, &b, 2, 12)? - 1.0).abs());
            for p in factorize(d)?.primes() {
                let v = chi_p_series(n, d, &b, p, crate::localdata::default_s_max(n, p))?;
                chi_pd_dev = chi_pd_dev.max((v - chi_p_closed(n, d, p)).abs() / p as f64);
            }
        }
    }
    Ok(vec![
        Check::at_most(
            format!("Euler product vs closed form, relative, primes <= {prime_bound}"),
            worst,
            1e-3,
        ),
        Check::at_most("|χ_2 - 1|", chi2_dev, 1e-12),
        Check::at_most("|χ_p - p| / p for p | d", chi_pd_dev, 1e-12),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaSummary {
    pub oscillatory: f64,
    pub surface: f64,
    /// Both estimates scaled by `e^{64}`.
    pub oscillatory_normalized: f64,
    pub surface_normalized: f64,
    pub relative_gap: f64,
}

pub fn kappa_suite() -> (KappaSummary, Vec<Check>) {
    let a = kappa_oscillatory();
    let b = kappa_surface();
    let gap = (a.normalized - b.normalized).abs() / b.normalized.abs();
    let summary = KappaSummary {
        oscillatory: a.value,
        surface: b.value,
        oscillatory_normalized: a.normalized,
        surface_normalized: b.normalized,
        relative_gap: gap,
    };
    (
        summary,
        vec![
            Check::above("κ (oscillatory) scaled by e^64", a.normalized, 0.0),
            Check::above("κ (surface) scaled by e^64", b.normalized, 0.0),
            Check::at_most("relative gap between the two κ estimates", gap, 1e-3),
        ],
    )
}

/// `r₄(N) = 8σ₁(N)` for every odd `N <= n_max` and random odd `N <= random_max`.
pub fn jacobi_suite(seed: u64, n_max: u64, random: usize, random_max: u64) -> Result<Vec<Check>> {
    let r2 = r2_table(n_max);
    let mut failures = 0;
    for n in (1..=n_max).step_by(2) {
        if r4_from_r2(&r2, n) != 8 * factorize(n)?.divisor_sum() {
            failures += 1;
        }
    }
    let mut rng = rng(seed);
    let r2 = r2_table(random_max);
    let mut random_failures = 0;
    for _ in 0..random {
        let n = random_odd(&mut rng, 1, random_max);
        if r4_from_r2(&r2, n) != 8 * factorize(n)?.divisor_sum() {
            random_failures += 1;
        }
    }
    Ok(vec![
        Check::failures(format!("r4(N) != 8σ(N), odd N <= {n_max}"), failures),
        Check::failures(format!("r4(N) != 8σ(N), {random} random odd N <= {random_max}"), random_failures),
    ])
}

/// `F(N, d)` against `M(N, d)` over random odd `N`.
///
/// For `d > 1` many `N` have no admissible class, making `F = M = 0` and the
/// relative error meaningless; each `d` instead gets its own `n_count` draws
/// among the `N` with `M(N, d) > 0`, taken from the same random stream.
pub fn main_term_suite(seed: u64, n_count: usize, lo: u64, hi: u64, ds: &[u64]) -> Result<Vec<Check>> {
    let mut rng = rng(seed);
    let mut rel1 = Vec::new();
    let mut rel_d: Vec<Vec<f64>> = vec![Vec::new(); ds.len()];
    let mut drawn = 0usize;
    while rel1.len() < n_count || rel_d.iter().any(|r| r.len() < n_count) {
        if drawn >= 100 * n_count.max(1) {
            return Err(Error::InvalidParameter(format!(
                "too few N in [{lo}, {hi}] with a nonvanishing main term"
            )));
        }
        drawn += 1;
        let n = random_odd(&mut rng, lo, hi);
        let set = RepresentationSet::enumerate(n)?;
        if rel1.len() < n_count {
            rel1.push(set.remainder(1)?.relative_error.abs());
        }
        for (k, &d) in ds.iter().enumerate() {
            if rel_d[k].len() < n_count && count_l(n, d)? > 0 {
                rel_d[k].push(set.remainder(d)?.relative_error.abs());
            }
        }
    }
    let worst = rel1.iter().copied().fold(0f64, f64::max);
    let mut checks = vec![
        Check::at_most(format!("median |F - M| / M, d = 1, {n_count} N in [{lo}, {hi}]"), median(rel1), 0.08),
        Check::at_most("max |F - M| / M, d = 1", worst, 0.25),
    ];
    for (k, &d) in ds.iter().enumerate() {
        checks.push(Check::at_most(
            format!("median |F - M| / M, d = {d}, {n_count} N with M > 0"),
            median(rel_d[k].clone()),
            0.15,
        ));
    }
    Ok(checks)
}

/// Rosser weights: the fundamental inequality, support, and the parameter
/// constants.
pub fn sieve_suite(levels: &[f64], z: f64, p0: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &level in levels {
        let table = rosser_lambda_minus(level, z, p0)?;
        let r = check_fundamental_inequality(&table)?;
        checks.push(Check::at_most(
            format!(
                "max Σλ(d) - [n=1] over {} squarefree n, D = {level:e}",
                r.checked
            ),
            r.max_excess as f64,
            0.0,
        ));
        checks.push(Check::at_most(format!("|Σλ(d) - 1| at n = 1, D = {level:e}"), (r.at_one - 1).abs() as f64, 0.0));
        let bad = table
            .support()
            .filter(|&(d, l)| l.abs() > 1 || d as f64 > level || !factorize(d).unwrap().is_squarefree())
            .count();
        checks.push(Check::failures(format!("weights outside |λ| <= 1, d <= D, D = {level:e}"), bad as u64));
    }
    let s0 = SieveParams::default().s0();
    let f = f_lower(s0)?;
    checks.push(Check::above("f(s0)", f, 0.0));
    checks.push(Check::at_most("|f(s0) - 4.3e-3|", (f - 4.3e-3).abs(), 5e-5));
    let budget = prime_factor_budget(DEFAULT_ETA)?;
    checks.push(Check::above("2/η", budget, 48.0));
    checks.push(Check::at_most("2/η", budget, 49.0 - 1e-12));
    Ok(checks)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SieveConfig {
    pub z: f64,
    pub level: f64,
    pub p0: f64,
}

/// Γ against `Σ θ(d) F(N, d)` for each configuration.
pub fn end_to_end_suite(n: u64, configs: &[SieveConfig]) -> Result<(Vec<crate::lagrange::SieveAssemblyReport>, Vec<Check>)> {
    let set = RepresentationSet::enumerate(n)?;
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    for c in configs {
        let r = sieve_assembly(&set, c.z, c.level, c.p0)?;
        let tag = format!("N = {n}, z = {:.4}, D = {:.4}", c.z, c.level);
        checks.push(Check::at_least(format!("Γ - Σθ(d)F(N,d), {tag}"), r.gamma - r.lower_bound, -1e-12 * r.gamma.abs()));
        checks.push(Check::above(format!("Γ, {tag}"), r.gamma, 0.0));
        checks.push(Check::failures(
            format!("survivors with a prime factor in (2, z) or even, {tag}"),
            u64::from(!r.survivors_verified),
        ));
        reports.push(r);
    }
    Ok((reports, checks))
}

/// The configurations used by the end-to-end check: the literal exponents
/// `z = N^0.05`, `D = N^0.08`, plus larger sifting ranges where the sieving
/// primes are nonempty.
pub fn end_to_end_configs(n: u64, z_exp: f64, level_exp: f64) -> Vec<SieveConfig> {
    let nf = n as f64;
    vec![
        SieveConfig { z: nf.powf(z_exp), level: nf.powf(level_exp), p0: 7.0 },
        SieveConfig { z: 50.0, level: 1e4, p0: 7.0 },
        SieveConfig { z: 100.0, level: nf.sqrt(), p0: 7.0 },
    ]
}

/// Timed suite result for progress reporting.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, elapsed(start))
}
