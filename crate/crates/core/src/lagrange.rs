//! Four-square representations of `N` inside the weight's support, the
//! weighted counts `Γ`, `F(N, d)`, `Φ(N, d, b)`, the main term `M(N, d)` and
//! the sieve lower-bound assembly.
//!
//! Weighted quantities use the normalized weight `ω̃₀ = e^{16} ω₀`, so `F`,
//! `Φ`, `Γ` and `M` are all `e^{64}` times their true values. Ratios and
//! inequalities between them are unaffected.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, primes_between};
use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use crate::expsum::Vec4;
use crate::localdata::{a_of, count_l, is_admissible, psi, psi_prime};
use crate::oscillatory::{kappa_normalized, omega0_normalized};
use crate::sieve::{
    f_lower, rosser_lambda_minus, sieving_primes, small_primes, weighted_psi_sum, SieveWeightTable,
};

/// Largest `N` enumerated unless a caller raises it.
pub const DEFAULT_CEILING: u64 = 100_000_000;

/// Components are packed into 13 bits during the join, which caps `N`.
const PACK_BITS: u32 = 13;
const HARD_CEILING: u64 = 119_000_000;

const CACHE_MAGIC: &[u8; 4] = b"LGR4";
const CACHE_VERSION: u8 = 1;

/// Solutions of `x₁² + x₂² + x₃² + x₄² = N` with every `x_j` in `(P/4, 3P/4)`,
/// `P = √N`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationSet {
    pub n: u64,
    pub solutions: Vec<[u32; 4]>,
}

/// `x` with `P/4 < x < 3P/4`, tested exactly as `N < 16x² < 9N`.
pub fn admissible_range(n: u64) -> Vec<u32> {
    let n = n as u128;
    let lo = ((n as f64).sqrt() / 4.0).floor().max(0.0) as u128;
    (lo.saturating_sub(1)..)
        .take_while(|&x| 16 * x * x < 9 * n)
        .filter(|&x| 16 * x * x > n)
        .map(|x| x as u32)
        .collect()
}

impl RepresentationSet {
    pub fn enumerate(n: u64) -> Result<Self> {
        Self::enumerate_with_ceiling(n, DEFAULT_CEILING)
    }

    /// Meet in the middle: sort the packed two-square sums `s = x₁² + x₂²`
    /// and join groups with `s + s' = N`.
    pub fn enumerate_with_ceiling(n: u64, ceiling: u64) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::EvenN(n));
        }
        let ceiling = ceiling.min(HARD_CEILING);
        if n > ceiling {
            return Err(Error::AboveCeiling { n, ceiling });
        }
        let xs = admissible_range(n);
        let mut pairs: Vec<u64> = Vec::with_capacity(xs.len() * xs.len() / 2);
        for &a in &xs {
            for &b in &xs {
                let s = a as u64 * a as u64 + b as u64 * b as u64;
                if s >= n {
                    break;
                }
                pairs.push(s << (2 * PACK_BITS) | (a as u64) << PACK_BITS | b as u64);
            }
        }
        pairs.sort_unstable();
        let mask = (1u64 << PACK_BITS) - 1;
        let sum = |v: u64| v >> (2 * PACK_BITS);
        let split = |v: u64| [(v >> PACK_BITS & mask) as u32, (v & mask) as u32];

        // group boundaries
        let mut groups: Vec<(u64, usize, usize)> = Vec::new();
        let mut start = 0;
        while start < pairs.len() {
            let s = sum(pairs[start]);
            let mut end = start;
            while end < pairs.len() && sum(pairs[end]) == s {
                end += 1;
            }
            groups.push((s, start, end));
            start = end;
        }

        let mut solutions = Vec::new();
        let mut j = groups.len();
        for &(s, lo, hi) in &groups {
            let target = n - s;
            while j > 0 && groups[j - 1].0 > target {
                j -= 1;
            }
            if j == 0 {
                break;
            }
            let (t, lo2, hi2) = groups[j - 1];
            if t != target {
                continue;
            }
            for &u in &pairs[lo..hi] {
                let [x1, x2] = split(u);
                for &w in &pairs[lo2..hi2] {
                    let [x3, x4] = split(w);
                    solutions.push([x1, x2, x3, x4]);
                }
            }
        }
        solutions.sort_unstable();
        Ok(RepresentationSet { n, solutions })
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn vectors(&self) -> impl Iterator<Item = Vec4> + '_ {
        self.solutions
            .iter()
            .map(|x| Vec4::new(x[0] as i64, x[1] as i64, x[2] as i64, x[3] as i64))
    }

    /// `ω̃₀(x/P)` for every `x` that can occur.
    fn weight_table(&self) -> Vec<f64> {
        let p = (self.n as f64).sqrt();
        let top = self.solutions.iter().flat_map(|s| s.iter()).copied().max().unwrap_or(0);
        (0..=top).map(|x| omega0_normalized(x as f64 / p)).collect()
    }

    /// Weighted sum over the solutions accepted by `keep`, in canonical order.
    fn weighted_sum<F: FnMut(&[u32; 4]) -> bool>(&self, mut keep: F) -> f64 {
        let w = self.weight_table();
        let mut acc = CompensatedSum::new();
        for s in &self.solutions {
            if keep(s) {
                acc.add(s.iter().map(|&x| w[x as usize]).product());
            }
        }
        acc.value()
    }

    /// `Γ`: the weighted count of solutions with `(x₁x₂x₃x₄ + 1, P(z)) = 1`,
    /// `P(z)` the product of the primes `2 < p < z`.
    pub fn gamma_sum(&self, z: f64) -> f64 {
        let primes = odd_primes_below(z);
        self.weighted_sum(|s| {
            let m = shifted_product(s);
            primes.iter().all(|&p| m % p != 0)
        })
    }

    /// `F(N, d)`: the weighted count of solutions with `d | x₁x₂x₃x₄ + 1`.
    pub fn f_of(&self, d: u64) -> f64 {
        self.weighted_sum(|s| shifted_product(s) % d == 0)
    }

    /// `Φ(N, d, b)`: the weighted count of solutions with `x ≡ b (mod d)`.
    pub fn phi_of(&self, d: u64, b: &Vec4) -> Result<f64> {
        if !is_admissible(self.n, d, b) {
            return Err(Error::InadmissibleClass { d, b: b.0 });
        }
        let target: Vec<u64> = b.0.iter().map(|&x| crate::arith::reduce(x as i128, d)).collect();
        Ok(self.weighted_sum(|s| s.iter().zip(&target).all(|(&x, &t)| x as u64 % d == t)))
    }

    /// `Φ(N, d, b)` for every class `b ∈ [1, d]⁴` met by a solution with
    /// `d | x₁x₂x₃x₄ + 1`.
    pub fn phi_by_class(&self, d: u64) -> BTreeMap<Vec4, f64> {
        let w = self.weight_table();
        let mut acc: BTreeMap<Vec4, CompensatedSum> = BTreeMap::new();
        for s in &self.solutions {
            if shifted_product(s) % d != 0 {
                continue;
            }
            let class = Vec4(s.map(|x| {
                let r = x as u64 % d;
                (if r == 0 { d } else { r }) as i64
            }));
            acc.entry(class)
                .or_default()
                .add(s.iter().map(|&x| w[x as usize]).product());
        }
        acc.into_iter().map(|(k, v)| (k, v.value())).collect()
    }

    /// `R(N, d) = F(N, d) - M(N, d)` with diagnostics.
    pub fn remainder(&self, d: u64) -> Result<MainTermReport> {
        let f = self.f_of(d);
        let m = main_term(self.n, d)?;
        let l = count_l(self.n, d)?;
        let nf = self.n as f64;
        let r = f - m;
        Ok(MainTermReport {
            n: self.n,
            d,
            f,
            m,
            r,
            // no admissible classes: both sides vanish identically
            relative_error: if m == 0.0 && f == 0.0 { 0.0 } else { r / m },
            l,
            in_regime: (d as f64) <= nf.powf(1.0 / 12.0),
            fitted_c: if l > 0 { r.abs() / (l as f64 * nf.powf(0.8)) } else { 0.0 },
        })
    }

    /// Writes columns `x1,x2,x3,x4`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x1,x2,x3,x4")?;
        for s in &self.solutions {
            writeln!(out, "{},{},{},{}", s[0], s[1], s[2], s[3])?;
        }
        Ok(())
    }

    /// Binary cache: `"LGR4"`, version byte, `N` and the solution count as
    /// little-endian `u64`, then four little-endian `u32` per solution.
    pub fn write_binary<W: Write>(&self, out: W) -> Result<()> {
        let mut out = BufWriter::new(out);
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&[CACHE_VERSION])?;
        out.write_all(&self.n.to_le_bytes())?;
        out.write_all(&(self.solutions.len() as u64).to_le_bytes())?;
        for s in &self.solutions {
            for x in s {
                out.write_all(&x.to_le_bytes())?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_binary<R: Read>(input: R) -> Result<Self> {
        let mut input = BufReader::new(input);
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let mut version = [0u8; 1];
        input.read_exact(&mut version)?;
        if version[0] != CACHE_VERSION {
            return Err(Error::Cache(format!("unsupported version {}", version[0])));
        }
        let mut word = [0u8; 8];
        input.read_exact(&mut word)?;
        let n = u64::from_le_bytes(word);
        input.read_exact(&mut word)?;
        let count = u64::from_le_bytes(word) as usize;
        let mut solutions = Vec::with_capacity(count);
        let mut buf = [0u8; 16];
        for _ in 0..count {
            input.read_exact(&mut buf)?;
            let x = |i: usize| u32::from_le_bytes(buf[4 * i..4 * i + 4].try_into().unwrap());
            let s = [x(0), x(1), x(2), x(3)];
            if s.iter().map(|&v| v as u64 * v as u64).sum::<u64>() != n {
                return Err(Error::Cache(format!("{s:?} is not a representation of {n}")));
            }
            solutions.push(s);
        }
        let mut rest = Vec::new();
        input.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(Error::Cache("trailing bytes".into()));
        }
        Ok(RepresentationSet { n, solutions })
    }

    /// Loads `N`'s representations from `dir`, enumerating and storing them on
    /// a miss. Returns the set and whether it came from the cache.
    pub fn cached(n: u64, dir: &Path) -> Result<(Self, bool)> {
        let path = cache_path(dir, n);
        if path.exists() {
            let set = Self::read_binary(File::open(&path)?)?;
            if set.n != n {
                return Err(Error::Cache(format!("{} holds N = {}", path.display(), set.n)));
            }
            return Ok((set, true));
        }
        let set = Self::enumerate(n)?;
        std::fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        set.write_binary(File::create(&tmp)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok((set, false))
    }
}

pub fn cache_path(dir: &Path, n: u64) -> PathBuf {
    dir.join(format!("lgr4-{n}.bin"))
}

fn shifted_product(s: &[u32; 4]) -> u64 {
    s.iter().map(|&x| x as u64).product::<u64>() + 1
}

fn odd_primes_below(z: f64) -> Vec<u64> {
    let hi = z.ceil().max(0.0) as u64;
    primes_between(2, hi).into_iter().filter(|&p| (p as f64) < z).collect()
}

/// `r₂(m)` for `0 <= m <= limit`: ordered integer pairs with signs.
pub fn r2_table(limit: u64) -> Vec<u64> {
    let mut r2 = vec![0u64; limit as usize + 1];
    let mut a: i64 = 0;
    while (a * a) as u64 <= limit {
        let mut b: i64 = 0;
        while (a * a + b * b) as u64 <= limit {
            let signs = if a == 0 { 1 } else { 2 } * if b == 0 { 1 } else { 2 };
            r2[(a * a + b * b) as usize] += signs;
            b += 1;
        }
        a += 1;
    }
    r2
}

/// `r₄(N)` from a table of `r₂` covering `0..=N`.
pub fn r4_from_r2(r2: &[u64], n: u64) -> u64 {
    (0..=n as usize).map(|m| r2[m] * r2[n as usize - m]).sum()
}

/// The number of integer quadruples (signs, zeros and order all counted)
/// with `x₁² + x₂² + x₃² + x₄² = N`, next to `8σ₁(N)`.
pub fn jacobi_r4_check(n: u64) -> Result<(u64, u64)> {
    if n % 2 == 0 {
        return Err(Error::EvenN(n));
    }
    let count = r4_from_r2(&r2_table(n), n);
    Ok((count, 8 * factorize(n)?.divisor_sum()))
}

/// `M(N, d) = κ̃ N a(N) Ψ(N, d)`.
pub fn main_term(n: u64, d: u64) -> Result<f64> {
    Ok(kappa_normalized() * n as f64 * a_of(n) * psi(n, d)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTermReport {
    pub n: u64,
    pub d: u64,
    pub f: f64,
    pub m: f64,
    /// `F - M`.
    pub r: f64,
    /// `R / M`.
    pub relative_error: f64,
    pub l: u64,
    /// Whether `d <= N^{1/12}`, the range where the remainder estimate applies.
    pub in_regime: bool,
    /// `|R| / (L(N, d) N^{0.8})`.
    pub fitted_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveAssemblyReport {
    pub n: u64,
    pub z: f64,
    pub level: f64,
    pub p0: f64,
    pub small_primes: Vec<u64>,
    pub sieving_primes: Vec<u64>,
    /// Number of `d` with `θ(d) != 0`.
    pub support_size: usize,
    /// `Γ`, the weighted count of survivors.
    pub gamma: f64,
    /// `Σ_d θ(d) F(N, d)`.
    pub lower_bound: f64,
    pub inequality_holds: bool,
    pub survivors: usize,
    /// Every survivor's `x₁x₂x₃x₄ + 1` is odd and free of primes in `(2, z)`.
    pub survivors_verified: bool,
    pub gamma3: f64,
    pub gamma4: f64,
    /// `κ̃ N a(N) Γ₃ Γ₄`.
    pub gamma1: f64,
    /// `log D / log z`, when `z > 1`.
    pub s0: Option<f64>,
    /// `f(s₀)` when `2 < s₀ < 3`.
    pub f_s0: Option<f64>,
}

/// Evaluates `Γ` and the lower bound `Σ_d θ(d) F(N, d)` for the Rosser
/// weights of level `D` on the primes in `(p0, z)`, combined with
/// inclusion-exclusion over the odd primes up to `p0`.
pub fn sieve_assembly(set: &RepresentationSet, z: f64, level: f64, p0: f64) -> Result<SieveAssemblyReport> {
    let n = set.n;
    let small = small_primes(z, p0);
    let table = if sieving_primes(z, p0).is_empty() {
        SieveWeightTable {
            level,
            z,
            p0,
            primes: Vec::new(),
            weights: BTreeMap::from([(1, 1)]),
        }
    } else {
        rosser_lambda_minus(level, z, p0)?
    };

    // F(N, d) for every d in the θ-support, accumulated per solution by
    // listing the support elements that divide x₁x₂x₃x₄ + 1.
    let w = set.weight_table();
    let mut f_by_d: BTreeMap<u64, CompensatedSum> = BTreeMap::new();
    let mut gamma = CompensatedSum::new();
    let mut survivors = 0usize;
    let mut survivors_verified = true;
    let all_primes = odd_primes_below(z);
    for s in &set.solutions {
        let m = shifted_product(s);
        let weight: f64 = s.iter().map(|&x| w[x as usize]).product();
        let small_div: Vec<u64> = small.iter().copied().filter(|&p| m % p == 0).collect();
        let sieve_div: Vec<u64> = table.primes.iter().copied().filter(|&p| m % p == 0).collect();
        for dmask in 0u64..(1 << small_div.len()) {
            let delta = mask_product(&small_div, dmask);
            for tmask in 0u64..(1 << sieve_div.len()) {
                let t = mask_product(&sieve_div, tmask);
                if table.lambda(t) != 0 {
                    f_by_d.entry(delta * t).or_default().add(weight);
                }
            }
        }
        if all_primes.iter().all(|&p| m % p != 0) {
            gamma.add(weight);
            survivors += 1;
            survivors_verified &= m % 2 == 1 && free_of_primes_below(m, z);
        }
    }
    let mut lower = CompensatedSum::new();
    for (&d, f) in &f_by_d {
        let th = crate::sieve::theta(d, &small, &table);
        lower.add(th as f64 * f.value());
    }
    let support_size = (1usize << small.len()) * table.len();

    let gamma3 = crate::sieve::small_prime_product(n, &small)?;
    let gamma4 = weighted_psi_sum(n, &table)?;
    let gamma1 = kappa_normalized() * n as f64 * a_of(n) * gamma3 * gamma4;
    let s0 = (z > 1.0).then(|| level.ln() / z.ln());
    let f_s0 = s0.and_then(|s| f_lower(s).ok());
    let gamma = gamma.value();
    let lower_bound = lower.value();
    Ok(SieveAssemblyReport {
        n,
        z,
        level,
        p0,
        small_primes: small,
        sieving_primes: table.primes.clone(),
        support_size,
        gamma,
        lower_bound,
        inequality_holds: gamma >= lower_bound - 1e-12 * gamma.abs().max(lower_bound.abs()),
        survivors,
        survivors_verified,
        gamma3,
        gamma4,
        gamma1,
        s0,
        f_s0,
    })
}

fn mask_product(primes: &[u64], mask: u64) -> u64 {
    primes
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &p)| p)
        .product()
}

/// Checks that no integer `2 < k < z` with `k` prime divides `m`, by `gcd`
/// against primorial blocks.
fn free_of_primes_below(m: u64, z: f64) -> bool {
    let mut block: u128 = 1;
    let flush = |block: &mut u128| {
        let g = num_integer::gcd(*block, m as u128);
        *block = 1;
        g == 1
    };
    let mut k = 3u64;
    while (k as f64) < z {
        if crate::arith::is_prime(k) {
            if block.checked_mul(k as u128).map_or(true, |b| b > u64::MAX as u128) {
                if !flush(&mut block) {
                    return false;
                }
            }
            block *= k as u128;
        }
        k += 2;
    }
    flush(&mut block)
}

/// `Ψ(N, p)` for the odd primes below `z`, in order.
pub fn psi_profile(n: u64, z: u64) -> Result<Vec<(u64, f64)>> {
    primes_between(2, z).into_iter().map(|p| Ok((p, psi_prime(n, p)?))).collect()
}
