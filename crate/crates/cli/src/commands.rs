use lagrange_core::arith::{factorize, is_prime, primes_up_to};
use lagrange_core::expsum::{
    char_sum_poly, gauss_closed, gauss_direct, is_const_times_square, kloosterman, ramanujan_closed, vq_bound,
    vq_direct, vq_fast, vq_tolerance, weil_bound, ComplexValue, Vec4, VqParams, COMPLEX_TOL, VQ_BOUND_CONSTANT,
};
use lagrange_core::lagrange::RepresentationSet;
use lagrange_core::localdata::local_density;
use lagrange_core::verify::{self, Check};
use lagrange_core::{Error, Result};
use serde::Serialize;

use crate::envelope::ReportEnvelope;
use crate::{DensityArgs, ExpsumCommand, ReportArgs, Suite, VerifyArgs};

#[derive(Serialize)]
struct Complex {
    re: f64,
    im: f64,
}

impl From<ComplexValue> for Complex {
    fn from(z: ComplexValue) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

fn positive(name: &str, q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidParameter(format!("--{name} must be positive")));
    }
    Ok(())
}

fn vec4(name: &str, v: &[i64]) -> Result<Vec4> {
    <[i64; 4]>::try_from(v)
        .map(Vec4)
        .map_err(|_| Error::InvalidParameter(format!("--{name} takes four comma-separated integers")))
}

pub fn expsum(cmd: &ExpsumCommand) -> Result<ReportEnvelope> {
    let mut env = ReportEnvelope::new("expsum");
    match *cmd {
        ExpsumCommand::Gauss { q, m, n } => {
            positive("q", q)?;
            env.param("sum", "gauss").param("q", q).param("m", m).param("n", n);
            let direct = gauss_direct(q, m, n);
            let closed = gauss_closed(q, m, n);
            let gap = (direct - closed).norm();
            env.row(serde_json::json!({
                "q": q, "m": m, "n": n,
                "direct": Complex::from(direct),
                "closed": Complex::from(closed),
                "gap": gap,
            }));
            env.checks([Check::at_most("|direct - closed form|", gap, COMPLEX_TOL)]);
        }
        ExpsumCommand::Kloosterman { q, m, n } => {
            positive("q", q)?;
            env.param("sum", "kloosterman").param("q", q).param("m", m).param("n", n);
            let k = kloosterman(q, m, n);
            let bound = weil_bound(q, m, n);
            let tol = 1e-9 * q as f64;
            env.row(serde_json::json!({
                "q": q, "m": m, "n": n,
                "value": Complex::from(k),
                "weil_bound": bound,
            }));
            env.checks([
                Check::at_most("|K| - weil bound", k.norm() - bound, tol),
                Check::at_most("|Im K|", k.im.abs(), tol),
            ]);
        }
        ExpsumCommand::Ramanujan { q, m } => {
            positive("q", q)?;
            env.param("sum", "ramanujan").param("q", q).param("m", m);
            let direct = kloosterman(q, m, 0);
            let closed = ramanujan_closed(q, m);
            let gap = (direct - ComplexValue::new(closed as f64, 0.0)).norm();
            env.row(serde_json::json!({
                "q": q, "m": m,
                "direct": Complex::from(direct),
                "closed": closed,
            }));
            env.checks([Check::at_most("|direct - closed form|", gap, 1e-9 * q as f64)]);
        }
        ExpsumCommand::Charsum { p, ref coeffs } => {
            if p < 3 || !is_prime(p) {
                return Err(Error::InvalidParameter(format!("--p must be an odd prime, got {p}")));
            }
            env.param("sum", "charsum").param("p", p).param("coeffs", coeffs);
            let value = char_sum_poly(p, coeffs);
            let degenerate = is_const_times_square(p, coeffs);
            let degree = coeffs.iter().rposition(|&c| c.rem_euclid(p as i64) != 0).unwrap_or(0);
            let bound = (degree.saturating_sub(1)) as f64 * (p as f64).sqrt();
            env.row(serde_json::json!({
                "p": p,
                "value": value,
                "degree": degree,
                "const_times_square": degenerate,
                "bound": if degenerate { None } else { Some(bound) },
            }));
            if !degenerate {
                env.checks([Check::at_most("|Σ (f(x)/p)| vs (deg - 1) √p", value.abs() as f64, bound)]);
            }
        }
        ExpsumCommand::Vq { q, target, d, v, ref b, ref n } => {
            let params = VqParams {
                q,
                target,
                d,
                v,
                b: vec4("b", b)?,
                n: vec4("n", n)?,
            };
            params.validate()?;
            env.param("sum", "vq").param("q", q).param("N", target).param("d", d).param("v", v);
            env.param("b", params.b.0).param("n", params.n.0);
            let direct = vq_direct(&params);
            let fast = vq_fast(&params);
            let bound = VQ_BOUND_CONSTANT * vq_bound(&params);
            let tol = vq_tolerance(q, d);
            env.row(serde_json::json!({
                "q": q, "N": target, "d": d,
                "direct": Complex::from(direct),
                "fast": Complex::from(fast),
                "gap": (direct - fast).norm(),
                "bound": bound,
            }));
            env.checks([
                Check::at_most("|fast - direct|", (direct - fast).norm(), tol),
                Check::at_most("|V_q| vs 4 × size estimate", direct.norm(), bound),
            ]);
        }
    }
    Ok(env)
}

#[derive(Serialize)]
struct DensityRow {
    d: u64,
    l: u64,
    alpha: String,
    psi: f64,
    /// `|L - p²|/p^{3/2}`, primes only.
    deviation: Option<f64>,
    deviation_ok: Option<bool>,
    /// `4(p - 1)²`, primes only.
    l_max: Option<u64>,
    psi_ok: Option<bool>,
}

pub fn density(args: &DensityArgs) -> Result<ReportEnvelope> {
    let mut env = ReportEnvelope::new("density");
    env.param("N", args.n);
    let moduli = match (args.p_max, args.d.is_empty()) {
        (Some(p_max), _) => {
            env.param("p_max", p_max);
            primes_up_to(p_max).into_iter().skip(1).collect()
        }
        (None, false) => {
            env.param("d", &args.d);
            args.d.clone()
        }
        (None, true) => return Err(Error::InvalidParameter("give --d or --p-max".into())),
    };
    let (mut worst_dev, mut worst_ratio, mut max_psi) = (0f64, 0f64, 0f64);
    let mut any_prime = false;
    for d in moduli {
        factorize(d)?;
        let rec = local_density(args.n, d)?;
        let mut row = DensityRow {
            d,
            l: rec.l,
            alpha: rec.alpha.to_string(),
            psi: rec.psi,
            deviation: None,
            deviation_ok: None,
            l_max: None,
            psi_ok: None,
        };
        if is_prime(d) {
            any_prime = true;
            let pf = d as f64;
            let dev = (rec.l as f64 - pf * pf).abs() / pf.powf(1.5);
            let l_max = 4 * (d - 1) * (d - 1);
            worst_dev = worst_dev.max(dev);
            worst_ratio = worst_ratio.max(rec.l as f64 / l_max as f64);
            max_psi = max_psi.max(rec.psi);
            row.deviation = Some(dev);
            row.deviation_ok = Some(dev <= 30.0);
            row.l_max = Some(l_max);
            row.psi_ok = Some(rec.psi < 0.9);
        }
        env.row(row);
    }
    if any_prime {
        env.checks([
            Check::at_most("max |L - p²| / p^1.5", worst_dev, 30.0),
            Check::at_most("max L / 4(p - 1)²", worst_ratio, 1.0),
            Check::at_most("max Ψ(N, p)", max_psi, 0.9),
        ]);
    }
    Ok(env)
}

pub fn verify(args: &VerifyArgs, seed: u64) -> Result<ReportEnvelope> {
    let mut env = ReportEnvelope::new("verify");
    let name = format!("{:?}", args.suite).to_lowercase();
    env.param("suite", &name);
    match args.suite {
        Suite::Expsum => {
            env.checks(verify::gauss_suite(seed, 64, 10_000, 512));
            env.checks(verify::kloosterman_suite(seed, 2000, 100));
            env.checks(verify::vq_suite(seed, 500, 3000, 200, 200));
        }
        Suite::Local => {
            env.param("p_max", args.p_max).param("samples", args.samples);
            env.checks(verify::local_count_suite(seed, args.samples)?);
            env.checks(verify::psi_suite(seed, args.samples, args.p_max, 50)?);
            env.checks(verify::mertens_suite(seed, 5, &[(10, 1000), (100, 10_000)])?);
            env.checks(verify::singular_series_suite(seed, &[1, 3, 5, 15, 105], 5, 100_000)?);
        }
        Suite::Sieve => {
            env.param("z", 50.0).param("p0", 7.0).param("levels", [1e2, 1e4, 1e8]);
            env.checks(verify::sieve_suite(&[1e2, 1e4, 1e8], 50.0, 7.0)?);
        }
        Suite::Kappa => {
            let (summary, checks) = verify::kappa_suite();
            env.row(summary);
            env.checks(checks);
        }
        Suite::Jacobi => {
            env.param("n_max", args.n_max).param("samples", args.samples);
            env.checks(verify::jacobi_suite(seed, args.n_max, args.samples, 100_000)?);
        }
        Suite::Endtoend => {
            env.param("N", args.n).param("z_exp", args.z_exp).param("level_exp", args.level_exp);
            let configs = verify::end_to_end_configs(args.n, args.z_exp, args.level_exp);
            let (reports, checks) = verify::end_to_end_suite(args.n, &configs)?;
            for r in reports {
                env.row(r);
            }
            env.checks(checks);
        }
    }
    Ok(env)
}

pub fn report(args: &ReportArgs) -> Result<ReportEnvelope> {
    let mut env = ReportEnvelope::new("report");
    env.param("N", &args.n).param("d", &args.d);
    if let Some(dir) = &args.cache {
        env.param("cache", dir.display().to_string());
    }
    for &n in &args.n {
        let (set, hit) = match &args.cache {
            Some(dir) => RepresentationSet::cached(n, dir)?,
            None => (RepresentationSet::enumerate(n)?, false),
        };
        for &d in &args.d {
            let r = set.remainder(d)?;
            let mut row = serde_json::to_value(r).expect("report serializes");
            row["cache_hit"] = hit.into();
            env.row(row);
        }
    }
    Ok(env)
}
