use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod envelope;

use envelope::ReportEnvelope;

/// Numerical checks for four-square representations with an almost-prime
/// product: exponential sums, local densities, the main term and the sieve.
#[derive(Parser, Debug)]
#[command(name = "lagrange", version)]
struct Cli {
    /// Seed for every randomized parameter choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; CSV projects the result rows only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the JSON envelope to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one exponential sum against its closed form and bound.
    #[command(subcommand)]
    Expsum(ExpsumCommand),
    /// Local solution counts L(N, d), α(N, d) and Ψ(N, d).
    Density(DensityArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Compare F(N, d) with the main term.
    Report(ReportArgs),
}

#[derive(Subcommand, Debug)]
pub enum ExpsumCommand {
    /// G(q; m, n) = Σ e((m x² + n x)/q).
    Gauss {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// K(q; m, n) = Σ* e((m x + n x̄)/q).
    Kloosterman {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// c_q(m) = K(q; m, 0).
    Ramanujan {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Σ_x (f(x)/p) for a polynomial f, coefficients lowest degree first.
    Charsum {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coeffs: Vec<i64>,
    },
    /// V_q(N, d, v, b, n).
    Vq {
        #[arg(long)]
        q: u64,
        #[arg(long = "N")]
        target: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        v: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0,0,0")]
        b: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0,0,0")]
        n: Vec<i64>,
    },
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[arg(long = "N")]
    pub n: u64,
    /// Odd squarefree moduli.
    #[arg(long, value_delimiter = ',', conflicts_with = "p_max")]
    pub d: Vec<u64>,
    /// Tabulate every odd prime up to this bound.
    #[arg(long)]
    pub p_max: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Expsum,
    Local,
    Sieve,
    Kappa,
    Jacobi,
    Endtoend,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// jacobi: check every odd N up to this bound.
    #[arg(long, default_value_t = 10_000)]
    pub n_max: u64,
    /// endtoend: the odd target.
    #[arg(long = "N", default_value_t = 1_000_003)]
    pub n: u64,
    /// endtoend: z = N^z_exp.
    #[arg(long, default_value_t = 0.05)]
    pub z_exp: f64,
    /// endtoend: D = N^level_exp.
    #[arg(long, default_value_t = 0.08)]
    pub level_exp: f64,
    /// local: largest prime in the density checks.
    #[arg(long, default_value_t = 5000)]
    pub p_max: u64,
    /// Number of random targets in the randomized suites.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub d: Vec<u64>,
    /// Representation cache; defaults to $LGR_CACHE_DIR when set.
    #[arg(long, env = "LGR_CACHE_DIR")]
    pub cache: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Expsum(c) => commands::expsum(c),
        Command::Density(a) => commands::density(a),
        Command::Verify(a) => commands::verify(a, cli.seed),
        Command::Report(a) => commands::report(a),
    };
    let mut env = match outcome {
        Ok(env) => env,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    env.param("seed", cli.seed);
    if let Err(e) = emit(&env, &cli) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(status(&env))
}

/// 0 when every check passes, 1 otherwise.
fn status(env: &ReportEnvelope) -> u8 {
    u8::from(!env.all_pass())
}

fn emit(env: &ReportEnvelope, cli: &Cli) -> io::Result<()> {
    if let Some(path) = &cli.out {
        fs::write(path, env.to_json())?;
    }
    let mut stdout = io::stdout().lock();
    let written = match cli.format {
        Format::Json => writeln!(stdout, "{}", env.to_json()),
        Format::Csv => env.write_csv(&mut stdout).map_err(io::Error::other),
    };
    match written {
        // a closed pipe (`| head`) is not an error
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lagrange_core::verify::Check;

    #[test]
    fn any_failed_check_is_status_one() {
        let mut env = ReportEnvelope::new("t");
        assert_eq!(status(&env), 0);
        env.checks([Check::at_most("a", 1.0, 2.0)]);
        assert_eq!(status(&env), 0);
        env.checks([Check::at_most("b", 3.0, 2.0)]);
        assert_eq!(status(&env), 1);
    }

    #[test]
    fn envelope_json_round_trips() {
        let mut env = ReportEnvelope::new("t");
        env.param("N", 7u64);
        env.row(serde_json::json!({"x": 1.5, "z": {"re": 1.0, "im": -0.0}}));
        env.checks([Check::above("c", 1.0, 0.0)]);
        let back: ReportEnvelope = serde_json::from_str(&env.to_json()).unwrap();
        assert_eq!(back, env);
    }

    #[test]
    fn csv_flattens_nested_values() {
        let mut env = ReportEnvelope::new("t");
        env.row(serde_json::json!({"q": 5, "value": {"re": 0.5, "im": 0.0}}));
        env.row(serde_json::json!({"q": 7, "extra": [1, 2]}));
        let mut buf = Vec::new();
        env.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "q,value.re,value.im,extra\n5,0.5,0.0,\n7,,,\"[1,2]\"\n");
    }
}
