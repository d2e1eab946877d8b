//! Command-line front end for the `whitvec` library.

mod config;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use whitvec::arith::serial::cyc_to_json;
use whitvec::lmodular::verify_corollary;
use whitvec::rankin::{
    oracle_check, pair_evaluators, verify_main_theorem, EngineConfig, VerifyConfig,
};
use whitvec::types::make_type;
use whitvec::{Error, Result};

use config::{Command, Format, RunConfig};

const SCALARS: &str = "\
Cyclotomic scalars (--A, --A2, --twist) are written as expressions:
  expr   := ['+'|'-'] term (('+'|'-') term)*
  term   := factor ('*' factor)*
  factor := atom ['^' ['-'] int]
  atom   := int ['/' int] | 'zeta(' int ')' | 'i' | '(' expr ')'
e.g. 1, -1, zeta(4), zeta(8)^3 * 2/3.

Exit status: 0 pass, 1 verification failure, 2 configuration error,
3 hypothesis refused (non-banal ell).";

#[derive(Parser, Debug)]
#[command(name = "whitvec", version, about = "Explicit Whittaker test vectors and Rankin-Selberg integrals", after_help = SCALARS)]
struct Cli {
    /// Command to run.
    #[arg(value_enum)]
    command: Option<Command>,
    /// Read the run configuration from a JSON file; only the command and
    /// --out may be overridden.
    #[arg(long)]
    config: Option<String>,
    /// Print the run configuration as JSON and exit.
    #[arg(long)]
    emit_config: bool,
    /// depth-zero or ramified.
    #[arg(long, default_value = "depth-zero")]
    family: String,
    /// Residue field size (a prime).
    #[arg(long, visible_alias = "p", default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Depth zero: Theta = zeta_{q^2-1}^theta on the chosen generator.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<i64>,
    /// Ramified: sigma = zeta_{p-1}^sigma on the chosen generator.
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<i64>,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    beta_sign: i64,
    /// Value of the type on varpi_E.
    #[arg(long = "A", default_value = "1")]
    a: String,
    /// Second type; defaults to the dual of the first.
    #[arg(long, allow_negative_numbers = true)]
    theta2: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma2: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    beta_sign2: Option<i64>,
    #[arg(long = "A2", default_value = "1")]
    a2: String,
    /// Unramified twist of the second function: c^{v(det g)}.
    #[arg(long)]
    twist: Option<String>,
    #[arg(long)]
    ell: Option<u64>,
    /// Index of the prime above ell (factor of the cyclotomic polynomial mod ell).
    #[arg(long, default_value_t = 0)]
    ideal: usize,
    /// Torus slices |l| <= e * window.
    #[arg(long, default_value_t = 2)]
    window: u32,
    /// Compare with the brute-force oracle for k in [KMIN, KMAX].
    #[arg(long, num_args = 2, value_names = ["KMIN", "KMAX"], allow_negative_numbers = true)]
    oracle: Option<Vec<i64>>,
    /// Random pairs for the Bessel convolution identity.
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl Cli {
    fn into_config(self) -> Result<RunConfig> {
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidParameter(format!("{path}: {e}")))?;
            let mut c = RunConfig::from_json(&text)?;
            if let Some(cmd) = self.command {
                c.command = cmd;
            }
            if self.out.is_some() {
                c.out = self.out;
            }
            return Ok(c);
        }
        let command = self
            .command
            .ok_or_else(|| Error::InvalidParameter("a command is required".into()))?;
        Ok(RunConfig {
            command,
            family: self.family,
            q: self.q,
            n: self.n,
            theta: self.theta,
            sigma: self.sigma,
            beta_sign: self.beta_sign,
            a: self.a,
            theta2: self.theta2,
            sigma2: self.sigma2,
            beta_sign2: self.beta_sign2,
            a2: self.a2,
            twist: self.twist,
            ell: self.ell,
            ideal: self.ideal,
            window: self.window,
            oracle: self.oracle.map(|v| (v[0], v[1])),
            pairs: self.pairs,
            seed: self.seed,
            jobs: self.jobs,
            out: self.out,
            format: self.format,
        })
    }
}

/// A rendered report and whether the run passed.
struct Outcome {
    body: String,
    passed: bool,
    summary: String,
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn bessel_table(c: &RunConfig) -> Result<Outcome> {
    let ty = make_type(&c.first()?)?;
    let sign = ty.beta_sign();
    let table = ty.bessel_table(sign)?;
    let suite = ty.bessel_suite(c.pairs, c.seed)?;
    let entries = |m: &whitvec::padic::PadicMatrix| -> Vec<String> {
        m.entries().iter().map(|x| x.to_string()).collect()
    };
    let body = match c.format {
        Format::Json => pretty(&json!({
            "type": ty.to_json(),
            "sign": sign,
            "rows": table.iter().map(|(j, v)| json!({
                "j": entries(j),
                "value": v.to_string(),
                "exact": cyc_to_json(v),
            })).collect::<Vec<_>>(),
            "checks": suite,
        })),
        Format::Csv => {
            let mut s = String::from("j11,j12,j21,j22,value\n");
            for (j, v) in &table {
                s.push_str(&format!("{},\"{}\"\n", entries(j).join(","), v));
            }
            s.push_str(&format!(
                "# identity={} duality={} convolution={} elements={} pairs={}\n",
                suite.identity, suite.duality, suite.convolution, suite.elements, suite.pairs
            ));
            s
        }
    };
    Ok(Outcome {
        body,
        passed: suite.passed(),
        summary: format!(
            "{} rows, checks {}",
            table.len(),
            if suite.passed() { "pass" } else { "FAIL" }
        ),
    })
}

fn verify(c: &RunConfig) -> Result<Outcome> {
    let t1 = make_type(&c.first()?)?;
    let t2 = make_type(&c.second()?)?;
    let cfg = VerifyConfig {
        engine: EngineConfig { window: c.window },
        twist: c.twist()?,
        oracle: c.oracle,
        bessel_pairs: c.pairs,
    };
    let r = verify_main_theorem(&t1, &t2, &cfg)?;
    let summary = format!(
        "I = {}; L = {}; mu = {}; {}{}",
        r.integral_text,
        r.expected_factor,
        r.mu.as_deref().unwrap_or("-"),
        if r.passed { "pass" } else { "FAIL" },
        r.notes
            .iter()
            .map(|n| format!("\n  {n}"))
            .collect::<String>(),
    );
    let body = match c.format {
        Format::Json => pretty(&r),
        Format::Csv => r.coefficient_csv(),
    };
    Ok(Outcome {
        body,
        passed: r.passed,
        summary,
    })
}

fn reduce(c: &RunConfig) -> Result<Outcome> {
    let ell = c
        .ell
        .ok_or_else(|| Error::InvalidParameter("--ell is required".into()))?;
    let t1 = make_type(&c.first()?)?;
    let t2 = make_type(&c.second()?)?;
    let engine = EngineConfig { window: c.window };
    let r = verify_corollary(&t1, &t2, ell, c.ideal, c.twist()?.as_ref(), &engine)?;
    let body = match c.format {
        Format::Json => pretty(&r),
        Format::Csv => format!(
            "ell,banal,witness,reduced_factor,match\n{},{},{},\"{}\",{}\n",
            r.ell, r.banal, r.witness, r.reduced_factor, r.matches
        ),
    };
    Ok(Outcome {
        body,
        passed: r.matches,
        summary: format!(
            "reduced factor {}; {}",
            r.reduced_factor,
            if r.matches { "match" } else { "MISMATCH" }
        ),
    })
}

fn oracle(c: &RunConfig) -> Result<Outcome> {
    let t1 = make_type(&c.first()?)?;
    let t2 = make_type(&c.second()?)?;
    let twist = c.twist()?;
    let (w1, w2) = pair_evaluators(&t1, &t2, twist.as_ref())?;
    let (lo, hi) = c.oracle.unwrap_or((0, 6));
    let r = oracle_check(&w1, &w2, &EngineConfig { window: c.window }, lo, hi)?;
    let body = match c.format {
        Format::Json => pretty(&r),
        Format::Csv => {
            let mut s = String::from("k,engine,oracle,measure_factor,agree\n");
            for row in &r.rows {
                s.push_str(&format!(
                    "{},\"{}\",\"{}\",{},{}\n",
                    row.k, row.engine, row.oracle, r.measure_factor, row.agree
                ));
            }
            s
        }
    };
    Ok(Outcome {
        body,
        passed: r.all_agree,
        summary: format!(
            "{} coefficients, {}",
            r.rows.len(),
            if r.all_agree { "all agree" } else { "MISMATCH" }
        ),
    })
}

fn variant_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("")
        .to_string()
}

fn run(c: &RunConfig) -> Result<Outcome> {
    if let Some(j) = c.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    match c.command {
        Command::BesselTable => bessel_table(c),
        Command::Verify => verify(c),
        Command::Reduce => reduce(c),
        Command::OracleCheck => oracle(c),
    }
}

fn emit(c: &RunConfig, body: &str) -> std::io::Result<()> {
    match &c.out {
        Some(path) => fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emit_config = cli.emit_config;
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", variant_name(&e));
            return ExitCode::from(2);
        }
    };
    if emit_config {
        println!("{}", config.to_json());
        return ExitCode::SUCCESS;
    }
    match run(&config) {
        Ok(o) => {
            if let Err(e) = emit(&config, &o.body) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            eprintln!("{}", o.summary);
            ExitCode::from(if o.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {}: {e}", variant_name(&e));
            ExitCode::from(match e {
                Error::NonBanal { .. } => 3,
                _ => 2,
            })
        }
    }
}
