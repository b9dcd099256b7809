use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use localfactors::character::{AdditiveCharacter, MultiplicativeCharacter};
use localfactors::langlands::{component_group, epsilon_tensor, ggp_dichotomy, z_phi, EntryJson, LParameter};
use localfactors::padic::{ExtKind, FieldConfig, QuadraticExtension};
use localfactors::params::{transfer_factor_twisted, transfer_factor_unitary, CClass, GammaClass, XiParameter};
use localfactors::report::{run_suite, RunConfig, Suite};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "localfactors", version, about = "Verify identities between p-adic local factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a JSON-lines report.
    Verify(VerifyArgs),
    /// The dichotomy for a pair of character-sum parameters.
    Ggp(GgpArgs),
    /// Operations on the parameter space.
    Param {
        #[command(subcommand)]
        command: ParamCommand,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// weil, epsilon, lemma_a, lemma_231, params, ggp or all.
    suite: String,
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated odd primes.
    #[arg(long)]
    p: Option<String>,
    /// Comma-separated extension kinds: unramified, ramified_p, ramified_up.
    #[arg(long)]
    ext: Option<String>,
    #[arg(long)]
    precision: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    threads: Option<String>,
    /// Record per-item wall-clock times (the report is then no longer reproducible).
    #[arg(long)]
    timing: bool,
    /// Report file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long, default_value = "unramified")]
    ext: String,
    #[arg(long, default_value_t = 20)]
    precision: u32,
}

#[derive(Args)]
struct GgpArgs {
    /// Parameter of even dimension: a JSON list of {character, multiplicity}, inline or a file.
    #[arg(long)]
    phi: String,
    /// Parameter of odd dimension, same format.
    #[arg(long)]
    phiprime: String,
    /// The sign mu(G): +1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    mug: String,
    #[command(flatten)]
    field: FieldArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransferKind {
    Unitary,
    Twisted,
}

#[derive(Subcommand)]
enum ParamCommand {
    /// Evaluate a transfer factor.
    EvalTransfer(TransferArgs),
}

#[derive(Args)]
struct TransferArgs {
    /// JSON list of components, inline or a file.
    #[arg(long)]
    xi_plus: String,
    #[arg(long)]
    xi_minus: String,
    /// Character of `E^x` in text form.
    #[arg(long)]
    mu_plus: String,
    #[arg(long)]
    mu_minus: String,
    #[arg(long, value_enum, default_value_t = TransferKind::Unitary)]
    kind: TransferKind,
    /// Comma-separated signs, one per dihedral component of xi+ then xi-. For the twisted
    /// factor a -1 twists the canonical gamma class by the non-norm.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// The scalar nu of the unitary factor, as an integer.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    nu: i64,
    #[command(flatten)]
    field: FieldArgs,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

fn failed(message: impl ToString) -> Failure {
    Failure { code: EXIT_FAIL, message: message.to_string() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Ggp(args) => ggp(args),
        Command::Param { command: ParamCommand::EvalTransfer(args) } => eval_transfer(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn verify(args: VerifyArgs) -> Result<u8, Failure> {
    let suite: Suite = args.suite.parse().map_err(usage)?;
    let mut config = match &args.config {
        Some(path) => RunConfig::from_file(path).map_err(usage)?,
        None => RunConfig::default(),
    };
    let overrides = [
        ("primes", &args.p),
        ("ext_kinds", &args.ext),
        ("precision", &args.precision),
        ("tolerance", &args.tolerance),
        ("seed", &args.seed),
        ("threads", &args.threads),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            config.set(key, v).map_err(usage)?;
        }
    }
    if args.timing {
        config.timing = true;
    }
    if let Some(out) = &args.out {
        config.out = Some(out.clone());
    }
    config.validate().map_err(usage)?;

    let report = run_suite(&config, suite).map_err(usage)?;
    let write = |w: &mut dyn Write| report.write_jsonl(w);
    let io_result = match &config.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            write(&mut w)?;
            w.flush()
        }),
        None => match write(&mut io::stdout().lock()) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            other => other,
        },
    };
    io_result.map_err(|e| usage(format!("cannot write report: {e}")))?;
    let s = &report.summary;
    eprintln!("{}: {} checks, {} passed, {} failed, {} errors", s.suite, s.total, s.passed, s.failed, s.errors);
    Ok(if report.all_passed() { 0 } else { EXIT_FAIL })
}

fn make_field(args: &FieldArgs) -> Result<Arc<QuadraticExtension>, Failure> {
    let ext: ExtKind = args.ext.parse().map_err(usage)?;
    Ok(QuadraticExtension::new(FieldConfig::new(args.p, args.precision, ext).map_err(usage)?))
}

/// Inline JSON when the argument starts with `[` or `{`, a file path otherwise.
fn read_json(arg: &str) -> Result<Value, Failure> {
    let text = if arg.trim_start().starts_with(['[', '{']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON: {e}")))
}

fn parse_mug(s: &str) -> Result<i8, Failure> {
    match s.trim() {
        "+1" | "1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        other => Err(usage(format!("--mug must be +1 or -1, got {other}"))),
    }
}

fn print_json(v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(failed)?;
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(failed(e)),
        _ => Ok(()),
    }
}

fn ggp(args: GgpArgs) -> Result<u8, Failure> {
    let field = make_field(&args.field)?;
    let psi = AdditiveCharacter::standard(field.clone());
    let mu_g = parse_mug(&args.mug)?;
    let entries = |arg: &str| -> Result<LParameter, Failure> {
        let items: Vec<EntryJson> = serde_json::from_value(read_json(arg)?).map_err(usage)?;
        LParameter::from_json(field.clone(), &items).map_err(usage)
    };
    let (phi, phi_prime) = (entries(&args.phi)?, entries(&args.phiprime)?);
    let outcome = ggp_dichotomy(&phi, &phi_prime, mu_g, &psi).map_err(|e| match e {
        localfactors::langlands::LanglandsError::ParityMismatch(_) | localfactors::langlands::LanglandsError::InvalidParameter(_) => usage(e),
        other => failed(other),
    })?;
    let eps = epsilon_tensor(&phi, &phi_prime, &psi).map_err(failed)?;
    print_json(&json!({
        "field": { "p": args.field.p, "ext": args.field.ext, "precision": args.field.precision },
        "s_phi": component_group(&phi),
        "s_phi_prime": component_group(&phi_prime),
        "z_phi": z_phi(&phi).bits,
        "z_phi_prime": z_phi(&phi_prime).bits,
        "epsilon": eps,
        "result": outcome,
    }))?;
    Ok(0)
}

fn eval_transfer(args: TransferArgs) -> Result<u8, Failure> {
    let field = make_field(&args.field)?;
    let xi_plus = XiParameter::from_json(field.clone(), &read_json(&args.xi_plus)?).map_err(usage)?;
    let xi_minus = XiParameter::from_json(field.clone(), &read_json(&args.xi_minus)?).map_err(usage)?;
    let mu_plus = MultiplicativeCharacter::parse(field.clone(), &args.mu_plus).map_err(usage)?;
    let mu_minus = MultiplicativeCharacter::parse(field.clone(), &args.mu_minus).map_err(usage)?;
    let n = xi_plus.dihedral_count() + xi_minus.dihedral_count();
    let signs: Vec<i8> = match &args.c {
        Some(text) => text
            .split(',')
            .map(|s| s.trim().parse::<i8>().map_err(|e| usage(format!("--c: {e}"))))
            .collect::<Result<_, _>>()?,
        None => vec![1; n],
    };
    if signs.len() != n {
        return Err(usage(format!("--c needs {n} signs, one per dihedral component")));
    }
    let c = CClass::new(signs).map_err(usage)?;
    let value = match args.kind {
        TransferKind::Unitary => {
            let nu = field.base().int(args.nu);
            transfer_factor_unitary(&xi_plus, &xi_minus, &c, &mu_plus, &mu_minus, nu).map_err(usage)?
        }
        TransferKind::Twisted => {
            let union = xi_plus.disjoint_union(&xi_minus).map_err(usage)?;
            let mut gamma = GammaClass::canonical(&union).map_err(usage)?;
            for (i, &s) in c.signs.iter().enumerate() {
                if s == -1 {
                    gamma = gamma.twisted(i, field.non_norm());
                }
            }
            transfer_factor_twisted(&xi_plus, &xi_minus, &gamma, &mu_plus, &mu_minus).map_err(usage)?
        }
    };
    let z = value.value();
    print_json(&json!({
        "kind": match args.kind { TransferKind::Unitary => "unitary", TransferKind::Twisted => "twisted" },
        "d_plus": xi_plus.degree(),
        "d_minus": xi_minus.degree(),
        "c": c.signs,
        "phase": value.exact().map(|p| p.to_string()),
        "value": [z.re, z.im],
    }))?;
    Ok(0)
}
