//! Command-line surface for the exact integrable-systems engine.
//!
//! One binary, a subcommand tree mirroring the library modules, JSON in and
//! JSON (or text) out. Exit status: 0 on success or verification pass, 1 on
//! a verification/computation failure, 2 on usage errors including malformed
//! JSON.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use satokp::grassmann::{
    from_dressing, kp_tangent, quotient_equal, to_dressing, GrassmannPoint,
};
use satokp::kp::{
    dress, evolve, kp_vector_field, sp_check, sp_evolve, DressingOperator, FlowTimes,
    TDeformation,
};
use satokp::pdo::{pairing, MatrixPdo};
use satokp::series::{format_rational, parse_rational, VectorLaurent};
use satokp::spectral::{
    hensel_split, hensel_split_adjoined, hitchin_map, numerology, ramification_resultant,
    serre_dual_point, sp_membership, weighted_scale, HiggsMatrix, HitchinPoint, LaurentPoly,
};
use satokp::verify::{run_suite_with, SuiteParams, SUITES};
use satokp::Error;

#[derive(Parser)]
#[command(name = "satokp", version, about = "Exact pseudo-differential operator calculus, finite-window Grassmannian, KP flows, and spectral-curve algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Io {
    /// Input file with a JSON payload (default: stdin)
    #[arg(long = "in", value_name = "FILE")]
    input: Option<String>,
    /// Output file (default: stdout)
    #[arg(long = "out", value_name = "FILE")]
    output: Option<String>,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Matrix pseudo-differential operator calculus
    Pdo {
        #[command(subcommand)]
        op: PdoCmd,
    },
    /// Finite-window Grassmannian points
    Gr {
        #[command(subcommand)]
        op: GrCmd,
    },
    /// Dressing, Lax operators, and KP flows
    Kp {
        #[command(subcommand)]
        op: KpCmd,
    },
    /// Spectral-curve coefficient algebra
    Spec {
        #[command(subcommand)]
        op: SpecCmd,
    },
    /// Run a named property suite and print pass/fail per property
    Verify {
        /// Suite name (see `verify list`)
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fix the matrix size for size-parameterized suites
        #[arg(long)]
        n: Option<usize>,
        /// Fix the window depth M for size-parameterized suites
        #[arg(long = "M")]
        m_depth: Option<i64>,
        /// Fix the window height N for size-parameterized suites
        #[arg(long = "N")]
        n_height: Option<i64>,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum PdoCmd {
    /// Compose two operators; input {"p": pdo, "q": pdo}
    Mul(Io),
    /// Formal adjoint; input: pdo
    Adjoint(Io),
    /// Reduce mod x·(operators): the boundary symbol; input: pdo
    Rho(Io),
    /// Apply an operator to a vector of Laurent series; input {"p": pdo, "f": vector}
    Act(Io),
    /// Residue pairing; input {"f": vector, "g": vector}
    Pair(Io),
}

#[derive(Subcommand)]
enum GrCmd {
    /// Canonicalize a point from generators; input: point JSON
    Make(Io),
    /// Kernel/cokernel bases and index of the standard projection; input: point
    Fredholm(Io),
    /// Residue-pairing orthogonal complement with swapped windows; input: point
    Perp(Io),
    /// Point spanned by a monic order-0 operator acting on the standard basis; input: pdo
    FromS {
        #[arg(long = "M", default_value_t = 3)]
        m_depth: i64,
        #[arg(long = "N", default_value_t = 5)]
        n_height: i64,
        #[command(flatten)]
        io: Io,
    },
    /// Recover the monic operator from a big-cell point; input: point
    ToS {
        #[arg(long = "order-lo", default_value_t = -4, allow_hyphen_values = true)]
        order_lo: i64,
        #[arg(long = "x-cap", default_value_t = 2)]
        x_cap: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Equality modulo the diagonal series group; input {"w1": point, "w2": point}
    Qeq {
        /// Expansion cap for the group element search
        #[arg(long = "gamma-cap", default_value_t = 8)]
        gamma_cap: i64,
        #[command(flatten)]
        io: Io,
    },
    /// Tangent direction of a one-parameter multiplication flow; input {"a": vector, "w": point}
    Tangent(Io),
}

#[derive(Subcommand)]
enum KpCmd {
    /// Lax operator S·(I∂)·S⁻¹; input: monic pdo S
    Dress {
        #[arg(long = "order-lo", default_value_t = -4, allow_hyphen_values = true)]
        order_lo: i64,
        #[command(flatten)]
        io: Io,
    },
    /// First-order flow vector field; input: monic pdo S
    Vf {
        /// Component index (1-based)
        #[arg(long, default_value_t = 1)]
        comp: usize,
        /// ∂-power of the flow generator
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long = "order-lo", default_value_t = -4, allow_hyphen_values = true)]
        order_lo: i64,
        #[command(flatten)]
        io: Io,
    },
    /// Taylor expansion of the evolved dressing operator in the flow times;
    /// input {"s": pdo, "t": flow-times}
    Evolve {
        #[arg(long = "order-lo", default_value_t = -4, allow_hyphen_values = true)]
        order_lo: i64,
        #[command(flatten)]
        io: Io,
    },
    /// Certify the twisted self-adjointness locus; input: monic pdo S
    SpCheck {
        /// Half the matrix size (n = 2m)
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long = "order-lo", default_value_t = -4, allow_hyphen_values = true)]
        order_lo: i64,
        #[command(flatten)]
        io: Io,
    },
    /// Evolve on the locus with mirror-paired times; input {"s": pdo, "t": flow-times}
    SpEvolve {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long = "order-lo", default_value_t = -4, allow_hyphen_values = true)]
        order_lo: i64,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum SpecCmd {
    /// Characteristic coefficients of a Higgs matrix; input: higgs
    Hitchin(Io),
    /// Weighted scaling λ·s_i ↦ λ^i·s_i; input: point
    Scale {
        /// Scaling factor as a rational p/q
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[command(flatten)]
        io: Io,
    },
    /// Serre-dual point (-1)^i·s_i; input: point
    Dual(Io),
    /// Membership in the symplectic locus (odd coefficients vanish); input: point
    Sp(Io),
    /// Resultant of the characteristic polynomial with its x-derivative; input: point
    Resultant(Io),
    /// Split the characteristic polynomial into branches over the formal disc; input: point
    Hensel {
        /// Branch precision in powers of the local parameter
        #[arg(long, default_value_t = 10)]
        prec: i64,
        /// For n = 2: adjoin one square root instead of requiring rational branches
        #[arg(long = "adjoin-sqrt", default_value_t = false)]
        adjoin_sqrt: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Dimension/degree/genus formulas for the moduli data
    Numerology {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        g: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        d: i64,
        /// Also report the symplectic-reduction values for n = 2m
        #[arg(long)]
        m: Option<i64>,
        #[command(flatten)]
        io: Io,
    },
}

/// App-level failure with the exit status it maps to.
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BadInput(_) | Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

type AppResult<T> = std::result::Result<T, Failure>;

fn read_input(io: &Io) -> AppResult<Value> {
    let raw = match &io.input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    serde_json::from_str(&raw).map_err(|e| Failure::Usage(format!("malformed JSON: {e}")))
}

fn field<'v>(v: &'v Value, key: &str) -> AppResult<&'v Value> {
    v.get(key).ok_or_else(|| Failure::Usage(format!("missing field '{key}'")))
}

fn emit(io: &Io, json: Value, text: String) -> AppResult<()> {
    let body = match io.format {
        Format::Json => json.to_string(),
        Format::Text => text,
    };
    match &io.output {
        Some(path) => fs::write(path, body + "\n")
            .map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))?,
        None => println!("{body}"),
    }
    Ok(())
}

fn emit_json(io: &Io, json: Value) -> AppResult<()> {
    let text = serde_json::to_string_pretty(&json).expect("serializable");
    emit(io, json, text)
}

fn tdef_pair_json(s: &TDeformation, y: &TDeformation) -> Value {
    json!({ "s": s.to_json(), "y": y.to_json() })
}

fn run(cli: Cli) -> AppResult<()> {
    match cli.command {
        Command::Pdo { op } => match op {
            PdoCmd::Mul(io) => {
                let v = read_input(&io)?;
                let p = MatrixPdo::from_json(field(&v, "p")?)?;
                let q = MatrixPdo::from_json(field(&v, "q")?)?;
                let r = p.compose(&q)?;
                emit(&io, r.to_json(), r.to_string())
            }
            PdoCmd::Adjoint(io) => {
                let v = read_input(&io)?;
                let p = MatrixPdo::from_json(&v)?;
                let r = p.adjoint();
                emit(&io, r.to_json(), r.to_string())
            }
            PdoCmd::Rho(io) => {
                let v = read_input(&io)?;
                let p = MatrixPdo::from_json(&v)?;
                let sym = p.rho();
                let entries: Vec<Value> = sym
                    .entries
                    .iter()
                    .map(|row| Value::Array(row.iter().map(|s| s.to_json()).collect()))
                    .collect();
                let text = sym
                    .entries
                    .iter()
                    .map(|row| {
                        row.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                    })
                    .collect::<Vec<_>>()
                    .join("\n");
                emit(&io, json!({ "n": sym.n, "entries": entries }), text)
            }
            PdoCmd::Act(io) => {
                let v = read_input(&io)?;
                let p = MatrixPdo::from_json(field(&v, "p")?)?;
                let f = VectorLaurent::from_json(field(&v, "f")?)?;
                let r = p.act(&f)?;
                let text = serde_json::to_string_pretty(&r.to_json()).expect("serializable");
                emit(&io, r.to_json(), text)
            }
            PdoCmd::Pair(io) => {
                let v = read_input(&io)?;
                let f = VectorLaurent::from_json(field(&v, "f")?)?;
                let g = VectorLaurent::from_json(field(&v, "g")?)?;
                let r = pairing(&f, &g)?;
                emit(&io, json!({ "value": format_rational(&r) }), format_rational(&r))
            }
        },
        Command::Gr { op } => match op {
            GrCmd::Make(io) => {
                let v = read_input(&io)?;
                let w = GrassmannPoint::from_json(&v)?;
                emit_json(&io, w.to_json())
            }
            GrCmd::Fredholm(io) => {
                let v = read_input(&io)?;
                let w = GrassmannPoint::from_json(&v)?;
                let fd = w.fredholm_data();
                let out = json!({
                    "kernel": fd.kernel_basis.iter().map(VectorLaurent::to_json).collect::<Vec<_>>(),
                    "cokernel": fd.cokernel_basis.iter().map(VectorLaurent::to_json).collect::<Vec<_>>(),
                    "index": fd.index,
                });
                let text = format!(
                    "dim ker = {}, dim coker = {}, index = {}",
                    fd.kernel_basis.len(),
                    fd.cokernel_basis.len(),
                    fd.index
                );
                emit(&io, out, text)
            }
            GrCmd::Perp(io) => {
                let v = read_input(&io)?;
                let w = GrassmannPoint::from_json(&v)?;
                emit_json(&io, w.perp()?.to_json())
            }
            GrCmd::FromS { m_depth, n_height, io } => {
                let v = read_input(&io)?;
                let s = MatrixPdo::from_json(&v)?;
                emit_json(&io, from_dressing(&s, m_depth, n_height)?.to_json())
            }
            GrCmd::ToS { order_lo, x_cap, io } => {
                let v = read_input(&io)?;
                let w = GrassmannPoint::from_json(&v)?;
                let s = to_dressing(&w, order_lo, x_cap)?;
                emit(&io, s.to_json(), s.to_string())
            }
            GrCmd::Qeq { gamma_cap, io } => {
                let v = read_input(&io)?;
                let w1 = GrassmannPoint::from_json(field(&v, "w1")?)?;
                let w2 = GrassmannPoint::from_json(field(&v, "w2")?)?;
                let gamma = quotient_equal(&w1, &w2, gamma_cap)?;
                let out = json!({
                    "equal": gamma.is_some(),
                    "gamma": gamma.as_ref().map(|g| g.to_json()).unwrap_or(Value::Null),
                });
                let text = match &gamma {
                    Some(g) if g.is_identity() => "equal (identity)".to_string(),
                    Some(_) => "equal up to a diagonal series factor".to_string(),
                    None => "not equal in the quotient".to_string(),
                };
                emit(&io, out, text)
            }
            GrCmd::Tangent(io) => {
                let v = read_input(&io)?;
                let a = VectorLaurent::from_json(field(&v, "a")?)?;
                let w = GrassmannPoint::from_json(field(&v, "w")?)?;
                let t = kp_tangent(&a, &w)?;
                let out = json!({
                    "tangent": t.iter().map(VectorLaurent::to_json).collect::<Vec<_>>(),
                });
                emit_json(&io, out)
            }
        },
        Command::Kp { op } => match op {
            KpCmd::Dress { order_lo, io } => {
                let v = read_input(&io)?;
                let s = DressingOperator::new(MatrixPdo::from_json(&v)?)?;
                let l = dress(&s, order_lo)?;
                emit(&io, l.pdo().to_json(), l.pdo().to_string())
            }
            KpCmd::Vf { comp, power, order_lo, io } => {
                if comp == 0 {
                    return Err(Failure::Usage("--comp is 1-based".into()));
                }
                let v = read_input(&io)?;
                let s = DressingOperator::new(MatrixPdo::from_json(&v)?)?;
                let f = kp_vector_field(&s, comp - 1, power, order_lo)?;
                emit(&io, f.to_json(), f.to_string())
            }
            KpCmd::Evolve { order_lo, io } => {
                let v = read_input(&io)?;
                let s = DressingOperator::new(MatrixPdo::from_json(field(&v, "s")?)?)?;
                let t = FlowTimes::from_json(field(&v, "t")?)?;
                let (s_def, y_def) = evolve(&s, &t, order_lo)?;
                emit_json(&io, tdef_pair_json(&s_def, &y_def))
            }
            KpCmd::SpCheck { m, order_lo, io } => {
                let v = read_input(&io)?;
                let s = DressingOperator::new(MatrixPdo::from_json(&v)?)?;
                let cert = sp_check(&s, m, order_lo)?;
                let out = json!({
                    "holds": cert.holds,
                    "lax_holds": cert.lax_holds,
                    "blocks": cert.blocks,
                    "residual": cert.residual.to_json(),
                });
                let text = format!(
                    "locus: {}, lax: {}, blocks: {:?}",
                    cert.holds, cert.lax_holds, cert.blocks
                );
                emit(&io, out, text)
            }
            KpCmd::SpEvolve { m, order_lo, io } => {
                let v = read_input(&io)?;
                let s = DressingOperator::new(MatrixPdo::from_json(field(&v, "s")?)?)?;
                let t = FlowTimes::from_json(field(&v, "t")?)?;
                let (s_def, y_def) = sp_evolve(&s, &t, m, order_lo)?;
                emit_json(&io, tdef_pair_json(&s_def, &y_def))
            }
        },
        Command::Spec { op } => match op {
            SpecCmd::Hitchin(io) => {
                let v = read_input(&io)?;
                let phi = HiggsMatrix::from_json(&v)?;
                emit_json(&io, hitchin_map(&phi).to_json())
            }
            SpecCmd::Scale { lambda, io } => {
                let v = read_input(&io)?;
                let s = HitchinPoint::from_json(&v)?;
                let lam = parse_rational(&lambda)?;
                emit_json(&io, weighted_scale(&lam, &s).to_json())
            }
            SpecCmd::Dual(io) => {
                let v = read_input(&io)?;
                let s = HitchinPoint::from_json(&v)?;
                emit_json(&io, serre_dual_point(&s).to_json())
            }
            SpecCmd::Sp(io) => {
                let v = read_input(&io)?;
                let s = HitchinPoint::from_json(&v)?;
                let member = sp_membership(&s)?;
                emit(&io, json!({ "sp_membership": member }), member.to_string())
            }
            SpecCmd::Resultant(io) => {
                let v = read_input(&io)?;
                let s = HitchinPoint::from_json(&v)?;
                let r = ramification_resultant(&s);
                emit(&io, r.to_json(), r.to_string())
            }
            SpecCmd::Hensel { prec, adjoin_sqrt, io } => {
                let v = read_input(&io)?;
                let s = HitchinPoint::from_json(&v)?;
                if adjoin_sqrt {
                    let (mid, radical, d) = hensel_split_adjoined(&s, prec)?;
                    let out = json!({
                        "mid": mid.to_json(),
                        "radical": radical.to_json(),
                        "d": format_rational(&d),
                    });
                    let text = format!(
                        "x = ({}) ± sqrt({}) · ({})",
                        mid,
                        format_rational(&d),
                        radical
                    );
                    emit(&io, out, text)
                } else {
                    let branches = hensel_split(&s, prec)?;
                    let out = json!({
                        "branches": branches.iter().map(LaurentPoly::to_json).collect::<Vec<_>>(),
                    });
                    let text = branches
                        .iter()
                        .map(|b| format!("x = {b}"))
                        .collect::<Vec<_>>()
                        .join("\n");
                    emit(&io, out, text)
                }
            }
            SpecCmd::Numerology { n, g, d, m, io } => {
                let r = numerology(n, g, d, m)?;
                let out = r.to_json();
                let text = out
                    .as_object()
                    .expect("flat record")
                    .iter()
                    .map(|(k, v)| format!("{k:<22} {v}"))
                    .collect::<Vec<_>>()
                    .join("\n");
                emit(&io, out, text)
            }
        },
        Command::Verify { suite, seed, n, m_depth, n_height, io } => {
            if suite == "list" {
                let out = json!({ "suites": SUITES });
                return emit(&io, out, SUITES.join("\n"));
            }
            let params = SuiteParams { n, m_depth, n_height };
            let report = run_suite_with(&suite, seed, params)?;
            let out = json!({
                "suite": report.name,
                "criterion": report.criterion,
                "cases": report.cases,
                "failures": report.failures,
                "passed": report.passed(),
            });
            emit(&io, out, report.summary())?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Run(format!("suite '{suite}' failed")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
