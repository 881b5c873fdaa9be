//! Command-line front end: normal forms, products, differentials, basis
//! enumeration, graded dimensions, homology, contraction search,
//! divided-power idempotents, decomposition certificates and a batch
//! verification battery.
//!
//! Exit codes: 0 on success, 1 on a failed verification, 2 on usage,
//! parse or domain errors.

mod parser;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use strandalg::diagram::{enumerate_basis, graded_dim, Element, Seq};
use strandalg::dg::{self, Contraction};
use strandalg::k0::{self, DividedSeq};
use strandalg::perm::Perm;
use strandalg::pol::{self, MPoly, MixedRule, PolVector};
use strandalg::rewrite::{multiply, normal_form};

#[derive(Parser)]
#[command(
    name = "strandalg",
    about = "Exact computations in bigraded dg rings of dotted strand diagrams",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CoeffRing {
    Integers,
    Prime(u64),
}

impl std::str::FromStr for CoeffRing {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "zz" {
            return Ok(CoeffRing::Integers);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|e| format!("{e}"))?;
            let is_prime = p >= 2 && !(2..).take_while(|d| d * d <= p).any(|d| p % d == 0);
            if !is_prime {
                return Err(format!("{p} is not a prime"));
            }
            return Ok(CoeffRing::Prime(p));
        }
        Err("expected 'zz' or 'fp:<p>'".to_string())
    }
}

#[derive(Args)]
struct OutputOpts {
    /// Emit machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Coefficient ring: zz (default) or fp:<p>.
    #[arg(long, default_value = "zz")]
    coeff: CoeffRing,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of an expression ("-" reads it from stdin).
    Nf {
        expr: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Product of two expressions (first factor on top).
    Mul {
        top: String,
        bottom: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Differential of an expression.
    Diff {
        expr: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Basis diagrams of a (source, target) block up to a q-degree cutoff.
    Basis {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 8)]
        qmax: i64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Graded dimension of a block.
    Gdim {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 8)]
        qmax: i64,
        /// Restrict to one cohomological degree.
        #[arg(long)]
        coh: Option<i64>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Homology dimensions of a block, per (qdeg, cohdeg).
    Homology {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// Single q-degree; when absent, scans |qdeg| <= qmax.
        #[arg(long)]
        qdeg: Option<i64>,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Search for y with d(y) equal to an idempotent.
    Contract {
        /// Idempotent 1_i of this sequence; alternatively use --unit.
        #[arg(long, conflicts_with = "unit")]
        seq: Option<String>,
        /// Contract the unit of R(n, m).
        #[arg(long, requires = "n", requires = "m")]
        unit: bool,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// The divided-power idempotent of the purely bosonic ring.
    Em {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Solve (or re-check) a projective decomposition certificate.
    Decompose {
        /// Source divided sequence, e.g. "212" or "2^(2) 1 2".
        #[arg(long, required_unless_present = "check")]
        source: Option<String>,
        /// Target divided sequences.
        #[arg(long, num_args = 1..)]
        targets: Vec<String>,
        /// Re-verify a stored certificate file instead of solving.
        #[arg(long)]
        check: Option<std::path::PathBuf>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run the verification battery with size caps.
    Verify {
        /// Largest fermionic count exercised.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Largest bosonic count exercised.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// q-degree cutoff.
        #[arg(long, default_value_t = 8)]
        qmax: i64,
        /// Polynomial-degree cutoff for the representation checks.
        #[arg(long, default_value_t = 6)]
        degmax: u32,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Act with an expression on the polynomial representation.
    Pol {
        expr: String,
        /// Fermionic block permutation, one-line 1-based, e.g. "2,1".
        #[arg(long)]
        w: Option<String>,
        /// Block monomial exponents, e.g. "1,0,2". Defaults to 1.
        #[arg(long)]
        monomial: Option<String>,
        #[command(flatten)]
        out: OutputOpts,
    },
}

fn main() -> ExitCode {
    // die quietly when the downstream pipe closes (e.g. piping into head)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(AppError::Parse(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(AppError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(AppError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(2)
        }
    }
}

enum AppError {
    Parse(String),
    Domain(strandalg::Error),
    Io(std::io::Error),
}

impl From<strandalg::Error> for AppError {
    fn from(e: strandalg::Error) -> Self {
        AppError::Domain(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

/// Parses an expression argument; "-" reads the expression from stdin.
fn parse_expr(text: &str) -> Result<parser::Expression, AppError> {
    let owned;
    let text = if text == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        owned = buf;
        owned.trim()
    } else {
        text
    };
    parser::parse(text).map_err(|e| AppError::Parse(e.to_string()))
}

fn parse_seq(text: &str) -> Result<Seq, AppError> {
    text.parse().map_err(AppError::Parse)
}

fn parse_divided(text: &str) -> Result<DividedSeq, AppError> {
    text.parse().map_err(AppError::Parse)
}

fn eval(expr: &parser::Expression) -> Result<Element, AppError> {
    let mut out = Element::zero(expr.source.ambient());
    for (c, word) in expr.words() {
        out.add_assign(&normal_form(&word)?.scaled(c));
    }
    Ok(out)
}

fn reduce(e: Element, ring: CoeffRing) -> Element {
    match ring {
        CoeffRing::Integers => e,
        CoeffRing::Prime(p) => e.reduced_mod(p),
    }
}

fn modulus(ring: CoeffRing) -> Option<u64> {
    match ring {
        CoeffRing::Integers => None,
        CoeffRing::Prime(p) => Some(p),
    }
}

fn print_element(e: &Element, out: &OutputOpts) {
    if out.json {
        println!("{}", serde_json::to_string(&e.to_json()).unwrap());
    } else {
        println!("{e}");
    }
}

fn run(cmd: Command) -> Result<ExitCode, AppError> {
    match cmd {
        Command::Nf { expr, out } => {
            let e = eval(&parse_expr(&expr)?)?;
            print_element(&reduce(e, out.coeff), &out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Mul { top, bottom, out } => {
            let a = eval(&parse_expr(&top)?)?;
            let b = eval(&parse_expr(&bottom)?)?;
            let prod = multiply(&a, &b)?;
            print_element(&reduce(prod, out.coeff), &out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Diff { expr, out } => {
            let e = eval(&parse_expr(&expr)?)?;
            let d = dg::differential(&e)?;
            print_element(&reduce(d, out.coeff), &out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Basis {
            source,
            target,
            qmax,
            out,
        } => {
            let source = parse_seq(&source)?;
            let target = parse_seq(&target)?;
            let basis = enumerate_basis(&source, &target, qmax)?;
            if out.json {
                let rows: Vec<serde_json::Value> = basis
                    .iter()
                    .map(|t| {
                        let bd = t.bidegree();
                        serde_json::json!({
                            "term": Element::from_term(t.clone(), 1).to_json()["terms"][0],
                            "coh": bd.coh,
                            "qdeg": bd.qdeg,
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "schema": "strandalg.basis/1",
                        "source": source.to_string(),
                        "target": target.to_string(),
                        "qmax": qmax,
                        "count": basis.len(),
                        "terms": rows,
                    })
                );
            } else {
                for t in &basis {
                    let bd = t.bidegree();
                    println!("({}, {})\t{}", bd.coh, bd.qdeg, t);
                }
                println!("count: {}", basis.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gdim {
            source,
            target,
            qmax,
            coh,
            out,
        } => {
            let source = parse_seq(&source)?;
            let target = parse_seq(&target)?;
            let g = graded_dim(&source, &target, qmax, coh)?;
            if out.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "schema": "strandalg.gdim/1",
                        "source": source.to_string(),
                        "target": target.to_string(),
                        "qmax": qmax,
                        "coh": coh,
                        "gdim": g.to_string(),
                    })
                );
            } else {
                println!("{g}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Homology {
            source,
            target,
            qdeg,
            qmax,
            out,
        } => {
            let source = parse_seq(&source)?;
            let target = parse_seq(&target)?;
            let qrange: Vec<i64> = match qdeg {
                Some(q) => vec![q],
                None => (-qmax..=qmax).collect(),
            };
            let mut rows = Vec::new();
            for q in qrange {
                for (cohdeg, dim) in dg::homology_dim(&source, &target, q, modulus(out.coeff))? {
                    rows.push(dg::HomologyRow {
                        source: source.to_string(),
                        target: target.to_string(),
                        qdeg: q,
                        cohdeg,
                        dim,
                    });
                }
            }
            if out.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "schema": dg::HOMOLOGY_SCHEMA,
                        "rows": rows,
                    })
                );
            } else if rows.is_empty() {
                println!("homology vanishes in the scanned range");
            } else {
                for r in rows {
                    println!(
                        "{} -> {}  q={}  coh={}  dim={}",
                        r.source, r.target, r.qdeg, r.cohdeg, r.dim
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Contract {
            seq,
            unit,
            n,
            m,
            out,
        } => {
            let target = if unit {
                Element::unit(n.unwrap(), m.unwrap())
            } else {
                let seq = seq.ok_or_else(|| {
                    AppError::Parse("either --seq or --unit is required".to_string())
                })?;
                Element::idempotent(parse_seq(&seq)?)
            };
            match dg::find_contraction_in(&target, modulus(out.coeff))? {
                Contraction::NoContraction => {
                    if out.json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "schema": dg::CONTRACTION_SCHEMA,
                                "target": target.to_json(),
                                "witness": serde_json::Value::Null,
                            })
                        );
                    } else {
                        println!("no contraction: the idempotent is not a boundary");
                    }
                    Ok(ExitCode::from(1))
                }
                Contraction::Witness(w) => {
                    if out.json {
                        println!(
                            "{}",
                            serde_json::to_string(&dg::contraction_to_json(&target, &w)).unwrap()
                        );
                    } else {
                        for (t, c) in &w.terms {
                            println!("{c} * {t}");
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Em { m, out } => {
            let e = k0::e_m(m)?;
            print_element(&reduce(e, out.coeff), &out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose {
            source,
            targets,
            check,
            out,
        } => {
            if let Some(path) = check {
                let text = std::fs::read_to_string(path)?;
                let v: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| AppError::Parse(e.to_string()))?;
                let cert =
                    k0::DecompositionCertificate::from_json(&v).map_err(AppError::Parse)?;
                let ok = cert.verify()?;
                if out.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "schema": "strandalg.certificate-check/1",
                            "verified": ok,
                        })
                    );
                } else {
                    println!("certificate {}", if ok { "verified" } else { "REJECTED" });
                }
                return Ok(if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                });
            }
            let source = parse_divided(&source.unwrap())?;
            let targets: Vec<DividedSeq> = targets
                .iter()
                .map(|t| parse_divided(t))
                .collect::<Result<_, _>>()?;
            if targets.is_empty() {
                return Err(AppError::Parse("at least one --targets entry".to_string()));
            }
            match k0::solve_decomposition(&source, &targets)? {
                None => {
                    if out.json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "schema": k0::CERTIFICATE_SCHEMA,
                                "source": source.to_string(),
                                "solved": false,
                            })
                        );
                    } else {
                        println!("no certificate: decomposition not solvable over these targets");
                    }
                    Ok(ExitCode::from(1))
                }
                Some(cert) => {
                    let ok = cert.verify()?;
                    if out.json {
                        println!("{}", serde_json::to_string(&cert.to_json()).unwrap());
                    } else {
                        for (i, fam) in cert.targets.iter().enumerate() {
                            println!("P[{}] multiplicity {}", fam.target, cert.multiplicity(i));
                        }
                        println!("verified: {ok}");
                    }
                    Ok(if ok {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    })
                }
            }
        }
        Command::Verify {
            n,
            m,
            qmax,
            degmax,
            out,
        } => {
            let report = verify::run_battery(n, m, qmax, degmax)?;
            if out.json {
                println!("{}", serde_json::to_string(&report.to_json()).unwrap());
            } else {
                for line in &report.lines {
                    println!("{}: {}", if line.ok { "PASS" } else { "FAIL" }, line.name);
                }
                println!("{} checks, {} failed", report.lines.len(), report.failures());
            }
            Ok(if report.failures() == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Pol {
            expr,
            w,
            monomial,
            out,
        } => {
            let expr = parse_expr(&expr)?;
            let n = expr.source.n();
            let m = expr.source.m();
            let w = match w {
                None => Perm::identity(n),
                Some(text) => {
                    let images: Vec<u8> = text
                        .split(',')
                        .map(|x| {
                            x.trim()
                                .parse::<u8>()
                                .map_err(|e| format!("{e}"))
                                .and_then(|v| v.checked_sub(1).ok_or("1-based".to_string()))
                        })
                        .collect::<Result<_, _>>()
                        .map_err(AppError::Parse)?;
                    Perm::from_images(images)
                        .ok_or_else(|| AppError::Parse("not a permutation".to_string()))?
                }
            };
            if w.n() != n {
                return Err(AppError::Parse(format!(
                    "permutation must have {n} entries"
                )));
            }
            let exps: Vec<u16> = match monomial {
                None => vec![0; m],
                Some(text) => text
                    .split(',')
                    .map(|x| x.trim().parse::<u16>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| AppError::Parse(format!("{e}")))?,
            };
            if exps.len() != m {
                return Err(AppError::Parse(format!(
                    "monomial needs {m} exponents, got {}",
                    exps.len()
                )));
            }
            let v = PolVector::from_block(expr.source.clone(), w, MPoly::monomial(exps, 1));
            let mut result = PolVector::zero();
            for (c, word) in expr.words() {
                let img = pol::act_tokens(&expr.source, &word.tokens, &v, MixedRule::Standard)?;
                result.add_assign(&img.scaled(c));
            }
            if out.json {
                let blocks: Vec<serde_json::Value> = result
                    .blocks()
                    .map(|((seq, w), poly)| {
                        serde_json::json!({
                            "seq": seq.to_string(),
                            "w": w.to_string(),
                            "poly": poly.terms().map(|(e, c)| serde_json::json!({
                                "exps": e,
                                "coeff": c.to_string(),
                            })).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({ "schema": "strandalg.pol/1", "blocks": blocks })
                );
            } else if result.is_zero() {
                println!("0");
            } else {
                for ((seq, w), poly) in result.blocks() {
                    let terms: Vec<String> = poly
                        .terms()
                        .map(|(e, c)| {
                            let vars: String = e
                                .iter()
                                .enumerate()
                                .filter(|(_, &x)| x > 0)
                                .map(|(k, &x)| {
                                    if x == 1 {
                                        format!("x{}", k + 1)
                                    } else {
                                        format!("x{}^{}", k + 1, x)
                                    }
                                })
                                .collect::<Vec<_>>()
                                .join(" ");
                            if vars.is_empty() {
                                format!("{c}")
                            } else if c == 1 {
                                vars
                            } else {
                                format!("{c} {vars}")
                            }
                        })
                        .collect();
                    println!("block ({seq}, {w}): {}", terms.join(" + "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
