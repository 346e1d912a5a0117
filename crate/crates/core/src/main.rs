use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dbcalc::builtins::{builtin_complex, STANDARD};
use dbcalc::cycles::{integrate, CycleDecomposition};
use dbcalc::db::bf_action;
use dbcalc::error::Error;
use dbcalc::gauge::GaugeField;
use dbcalc::json;
use dbcalc::manifold::Manifold;
use dbcalc::random::{random_field, Gen};
use dbcalc::rmodz::{parse_q, RmodZ};
use dbcalc::suites::{self, Suite};

#[derive(Parser)]
#[command(name = "dbcalc", version, about = "Discrete Deligne-Beilinson calculus for U(1) BF theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Space {
    /// Builtin manifold: circle:K, sphere:N, torus2, torus3, lens:K
    #[arg(long, conflicts_with = "complex")]
    builtin: Option<String>,
    /// Complex JSON file
    #[arg(long)]
    complex: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers and torsion of every degree
    Homology {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        json: bool,
    },
    /// k times the BF action of B (fieldB) and A (fieldA), mod 1
    Bf {
        #[command(flatten)]
        space: Space,
        #[arg(long = "fieldA", alias = "field")]
        field_a: PathBuf,
        #[arg(long = "fieldB")]
        field_b: PathBuf,
        /// Coupling constant; must be an integer
        #[arg(short = 'k', default_value = "1", allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        json: bool,
    },
    /// Holonomy of a field along a cycle (chain or decomposition JSON)
    Holonomy {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Writes a builtin complex as JSON
    Complex {
        #[command(flatten)]
        space: Space,
    },
    /// Writes a seeded random gauge p-field as JSON
    Field {
        #[command(flatten)]
        space: Space,
        #[arg(short = 'p')]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs a verification suite
    Verify {
        /// descent, gauge-invariance, decomposition-independence, proposition1,
        /// sequences, adjunction, reduction, epsilon-symmetry-report
        suite: String,
        #[command(flatten)]
        space: Space,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

/// An error with the exit code it maps to.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(suites::exit_code(&e) as u8, e.to_string())
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn read_json(path: &Path) -> Res<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail(2, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

fn manifold(space: &Space) -> Res<(String, Manifold)> {
    match (&space.builtin, &space.complex) {
        (Some(name), _) => Ok((name.clone(), Manifold::builtin(name)?)),
        (None, Some(path)) => {
            let k = json::complex_from_json(&read_json(path)?)?;
            Ok((path.display().to_string(), Manifold::new(k)?))
        }
        (None, None) => Err(Fail(2, "one of --builtin or --complex is required".into())),
    }
}

fn read_field(path: &Path, m: &Manifold) -> Res<GaugeField> {
    let a = json::field_from_json(&read_json(path)?)?;
    if !a.check_descent(m) {
        return Err(Fail(3, format!("{}: field violates its descent equations", path.display())));
    }
    Ok(a)
}

fn group(rank: usize, torsion: &[u64]) -> String {
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(torsion.iter().map(|t| format!("Z_{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn print_value(v: &RmodZ, as_json: bool) {
    if as_json {
        println!("{}", json!({ "value": v.to_string() }));
    } else {
        println!("{v}");
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn run(cli: Cli) -> Res<u8> {
    match cli.command {
        Command::Homology { space, json: as_json } => {
            let (_, m) = manifold(&space)?;
            let hs: Vec<_> = (0..=m.dim()).map(|p| m.homology(p).presentation.clone()).collect();
            if as_json {
                println!("{}", pretty(&json!({ "n": m.dim(), "homology": hs })));
            } else {
                let b: Vec<String> = hs.iter().map(|h| h.rank.to_string()).collect();
                println!("b = {}", b.join(","));
                for (p, h) in hs.iter().enumerate() {
                    println!("H_{p} = {}", group(h.rank, &h.torsion));
                }
            }
            Ok(0)
        }
        Command::Bf { space, field_a, field_b, k, json: as_json } => {
            let k = match (parse_q(&k), k.parse::<f64>()) {
                (Ok(x), _) => x,
                (Err(_), Ok(x)) if x.is_finite() && x.fract() == 0.0 => dbcalc::rmodz::q(x as i64),
                (Err(_), Ok(_)) => return Err(Error::Coupling.into()),
                _ => return Err(Fail(2, format!("cannot parse coupling {k:?}"))),
            };
            if !k.is_integer() {
                return Err(Error::Coupling.into());
            }
            let (_, m) = manifold(&space)?;
            let a = read_field(&field_a, &m)?;
            let b = read_field(&field_b, &m)?;
            print_value(&bf_action(&m, &b, &a, &k)?, as_json);
            Ok(0)
        }
        Command::Holonomy { space, field, cycle, json: as_json } => {
            let (_, m) = manifold(&space)?;
            let a = read_field(&field, &m)?;
            let v = read_json(&cycle)?;
            let d: CycleDecomposition = if v.get("layers").is_some() {
                json::decomposition_from_json(&v)?
            } else {
                let z = json::sparse_from_json(&v)?;
                dbcalc::cycles::decompose_cycle(&m, &z, dbcalc::cycles::Assignment::MinVertex)?
            };
            print_value(&integrate(&a, &d)?, as_json);
            Ok(0)
        }
        Command::Complex { space } => {
            let (_, m) = manifold(&space)?;
            println!("{}", pretty(&json::complex_to_json(&m)));
            Ok(0)
        }
        Command::Field { space, p, seed } => {
            let (_, m) = manifold(&space)?;
            if p >= m.dim() {
                return Err(Fail(3, format!("random fields need p < {}", m.dim())));
            }
            let a = random_field(&m, p, &mut Gen::new(seed))?;
            println!("{}", pretty(&json::field_to_json(&a)));
            Ok(0)
        }
        Command::Verify { suite, space, seed, count, json: as_json } => {
            let s = Suite::parse(&suite).ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Fail(2, format!("unknown suite {suite:?}; expected one of {}", names.join(", ")))
            })?;
            let manifolds = if space.builtin.is_some() || space.complex.is_some() {
                vec![manifold(&space)?]
            } else {
                STANDARD
                    .iter()
                    .map(|name| Ok((name.to_string(), Manifold::new(builtin_complex(name)?)?)))
                    .collect::<Res<Vec<_>>>()?
            };
            let report = suites::run(s, &manifolds, seed, count.unwrap_or(s.default_count()));
            if as_json {
                let mut v = serde_json::to_value(&report).expect("report serializes");
                v["passed"] = json!(report.passed());
                println!("{}", pretty(&v));
            } else {
                print!("{}", report.render());
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
