use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use relqh_cli::suites::{self, Suite};
use relqh_cli::{exit_code, parse, tables, EXIT_VERIFY_FAILED};
use relqh_core::geometry::Side;
use relqh_core::rational::{parse_fraction, to_fraction_string};
use relqh_core::rings::{ci_presentation, relative_quantum_table, small_quantum_table, stated_presentations};
use relqh_core::{
    ClosedEngine, ClosedKey, EngineConfig, Error, OpenEngine, OpenKey, Rational, Result, SignConvention, Store,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "relqh", version, about = "Exact closed and open Gromov-Witten invariants and quantum rings")]
struct Cli {
    /// Persistent value cache (JSON lines); also read from OGW_CACHE.
    #[arg(long, global = true, env = "OGW_CACHE")]
    cache: Option<PathBuf>,
    /// Lift the default caps on ℙⁿ (n ≤ 9, degree ≤ 6).
    #[arg(long, global = true)]
    allow_large_pn: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Closed,
    Open,
    Enhanced,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Absolute,
    Relative,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one invariant.
    Invariant {
        /// pn, q-odd, q-even or q2.
        #[arg(long)]
        space: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "closed")]
        kind: Kind,
        /// Degree; "A,B" on the quadric surface for closed invariants.
        #[arg(long)]
        beta: String,
        /// Boundary points; defaults to the unique value allowed by degree.
        #[arg(long)]
        k: Option<u32>,
        /// Comma-separated tags: h0.., pdl, l, ls, ll (closed); g0.., diamond, pdl (open).
        #[arg(long, default_value = "")]
        constraints: String,
    },
    /// Reproduce one of the published tables.
    Table {
        #[arg(long)]
        table: u8,
        /// Table 1: comma-separated odd dimensions.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        max_m: Option<u32>,
        #[arg(long)]
        beta_max: Option<u32>,
        #[arg(long)]
        max_l3: Option<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Compare against the published values; exit 1 on any mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Print the structure constants of a quantum ring with its stated presentations.
    Ring {
        #[arg(long)]
        space: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "relative")]
        side: SideArg,
    },
    /// Presentation of the relative ring of a complete intersection.
    Presentation {
        #[arg(long)]
        n: u32,
        /// Comma-separated defining degrees.
        #[arg(long)]
        degrees: String,
        /// JSON file holding the pairing matrix as rows of "p/q" strings.
        #[arg(long)]
        pairing: Option<PathBuf>,
        #[arg(long)]
        l_trivial: bool,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Energy bound for the enumerated checks.
        #[arg(long, default_value_t = 3)]
        budget: u32,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let store = Arc::new(Store::new());
    if let Some(path) = &cli.cache {
        if path.exists() {
            let report = store.load(path)?;
            log::info!("loaded cache {}: {report:?}", path.display());
        }
    }
    let config = EngineConfig { allow_large_pn: cli.allow_large_pn };
    let code = dispatch(cli.command, &store, config)?;
    if let Some(path) = &cli.cache {
        store.flush(path)?;
    }
    Ok(code)
}

fn dispatch(command: Command, store: &Arc<Store>, config: EngineConfig) -> Result<i32> {
    match command {
        Command::Invariant { space, n, kind, beta, k, constraints } => {
            let space = parse::space(&space, n)?;
            let out = match kind {
                Kind::Closed => {
                    let beta = parse::closed_beta(&beta, space)?;
                    let cs = parse::closed_constraints(&constraints)?;
                    let ev = ClosedEngine::with_store(space, store.clone(), config).evaluate(beta, &cs)?;
                    json!({
                        "key": ClosedKey::new(space, beta, &cs).canonical(),
                        "value": to_fraction_string(&ev.value),
                        "provenance": ev.provenance.as_str(),
                    })
                }
                Kind::Open | Kind::Enhanced => {
                    let enhanced = matches!(kind, Kind::Enhanced);
                    let beta = parse::open_beta(&beta)?;
                    let cs = parse::open_constraints(&constraints)?;
                    let e = OpenEngine::with_store(space, store.clone(), config, SignConvention::default());
                    let k = match k.or_else(|| e.boundary_count(beta, &cs)) {
                        Some(k) => k,
                        None => return Err(Error::Invalid("no k satisfies the degree axiom; pass --k".into())),
                    };
                    let ev = e.evaluate(beta, k, &cs, enhanced)?;
                    json!({
                        "key": OpenKey::new(space, beta, k, &cs, enhanced).canonical(),
                        "value": to_fraction_string(&ev.value),
                        "provenance": ev.provenance.as_str(),
                        "k": k,
                    })
                }
            };
            println!("{out}");
            Ok(0)
        }
        Command::Table { table, n, max_m, beta_max, max_l3, format, check } => {
            let mut spec = tables::TableSpec::published(table)?;
            if let Some(ns) = n {
                spec.ns = parse::u32_list(&ns)?;
            }
            spec.max_m = max_m.unwrap_or(spec.max_m);
            spec.beta_max = beta_max.unwrap_or(spec.beta_max);
            spec.max_l3 = max_l3.unwrap_or(spec.max_l3);
            let cells = tables::compute(&spec, store, |c| eprintln!("{}", c.label()))?;
            match format {
                Format::Csv => print!("{}", tables::to_csv(&cells)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&tables::to_json(&cells)).unwrap()),
            }
            if check {
                let bad = tables::check(&cells)?;
                for m in &bad {
                    eprintln!("mismatch: {m}");
                }
                if !bad.is_empty() {
                    return Ok(EXIT_VERIFY_FAILED);
                }
                eprintln!("all {} cells match", cells.len());
            }
            Ok(0)
        }
        Command::Ring { space, n, side } => {
            let space = parse::space(&space, n)?;
            let t = match side {
                SideArg::Absolute => small_quantum_table(&ClosedEngine::with_store(space, store.clone(), config))?,
                SideArg::Relative => relative_quantum_table(&OpenEngine::with_store(
                    space,
                    store.clone(),
                    config,
                    SignConvention::default(),
                ))?,
            };
            let mut products = vec![];
            for a in 0..t.rank() {
                for b in a..t.rank() {
                    let v = t.mul(&t.basis(a), &t.basis(b));
                    products.push(json!({ "left": t.names[a], "right": t.names[b], "product": t.format(&v) }));
                }
            }
            let side = match side {
                SideArg::Absolute => Side::Absolute,
                SideArg::Relative => Side::Relative,
            };
            let presentations: Vec<_> = stated_presentations(space, side).into_iter().map(|s| s.presentation).collect();
            let basis: Vec<_> =
                t.names.iter().zip(&t.degrees).map(|(name, d)| json!({ "name": name, "degree": d })).collect();
            let out = json!({
                "space": space.to_string(),
                "basis": basis,
                "products": products,
                "presentations": presentations,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Presentation { n, degrees, pairing, l_trivial } => {
            let degrees = parse::u32_list(&degrees)?;
            let matrix = match pairing {
                Some(path) => read_pairing(&path)?,
                None => vec![],
            };
            let p = ci_presentation(n, &degrees, &matrix, l_trivial)?;
            println!("{}", serde_json::to_string_pretty(&p).unwrap());
            Ok(0)
        }
        Command::Verify { suite, budget } => {
            let results = suites::run(suite, budget)?;
            let mut failed = false;
            for r in &results {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                println!("{status} {} (checked {}, skipped {})", r.name, r.checked, r.skipped);
                for f in r.failures.iter().filter(|f| !f.is_empty()) {
                    println!("    {f}");
                }
                failed |= !r.passed();
            }
            Ok(if failed { EXIT_VERIFY_FAILED } else { 0 })
        }
    }
}

fn read_pairing(path: &PathBuf) -> Result<Vec<Vec<Rational>>> {
    let text = std::fs::read_to_string(path)?;
    let rows: Vec<Vec<String>> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    rows.iter().map(|row| row.iter().map(|s| parse_fraction(s)).collect()).collect()
}
