//! Command-line front end. Exit codes: 0 success, 1 failed check or domain
//! error, 2 malformed input.

use clap::{Parser, Subcommand, ValueEnum};
use ribbon_tqft::diagram::parse_diagram;
use ribbon_tqft::report;
use ribbon_tqft::surgery::{tau_blocks, tau_closed_detail};
use ribbon_tqft::tqft2::functor::{multi_indices, parse_cobordism, x_blocks, x_one_morphism, Cobordism};
use ribbon_tqft::tqft2::twovect::twomatrix_multiply;
use ribbon_tqft::tqft2::types::{compose_types, DecoratedType};
use ribbon_tqft::tqft2::verify::{verify_axioms, SampleSet};
use ribbon_tqft::{bundled_category, parse_category, Error, ModularCategoryData};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "ribbon-tqft", version, about = "Ribbon graph, surgery and extended TQFT computations")]
struct Cli {
    /// Category file (JSON) or the name of a bundled category.
    #[arg(long, global = true, default_value = "fibonacci")]
    category: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    out: Format,
    /// Overrides the tolerance stored in the category file.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the category axioms and print 𝒟 and Δ.
    CheckCategory,
    /// τ of a closed diagram, or the τ block matrix of a cobordism between closed types.
    EvalTau { input: PathBuf },
    /// All (i, j) blocks of the functor on a cobordism file.
    EvalFunctor { input: PathBuf },
    /// Run the axiom suite, optionally with extra cobordism files.
    Verify { samples: Vec<PathBuf> },
    /// Compose two decorated types and compare 2-matrix entry dimensions.
    ComposeTypes { first: String, second: String },
}

enum Failure {
    Input(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(cli: &Cli) -> Result<ModularCategoryData, Failure> {
    let path = Path::new(&cli.category);
    let mut cat = if path.exists() {
        parse_category(&read(path)?)?
    } else {
        bundled_category(&cli.category).map_err(|_| {
            Failure::Input(format!("{}: no such file or bundled category", cli.category))
        })?
    };
    if let Some(t) = cli.tolerance {
        if !(t > 0.0) {
            return Err(Failure::Input("tolerance must be positive".into()));
        }
        cat.tolerance = t;
    }
    Ok(cat)
}

fn fmt_scalar(z: ribbon_tqft::Scalar) -> String {
    format!("{:.12} {:+.12}i", z.re, z.im)
}

/// Output text and whether the command succeeded.
fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let cat = load(cli)?;
    let json_out = cli.out == Format::Json;
    match &cli.command {
        Command::CheckCategory => {
            let v = cat.validate();
            let ok = v.all_passed();
            if json_out {
                return Ok((report::to_string(&report::category(&cat, &v)), ok));
            }
            let mut s = format!("category {} (rank {})\n", cat.name, cat.rank());
            s += &format!("global dimension {}\n", fmt_scalar(cat.rank_d()));
            match cat.delta() {
                Ok(d) => s += &format!("gauss sum {}\n", fmt_scalar(d)),
                Err(e) => s += &format!("gauss sum unavailable: {e}\n"),
            }
            for c in &v.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                s += &format!("{mark} {} residual {:.3e}\n", c.axiom, c.residual);
            }
            Ok((s, ok))
        }
        Command::EvalTau { input } => {
            let text = read(input)?;
            if text.lines().any(|l| l.trim_start().starts_with("type")) {
                let c = parse_cobordism(&text)?;
                if c.bottom.m != 0 || c.bottom.n != 0 {
                    return Err(Failure::Domain(format!(
                        "eval-tau needs closed types, got {} -> {}",
                        c.bottom, c.top
                    )));
                }
                let b = tau_blocks(&cat, &c.diagram, &c.bottom, &c.top, &[], &[])?;
                let grid = vec![vec![b]];
                return Ok((closed_blocks_report(&cat, &c, &grid, "eval-tau", json_out), true));
            }
            let d = parse_diagram(&text)?;
            let inv = tau_closed_detail(&cat, &d)?;
            if json_out {
                return Ok((report::to_string(&report::closed(&cat, &inv)), true));
            }
            Ok((
                format!(
                    "tau {}\nbracket {}\nsigma {}\nmu {}\n",
                    fmt_scalar(inv.tau),
                    fmt_scalar(inv.bracket),
                    inv.sigma,
                    inv.mu
                ),
                true,
            ))
        }
        Command::EvalFunctor { input } => {
            let c = parse_cobordism(&read(input)?)?;
            let grid = x_blocks(&cat, &c)?;
            Ok((closed_blocks_report(&cat, &c, &grid, "eval-functor", json_out), true))
        }
        Command::Verify { samples } => {
            let mut set = SampleSet::default();
            for p in samples {
                set.cobordisms.push((p.display().to_string(), parse_cobordism(&read(p)?)?));
            }
            let (outcomes, ledger) = verify_axioms(&cat, &set, cat.tolerance);
            let ok = outcomes.iter().all(|o| o.passed);
            if json_out {
                return Ok((report::to_string(&report::axioms(&cat, &outcomes, &ledger)), ok));
            }
            let mut s = String::new();
            for o in &outcomes {
                let mark = if o.passed { "pass" } else { "FAIL" };
                let r = o.residual.map_or("n/a".to_string(), |r| format!("{r:.3e}"));
                s += &format!("{mark} {} residual {r} {}\n", o.name, o.detail);
            }
            Ok((s, ok))
        }
        Command::ComposeTypes { first, second } => {
            let t: DecoratedType = first.parse()?;
            let u: DecoratedType = second.parse()?;
            let c = compose_types(&t, &u)?;
            let prod = twomatrix_multiply(&x_one_morphism(&cat, &t)?, &x_one_morphism(&cat, &u)?)?;
            let direct = x_one_morphism(&cat, &c)?;
            let ok = prod.dims() == direct.dims();
            if json_out {
                let v = json!({
                    "schema": report::SCHEMA,
                    "command": "compose-types",
                    "category": cat.name,
                    "composite": c.to_string(),
                    "product_dims": prod.dims(),
                    "composite_dims": direct.dims(),
                    "dims_match": ok,
                });
                return Ok((report::to_string(&v), ok));
            }
            Ok((
                format!(
                    "composite {c}\nproduct dims {:?}\ncomposite dims {:?}\n",
                    prod.dims(),
                    direct.dims()
                ),
                ok,
            ))
        }
    }
}

fn closed_blocks_report(
    cat: &ModularCategoryData,
    c: &Cobordism,
    grid: &[Vec<ribbon_tqft::surgery::TauBlocks>],
    command: &str,
    json_out: bool,
) -> String {
    let rows = multi_indices(cat.rank(), c.bottom.m);
    let cols = multi_indices(cat.rank(), c.bottom.n);
    if json_out {
        let v: Value = json!({
            "schema": report::SCHEMA,
            "command": command,
            "category": cat.name,
            "bottom": c.bottom.to_string(),
            "top": c.top.to_string(),
            "blocks": report::block_grid(cat, grid, &rows, &cols),
        });
        return report::to_string(&v);
    }
    let mut s = format!("{} -> {}\n", c.bottom, c.top);
    for (r, row) in grid.iter().enumerate() {
        for (k, b) in row.iter().enumerate() {
            let label = |v: &[usize]| v.iter().map(|&l| cat.labels[l].as_str()).collect::<Vec<_>>().join(",");
            s += &format!("block i=({}) j=({}) sigma {} mu {}\n", label(&rows[r]), label(&cols[k]), b.sigma, b.mu);
            let m = b.assembled();
            for x in 0..m.nrows() {
                let cells: Vec<String> = (0..m.ncols()).map(|y| fmt_scalar(m[(x, y)])).collect();
                s += &format!("  [{}]\n", cells.join(", "));
            }
        }
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: invalid --jobs value");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
