use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dinfty::ar::{all_edges, quiver_dot};
use dinfty::catalog::{entry_json, FamilyId};
use dinfty::cb::cb_table;
use dinfty::context::Ctx;
use dinfty::hom::{hom_window, pointed_morphism};
use dinfty::module::GradedModule;
use dinfty::pattern::{pattern, PointedModule};
use dinfty::quilt::build_quilt;
use dinfty::verify::{self, exit_code, reports_markdown, run_check, Config, Report};
use dinfty::Error;

#[derive(Parser)]
#[command(name = "dinfty", version, about = "Cohen–Macaulay modules over F_p[x,y]/(x²y)")]
struct Cli {
    /// Characteristic of the coefficient field (odd prime).
    #[arg(long, global = true, default_value_t = 5)]
    prime: u32,
    /// Largest family index in the window.
    #[arg(long = "kmax", global = true, default_value_t = 5)]
    k_max: u32,
    /// Degree window; defaults to 2·kmax + 8.
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Largest radical power computed.
    #[arg(long = "nmax", global = true, default_value_t = 10)]
    n_max: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Localization identities and fibre socles.
    RingCheck,
    /// Presentations and bases of the catalog window.
    Catalog,
    /// Graded Hom window between two modules (catalog names or JSON files).
    Hom { m: String, n: String },
    /// Whether a pointed morphism SRC → DST exists, e.g. "(S,x)" "(S,x^2)".
    Pointed { src: String, dst: String },
    /// Pattern of a pointed module, e.g. "(S,x^2)".
    Pattern {
        #[arg(value_name = "SEED")]
        seed_point: String,
    },
    /// Interval and lattice facts of both pattern windows.
    Interval,
    /// Finite-length collapse and m-dimension.
    Collapse,
    /// Cantor–Bendixson ranks of the modelled points.
    CbTable,
    /// Irreducible maps, almost split sequences and duality.
    QuiverVerify,
    /// The compactified quiver and its gluing data.
    Quilt,
    /// Radical powers and divisibility.
    Radical,
    /// Every check.
    VerifyAll,
}

enum Output {
    Reports(Vec<Report>),
    Data(Value),
    Text(String),
}

fn module_arg(ctx: &Ctx, s: &str) -> dinfty::Result<Arc<GradedModule>> {
    if Path::new(s).extension().is_some_and(|e| e == "json") {
        let v: Value = serde_json::from_str(&fs::read_to_string(s)?)?;
        return Ok(Arc::new(GradedModule::from_json(ctx.field(), &v)?));
    }
    Ok(ctx.module(s.parse()?))
}

fn seed_arg(s: &str) -> dinfty::Result<(FamilyId, String)> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (id, expr) = t
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected (MODULE, ELEMENT), got {s:?}")))?;
    Ok((id.trim().parse()?, expr.trim().to_string()))
}

fn checks(ctx: &Ctx, config: &Config, ids: &[&str]) -> Vec<Report> {
    ids.iter().filter_map(|id| run_check(ctx, config, id)).collect()
}

fn unsupported(format: Format) -> Error {
    let name = match format {
        Format::Json => "json",
        Format::Dot => "dot",
        Format::Md => "md",
    };
    Error::InvalidParameter(format!("--format {name} is not available for this subcommand"))
}

fn duality_markdown(report: &Report) -> String {
    let mut out = String::from("| module | dual |\n|---|---|\n");
    if let Value::Object(map) = &report.details {
        let mut rows: Vec<(FamilyId, &Value)> =
            map.iter().filter_map(|(k, v)| k.parse().ok().map(|id| (id, v))).collect();
        rows.sort_by_key(|r| r.0);
        for (id, v) in rows {
            out.push_str(&format!("| {id} | {} |\n", v.as_str().unwrap_or("?")));
        }
    }
    out
}

fn run(cli: &Cli, config: &Config) -> dinfty::Result<Output> {
    let ctx = config.ctx();
    let fmt = cli.format;
    let k = config.k_max;
    Ok(match &cli.command {
        Command::RingCheck => Output::Reports(checks(&ctx, config, &["ring.identities", "ring.socles"])),
        Command::Catalog => match fmt {
            Format::Json => Output::Data(Value::Array(
                FamilyId::window(k).into_iter().map(|id| entry_json(ctx.field(), id, 4)).collect(),
            )),
            Format::Md => {
                let mut s = String::from("| module | generators | relations |\n|---|---|---|\n");
                for id in FamilyId::window(k) {
                    let m = ctx.module(id);
                    let gens: Vec<String> = m.gens().iter().map(|g| format!("{}({})", g.label, g.degree)).collect();
                    s.push_str(&format!("| {id} | {} | {} |\n", gens.join(", "), m.relation_strings().join(", ")));
                }
                Output::Text(s)
            }
            Format::Dot => return Err(unsupported(fmt)),
        },
        Command::Hom { m, n } => {
            if fmt != Format::Json {
                return Err(unsupported(fmt));
            }
            let (m, n) = (module_arg(&ctx, m)?, module_arg(&ctx, n)?);
            let w = hom_window(&m, &n, config.depth);
            Output::Data(json!({
                "source": m.name(),
                "target": n.name(),
                "depth": w.depth,
                "dim": w.dim(),
                "graded_dims": w.graded_dims(),
                "basis": w.basis().map(|phi| phi.images_json()).collect::<Vec<_>>(),
            }))
        }
        Command::Pointed { src, dst } => {
            if fmt != Format::Json {
                return Err(unsupported(fmt));
            }
            let a = PointedModule::parse(&ctx, src)?;
            let b = PointedModule::parse(&ctx, dst)?;
            let witness = pointed_morphism(&a.module, &a.point, &b.module, &b.point);
            Output::Data(json!({
                "source": a.to_string(),
                "target": b.to_string(),
                "status": "pass",
                "exists": witness.is_some(),
                "witness": witness.map(|phi| phi.images_json()),
            }))
        }
        Command::Pattern { seed_point } => {
            let (id, expr) = seed_arg(seed_point)?;
            let pk = config.pattern_k();
            let p = pattern(&ctx, id, &expr, pk, 3 * pk, 1 << 20)?;
            match fmt {
                Format::Dot => Output::Text(p.to_dot()),
                Format::Json => Output::Data(p.to_json()),
                Format::Md => return Err(unsupported(fmt)),
            }
        }
        Command::Interval => Output::Reports(checks(&ctx, config, &["lattice.x-square", "lattice.vx-zero", "cb.cuts"])),
        Command::Collapse => Output::Reports(checks(&ctx, config, &["cb.collapse", "cb.dimension"])),
        Command::CbTable => {
            let (tk, depth) = verify::cb_window(config);
            let table = cb_table(&ctx, tk, depth)?;
            match fmt {
                Format::Md => Output::Text(table.to_markdown()),
                Format::Json => Output::Data(table.to_json()),
                Format::Dot => return Err(unsupported(fmt)),
            }
        }
        Command::QuiverVerify => match fmt {
            Format::Dot => Output::Text(quiver_dot(&all_edges(&ctx, k))),
            Format::Md => {
                let r = run_check(&ctx, config, "quiver.duality").expect("registered check");
                Output::Text(duality_markdown(&r))
            }
            Format::Json => Output::Reports(checks(
                &ctx,
                config,
                &["quiver.edges", "quiver.sequences", "quiver.duality", "quiver.infinite", "catalog.integrity", "catalog.indecomposable"],
            )),
        },
        Command::Quilt => match fmt {
            Format::Dot => Output::Text(build_quilt(&ctx, k)?.to_dot()),
            Format::Json => Output::Reports(checks(&ctx, config, &["quilt.graph", "quilt.squares", "quilt.revolution"])),
            Format::Md => return Err(unsupported(fmt)),
        },
        Command::Radical => match fmt {
            Format::Json => Output::Reports(checks(&ctx, config, &["radical.divisibility", "radical.nil-index"])),
            _ => return Err(unsupported(fmt)),
        },
        Command::VerifyAll => Output::Reports(verify::verify_all(config)),
    })
    .and_then(|o| match o {
        Output::Reports(_) if fmt == Format::Dot => Err(unsupported(fmt)),
        o => Ok(o),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match Config::new(cli.prime, cli.k_max, cli.depth, cli.n_max, cli.seed) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (text, code) = match run(&cli, &config) {
        Ok(Output::Reports(r)) => {
            for rep in &r {
                eprintln!("{}", rep.line());
            }
            let s = match cli.format {
                Format::Md => reports_markdown(&r),
                _ => serde_json::to_string_pretty(&r).expect("reports serialize") + "\n",
            };
            (s, exit_code(&r))
        }
        Ok(Output::Data(v)) => (serde_json::to_string_pretty(&v).expect("json") + "\n", 0),
        Ok(Output::Text(s)) => (s, 0),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}
