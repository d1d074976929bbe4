use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;

use twocover::{
    build_cluster_picture, build_disc_collection, build_dual_graph, check_semistable,
    parse_cover_spec, reduction_type, tamagawa_detailed, twin_depth_warnings, Error,
    NormalizationInputs, PipelineOptions, VolumeReport,
};

#[derive(Parser)]
#[command(
    name = "twocover",
    about = "Cluster pictures, dual graphs and Tamagawa numbers of degree-two covers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the semi-stability verdict and reduction type.
    Check { input: PathBuf },
    /// Print the cluster picture in nested notation and the disc tree.
    Picture { input: PathBuf },
    /// Print the dual-graph chain table; optionally write a DOT file.
    Graph {
        input: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print invariant factors, the action matrix and the fixed-point count.
    Tamagawa {
        input: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        max_enum: u64,
        /// Solve congruences instead of enumerating above the bound.
        #[arg(long)]
        algebraic: bool,
    },
    /// Print the full volume report.
    Volume {
        input: PathBuf,
        /// Residue field size.
        #[arg(long)]
        q: u64,
        /// Dimension of the abelian variety.
        #[arg(long)]
        dim: u32,
        /// Point count of the identity component of the special fiber.
        #[arg(long)]
        a0: u64,
        /// Conductor constant, as a rational like "1/2".
        #[arg(long, default_value = "1")]
        conductor: String,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 10_000_000)]
        max_enum: u64,
        #[arg(long)]
        algebraic: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NotSemistable(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn read_spec(path: &PathBuf) -> Result<twocover::CoverSpec, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_cover_spec(&text)
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Check { input } => {
            let spec = read_spec(&input)?;
            let pic = build_cluster_picture(&spec.branch)?;
            let verdict = check_semistable(&pic, &spec.galois, &spec.branch)?;
            let reduction = reduction_type(&pic, &spec.branch, &verdict);
            println!(
                "verdict: {}",
                if verdict.semistable {
                    "semistable"
                } else {
                    "not semistable"
                }
            );
            for v in &verdict.violations {
                println!("violation: {v}");
            }
            println!("reduction: {}", reduction.kind);
            if let Some(note) = &reduction.note {
                println!("note: {note}");
            }
            for w in pic
                .warnings
                .iter()
                .chain(twin_depth_warnings(&pic, &verdict).iter())
            {
                println!("warning: {w}");
            }
            Ok(if verdict.semistable {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Picture { input } => {
            let spec = read_spec(&input)?;
            let pic = build_cluster_picture(&spec.branch)?;
            if spec.branch.genus_y == 0 {
                println!(
                    "warning: genus_Y = 0 is outside the semi-stability criterion; the combinatorics below is still well-defined"
                );
            }
            println!("cluster picture: {}", pic.render_ascii()?);
            println!("clusters:");
            for id in pic.ids_canonical() {
                let c = pic.cluster(id);
                let flags = pic.classify(id);
                let mut tags = Vec::new();
                if flags.principal {
                    tags.push("principal");
                }
                if flags.twin {
                    tags.push("twin");
                }
                if flags.uebereven {
                    tags.push("uebereven");
                } else if flags.even {
                    tags.push("even");
                }
                println!(
                    "  {{{}}} depth {} v {}{}{}",
                    pic.canonical_id(id),
                    c.depth,
                    pic.v_of(id),
                    if tags.is_empty() { "" } else { " " },
                    tags.join(" ")
                );
            }
            match build_disc_collection(&pic) {
                Ok(dc) => {
                    println!("disc tree:");
                    print!("{}", dc.tree().render_text(&dc, &pic));
                }
                Err(e) => println!("disc tree: unavailable ({e})"),
            }
            for w in &pic.warnings {
                println!("warning: {w}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { input, dot } => {
            let spec = read_spec(&input)?;
            let pic = build_cluster_picture(&spec.branch)?;
            let verdict = check_semistable(&pic, &spec.galois, &spec.branch)?;
            if !verdict.semistable {
                return Err(Error::NotSemistable(verdict.violations));
            }
            let g = build_dual_graph(&pic)?;
            println!("vertices:");
            for v in &g.vertices {
                println!("  {}", v.name);
            }
            println!("chains:");
            for c in &g.chains {
                println!(
                    "  {}: {} -- {} length {}",
                    c.id, g.vertices[c.a].name, g.vertices[c.b].name, c.length
                );
            }
            println!("betti: {}", g.betti());
            if let Some(path) = dot {
                std::fs::write(&path, g.export_dot())
                    .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
                println!("dot written to {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tamagawa {
            input,
            max_enum,
            algebraic,
        } => {
            let spec = read_spec(&input)?;
            let options = PipelineOptions {
                max_enum,
                allow_algebraic: algebraic,
            };
            let detail = tamagawa_detailed(&spec, &options)?;
            let factors = detail
                .invariant_factors
                .iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>();
            println!(
                "Phi = {}",
                if factors.is_empty() {
                    "trivial".to_string()
                } else {
                    factors.join(" x ")
                }
            );
            println!("action on Phi = {}", detail.action_on_phi.display());
            println!("fixed = {}", detail.tamagawa);
            Ok(ExitCode::SUCCESS)
        }
        Command::Volume {
            input,
            q,
            dim,
            a0,
            conductor,
            json,
            max_enum,
            algebraic,
        } => {
            let spec = read_spec(&input)?;
            let options = PipelineOptions {
                max_enum,
                allow_algebraic: algebraic,
            };
            let detail = tamagawa_detailed(&spec, &options)?;
            let conductor: BigRational = conductor
                .parse()
                .map_err(|_| Error::BadRational(conductor.clone()))?;
            let normalization = NormalizationInputs::new(q, dim, a0, conductor)?;
            let report = VolumeReport::from_detail(&detail, Some(&normalization));
            if json {
                println!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
                for w in &detail.warnings {
                    println!("warning: {w}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
