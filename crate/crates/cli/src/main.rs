use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use motivic_core::artin::{solve_coalgebra_morphisms, verify_mcffe};
use motivic_core::finset::{automorphism_group, count_automorphisms_by_search, enumerate_diagrams};
use motivic_core::galois::verify_descent;
use motivic_core::hypercube::{build_kappa, ks_hocolim, punctured_cube_hocolim, CubeVertex};
use motivic_core::monad::verify_m_identity;
use motivic_core::resolution::verify_mdffe;
use motivic_core::{ArtinComonoid, ChainComplex, Cover, CubeDiagram, FinDiagram, FiniteGroup, GSet};

const DEFAULT_MAX_SIZE: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "motivic-kit", version, about = "Exact checks for comonoids on finite sets and their resolutions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Largest set size accepted by any command.
    #[arg(long, env = "MOTIVIC_KIT_MAX_SIZE", default_value_t = DEFAULT_MAX_SIZE, global = true)]
    max_size: usize,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Isomorphism classes of diagrams S1 -> ... -> Sk with |Si| <= bounds[i].
    EnumerateDiagrams {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<usize>,
    },
    /// Automorphism group of a diagram read from JSON.
    Aut {
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Comonoid morphisms between the canonical comonoids on sets of size x and y.
    SolveComonoid {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        /// Also print every matrix.
        #[arg(long)]
        show: bool,
    },
    /// Galois descent: fixed comonoid morphisms against equivariant maps.
    GaloisFixed {
        /// c1..c6, v4, s3, or a path to a group table JSON.
        #[arg(long)]
        group: String,
        /// G-set JSON files; if absent, every action of every size up to --max-set.
        #[arg(long, requires = "y")]
        x: Option<PathBuf>,
        #[arg(long, requires = "x")]
        y: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_set: usize,
    },
    /// Multisets of k-diagrams against (k+1)-diagrams, class by class.
    VerifyMonad {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<usize>,
    },
    /// Homology of the homotopy colimit of a cover or cube diagram.
    Hocolim {
        #[arg(long)]
        diagram: PathBuf,
        /// Cone off into an ambient set of this many points (literal covers).
        #[arg(long)]
        ambient: Option<usize>,
    },
    /// The labeled compactification diagram.
    Kappa {
        #[arg(long, value_delimiter = ',')]
        components: Vec<String>,
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        dim: i64,
        /// Multiply everything by a further variety.
        #[arg(long)]
        cross: Option<String>,
        #[arg(long, default_value_t = 0, requires = "cross")]
        cross_dim: i64,
    },
    /// Comonoid morphisms against set maps.
    VerifyMcffe {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
    },
    /// Tower equalizer, algebra maps, transposed comonoid maps and set maps.
    VerifyMdffe {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
}

struct Outcome {
    text: String,
    json: serde_json::Value,
    pass: bool,
}

impl Outcome {
    fn new<T: Serialize>(text: String, value: &T, pass: bool) -> Result<Self> {
        Ok(Outcome {
            text,
            json: serde_json::to_value(value)?,
            pass,
        })
    }
}

fn check_sizes(max: usize, what: &str, sizes: &[usize]) -> Result<()> {
    if let Some(&s) = sizes.iter().find(|&&s| s > max) {
        bail!("{what}: size {s} exceeds the safety bound {max} (raise MOTIVIC_KIT_MAX_SIZE)");
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
}

fn named_group(name: &str) -> Result<FiniteGroup> {
    let lower = name.to_ascii_lowercase();
    if let Some(n) = lower.strip_prefix('c').and_then(|n| n.parse::<usize>().ok()) {
        if n == 0 {
            bail!("cyclic group of order 0");
        }
        return Ok(FiniteGroup::cyclic(n));
    }
    match lower.as_str() {
        "v4" => Ok(FiniteGroup::klein_four()),
        "s3" => Ok(FiniteGroup::symmetric3()),
        _ => read_json(Path::new(name)),
    }
}

fn diagram_line(d: &FinDiagram) -> String {
    let maps: Vec<String> = d.maps().iter().map(|m| format!("{:?}", m.values())).collect();
    format!("{:?} {}", d.sizes(), maps.join(" "))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let max = cli.max_size;
    match &cli.command {
        Command::EnumerateDiagrams { k, bounds } => {
            if bounds.len() != *k {
                bail!("--bounds needs {k} entries, got {}", bounds.len());
            }
            check_sizes(max, "bounds", bounds)?;
            #[derive(Serialize)]
            struct Row {
                sizes: Vec<usize>,
                maps: Vec<Vec<usize>>,
                aut_order: u64,
            }
            let rows: Vec<Row> = enumerate_diagrams(*k, bounds)
                .iter()
                .map(|d| Row {
                    sizes: d.sizes(),
                    maps: d.maps().iter().map(|m| m.values().to_vec()).collect(),
                    aut_order: automorphism_group(d).order,
                })
                .collect();
            let mut text = format!("{:<4} {:<28} {:>6}\n", "#", "class", "|Aut|");
            for (i, r) in rows.iter().enumerate() {
                let maps: Vec<String> = r.maps.iter().map(|m| format!("{m:?}")).collect();
                let class = format!("{:?} {}", r.sizes, maps.join(" "));
                text.push_str(&format!("{i:<4} {class:<28} {:>6}\n", r.aut_order));
            }
            text.push_str(&format!("{} classes", rows.len()));
            Outcome::new(text, &rows, true)
        }
        Command::Aut { diagram } => {
            let d: FinDiagram = read_json(diagram)?;
            check_sizes(max, "diagram", &d.sizes())?;
            let group = automorphism_group(&d);
            let search = count_automorphisms_by_search(&d);
            let mut text = format!("diagram {}\n", diagram_line(&d));
            for g in &group.generators {
                let comps: Vec<String> = g.components().iter().map(|c| format!("{:?}", c.values())).collect();
                text.push_str(&format!("generator {}\n", comps.join(" ")));
            }
            let pass = group.order == search;
            text.push_str(&format!(
                "|Aut| = {} (search {}), {}",
                group.order,
                search,
                if pass { "PASS" } else { "FAIL" }
            ));
            Outcome::new(text, &group, pass)
        }
        Command::SolveComonoid { x, y, show } => {
            check_sizes(max, "comonoid", &[*x, *y])?;
            let cx = ArtinComonoid::canonical_of_size(*x)?;
            let cy = ArtinComonoid::canonical_of_size(*y)?;
            let sols = solve_coalgebra_morphisms(&cx, &cy)?;
            let mut text = String::new();
            if *show {
                for s in &sols {
                    for r in 0..s.matrix.rows() {
                        let row: Vec<String> = s.matrix.row(r).iter().map(ToString::to_string).collect();
                        text.push_str(&format!("[{}]\n", row.join(" ")));
                    }
                    text.push('\n');
                }
            }
            text.push_str(&format!("|X|={x} |Y|={y}: {} morphisms", sols.len()));
            if *show {
                Outcome::new(text, &sols, true)
            } else {
                Outcome::new(text, &serde_json::json!({"x": x, "y": y, "count": sols.len()}), true)
            }
        }
        Command::GaloisFixed { group, x, y, max_set } => {
            let g = named_group(group)?;
            let pairs: Vec<(GSet, GSet)> = match (x, y) {
                (Some(x), Some(y)) => {
                    let (x, y): (GSet, GSet) = (read_json(x)?, read_json(y)?);
                    if x.group() != &g || y.group() != &g {
                        bail!("G-sets are not over the group {group}");
                    }
                    vec![(x, y)]
                }
                _ => {
                    check_sizes(max.min(4), "--max-set", &[*max_set])?;
                    let mut actions = Vec::new();
                    for n in 1..=*max_set {
                        actions.extend(GSet::all_actions(&g, n)?);
                    }
                    let mut pairs = Vec::new();
                    for a in &actions {
                        for b in &actions {
                            pairs.push((a.clone(), b.clone()));
                        }
                    }
                    pairs
                }
            };
            for (a, b) in &pairs {
                check_sizes(max, "G-set", &[a.size(), b.size()])?;
            }
            let reports = pairs
                .iter()
                .map(|(a, b)| verify_descent(a, b))
                .collect::<motivic_core::Result<Vec<_>>>()?;
            let pass = reports.iter().all(|r| r.pass);
            let failures = reports.iter().filter(|r| !r.pass).count();
            let text = format!(
                "group of order {}: {} pairs of G-sets, {} failures, {}",
                g.order(),
                reports.len(),
                failures,
                if pass { "PASS" } else { "FAIL" }
            );
            Outcome::new(text, &reports, pass)
        }
        Command::VerifyMonad { k, bounds } => {
            check_sizes(max, "bounds", bounds)?;
            let r = verify_m_identity(*k, bounds)?;
            Outcome::new(r.to_string(), &r, r.pass)
        }
        Command::Hocolim { diagram, ambient } => {
            let text = fs::read_to_string(diagram).with_context(|| format!("reading {}", diagram.display()))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", diagram.display()))?;
            let (cube, cover) = if value.get("points").is_some() {
                let cover: Cover = serde_json::from_value(value).context("invalid cover")?;
                check_sizes(max, "cover points", &[cover.points])?;
                (cover.to_cube()?, Some(cover))
            } else {
                let cube: CubeDiagram = serde_json::from_value(value).context("invalid cube diagram")?;
                (cube, None)
            };
            let total: ChainComplex = match ambient {
                None => punctured_cube_hocolim(&cube)?,
                Some(p) => {
                    let Some(cover) = &cover else {
                        bail!("--ambient needs a literal cover");
                    };
                    if *p != cover.points {
                        bail!("--ambient {p} differs from the cover's {} points", cover.points);
                    }
                    let amb = ChainComplex::concentrated(0, *p);
                    ks_hocolim(&amb, &cube, &cover.ambient_maps(&amb)?)?
                }
            };
            let dims = total.homology_dims();
            let parts: Vec<String> = dims
                .iter()
                .filter(|(&n, _)| n >= 0)
                .map(|(n, h)| format!("H{n}={h}"))
                .collect();
            let parts = if parts.is_empty() { vec!["H0=0".to_string()] } else { parts };
            let pass = total.is_valid();
            Outcome::new(parts.join(" "), &serde_json::json!({ "homology": dims, "complex": total }), pass)
        }
        Command::Kappa {
            components,
            ambient,
            dim,
            cross,
            cross_dim,
        } => {
            let components: Vec<String> = components.iter().filter(|c| !c.is_empty()).cloned().collect();
            let mut k = build_kappa(&components, ambient, *dim)?;
            if let Some(y) = cross {
                k = k.cross_with(y, *cross_dim);
            }
            let colim = k.annotated(k.motive(&CubeVertex::L).expect("l vertex"));
            let text = format!("{k}\nambient after annotation: {colim}");
            Outcome::new(text, &k, true)
        }
        Command::VerifyMcffe { x, y } => {
            check_sizes(max, "sets", &[*x, *y])?;
            let r = verify_mcffe(*x, *y)?;
            Outcome::new(r.to_string(), &r, r.pass)
        }
        Command::VerifyMdffe { x, y, bound } => {
            check_sizes(max, "sets", &[*x, *y, *bound])?;
            let r = verify_mdffe(*x, *y, *bound)?;
            Outcome::new(r.to_string(), &r, r.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Table => out.text,
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "pass": out.pass,
                    "report": out.json,
                }))
                .expect("serializable"),
            };
            let written = match &cli.output {
                Some(p) => fs::write(p, format!("{body}\n")).with_context(|| format!("writing {}", p.display())),
                None => {
                    println!("{body}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
