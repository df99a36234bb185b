//! Command-line entry point: group validation, orbit counting, cohomology
//! reports, zeta/Γ-factor identities, limit-set geometry, and Cuntz–Krieger
//! relation verification, with JSON/CSV/SVG emitters.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use schottky::error::SchottkyError;
use schottky::moebius::SchottkyGroup;
use schottky::{ck, cohomology, fractal, io as group_io, moebius, par, words, zeta};
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "schottky", version, about = "Schottky-group dynamics, mapping-torus cohomology, and arithmetic zeta identities")]
struct Cli {
    /// Seed echoed into reports (outputs are deterministic per seed)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (defaults to stdout)
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupSource {
    /// Builtin preset name (sym2 or sym3)
    #[arg(long, conflicts_with = "file")]
    preset: Option<String>,
    /// Path to a group-definition JSON file
    #[arg(long)]
    file: Option<PathBuf>,
}

impl GroupSource {
    fn resolve(&self) -> schottky::Result<(group_io::GroupDoc, SchottkyGroup)> {
        group_io::resolve_group(self.preset.as_deref(), self.file.as_deref())
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Group-definition handling
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Closed-orbit counting and listing
    Orbits {
        #[command(subcommand)]
        action: OrbitsAction,
    },
    /// Mapping-torus cohomology reports
    Cohomology {
        #[command(subcommand)]
        action: CohomologyAction,
    },
    /// Γ-factor, zeta, and torsion identities
    Zeta {
        #[command(subcommand)]
        action: ZetaAction,
    },
    /// Hausdorff dimension of the limit set
    Hausdorff {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Limit-set sample points
    LimitSet {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Period integrals of the Poincaré-series differentials
    Periods {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 6)]
        lmax: usize,
        #[arg(long, default_value_t = 512)]
        quadrature: usize,
    },
    /// Cuntz–Krieger relation verification
    Ck {
        #[command(subcommand)]
        action: CkAction,
    },
}

#[derive(Subcommand)]
enum GroupAction {
    /// Validate a group definition and report its marking
    Validate {
        #[command(flatten)]
        source: GroupSource,
    },
}

#[derive(Subcommand)]
enum OrbitsAction {
    /// Word, periodic-point, and primitive-orbit counts per length
    Count {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 8)]
        max_length: usize,
    },
    /// Primitive necklaces of one length, with geodesic data if a group is given
    List {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 3)]
        length: usize,
        #[command(flatten)]
        source: GroupSource,
    },
}

#[derive(Subcommand)]
enum CohomologyAction {
    /// Filtration ranks per level
    Ranks {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
    },
    /// Pairing table <chi_{n,k}, (g_j)^n>
    Pairing {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
    /// Embedding/equivariance report at one twist
    Maps {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        p: i64,
    },
    /// Commuting-square (duality diagram) report at one twist
    Diagram {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        p: i64,
    },
}

#[derive(Subcommand)]
enum ZetaAction {
    /// Γ-factor table with the duplication residual
    Gamma {
        #[arg(long, default_value_t = 0.3)]
        s_min: f64,
        #[arg(long, default_value_t = 6.0)]
        s_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// ζ_Φ closed form, volume, and eta invariant
    Phi {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
    },
    /// Two-path torsion identity residual
    Torsion {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
    },
    /// Truncated Selberg zeta product
    Selberg {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 5)]
        lmax: usize,
        /// Count each class and its inverse once instead of separately
        #[arg(long)]
        unoriented: bool,
    },
}

#[derive(Subcommand)]
enum CkAction {
    /// Verify the truncated Cuntz–Krieger relations
    Verify {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Measure for the numeric checks: uniform or ps (needs a group)
        #[arg(long, default_value = "uniform")]
        measure: String,
        #[command(flatten)]
        source: GroupSource,
    },
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn report(seed: u64, body: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("schema".to_string(), json!(1));
    obj.insert("seed".to_string(), json!(seed));
    if let Value::Object(map) = body {
        obj.extend(map);
    }
    Value::Object(obj)
}

fn run(cli: &Cli) -> schottky::Result<String> {
    let seed = cli.seed;
    let out = match &cli.command {
        Command::Group { action: GroupAction::Validate { source } } => {
            let (doc, group) = source.resolve()?;
            report(
                seed,
                json!({
                    "command": "group validate",
                    "label": doc.label,
                    "genus": group.genus,
                    "fuchsian": group.fuchsian_flag,
                    "circles": doc.circles,
                    "valid": true,
                }),
            )
            .to_string()
        }
        Command::Orbits { action: OrbitsAction::Count { genus, max_length } } => {
            let rows: Vec<Value> = (1..=*max_length)
                .map(|n| {
                    json!({
                        "length": n,
                        "reduced_words": words::count_words(*genus, n).to_string(),
                        "periodic_points": words::periodic_points(*genus, n).to_string(),
                        "primitive_orbits": words::primitive_orbits(*genus, n).to_string(),
                        "simplified_closed_form": words::simplified_closed_form(*genus, n).to_string(),
                        "closed_form_matches": words::simplified_closed_form(*genus, n)
                            == words::primitive_orbits(*genus, n),
                    })
                })
                .collect();
            report(seed, json!({ "command": "orbits count", "genus": genus, "rows": rows }))
                .to_string()
        }
        Command::Orbits { action: OrbitsAction::List { genus, length, source } } => {
            let group = if source.preset.is_some() || source.file.is_some() {
                Some(source.resolve()?.1)
            } else {
                None
            };
            let mut rows = Vec::new();
            for neck in words::enumerate_primitive_necklaces(*genus, *length) {
                let mut row = serde_json::Map::new();
                row.insert("letters".to_string(), json!(neck.letters));
                if let Some(group) = &group {
                    let m = moebius::word_to_matrix(group, &neck.window_word(0));
                    let fp = moebius::fixed_points(&m)?;
                    row.insert("multiplier_norm".to_string(), json!(fp.multiplier_norm));
                    row.insert("length".to_string(), json!(fp.multiplier_norm.ln()));
                }
                rows.push(Value::Object(row));
            }
            report(
                seed,
                json!({ "command": "orbits list", "genus": genus, "word_length": length, "classes": rows }),
            )
            .to_string()
        }
        Command::Cohomology { action: CohomologyAction::Ranks { genus, max_level } } => {
            let mut rows = Vec::new();
            for n in 1..=*max_level {
                let r = cohomology::filtration_rank(*genus, n)?;
                rows.push(serde_json::to_value(&r)?);
            }
            report(
                seed,
                json!({
                    "command": "cohomology ranks",
                    "genus": genus,
                    "rank_f0": 2 * genus,
                    "rows": rows,
                }),
            )
            .to_string()
        }
        Command::Cohomology { action: CohomologyAction::Pairing { genus, level } } => {
            let g = *genus;
            let n = *level;
            let mut table = Vec::new();
            for k in 0..2 * g {
                let chi = cohomology::chi_class(g, n, k);
                let mut row = Vec::new();
                for j in 0..2 * g {
                    let orbit = words::CyclicWord::new(g, vec![j; n])?;
                    row.push(cohomology::pairing(&chi.as_cochain(), &orbit).to_string());
                }
                table.push(json!(row));
            }
            report(
                seed,
                json!({ "command": "cohomology pairing", "genus": g, "level": n, "table": table }),
            )
            .to_string()
        }
        Command::Cohomology { action: CohomologyAction::Maps { genus, p } }
        | Command::Cohomology { action: CohomologyAction::Diagram { genus, p } } => {
            let r = cohomology::verify_duality(*genus, *p)?;
            let name = if matches!(
                cli.command,
                Command::Cohomology { action: CohomologyAction::Maps { .. } }
            ) {
                "cohomology maps"
            } else {
                "cohomology diagram"
            };
            report(
                seed,
                json!({ "command": name, "genus": genus, "twist": p, "report": serde_json::to_value(&r)? }),
            )
            .to_string()
        }
        Command::Zeta { action: ZetaAction::Gamma { s_min, s_max, steps, format } } => {
            let mut rows = Vec::new();
            for i in 0..*steps {
                let s = s_min + (s_max - s_min) * i as f64 / (*steps as f64 - 1.0).max(1.0);
                let sc = Complex64::new(s, 0.0);
                let gr = zeta::gamma_r_log(sc)?;
                let gc = zeta::gamma_c_log(sc)?;
                let dup = (gc - gr - zeta::gamma_r_log(sc + 1.0)?).norm();
                rows.push((s, gr, gc, dup));
            }
            if *format == Format::Csv {
                let mut text = String::from("s,log_gamma_r_re,log_gamma_c_re,duplication_residual\n");
                for (s, gr, gc, dup) in rows {
                    text.push_str(&format!("{s},{},{},{dup:e}\n", gr.re, gc.re));
                }
                text
            } else {
                let rows: Vec<Value> = rows
                    .into_iter()
                    .map(|(s, gr, gc, dup)| {
                        json!({
                            "s": s,
                            "log_gamma_r": complex_json(gr),
                            "log_gamma_c": complex_json(gc),
                            "duplication_residual": dup,
                        })
                    })
                    .collect();
                report(seed, json!({ "command": "zeta gamma", "rows": rows })).to_string()
            }
        }
        Command::Zeta { action: ZetaAction::Phi { genus, s } } => {
            let value = zeta::zeta_phi(*genus, Complex64::new(*s, 0.0))?;
            report(
                seed,
                json!({
                    "command": "zeta phi",
                    "genus": genus,
                    "s": s,
                    "zeta_phi": complex_json(value),
                    "volume": zeta::volume(*genus),
                    "eta_invariant": zeta::eta_invariant(*genus),
                }),
            )
            .to_string()
        }
        Command::Zeta { action: ZetaAction::Torsion { genus, s } } => {
            let residual = zeta::torsion_identity_residual(*genus, *s)?;
            report(
                seed,
                json!({
                    "command": "zeta torsion",
                    "genus": genus,
                    "s": s,
                    "residual": residual,
                    "euler_characteristic": 2 - 2 * (*genus as i64),
                }),
            )
            .to_string()
        }
        Command::Zeta { action: ZetaAction::Selberg { source, s, lmax, unoriented } } => {
            let (_, group) = source.resolve()?;
            let v = fractal::selberg_zeta(&group, *s, *lmax, !unoriented)?;
            report(
                seed,
                json!({
                    "command": "zeta selberg",
                    "s": s,
                    "lmax": lmax,
                    "oriented": !unoriented,
                    "log_value": v.log_value,
                    "tail_bound": v.tail_bound,
                }),
            )
            .to_string()
        }
        Command::Hausdorff { source, depth, tol } => {
            let (_, group) = source.resolve()?;
            let r = fractal::hausdorff_dim(&group, *depth, *tol)?;
            report(
                seed,
                json!({
                    "command": "hausdorff",
                    "depth": depth,
                    "tol": tol,
                    "estimate": r.estimate,
                    "coarser_estimate": r.coarser_estimate,
                    "gap": r.gap,
                }),
            )
            .to_string()
        }
        Command::LimitSet { source, depth, format } => {
            let (doc, group) = source.resolve()?;
            let points = fractal::limit_set_sample(&group, *depth)?;
            match format {
                Format::Csv => {
                    let mut text = String::from("re,im\n");
                    for p in points {
                        text.push_str(&format!("{},{}\n", p.re, p.im));
                    }
                    text
                }
                Format::Svg => limit_set_svg(&doc, &points),
                Format::Json => {
                    let pts: Vec<Value> = points.iter().map(|&p| complex_json(p)).collect();
                    report(
                        seed,
                        json!({ "command": "limit-set", "depth": depth, "points": pts }),
                    )
                    .to_string()
                }
            }
        }
        Command::Periods { source, lmax, quadrature } => {
            let (_, group) = source.resolve()?;
            let table = fractal::period_table(&group, *lmax, *quadrature)?;
            let two_pi = 2.0 * std::f64::consts::PI;
            let mut max_dev: f64 = 0.0;
            let n = 2 * group.genus;
            for (j, row) in table.iter().enumerate() {
                for (k, &v) in row.iter().enumerate() {
                    let expected = if j == k {
                        Complex64::new(0.0, two_pi)
                    } else if j == (k + group.genus) % n {
                        Complex64::new(0.0, -two_pi)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    max_dev = max_dev.max((v - expected).norm());
                }
            }
            let rows: Vec<Value> = table
                .iter()
                .map(|row| Value::Array(row.iter().map(|&v| complex_json(v)).collect()))
                .collect();
            report(
                seed,
                json!({
                    "command": "periods",
                    "lmax": lmax,
                    "quadrature": quadrature,
                    "table": rows,
                    "max_deviation_from_winding_table": max_dev,
                }),
            )
            .to_string()
        }
        Command::Ck { action: CkAction::Verify { genus, depth, measure, source } } => {
            let group_built;
            let group = match measure.as_str() {
                "uniform" => None,
                "ps" => {
                    group_built = source.resolve()?.1;
                    Some(&group_built)
                }
                other => {
                    return Err(SchottkyError::GroupFileInvalid(format!(
                        "unknown measure '{other}' (expected uniform or ps)"
                    )))
                }
            };
            let r = ck::verify_relations(*genus, *depth, group)?;
            report(seed, json!({ "command": "ck verify", "report": serde_json::to_value(&r)? }))
                .to_string()
        }
    };
    Ok(out)
}

/// Unit-scaled scatter of the sample points with the pairing circles.
fn limit_set_svg(doc: &group_io::GroupDoc, points: &[Complex64]) -> String {
    let xs: Vec<f64> = doc.circles.iter().map(|c| c.center_re).collect();
    let rmax = doc.circles.iter().map(|c| c.radius).fold(0.0, f64::max);
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * rmax;
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 * rmax;
    let size = 800.0;
    let scale = size / (hi - lo);
    let map = |x: f64, y: f64| ((x - lo) * scale, size / 2.0 - y * scale);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    );
    for c in &doc.circles {
        let (cx, cy) = map(c.center_re, c.center_im);
        svg.push_str(&format!(
            "  <circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#888\"/>\n",
            c.radius * scale
        ));
    }
    for p in points {
        let (cx, cy) = map(p.re, p.im);
        svg.push_str(&format!(
            "  <circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"1\" fill=\"#c00\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn main() {
    par::configure_threads_from_env();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("Io: {e}");
                    std::process::exit(1);
                }
            } else {
                println!("{text}");
            }
        }
        Err(e) => {
            eprintln!("{e}");
            let code = match e {
                SchottkyError::NonConvergence(_) | SchottkyError::TailNotSmall(_) => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}
