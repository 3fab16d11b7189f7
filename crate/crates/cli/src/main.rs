mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::Config;
use folmmp::exact::parse_rational;
use folmmp::germ::{parse_germ_file, GermFile, DEFAULT_DEGREE_CAP};
use folmmp::mmp::{
    automorphism_bound, automorphism_bound_from_floor, canonical_log, degree_bound_check,
    epsilon_canonical_model, eta_lc_report, run_adjoint_mmp, run_log, MMPOutcome, MMPResult, MMPStep,
};
use folmmp::quotient::{eigenvalue_set, quotient_sweep, sweep_tsv};
use folmmp::restree::{adjoint_lc_check, classify, seidenberg_reduce, AdjointVerdict};
use folmmp::surface::{emit_surface, parse_surface, FoliatedSurfaceModel};
use folmmp::{Error, Rational};

#[derive(Parser)]
#[command(
    name = "folmmp",
    version,
    about = "Singularities and the adjoint MMP for foliated surfaces"
)]
struct Cli {
    /// Machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// TOML file with epsilon, delta, search_depth and constants.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the singularity at the origin of a germ file.
    ClassifyGerm { file: PathBuf },
    /// Seidenberg reduction with the discrepancy ledger.
    Resolve {
        file: PathBuf,
        /// Write the tree in DOT format.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        max_depth: usize,
    },
    /// Decide (epsilon, delta)-adjoint log canonicity of a germ.
    AdjointCheck {
        file: PathBuf,
        #[arg(long, value_parser = rational)]
        epsilon: Option<Rational>,
        #[arg(long, value_parser = rational)]
        delta: Option<Rational>,
    },
    /// The eigenvalue set for a given epsilon'.
    Eigenvalues {
        #[arg(long, value_parser = rational)]
        epsilon: Rational,
    },
    /// Thresholds of the cyclic quotients 1/m(1,b) with the foliation by dx.
    QuotientThreshold {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        b: Option<u64>,
    },
    /// Adjoint MMP on a surface file.
    Mmp {
        #[command(subcommand)]
        command: MmpCommand,
    },
    /// Run the MMP, then contract the adjoint-trivial curves.
    CanonicalModel {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Arithmetic of the degree and automorphism bounds.
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
}

#[derive(Subcommand)]
enum MmpCommand {
    Run {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, value_parser = rational)]
    epsilon: Option<Rational>,
    /// Defaults to 0.
    #[arg(long, value_parser = rational)]
    delta: Option<Rational>,
    /// Write the JSON-lines run log.
    #[arg(long, value_name = "OUT")]
    log: Option<PathBuf>,
    /// Write the final surface file.
    #[arg(long, value_name = "OUT")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Degree of a leaf of genus g, with |mA| birational for A = K_F + tau K_X.
    Degree {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        m: u64,
        /// Defaults to the `tau` constant of the config.
        #[arg(long, value_parser = rational)]
        tau: Option<Rational>,
        /// A·L for the leaf L.
        #[arg(long, value_parser = rational)]
        leaf_degree: Rational,
        /// A².
        #[arg(long, value_parser = rational)]
        adjoint_square: Rational,
    },
    /// Order of an automorphism group from two volumes, or from one volume
    /// and the configured floor v(epsilon).
    Aut {
        #[arg(long, value_parser = rational)]
        vol_up: Rational,
        #[arg(long, value_parser = rational)]
        vol_down: Option<Rational>,
        /// Selects the `v` constant of the config.
        #[arg(long, value_parser = rational)]
        epsilon: Option<Rational>,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// 1 for malformed input, 2 for violated preconditions, 3 when the answer
/// is inconclusive or the catalogue is incomplete.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::UnsupportedVersion(_)
        | Error::InvalidInput(_)
        | Error::ZeroPolynomial => 1,
        Error::Inconclusive(_) | Error::CatalogueIncomplete(_) | Error::DepthExceeded(_) => 3,
        Error::Precondition(_)
        | Error::NotContractible(_)
        | Error::LatticeMismatch { .. }
        | Error::NonRationalPoint(_)
        | Error::NonIsolatedSingularities => 2,
    }
}

/// Output and exit status of a successful dispatch.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn read_germ(path: &Path) -> Result<GermFile, Error> {
    parse_germ_file(&read(path)?, DEFAULT_DEGREE_CAP)
}

fn read_surface(path: &Path) -> Result<FoliatedSurfaceModel, Error> {
    parse_surface(&read(path)?)
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match &cli.command {
        Command::ClassifyGerm { file } => {
            let g = read_germ(file)?;
            let class = classify(&g.germ);
            Ok(Output::ok(if cli.json {
                to_json(&json!({
                    "germ": g.germ.to_string(),
                    "class": class.name(),
                    "description": class.to_string(),
                    "detail": class,
                }))
            } else {
                format!("{class}\n")
            }))
        }
        Command::Resolve { file, dot, max_depth } => {
            let g = read_germ(file)?;
            let tree = seidenberg_reduce(&g.germ, *max_depth)?;
            if let Some(out) = dot {
                write(out, &tree.to_dot())?;
            }
            if cli.json {
                return Ok(Output::ok(to_json(&tree)));
            }
            let mut s = String::from("divisor\tcenter\tdepth\tiota\ta_fol\ta_var\tself_intersection\n");
            for d in &tree.divisors {
                let _ = writeln!(
                    s,
                    "E{}\tP{}\t{}\t{}\t{}\t{}\t{}",
                    d.index,
                    d.center,
                    tree.nodes[d.center].depth + 1,
                    d.iota,
                    d.a_fol,
                    d.a_var,
                    d.self_intersection
                );
            }
            Ok(Output::ok(s))
        }
        Command::AdjointCheck { file, epsilon, delta } => {
            let g = read_germ(file)?;
            let params = config.params(epsilon.clone(), delta.clone(), Rational::from_integer(0.into()))?;
            let verdict = adjoint_lc_check(&g.germ, &g.boundary, &params)?;
            let code = u8::from(matches!(verdict, AdjointVerdict::Inconclusive(_))) * 3;
            let text = if cli.json {
                to_json(&json!({ "params": params, "verdict": verdict.name(), "detail": verdict }))
            } else {
                match &verdict {
                    AdjointVerdict::Certified => format!(
                        "Certified: ({}, {})-adjoint log canonical\n",
                        params.epsilon, params.delta
                    ),
                    AdjointVerdict::Refuted(w) => {
                        let path: Vec<String> = w.path.iter().map(|p| p.to_string()).collect();
                        format!(
                            "Refuted: divisor at depth {} (path [{}]) with iota {}, a_fol {}, a_var {}, margin {}\n",
                            w.depth(),
                            path.join(", "),
                            w.iota,
                            w.a_fol,
                            w.a_var,
                            w.margin(&params.epsilon, &params.delta)
                        )
                    }
                    AdjointVerdict::Inconclusive(r) => format!("Inconclusive: {r}\n"),
                }
            };
            Ok(Output { text, code })
        }
        Command::Eigenvalues { epsilon } => {
            let set = eigenvalue_set(epsilon)?;
            if cli.json {
                return Ok(Output::ok(to_json(&set)));
            }
            let mut s = String::from("p\tq\n");
            for e in &set {
                let _ = writeln!(s, "{}\t{}", e.p, e.q);
            }
            Ok(Output::ok(s))
        }
        Command::QuotientThreshold { m, b } => {
            let rows = quotient_sweep(*m, *b)?;
            Ok(Output::ok(if cli.json {
                to_json(&rows)
            } else {
                sweep_tsv(&rows)
            }))
        }
        Command::Mmp {
            command: MmpCommand::Run { run: args },
        } => {
            let (model, result) = mmp(&config, args)?;
            if let Some(out) = &args.log {
                write(out, &run_log(&result))?;
            }
            if let Some(out) = &args.output {
                write(out, &emit_surface(&result.model))?;
            }
            let eta = eta_lc_report(&result.model, &result.epsilon, &result.delta)?;
            if cli.json {
                return Ok(Output::ok(to_json(&json!({ "result": result, "eta": eta }))));
            }
            let mut s = format!(
                "# {} with epsilon = {}, delta = {}; negativity relative to the curve catalogue\n",
                model.base.name(),
                result.epsilon,
                result.delta
            );
            write_steps(&mut s, &result.steps);
            let _ = writeln!(s, "outcome\t{}", describe_outcome(&result));
            let _ = writeln!(s, "rank\t{} -> {}", result.initial_rank, result.model.rank());
            let _ = writeln!(s, "eta_margin\t{}\t(bound {})", eta.margin, eta.bound);
            Ok(Output::ok(s))
        }
        Command::CanonicalModel { run: args } => {
            let (_, result) = mmp(&config, args)?;
            let params = config.params(
                args.epsilon.clone(),
                args.delta.clone(),
                Rational::from_integer(0.into()),
            )?;
            let canonical = epsilon_canonical_model(&result, &params)?;
            if let Some(out) = &args.log {
                write(out, &canonical_log(&result, &canonical))?;
            }
            if let Some(out) = &args.output {
                write(out, &emit_surface(&canonical.model))?;
            }
            let code = if canonical.positive_on_catalogue { 0 } else { 3 };
            if cli.json {
                return Ok(Output {
                    text: to_json(&json!({ "mmp": result, "canonical": canonical })),
                    code,
                });
            }
            let mut s = String::from("# mmp\n");
            write_steps(&mut s, &result.steps);
            s.push_str("# canonical model\n");
            write_steps(&mut s, &canonical.steps);
            let _ = writeln!(s, "rank\t{}", canonical.model.rank());
            let _ = writeln!(
                s,
                "adjoint class positive on catalogue\t{}",
                if canonical.positive_on_catalogue {
                    "yes"
                } else {
                    "no"
                }
            );
            Ok(Output { text: s, code })
        }
        Command::Bounds { command } => bounds(&config, command, cli.json),
    }
}

fn mmp(config: &Config, args: &RunArgs) -> Result<(FoliatedSurfaceModel, MMPResult), Error> {
    let model = read_surface(&args.file)?;
    let params = config.params(
        args.epsilon.clone(),
        args.delta.clone(),
        Rational::from_integer(0.into()),
    )?;
    let result = run_adjoint_mmp(&model, &params)?;
    Ok((model, result))
}

fn write_steps(s: &mut String, steps: &[MMPStep]) {
    for (i, st) in steps.iter().enumerate() {
        let _ = write!(
            s,
            "step {}\tcontract {}\t{}\tC^2 = {}\tdegree {} -> {}\t{}",
            i + 1,
            st.name,
            st.ray.name(),
            st.self_intersection,
            st.degree_before,
            st.degree_after,
            st.singular_point.kind
        );
        if let Some(t) = &st.perturbation {
            let _ = write!(s, "\tt = {t}");
        }
        let _ = writeln!(
            s,
            "\tannotations {}",
            if st.preserved() { "pass" } else { "FAIL" }
        );
    }
}

fn describe_outcome(r: &MMPResult) -> String {
    match &r.outcome {
        MMPOutcome::NefModel => "NefModel".into(),
        MMPOutcome::MoriFiberSpace { fibration: Some(f) } => {
            format!(
                "MoriFiberSpace over a curve, fiber {}",
                r.model.lattice.format_class(f)
            )
        }
        MMPOutcome::MoriFiberSpace { fibration: None } => "MoriFiberSpace over a point".into(),
        MMPOutcome::NotPseudoeffective { curve, point } => format!(
            "NotPseudoeffective: {} passes through the strictly log canonical point {point}",
            r.model.curves[*curve].name
        ),
    }
}

fn bounds(config: &Config, command: &BoundsCommand, json_out: bool) -> Result<Output, Error> {
    match command {
        BoundsCommand::Degree {
            g,
            m,
            tau,
            leaf_degree,
            adjoint_square,
        } => {
            let (tau, provenance) = match tau {
                Some(t) => (t.clone(), "command line".to_string()),
                None => {
                    let e = config.constants.lookup("tau", None).ok_or_else(|| {
                        Error::InvalidInput("--tau is required (flag or `tau` constant in the config)".into())
                    })?;
                    (e.value.clone(), e.provenance.clone())
                }
            };
            let r = degree_bound_check(*g, &tau, *m, leaf_degree, adjoint_square)?;
            if json_out {
                return Ok(Output::ok(to_json(
                    &json!({ "report": r, "tau_provenance": provenance }),
                )));
            }
            let mut s = String::new();
            let _ = writeln!(s, "tau\t{}\t({provenance})", r.tau);
            let _ = writeln!(s, "h0_lower(m)\t{}", r.sections);
            let _ = writeln!(s, "restriction(m)\t{}", r.restriction);
            let _ = writeln!(s, "m0\t{}", r.m0);
            let _ = writeln!(s, "h0_lower(m0)\t{}", r.sections_m0);
            let _ = writeln!(s, "restriction(m0)\t{}", r.restriction_m0);
            let _ = writeln!(s, "difference\t{}", r.difference);
            let _ = writeln!(s, "m0A-L effective\t{}", r.effective);
            let _ = writeln!(s, "A.L\t{}", r.leaf_degree);
            let _ = writeln!(s, "m0*A^2\t{}", r.bound);
            let _ = writeln!(s, "holds\t{}", r.holds);
            Ok(Output::ok(s))
        }
        BoundsCommand::Aut {
            vol_up,
            vol_down,
            epsilon,
        } => {
            let (bound, source) = match (vol_down, epsilon) {
                (Some(d), _) => (automorphism_bound(vol_up, d)?, format!("vol_down = {d}")),
                (None, eps) => {
                    let eps = eps.clone().or_else(|| config.epsilon.clone());
                    let e = config.constants.lookup("v", eps.as_ref()).ok_or_else(|| {
                        Error::InvalidInput("--vol-down or a `v` constant in the config is required".into())
                    })?;
                    (
                        automorphism_bound_from_floor(vol_up, &e.value)?,
                        format!("v = {} ({})", e.value, e.provenance),
                    )
                }
            };
            Ok(Output::ok(if json_out {
                to_json(&json!({ "bound": bound.to_string(), "source": source }))
            } else {
                format!("#G <= {bound}\t{source}\n")
            }))
        }
    }
}
