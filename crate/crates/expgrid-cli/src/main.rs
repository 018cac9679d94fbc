//! Command-line front end: every library operation on file-based instances,
//! JSON results on stdout, one-line human summaries on stderr.
//!
//! Exit status: 0 on success, 1 when a check genuinely fails (a rejected
//! coloring, a failing suite, an impossible refinement), 2 on malformed
//! input. Outputs are byte-identical across runs for identical inputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use expgrid::coloring::{
    brighten, n_bright_ball, synth_coloring, verify_coloring, ColorKind, FailReason, VerifyReport,
};
use expgrid::dynamics::MultiMap;
use expgrid::error::Error;
use expgrid::geometry::{GridSpace, PointId, Resolution, Subspace};
use expgrid::harness::{run_suite, GenModel, GenSpec};
use expgrid::io;
use expgrid::scalar::{rat_from_str, rat_to_string};

#[derive(Parser)]
#[command(name = "expgrid", version, about = "Multivalued maps on finite grids")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the fixed points of a map.
    Fix {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Write the orbit graph in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Shortest cycle length through a point.
    Period {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        point: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// All points lying on a cycle of length at most --max.
    PeriodicSet {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a coloring file against a map.
    ColorCheck {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Synthesize a plain coloring of a fixed-point-free map.
    ColorSynth {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Refine a verified plain coloring into a bright one.
    Brighten {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        /// Requested resolution, a rational like "1/2".
        #[arg(long)]
        eps: String,
    },
    /// Largest ball around a point that is an N-bright color.
    NbrightBall {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        point: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        eps: String,
    },
    /// Lift a map on the zero hyperplane to the whole grid.
    Extend {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Generate a seeded instance.
    Gen {
        /// uniform_k, fpf_uniform, planted_cycles, or geometric.
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 8)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cycle lengths for planted_cycles, comma-separated.
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<usize>,
    },
    /// Run a named property suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    payload: Value,
    human: String,
}

type CResult<T> = Result<T, Failure>;

/// Malformed input: exit 2 with the offending file and reason. The reason
/// strings from the parsers name the JSON field or entry at fault.
fn invalid(file: Option<&Path>, reason: impl Into<String>) -> Failure {
    let reason = reason.into();
    let mut err = Map::new();
    if let Some(f) = file {
        err.insert("file".into(), json!(f.display().to_string()));
    }
    err.insert("reason".into(), json!(reason));
    let human = match file {
        Some(f) => format!("{}: {reason}", f.display()),
        None => reason,
    };
    Failure {
        code: 2,
        payload: json!({ "error": Value::Object(err) }),
        human,
    }
}

/// A check that honestly failed: exit 1 with a witness payload.
fn rejected(payload: Value, human: String) -> Failure {
    Failure {
        code: 1,
        payload,
        human,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((payload, human)) => {
            print!("{}", io::render(&payload));
            eprintln!("{human}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            print!("{}", io::render(&f.payload));
            eprintln!("{}", f.human);
            ExitCode::from(f.code)
        }
    }
}

fn read_text(path: &Path) -> CResult<String> {
    fs::read_to_string(path).map_err(|e| invalid(Some(path), format!("cannot read: {e}")))
}

fn load_space(path: &Path) -> CResult<(Arc<GridSpace>, Subspace)> {
    io::parse_space(&read_text(path)?).map_err(|e| invalid(Some(path), e.to_string()))
}

fn load_map(path: &Path, space: &Arc<GridSpace>, x: &Subspace) -> CResult<MultiMap> {
    let f = io::parse_map(&read_text(path)?, space).map_err(|e| invalid(Some(path), e.to_string()))?;
    if f.domain().members() != x.members() {
        return Err(invalid(
            Some(path),
            "map domain disagrees with the space file's X",
        ));
    }
    Ok(f)
}

fn load_instance(space: &Path, map: &Path) -> CResult<MultiMap> {
    let (ambient, x) = load_space(space)?;
    load_map(map, &ambient, &x)
}

fn parse_eps(text: &str) -> CResult<Resolution> {
    rat_from_str(text)
        .and_then(Resolution::new)
        .map_err(|e| invalid(None, format!("--eps {text:?}: {e}")))
}

fn write_dot(f: &MultiMap, dot: Option<PathBuf>) -> CResult<()> {
    if let Some(path) = dot {
        fs::write(&path, f.orbit_graph().to_dot())
            .map_err(|e| invalid(Some(&path), format!("cannot write: {e}")))?;
    }
    Ok(())
}

/// Computation errors on well-formed files are still bad input (an index
/// out of range, a map that does not satisfy an operation's precondition).
fn op_err(e: Error) -> Failure {
    invalid(None, e.to_string())
}

fn report_value(r: &VerifyReport) -> Value {
    let set_failures: Vec<Value> = r
        .set_failures
        .iter()
        .map(|sf| {
            let (reason, depth) = match sf.reason {
                FailReason::OutsideDomain => ("outside_domain", None),
                FailReason::NotColor => ("not_color", None),
                FailReason::NotBright => ("not_bright", None),
                FailReason::NotNBright { n } => ("not_nbright", Some(n)),
            };
            let mut o = Map::new();
            o.insert("set_index".into(), json!(sf.set_index));
            o.insert("reason".into(), json!(reason));
            if let Some(n) = depth {
                o.insert("depth".into(), json!(n));
            }
            o.insert("witness".into(), json!(sf.witness.0));
            Value::Object(o)
        })
        .collect();
    json!({
        "uncovered": r.uncovered.iter().map(|p| p.0).collect::<Vec<_>>(),
        "set_failures": set_failures,
    })
}

fn run(cmd: Cmd) -> CResult<(Value, String)> {
    match cmd {
        Cmd::Fix { space, map, dot } => {
            let f = load_instance(&space, &map)?;
            write_dot(&f, dot)?;
            let fixed: Vec<usize> = f.fix_points().iter().map(|p| p.0).collect();
            let human = format!("{} fixed point(s)", fixed.len());
            Ok((json!({ "fixed_points": fixed }), human))
        }
        Cmd::Period {
            space,
            map,
            point,
            dot,
        } => {
            let f = load_instance(&space, &map)?;
            write_dot(&f, dot)?;
            let period = f.period_at(PointId(point)).map_err(op_err)?;
            let human = match period {
                Some(m) => format!("period at {point}: {m}"),
                None => format!("no cycle through {point}"),
            };
            Ok((json!({ "point": point, "period": period }), human))
        }
        Cmd::PeriodicSet {
            space,
            map,
            max,
            dot,
        } => {
            let f = load_instance(&space, &map)?;
            write_dot(&f, dot)?;
            let points: Vec<usize> = f
                .periodic_set(max)
                .map_err(op_err)?
                .iter()
                .map(|p| p.0)
                .collect();
            let human = format!("{} point(s) with period at most {max}", points.len());
            Ok((json!({ "max": max, "points": points }), human))
        }
        Cmd::ColorCheck {
            space,
            map,
            coloring,
        } => {
            let (ambient, x) = load_space(&space)?;
            let f = load_map(&map, &ambient, &x)?;
            let mut c = io::parse_coloring(&read_text(&coloring)?, ambient.len())
                .map_err(|e| invalid(Some(&coloring), e.to_string()))?;
            let report = verify_coloring(&f, &mut c);
            let payload = json!({ "ok": report.ok, "report": report_value(&report) });
            if report.ok {
                Ok((payload, "coloring verified".into()))
            } else {
                Err(rejected(
                    payload,
                    format!(
                        "coloring rejected: {} uncovered point(s), {} set failure(s)",
                        report.uncovered.len(),
                        report.set_failures.len()
                    ),
                ))
            }
        }
        Cmd::ColorSynth { space, map } => {
            let f = load_instance(&space, &map)?;
            match synth_coloring(&f) {
                Ok(c) => {
                    let human = format!("{} class(es)", c.sets().len());
                    Ok((io::coloring_to_value(&c), human))
                }
                Err(Error::NotFixedPointFree(w)) => Err(rejected(
                    json!({ "error": "map is not fixed-point free", "witness": w.0 }),
                    format!("no coloring: {w} is a fixed point"),
                )),
                Err(e) => Err(op_err(e)),
            }
        }
        Cmd::Brighten {
            space,
            map,
            coloring,
            eps,
        } => {
            let (ambient, x) = load_space(&space)?;
            let f = load_map(&map, &ambient, &x)?;
            let mut c = io::parse_coloring(&read_text(&coloring)?, ambient.len())
                .map_err(|e| invalid(Some(&coloring), e.to_string()))?;
            if c.kind() != ColorKind::Plain {
                return Err(invalid(
                    Some(&coloring),
                    "brighten expects a plain coloring",
                ));
            }
            let resolution = parse_eps(&eps)?;
            let report = verify_coloring(&f, &mut c);
            if !report.ok {
                return Err(rejected(
                    json!({ "ok": false, "report": report_value(&report) }),
                    "input coloring rejected".into(),
                ));
            }
            match brighten(&f, &c, &resolution) {
                Ok(out) => {
                    let steps: Vec<Value> = out
                        .state
                        .steps
                        .iter()
                        .map(|s| {
                            json!({
                                "k": s.k,
                                "candidates": s.candidates,
                                "chosen": s.subfamilies.len(),
                                "claims_ok": s.subfamilies.iter().all(|r| r.claim1_ok && r.claim2_ok),
                                "a1": s.a1_ok,
                                "a2": s.a2_ok,
                            })
                        })
                        .collect();
                    let payload = json!({
                        "achieved_eps": rat_to_string(out.achieved_eps.eps()),
                        "requested_eps": rat_to_string(resolution.eps()),
                        "coloring": io::coloring_to_value(&out.coloring),
                        "margin2": out.margin2.as_ref().map(rat_to_string),
                        "step0_intersection_empty": out.state.step0_intersection_empty,
                        "steps": steps,
                    });
                    let human = format!(
                        "{} bright set(s) at resolution {}",
                        out.coloring.sets().len(),
                        rat_to_string(out.achieved_eps.eps())
                    );
                    Ok((payload, human))
                }
                Err(Error::Unsatisfiable(msg)) => Err(rejected(
                    json!({ "error": msg }),
                    "no bright refinement".into(),
                )),
                Err(e) => Err(op_err(e)),
            }
        }
        Cmd::NbrightBall {
            space,
            map,
            point,
            n,
            eps,
        } => {
            let f = load_instance(&space, &map)?;
            let resolution = parse_eps(&eps)?;
            match n_bright_ball(&f, PointId(point), n, &resolution).map_err(op_err)? {
                Some(ball) => {
                    let payload = json!({
                        "ball": {
                            "members": ball.members.iter().map(|p| p.0).collect::<Vec<_>>(),
                            "radius": ball.radius.to_string(),
                            "radius2": rat_to_string(&ball.radius2),
                        }
                    });
                    let human = format!(
                        "ball of radius {} with {} point(s)",
                        ball.radius,
                        ball.members.len()
                    );
                    Ok((payload, human))
                }
                None => Err(rejected(
                    json!({ "ball": null }),
                    format!("no {n}-bright ball around {point}"),
                )),
            }
        }
        Cmd::Extend { space, map } => {
            let f = load_instance(&space, &map)?;
            let g = f.extend_map().map_err(op_err)?;
            let human = format!(
                "extended to a self-map on all {} point(s)",
                g.domain().members().len()
            );
            Ok((io::instance_to_value(&g), human))
        }
        Cmd::Gen {
            model,
            dim,
            size,
            k,
            seed,
            lengths,
        } => {
            let model = match model.as_str() {
                "uniform_k" => GenModel::UniformK,
                "fpf_uniform" => GenModel::FpfUniform,
                "planted_cycles" => GenModel::PlantedCycles(if lengths.is_empty() {
                    vec![3, 2]
                } else {
                    lengths
                }),
                "geometric" => GenModel::Geometric,
                other => return Err(invalid(None, format!("unknown model {other:?}"))),
            };
            let spec = GenSpec {
                model,
                dim,
                size,
                k,
                seed,
            };
            let f = spec.generate().map_err(op_err)?;
            let human = format!(
                "{} instance: {} point(s), |X| = {}",
                spec.model.name(),
                f.ambient().len(),
                f.domain().members().len()
            );
            Ok((io::fixture_to_value(&spec, &f), human))
        }
        Cmd::Verify {
            suite,
            budget,
            seed,
        } => {
            let report = run_suite(&suite, budget, seed).map_err(op_err)?;
            let human = format!(
                "suite {}: {}/{} passed",
                report.suite, report.passed, report.instances
            );
            let payload = serde_json::to_value(&report)
                .expect("reports are tree-shaped");
            if report.failed == 0 {
                Ok((payload, human))
            } else {
                Err(rejected(payload, human))
            }
        }
    }
}
