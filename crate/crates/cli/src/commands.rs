use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use gainflow::cnf::CnfFormula;
use gainflow::embedding::verify_rotation;
use gainflow::generate::{generate, Generated, GeneratorKind};
use gainflow::graph::{UEdge, UndirectedGraph};
use gainflow::io::{
    cnf_to_dot, network_to_dot, paft_to_dot, parse_cnf, parse_flow, parse_network, parse_paft,
    write_cnf, write_flow, write_network, write_network_with_notes, write_paft, ParseError,
};
use gainflow::network::{flow_value, validate_flow, AdditiveNetwork, Objective};
use gainflow::paft::{degree_reduce, PaftInstance, ReductionStep};
use gainflow::rational::{format_rational, parse_rational, Rational};
use gainflow::reductions::{
    paft_to_network, plain_transit, sampled_losses, sat_target, sat_to_network, super_sink,
    super_source, verify_crossing_gadget, verify_reduction, GadgetParams, ReductionInput,
    VerifyOptions,
};
use gainflow::solvers::maxflow::{max_flow, MaxFlowError, MaxFlowOptions};
use gainflow::solvers::oracle::{paft_oracle, sat_oracle, PaftVerdict, SatVerdict};
use gainflow::solvers::shortest::{
    shortest_path_default_seed, shortest_path_with_budget, ShortestPathError, DEFAULT_SEARCH_BUDGET,
};
use gainflow::threshold::{threshold_table, Reach, ThresholdError};

use crate::report::Report;
use crate::{
    AnyInput, Command, GenCommand, KindArg, ObjectiveArg, OracleCommand, Outcome, ReduceCommand,
    Status, VerifyCommand,
};

type Run = Result<Outcome, Outcome>;

fn fail(status: Status, error: &str, message: impl ToString) -> Outcome {
    let mut r = Report::new();
    r.set("error", error).set("message", message.to_string());
    Outcome::new(status, r)
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| {
        let mut o = fail(Status::Usage, "io", e);
        o.report.set("file", path.display().to_string());
        o
    })
}

fn parse_failure(path: &Path, e: ParseError) -> Outcome {
    let mut r = Report::new();
    r.set("error", "parse")
        .set("file", path.display().to_string())
        .set("line", e.line)
        .set("column", e.column)
        .set("message", e.message);
    Outcome::new(Status::Usage, r)
}

fn load_network(path: &Path) -> Result<AdditiveNetwork, Outcome> {
    parse_network(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn load_paft(path: &Path) -> Result<PaftInstance, Outcome> {
    parse_paft(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn load_cnf(path: &Path) -> Result<CnfFormula, Outcome> {
    parse_cnf(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, Outcome> {
    parse_rational(text)
        .map_err(|e| fail(Status::Usage, "usage", format!("--{name} `{text}`: {e}")))
}

fn gadget_params(b: &str) -> Result<GadgetParams, Outcome> {
    GadgetParams::new(rational_arg("b", b)?).map_err(|e| fail(Status::Usage, "usage", e))
}

/// `GAINFLOW_BUDGET` caps branch-and-bound nodes and path-search nodes.
fn budget() -> Result<Option<usize>, Outcome> {
    match std::env::var("GAINFLOW_BUDGET") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            fail(
                Status::Usage,
                "usage",
                format!("GAINFLOW_BUDGET `{v}` is not a count"),
            )
        }),
        Err(_) => Ok(None),
    }
}

fn verify_options(candidates: usize) -> Result<VerifyOptions, Outcome> {
    let mut o = VerifyOptions {
        max_flow: MaxFlowOptions {
            max_candidates: candidates,
            ..MaxFlowOptions::default()
        },
        path_search_budget: DEFAULT_SEARCH_BUDGET,
    };
    if let Some(b) = budget()? {
        o.max_flow.max_nodes = b;
        o.path_search_budget = b;
    }
    Ok(o)
}

/// Resolves `--source`/`--sink`, falling back to the network's only one.
fn terminal(net: &AdditiveNetwork, given: Option<&str>, sinks: bool) -> Result<usize, Outcome> {
    let role = if sinks { "sink" } else { "source" };
    match given {
        Some(id) => net.vertex(&id.into()).ok_or_else(|| {
            fail(
                Status::Usage,
                "usage",
                format!("unknown {role} vertex `{id}`"),
            )
        }),
        None => {
            let set = if sinks { net.sinks() } else { net.sources() };
            match set.iter().collect::<Vec<_>>()[..] {
                [&v] => Ok(v),
                _ => Err(fail(
                    Status::Usage,
                    "usage",
                    format!("network declares {} {role}s; pass --{role}", set.len()),
                )),
            }
        }
    }
}

fn cycle_failure(e: ThresholdError) -> Outcome {
    let mut r = Report::new();
    match e {
        ThresholdError::PositiveGainCycle { vertex } => {
            r.set("error", "positive-gain-cycle")
                .set("vertex", vertex.as_str());
        }
        ThresholdError::UnknownTarget(id) => {
            r.set("error", "usage")
                .set("message", format!("unknown target `{id}`"));
            return Outcome::new(Status::Usage, r);
        }
    }
    Outcome::new(Status::Negative, r)
}

fn ids<'a>(it: impl IntoIterator<Item = &'a gainflow::id::Id>) -> Value {
    Value::Array(
        it.into_iter()
            .map(|i| Value::String(i.to_string()))
            .collect(),
    )
}

fn with_artifact(mut o: Outcome, text: String) -> Outcome {
    o.artifact = Some(text);
    o
}

pub fn run(command: Command) -> (Outcome, Option<PathBuf>) {
    let out = match &command {
        Command::Maxflow { out, .. } | Command::ExportDot { out, .. } => out.clone(),
        Command::Reduce(
            ReduceCommand::Degree { out, .. }
            | ReduceCommand::Paft { out, .. }
            | ReduceCommand::Sat { out, .. },
        ) => out.clone(),
        Command::Gen(
            GenCommand::PaftGrid { out, .. }
            | GenCommand::Cnf { out, .. }
            | GenCommand::Network { out, .. },
        ) => out.clone(),
        _ => None,
    };
    let result = match command {
        Command::Threshold {
            network,
            source,
            sink,
        } => threshold(&network, source.as_deref(), sink.as_deref()),
        Command::ShortestPath {
            network,
            source,
            sink,
            seed,
        } => shortest(
            &network,
            source.as_deref(),
            sink.as_deref(),
            seed.as_deref(),
        ),
        Command::Maxflow {
            network,
            objective,
            max_candidates,
            allow_cycles,
            out,
        } => maxflow(
            &network,
            objective,
            max_candidates,
            allow_cycles,
            out.is_some(),
        ),
        Command::Reduce(r) => reduce(r),
        Command::Oracle(o) => oracle(o),
        Command::Verify(v) => verify(v),
        Command::Gen(g) => gen(g),
        Command::ExportDot {
            input, reduced, b, ..
        } => export_dot(input, reduced, &b),
    };
    (result.unwrap_or_else(|e| e), out)
}

fn reach(r: &Reach) -> Value {
    match r {
        Reach::Finite(t) => Value::String(format_rational(t)),
        Reach::Unreachable => Value::String("unreachable".into()),
    }
}

fn threshold(path: &Path, source: Option<&str>, sink: Option<&str>) -> Run {
    let net = load_network(path)?;
    let t = terminal(&net, sink, true)?;
    let table = threshold_table(&net, t).map_err(cycle_failure)?;
    let mut r = Report::new();
    r.set("sink", net.vertex_id(t).as_str());
    match source {
        Some(id) => {
            let s = net.vertex(&id.into()).ok_or_else(|| {
                fail(
                    Status::Usage,
                    "usage",
                    format!("unknown source vertex `{id}`"),
                )
            })?;
            r.set("source", id).set("T", reach(table.get(s)));
            let status = if table.get(s).finite().is_some() {
                Status::Ok
            } else {
                Status::Negative
            };
            Ok(Outcome::new(status, r))
        }
        None => {
            let all: Map<String, Value> = table
                .by_id(&net)
                .into_iter()
                .map(|(k, v)| (k.to_string(), reach(v)))
                .collect();
            r.set("T", Value::Object(all));
            Ok(Outcome::new(Status::Ok, r))
        }
    }
}

fn shortest(path: &Path, source: Option<&str>, sink: Option<&str>, seed: Option<&str>) -> Run {
    let net = load_network(path)?;
    let s = terminal(&net, source, false)?;
    let t = terminal(&net, sink, true)?;
    let budget = budget()?.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let result = match seed {
        Some(q) => shortest_path_with_budget(&net, s, t, &rational_arg("seed", q)?, budget),
        None => shortest_path_default_seed(&net, s, t),
    };
    let mut r = Report::new();
    r.set("source", net.vertex_id(s).as_str())
        .set("sink", net.vertex_id(t).as_str());
    match result {
        Ok(best) => {
            r.set("verdict", "feasible")
                .set("seed", format_rational(&best.seed))
                .set("cost", format_rational(&best.cost))
                .set("path", ids(best.path.edge_ids(&net)))
                .set("feasible_paths", best.feasible_paths);
            Ok(Outcome::new(Status::Ok, r))
        }
        Err(ShortestPathError::NoFeasiblePath) => {
            r.set("verdict", "no-feasible-path");
            Ok(Outcome::new(Status::Negative, r))
        }
        Err(ShortestPathError::SeedRequired { threshold }) => {
            r.set("verdict", "seed-required")
                .set("T", format_rational(&threshold));
            Ok(Outcome::new(Status::Negative, r))
        }
        Err(ShortestPathError::Threshold(e)) => Err(cycle_failure(e)),
        Err(e @ ShortestPathError::BudgetExceeded(_)) => Err(fail(Status::Budget, "budget", e)),
        Err(e) => Err(fail(Status::Usage, "usage", e)),
    }
}

fn maxflow_failure(e: MaxFlowError) -> Outcome {
    match e {
        MaxFlowError::TooManyCandidates { .. } | MaxFlowError::NodeBudget(_) => {
            fail(Status::Budget, "budget", e)
        }
        MaxFlowError::Lp(gainflow::lp::LpError::IterationLimit(_)) => {
            fail(Status::Budget, "budget", e)
        }
        _ => fail(Status::Negative, "solver", e),
    }
}

fn maxflow(
    path: &Path,
    objective: ObjectiveArg,
    candidates: usize,
    allow_cycles: bool,
    to_file: bool,
) -> Run {
    let net = load_network(path)?;
    if !allow_cycles {
        for &t in net.sinks() {
            threshold_table(&net, t).map_err(cycle_failure)?;
        }
    }
    let objective = match objective {
        ObjectiveArg::In => Objective::InFlow,
        ObjectiveArg::Out => Objective::OutFlow,
    };
    let options = verify_options(candidates)?.max_flow;
    let res = max_flow(&net, objective, &options).map_err(maxflow_failure)?;
    let mut r = Report::new();
    let flow: Map<String, Value> = res
        .flow
        .iter()
        .map(|(e, v)| {
            (
                net.edge(e).id.to_string(),
                Value::String(format_rational(v)),
            )
        })
        .collect();
    r.set(
        "objective",
        match objective {
            Objective::InFlow => "in",
            Objective::OutFlow => "out",
        },
    )
    .set("value", format_rational(&res.value))
    .set("attained", res.attained)
    .set("supremum", res.supremum.as_ref().map(format_rational))
    .set("flow", Value::Object(flow))
    .set("nodes", res.stats.nodes)
    .set("lps", res.stats.lps)
    .set("candidates", res.stats.candidates);
    let o = Outcome::new(Status::Ok, r);
    Ok(if to_file {
        with_artifact(o, write_flow(&net, &res.flow))
    } else {
        o
    })
}

fn step(s: &ReductionStep) -> String {
    match s {
        ReductionStep::Isolated(v) => format!("isolated:{v}"),
        ReductionStep::Pendant(v) => format!("pendant:{v}"),
        ReductionStep::ForbiddenPair(v) => format!("forbidden-pair:{v}"),
        ReductionStep::Smoothed { vertex, new_edge } => format!("smoothed:{vertex}:{new_edge}"),
        ReductionStep::LoopDropped(v) => format!("loop-dropped:{v}"),
    }
}

fn network_summary(r: &mut Report, net: &AdditiveNetwork) {
    r.set("vertices", net.vertex_count())
        .set("edges", net.edge_count())
        .set(
            "sources",
            ids(net.sources().iter().map(|&v| net.vertex_id(v))),
        )
        .set("sinks", ids(net.sinks().iter().map(|&v| net.vertex_id(v))));
}

fn reduce(cmd: ReduceCommand) -> Run {
    let mut r = Report::new();
    match cmd {
        ReduceCommand::Degree { paft, .. } => {
            let inst = load_paft(&paft)?;
            let (reduced, steps) = degree_reduce(&inst);
            r.set("vertices", reduced.graph().vertices.len())
                .set("edges", reduced.graph().edges.len())
                .set(
                    "steps",
                    Value::Array(steps.iter().map(|s| step(s).into()).collect()),
                );
            Ok(with_artifact(
                Outcome::new(Status::Ok, r),
                write_paft(&reduced),
            ))
        }
        ReduceCommand::Paft { paft, b, .. } => {
            let params = gadget_params(&b)?;
            let (inst, steps) = degree_reduce(&load_paft(&paft)?);
            let (net, origin) =
                paft_to_network(&inst, &params).map_err(|e| fail(Status::Usage, "reduction", e))?;
            r.set("b", format_rational(params.b()))
                .set("degree_steps", steps.len());
            network_summary(&mut r, &net);
            Ok(with_artifact(
                Outcome::new(Status::Ok, r),
                write_network_with_notes(&net, &origin.notes),
            ))
        }
        ReduceCommand::Sat { cnf, .. } => {
            let f = load_cnf(&cnf)?;
            let (net, origin) =
                sat_to_network(&f).map_err(|e| fail(Status::Usage, "reduction", e))?;
            let target = format_rational(&sat_target(&f));
            r.set("target", target.clone());
            network_summary(&mut r, &net);
            let mut notes = origin.notes.clone();
            notes.push(format!("in-flow target {target}"));
            Ok(with_artifact(
                Outcome::new(Status::Ok, r),
                write_network_with_notes(&net, &notes),
            ))
        }
    }
}

fn oracle(cmd: OracleCommand) -> Run {
    let mut r = Report::new();
    match cmd {
        OracleCommand::Paft { paft } => {
            let inst = load_paft(&paft)?;
            match paft_oracle(&inst) {
                PaftVerdict::ValidPath(p) => {
                    let g = inst.graph();
                    r.set("verdict", "valid-path")
                        .set("path", ids(p.iter().map(|&e| &g.edges[e].id)));
                    Ok(Outcome::new(Status::Ok, r))
                }
                PaftVerdict::NoValidPath => {
                    r.set("verdict", "no-valid-path");
                    Ok(Outcome::new(Status::Negative, r))
                }
            }
        }
        OracleCommand::Sat { cnf } => {
            let f = load_cnf(&cnf)?;
            match sat_oracle(&f).map_err(|e| fail(Status::Budget, "budget", e))? {
                SatVerdict::Assignment(a) => {
                    let lits: Vec<Value> = a
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| json!(if v { i as i64 + 1 } else { -(i as i64 + 1) }))
                        .collect();
                    r.set("verdict", "satisfiable").set("assignment", lits);
                    Ok(Outcome::new(Status::Ok, r))
                }
                SatVerdict::Unsatisfiable => {
                    r.set("verdict", "unsatisfiable");
                    Ok(Outcome::new(Status::Negative, r))
                }
            }
        }
    }
}

fn verify(cmd: VerifyCommand) -> Run {
    match cmd {
        VerifyCommand::Reduction { kind, paft, cnf, b } => {
            let options = verify_options(MaxFlowOptions::default().max_candidates)?;
            let report = match (kind, paft, cnf) {
                (None | Some(KindArg::Paft), Some(p), None) => {
                    let params = gadget_params(&b)?;
                    let (inst, _) = degree_reduce(&load_paft(&p)?);
                    verify_reduction(
                        ReductionInput::Paft {
                            instance: &inst,
                            params: &params,
                        },
                        &options,
                    )
                }
                (None | Some(KindArg::Sat), None, Some(c)) => {
                    let f = load_cnf(&c)?;
                    verify_reduction(ReductionInput::Sat { formula: &f }, &options)
                }
                _ => {
                    return Err(fail(
                        Status::Usage,
                        "usage",
                        "--kind does not match the input flag",
                    ))
                }
            };
            let report = report.map_err(|e| {
                if e.is_budget() {
                    fail(Status::Budget, "budget", e)
                } else {
                    fail(Status::Usage, "reduction", e)
                }
            })?;
            let mut v = serde_json::to_value(&report).expect("report serializes");
            let obj = v.as_object_mut().expect("report is a struct");
            let mut r = Report::new();
            // `measure` is reported as `value`.
            for key in [
                "kind",
                "equivalent",
                "measure",
                "target",
                "supremum",
                "oracle_positive",
                "reduction_positive",
                "digest",
                "oracle_certificate",
                "reduction_certificate",
                "counterexample",
                "counterexample_valid",
            ] {
                let name = if key == "measure" { "value" } else { key };
                r.set(name, obj.remove(key).unwrap_or(Value::Null));
            }
            let status = if report.equivalent {
                Status::Ok
            } else {
                Status::Negative
            };
            Ok(Outcome::new(status, r))
        }
        VerifyCommand::Embedding { paft, network } => {
            let (graph, rotation) = match (paft, network) {
                (Some(p), _) => {
                    let inst = load_paft(&p)?;
                    (inst.graph().clone(), inst.rotation().cloned())
                }
                (None, Some(n)) => {
                    let net = load_network(&n)?;
                    let graph = UndirectedGraph {
                        vertices: net.vertices().to_vec(),
                        edges: net
                            .edges()
                            .iter()
                            .map(|e| UEdge {
                                id: e.id.clone(),
                                a: e.tail,
                                b: e.head,
                            })
                            .collect(),
                    };
                    (graph, net.rotation().map(|r| r.to_vec()))
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            let rotation = rotation
                .ok_or_else(|| fail(Status::Usage, "usage", "instance has no rotation system"))?;
            let e = verify_rotation(&graph, &rotation)
                .map_err(|e| fail(Status::Usage, "embedding", e))?;
            let mut r = Report::new();
            r.set("planar", e.planar)
                .set("genus", e.genus)
                .set("faces", e.faces)
                .set("components", e.components)
                .set("vertices", graph.vertices.len())
                .set("edges", graph.edges.len());
            Ok(Outcome::new(
                if e.planar {
                    Status::Ok
                } else {
                    Status::Negative
                },
                r,
            ))
        }
        VerifyCommand::Flow { network, flow } => {
            let net = load_network(&network)?;
            let f = parse_flow(&read(&flow)?, &net).map_err(|e| parse_failure(&flow, e))?;
            let v = validate_flow(&net, &f).map_err(|e| fail(Status::Usage, "usage", e))?;
            let mut r = Report::new();
            let conservation: Vec<Value> = v
                .conservation
                .iter()
                .map(|c| {
                    json!({
                        "vertex": net.vertex_id(c.vertex).as_str(),
                        "in": format_rational(&c.inflow),
                        "out": format_rational(&c.outflow),
                    })
                })
                .collect();
            r.set("valid", v.is_clean())
                .set(
                    "in_flow",
                    format_rational(&flow_value(&net, &f, Objective::InFlow)),
                )
                .set(
                    "out_flow",
                    format_rational(&flow_value(&net, &f, Objective::OutFlow)),
                )
                .set(
                    "capacity_violations",
                    ids(v.capacity.iter().map(|&e| &net.edge(e).id)),
                )
                .set("conservation_violations", conservation);
            Ok(Outcome::new(
                if v.is_clean() {
                    Status::Ok
                } else {
                    Status::Negative
                },
                r,
            ))
        }
        VerifyCommand::Gadget { b } => {
            let params = gadget_params(&b)?;
            let crossing =
                verify_crossing_gadget(&params).map_err(|e| fail(Status::Usage, "reduction", e))?;
            let mut r = Report::new();
            let mut plain_ok = true;
            let mut plain = Vec::new();
            for x in sampled_losses() {
                let entering = params.b() + Rational::from_integer(1.into()) - &x;
                let got = plain_transit(&params, &entering)
                    .map_err(|e| fail(Status::Usage, "reduction", e))?;
                let want_cost = params.b() * &x;
                let ok = got
                    .as_ref()
                    .is_some_and(|(exit, cost)| *exit == entering && *cost == want_cost);
                plain_ok &= ok;
                plain.push(json!({
                    "x": format_rational(&x),
                    "exit": got.as_ref().map(|g| format_rational(&g.0)),
                    "cost": got.as_ref().map(|g| format_rational(&g.1)),
                    "expected_cost": format_rational(&want_cost),
                    "pass": ok,
                }));
            }
            let rows = serde_json::to_value(&crossing.rows).expect("rows serialize");
            r.set("b", format_rational(params.b()))
                .set("pass", plain_ok && crossing.pass)
                .set("plain_pass", plain_ok)
                .set("crossing_pass", crossing.pass)
                .set("plain", plain)
                .set("crossing", rows);
            Ok(Outcome::new(
                if plain_ok && crossing.pass {
                    Status::Ok
                } else {
                    Status::Negative
                },
                r,
            ))
        }
    }
}

fn gen(cmd: GenCommand) -> Run {
    let (kind, seed) = match cmd {
        GenCommand::PaftGrid {
            width,
            height,
            density,
            seed,
            ..
        } => (
            GeneratorKind::PaftGrid {
                width,
                height,
                forbid_density: density,
            },
            seed,
        ),
        GenCommand::Cnf {
            vars,
            clauses,
            seed,
            ..
        } => (GeneratorKind::RandomCnf { vars, clauses }, seed),
        GenCommand::Network {
            n,
            m,
            gain_min,
            gain_max,
            seed,
            ..
        } => (
            GeneratorKind::RandomNetwork {
                n,
                m,
                gain_range: (gain_min, gain_max),
            },
            seed,
        ),
    };
    let generated = generate(&kind, seed).map_err(|e| fail(Status::Usage, "usage", e))?;
    let mut r = Report::new();
    r.set("seed", seed);
    let text = match generated {
        Generated::Paft(p) => {
            r.set("kind", "paft")
                .set("vertices", p.graph().vertices.len())
                .set("edges", p.graph().edges.len());
            write_paft(&p)
        }
        Generated::Cnf(f) => {
            r.set("kind", "cnf")
                .set("vars", f.num_vars())
                .set("clauses", f.clauses().len());
            write_cnf(&f)
        }
        Generated::Network(n) => {
            r.set("kind", "network");
            network_summary(&mut r, &n);
            write_network(&n)
        }
    };
    Ok(with_artifact(Outcome::new(Status::Ok, r), text))
}

fn export_dot(input: AnyInput, reduced: bool, b: &str) -> Run {
    let mut r = Report::new();
    let dot = match (input.network, input.paft, input.cnf) {
        (Some(n), _, _) => {
            if reduced {
                return Err(fail(
                    Status::Usage,
                    "usage",
                    "--reduced needs a PAFT or CNF input",
                ));
            }
            network_to_dot(&load_network(&n)?, None)
        }
        (_, Some(p), _) => {
            let inst = load_paft(&p)?;
            if reduced {
                let params = gadget_params(b)?;
                let (inst, _) = degree_reduce(&inst);
                let (net, origin) = paft_to_network(&inst, &params)
                    .map_err(|e| fail(Status::Usage, "reduction", e))?;
                r.set("source", super_source(&inst).as_str())
                    .set("sink", super_sink(&inst).as_str());
                network_to_dot(&net, Some(&origin))
            } else {
                paft_to_dot(&inst)
            }
        }
        (_, _, Some(c)) => {
            let f = load_cnf(&c)?;
            if reduced {
                let (net, origin) =
                    sat_to_network(&f).map_err(|e| fail(Status::Usage, "reduction", e))?;
                network_to_dot(&net, Some(&origin))
            } else {
                cnf_to_dot(&f)
            }
        }
        (None, None, None) => unreachable!("clap requires one input"),
    };
    r.set("format", "dot").set("lines", dot.lines().count());
    Ok(with_artifact(Outcome::new(Status::Ok, r), dot))
}
