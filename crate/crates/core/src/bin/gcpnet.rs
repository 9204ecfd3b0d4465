use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use gcpnet::flip::{
    classify_outcome, dominance_classes, dominance_search, find_cycle, find_optima, flip_digraph,
    improving_flips, relation, Condensation,
};
use gcpnet::gcp::{GcpNet, Vars};
use gcpnet::io::{
    classes_to_dot, dependencies_to_dot, flips_to_dot, parse_gcp, parse_outcome, parse_plan,
    parse_sequence, parse_strips, serialize_gcp_document, serialize_plan, serialize_sequence,
    serialize_strips, NetDocument, Record,
};
use gcpnet::logic::Outcome;
use gcpnet::reductions::{
    acyclicity_to_consistency, counter_reduction, cp_consistency_reduction, lift_to_cpnet,
    strips_to_gcp, theta1, theta2, theta3, theta3_literal, to_single_effect,
};
use gcpnet::strips::{execute_plan, find_action_cycle, plan_exists, Plan, StripsInstance};
use gcpnet::{gen, verify, Error, Limits};

#[derive(Parser)]
#[command(name = "gcpnet", version, about = "Dominance, consistency and optimality queries on GCP-nets, and STRIPS reductions")]
struct Cli {
    /// Print one JSON object instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,

    /// Cap every exhaustive procedure at this many variables.
    #[arg(long, global = true, value_name = "N")]
    limit_n: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local consistency, local completeness and CP-net status.
    Check { net: PathBuf },
    /// Is there an improving sequence from ALPHA to BETA?
    Dominance { net: PathBuf, alpha: String, beta: String },
    /// Does ALPHA dominate itself?
    SelfDominance { net: PathBuf, alpha: String },
    /// How ALPHA and BETA compare under dominance.
    Relation { net: PathBuf, alpha: String, beta: String },
    /// Search for an improving cycle.
    Consistency { net: PathBuf },
    /// The optimality notions that hold for ALPHA.
    Classify { net: PathBuf, alpha: String },
    /// All optimal outcomes.
    Optima { net: PathBuf },
    /// Dominance classes and the order between them.
    Classes { net: PathBuf },
    /// Search for a shortest plan.
    Plan { instance: PathBuf },
    /// Search for a state the actions can leave and return to.
    Acyclic { instance: PathBuf },
    /// Apply a reduction and print the resulting net or instance.
    Reduce {
        #[command(subcommand)]
        reduction: Reduction,
    },
    /// Map a plan across a STRIPS reduction.
    MapPlan {
        reduction: PlanReduction,
        instance: PathBuf,
        plan: PathBuf,
        /// Map a plan of the reduced instance back to the original.
        #[arg(long)]
        backward: bool,
    },
    /// Map an improving sequence across the lift to a CP-net.
    MapSequence {
        net: PathBuf,
        sequence: PathBuf,
        /// Map a sequence of the lifted net back to the original.
        #[arg(long)]
        backward: bool,
    },
    /// Print a graph in DOT format.
    ExportDot { graph: Graph, net: PathBuf },
    /// Run the built-in property checks on random instances.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum Reduction {
    /// Counter construction: a plan exists iff the goal is reachable by an acyclic action set.
    Counter { instance: PathBuf },
    /// Rewrite every action into single-effect actions.
    Se { instance: PathBuf },
    /// Rules of a single-effect instance, with the endpoints as header comments.
    ToGcp { instance: PathBuf },
    /// Consistency net of the single-effect rewrite of the actions.
    AcyclicToGcp { instance: PathBuf },
    /// CP-net over doubled variables equivalent for dominance.
    Lift { net: PathBuf },
    /// CP-net that is consistent iff NET is.
    CpConsistency { net: PathBuf },
    /// Self-dominance of BETA⁺ decides dominance of BETA over other outcomes.
    Theta1 { net: PathBuf, beta: String },
    /// Strict dominance and incomparability gadget for ALPHA.
    Theta2 { net: PathBuf, alpha: String },
    /// Has a dominating outcome iff BETA ≺ ALPHA.
    Theta3 {
        net: PathBuf,
        alpha: String,
        beta: String,
        /// Build without renaming BETA to all-positive first.
        #[arg(long)]
        literal: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanReduction {
    Counter,
    Se,
}

#[derive(Clone, Copy, ValueEnum)]
enum Graph {
    Flips,
    Classes,
    Deps,
}

enum Output {
    Record(Record),
    Text(String),
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Capacity(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => Failure::Capacity(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_net(path: &Path) -> Run<GcpNet> {
    parse_gcp(&read(path)?).map_err(|e| located(path, e))
}

fn load_instance(path: &Path) -> Run<StripsInstance> {
    parse_strips(&read(path)?).map_err(|e| located(path, e))
}

fn located(path: &Path, e: Error) -> Failure {
    match e {
        Error::Capacity { .. } => e.into(),
        _ => Failure::Input(format!("{}: {e}", path.display())),
    }
}

fn outcome(src: &str, vars: &Vars) -> Run<Outcome> {
    parse_outcome(src, vars).map_err(|e| Failure::Input(format!("outcome `{src}`: {e}")))
}

fn outcomes(seq: &[Outcome], vars: &Vars) -> Value {
    seq.iter().map(|o| vars.outcome_string(o)).collect::<Vec<_>>().into()
}

/// Confirms a witness before it is printed.
fn revalidate_sequence(net: &GcpNet, seq: &[Outcome]) -> Run<()> {
    for w in seq.windows(2) {
        if !improving_flips(net, &w[0])?.iter().any(|f| f.to == w[1]) {
            return Err(Failure::Internal(format!(
                "witness step {} -> {} is not an improving flip",
                net.outcome_string(&w[0]),
                net.outcome_string(&w[1])
            )));
        }
    }
    Ok(())
}

fn revalidate_plan(inst: &StripsInstance, plan: &Plan) -> Run<()> {
    let trace = execute_plan(inst, plan)?;
    if !trace.reaches_goal || !trace.irreducible {
        return Err(Failure::Internal("witness plan does not re-execute to the goal".into()));
    }
    Ok(())
}

fn dominance_record(net: &GcpNet, a: &Outcome, b: &Outcome, limits: &Limits) -> Run<Record> {
    let s = dominance_search(net, a, b, limits)?;
    let mut r = Record::new();
    r.push("verdict", s.witness.is_some());
    if let Some(seq) = &s.witness {
        revalidate_sequence(net, seq)?;
        r.push("witness", outcomes(seq, net.vars()));
    }
    r.push("expanded", s.expanded);
    Ok(r)
}

fn net_output(net: &GcpNet, comments: Vec<String>) -> Output {
    Output::Text(serialize_gcp_document(&NetDocument {
        comments,
        net: net.clone(),
    }))
}

fn class_members(c: &Condensation, class: usize, vars: &Vars) -> Value {
    c.members(class).map(|o| vars.outcome_string(&o)).collect::<Vec<_>>().into()
}

fn run(cli: Cli) -> Run<Output> {
    let limits = cli.limit_n.map(Limits::with_all).unwrap_or_default();
    let lim = &limits;
    let mut r = Record::new();
    match cli.command {
        Command::Check { net } => {
            let net = load_net(&net)?;
            r.push("vars", net.num_vars())
                .push("rules", net.rules().len())
                .push("conjunctive", net.is_conjunctive())
                .push("locally_consistent", net.is_locally_consistent(lim)?)
                .push("locally_complete", net.is_locally_complete(lim)?)
                .push("cpnet", net.is_cpnet(lim)?);
        }
        Command::Dominance { net, alpha, beta } => {
            let net = load_net(&net)?;
            let (a, b) = (outcome(&alpha, net.vars())?, outcome(&beta, net.vars())?);
            r = dominance_record(&net, &a, &b, lim)?;
        }
        Command::SelfDominance { net, alpha } => {
            let net = load_net(&net)?;
            let a = outcome(&alpha, net.vars())?;
            r = dominance_record(&net, &a, &a, lim)?;
        }
        Command::Relation { net, alpha, beta } => {
            let net = load_net(&net)?;
            let (a, b) = (outcome(&alpha, net.vars())?, outcome(&beta, net.vars())?);
            r.push("verdict", relation(&net, &a, &b, lim)?.as_str());
        }
        Command::Consistency { net } => {
            let net = load_net(&net)?;
            let s = find_cycle(&net, lim)?;
            r.push("verdict", if s.witness.is_some() { "inconsistent" } else { "consistent" });
            if let Some(cycle) = &s.witness {
                revalidate_sequence(&net, cycle)?;
                r.push("witness", outcomes(cycle, net.vars()));
            }
            r.push("expanded", s.expanded);
        }
        Command::Classify { net, alpha } => {
            let net = load_net(&net)?;
            let a = outcome(&alpha, net.vars())?;
            let f = classify_outcome(&net, &a, lim)?;
            r.push("weakly_non_dominated", f.weakly_non_dominated)
                .push("non_dominated", f.non_dominated)
                .push("dominating", f.dominating)
                .push("strongly_dominating", f.strongly_dominating);
        }
        Command::Optima { net } => {
            let net = load_net(&net)?;
            let o = find_optima(&net, lim)?;
            let v = net.vars();
            r.push("consistent", o.consistent)
                .push("classes", o.num_classes)
                .push("weakly_non_dominated", outcomes(&o.weakly_non_dominated, v))
                .push("non_dominated", outcomes(&o.non_dominated, v))
                .push("dominating", outcomes(&o.dominating, v))
                .push("strongly_dominating", outcomes(&o.strongly_dominating, v));
        }
        Command::Classes { net } => {
            let net = load_net(&net)?;
            let c = dominance_classes(&net, lim)?;
            let v = net.vars();
            let members: Vec<Value> = (0..c.num_classes()).map(|i| class_members(&c, i, v)).collect();
            let edges: Vec<String> = c.edges().map(|(a, b)| format!("{a}->{b}")).collect();
            r.push("classes", c.num_classes())
                .push("members", members)
                .push("edges", edges)
                .push("maximal", c.maximal_classes());
        }
        Command::Plan { instance } => {
            let inst = load_instance(&instance)?;
            let s = plan_exists(&inst, lim)?;
            r.push("verdict", s.witness.is_some());
            if let Some(plan) = &s.witness {
                revalidate_plan(&inst, plan)?;
                r.push("witness", inst.plan_names(plan));
            }
            r.push("expanded", s.expanded);
        }
        Command::Acyclic { instance } => {
            let inst = load_instance(&instance)?;
            let s = find_action_cycle(inst.action_set(), lim)?;
            r.push("verdict", s.witness.is_none());
            if let Some(c) = &s.witness {
                r.push("witness", outcomes(&c.states, inst.vars()))
                    .push("plan", inst.plan_names(&c.plan));
            }
            r.push("expanded", s.expanded);
        }
        Command::Reduce { reduction } => return reduce(reduction, lim),
        Command::MapPlan {
            reduction,
            instance,
            plan,
            backward,
        } => {
            let inst = load_instance(&instance)?;
            let text = read(&plan)?;
            let (target, mapped) = match reduction {
                PlanReduction::Counter => {
                    let red = counter_reduction(&inst)?;
                    if backward {
                        let p = parse_plan(&text, &red.instance).map_err(|e| located(&plan, e))?;
                        let back = red.backward_plan(&p);
                        (inst, back)
                    } else {
                        let p = parse_plan(&text, &inst).map_err(|e| located(&plan, e))?;
                        let fwd = red.forward_plan(&inst, &p)?;
                        (red.instance, fwd)
                    }
                }
                PlanReduction::Se => {
                    let red = to_single_effect(&inst)?;
                    if backward {
                        let p = parse_plan(&text, &red.instance).map_err(|e| located(&plan, e))?;
                        let back = red.backward_plan(&p);
                        (inst, back)
                    } else {
                        let p = parse_plan(&text, &inst).map_err(|e| located(&plan, e))?;
                        let fwd = red.forward_plan(&p);
                        (red.instance, fwd)
                    }
                }
            };
            let trace = execute_plan(&target, &mapped)?;
            if cli.json {
                r.push("plan", target.plan_names(&mapped))
                    .push("reaches_goal", trace.reaches_goal)
                    .push("irreducible", trace.irreducible);
            } else {
                return Ok(Output::Text(serialize_plan(&mapped, &target)));
            }
        }
        Command::MapSequence {
            net,
            sequence,
            backward,
        } => {
            let net = load_net(&net)?;
            let lift = lift_to_cpnet(&net, lim)?;
            let text = read(&sequence)?;
            let (from, to) = if backward { (&lift.net, &net) } else { (&net, &lift.net) };
            let seq = parse_sequence(&text, from.vars()).map_err(|e| located(&sequence, e))?;
            let mapped = if backward { lift.unlift_sequence(&seq) } else { lift.lift_sequence(&seq) };
            if cli.json {
                r.push("sequence", outcomes(&mapped, to.vars()));
            } else {
                return Ok(Output::Text(serialize_sequence(&mapped, to.vars())));
            }
        }
        Command::ExportDot { graph, net } => {
            let net = load_net(&net)?;
            let dot = match graph {
                Graph::Flips => flips_to_dot(&flip_digraph(&net, lim)?, net.vars()),
                Graph::Classes => classes_to_dot(&dominance_classes(&net, lim)?, net.vars(), 8),
                Graph::Deps => dependencies_to_dot(&net.dependency_graph(), net.vars()),
            };
            return Ok(Output::Text(dot));
        }
        Command::Selftest { seed, cases } => r = selftest(seed, cases, lim),
    }
    Ok(Output::Record(r))
}

fn reduce(reduction: Reduction, lim: &Limits) -> Run<Output> {
    Ok(match reduction {
        Reduction::Counter { instance } => {
            let red = counter_reduction(&load_instance(&instance)?)?;
            Output::Text(serialize_strips(&red.instance))
        }
        Reduction::Se { instance } => {
            let red = to_single_effect(&load_instance(&instance)?)?;
            Output::Text(serialize_strips(&red.instance))
        }
        Reduction::ToGcp { instance } => {
            let (net, init, goal) = strips_to_gcp(&load_instance(&instance)?)?;
            let v = net.vars();
            net_output(
                &net,
                vec![
                    format!("init: {}", v.outcome_string(&init)),
                    format!("goal: {}", v.outcome_string(&goal)),
                ],
            )
        }
        Reduction::AcyclicToGcp { instance } => {
            let inst = load_instance(&instance)?;
            net_output(&acyclicity_to_consistency(inst.action_set())?, vec![])
        }
        Reduction::Lift { net } => {
            let lift = lift_to_cpnet(&load_net(&net)?, lim)?;
            net_output(&lift.net, vec![])
        }
        Reduction::CpConsistency { net } => {
            net_output(&cp_consistency_reduction(&load_net(&net)?, lim)?, vec![])
        }
        Reduction::Theta1 { net, beta } => {
            let h = load_net(&net)?;
            let b = outcome(&beta, h.vars())?;
            let e = theta1(&h, &b)?;
            let v = e.net.vars();
            net_output(
                &e.net,
                vec![
                    format!("fresh: {}", v.name(e.y)),
                    format!("beta+: {}", v.outcome_string(&e.plus(&b))),
                ],
            )
        }
        Reduction::Theta2 { net, alpha } => {
            let h = load_net(&net)?;
            let a = outcome(&alpha, h.vars())?;
            let e = theta2(&h, &a)?;
            let v = e.net.vars();
            net_output(
                &e.net,
                vec![
                    format!("fresh: {}", v.name(e.y)),
                    format!("alpha+: {}", v.outcome_string(&e.plus(&a))),
                    format!("alpha-: {}", v.outcome_string(&e.minus(&a))),
                ],
            )
        }
        Reduction::Theta3 {
            net,
            alpha,
            beta,
            literal,
        } => {
            let h = load_net(&net)?;
            let (a, b) = (outcome(&alpha, h.vars())?, outcome(&beta, h.vars())?);
            let e = if literal { theta3_literal(&h, &a, &b)? } else { theta3(&h, &a, &b)? };
            let v = e.net.vars();
            net_output(
                &e.net,
                vec![
                    format!("fresh: {}", v.name(e.y)),
                    format!("alpha-: {}", v.outcome_string(&e.minus(&a))),
                ],
            )
        }
    })
}

fn selftest(seed: u64, cases: usize, lim: &Limits) -> Record {
    let reach = |n: &GcpNet| verify::engine_reach(n, lim);
    let mut rng = gen::rng(seed);
    let mut failures: Vec<String> = Vec::new();
    let note = |failures: &mut Vec<String>, name: &str, c: verify::Check| {
        if let Err(m) = c {
            failures.push(format!("{name}: {m}"));
        }
    };
    let mut probes = verify::GadgetProbes::default();
    for _ in 0..cases {
        let n = 1 + cases % 3;
        let phi = gen::random_formula(&mut rng, &(0..n).collect::<Vec<_>>(), 3);
        note(&mut failures, "formula gadget", verify::formula_gadget(&phi, &gen::var_names(n), lim));
        let net = gen::random_gcp_net(&mut rng, 3, 6);
        note(&mut failures, "consistency implies local", verify::consistency_implies_local(&net, &reach, lim));
        note(&mut failures, "local non-dominance", verify::local_non_dominance(&net, &reach, lim));
        let pe = gen::random_strips(&mut rng, 3, 3, false);
        note(&mut failures, "single-effect witnesses", verify::single_effect_witnesses(&pe, &Plan(vec![]), lim));
        let se = gen::random_strips(&mut rng, 3, 3, true);
        note(&mut failures, "actions as rules", verify::actions_as_rules(&se, &reach, lim));
        let c = gen::random_locally_consistent_net(&mut rng, 2, 5);
        note(&mut failures, "lift", verify::lift_properties(&c, &reach, lim));
        let h = gen::random_consistent_cpnet(&mut rng, 2, 1);
        match verify::gadget_properties(&h, &reach, lim) {
            Ok(p) => probes.merge(p),
            Err(m) => failures.push(format!("gadgets: {m}")),
        }
        note(
            &mut failures,
            "closing action",
            verify::closing_action(&gen::random_acyclic_strips(&mut rng, 3, 3), lim),
        );
    }
    let mut r = Record::new();
    r.push("verdict", if failures.is_empty() { "pass" } else { "fail" })
        .push("seed", seed)
        .push("cases", cases)
        .push("failures", failures)
        .push(
            "probe_unnormalized_theta3",
            format!(
                "{}/{} disagree",
                probes.unnormalized_theta3.disagreements, probes.unnormalized_theta3.cases
            ),
        )
        .push(
            "probe_theta3_consistent",
            format!(
                "{}/{} inconsistent",
                probes.theta3_consistent.disagreements, probes.theta3_consistent.cases
            ),
        );
    r
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(Output::Record(r)) => {
            print!("{}", if json { r.to_json() } else { r.to_text() });
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            if json {
                let mut r = Record::new();
                r.push("text", t);
                print!("{}", r.to_json());
            } else {
                print!("{t}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Input(m) => (2, m),
                Failure::Capacity(m) => (3, m),
                Failure::Internal(m) => (1, format!("internal error: {m}")),
            };
            eprintln!("gcpnet: {msg}");
            ExitCode::from(code)
        }
    }
}
