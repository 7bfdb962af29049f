//! `zariski` command-line driver.
//!
//! Reports go to stdout as JSON, a one-line summary goes to stderr.
//! Exit codes: 0 pass, 1 property fails, 2 parse error, 3 validation error,
//! 4 budget or fuel exhausted.

mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use inputs::{
    abelian_inputs, load_group, read_json, resolve_subgroup, split_elements, Failure,
};
use zariski::club::{reflection_construct, verify_witnesses, ReflectionConfig};
use zariski::group::spec::LoadedGroup;
use zariski::group::{
    is_normal, is_super_normal, ElementSyntax, FiniteGroup, Group, SuperNormalMethod,
};
use zariski::word::{abelian_reduce, parse_equation, solve_bruteforce, solve_linear, SolutionSet};
use zariski::zariski::{
    normalize, parse_expr, reflection_check, search_min_cover, verify_discreteness_cover,
    CoverCertificate, CoverError, CoverFailure,
};

#[derive(Parser)]
#[command(name = "zariski", version, about = "Equations, Zariski-closed sets and reflection checks in groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one elementary equation.
    Solve {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        eq: String,
    },
    /// Canonical form of a closed-set expression.
    Closure {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        expr: PathBuf,
        /// Element to test for membership; repeatable.
        #[arg(long)]
        query: Vec<String>,
    },
    /// Check a property; exit 0 when it holds and 1 when it fails.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Run the reflection construction and write its trace as JSON lines.
    Reflect {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        expr: PathBuf,
        /// Comma-separated seed elements.
        #[arg(long)]
        seed: String,
        /// Maximum number of rounds.
        #[arg(long, default_value_t = 64)]
        fuel: usize,
        /// Largest word length `n` used by the φ_k witnesses.
        #[arg(long = "max-n", default_value_t = 2)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a smallest discreteness cover certificate.
    CoverSearch {
        #[arg(long)]
        group: PathBuf,
        #[arg(long = "max-n", default_value_t = 1)]
        max_n: usize,
        /// Branch and bound node budget.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    Normal(SubgroupArgs),
    SuperNormal(SubgroupArgs),
    Reflection {
        #[command(flatten)]
        sub: SubgroupArgs,
        #[arg(long)]
        expr: PathBuf,
    },
    Cover {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Args)]
struct SubgroupArgs {
    #[arg(long)]
    group: PathBuf,
    /// `center`, `derived`, `trivial`, `whole` or comma-separated generators.
    #[arg(long)]
    subgroup: String,
}

/// A finished command: report, optional extra output, exit code and summary.
struct Outcome {
    /// `None` when the command already wrote its output to stdout.
    report: Option<Value>,
    code: u8,
    summary: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            if let Some(r) = o.report {
                println!("{r}");
            }
            eprintln!("{}", o.summary);
            ExitCode::from(o.code)
        }
        Err(f) => {
            let mut v = json!({"error": f.message, "exit_code": f.code});
            if let Some(p) = f.position {
                v["position"] = json!(p);
            }
            println!("{v}");
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Solve { group, eq } => cmd_solve(&load_group(&group)?, &eq),
        Command::Closure { group, expr, query } => cmd_closure(&load_group(&group)?, &read_json(&expr)?, &query),
        Command::Check(c) => match c {
            CheckCommand::Normal(s) => cmd_normal(&load_group(&s.group)?, &s.subgroup),
            CheckCommand::SuperNormal(s) => cmd_super_normal(&load_group(&s.group)?, &s.subgroup),
            CheckCommand::Reflection { sub, expr } => {
                cmd_check_reflection(&load_group(&sub.group)?, &sub.subgroup, &read_json(&expr)?)
            }
            CheckCommand::Cover { group, cert } => cmd_check_cover(&load_group(&group)?, &read_json(&cert)?),
        },
        Command::Reflect { group, expr, seed, fuel, max_n, out } => {
            let cfg = ReflectionConfig {
                fuel,
                max_word_n: max_n,
                ..ReflectionConfig::default()
            };
            cmd_reflect(&load_group(&group)?, &read_json(&expr)?, &seed, cfg, out)
        }
        Command::CoverSearch { group, max_n, budget, out } => cmd_cover_search(&load_group(&group)?, max_n, budget, out),
    }
}

fn elements_json<G: ElementSyntax>(g: &G, xs: &[G::Elem]) -> Value {
    Value::Array(xs.iter().map(|x| g.element_json(x)).collect())
}

fn cmd_solve(loaded: &LoadedGroup, text: &str) -> Result<Outcome, Failure> {
    match loaded {
        LoadedGroup::Finite(g) => {
            let eq = parse_equation(text, g).map_err(Failure::parse)?;
            let sols = solve_bruteforce(g, &eq);
            Ok(Outcome {
                summary: format!("{} solution(s)", sols.len()),
                report: Some(json!({"kind": "explicit", "solutions": elements_json(g, &sols), "count": sols.len()})),
                code: 0,
            })
        }
        _ => {
            let (amb, _, _) = abelian_inputs(loaded, None, &[], Some(text))?;
            let eq = amb.equation.clone().expect("equation requested");
            let g = &amb.target;
            let s = solve_linear(g, &abelian_reduce(g, &eq));
            let mut report = match &s {
                SolutionSet::Empty => json!({"kind": "empty"}),
                SolutionSet::All => json!({"kind": "all"}),
                SolutionSet::Coset(c) => json!({
                    "kind": "coset",
                    "kernel": c.kernel.k(),
                    "representative": amb.fmt(&c.representative),
                }),
                SolutionSet::Explicit(v) => json!({"kind": "explicit", "count": v.len()}),
            };
            if g.order().is_some_and(|o| o <= 1 << 16) {
                let sols = s.materialize(g);
                let brute = solve_bruteforce(g, &eq);
                report["solutions"] = Value::Array(sols.iter().map(|x| amb.fmt(x)).collect());
                report["bruteforce_agrees"] = json!(sols == brute);
            }
            let summary = match &s {
                SolutionSet::Empty => "no solutions".to_string(),
                SolutionSet::All => "every element is a solution".to_string(),
                SolutionSet::Coset(c) => format!("a coset of G[{}]", c.kernel.k()),
                SolutionSet::Explicit(v) => format!("{} solution(s)", v.len()),
            };
            Ok(Outcome { report: Some(report), code: 0, summary })
        }
    }
}

fn cmd_closure(loaded: &LoadedGroup, expr: &Value, queries: &[String]) -> Result<Outcome, Failure> {
    if let LoadedGroup::Finite(g) = loaded {
        let e = parse_expr(expr, g).map_err(Failure::expr)?;
        let set = e.denote(g);
        let mut q = serde_json::Map::new();
        for s in queries {
            let x = g
                .parse_element(s)
                .ok_or_else(|| Failure::validation(format!("unknown element {s:?}")))?;
            q.insert(s.clone(), json!(e.member(g, &x)));
        }
        return Ok(Outcome {
            summary: format!("closed set with {} element(s)", set.len()),
            report: Some(json!({"elements": elements_json(g, &set), "size": set.len(), "queries": q})),
            code: 0,
        });
    }
    let (amb, e, qs) = abelian_inputs(loaded, Some(expr), queries, None)?;
    let e = e.expect("expression requested");
    let g = &amb.target;
    let c = normalize(g, &e);
    let mut report = json!({"canonical": amb.canonical_json(&c)});
    if let Ok(all) = c.materialize(g) {
        if all.len() <= 1 << 12 {
            report["elements"] = Value::Array(all.iter().map(|x| amb.fmt(x)).collect());
            report["size"] = json!(all.len());
        }
    }
    let mut q = serde_json::Map::new();
    for (s, x) in queries.iter().zip(&qs) {
        q.insert(s.clone(), json!(c.member(g, x)));
    }
    report["queries"] = Value::Object(q);
    if let Some(n) = amb.truncated_to {
        report["truncated_to"] = json!(n);
    }
    Ok(Outcome {
        summary: format!("canonical form with {} maximal coset(s)", c.cosets().len()),
        report: Some(report),
        code: 0,
    })
}

fn finite_view(loaded: &LoadedGroup) -> Result<FiniteGroup, Failure> {
    loaded.to_finite().map_err(|e| Failure::validation(e.to_string()))
}

fn cmd_normal(loaded: &LoadedGroup, sub: &str) -> Result<Outcome, Failure> {
    let g = finite_view(loaded)?;
    let h = resolve_subgroup(&g, sub)?;
    let normal = is_normal(&g, &h);
    let mut report = json!({
        "normal": normal,
        "subgroup": elements_json(&g, h.elements()),
    });
    if !normal {
        let (x, k) = non_normal_witness(&g, h.elements()).expect("not normal");
        report["witness"] = json!({"x": g.element_json(&x), "h": g.element_json(&k)});
    }
    Ok(Outcome {
        summary: if normal { "normal".into() } else { "not normal".into() },
        report: Some(report),
        code: u8::from(!normal),
    })
}

/// First `(x, h)` with `x⁻¹hx ∉ H`.
fn non_normal_witness(g: &FiniteGroup, h: &[usize]) -> Option<(usize, usize)> {
    (0..g.order()).find_map(|x| {
        h.iter()
            .find(|&&k| h.binary_search(&g.mul(g.mul(g.inv(&x), k), x)).is_err())
            .map(|&k| (x, k))
    })
}

fn cmd_super_normal(loaded: &LoadedGroup, sub: &str) -> Result<Outcome, Failure> {
    let g = finite_view(loaded)?;
    let h = resolve_subgroup(&g, sub)?;
    let subgroup = elements_json(&g, h.elements());
    if !is_normal(&g, &h) {
        let (x, k) = non_normal_witness(&g, h.elements()).expect("not normal");
        return Ok(Outcome {
            summary: "fail: the subgroup is not normal".into(),
            report: Some(json!({
                "super_normal": false,
                "reason": "not normal",
                "subgroup": subgroup,
                "witness": {"x": g.element_json(&x), "h": g.element_json(&k)},
            })),
            code: 1,
        });
    }
    let err = |e: zariski::group::GroupError| Failure::validation(e.to_string());
    let d = is_super_normal(&g, &h, SuperNormalMethod::Definitional).map_err(err)?;
    let c = is_super_normal(&g, &h, SuperNormalMethod::CentralizerProduct).map_err(err)?;
    let mut report = json!({
        "super_normal": d.holds,
        "methods_agree": d.holds == c.holds && d.failing == c.failing,
        "subgroup": subgroup,
    });
    match d.failing {
        Some(x) => report["witness"] = json!({"x": g.element_json(&x)}),
        None => {
            report["conjugation_witnesses"] = Value::Object(
                d.witness
                    .iter()
                    .map(|(x, y)| (g.format_element(x), g.element_json(y)))
                    .collect(),
            )
        }
    }
    let pass = d.holds && c.holds;
    Ok(Outcome {
        summary: match d.failing {
            None => "pass".into(),
            Some(x) => format!("fail: no y in H conjugates like x = {}", g.format_element(&x)),
        },
        report: Some(report),
        code: u8::from(!pass),
    })
}

fn cmd_check_reflection(loaded: &LoadedGroup, sub: &str, expr: &Value) -> Result<Outcome, Failure> {
    let gens_text = split_elements(sub);
    let (amb, e, gens) = abelian_inputs(loaded, Some(expr), &gens_text, None)?;
    let e = e.expect("expression requested");
    let r = reflection_check(&amb.target, &gens, &e);
    let pass = r.equal && r.enumeration_agrees != Some(false);
    let mut report = r.to_json();
    if let Some(n) = amb.truncated_to {
        report["truncated_to"] = json!(n);
    }
    Ok(Outcome {
        summary: if pass { "equal".into() } else { "not equal".into() },
        report: Some(report),
        code: u8::from(!pass),
    })
}

fn cmd_check_cover(loaded: &LoadedGroup, cert: &Value) -> Result<Outcome, Failure> {
    let g = finite_view(loaded)?;
    let c = CoverCertificate::from_json(cert, &g).map_err(Failure::expr)?;
    let v = verify_discreteness_cover(&g, &c);
    let mut report = json!({"valid": v.valid, "size": c.equations.len()});
    let summary = match v.failure {
        None => "pass".to_string(),
        Some(CoverFailure::Uncovered(x)) => {
            report["counterexample"] = g.element_json(&x);
            format!("fail: {} is not covered", g.format_element(&x))
        }
        Some(CoverFailure::IdentityCovered { equation }) => {
            report["identity_covered_by"] = json!(equation);
            format!("fail: the identity solves equation {equation}")
        }
    };
    Ok(Outcome {
        report: Some(report),
        code: u8::from(!v.valid),
        summary,
    })
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::validation(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_reflect(
    loaded: &LoadedGroup,
    expr: &Value,
    seed: &str,
    cfg: ReflectionConfig,
    out: Option<PathBuf>,
) -> Result<Outcome, Failure> {
    if cfg.fuel == 0 {
        return Err(Failure::validation("fuel must be positive".into()));
    }
    let seed_text = split_elements(seed);
    let (amb, e, seed) = abelian_inputs(loaded, Some(expr), &seed_text, None)?;
    let e = e.expect("expression requested");
    let g = &amb.target;
    let trace = reflection_construct(g, &e, &seed, cfg);
    let sound = verify_witnesses(g, &e, &trace);
    let lines = trace.to_json_lines(&|x| amb.fmt(x));
    let text: String = lines.iter().map(|l| format!("{l}\n")).collect();
    write_or_print(&out, &text)?;
    let code = if !trace.stabilized {
        4
    } else if trace.report.equal && sound.is_ok() {
        0
    } else {
        1
    };
    let mut report = lines.last().cloned().expect("summary line");
    report["witnesses_verified"] = json!(sound.is_ok());
    if let Err(msg) = &sound {
        report["witness_error"] = json!(msg);
    }
    if let Some(n) = amb.truncated_to {
        report["truncated_to"] = json!(n);
    }
    let summary = format!(
        "{} after {} round(s); |H| = {}; equality {}",
        if trace.stabilized { "stabilized" } else { "fuel exhausted" },
        trace.rounds,
        trace.elements.len(),
        if trace.report.equal { "holds" } else { "fails" },
    );
    // With --out the trace is in the file and the summary record goes to
    // stdout; without it the trace itself is the output.
    Ok(Outcome {
        report: out.is_some().then_some(report),
        code,
        summary,
    })
}

fn cmd_cover_search(loaded: &LoadedGroup, max_n: usize, budget: u64, out: Option<PathBuf>) -> Result<Outcome, Failure> {
    let g = finite_view(loaded)?;
    let found = search_min_cover(&g, max_n, budget).map_err(|e| match e {
        CoverError::TooLarge(m) => Failure::validation(m),
    })?;
    let Some(r) = found else {
        return Ok(Outcome {
            report: Some(json!({"found": false, "reason": "budget exhausted"})),
            code: 4,
            summary: "budget exhausted without a cover".into(),
        });
    };
    let verdict = verify_discreteness_cover(&g, &r.certificate);
    let mut cert = r.certificate.to_json(&g, Some(r.optimal));
    write_or_print(&out, &format!("{cert}\n"))?;
    cert["verified"] = json!(verdict.valid);
    cert["candidates"] = json!(r.candidates);
    cert["distinct_sets"] = json!(r.distinct_sets);
    cert["nodes"] = json!(r.nodes);
    Ok(Outcome {
        summary: format!(
            "cover of size {} ({})",
            r.certificate.equations.len(),
            if r.optimal { "optimal" } else { "budget ran out; best found" }
        ),
        report: out.is_some().then_some(cert),
        code: if verdict.valid { 0 } else { 1 },
    })
}
