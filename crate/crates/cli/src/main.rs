use clap::{Parser, Subcommand, ValueEnum};
use flexdraw::gadgets::{amplify, bend_gadget_b12, reduce_flex, w3_prime, wheel_w4};
use flexdraw::io::{instance_to_json, parse_edge_list, parse_instance};
use flexdraw::model::{validate_instance, Instance};
use flexdraw::oracle::{class_key, for_each_rep, EnumerationBudget, OracleError, PoleFilter};
use flexdraw::ortho::{realize, svg::to_svg};
use flexdraw::solve::{solve, solve_fixed_embedding, solve_with_poles, Mode, SolveOptions, Solution};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "flexdraw", version, about = "Orthogonal drawings with bend constraints over all planar embeddings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an instance file.
    Check { file: Option<PathBuf> },
    /// Solve an instance; reads stdin without a file. Poles, if given, end up
    /// on the outer face.
    Solve {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Flexdraw)]
        mode: ModeArg,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json_out: Option<PathBuf>,
        #[arg(long)]
        bend_cap: Option<i32>,
        /// Recorded in the output; the solvers are deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a gadget instance.
    Gen {
        #[arg(value_enum)]
        gadget: GadgetArg,
        #[arg(long)]
        reduce_flex: bool,
        #[arg(long, default_value_t = 0)]
        amplify: usize,
    },
    /// Brute-force enumeration of a small instance.
    Oracle {
        file: Option<PathBuf>,
        /// Maximum number of representations to enumerate.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Flexdraw,
    Optimal,
    SpOptimal,
    FixedEmbedding,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetArg {
    W4,
    B12,
    #[value(name = "w3prime")]
    W3Prime,
}

struct Failure(u8, String);

fn read_instance(file: &Option<PathBuf>) -> Result<Instance, Failure> {
    let (text, name) = match file {
        Some(p) => (std::fs::read_to_string(p).map_err(|e| Failure(2, format!("{}: {e}", p.display())))?, p.display().to_string()),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure(2, e.to_string()))?;
            (s, "<stdin>".to_string())
        }
    };
    let parsed = if text.trim_start().starts_with('{') { parse_instance(&text) } else { parse_edge_list(&text, 1) };
    parsed.map_err(|e| Failure(2, format!("{name}: {e}")))
}

fn emit(v: &Value, out: Option<&PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("values serialize");
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(p) = out {
        std::fs::write(p, format!("{text}\n")).map_err(|e| Failure(2, format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn check(file: &Option<PathBuf>) -> Result<u8, Failure> {
    let inst = read_instance(file)?;
    let v = validate_instance(&inst);
    let report = json!({
        "valid": v.is_empty(),
        "vertices": inst.n(),
        "edges": inst.m(),
        "violations": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    emit(&report, None)?;
    Ok(if v.is_empty() { 0 } else { 2 })
}

fn run_solve(file: &Option<PathBuf>, mode: ModeArg, svg: Option<&PathBuf>, json_out: Option<&PathBuf>, bend_cap: Option<i32>, seed: u64) -> Result<u8, Failure> {
    let inst = read_instance(file)?;
    let opts = SolveOptions { bend_cap };
    let run = |m: Mode| if inst.poles.is_some() { solve_with_poles(&inst, m, &opts) } else { solve(&inst, m, &opts) };
    let res = match mode {
        ModeArg::Flexdraw => run(Mode::FlexDraw),
        ModeArg::Optimal => run(Mode::Optimal),
        ModeArg::SpOptimal => run(Mode::SpOptimal),
        ModeArg::FixedEmbedding => {
            let emb = inst.embedding.clone().ok_or_else(|| Failure(2, "fixed-embedding mode needs an embedding in the instance".into()))?;
            solve_fixed_embedding(&inst, &emb)
        }
    };
    let sol: Solution = res.map_err(|e| Failure(2, e.to_string()))?;
    let mut out = sol.to_json(&inst);
    out["seed"] = json!(seed);
    if let (Some(path), Some(w)) = (svg, sol.witness.as_ref()) {
        match realize(w) {
            Ok(dr) => {
                std::fs::write(path, to_svg(&dr, &inst.vertex_names)).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
                out["svg"] = json!(path.display().to_string());
            }
            Err(e) => out["svg_error"] = json!(e.to_string()),
        }
    }
    emit(&out, json_out)?;
    Ok(if sol.is_feasible() { 0 } else { 1 })
}

fn gen(gadget: GadgetArg, reduce: bool, rounds: usize) -> Result<u8, Failure> {
    let g = match gadget {
        GadgetArg::W4 => wheel_w4(),
        GadgetArg::B12 => bend_gadget_b12(),
        GadgetArg::W3Prime => w3_prime(),
    };
    let mut inst = g.instance;
    if reduce {
        inst = reduce_flex(&inst).map_err(|e| Failure(2, e.to_string()))?;
    }
    if rounds > 0 {
        inst = amplify(&inst, rounds).map_err(|e| Failure(2, e.to_string()))?;
    }
    let _ = writeln!(std::io::stdout(), "{}", instance_to_json(&inst));
    Ok(0)
}

fn oracle(file: &Option<PathBuf>, budget: u64) -> Result<u8, Failure> {
    let inst = read_instance(file)?;
    let v = validate_instance(&inst);
    if !v.is_empty() {
        return Err(Failure(2, v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")));
    }
    let b = EnumerationBudget { max_reps: budget, ..Default::default() };
    let mut count = 0u64;
    let mut best = f64::INFINITY;
    let mut keys = BTreeSet::new();
    for_each_rep(&inst, &b, &PoleFilter::default(), &mut |r, c| {
        count += 1;
        best = best.min(c);
        keys.insert(class_key(r));
        ControlFlow::Continue(())
    })
    .map_err(|e: OracleError| Failure(2, e.to_string()))?;
    let report = json!({
        "feasible": count > 0,
        "representations": count,
        "classes": keys.len(),
        "optimal_cost": best.is_finite().then_some(best),
    });
    emit(&report, None)?;
    Ok(if count > 0 { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.cmd {
        Cmd::Check { file } => check(file),
        Cmd::Solve { file, mode, svg, json_out, bend_cap, seed } => run_solve(file, *mode, svg.as_ref(), json_out.as_ref(), *bend_cap, *seed),
        Cmd::Gen { gadget, reduce_flex, amplify } => gen(*gadget, *reduce_flex, *amplify),
        Cmd::Oracle { file, budget } => oracle(file, *budget),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
