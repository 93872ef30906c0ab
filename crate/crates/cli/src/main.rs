use std::collections::BTreeSet;
use std::io::Read;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use ssl_core::abduce::{abduce_positive, abduce_weakest, normal_form};
use ssl_core::ams::induced_ams;
use ssl_core::decide::{entails, model_check, sat, SolverConfig, Verdict};
use ssl_core::oracle::{self, OracleConfig};
use ssl_core::qbf::{qbf_eval, qbf_translate, Qbf};
use ssl_core::symexec::{vc_config, verify, AnnotatedProgram};
use ssl_core::{parse, Formula, Mode, Model, Var};

#[derive(Parser)]
#[command(name = "ssl", version, about = "Decision procedure for strong-separation logic")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct VarsArg {
    /// Variable set, comma separated (nil is implicit). Defaults to the free variables.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Lift the size guards.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Satisfiability.
    Sat {
        formula: String,
        #[command(flatten)]
        vars: VarsArg,
    },
    /// Entailment `lhs |= rhs`.
    Entail {
        lhs: String,
        rhs: String,
        #[command(flatten)]
        vars: VarsArg,
    },
    /// Model checking against a JSON model (a file, `-` for stdin, or inline JSON).
    Check {
        formula: String,
        #[arg(long)]
        model: String,
        /// Brute-force semantics instead of the AMS route.
        #[arg(long, conflicts_with_all = ["ams", "differential"])]
        oracle: bool,
        /// AMS route (the default); also prints the induced AMS.
        #[arg(long)]
        ams: bool,
        /// Run both routes and fail if they disagree.
        #[arg(long)]
        differential: bool,
        /// Use the weak (standard) semantics with --oracle.
        #[arg(long, requires = "oracle")]
        weak: bool,
    },
    /// Normal form.
    Nf {
        formula: String,
        #[command(flatten)]
        vars: VarsArg,
    },
    /// Abduction `phi * [?] |= psi`.
    Abduce {
        phi: String,
        psi: String,
        #[arg(long)]
        minimal: bool,
        /// Restrict to the positive fragment.
        #[arg(long)]
        positive: bool,
        /// Print the normal form of the solution instead of the wand.
        #[arg(long, conflicts_with = "positive")]
        explicit: bool,
        #[command(flatten)]
        vars: VarsArg,
    },
    /// Verify an annotated program.
    Verify {
        file: String,
        /// Print the symbolic execution trace of each condition.
        #[arg(long)]
        trace: bool,
    },
    /// Decide a closed QBF (s-expression or file) through its translation.
    Qbf {
        input: String,
        /// Print the translated formula.
        #[arg(long)]
        print: bool,
    },
}

fn read_arg(arg: &str) -> anyhow::Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    if std::path::Path::new(arg).is_file() {
        return std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"));
    }
    Ok(arg.to_string())
}

fn formula(text: &str) -> anyhow::Result<Formula> {
    Ok(parse(text)?)
}

fn var_set(arg: &VarsArg, fs: &[&Formula]) -> anyhow::Result<BTreeSet<Var>> {
    let mut vs = BTreeSet::new();
    for v in arg.vars.iter().map(|v| v.trim()).filter(|v| !v.is_empty()) {
        if !ssl_core::formula::is_valid_var_name(v) {
            bail!("bad variable name {v:?}");
        }
        vs.insert(Var::new(v));
    }
    if arg.vars.is_empty() {
        for f in fs {
            vs.extend(f.free_vars());
        }
    }
    vs.remove(&Var::nil());
    Ok(vs)
}

fn config(arg: &VarsArg) -> SolverConfig {
    SolverConfig { force: arg.force, ..Default::default() }
}

fn report(v: &Verdict, json_out: bool, label: &str) {
    if json_out {
        println!("{}", v.to_json());
        return;
    }
    println!("{}", v.status.as_str());
    if let Some(m) = &v.witness {
        println!("{label}: {}", m.to_json());
    }
    if let Some(a) = &v.witness_ams {
        println!("ams: {}", a.to_json());
    }
    if v.witness_verified == Some(false) {
        println!("warning: the oracle rejects the {label}");
    }
}

fn code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let js = cli.json;
    match cli.cmd {
        Cmd::Sat { formula: f, vars } => {
            let f = formula(&f)?;
            let v = sat(&f, &var_set(&vars, &[&f])?, &config(&vars))?;
            report(&v, js, "witness");
            Ok(code(v.is_positive()))
        }
        Cmd::Entail { lhs, rhs, vars } => {
            let (l, r) = (formula(&lhs)?, formula(&rhs)?);
            let v = entails(&l, &r, &var_set(&vars, &[&l, &r])?, &config(&vars))?;
            report(&v, js, "countermodel");
            Ok(code(v.is_positive()))
        }
        Cmd::Check { formula: f, model, oracle: use_oracle, ams, differential, weak } => {
            let f = formula(&f)?;
            let text = read_arg(&model)?;
            let m = Model::from_json(&serde_json::from_str::<Value>(&text).context("model is not JSON")?)?;
            let mode = if weak { Mode::Weak } else { Mode::Strong };
            let ocfg = OracleConfig { force: true, ..Default::default() };
            let holds = if use_oracle {
                oracle::holds_with(&m, &f, mode, &ocfg)?
            } else {
                let r = model_check(&m, &f)?;
                if differential {
                    let o = oracle::holds_with(&m, &f, Mode::Strong, &ocfg)?;
                    if o != r {
                        bail!("routes disagree: AMS says {r}, oracle says {o}");
                    }
                }
                r
            };
            let word = if holds { "HOLDS" } else { "FAILS" };
            if js {
                let mut out = json!({ "status": word });
                if ams {
                    out["ams"] = induced_ams(&m).to_json();
                }
                println!("{out}");
            } else {
                println!("{word}");
                if ams {
                    println!("ams: {}", induced_ams(&m).to_json());
                }
            }
            Ok(code(holds))
        }
        Cmd::Nf { formula: f, vars } => {
            let f = formula(&f)?;
            let nf = normal_form(&f, &var_set(&vars, &[&f])?, &config(&vars))?;
            if js {
                let ds: Vec<String> = nf.disjuncts.iter().map(|d| d.to_string()).collect();
                println!("{}", json!({ "disjuncts": ds, "formula": nf.formula().to_string() }));
            } else {
                println!("{}", nf.formula());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Abduce { phi, psi, minimal, positive, explicit, vars } => {
            let (p, q) = (formula(&phi)?, formula(&psi)?);
            let vs = var_set(&vars, &[&p, &q])?;
            let cfg = config(&vars);
            let solution = if positive {
                abduce_positive(&p, &q, &vs, minimal, &cfg)?.formula
            } else if explicit {
                normal_form(&abduce_weakest(&p, &q, minimal), &vs, &cfg)?.formula()
            } else {
                abduce_weakest(&p, &q, minimal)
            };
            // Only trivial solutions exist when phi * solution is unsatisfiable.
            let nontrivial = sat(&Formula::sep(p, solution.clone()), &vs, &cfg)?.is_positive();
            if js {
                println!("{}", json!({ "solution": solution.to_string(), "nontrivial": nontrivial }));
            } else {
                println!("{solution}");
                if !nontrivial {
                    println!("no non-trivial solution");
                }
            }
            Ok(code(nontrivial))
        }
        Cmd::Verify { file, trace } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {file}"))?;
            let prog = AnnotatedProgram::parse(&text)?;
            let results = verify(&prog, &vc_config());
            let mut all = true;
            let mut out = Vec::new();
            for r in &results {
                all &= r.valid();
                let status = match &r.outcome {
                    Ok(d) => d.verdict.status.as_str().to_string(),
                    Err(e) => format!("ERROR: {e}"),
                };
                if js {
                    let mut o = json!({ "name": r.triple.name, "status": status });
                    if let Ok(d) = &r.outcome {
                        o["final_state"] = json!(d.final_state.to_string());
                        if let Some(m) = &d.verdict.witness {
                            o["countermodel"] = m.to_json();
                        }
                    }
                    out.push(o);
                    continue;
                }
                println!("{}: {status}", r.triple.name);
                if let Ok(d) = &r.outcome {
                    if trace {
                        for s in &d.trace {
                            println!("  {s}");
                        }
                    }
                    if let Some(m) = &d.verdict.witness {
                        println!("  countermodel: {}", m.to_json());
                    }
                }
            }
            if js {
                println!("{}", json!({ "verified": all, "conditions": out }));
            } else {
                println!("{}", if all { "VERIFIED" } else { "NOT VERIFIED" });
            }
            Ok(code(all))
        }
        Cmd::Qbf { input, print } => {
            let q = Qbf::parse(&read_arg(&input)?)?;
            let f = qbf_translate(&q)?;
            let vs: BTreeSet<Var> = q.vars().iter().map(|v| Var::new(v)).collect();
            let cfg = SolverConfig { force: true, ..Default::default() };
            let truth = sat(&f, &vs, &cfg)?.is_positive();
            let expected = qbf_eval(&q);
            if truth != expected {
                bail!("translation verdict {truth} disagrees with direct evaluation {expected}");
            }
            let word = if truth { "TRUE" } else { "FALSE" };
            if js {
                let mut o = json!({ "status": word });
                if print {
                    o["translation"] = json!(f.to_string());
                }
                println!("{o}");
            } else {
                if print {
                    println!("{f}");
                }
                println!("{word}");
            }
            Ok(code(truth))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
