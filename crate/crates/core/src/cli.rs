//! Command-line front end. Exit codes: 0 for provable / passed, 1 for a
//! negative mathematical answer, 2 for usage, input or resource errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::charform::CharForms;
use crate::enumerate::enumerate_models;
use crate::error::{Error, Result};
use crate::formula::{parse_sequent, Formula};
use crate::generate::{enumerate_canonical, random_formula};
use crate::interp::{InterpOptions, Session};
use crate::kripke::{semantic_consequence_bounded, KripkeModel};
use crate::prover::{Prover, Refutation};
use crate::signature::Signature;
use crate::typespace::{TypeSpace, TypeStore};
use crate::witness::{build_witness_model, check_lemma, ProbeContext};

#[derive(Parser, Debug)]
#[command(
    name = "heyting",
    version,
    about = "Type spaces, proof search and uniform interpolation for intuitionistic propositional logic"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct SpaceArgs {
    /// Comma-separated variables.
    #[arg(long, default_value = "")]
    vars: String,
    #[arg(long)]
    level: u32,
}

impl SpaceArgs {
    fn signature(&self) -> Result<Signature> {
        Signature::parse_list(&self.vars)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a sequent such as "p, p -> q |- q".
    Prove {
        sequent: String,
        /// Also search for a countermodel with at most this many nodes.
        #[arg(long)]
        max_nodes: Option<usize>,
    },
    /// Search for the smallest refuting model.
    Countermodel {
        sequent: String,
        #[arg(long, default_value_t = 4)]
        max_nodes: usize,
    },
    /// Implication degree of a formula.
    Degree { formula: String },
    /// Build and export a type space.
    Space(SpaceArgs),
    /// Elements of a type space forcing a formula.
    Classes {
        formula: String,
        /// Defaults to the formula's variables.
        #[arg(long)]
        vars: Option<String>,
        /// Defaults to the formula's degree.
        #[arg(long)]
        level: Option<u32>,
    },
    /// Characteristic formulas of type-space elements.
    Charform {
        #[command(flatten)]
        space: SpaceArgs,
        /// Element id such as x2; all elements when omitted.
        #[arg(long)]
        element: Option<String>,
        /// Apply unit and idempotence rewriting.
        #[arg(long)]
        simplify: bool,
    },
    /// Distance between two elements of a type space.
    Dist {
        #[command(flatten)]
        space: SpaceArgs,
        a: String,
        b: String,
    },
    /// Size of a type space and the level bound 2|X|-1.
    Rn(SpaceArgs),
    /// Uniform interpolant eliminating one variable.
    Interp {
        #[arg(value_enum)]
        quantifier: QuantifierArg,
        var: String,
        formula: String,
        /// Write the certificate JSON to this file.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Number of sampled test formulas in the cross-check.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        degree_bound: u32,
        /// Keep the raw characteristic-formula construction.
        #[arg(long)]
        raw: bool,
        /// Extra variables of the interpolant's context, comma-separated.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Craig interpolant of an entailment.
    Craig {
        antecedent: String,
        consequent: String,
    },
    /// Build the witness model from probes and check it.
    WitnessCheck {
        /// Variables kept by the projection.
        #[arg(long, default_value = "q")]
        vars: String,
        /// The eliminated variable.
        #[arg(long, default_value = "p")]
        var: String,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 7)]
        m: u32,
        /// Level of the realizer space used as the default domain probe.
        #[arg(long, default_value_t = 1)]
        domain_level: u32,
        /// Domain probe model (JSON); realizers when omitted.
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Codomain probe model (JSON); realizers when omitted.
        #[arg(long)]
        codomain: Option<PathBuf>,
    },
    /// Enumeration utilities.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuantifierArg {
    Exists,
    Forall,
}

#[derive(Subcommand, Debug)]
enum Oracle {
    /// All models up to isomorphism.
    Models {
        #[arg(long, default_value = "")]
        vars: String,
        #[arg(long, default_value_t = 2)]
        max_nodes: usize,
    },
    /// Canonical formula enumeration.
    Formulas {
        #[arg(long, default_value = "")]
        vars: String,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        #[arg(long, default_value_t = 1)]
        degree_bound: u32,
    },
    /// Seeded random formulas.
    Sample {
        #[arg(long, default_value = "")]
        vars: String,
        #[arg(long, default_value_t = 10)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        degree_bound: u32,
        #[arg(long, default_value_t = 9)]
        max_size: usize,
    },
    /// Entailment over all models with a bounded number of nodes.
    Consequence {
        sequent: String,
        #[arg(long, default_value_t = 4)]
        max_nodes: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let pool = match cli.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| dispatch(&cli, &mut buf));
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(value)?)
}

fn model_json(m: &KripkeModel, w: usize) -> Value {
    json!({ "model": m.to_spec(), "node": m.name(w) })
}

fn element(space: &TypeSpace, id: &str) -> Result<usize> {
    id.strip_prefix('x')
        .and_then(|i| i.parse::<usize>().ok())
        .filter(|&i| i < space.len())
        .ok_or_else(|| Error::UnknownNode(id.to_string()))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let format = cli.format;
    let store = TypeStore::new();
    match &cli.command {
        Command::Prove { sequent, max_nodes } => {
            let (a, c) = parse_sequent(sequent)?;
            let outcome = Prover::new().decide(&a, &c, *max_nodes);
            match format {
                Format::Json => emit_json(
                    out,
                    &json!({
                        "provable": outcome.provable,
                        "countermodel": outcome.countermodel.as_ref().map(|(m, w)| model_json(m, *w)),
                    }),
                )?,
                Format::Dot => match &outcome.countermodel {
                    Some((m, _)) => emit(out, &m.to_dot())?,
                    None => emit(
                        out,
                        if outcome.provable {
                            "provable"
                        } else {
                            "not provable"
                        },
                    )?,
                },
                Format::Text => {
                    emit(
                        out,
                        if outcome.provable {
                            "provable"
                        } else {
                            "not provable"
                        },
                    )?;
                    if let Some((m, w)) = &outcome.countermodel {
                        emit(
                            out,
                            &format!("countermodel at {}: {}", m.name(*w), m.to_json()),
                        )?;
                    }
                }
            }
            Ok(if outcome.provable { 0 } else { 1 })
        }
        Command::Countermodel { sequent, max_nodes } => {
            let (a, c) = parse_sequent(sequent)?;
            match Prover::new().countermodel(&a, &c, *max_nodes) {
                Refutation::Provable => {
                    match format {
                        Format::Json => emit_json(out, &json!({ "provable": true }))?,
                        _ => emit(out, "provable")?,
                    }
                    Ok(0)
                }
                Refutation::Found(m, w) => {
                    match format {
                        Format::Json => emit_json(out, &model_json(&m, w))?,
                        Format::Dot => emit(out, &m.to_dot())?,
                        Format::Text => emit(
                            out,
                            &format!("countermodel at {}: {}", m.name(w), m.to_json()),
                        )?,
                    }
                    Ok(1)
                }
                Refutation::BoundExhausted => {
                    match format {
                        Format::Json => {
                            emit_json(out, &json!({ "provable": false, "countermodel": null }))?
                        }
                        _ => emit(
                            out,
                            &format!(
                                "not provable; no countermodel with at most {max_nodes} nodes"
                            ),
                        )?,
                    }
                    Ok(1)
                }
            }
        }
        Command::Degree { formula } => {
            let f = Formula::parse(formula)?;
            match format {
                Format::Json => emit_json(
                    out,
                    &json!({ "formula": f.to_string(), "degree": f.impl_degree() }),
                )?,
                _ => emit(out, &f.impl_degree().to_string())?,
            }
            Ok(0)
        }
        Command::Space(args) => {
            let space = TypeSpace::build(&store, &args.signature()?, args.level)?;
            match format {
                Format::Json => emit_json(out, &space.to_json(&store))?,
                Format::Dot => emit(out, &space.to_dot(&store))?,
                Format::Text => {
                    let mut text = String::new();
                    for i in 0..space.len() {
                        let shown = if space.level() <= 2 {
                            store.show(space.element(i))
                        } else {
                            space.signature().show_mask(space.val(i))
                        };
                        text.push_str(&format!("{} {}\n", space.label(i), shown));
                    }
                    for (a, b) in space.hasse() {
                        text.push_str(&format!("{} < {}\n", space.label(a), space.label(b)));
                    }
                    emit(out, &text)?;
                }
            }
            Ok(0)
        }
        Command::Classes {
            formula,
            vars,
            level,
        } => {
            let f = Formula::parse(formula)?;
            let sig = match vars {
                Some(v) => Signature::parse_list(v)?,
                None => f.signature(),
            };
            let level = level.unwrap_or(f.impl_degree());
            let space = TypeSpace::build(&store, &sig, level)?;
            let ids: Vec<String> = space
                .classes_of(&f)?
                .ones()
                .map(|i| space.label(i))
                .collect();
            match format {
                Format::Json => emit_json(
                    out,
                    &json!({ "vars": sig.names().iter().map(|n| n.to_string()).collect::<Vec<_>>(), "level": level, "classes": ids }),
                )?,
                _ => emit(out, &ids.join(" "))?,
            }
            Ok(0)
        }
        Command::Charform {
            space,
            element: which,
            simplify,
        } => {
            let x = TypeSpace::build(&store, &space.signature()?, space.level)?;
            let forms = if *simplify {
                CharForms::new(&x).simplified()
            } else {
                CharForms::new(&x)
            };
            let ids: Vec<usize> = match which {
                Some(id) => vec![element(&x, id)?],
                None => (0..x.len()).collect(),
            };
            let rows: Vec<(String, Formula, Formula)> = ids
                .iter()
                .map(|&i| (x.label(i), forms.pos(i), forms.neg(i)))
                .collect();
            match format {
                Format::Json => emit_json(
                    out,
                    &Value::Array(
                        rows.iter()
                            .map(|(id, p, n)| json!({ "id": id, "pos": p.to_string(), "neg": n.to_string() }))
                            .collect(),
                    ),
                )?,
                _ => {
                    let text: String = rows.iter().map(|(id, p, n)| format!("{id}\tpos: {p}\tneg: {n}\n")).collect();
                    emit(out, &text)?
                }
            }
            Ok(0)
        }
        Command::Dist { space, a, b } => {
            let x = TypeSpace::build(&store, &space.signature()?, space.level)?;
            let (i, j) = (element(&x, a)?, element(&x, b)?);
            let d = store.distance(x.element(i), x.element(j))?;
            match format {
                Format::Json => emit_json(
                    out,
                    &json!({ "a": a, "b": b, "distance": d.to_string(), "value": d.value() }),
                )?,
                _ => emit(out, &d.to_string())?,
            }
            Ok(0)
        }
        Command::Rn(args) => {
            let x = TypeSpace::build(&store, &args.signature()?, args.level)?;
            match format {
                Format::Json => emit_json(
                    out,
                    &json!({ "level": args.level, "size": x.len(), "r_bound": x.r_bound() }),
                )?,
                _ => emit(out, &format!("size {}\nr_bound {}", x.len(), x.r_bound()))?,
            }
            Ok(0)
        }
        Command::Interp {
            quantifier,
            var,
            formula,
            cert,
            budget,
            seed,
            degree_bound,
            raw,
            vars,
        } => {
            let phi = Formula::parse(formula)?;
            let mut opts = InterpOptions::default();
            opts.verify.seed = *seed;
            opts.verify.degree_bound = *degree_bound;
            if let Some(b) = budget {
                opts.verify.samples = *b;
            }
            opts.simplify = !raw;
            if let Some(v) = vars {
                opts.context = Some(Signature::parse_list(v)?);
            }
            let session = Session {
                store,
                prover: Prover::new(),
            };
            let result = match quantifier {
                QuantifierArg::Exists => session.uniform_exists(&phi, var, &opts)?,
                QuantifierArg::Forall => session.uniform_forall(&phi, var, &opts)?,
            };
            let certificate = result.to_certificate(&session.store);
            if let Some(path) = cert {
                std::fs::write(path, serde_json::to_string_pretty(&certificate)?)?;
            }
            match format {
                Format::Json => emit_json(out, &certificate)?,
                _ => {
                    let mut text = format!("{}\nseed {}\n", result.formula, seed);
                    if let Some(path) = cert {
                        text.push_str(&format!("certificate {}\n", path.display()));
                    }
                    emit(out, &text)?;
                }
            }
            Ok(0)
        }
        Command::Craig {
            antecedent,
            consequent,
        } => {
            let (a, c) = (Formula::parse(antecedent)?, Formula::parse(consequent)?);
            match Session::new().craig(&a, &c, &InterpOptions::default()) {
                Ok(chi) => {
                    match format {
                        Format::Json => emit_json(out, &json!({ "interpolant": chi.to_string() }))?,
                        _ => emit(out, &chi.to_string())?,
                    }
                    Ok(0)
                }
                Err(Error::NotProvable) => {
                    emit(out, "not provable")?;
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::WitnessCheck {
            vars,
            var,
            n,
            m,
            domain_level,
            domain,
            codomain,
        } => {
            let sig = Signature::parse_list(vars)?;
            let ctx = match (domain, codomain) {
                (None, None) => {
                    ProbeContext::from_realizers(&store, &sig, var, *n, *m, *domain_level)?
                }
                _ => {
                    let full = sig.with(var)?;
                    let load = |path: &Option<PathBuf>,
                                sig: &Signature,
                                level: u32|
                     -> Result<KripkeModel> {
                        match path {
                            Some(p) => KripkeModel::from_json(&std::fs::read_to_string(p)?),
                            None => {
                                Ok((**TypeSpace::build(&store, sig, level)?.realizer()).clone())
                            }
                        }
                    };
                    let d = load(domain, &full, (*domain_level).max(n + 1))?;
                    let c = load(codomain, &sig, *m)?;
                    ProbeContext::new(&store, d, c, *n, *m)?
                }
            };
            let wm = build_witness_model(&store, &ctx)?;
            let report = check_lemma(&store, &ctx, &wm)?;
            match format {
                Format::Json => emit_json(out, &report.to_json())?,
                Format::Dot => emit(out, &wm.to_dot())?,
                Format::Text => {
                    let status = if report.passed() { "passed" } else { "failed" };
                    emit(
                        out,
                        &format!(
                            "{status}: {} elements, {} required pairs, {} violations",
                            report.elements,
                            report.required_pairs,
                            report.violations.len()
                        ),
                    )?;
                }
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Oracle(oracle) => run_oracle(oracle, format, out),
    }
}

fn run_oracle(oracle: &Oracle, format: Format, out: &mut dyn Write) -> Result<i32> {
    match oracle {
        Oracle::Models { vars, max_nodes } => {
            let sig = Signature::parse_list(vars)?;
            let models: Vec<KripkeModel> = enumerate_models(&sig, *max_nodes).collect();
            match format {
                Format::Json => emit_json(
                    out,
                    &Value::Array(
                        models
                            .iter()
                            .map(|m| serde_json::to_value(m.to_spec()).unwrap())
                            .collect(),
                    ),
                )?,
                _ => emit(out, &models.len().to_string())?,
            }
            Ok(0)
        }
        Oracle::Formulas {
            vars,
            max_size,
            degree_bound,
        } => {
            let sig = Signature::parse_list(vars)?;
            let all = enumerate_canonical(&sig, *max_size, *degree_bound);
            emit_formulas(out, format, &all, None)?;
            Ok(0)
        }
        Oracle::Sample {
            vars,
            budget,
            seed,
            degree_bound,
            max_size,
        } => {
            let sig = Signature::parse_list(vars)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let all: Vec<Formula> = (0..*budget)
                .map(|_| random_formula(&mut rng, &sig, *degree_bound, *max_size))
                .collect();
            emit_formulas(out, format, &all, Some(*seed))?;
            Ok(0)
        }
        Oracle::Consequence { sequent, max_nodes } => {
            let (a, c) = parse_sequent(sequent)?;
            let sig = a.signature().union(&c.signature());
            let holds = semantic_consequence_bounded(&a, &c, &sig, *max_nodes)?;
            match format {
                Format::Json => emit_json(out, &json!({ "holds": holds, "max_nodes": max_nodes }))?,
                _ => emit(out, if holds { "holds" } else { "fails" })?,
            }
            Ok(if holds { 0 } else { 1 })
        }
    }
}

fn emit_formulas(
    out: &mut dyn Write,
    format: Format,
    all: &[Formula],
    seed: Option<u64>,
) -> Result<()> {
    match format {
        Format::Json => emit_json(
            out,
            &json!({ "seed": seed, "formulas": all.iter().map(|f| f.to_string()).collect::<Vec<_>>() }),
        ),
        _ => {
            let mut text = String::new();
            if let Some(s) = seed {
                text.push_str(&format!("# seed {s}\n"));
            }
            for f in all {
                text.push_str(&format!("{f}\n"));
            }
            emit(out, &text)
        }
    }
}
