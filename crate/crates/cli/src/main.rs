use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::BigUint;

use aaw_core::analysis::{classify, induction_constant, value_range};
use aaw_core::attributes::attributes;
use aaw_core::eval::{check_condition, eval, CheckOpts, Environment, DEFAULT_FRONTIER_CAP};
use aaw_core::model::{parse_model_spec, Element, Model, Ultracharge};
use aaw_core::nt;
use aaw_core::parser::{parse_condition, parse_formula, parse_term};
use aaw_core::rat::format_rat;
use aaw_core::suite::{corpus_conditions, extension_check, run_suite, SUITE_NAMES};

/// Workbench for affine arithmetic over the naturals and their weighted
/// powers: parsing, evaluation, condition checking, static analysis, and
/// number-theoretic helpers.
#[derive(Parser)]
#[command(name = "aaw", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ModelOpt {
    /// `standard`, `uniform:K` (uniform weights on K coordinates), inline
    /// JSON like `{"kind":"powermean","weights":["1/2","1/2"]}`, or a path
    /// to a JSON file with that shape.
    #[arg(long, default_value = "standard")]
    model: String,
}

#[derive(Args)]
struct HorizonOpts {
    /// Truncation point for unbounded quantifiers.
    #[arg(long, default_value_t = 8)]
    horizon: u64,
    /// Grid bound for the universally closed free variables.
    #[arg(long = "closure-horizon", default_value_t = 8)]
    closure_horizon: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse input and print it back in canonical form.
    Parse {
        input: String,
        /// What to parse the input as.
        #[arg(long, default_value = "formula", value_parser = ["term", "formula", "condition"])]
        kind: String,
    },
    /// Evaluate a formula under explicit variable bindings.
    Eval {
        formula: String,
        /// Bindings like `x=3` or `y=(0,2)`, one per occurrence.
        #[arg(long = "env", value_name = "VAR=ELEM")]
        env: Vec<String>,
        #[command(flatten)]
        model: ModelOpt,
        #[arg(long, default_value_t = 8)]
        horizon: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check a condition (or a corpus file of them); exit 1 on violation.
    Check {
        /// Condition text; omit when using --corpus.
        condition: Option<String>,
        /// File of `# label` stanzas, each a condition.
        #[arg(long, conflicts_with = "condition")]
        corpus: Option<String>,
        #[command(flatten)]
        model: ModelOpt,
        #[command(flatten)]
        horizons: HorizonOpts,
        #[arg(long)]
        json: bool,
    },
    /// Quantifier-hierarchy class of a formula.
    Classify {
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Static attributes: bound, scale sensitivity, free variables,
    /// classical value range.
    Range {
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Induction constant derived from the value range.
    Alpha { formula: String },
    /// Run a named verification suite; exit 1 if any item fails.
    Suite {
        /// One of: axioms, order, lnp, numbertheory, collection, integral.
        name: String,
        #[command(flatten)]
        model: ModelOpt,
        /// Override every item's quantifier horizon.
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long = "closure-horizon")]
        closure_horizon: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Check the truncated initial segment `{x : x ≤ b}` inside a model.
    Extension {
        #[command(flatten)]
        model: ModelOpt,
        #[arg(long, default_value_t = 3)]
        bound: u64,
        #[arg(long, default_value_t = 6)]
        horizon: u64,
        #[arg(long)]
        json: bool,
    },
    /// Number-theoretic operations on model elements.
    #[command(subcommand)]
    Nt(NtCmd),
}

#[derive(Subcommand)]
enum NtCmd {
    /// Quotient and remainder of the dividend by a normal divisor.
    Divmod {
        dividend: String,
        divisor: String,
        #[command(flatten)]
        model: ModelOpt,
    },
    /// Coordinatewise coprimality.
    Coprime {
        a: String,
        b: String,
        #[command(flatten)]
        model: ModelOpt,
    },
    /// z with z·x ≡ 1 mod y (x, y coprime).
    Bezout {
        x: String,
        y: String,
        #[command(flatten)]
        model: ModelOpt,
    },
    /// Simultaneous residues: pairs m1 a1 m2 a2 ...
    Crt {
        args: Vec<String>,
        #[command(flatten)]
        model: ModelOpt,
    },
    /// Cantor pairing code of (x, y).
    Pair {
        x: String,
        y: String,
        #[command(flatten)]
        model: ModelOpt,
    },
    /// Inverse of `pair`.
    Unpair {
        z: String,
        #[command(flatten)]
        model: ModelOpt,
    },
    /// i-th member of the sequence coded by x.
    Beta {
        x: String,
        i: String,
        #[command(flatten)]
        model: ModelOpt,
    },
    /// Sequence code whose beta-projections give the listed items.
    Encode {
        items: Vec<String>,
        #[command(flatten)]
        model: ModelOpt,
    },
    Factorial {
        x: String,
        #[command(flatten)]
        model: ModelOpt,
    },
    /// Value of the irreducibility formula at p (0 = irreducible).
    Irred {
        p: String,
        #[command(flatten)]
        model: ModelOpt,
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Value of the primality formula at p (0 = prime).
    Prime {
        p: String,
        #[command(flatten)]
        model: ModelOpt,
        #[arg(long)]
        horizon: Option<u64>,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn load_model(spec: &str) -> Result<Model, String> {
    if spec == "standard" {
        return Ok(Model::Standard);
    }
    if let Some(k) = spec.strip_prefix("uniform:") {
        let k: usize = k.parse().map_err(|_| format!("bad coordinate count '{k}'"))?;
        if k == 0 {
            return Err("uniform model needs at least one coordinate".into());
        }
        return Ok(Model::Powermean(Ultracharge::uniform(k)));
    }
    let json = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?
    };
    parse_model_spec(&json).map_err(|e| e.to_string())
}

/// `7` (diagonal) or `(0,2,5)`.
fn parse_element(s: &str, model: &Model) -> Result<Element, String> {
    let s = s.trim();
    let coords: Vec<&str> = if let Some(inner) = s.strip_prefix('(') {
        let inner = inner.strip_suffix(')').ok_or("unclosed '(' in element")?;
        inner.split(',').map(str::trim).collect()
    } else {
        vec![s]
    };
    let nums: Vec<BigUint> = coords
        .iter()
        .map(|c| c.parse::<BigUint>().map_err(|_| format!("bad natural '{c}'")))
        .collect::<Result<_, _>>()?;
    if nums.len() == model.arity() {
        Ok(Element(nums))
    } else if nums.len() == 1 {
        Ok(Element::diagonal(&nums[0], model.arity()))
    } else {
        Err(format!("element has {} coordinates, model has {}", nums.len(), model.arity()))
    }
}

fn parse_env(bindings: &[String], model: &Model) -> Result<Environment, String> {
    let mut env = Environment::new();
    for b in bindings {
        let (var, val) = b.split_once('=').ok_or_else(|| format!("binding '{b}' is not VAR=ELEM"))?;
        env.insert(var.trim().to_string(), parse_element(val, model)?);
    }
    Ok(env)
}

fn run() -> Result<ExitCode, String> {
    match Cli::parse().cmd {
        Cmd::Parse { input, kind } => {
            let printed = match kind.as_str() {
                "term" => parse_term(&input).map_err(|e| e.to_string())?.to_string(),
                "condition" => parse_condition(&input).map_err(|e| e.to_string())?.to_string(),
                _ => parse_formula(&input).map_err(|e| e.to_string())?.to_string(),
            };
            println!("{printed}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Eval { formula, env, model, horizon, json } => {
            let model = load_model(&model.model)?;
            let f = parse_formula(&formula).map_err(|e| e.to_string())?;
            let env = parse_env(&env, &model)?;
            let r = eval(&f, &env, &model, horizon, DEFAULT_FRONTIER_CAP)
                .map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "value": format_rat(&r.value),
                        "exhaustive": r.exhaustive,
                    })
                );
            } else {
                println!("{}{}", format_rat(&r.value), if r.exhaustive { "" } else { " (truncated)" });
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check { condition, corpus, model, horizons, json } => {
            let model = load_model(&model.model)?;
            let opts = CheckOpts::new(horizons.horizon, horizons.closure_horizon);
            let items: Vec<(Option<String>, _)> = match (condition, corpus) {
                (Some(c), None) => {
                    vec![(None, parse_condition(&c).map_err(|e| e.to_string())?)]
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
                    corpus_conditions(&text)
                        .map_err(|e| e.to_string())?
                        .into_iter()
                        .map(|(l, c)| (Some(l), c))
                        .collect()
                }
                _ => return Err("give a condition or --corpus, not both or neither".into()),
            };
            let mut all_hold = true;
            for (label, c) in items {
                let mut r = check_condition(&c, &model, &opts).map_err(|e| e.to_string())?;
                r.label = label;
                all_hold &= r.holds();
                if json {
                    println!("{}", serde_json::to_string(&r).expect("report serializes"));
                } else {
                    let tag = r.label.as_deref().unwrap_or(&r.condition);
                    let verdict = if r.holds() { "holds" } else { "VIOLATED" };
                    println!("{tag}: {verdict} (max violation {}, witness {:?})", r.max_violation, r.witness);
                }
            }
            Ok(if all_hold { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::Classify { formula, json } => {
            let f = parse_formula(&formula).map_err(|e| e.to_string())?;
            let c = classify(&f);
            if json {
                println!("{}", serde_json::to_string(&c).expect("class serializes"));
            } else {
                println!("{c}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Range { formula, json } => {
            let f = parse_formula(&formula).map_err(|e| e.to_string())?;
            let attrs = attributes(&f);
            let range = value_range(&f).map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "bound": format_rat(&attrs.bound),
                        "lipschitz": format_rat(&attrs.lipschitz),
                        "free_vars": attrs.free_vars,
                        "range": range.values,
                    })
                );
            } else {
                println!("bound:     {}", format_rat(&attrs.bound));
                println!("lipschitz: {}", format_rat(&attrs.lipschitz));
                println!("free:      {}", attrs.free_vars.into_iter().collect::<Vec<_>>().join(", "));
                println!("range:     {{{}}}", range.values.join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Alpha { formula } => {
            let f = parse_formula(&formula).map_err(|e| e.to_string())?;
            println!("{}", format_rat(&induction_constant(&f).map_err(|e| e.to_string())?));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Suite { name, model, horizon, closure_horizon, json } => {
            if !SUITE_NAMES.contains(&name.as_str()) {
                return Err(format!(
                    "unknown suite '{name}' (expected one of: {})",
                    SUITE_NAMES.join(", ")
                ));
            }
            let model = load_model(&model.model)?;
            let report =
                run_suite(&name, &model, horizon, closure_horizon).map_err(|e| e.to_string())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                for r in &report.reports {
                    let tag = r.label.as_deref().unwrap_or(&r.condition);
                    let verdict = if r.holds() { "ok" } else { "FAIL" };
                    println!("{verdict:4} {tag} (max violation {})", r.max_violation);
                }
                println!(
                    "suite {} on {}: {}",
                    report.suite,
                    report.model,
                    if report.pass { "pass" } else { "FAIL" }
                );
            }
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::Extension { model, bound, horizon, json } => {
            let model = load_model(&model.model)?;
            let r = extension_check(&model, bound, horizon).map_err(|e| e.to_string())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            } else {
                println!("downward closed: {}", r.downward_closed);
                for a in r.sigma0.iter().chain(&r.sigma1) {
                    println!("  {} : {}", if a.agree { "agrees " } else { "differs" }, a.formula);
                }
                println!("pass: {}", r.pass);
            }
            Ok(if r.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::Nt(cmd) => run_nt(cmd).map(|_| ExitCode::SUCCESS),
    }
}

fn run_nt(cmd: NtCmd) -> Result<(), String> {
    let e = |err: nt::NtError| err.to_string();
    match cmd {
        NtCmd::Divmod { dividend, divisor, model } => {
            let m = load_model(&model.model)?;
            let (y, x) = (parse_element(&dividend, &m)?, parse_element(&divisor, &m)?);
            let r = nt::divmod(&m, &y, &x).map_err(e)?;
            println!("quotient:  {}", r.quotient);
            println!("remainder: {}", r.remainder);
        }
        NtCmd::Coprime { a, b, model } => {
            let m = load_model(&model.model)?;
            let r = nt::is_coprime(&m, &parse_element(&a, &m)?, &parse_element(&b, &m)?)
                .map_err(e)?;
            println!("{r}");
        }
        NtCmd::Bezout { x, y, model } => {
            let m = load_model(&model.model)?;
            let r = nt::bezout(&m, &parse_element(&x, &m)?, &parse_element(&y, &m)?).map_err(e)?;
            println!("{r}");
        }
        NtCmd::Crt { args, model } => {
            let m = load_model(&model.model)?;
            if args.len() < 2 || args.len() % 2 != 0 {
                return Err("crt expects pairs: m1 a1 [m2 a2 ...]".into());
            }
            let elems: Vec<Element> =
                args.iter().map(|a| parse_element(a, &m)).collect::<Result<_, _>>()?;
            let (moduli, residues): (Vec<_>, Vec<_>) = elems
                .chunks(2)
                .map(|p| (p[0].clone(), p[1].clone()))
                .unzip();
            println!("{}", nt::crt(&m, &moduli, &residues).map_err(e)?);
        }
        NtCmd::Pair { x, y, model } => {
            let m = load_model(&model.model)?;
            println!("{}", nt::pair(&m, &parse_element(&x, &m)?, &parse_element(&y, &m)?).map_err(e)?);
        }
        NtCmd::Unpair { z, model } => {
            let m = load_model(&model.model)?;
            let (x, y) = nt::unpair(&m, &parse_element(&z, &m)?).map_err(e)?;
            println!("{x} {y}");
        }
        NtCmd::Beta { x, i, model } => {
            let m = load_model(&model.model)?;
            println!("{}", nt::beta(&m, &parse_element(&x, &m)?, &parse_element(&i, &m)?).map_err(e)?);
        }
        NtCmd::Encode { items, model } => {
            let m = load_model(&model.model)?;
            if items.is_empty() {
                return Err("encode expects at least one item".into());
            }
            let items: Vec<Element> =
                items.iter().map(|a| parse_element(a, &m)).collect::<Result<_, _>>()?;
            let coded = nt::encode_sequence(&m, &items).map_err(e)?;
            println!("code:   {}", coded.code);
            println!("length: {}", coded.length);
        }
        NtCmd::Factorial { x, model } => {
            let m = load_model(&model.model)?;
            println!("{}", nt::factorial(&m, &parse_element(&x, &m)?).map_err(e)?);
        }
        NtCmd::Irred { p, model, horizon } => {
            let m = load_model(&model.model)?;
            let p = parse_element(&p, &m)?;
            let h = horizon.unwrap_or_else(|| nt::default_prime_horizon(&p));
            println!("{}", format_rat(&nt::irred_value(&m, &p, h).map_err(e)?));
        }
        NtCmd::Prime { p, model, horizon } => {
            let m = load_model(&model.model)?;
            let p = parse_element(&p, &m)?;
            let h = horizon.unwrap_or_else(|| nt::default_prime_horizon(&p));
            println!("{}", format_rat(&nt::prime_value(&m, &p, h).map_err(e)?));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => fail(msg),
    }
}
