use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use euler_ds::identities::{
    check_key_identity, check_shuffle_identity, check_stuffle_identity, distribution_check, key_residual_via_parts,
    cube_identity_residual, IdentityCheck, ShuffleVariant,
};
use euler_ds::numeval::{Evaluator, PrecisionContext};
use euler_ds::products::{shuffle, stuffle_words};
use euler_ds::relations::{
    basis_for, gen_all, gen_eds, gen_fds, index_pretty, index_string, BasisChoice, ReducedTable, Relation,
};
use euler_ds::words::{Letter, SignedIndex, Word};
use euler_ds::{fixtures, Error};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "eulerds", version, about = "Double shuffle relations and numerics for alternating Euler sums")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BasisArg {
    Default,
    Zlobin,
    Auto,
}

impl From<BasisArg> for BasisChoice {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Default => BasisChoice::Default,
            BasisArg::Zlobin => BasisChoice::Zlobin,
            BasisArg::Auto => BasisChoice::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ProductKind {
    Shuffle,
    Stuffle,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum RelationSet {
    Fds,
    Eds,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert between a signed index (`-2,1`) and a word (`acc`, `a2cc`).
    Convert {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Shuffle and/or stuffle product of two words or indices.
    Product {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[arg(long, value_enum, default_value_t = ProductKind::Both)]
        kind: ProductKind,
    },
    /// List the generated relations of one weight.
    Relations {
        #[arg(long)]
        weight: usize,
        #[arg(long, value_enum, default_value_t = RelationSet::All)]
        set: RelationSet,
    },
    /// Solve the relations of one weight over a basis.
    Reduce {
        #[arg(long)]
        weight: usize,
        #[arg(long, value_enum, default_value_t = BasisArg::Default)]
        basis: BasisArg,
        /// Compare with the reference tables; exit 1 on mismatch.
        #[arg(long)]
        check_fixtures: bool,
        /// Read reference tables from this directory instead of the built-in copies.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Check the cut identities for n up to `--n` and the numeric identities.
    Verify {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        prec: u32,
    },
    /// Evaluate a convergent Euler sum.
    Eval {
        #[arg(allow_hyphen_values = true)]
        input: String,
        #[arg(long, default_value_t = 30)]
        prec: u32,
    },
}

/// Everything needed to rerun a command.
#[derive(Serialize)]
struct RunConfig {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    precision: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<BasisArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    option: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture_dir: Option<String>,
    format: Format,
    jobs: Option<usize>,
}

impl RunConfig {
    fn new(command: &'static str, cli: &Cli) -> Self {
        RunConfig {
            command,
            input: None,
            weight: None,
            n: None,
            precision: None,
            basis: None,
            option: None,
            fixture_dir: None,
            format: cli.format,
            jobs: cli.jobs,
        }
    }
}

enum Failure {
    /// Bad input or arguments.
    Usage(String),
    /// A check did not hold.
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(format: Format, config: RunConfig, result: Value, human: impl FnOnce() -> String) {
    match format {
        Format::Json => {
            let out = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "result": result,
            });
            write_out(&format!("{}\n", serde_json::to_string_pretty(&out).expect("serializable")));
        }
        Format::Human => write_out(&human()),
    }
}

// A closed pipe (e.g. `| head`) is not an error.
fn write_out(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

/// Index strings contain only digits, signs and commas; anything else is a
/// word, where `a3` abbreviates `aaa`.
fn parse_word_like(s: &str) -> Result<Word, Failure> {
    let s = s.trim();
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '-' || c == ',' || c == ' ') {
        let k: SignedIndex = s.parse()?;
        return Ok(k.to_word()?.flatten());
    }
    let chars: Vec<char> = s.chars().collect();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let l = Letter::from_char(chars[i])
            .ok_or_else(|| Failure::Usage(format!("{s}: unexpected {:?} at position {i}", chars[i])))?;
        i += 1;
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let reps = if i == start {
            1
        } else {
            if l != Letter::A {
                return Err(Failure::Usage(format!("{s}: exponents are only allowed on a (position {start})")));
            }
            chars[start..i]
                .iter()
                .collect::<String>()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("{s}: bad exponent at position {start}")))?
        };
        letters.extend(std::iter::repeat_n(l, reps));
    }
    Ok(Word::new(letters))
}

fn cmd_convert(cli: &Cli, input: &str) -> Outcome {
    let w = parse_word_like(input)?;
    if !w.is_in_a1() {
        return Err(Failure::Usage(format!(
            "{input}: word {w} ends in a, so it is neither admissible nor in the domain of the converting rule"
        )));
    }
    let c = w.to_composite()?;
    let k = c.to_index();
    let result = json!({
        "index": k.to_string(),
        "pretty": k.pretty(),
        "composite": c.to_string(),
        "word": w.to_string(),
        "compact": w.compact(),
        "weight": w.weight(),
        "depth": c.depth(),
        "admissible": w.is_admissible(),
    });
    let mut config = RunConfig::new("convert", cli);
    config.input = Some(vec![input.to_string()]);
    emit(cli.format, config, result, || {
        format!(
            "index       {k}  ζ({})\ncomposite   {c}\nword        {w}\ncompact     {}\nweight      {}\ndepth       {}\nadmissible  {}\n",
            k.pretty(),
            w.compact(),
            w.weight(),
            c.depth(),
            w.is_admissible()
        )
    });
    Ok(())
}

fn cmd_product(cli: &Cli, left: &str, right: &str, kind: ProductKind) -> Outcome {
    let u = parse_word_like(left)?;
    let v = parse_word_like(right)?;
    let mut result = serde_json::Map::new();
    let mut human = String::new();
    if matches!(kind, ProductKind::Shuffle | ProductKind::Both) {
        let p = shuffle(&u, &v);
        human.push_str(&format!("{u} ш {v} = {p}\n"));
        result.insert("shuffle".into(), p.to_json());
    }
    if matches!(kind, ProductKind::Stuffle | ProductKind::Both) {
        let p = stuffle_words(&u, &v)?;
        human.push_str(&format!("{u} * {v} = {p}\n"));
        result.insert("stuffle".into(), p.to_json());
    }
    let mut config = RunConfig::new("product", cli);
    config.input = Some(vec![left.to_string(), right.to_string()]);
    config.option = Some(format!("{kind:?}").to_lowercase());
    emit(cli.format, config, Value::Object(result), || human);
    Ok(())
}

fn check_weight(weight: usize) -> Result<(), Failure> {
    if weight < 2 {
        return Err(Failure::Usage("weight must be at least 2".into()));
    }
    Ok(())
}

fn cmd_relations(cli: &Cli, weight: usize, set: RelationSet) -> Outcome {
    check_weight(weight)?;
    let rels: Vec<Relation> = match set {
        RelationSet::Fds => gen_fds(weight),
        RelationSet::Eds => gen_eds(weight, weight - 1)?,
        RelationSet::All => gen_all(weight)?,
    };
    let mut config = RunConfig::new("relations", cli);
    config.weight = Some(weight);
    config.option = Some(format!("{set:?}").to_lowercase());
    let result = json!({
        "count": rels.len(),
        "relations": rels.iter().map(Relation::to_json).collect::<Vec<_>>(),
    });
    emit(cli.format, config, result, || {
        let mut s = String::new();
        for r in &rels {
            s.push_str(&format!("{}: {} = 0\n", r.provenance, r.combo));
        }
        s.push_str(&format!("{} relations\n", rels.len()));
        s
    });
    Ok(())
}

fn load_reference(dir: Option<&PathBuf>, name: &str) -> Result<ReducedTable, Failure> {
    match dir {
        None => Ok(match name {
            "weight5_zlobin.json" => fixtures::zlobin_table()?,
            _ => {
                let n: usize = name
                    .trim_start_matches("weight")
                    .trim_end_matches(".json")
                    .parse()
                    .map_err(|_| Failure::Usage(format!("no reference table {name}")))?;
                fixtures::table(n)?
            }
        }),
        Some(d) => {
            let path = d.join(name);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let v: Value =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(ReducedTable::from_json(&v)?)
        }
    }
}

#[derive(Serialize)]
struct FixtureReport {
    matched: usize,
    mismatched: Vec<String>,
    missing_from_solution: Vec<String>,
    not_in_reference: Vec<String>,
}

fn compare(got: &ReducedTable, reference: &ReducedTable) -> Result<FixtureReport, Failure> {
    if got.basis != reference.basis {
        return Err(Failure::Usage("reference table uses a different basis".into()));
    }
    let mut report = FixtureReport {
        matched: 0,
        mismatched: Vec::new(),
        missing_from_solution: Vec::new(),
        not_in_reference: Vec::new(),
    };
    for (w, row) in &reference.rows {
        match got.row(w) {
            Some(r) if r == row => report.matched += 1,
            Some(_) => report.mismatched.push(index_string(w)),
            None => report.missing_from_solution.push(index_string(w)),
        }
    }
    for w in got.ordered_atoms() {
        if !reference.rows.contains_key(w) && !got.basis.contains(w) {
            report.not_in_reference.push(index_string(w));
        }
    }
    Ok(report)
}

fn cmd_reduce(cli: &Cli, weight: usize, basis: BasisArg, check: bool, dir: Option<&PathBuf>) -> Outcome {
    check_weight(weight)?;
    let rels = gen_all(weight)?;
    let b = basis_for(basis.into(), weight, &rels)?;
    let table = euler_ds::relations::solve(weight, &rels, &b)?;
    let report = if check {
        let name = match basis {
            BasisArg::Default => format!("weight{weight}.json"),
            BasisArg::Zlobin if weight == 5 => "weight5_zlobin.json".to_string(),
            _ => return Err(Failure::Usage(format!("no reference table for weight {weight} with this basis"))),
        };
        Some(compare(&table, &load_reference(dir, &name)?)?)
    } else {
        None
    };
    let mut config = RunConfig::new("reduce", cli);
    config.weight = Some(weight);
    config.basis = Some(basis);
    config.option = check.then(|| "check-fixtures".to_string());
    config.fixture_dir = dir.map(|d| d.display().to_string());
    let mut result = json!({ "table": table.to_json() });
    if let Some(r) = &report {
        result["fixture_check"] = serde_json::to_value(r).expect("serializable");
    }
    emit(cli.format, config, result, || {
        let mut s = table.to_human();
        if let Some(r) = &report {
            s.push_str(&format!("reference rows matched: {}\n", r.matched));
            for k in &r.mismatched {
                s.push_str(&format!("MISMATCH ζ({})\n", pretty_of(k)));
            }
            for k in &r.missing_from_solution {
                s.push_str(&format!("MISSING ζ({})\n", pretty_of(k)));
            }
            for k in &r.not_in_reference {
                s.push_str(&format!("ζ({}) not in reference table\n", pretty_of(k)));
            }
        }
        s
    });
    match report {
        Some(r) if !r.mismatched.is_empty() || !r.missing_from_solution.is_empty() => Err(Failure::Mismatch),
        _ => Ok(()),
    }
}

fn pretty_of(index: &str) -> String {
    index.parse::<SignedIndex>().map(|k| k.pretty()).unwrap_or_else(|_| index.to_string())
}

fn identity_json(c: &IdentityCheck) -> Value {
    json!({"holds": c.holds(), "terms": c.terms, "residual_terms": c.residual.len()})
}

fn cmd_verify(cli: &Cli, n_max: usize, prec: u32) -> Outcome {
    if n_max == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    if prec < 10 {
        return Err(Failure::Usage("--prec must be at least 10".into()));
    }
    let ev = Evaluator::new(PrecisionContext::new(prec));
    let tol = 10f64.powi(-(prec as i32 - 5));
    let mut ok = true;
    let mut rows = Vec::new();
    let mut human = String::new();
    for n in 1..=n_max {
        let start = Instant::now();
        let st = check_stuffle_identity(n)?;
        let sc = check_shuffle_identity(n, ShuffleVariant::CLead)?;
        let sb = check_shuffle_identity(n, ShuffleVariant::BLead)?;
        let key = check_key_identity(n)?;
        let parts_agree = key_residual_via_parts(n)? == key.residual;
        let main = cube_identity_residual(n, &ev)?.to_f64();
        let dist = distribution_check(n, &ev)?.to_f64();
        let pass = st.holds() && sc.holds() && sb.holds() && key.holds() && parts_agree && main < tol && dist < tol;
        ok &= pass;
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        human.push_str(&format!(
            "n={n} {} stuffle {} ({} terms), shuffle c {} ({}), shuffle b {} ({}), key {} ({}) via parts {}, \
             |ζ({{3}}^n) - 8^n ζ({{2̄,1}}^n)| = {main:.1e}, distribution {dist:.1e} [{:.2?}]\n",
            if pass { "PASS" } else { "FAIL" },
            mark(st.holds()),
            st.terms,
            mark(sc.holds()),
            sc.terms,
            mark(sb.holds()),
            sb.terms,
            mark(key.holds()),
            key.terms,
            mark(parts_agree),
            start.elapsed(),
        ));
        rows.push(json!({
            "n": n,
            "pass": pass,
            "stuffle": identity_json(&st),
            "shuffle_c_lead": identity_json(&sc),
            "shuffle_b_lead": identity_json(&sb),
            "key": identity_json(&key),
            "key_matches_parts": parts_agree,
            "main_residual": format!("{main:.3e}"),
            "distribution_residual": format!("{dist:.3e}"),
        }));
    }
    let mut config = RunConfig::new("verify", cli);
    config.n = Some(n_max);
    config.precision = Some(prec);
    let result = json!({"pass": ok, "tolerance": format!("{tol:.0e}"), "checks": rows});
    emit(cli.format, config, result, || human);
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn cmd_eval(cli: &Cli, input: &str, prec: u32) -> Outcome {
    let w = parse_word_like(input)?;
    if !w.is_admissible() {
        return Err(Failure::Usage(format!("{input}: not admissible, the sum diverges")));
    }
    let ev = Evaluator::new(PrecisionContext::new(prec));
    let r = ev.eval_word(&w)?;
    let k = index_pretty(&w);
    let value = r.value.to_decimal(prec as usize);
    let mut config = RunConfig::new("eval", cli);
    config.input = Some(vec![input.to_string()]);
    config.precision = Some(prec);
    let result = json!({"index": index_string(&w), "word": w.to_string(), "value": value, "bound": format!("{:.1e}", r.bound)});
    emit(cli.format, config, result, || format!("ζ({k}) = {value}  (±{:.1e})\n", r.bound));
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Convert { input } => cmd_convert(cli, input),
        Command::Product { left, right, kind } => cmd_product(cli, left, right, *kind),
        Command::Relations { weight, set } => cmd_relations(cli, *weight, *set),
        Command::Reduce {
            weight,
            basis,
            check_fixtures,
            fixtures,
        } => cmd_reduce(cli, *weight, *basis, *check_fixtures, fixtures.as_ref()),
        Command::Verify { n, prec } => cmd_verify(cli, *n, *prec),
        Command::Eval { input, prec } => cmd_eval(cli, input, *prec),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
