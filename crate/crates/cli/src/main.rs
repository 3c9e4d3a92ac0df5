//! `magma`: command-line access to the cyclic free magma library.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use magma_core::arithmetic::{divisor_chain, factorize, gcd, is_prime, left_divide, multiply_capped};
use magma_core::counting::{
    abundance_gap, catalan_count, prime_count_closed, prime_count_oracle, prime_count_recursive,
};
use magma_core::element::{enumerate_level, format_element, parse_element, parse_set, Style};
use magma_core::primeset::{
    arborescence, decomposition_digraph, enumerate_prime_sets, enumerate_rooted_trees, is_closed_set,
    is_prime_set, kmax_level, segment_closure, spectrum, Family, PrimeSet,
};
use magma_core::submagma::{submagma, symmetric_analyze};
use magma_core::verify::{self, Suite};
use magma_core::{dot, Elem, Limits, MagmaError};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "magma", version, about = "Exact computation in the cyclic free magma")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit one JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Write a Graphviz rendering of the result to this file.
    #[arg(long, global = true, value_name = "FILE")]
    dot: Option<PathBuf>,
    /// Length bound for truncated computations.
    #[arg(long, global = true, value_name = "L")]
    max_len: Option<usize>,
    /// Cap on the number of elements enumerated per level.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<u64>,
    /// Worker threads for parallel scans.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an element and describe it.
    Eval { element: String },
    /// List every element of length n.
    Enum { n: usize },
    /// Product x·y.
    Mul { x: String, y: String },
    /// Left quotient of x by a.
    Divide { a: String, x: String },
    /// Greatest common left divisor.
    Gcd { x: String, y: String },
    /// Prime factorization.
    Factor { x: String },
    /// Prime counts.
    #[command(subcommand)]
    Primes(PrimesCmd),
    /// Finitely generated submagmas.
    #[command(subcommand)]
    Submagma(SubmagmaCmd),
    /// Additive prime sets.
    #[command(subcommand)]
    Primeset(PrimesetCmd),
    /// Rooted-tree families of prime sets of a given size.
    Families {
        #[arg(long)]
        size: usize,
    },
    /// Levels of the k-maximal submagma diagram.
    Hasse {
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Replay a suite of bounded checks.
    Verify { suite: SuiteArg },
}

#[derive(Subcommand)]
enum PrimesCmd {
    /// Number of primes of length n.
    Count {
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Recursive)]
        method: Method,
    },
    /// Tab-separated n, c_n, Pi_n and composite fraction for n = 1..max.
    Table {
        #[arg(long)]
        max: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Recursive,
    Closed,
    Oracle,
}

#[derive(Subcommand)]
enum SubmagmaCmd {
    /// Minimal generators of the submagma generated by a set.
    Gens { set: String },
    /// Membership of an element in the submagma generated by a set.
    Member { set: String, element: String },
}

#[derive(Subcommand)]
enum PrimesetCmd {
    /// Test a set for the prime and closed properties.
    Check { set: String },
    /// Spectrum of a prime set.
    Spectrum { set: String },
    /// Every prime set of a given size within the length bound.
    Enum {
        #[arg(long)]
        size: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Arithmetic,
    Ideals,
    Spectra,
    Families,
    All,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Magma(#[from] MagmaError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("could not write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("check failed: {0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Magma(MagmaError::Syntax { .. }) | CliError::Usage(_) => 2,
            CliError::Magma(MagmaError::Domain(_)) | CliError::Failed(_) => 1,
            CliError::Magma(MagmaError::Resource { .. }) | CliError::Io { .. } => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "usage",
            1 => "domain",
            _ => "resource",
        }
    }
}

/// What a command produced: JSON payload plus human-readable lines.
struct Output {
    params: Value,
    result: Value,
    text: String,
    failed: Option<String>,
}

impl Output {
    fn new(params: Value, result: Value, text: String) -> Self {
        Output { params, result, text, failed: None }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    if let Some(n) = g.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("magma: {e}");
        }
    }
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok(out) => {
            let code = if out.failed.is_some() { 1 } else { 0 };
            if g.json {
                let doc = json!({"command": name, "parameters": out.params, "result": out.result, "exit": code});
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                print!("{}", out.text);
            }
            if let Some(msg) = out.failed {
                eprintln!("magma: {}", CliError::Failed(msg));
            }
            ExitCode::from(code)
        }
        Err(e) => {
            let code = e.exit_code();
            if g.json {
                let doc = json!({"command": name, "error": {"kind": e.kind(), "message": e.to_string()}, "exit": code});
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            eprintln!("magma: {e}");
            ExitCode::from(code)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Enum { .. } => "enum",
        Command::Mul { .. } => "mul",
        Command::Divide { .. } => "divide",
        Command::Gcd { .. } => "gcd",
        Command::Factor { .. } => "factor",
        Command::Primes(PrimesCmd::Count { .. }) => "primes count",
        Command::Primes(PrimesCmd::Table { .. }) => "primes table",
        Command::Submagma(SubmagmaCmd::Gens { .. }) => "submagma gens",
        Command::Submagma(SubmagmaCmd::Member { .. }) => "submagma member",
        Command::Primeset(PrimesetCmd::Check { .. }) => "primeset check",
        Command::Primeset(PrimesetCmd::Spectrum { .. }) => "primeset spectrum",
        Command::Primeset(PrimesetCmd::Enum { .. }) => "primeset enum",
        Command::Families { .. } => "families",
        Command::Hasse { .. } => "hasse",
        Command::Verify { .. } => "verify",
    }
}

fn elem(text: &str) -> Result<Elem, CliError> {
    Ok(parse_element(text)?)
}

fn set(text: &str) -> Result<BTreeSet<Elem>, CliError> {
    Ok(parse_set(text)?)
}

fn set_text(s: &BTreeSet<Elem>) -> String {
    let items: Vec<String> = s.iter().map(Elem::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn write_dot(path: &Option<PathBuf>, contents: impl FnOnce() -> String) -> Result<(), CliError> {
    if let Some(p) = path {
        std::fs::write(p, contents())
            .map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
    }
    Ok(())
}

fn positive(v: Option<usize>, default: usize) -> Result<usize, CliError> {
    match v {
        Some(0) => Err(CliError::Usage("--max-len must be positive".into())),
        Some(n) => Ok(n),
        None => Ok(default),
    }
}

fn describe(x: Elem) -> Value {
    json!({
        "canonical": format_element(x, Style::Canonical),
        "pretty": x.to_string(),
        "length": x.length().to_string(),
        "prime": is_prime(x),
    })
}

fn describe_text(x: Elem) -> String {
    format!(
        "canonical\t{:#}\npretty\t{x}\nlength\t{}\nprime\t{}\n",
        x,
        x.length(),
        is_prime(x)
    )
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    let mut limits = Limits::default();
    if let Some(cap) = g.cap {
        limits.max_level_elements = cap;
    }
    let limits = limits;
    Ok(match &cli.command {
        Command::Eval { element } => {
            let x = elem(element)?;
            Output::new(json!({"element": element}), describe(x), describe_text(x))
        }
        Command::Enum { n } => {
            let level = enumerate_level(*n, &limits)?;
            let items: Vec<String> = level.iter().map(Elem::to_string).collect();
            let text = items.iter().map(|s| format!("{s}\n")).collect();
            Output::new(json!({"n": n}), json!({"count": items.len(), "elements": items}), text)
        }
        Command::Mul { x, y } => {
            let (a, b) = (elem(x)?, elem(y)?);
            let p = multiply_capped(a, b, limits.max_product_len)?;
            Output::new(json!({"x": x, "y": y}), describe(p), describe_text(p))
        }
        Command::Divide { a, x } => {
            let (d, v) = (elem(a)?, elem(x)?);
            let q = left_divide(d, v);
            let text = match q {
                Some(q) => format!("{q}\n"),
                None => "none\n".into(),
            };
            Output::new(json!({"a": a, "x": x}), json!({"quotient": q}), text)
        }
        Command::Gcd { x, y } => {
            let d = gcd(elem(x)?, elem(y)?);
            Output::new(json!({"x": x, "y": y}), json!({"gcd": d}), format!("{d}\n"))
        }
        Command::Factor { x } => {
            let v = elem(x)?;
            let f = factorize(v);
            let parts: Vec<String> = f.factors.iter().map(Elem::to_string).collect();
            let text = format!("{}\n", if parts.is_empty() { "1".to_string() } else { parts.join(" · ") });
            let chain = divisor_chain(v);
            Output::new(json!({"x": x}), json!({"factors": f.factors, "divisor_chain": chain}), text)
        }
        Command::Primes(PrimesCmd::Count { n, method }) => {
            let count = match method {
                Method::Recursive => prime_count_recursive(*n),
                Method::Closed => prime_count_closed(*n)?,
                Method::Oracle => prime_count_oracle(*n, &limits)?,
            };
            Output::new(json!({"n": n}), json!({"count": count.to_string()}), format!("{count}\n"))
        }
        Command::Primes(PrimesCmd::Table { max }) => primes_table(*max)?,
        Command::Submagma(SubmagmaCmd::Gens { set: s }) => {
            let raw: Vec<Elem> = set(s)?.into_iter().collect();
            let n = submagma(&raw);
            let sym = symmetric_analyze(&n);
            let text = format!("generators\t{}\nrank\t{}\nsymmetric\t{}\n", n, n.rank(), sym.is_symmetric);
            Output::new(
                json!({"set": s}),
                json!({"generators": n.generators(), "rank": n.rank(), "symmetry": sym}),
                text,
            )
        }
        Command::Submagma(SubmagmaCmd::Member { set: s, element }) => {
            let raw: Vec<Elem> = set(s)?.into_iter().collect();
            let x = elem(element)?;
            let member = submagma(&raw).contains(x);
            Output::new(json!({"set": s, "element": element}), json!({"member": member}), format!("{member}\n"))
        }
        Command::Primeset(PrimesetCmd::Check { set: s }) => {
            let p = set(s)?;
            let (prime, closed) = (is_prime_set(&p), is_closed_set(&p));
            let closure = segment_closure(&p);
            let edges = if prime { decomposition_digraph(&p)? } else { Vec::new() };
            let tree = if prime && !p.is_empty() { Some(arborescence(&p)?) } else { None };
            write_dot(&g.dot, || {
                let name = dot::graph_name("primeset check", &[("set", set_text(&p))]);
                dot::digraph_dot(&name, &p, &edges)
            })?;
            let mut text = format!("prime\t{prime}\nclosed\t{closed}\nclosure\t{}\n", set_text(&closure));
            if let Some(t) = &tree {
                text.push_str(&format!("arborescence\t{t}\n"));
            }
            Output::new(
                json!({"set": s}),
                json!({"prime": prime, "closed": closed, "closure": closure, "edges": edges, "arborescence": tree}),
                text,
            )
        }
        Command::Primeset(PrimesetCmd::Spectrum { set: s }) => {
            let p = PrimeSet::new(set(s)?)?;
            let sp = spectrum(&p, &limits)?;
            write_dot(&g.dot, || {
                dot::spectrum_dot(&dot::graph_name("primeset spectrum", &[("set", p.to_string())]), &sp)
            })?;
            let mut text = format!("nodes\t{}\nlength\t{}\nwidth\t{}\n", sp.len(), sp.length(), sp.width());
            for i in 0..sp.len() {
                text.push_str(&format!("node\t{i}\t{}\n", set_text(&sp.node_set(i))));
            }
            Output::new(json!({"set": s}), serde_json::to_value(&sp).expect("json"), text)
        }
        Command::Primeset(PrimesetCmd::Enum { size }) => {
            let len = positive(g.max_len, 5)?;
            let sets = enumerate_prime_sets(*size, len, &limits)?;
            let text = sets.iter().map(|p| format!("{p}\n")).collect();
            Output::new(
                json!({"size": size, "max_len": len}),
                json!({"count": sets.len(), "sets": sets}),
                text,
            )
        }
        Command::Families { size } => {
            let len = positive(g.max_len, 5)?;
            let families = enumerate_rooted_trees(*size, &limits)?
                .into_iter()
                .map(|t| Family::new(t, len, &limits))
                .collect::<Result<Vec<_>, _>>()?;
            let mut text = String::new();
            for f in &families {
                text.push_str(&format!(
                    "{}\t{}\t{} instances\n",
                    f.tree,
                    f.scheme.terms().join(", "),
                    f.instances.len()
                ));
            }
            Output::new(json!({"size": size, "max_len": len}), serde_json::to_value(&families).expect("json"), text)
        }
        Command::Hasse { levels } => {
            let len = positive(g.max_len, 3)?;
            let all = (0..=*levels).map(|k| kmax_level(k, len, &limits)).collect::<Result<Vec<_>, _>>()?;
            let name = dot::graph_name("hasse", &[("levels", levels.to_string()), ("max_len", len.to_string())]);
            let rendered = dot::hasse_dot(&name, &all);
            let text = if g.dot.is_some() {
                all.iter().enumerate().map(|(k, l)| format!("level\t{k}\t{}\n", l.len())).collect()
            } else {
                rendered.clone()
            };
            write_dot(&g.dot, || rendered)?;
            Output::new(json!({"levels": levels, "max_len": len}), serde_json::to_value(&all).expect("json"), text)
        }
        Command::Verify { suite } => {
            let (suite, default) = match suite {
                SuiteArg::Arithmetic => (Suite::Arithmetic, Some(10)),
                SuiteArg::Ideals => (Suite::Ideals, Some(12)),
                SuiteArg::Spectra => (Suite::Spectra, Some(5)),
                SuiteArg::Families => (Suite::Families, Some(5)),
                SuiteArg::All => (Suite::All, None),
            };
            let len = match (g.max_len, default) {
                (None, None) => return Err(CliError::Usage("verify all needs an explicit --max-len".into())),
                (v, d) => positive(v, d.unwrap_or(0))?,
            };
            let records = verify::run(suite, len, &limits)?;
            let mut text = String::new();
            for r in &records {
                let status = if r.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status}\t{}\tbound={}", r.check, r.bound));
                if let Some(w) = &r.witness {
                    text.push_str(&format!("\twitness={w}"));
                }
                text.push('\n');
            }
            let failed = records
                .iter()
                .find(|r| !r.passed)
                .map(|r| format!("{} (counterexample: {})", r.check, r.witness.as_deref().unwrap_or("none")));
            let mut out = Output::new(json!({"max_len": len}), json!({"records": records}), text);
            out.failed = failed;
            out
        }
    })
}

fn primes_table(max: u64) -> Result<Output, CliError> {
    let mut text = String::from("n\tc_n\tPi_n\tcomposite_fraction\n");
    let mut rows = Vec::new();
    for n in 1..=max {
        let c = catalan_count(n);
        let pi = prime_count_recursive(n);
        let (num, den) = reduce(&c - &pi, c.clone());
        text.push_str(&format!("{n}\t{c}\t{pi}\t{num}/{den}\n"));
        let mut row = json!({"n": n, "c_n": c.to_string(), "pi_n": pi.to_string(), "composite_fraction": format!("{num}/{den}")});
        if n >= 16 {
            let gap = abundance_gap(n)?;
            row["abundance_bound_holds"] = json!(gap.holds);
        }
        rows.push(row);
    }
    Ok(Output::new(json!({"max": max}), json!({"rows": rows}), text))
}

fn reduce(num: BigUint, den: BigUint) -> (BigUint, BigUint) {
    let g = num.gcd(&den);
    if g.is_zero() {
        (num, den)
    } else {
        (num / &g, den / &g)
    }
}
