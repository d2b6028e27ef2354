use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use commutant_forge::casimir::find_casimirs;
use commutant_forge::closure::{close_algebra, name_generators, BracketTable};
use commutant_forge::commutant::{solve_commutant_of, CommutantResult};
use commutant_forge::expr::Symbols;
use commutant_forge::lie::{catalog_entry, CATALOG_LABELS};
use commutant_forge::poisson::generator_poly;
use commutant_forge::quantum::{close_quantum_algebra, format_symmetrized, symmetrize_generators, QuantumBracketTable};
use commutant_forge::random::DEFAULT_SEED;
use commutant_forge::realization::{realize_classical, RealizedTable};
use commutant_forge::regression::{self, verify_paper, Check, Expectations, Report, Status};
use commutant_forge::{Error, LieAlgebraModel, Polynomial, SubalgebraSpec};

#[derive(Parser)]
#[command(
    name = "commutant-forge",
    version,
    about = "Exact commutants of Lie subalgebras and their polynomial algebras"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the random points used in rank computations.
    #[arg(long, global = true, env = "COMMUTANT_FORGE_SEED")]
    seed: Option<u64>,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a Lie algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// Polynomial commutant of a subalgebra, stratified by degree.
    Commutant(Pipeline),
    /// Bracket table of the commutant generators.
    Close(Pipeline),
    /// Casimirs of the closed bracket table.
    Casimirs {
        #[command(flatten)]
        pipeline: Pipeline,
        /// Maximal degree of the Casimirs in the generators.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        degree: u32,
    },
    /// Commutator table of the symmetrized generators.
    Quantize(Pipeline),
    /// Differential-operator realization of a chain.
    Realize {
        #[arg(long)]
        chain: String,
    },
    /// Recompute the regression catalog.
    VerifyPaper {
        #[arg(long)]
        chain: Option<String>,
        /// Expectations file (defaults to the built-in catalog).
        #[arg(long, env = "COMMUTANT_FORGE_EXPECTATIONS")]
        expectations: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgebraAction {
    Show(AlgebraArg),
    Validate(AlgebraArg),
}

#[derive(Args)]
struct AlgebraArg {
    /// `c2` or a structure-constant JSON file.
    #[arg(long, default_value = "c2")]
    algebra: String,
}

#[derive(Args)]
struct Pipeline {
    /// `c2` or a structure-constant JSON file.
    #[arg(long, default_value = "c2")]
    algebra: String,
    /// Subalgebra label, `full`, or inline generators such as `x1 + x5, x3`.
    #[arg(long)]
    sub: Option<String>,
    /// Explicit commutant generators separated by `;`, used instead of solving.
    #[arg(long)]
    generators: Option<String>,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    max_degree: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    expression_degree: u32,
}

enum Failure {
    Usage(String),
    Expectation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Expectation(m)) => {
            eprintln!("{m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let json = cli.format == Format::Json;
    let (text, failure) = match &cli.command {
        Command::Algebra { action } => algebra_cmd(action, json)?,
        Command::Commutant(p) => (commutant_cmd(p, json)?, None),
        Command::Close(p) => (close_cmd(p, json)?, None),
        Command::Casimirs { pipeline, degree } => (casimirs_cmd(pipeline, *degree, seed, json)?, None),
        Command::Quantize(p) => (quantize_cmd(p, json)?, None),
        Command::Realize { chain } => realize_cmd(chain, json)?,
        Command::VerifyPaper { chain, expectations } => {
            let exps = Expectations::load(expectations.as_deref())?;
            let report = verify_paper(&exps, chain.as_deref(), seed)?;
            let fail = report.has_failures().then(|| format!("{} expectation(s) failed", report.count(Status::Fail)));
            (if json { report.to_json() + "\n" } else { report.render_text() }, fail)
        }
    };
    emit(cli.out.as_deref(), &text)?;
    match failure {
        Some(m) => Err(Failure::Expectation(m)),
        None => Ok(()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes") + "\n"
}

fn load_algebra(source: &str, checked: bool) -> CliResult<LieAlgebraModel> {
    if source == "c2" {
        return Ok(LieAlgebraModel::c2());
    }
    let s =
        std::fs::read_to_string(source).map_err(|e| Failure::Usage(format!("cannot read algebra `{source}`: {e}")))?;
    Ok(if checked { LieAlgebraModel::from_json(&s)? } else { LieAlgebraModel::from_json_unchecked(&s)? })
}

fn algebra_cmd(action: &AlgebraAction, json: bool) -> CliResult<(String, Option<String>)> {
    match action {
        AlgebraAction::Show(a) => {
            let g = load_algebra(&a.algebra, false)?;
            if json {
                return Ok((g.to_json() + "\n", None));
            }
            let syms = Symbols::Named(g.names().to_vec());
            let mut out = format!("dimension {}\n", g.dim());
            for j in 0..g.dim() {
                for k in j + 1..g.dim() {
                    let v = g.structure(j, k);
                    if !v.is_empty() {
                        let p = Polynomial::from_terms(
                            g.dim(),
                            v.iter().map(|(l, c)| (commutant_forge::Monomial::var(g.dim(), *l), c.clone())),
                        );
                        out.push_str(&format!("[{},{}] = {}\n", g.names()[j], g.names()[k], p.format_with(&syms)));
                    }
                }
            }
            Ok((out, None))
        }
        AlgebraAction::Validate(a) => {
            let g = load_algebra(&a.algebra, false)?;
            let r = g.validate();
            let text = if json {
                to_json_text(&json!({
                    "valid": r.is_valid(),
                    "antisymmetry_failures": r.antisymmetry_failures,
                    "jacobi_failures": r.jacobi_failures,
                }))
            } else if r.is_valid() {
                "valid: antisymmetry and Jacobi identity hold\n".to_string()
            } else {
                let mut s = String::from("invalid\n");
                for (j, k) in &r.antisymmetry_failures {
                    s.push_str(&format!("antisymmetry fails for ({j}, {k})\n"));
                }
                for (i, j, k) in &r.jacobi_failures {
                    s.push_str(&format!("Jacobi fails for ({i}, {j}, {k})\n"));
                }
                s
            };
            let fail = (!r.is_valid()).then(|| "algebra failed validation".to_string());
            Ok((text, fail))
        }
    }
}

fn valid_labels(exps: &Expectations) -> String {
    let mut l: Vec<String> = CATALOG_LABELS.iter().map(|s| s.to_string()).collect();
    l.push("full".into());
    for c in exps.labels() {
        if !l.contains(&c) {
            l.push(c);
        }
    }
    l.join(", ")
}

/// Constraints whose commutant is taken: subalgebra generators or a chain invariant.
fn resolve_constraints(g: &LieAlgebraModel, is_c2: bool, sub: &str) -> CliResult<(String, Vec<Polynomial>)> {
    let n = g.dim();
    if sub.contains(['x', 'X']) {
        let mut vecs = Vec::new();
        for part in sub.split([',', ';']).filter(|s| !s.trim().is_empty()) {
            let p = Polynomial::parse(&part.to_lowercase(), n)?;
            if !p.is_homogeneous() || p.degree() != Some(1) {
                return Err(Failure::Usage(format!("inline generator `{}` is not a linear form", part.trim())));
            }
            vecs.push((0..n).map(|i| p.coeff(&commutant_forge::Monomial::var(n, i))).collect());
        }
        let spec = SubalgebraSpec::new(g, "inline", vecs)?;
        return Ok((spec.label.clone(), spec.generators.iter().map(|v| generator_poly(v)).collect()));
    }
    if sub == "full" {
        let spec = SubalgebraSpec::full(g, "full");
        return Ok(("full".into(), spec.generators.iter().map(|v| generator_poly(v)).collect()));
    }
    let exps = Expectations::builtin();
    let unknown = || Failure::Usage(format!("unknown subalgebra `{sub}`; valid labels: {}", valid_labels(&exps)));
    if !is_c2 {
        return Err(Failure::Usage(format!(
            "subalgebra labels refer to c2; use `full` or inline generators for `{sub}`"
        )));
    }
    if let Ok(spec) = catalog_entry(sub) {
        return Ok((sub.to_string(), spec.generators.iter().map(|v| generator_poly(v)).collect()));
    }
    let chain = exps.chain(sub).map_err(|_| unknown())?;
    let (_, cs) = chain.constraints(g)?;
    Ok((sub.to_string(), cs))
}

fn commutant_of(p: &Pipeline) -> CliResult<(LieAlgebraModel, CommutantResult)> {
    let g = load_algebra(&p.algebra, true)?;
    let sub = p.sub.as_deref().ok_or_else(|| Failure::Usage("--sub is required".into()))?;
    let (label, cs) = resolve_constraints(&g, p.algebra == "c2", sub)?;
    let res = solve_commutant_of(&g, &label, &cs, p.max_degree)?;
    Ok((g, res))
}

/// Generators for the closure steps: explicit list, catalog chain, or computed strata.
type Named = Vec<(String, Polynomial)>;

fn generators_of(p: &Pipeline) -> CliResult<(LieAlgebraModel, String, Named)> {
    if let Some(list) = &p.generators {
        let g = load_algebra(&p.algebra, true)?;
        let polys = list
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| Polynomial::parse(s, g.dim()))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok((g, "custom".into(), name_generators("A", &polys)));
    }
    let sub = p.sub.as_deref().ok_or_else(|| Failure::Usage("--sub or --generators is required".into()))?;
    if p.algebra == "c2" {
        let exps = Expectations::builtin();
        if let Ok(chain) = exps.chain(sub) {
            let g = LieAlgebraModel::c2();
            let named = chain.generator_polys(g.dim())?;
            return Ok((g, sub.to_string(), named));
        }
    }
    let (g, res) = commutant_of(p)?;
    let named = name_generators("A", &res.all());
    Ok((g, res.subalgebra, named))
}

fn poly_strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn commutant_cmd(p: &Pipeline, json: bool) -> CliResult<String> {
    let (_, res) = commutant_of(p)?;
    if json {
        let mut strata = Map::new();
        for (h, ps) in &res.strata {
            strata.insert(h.to_string(), json!(poly_strings(ps)));
        }
        let kernel: Map<String, Value> = res.kernel_dims.iter().map(|(h, d)| (h.to_string(), json!(d))).collect();
        return Ok(to_json_text(&json!({
            "subalgebra": res.subalgebra,
            "max_degree": res.max_degree,
            "strata": strata,
            "kernel_dims": kernel,
        })));
    }
    let mut out = format!("commutant of {} up to degree {}\n", res.subalgebra, res.max_degree);
    for h in 1..=res.max_degree {
        let new = res.stratum(h);
        out.push_str(&format!("degree {h}: kernel {}, new {}\n", res.kernel_dims[&h], new.len()));
        for q in new {
            out.push_str(&format!("  {q}\n"));
        }
    }
    Ok(out)
}

fn generators_json(named: &[(String, Polynomial)]) -> Value {
    Value::Array(named.iter().map(|(s, p)| json!({"name": s, "polynomial": p.to_string()})).collect())
}

fn expr_terms(e: &Polynomial, syms: &Symbols) -> Vec<String> {
    e.terms().rev().map(|(m, c)| Polynomial::term(c.clone(), m.clone()).format_with(syms)).collect()
}

fn sym_terms(e: &Polynomial, syms: &Symbols) -> Vec<String> {
    e.terms().rev().map(|(m, c)| format_symmetrized(&Polynomial::term(c.clone(), m.clone()), syms)).collect()
}

fn table_json(t: &BracketTable) -> Value {
    let syms = t.symbols();
    let entries: Vec<Value> = t
        .entries
        .iter()
        .filter(|(k, e)| !e.is_zero() || t.remainders.contains_key(k))
        .map(|((i, j), e)| {
            json!({
                "lhs": [i + 1, j + 1],
                "expr": expr_terms(e, &syms),
                "remainder": t.remainders.get(&(*i, *j)).map(|r| r.to_string()).unwrap_or_default(),
            })
        })
        .collect();
    json!({
        "generators": generators_json(&t.names.iter().cloned().zip(t.generators.iter().cloned()).collect::<Vec<_>>()),
        "expression_degree": t.expression_degree,
        "closed": t.is_closed(),
        "abelian": t.is_abelian(),
        "brackets": entries,
    })
}

fn table_text(label: &str, t: &BracketTable) -> String {
    let syms = t.symbols();
    let mut out = format!("bracket table of {label} ({} generators)\n", t.len());
    for (s, g) in t.names.iter().zip(&t.generators) {
        out.push_str(&format!("{s} = {g}\n"));
    }
    for ((i, j), e) in &t.entries {
        let rem = t.remainders.get(&(*i, *j));
        if e.is_zero() && rem.is_none() {
            continue;
        }
        out.push_str(&format!("{{{},{}}} = {}", t.names[*i], t.names[*j], e.format_with(&syms)));
        if let Some(r) = rem {
            out.push_str(&format!(" + remainder {r}"));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "closed: {}, abelian: {}\n",
        if t.is_closed() { "yes" } else { "no" },
        if t.is_abelian() { "yes" } else { "no" }
    ));
    out
}

fn close_cmd(p: &Pipeline, json: bool) -> CliResult<String> {
    let (g, label, named) = generators_of(p)?;
    let t = close_algebra(&g, &named, p.expression_degree)?;
    Ok(if json { to_json_text(&json!({"chain": label, "table": table_json(&t)})) } else { table_text(&label, &t) })
}

fn casimirs_cmd(p: &Pipeline, degree: u32, seed: u64, json: bool) -> CliResult<String> {
    let (g, label, named) = generators_of(p)?;
    let t = close_algebra(&g, &named, p.expression_degree)?;
    let set = find_casimirs(&g, &t, degree, seed)?;
    let syms = t.symbols();
    let ks: Vec<String> = set.casimirs.iter().map(|k| k.format_with(&syms)).collect();
    if json {
        return Ok(to_json_text(&json!({
            "chain": label,
            "degree": degree,
            "casimirs": ks,
            "independent_count": set.independent_count,
            "realized_rank": set.realized_rank,
        })));
    }
    let mut out = format!("Casimirs of {label} up to degree {degree}\n");
    for k in &ks {
        out.push_str(&format!("  {k}\n"));
    }
    out.push_str(&format!(
        "functionally independent: {}, rank in x-coordinates: {}\n",
        set.independent_count, set.realized_rank
    ));
    Ok(out)
}

fn quantize_cmd(p: &Pipeline, json: bool) -> CliResult<String> {
    let (g, label, named) = generators_of(p)?;
    let quantum = symmetrize_generators(&g, &named);
    let t = close_quantum_algebra(&g, &quantum, p.expression_degree)?;
    Ok(if json { quantum_json(&label, &t) } else { quantum_text(&label, &t) })
}

fn quantum_json(label: &str, t: &QuantumBracketTable) -> String {
    let syms = t.symbols();
    let entries: Vec<Value> = t
        .entries
        .iter()
        .filter(|(k, _)| !t.commutators[k].is_zero())
        .map(|((i, j), e)| {
            json!({
                "lhs": [i + 1, j + 1],
                "expr": sym_terms(e, &syms),
                "lower_order_terms": sym_terms(&t.lower_order_terms[&(*i, *j)], &syms),
                "remainder": t.remainders.get(&(*i, *j)).map(|r| r.to_string()).unwrap_or_default(),
            })
        })
        .collect();
    let gens: Vec<Value> =
        t.names.iter().zip(&t.generators).map(|(s, g)| json!({"name": s, "element": g.to_string()})).collect();
    to_json_text(&json!({
        "chain": label,
        "generators": gens,
        "expression_degree": t.expression_degree,
        "closed": t.is_closed(),
        "abelian": t.is_abelian(),
        "commutators": entries,
    }))
}

fn quantum_text(label: &str, t: &QuantumBracketTable) -> String {
    let syms = t.symbols();
    let mut out = format!("commutator table of {label} ({} generators)\n", t.len());
    for (s, g) in t.names.iter().zip(&t.generators) {
        out.push_str(&format!("{s} = {g}\n"));
    }
    for ((i, j), e) in &t.entries {
        if t.commutators[&(*i, *j)].is_zero() {
            continue;
        }
        out.push_str(&format!("[{},{}] = {}", t.names[*i], t.names[*j], format_symmetrized(e, &syms)));
        let low = &t.lower_order_terms[&(*i, *j)];
        if !low.is_zero() {
            out.push_str(&format!("  (lower order: {})", format_symmetrized(low, &syms)));
        }
        if let Some(r) = t.remainders.get(&(*i, *j)) {
            out.push_str(&format!(" + remainder {r}"));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "closed: {}, abelian: {}\n",
        if t.is_closed() { "yes" } else { "no" },
        if t.is_abelian() { "yes" } else { "no" }
    ));
    out
}

fn checks_text(checks: &[Check]) -> String {
    checks.iter().map(|c| format!("{c}\n")).collect()
}

fn realize_cmd(chain: &str, json: bool) -> CliResult<(String, Option<String>)> {
    let exps = Expectations::builtin();
    let c = exps.chain(chain)?;
    let g = LieAlgebraModel::c2();
    let named = c.generator_polys(g.dim())?;
    let checks = regression::verify_realized_table(&named, chain)?;
    let table = RealizedTable::new(&named)?;
    let report = Report { seed: 0, checks };
    let fail = report.has_failures().then(|| format!("{} realization check(s) failed", report.count(Status::Fail)));
    if json {
        let gens: Vec<Value> = named
            .iter()
            .map(|(s, p)| {
                Ok(json!({"name": s, "polynomial": p.to_string(), "realized": realize_classical(p)?.to_string()}))
            })
            .collect::<Result<_, Error>>()?;
        let brackets: Vec<Value> = table
            .brackets
            .iter()
            .filter(|(_, b)| !b.is_zero())
            .map(|((i, j), b)| json!({"left": table.names[*i], "right": table.names[*j], "bracket": b.to_string()}))
            .collect();
        let v = json!({"chain": chain, "generators": gens, "brackets": brackets, "checks": report.checks});
        return Ok((to_json_text(&v), fail));
    }
    let mut out = format!("realization of {chain}\n");
    for (s, r) in table.names.iter().zip(&table.realized) {
        out.push_str(&format!("R({s}) = {r}\n"));
    }
    for ((i, j), b) in &table.brackets {
        if !b.is_zero() {
            out.push_str(&format!("{{R({}),R({})}} = {b}\n", table.names[*i], table.names[*j]));
        }
    }
    out.push_str(&checks_text(&report.checks));
    Ok((out, fail))
}
