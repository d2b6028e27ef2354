//! Regression catalog: recomputes every reduction chain and compares the
//! results with the expectations stored in `data/expectations.json`.
//!
//! Internal inconsistencies (non-closure, wrong counts, elements outside the
//! commutant) are reported as FAIL; disagreements between a listed value and
//! the exact recomputation are reported as WARN with both values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::casimir::{find_casimirs, formal_bracket, is_formal_casimir};
use crate::closure::{close_algebra, name_generators, BracketTable};
use crate::commutant::solve_commutant_of;
use crate::enveloping::{Enveloping, GeneratorRing, PbwElement};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, Symbols};
use crate::lie::{catalog_entry, LieAlgebraModel, SubalgebraSpec};
use crate::poisson::{functional_independence, generator_poly, independence_bound, lie_poisson_bracket};
use crate::polynomial::Polynomial;
use crate::quantum::{close_quantum_algebra, format_symmetrized, symmetrize_generators, QuantumBracketTable};
use crate::realization::{canonical_poisson, realize_classical, RealizedTable};

pub const BUILTIN_EXPECTATIONS: &str = include_str!("../data/expectations.json");

/// Environment variable pointing to an expectations file used instead of the built-in one.
pub const EXPECTATIONS_ENV: &str = "COMMUTANT_FORGE_EXPECTATIONS";

pub const EXPECTATIONS_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    pub version: u32,
    pub algebra: String,
    pub chains: Vec<ChainExpectation>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainExpectation {
    pub label: String,
    /// Where the expected values come from.
    pub source: String,
    /// Catalog label of the subalgebra, or "full".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subalgebra: Option<String>,
    /// Single invariant the commutant is taken of (Casimir chains).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<String>,
    pub max_degree: u32,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub printed_generators: BTreeMap<String, String>,
    /// Degree -> number of new generators in that stratum.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub strata: BTreeMap<u32, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub kernel_dims: BTreeMap<u32, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub empty_degrees: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independence_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureExpectation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub casimirs: Option<CasimirExpectation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumExpectation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<RealizationExpectation>,
}

/// (left, right, expression) triple of a bracket table entry.
pub type BracketEntry = (String, String, String);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureExpectation {
    pub expression_degree: u32,
    pub abelian: bool,
    /// Whether the listed brackets are all the nonzero ones.
    #[serde(default)]
    pub complete: bool,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CasimirExpectation {
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independent: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realized_rank: Option<usize>,
    #[serde(default)]
    pub printed: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumExpectation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression_degree: Option<u32>,
    /// Listed quantum generators in X1..Xn; the symmetrized classical ones are used when empty.
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub relations: Vec<BracketEntry>,
    #[serde(default)]
    pub casimirs: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationExpectation {
    /// Generator names bound to R1, R2, ...; defaults to A1, A2, ... in order.
    #[serde(default)]
    pub symbols: Vec<String>,
    #[serde(default)]
    pub zero: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub constraints: Vec<(String, String)>,
    #[serde(default)]
    pub linear_closure: Vec<String>,
    #[serde(default)]
    pub casimirs: Vec<String>,
}

impl Expectations {
    pub fn from_json(s: &str) -> Result<Self> {
        let e: Expectations = serde_json::from_str(s)?;
        if e.version != EXPECTATIONS_VERSION {
            return Err(Error::Inconsistent(format!(
                "unsupported expectations version {} (expected {EXPECTATIONS_VERSION})",
                e.version
            )));
        }
        let mut labels: Vec<&str> = e.chains.iter().map(|c| c.label.as_str()).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Inconsistent(format!("duplicate chain label `{}`", w[0])));
        }
        Ok(e)
    }

    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_EXPECTATIONS).expect("built-in expectations parse")
    }

    /// Loads from `path`, else from the file named by the environment variable, else the built-in data.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        if let Some(p) = path {
            return Self::from_json(&std::fs::read_to_string(p)?);
        }
        match std::env::var_os(EXPECTATIONS_ENV) {
            Some(p) if !p.is_empty() => Self::from_json(&std::fs::read_to_string(p)?),
            _ => Ok(Self::builtin()),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        let mut l: Vec<String> = self.chains.iter().map(|c| c.label.clone()).collect();
        l.sort();
        l
    }

    pub fn chain(&self, label: &str) -> Result<&ChainExpectation> {
        self.chains
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::UnknownLabel { label: label.to_string(), valid: self.labels().join(", ") })
    }

    pub fn model(&self) -> Result<LieAlgebraModel> {
        match self.algebra.as_str() {
            "c2" => Ok(LieAlgebraModel::c2()),
            other => Err(Error::InvalidAlgebra(format!("expectations refer to unknown algebra `{other}`"))),
        }
    }
}

impl ChainExpectation {
    pub fn names(&self) -> Vec<String> {
        (1..=self.generators.len()).map(|i| format!("A{i}")).collect()
    }

    pub fn generator_polys(&self, n: usize) -> Result<Vec<(String, Polynomial)>> {
        let polys = self.generators.iter().map(|g| Polynomial::parse(g, n)).collect::<Result<Vec<_>>>()?;
        Ok(name_generators("A", &polys))
    }

    /// The polynomials the commutant is taken of, with the subalgebra spec when there is one.
    pub fn constraints(&self, algebra: &LieAlgebraModel) -> Result<(Option<SubalgebraSpec>, Vec<Polynomial>)> {
        match (&self.subalgebra, &self.invariant) {
            (Some(s), None) => {
                let spec = if s == "full" { SubalgebraSpec::full(algebra, &self.label) } else { catalog_entry(s)? };
                let cs = spec.generators.iter().map(|g| generator_poly(g)).collect();
                Ok((Some(spec), cs))
            }
            (None, Some(k)) => Ok((None, vec![Polynomial::parse(k, algebra.dim())?])),
            _ => Err(Error::Inconsistent(format!(
                "chain `{}` needs exactly one of `subalgebra` and `invariant`",
                self.label
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub status: Status,
    pub chain: String,
    pub check: String,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.status, self.chain, self.check, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn has_failures(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    pub fn chain_checks<'a>(&'a self, chain: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.chain == chain)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out.push_str(&format!(
            "summary: {} pass, {} warn, {} fail (seed {})\n",
            self.count(Status::Pass),
            self.count(Status::Warn),
            self.count(Status::Fail),
            self.seed
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs every chain (or only `filter`) and assembles the report ordered by chain label.
pub fn verify_paper(exps: &Expectations, filter: Option<&str>, seed: u64) -> Result<Report> {
    let algebra = exps.model()?;
    let mut chains: Vec<&ChainExpectation> = match filter {
        Some(l) => vec![exps.chain(l)?],
        None => exps.chains.iter().collect(),
    };
    chains.sort_by(|a, b| a.label.cmp(&b.label));
    let results: Vec<Vec<Check>> = std::thread::scope(|s| {
        let handles: Vec<_> = chains.iter().map(|c| s.spawn(|| run_chain(&algebra, c, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("chain worker panicked")).collect()
    });
    Ok(Report { seed, checks: results.into_iter().flatten().collect() })
}

/// All checks of one chain; errors become FAIL entries.
pub fn run_chain(algebra: &LieAlgebraModel, chain: &ChainExpectation, seed: u64) -> Vec<Check> {
    let mut ctx = Ctx { chain: chain.label.clone(), out: Vec::new() };
    if let Err(e) = run_chain_inner(algebra, chain, seed, &mut ctx) {
        ctx.push(Status::Fail, "error", e.to_string());
    }
    ctx.out
}

/// Realizes `generators` and checks them against the realization expectations of chain `label`.
pub fn verify_realized_table(generators: &[(String, Polynomial)], label: &str) -> Result<Vec<Check>> {
    let exps = Expectations::builtin();
    let with_real: Vec<&ChainExpectation> = exps.chains.iter().filter(|c| c.realization.is_some()).collect();
    let chain = with_real.iter().find(|c| c.label == label).ok_or_else(|| Error::UnknownLabel {
        label: label.to_string(),
        valid: with_real.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join(", "),
    })?;
    let mut ctx = Ctx { chain: label.to_string(), out: Vec::new() };
    check_realization(generators, chain.realization.as_ref().unwrap(), &mut ctx)?;
    Ok(ctx.out)
}

struct Ctx {
    chain: String,
    out: Vec<Check>,
}

impl Ctx {
    fn push(&mut self, status: Status, check: &str, detail: impl Into<String>) {
        self.out.push(Check { status, chain: self.chain.clone(), check: check.to_string(), detail: detail.into() });
    }

    fn verdict(&mut self, ok: bool, bad: Status, check: &str, detail: impl Into<String>) {
        self.push(if ok { Status::Pass } else { bad }, check, detail);
    }
}

fn index_of(names: &[String], s: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == s)
        .ok_or_else(|| Error::UnknownLabel { label: s.to_string(), valid: names.join(", ") })
}

fn run_chain_inner(algebra: &LieAlgebraModel, chain: &ChainExpectation, seed: u64, ctx: &mut Ctx) -> Result<()> {
    let n = algebra.dim();
    let (spec, constraints) = chain.constraints(algebra)?;
    let named = chain.generator_polys(n)?;
    let gens: Vec<Polynomial> = named.iter().map(|(_, g)| g.clone()).collect();
    let names = chain.names();
    let syms = Symbols::Named(names.clone());

    let commutes = |p: &Polynomial| -> Result<bool> {
        for c in &constraints {
            if !lie_poisson_bracket(algebra, p, c)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let mut bad = Vec::new();
    for (name, g) in &named {
        if !commutes(g)? {
            bad.push(name.clone());
        }
    }
    ctx.verdict(
        bad.is_empty(),
        Status::Fail,
        "generators",
        if bad.is_empty() {
            format!("all {} generators Poisson-commute with the subalgebra", gens.len())
        } else {
            format!("not in the commutant: {}", bad.join(", "))
        },
    );

    for (name, text) in &chain.printed_generators {
        let i = index_of(&names, name)?;
        let printed = Polynomial::parse(text, n)?;
        if printed == gens[i] {
            ctx.push(Status::Pass, "printed-generator", format!("{name} = {printed}"));
        } else {
            let c = if commutes(&printed)? { "commutes" } else { "does not commute" };
            ctx.push(
                Status::Warn,
                "printed-generator",
                format!("listed {name} = {printed} ({c}); recomputed {name} = {}", gens[i]),
            );
        }
    }

    let com = solve_commutant_of(algebra, &chain.label, &constraints, chain.max_degree)?;
    let mut missing = Vec::new();
    for (name, g) in &named {
        let d = g.degree().unwrap_or(0);
        if d > chain.max_degree {
            continue;
        }
        if (0..=d).any(|h| !com.contains(&g.homogeneous_part(h))) {
            missing.push(name.clone());
        }
    }
    let dims: Vec<String> =
        (1..=chain.max_degree).map(|h| format!("{h}:{}/{}", com.stratum(h).len(), com.kernel_dims[&h])).collect();
    ctx.verdict(
        missing.is_empty(),
        Status::Fail,
        "commutant",
        if missing.is_empty() {
            format!("generators lie in the computed strata (new/kernel by degree {})", dims.join(" "))
        } else {
            format!("outside the computed strata: {}", missing.join(", "))
        },
    );
    for (h, want) in &chain.strata {
        let got = com.stratum(*h).len();
        ctx.verdict(
            got == *want,
            Status::Fail,
            "strata",
            format!("degree {h}: {got} new generators (expected {want})"),
        );
    }
    for (h, want) in &chain.kernel_dims {
        let got = com.kernel_dims.get(h).copied().unwrap_or(0);
        ctx.verdict(got == *want, Status::Fail, "kernel", format!("degree {h}: dimension {got} (expected {want})"));
    }
    if !chain.empty_degrees.is_empty() {
        let nonempty: Vec<String> =
            chain.empty_degrees.iter().filter(|h| !com.stratum(**h).is_empty()).map(|h| h.to_string()).collect();
        let listed: Vec<String> = chain.empty_degrees.iter().map(|h| h.to_string()).collect();
        ctx.verdict(
            nonempty.is_empty(),
            Status::Fail,
            "parity",
            if nonempty.is_empty() {
                format!("strata of degree {} are empty", listed.join(", "))
            } else {
                format!("nonempty strata in degree {}", nonempty.join(", "))
            },
        );
    }

    if let Some(want) = chain.independence_bound {
        let spec = spec.as_ref().ok_or_else(|| {
            Error::Inconsistent(format!("chain `{}`: independence bound needs a subalgebra", chain.label))
        })?;
        let got = independence_bound(algebra, spec, seed);
        ctx.verdict(got == want, Status::Fail, "independence", format!("N(g) = {got} (expected {want})"));
    }
    if let Some(want) = chain.generator_rank {
        let got = functional_independence(&gens, seed)?;
        ctx.verdict(got == want, Status::Fail, "jacobian-rank", format!("generic rank {got} (expected {want})"));
    }

    let mut table = None;
    if let Some(cl) = &chain.closure {
        let t = close_algebra(algebra, &named, cl.expression_degree)?;
        check_closure(&t, cl, &syms, ctx)?;
        table = Some(t);
    }

    if let Some(ce) = &chain.casimirs {
        let t = match &table {
            Some(t) => t.clone(),
            None => close_algebra(algebra, &named, 2)?,
        };
        check_casimirs(algebra, &t, ce, &syms, seed, ctx)?;
    }

    if let Some(q) = &chain.quantum {
        let degree = q.expression_degree.or(chain.closure.as_ref().map(|c| c.expression_degree)).unwrap_or(2);
        check_quantum(algebra, spec.as_ref(), &constraints, &named, q, degree, ctx)?;
    }

    if let Some(r) = &chain.realization {
        check_realization(&named, r, ctx)?;
    }
    Ok(())
}

fn describe_entry(t: &BracketTable, syms: &Symbols, i: usize, j: usize) -> String {
    let mut s = t.entry(i, j).format_with(syms);
    let key = if i < j { (i, j) } else { (j, i) };
    if let Some(r) = t.remainders.get(&key) {
        let r = if i < j { r.clone() } else { -r };
        s.push_str(&format!(" + remainder {r}"));
    }
    s
}

fn check_closure(t: &BracketTable, cl: &ClosureExpectation, syms: &Symbols, ctx: &mut Ctx) -> Result<()> {
    let nonzero = t.brackets.values().filter(|b| !b.is_zero()).count();
    if t.is_closed() {
        ctx.push(
            Status::Pass,
            "closure",
            format!("closed at generator degree {} with {nonzero} nonzero brackets", cl.expression_degree),
        );
    } else {
        let pairs: Vec<String> =
            t.remainders.keys().map(|(i, j)| format!("{{{},{}}}", t.names[*i], t.names[*j])).collect();
        ctx.push(
            Status::Fail,
            "closure",
            format!("not closed at generator degree {}: {}", cl.expression_degree, pairs.join(" ")),
        );
    }
    ctx.verdict(
        t.is_abelian() == cl.abelian,
        Status::Fail,
        "abelian",
        format!("recomputed abelian = {} (expected {})", t.is_abelian(), cl.abelian),
    );
    let mut listed = Vec::new();
    for (a, b, rhs) in &cl.brackets {
        let i = index_of(&t.names, a)?;
        let j = index_of(&t.names, b)?;
        listed.push((i.min(j), i.max(j)));
        let expr = Polynomial::parse_with(rhs, syms)?;
        let printed = t.expand(&expr);
        let actual = if i < j { t.brackets[&(i, j)].clone() } else { -&t.brackets[&(j, i)] };
        if printed == actual {
            ctx.push(Status::Pass, "bracket", format!("{{{a},{b}}} = {}", expr.format_with(syms)));
        } else {
            let hint = if printed == -&actual { " (opposite sign)" } else { "" };
            ctx.push(
                Status::Warn,
                "bracket",
                format!(
                    "listed {{{a},{b}}} = {}; recomputed {}{hint}",
                    expr.format_with(syms),
                    describe_entry(t, syms, i, j)
                ),
            );
        }
    }
    if cl.complete {
        for ((i, j), b) in &t.brackets {
            if !b.is_zero() && !listed.contains(&(*i, *j)) {
                ctx.push(
                    Status::Warn,
                    "bracket",
                    format!(
                        "recomputed {{{},{}}} = {} is not listed",
                        t.names[*i],
                        t.names[*j],
                        describe_entry(t, syms, *i, *j)
                    ),
                );
            }
        }
    }
    Ok(())
}

fn check_casimirs(
    algebra: &LieAlgebraModel,
    t: &BracketTable,
    ce: &CasimirExpectation,
    syms: &Symbols,
    seed: u64,
    ctx: &mut Ctx,
) -> Result<()> {
    let set = find_casimirs(algebra, t, ce.degree, seed)?;
    ctx.push(
        Status::Pass,
        "casimirs",
        format!(
            "{} basis Casimirs up to degree {}, independent count {}, realized rank {}",
            set.casimirs.len(),
            ce.degree,
            set.independent_count,
            set.realized_rank
        ),
    );
    if let Some(want) = ce.independent {
        ctx.verdict(
            set.independent_count == want,
            Status::Fail,
            "casimir-count",
            format!("{} functionally independent (expected {want})", set.independent_count),
        );
    }
    if let Some(want) = ce.realized_rank {
        ctx.verdict(
            set.realized_rank == want,
            Status::Fail,
            "casimir-rank",
            format!("rank {} after substituting the generators (expected {want})", set.realized_rank),
        );
    }
    for text in &ce.printed {
        let k = Polynomial::parse_with(text, syms)?;
        if is_formal_casimir(t, &k) {
            ctx.push(Status::Pass, "casimir", format!("{} is central", k.format_with(syms)));
        } else {
            let failing: Vec<String> = (0..t.len())
                .filter_map(|j| {
                    let b = formal_bracket(t, &k, j);
                    (!b.is_zero()).then(|| format!("{{K,{}}} = {}", t.names[j], b.format_with(syms)))
                })
                .collect();
            ctx.push(
                Status::Warn,
                "casimir",
                format!("listed {} is not central: {}", k.format_with(syms), failing.join("; ")),
            );
        }
    }
    Ok(())
}

fn quantum_failures(
    env: &Enveloping,
    spec: Option<&SubalgebraSpec>,
    constraints: &[Polynomial],
    elements: &[PbwElement],
) -> Result<Vec<usize>> {
    let n = env.dim();
    let xs: Vec<PbwElement> = match spec {
        Some(s) => s.generators.iter().map(|g| PbwElement::from_normal_ordered(Polynomial::linear(g))).collect(),
        None => constraints.iter().map(|c| env.symmetrize(c)).collect(),
    };
    let mut bad = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        crate::error::check_dim(n, e.dim())?;
        for x in &xs {
            if !env.commutator(x, e)?.is_zero() {
                bad.push(i);
                break;
            }
        }
    }
    Ok(bad)
}

fn describe_commutator(
    env: &Enveloping,
    used: Option<&QuantumBracketTable>,
    gens: &[PbwElement],
    i: usize,
    j: usize,
) -> Result<String> {
    if let Some(t) = used {
        let key = if i < j { (i, j) } else { (j, i) };
        if !t.remainders.contains_key(&key) {
            return Ok(format_symmetrized(&t.full_entry(i, j), &t.symbols()));
        }
    }
    Ok(env.commutator(&gens[i], &gens[j])?.to_string())
}

fn check_quantum(
    algebra: &LieAlgebraModel,
    spec: Option<&SubalgebraSpec>,
    constraints: &[Polynomial],
    named: &[(String, Polynomial)],
    q: &QuantumExpectation,
    degree: u32,
    ctx: &mut Ctx,
) -> Result<()> {
    let env = Enveloping::new(algebra);
    let names: Vec<String> = named.iter().map(|(s, _)| s.clone()).collect();
    let syms = Symbols::Named(names.clone());
    // Symmetrization is equivariant, so images of a subalgebra commutant commute exactly;
    // for an invariant the images are only expected to.
    let lambda = symmetrize_generators(algebra, named);
    let lambda_elems: Vec<PbwElement> = lambda.iter().map(|(_, g)| g.clone()).collect();
    let bad = quantum_failures(&env, spec, constraints, &lambda_elems)?;
    let bad_status = if spec.is_some() { Status::Fail } else { Status::Warn };
    ctx.verdict(
        bad.is_empty(),
        bad_status,
        "quantum-generators",
        if bad.is_empty() {
            "symmetrized generators commute in U(g)".to_string()
        } else {
            format!(
                "symmetrized generators not commuting: {}",
                bad.iter().map(|i| names[*i].as_str()).collect::<Vec<_>>().join(", ")
            )
        },
    );
    let qt = close_quantum_algebra(algebra, &lambda, degree)?;
    if qt.is_closed() {
        let lower = qt.lower_order_terms.values().filter(|p| !p.is_zero()).count();
        ctx.push(
            Status::Pass,
            "quantum-closure",
            format!("symmetrized generators close at degree {degree} ({lower} entries with lower-order terms)"),
        );
    } else {
        let pairs: Vec<String> = qt.remainders.keys().map(|(i, j)| format!("[{},{}]", names[*i], names[*j])).collect();
        ctx.push(Status::Fail, "quantum-closure", format!("not closed at degree {degree}: {}", pairs.join(" ")));
    }
    let limit = qt.classical_limit_failures(algebra)?;
    ctx.verdict(
        limit.is_empty(),
        Status::Fail,
        "classical-limit",
        if limit.is_empty() {
            "leading terms reproduce the Poisson brackets".to_string()
        } else {
            format!("{} entries differ from the Poisson brackets", limit.len())
        },
    );

    let mut used = lambda_elems.clone();
    if !q.generators.is_empty() {
        if q.generators.len() != named.len() {
            return Err(Error::DimensionMismatch { expected: named.len(), found: q.generators.len() });
        }
        used = q.generators.iter().map(|s| env.parse(s)).collect::<Result<Vec<_>>>()?;
        let bad = quantum_failures(&env, spec, constraints, &used)?;
        for (i, g) in used.iter().enumerate() {
            let name = &names[i];
            if bad.contains(&i) {
                ctx.push(Status::Warn, "quantum-generator", format!("listed {name} = {g} does not commute"));
            } else if *g == lambda_elems[i] {
                ctx.push(Status::Pass, "quantum-generator", format!("{name} = {g} is the symmetrized generator"));
            } else {
                ctx.push(
                    Status::Pass,
                    "quantum-generator",
                    format!("{name} = {g} commutes (symmetrized: {})", lambda_elems[i]),
                );
            }
        }
    }
    let used_named: Vec<(String, PbwElement)> = names.iter().cloned().zip(used.iter().cloned()).collect();
    let used_table = if q.generators.is_empty() {
        Some(qt.clone())
    } else {
        close_quantum_algebra(algebra, &used_named, degree).ok()
    };
    let ring = GeneratorRing { env: &env, values: &used };
    for (a, b, rhs) in &q.relations {
        let i = index_of(&names, a)?;
        let j = index_of(&names, b)?;
        let lhs = env.commutator(&used[i], &used[j])?;
        let r = parse_expr(rhs, &syms)?.eval(&ring);
        if lhs == r {
            ctx.push(Status::Pass, "quantum-relation", format!("[{a},{b}] = {rhs}"));
        } else {
            ctx.push(
                Status::Warn,
                "quantum-relation",
                format!(
                    "listed [{a},{b}] = {rhs}; recomputed {}",
                    describe_commutator(&env, used_table.as_ref(), &used, i, j)?
                ),
            );
        }
    }
    for text in &q.casimirs {
        let k = parse_expr(text, &syms)?.eval(&ring);
        let mut failing = Vec::new();
        for (i, g) in used.iter().enumerate() {
            if !env.commutator(&k, g)?.is_zero() {
                failing.push(names[i].clone());
            }
        }
        ctx.verdict(
            failing.is_empty(),
            Status::Warn,
            "quantum-casimir",
            if failing.is_empty() {
                format!("{text} is central")
            } else {
                format!("listed {text} fails to commute with {}", failing.join(", "))
            },
        );
    }
    Ok(())
}

fn check_realization(named: &[(String, Polynomial)], r: &RealizationExpectation, ctx: &mut Ctx) -> Result<()> {
    let names: Vec<String> = named.iter().map(|(s, _)| s.clone()).collect();
    let by_a = RealizedTable::new(named)?;
    let bound: Vec<usize> = if r.symbols.is_empty() {
        (0..named.len()).collect()
    } else {
        r.symbols.iter().map(|s| index_of(&names, s)).collect::<Result<Vec<_>>>()?
    };
    let rnamed: Vec<(String, Polynomial)> =
        bound.iter().enumerate().map(|(k, &i)| (format!("R{}", k + 1), named[i].1.clone())).collect();
    let rnames: Vec<String> = rnamed.iter().map(|(s, _)| s.clone()).collect();
    let rsyms = Symbols::Named(rnames.clone());
    let by_r = RealizedTable::new(&rnamed)?;

    let zero: Vec<String> = by_a.zero_generators().into_iter().map(|i| names[i].clone()).collect();
    if !r.zero.is_empty() || !zero.is_empty() {
        let mut want = r.zero.clone();
        want.sort();
        let detail = if zero.is_empty() {
            "no generator realizes to zero".to_string()
        } else {
            zero.iter().map(|z| format!("R({z}) = 0")).collect::<Vec<_>>().join(", ")
        };
        if zero == want {
            ctx.push(Status::Pass, "realized-zero", detail);
        } else {
            ctx.push(Status::Warn, "realized-zero", format!("listed zero: {}; recomputed {detail}", want.join(", ")));
        }
    }

    for (a, b, rhs) in &r.brackets {
        let i = index_of(&rnames, a)?;
        let j = index_of(&rnames, b)?;
        let lhs = by_r.bracket(i, j);
        match by_r.evaluate(rhs, &rsyms) {
            Ok(v) if v == lhs => ctx.push(Status::Pass, "realized-bracket", format!("{{{a},{b}}} = {rhs}")),
            Ok(v) => ctx.push(
                Status::Warn,
                "realized-bracket",
                format!("listed {{{a},{b}}} = {rhs} = {v}; recomputed {lhs}"),
            ),
            Err(e) => ctx.push(
                Status::Warn,
                "realized-bracket",
                format!("listed {{{a},{b}}} = {rhs} cannot be evaluated: {e}"),
            ),
        }
    }

    for (lhs, rhs) in &r.constraints {
        let l = by_r.evaluate(lhs, &rsyms)?;
        let v = by_r.evaluate(rhs, &rsyms)?;
        if l == v {
            ctx.push(Status::Pass, "realized-constraint", format!("{lhs} = {rhs}"));
        } else {
            ctx.push(Status::Warn, "realized-constraint", format!("listed {lhs} = {rhs} fails: {l} vs {v}"));
        }
    }

    if !r.linear_closure.is_empty() {
        let idx = r.linear_closure.iter().map(|s| index_of(&names, s)).collect::<Result<Vec<_>>>()?;
        match by_a.linear_closure(&idx) {
            Some(coeffs) => {
                let k = idx.len();
                let lin = Symbols::Named(idx.iter().map(|i| format!("R({})", names[*i])).collect());
                let mut parts = Vec::new();
                for ((i, j), c) in &coeffs {
                    let mut p = Polynomial::constant(k, c[k].clone());
                    for (t, v) in c[..k].iter().enumerate() {
                        p.add_scaled(&Polynomial::var(k, t), v);
                    }
                    parts.push(format!("{{R({}),R({})}} = {}", names[*i], names[*j], p.format_with(&lin)));
                }
                ctx.push(Status::Pass, "realized-linear", format!("closes linearly: {}", parts.join(", ")));
            }
            None => ctx.push(
                Status::Fail,
                "realized-linear",
                format!("brackets of {} leave their linear span", r.linear_closure.join(", ")),
            ),
        }
    }

    for text in &r.casimirs {
        let k = by_r.evaluate(text, &rsyms)?;
        let failing: Vec<String> = by_r
            .realized
            .iter()
            .enumerate()
            .filter(|(_, g)| !canonical_poisson(&k, g).is_zero())
            .map(|(i, _)| rnames[i].clone())
            .collect();
        ctx.verdict(
            failing.is_empty(),
            Status::Warn,
            "realized-casimir",
            if failing.is_empty() {
                format!("{text} Poisson-commutes with the realized generators")
            } else {
                format!("listed {text} fails to commute with {}", failing.join(", "))
            },
        );
    }
    Ok(())
}

/// Realized image of every generator, for display.
pub fn realized_generators(named: &[(String, Polynomial)]) -> Result<Vec<(String, String)>> {
    named.iter().map(|(s, p)| Ok((s.clone(), realize_classical(p)?.to_string()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses() {
        let e = Expectations::builtin();
        assert_eq!(e.version, 1);
        assert!(e.chain("a1").is_ok());
        assert!(matches!(e.chain("zzz"), Err(Error::UnknownLabel { .. })));
    }

    #[test]
    fn rejects_wrong_version() {
        let s = BUILTIN_EXPECTATIONS.replacen("\"version\": 1", "\"version\": 9", 1);
        assert!(Expectations::from_json(&s).is_err());
    }

    #[test]
    fn a3_chain_has_no_failures() {
        let e = Expectations::builtin();
        let r = verify_paper(&e, Some("a3"), crate::random::DEFAULT_SEED).unwrap();
        assert!(!r.has_failures(), "{}", r.render_text());
        assert!(r.checks.iter().any(|c| c.check == "casimir-count" && c.status == Status::Pass));
    }
}
