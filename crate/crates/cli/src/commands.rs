use serde_json::{json, Value};
use weingarten::characters::{differences_shrink, parse_scalar};
use weingarten::oracles::{
    haar_mc_moment, sn_exhaustive_moment, sn_exhaustive_space_moment, CountingOracle,
};
use weingarten::{
    bp_compare, char_moment_asymptotic, char_moment_direct, char_moment_exact, convergence_profile,
    enumerate_intersection, gram_matrix, group_moment, limit_law_moments, relation_set, verify_relations,
    CharacterQuery, Coordinate, Error, LimitLaw, MomentQuery, Result, SpaceFamily, SpaceIntegrator, WeingartenCache,
};

use crate::cli::*;
use crate::output::{float, frac, Report, Table};

/// Exit status of a successful run that found failing relations.
pub const VERIFY_FAILED: u8 = 2;

pub struct Outcome {
    pub report: Report,
    pub status: u8,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, status: 0 }
    }
}

pub fn run(command: &Command, cache: &WeingartenCache) -> Result<Outcome> {
    match command {
        Command::Partitions(a) => partitions(a).map(Into::into),
        Command::Gram(a) => gram(a).map(Into::into),
        Command::Weingarten(a) => weingarten(a, cache).map(Into::into),
        Command::GroupMoment(a) => group_moment_cmd(a, cache).map(Into::into),
        Command::SpaceMoment(a) => space_moment_cmd(a, cache).map(Into::into),
        Command::Relations(a) => relations(a).map(Into::into),
        Command::Verify(a) => verify(a, cache),
        Command::CharExact(a) => char_exact(a, cache).map(Into::into),
        Command::CharAsymptotic(a) => char_asymptotic(a).map(Into::into),
        Command::LimitMoments(a) => limit_moments(a).map(Into::into),
        Command::BpCompare(a) => bp(a).map(Into::into),
        Command::Convergence(a) => convergence(a, cache).map(Into::into),
        Command::Oracle(o) => oracle(o, cache).map(Into::into),
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn entry_query(e: &EntryArgs) -> Result<MomentQuery> {
    MomentQuery::new(e.word.clone(), e.rows.clone(), e.cols.clone())
}

fn echo_entry(r: &mut Report, e: &EntryArgs) {
    r.input("word", e.word.to_string())
        .input("rows", list(&e.rows))
        .input("cols", list(&e.cols));
}

fn partitions(a: &PartitionsArgs) -> Result<Report> {
    let parts = enumerate_intersection(&a.category, &a.word)?;
    let mut r = Report::new("partitions");
    r.input("category", list(&a.category)).input("word", a.word.to_string());
    r.field("count", parts.len());
    let mut table = Table::new(["partition", "blocks", "noncrossing"]);
    for p in &parts {
        table.push(vec![p.to_string().into(), p.block_count().into(), p.is_noncrossing().into()]);
    }
    r.table = Some(table);
    Ok(r)
}

fn matrix_rows(r: &mut Report, index: &[weingarten::SetPartition], entries: &weingarten::RationalMatrix) {
    let names: Vec<String> = index.iter().map(ToString::to_string).collect();
    let mut table = Table::new(std::iter::once("partition".to_string()).chain(names.iter().cloned()));
    for (i, name) in names.iter().enumerate() {
        let mut row = vec![Value::from(name.clone())];
        row.extend(entries.row(i).iter().map(frac));
        table.push(row);
    }
    r.field("index", names);
    r.table = Some(table);
}

fn gram(a: &MatrixArgs) -> Result<Report> {
    let g = gram_matrix(a.category, &a.word, a.n)?;
    let mut r = Report::new("gram");
    r.input("category", a.category.to_string())
        .input("word", a.word.to_string())
        .input("n", a.n);
    matrix_rows(&mut r, &g.index, &g.entries);
    Ok(r)
}

fn weingarten(a: &MatrixArgs, cache: &WeingartenCache) -> Result<Report> {
    let w = cache.get(a.category, &a.word, a.n)?;
    let mut r = Report::new("weingarten");
    r.input("category", a.category.to_string())
        .input("word", a.word.to_string())
        .input("n", a.n);
    r.field("full_rank", w.is_full_rank());
    r.field(
        "basis",
        w.basis.iter().map(|&b| w.index()[b].to_string()).collect::<Vec<_>>(),
    );
    matrix_rows(&mut r, w.index(), &w.entries);
    Ok(r)
}

fn group_moment_cmd(a: &GroupMomentArgs, cache: &WeingartenCache) -> Result<Report> {
    let value = group_moment(cache, &a.group, &entry_query(&a.entry)?)?;
    let mut r = Report::new("group-moment");
    r.input("group", a.group.to_string());
    echo_entry(&mut r, &a.entry);
    r.exact("value", &value);
    Ok(r)
}

/// `1,2,3` for a single factor, `1:2,3:1` for products.
fn parse_coordinates(s: &str, factors: usize) -> Result<Vec<Coordinate>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|c| {
            let coord = c
                .split(':')
                .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad index `{t}`: {e}"))))
                .collect::<Result<Coordinate>>()?;
            if coord.len() != factors {
                return Err(Error::Parse(format!(
                    "coordinate `{c}` has {} components, the space has {factors} factors",
                    coord.len()
                )));
            }
            Ok(coord)
        })
        .collect()
}

fn space_moment_cmd(a: &SpaceMomentArgs, cache: &WeingartenCache) -> Result<Report> {
    let indices = parse_coordinates(&a.indices, a.space.factors().len())?;
    let integ = SpaceIntegrator::new(cache, a.space.clone());
    let u = integ.moment_unscaled(&a.word, &indices)?;
    let mut r = Report::new("space-moment");
    r.input("space", a.space.to_string())
        .input("word", a.word.to_string())
        .input("indices", a.indices.trim());
    r.exact("value", &u.coefficient);
    r.field(
        "unscaled",
        json!({"coefficient": u.coefficient.to_string(), "m": u.m, "k": u.k, "float": u.to_f64()}),
    );
    Ok(r)
}

fn partition_list(ps: &[weingarten::SetPartition]) -> String {
    ps.iter().map(|p| format!("[{p}]")).collect()
}

fn relations(a: &RelationsArgs) -> Result<Report> {
    let rels = relation_set(&a.space, a.max_k);
    let m = a.space.m();
    let mut r = Report::new("relations");
    r.input("space", a.space.to_string()).input("max_k", a.max_k);
    r.field("m", m).field("count", rels.len());
    let mut table = Table::new(["word", "partitions", "join_blocks", "exponent", "rhs_rescaled"]);
    for rel in &rels {
        table.push(vec![
            rel.word.to_string().into(),
            partition_list(&rel.partitions).into(),
            rel.join_blocks.into(),
            rel.exponent_text().into(),
            frac(&rel.rhs_rescaled(m)),
        ]);
    }
    r.table = Some(table);
    Ok(r)
}

fn verify(a: &VerifyArgs, cache: &WeingartenCache) -> Result<Outcome> {
    let report = verify_relations(cache, &a.space, a.max_k, a.test_degree)?;
    let mut r = Report::new("verify");
    r.input("space", a.space.to_string())
        .input("max_k", a.max_k)
        .input("test_degree", a.test_degree);
    let failed = report.checks.len() - report.passed();
    r.field("relations", report.relations.len())
        .field("monomials", report.monomials.len())
        .field("checks", report.checks.len())
        .field("passed", report.passed())
        .field("failed", failed)
        .field("all_passed", report.all_passed());
    let failures: Vec<Value> = report
        .failures()
        .map(|c| {
            let (lhs, rhs) = c.values.clone().unzip();
            json!({
                "relation": report.relations[c.relation].to_string(),
                "monomial": report.monomials[c.monomial].to_string(),
                "lhs": lhs.map(|v| v.to_string()),
                "rhs": rhs.map(|v| v.to_string()),
            })
        })
        .collect();
    r.field("failures", failures);
    if a.full {
        let mut table = Table::new(["relation", "monomial", "passed"]);
        for c in &report.checks {
            table.push(vec![
                report.relations[c.relation].to_string().into(),
                report.monomials[c.monomial].to_string().into(),
                c.passed.into(),
            ]);
        }
        r.table = Some(table);
    } else {
        let mut table = Table::new(["word", "partitions", "exponent", "checks", "passed"]);
        let mut counts = vec![(0usize, 0usize); report.relations.len()];
        for c in &report.checks {
            counts[c.relation].0 += 1;
            counts[c.relation].1 += usize::from(c.passed);
        }
        for (rel, (total, ok)) in report.relations.iter().zip(counts) {
            table.push(vec![
                rel.word.to_string().into(),
                partition_list(&rel.partitions).into(),
                rel.exponent_text().into(),
                total.into(),
                ok.into(),
            ]);
        }
        r.table = Some(table);
    }
    let status = if report.all_passed() { 0 } else { VERIFY_FAILED };
    Ok(Outcome { report: r, status })
}

fn char_exact(a: &CharExactArgs, cache: &WeingartenCache) -> Result<Report> {
    let t = a.t.resolve(&a.space)?;
    let q = CharacterQuery::new(a.space.clone(), t, a.word.clone())?;
    let value = char_moment_exact(cache, &q)?;
    let mut r = Report::new("char-exact");
    r.input("space", a.space.to_string())
        .input("t", a.t.to_string())
        .input("word", a.word.to_string());
    r.field("truncation", t);
    r.exact("value", &value);
    r.field("limit_parameter", frac(&q.limit_parameter()));
    if a.direct {
        let direct = char_moment_direct(cache, &q)?;
        r.field("direct", frac(&direct)).field("agree", direct == value);
    }
    Ok(r)
}

fn char_asymptotic(a: &CharAsymptoticArgs) -> Result<Report> {
    let t = parse_scalar(&a.t)?;
    let value = char_moment_asymptotic(&a.category, &a.word, &t)?;
    let mut r = Report::new("char-asymptotic");
    r.input("category", list(&a.category))
        .input("t", t.to_string())
        .input("word", a.word.to_string());
    r.exact("value", &value);
    Ok(r)
}

fn limit_moments(a: &LimitMomentsArgs) -> Result<Report> {
    let law = LimitLaw::new(a.law, parse_scalar(&a.t)?)?;
    let mut r = Report::new("limit-moments");
    r.input("law", a.law.to_string())
        .input("t", law.t.to_string())
        .input("max_k", a.max_k);
    let mut table = Table::new(["k", "moment", "float"]);
    for (k, m) in limit_law_moments(&law, a.max_k).iter().enumerate() {
        table.push(vec![(k + 1).into(), frac(m), float(m)]);
    }
    r.table = Some(table);
    Ok(r)
}

fn bp(a: &BpCompareArgs) -> Result<Report> {
    let t = parse_scalar(&a.t)?;
    let rows = bp_compare(a.category, &t, a.max_k)?;
    let mut r = Report::new("bp-compare");
    r.input("category", a.category.to_string())
        .input("t", t.to_string())
        .input("max_k", a.max_k);
    r.field("free_category", a.category.free_version().to_string());
    let mut table = Table::new(["k", "classical", "free"]);
    for row in &rows {
        table.push(vec![row.k.into(), frac(&row.classical), frac(&row.free)]);
    }
    r.table = Some(table);
    Ok(r)
}

fn convergence(a: &ConvergenceArgs, cache: &WeingartenCache) -> Result<Report> {
    let family = SpaceFamily::new(a.family.clone())?;
    let rows = convergence_profile(cache, &family, &a.ns, &a.word, a.t_rule)?;
    let mut r = Report::new("convergence");
    r.input("family", family.template())
        .input("ns", list(&a.ns))
        .input("word", a.word.to_string())
        .input("t_rule", a.t_rule.to_string());
    r.field("differences_shrink", differences_shrink(&rows));
    let mut table = Table::new(["n", "space", "truncation", "exact", "asymptotic", "difference", "difference_float"]);
    for row in &rows {
        table.push(vec![
            row.n.into(),
            row.space.to_string().into(),
            row.t.into(),
            frac(&row.exact),
            frac(&row.asymptotic),
            frac(&row.difference),
            float(&row.difference),
        ]);
    }
    r.table = Some(table);
    Ok(r)
}

fn oracle(o: &OracleCommand, cache: &WeingartenCache) -> Result<Report> {
    match o {
        OracleCommand::SnMoment(a) => {
            let value = sn_exhaustive_moment(a.n, &entry_query(&a.entry)?)?;
            let mut r = Report::new("oracle sn-moment");
            r.input("n", a.n);
            echo_entry(&mut r, &a.entry);
            r.exact("value", &value);
            Ok(r)
        }
        OracleCommand::SnSpaceMoment(a) => {
            let value = sn_exhaustive_space_moment(a.n, &a.index, &a.indices)?;
            let mut r = Report::new("oracle sn-space-moment");
            r.input("n", a.n)
                .input("index", a.index.to_string())
                .input("indices", list(&a.indices));
            r.exact("value", &value);
            Ok(r)
        }
        OracleCommand::HaarMc(a) => {
            let q = entry_query(&a.entry)?;
            let report = haar_mc_moment(a.group.category, a.group.n, &q, a.samples, a.seed)?;
            let exact = group_moment(cache, &a.group, &q)?;
            let mut r = Report::new("oracle haar-mc");
            r.input("group", a.group.to_string());
            echo_entry(&mut r, &a.entry);
            r.input("samples", a.samples).input("seed", a.seed);
            r.field("estimate", report.estimate)
                .field("standard_error", report.standard_error)
                .field("samples", report.samples)
                .field("seed", report.seed);
            r.exact("exact", &exact);
            Ok(r)
        }
        OracleCommand::Counting(a) => {
            let oracle = match a.kind {
                CountingKind::Bell => CountingOracle::Bell(a.k),
                CountingKind::Catalan => CountingOracle::Catalan(a.k),
                CountingKind::DoubleFactorial => CountingOracle::DoubleFactorial(a.k),
                CountingKind::Poisson => CountingOracle::PoissonRecurrence {
                    t: parse_scalar(&a.t)?,
                    k: a.k,
                },
            };
            let mut r = Report::new("oracle counting");
            let kind = match a.kind {
                CountingKind::Bell => "bell",
                CountingKind::Catalan => "catalan",
                CountingKind::DoubleFactorial => "double-factorial",
                CountingKind::Poisson => "poisson",
            };
            r.input("kind", kind).input("k", a.k);
            if a.kind == CountingKind::Poisson {
                r.input("t", a.t.trim());
            }
            r.exact("value", &oracle.evaluate());
            Ok(r)
        }
    }
}
