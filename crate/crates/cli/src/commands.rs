use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use serde::Deserialize;
use serde_json::{json, Value};

use palg::algebra::{si_cond_check, si_e, AlgebraJson, PAlgebra, TableAlgebra};
use palg::audit::audit;
use palg::congruence::{cm_all, cm_leq};
use palg::decide::{
    check_identity, check_quasi_identity, oracle_batch, structural_completeness_report, Strategy, Variety, Verdict,
};
use palg::order::{export_dot_named, Poset};
use palg::{build_free, count_jirr, parse, Equation, Error, Limits, QuasiIdentity, Rank};

use crate::spec;

/// Largest generator count accepted by `free --count-only`.
pub const MAX_COUNT_K: usize = 16;

/// What a command produced; `code` is the process exit status.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub dot: Option<String>,
    pub code: u8,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            dot: None,
            code: 0,
        }
    }
}

fn big(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

pub fn free(n: Rank, k: usize, export: bool, count_only: bool, limits: &Limits) -> Result<Output, Error> {
    if k > MAX_COUNT_K {
        return Err(Error::Invalid(format!("k must be at most {MAX_COUNT_K}, got {k}")));
    }
    let j = count_jirr(n, k);
    let mut out = json!({ "n": n.to_string(), "k": k, "jCount": big(&j) });
    let mut text = format!("jCount {j}\n");
    if count_only {
        return Ok(Output::new(out, text));
    }
    let f = build_free(n, k, limits)?;
    let elements = f.element_count(limits.budget);
    out["elements"] = elements.map_or(Value::Null, |e| json!(e));
    match elements {
        Some(e) => writeln!(text, "elements {e}").unwrap(),
        None => writeln!(text, "elements > {}", limits.budget).unwrap(),
    }
    let dot = export_dot_named(&f.base().dual(), f.algebra().labels(), "J");
    if export {
        out["dot"] = json!(dot);
        text.push_str(&dot);
    }
    Ok(Output {
        dot: Some(dot),
        ..Output::new(out, text)
    })
}

pub fn nf(term: &str, n: Rank, limits: &Limits) -> Result<Output, Error> {
    let t = parse(term)?;
    let nf = palg::normal_form(&t, n, limits)?;
    let out = json!({ "n": n.to_string(), "term": t.to_string(), "normalForm": nf.to_string() });
    Ok(Output::new(out, format!("{nf}\n")))
}

fn witness_text(v: &Verdict, limits: &Limits) -> String {
    let (Some(w), Some(alg)) = (&v.witness, &v.algebra) else {
        return String::new();
    };
    let labels = spec::load(alg, limits).map(|a| a.labels().to_vec()).unwrap_or_default();
    let parts: Vec<String> = w
        .iter()
        .map(|(i, &e)| match labels.get(e) {
            Some(l) => format!("x{i} = {l}"),
            None => format!("x{i} = #{e}"),
        })
        .collect();
    format!(" in {alg}: {}", parts.join(", "))
}

fn verdict_output(v: Verdict, limits: &Limits) -> Output {
    let text = if v.holds {
        "holds\n".to_string()
    } else {
        format!("fails{}\n", witness_text(&v, limits))
    };
    let code = if v.holds { 0 } else { 1 };
    Output {
        code,
        ..Output::new(serde_json::to_value(&v).expect("verdicts serialize"), text)
    }
}

pub fn eq(lhs: &str, rhs: &str, variety: Variety, limits: &Limits) -> Result<Output, Error> {
    let e = Equation::new(parse(lhs)?, parse(rhs)?);
    Ok(verdict_output(check_identity(&e, variety, limits)?, limits))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QiFile {
    premises: Vec<[String; 2]>,
    conclusion: [String; 2],
}

pub fn read_quasi_identity(path: &Path) -> Result<QuasiIdentity, Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let file: QiFile = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let eq = |[l, r]: &[String; 2]| -> Result<Equation, Error> { Ok(Equation::new(parse(l)?, parse(r)?)) };
    Ok(QuasiIdentity {
        premises: file.premises.iter().map(eq).collect::<Result<_, _>>()?,
        conclusion: eq(&file.conclusion)?,
    })
}

pub fn qi(path: &Path, algebra: &str, strategy: Strategy, limits: &Limits) -> Result<Output, Error> {
    let q = read_quasi_identity(path)?;
    let a = spec::load(algebra, limits)?;
    let v = check_quasi_identity(&q, &a, strategy, limits)?.in_algebra(algebra);
    Ok(verdict_output(v, limits))
}

fn lattice_order(a: &TableAlgebra) -> Poset {
    Poset::from_leq(a.size(), |x, y| a.leq(x, y)).expect("lattice order is a partial order")
}

pub fn si(n: usize, limits: &Limits) -> Result<Output, Error> {
    let a = spec::load(&format!("si:{n}"), limits)?;
    let tables = AlgebraJson::from(&PAlgebra::Table(a.clone()));
    let cond = si_cond_check(&a);
    let out = json!({
        "n": n,
        "size": a.size(),
        "e": si_e(n),
        "labels": a.labels(),
        "siCondition": cond,
        "algebra": tables,
    });
    let mut text = format!("size {}\nsiCondition {cond}\n", a.size());
    for x in a.elements() {
        writeln!(text, "{}* = {}", a.label(x), a.label(a.star(x))).unwrap();
    }
    let dot = export_dot_named(&lattice_order(&a), a.labels(), "A");
    Ok(Output {
        dot: Some(dot),
        ..Output::new(out, text)
    })
}

pub fn dual(algebra: &str, limits: &Limits) -> Result<Output, Error> {
    let a = spec::load(algebra, limits)?;
    let records = cm_all(&a, limits)?;
    let n = records.len();
    let inclusion = Poset::from_leq(n, |i, j| records[i].mu.leq(&records[j].mu))?;
    let cm_order = Poset::from_leq(n, |i, j| cm_leq(&records[i], &records[j]))?;
    let labels: Vec<String> = records.iter().map(|r| a.label(r.psi).to_string()).collect();
    let covers = |p: &Poset| -> Vec<[usize; 2]> { p.covers().into_iter().map(|(x, y)| [x, y]).collect() };
    let out = json!({
        "algebra": algebra,
        "size": a.size(),
        "labels": labels,
        "records": records,
        "inclusion": covers(&inclusion),
        "cmOrder": covers(&cm_order),
    });
    let mut text = String::new();
    for (i, r) in records.iter().enumerate() {
        let storey = if r.storey == palg::Storey::I { "I" } else { "II" };
        writeln!(
            text,
            "{i}: psi {} storey {storey} classes {}",
            labels[i],
            r.mu.num_classes()
        )
        .unwrap();
    }
    for (name, p) in [("inclusion", &inclusion), ("cm-order", &cm_order)] {
        let pairs: Vec<String> = p.covers().iter().map(|(x, y)| format!("{x}<{y}")).collect();
        writeln!(text, "{name}: {}", pairs.join(" ")).unwrap();
    }
    let dot = export_dot_named(&inclusion, &labels, "inclusion") + &export_dot_named(&cm_order, &labels, "cm_order");
    Ok(Output {
        dot: Some(dot),
        ..Output::new(out, text)
    })
}

pub fn report(n: Rank, limits: &Limits) -> Result<Output, Error> {
    let r = structural_completeness_report(n, limits)?;
    let mut text = format!("Pa_{n} structurally complete: {}\n", r.structurally_complete);
    if let Some(subs) = &r.subquasivarieties {
        writeln!(text, "subquasivarieties: {}", subs.join(", ")).unwrap();
    }
    for c in r.si_check.iter().chain(&r.free_checks) {
        writeln!(
            text,
            "qb_3 in {}: {}",
            c.algebra,
            if c.verdict.holds { "holds" } else { "fails" }
        )
        .unwrap();
    }
    for w in &r.subalgebra_witnesses {
        writeln!(text, "{} contains {} on {:?}", w.algebra, w.isomorphic_to, w.carrier).unwrap();
    }
    writeln!(text, "note: {}", r.note).unwrap();
    Ok(Output::new(serde_json::to_value(&r).expect("reports serialize"), text))
}

pub fn audit_cmd(algebra: &str, limits: &Limits) -> Result<Output, Error> {
    let a = spec::load(algebra, limits)?;
    let r = audit(&a, algebra, limits)?;
    let mut text = String::new();
    for c in &r.checks {
        let status = if c.failures == 0 { "ok" } else { "FAILED" };
        writeln!(text, "{:<32} {status}", c.law).unwrap();
        for w in &c.witnesses {
            writeln!(text, "    {w}").unwrap();
        }
    }
    let code = if r.passed() { 0 } else { 1 };
    Ok(Output {
        code,
        ..Output::new(serde_json::to_value(&r).expect("reports serialize"), text)
    })
}

pub fn oracle(trials: usize, seed: u64, limits: &Limits) -> Result<Output, Error> {
    let r = oracle_batch(seed, trials, limits)?;
    let text = format!("{}/{} agree, {} equal pairs\n", r.agreements, r.trials, r.equal);
    let code = if r.disagreements.is_empty() { 0 } else { 1 };
    Ok(Output {
        code,
        ..Output::new(serde_json::to_value(&r).expect("reports serialize"), text)
    })
}
