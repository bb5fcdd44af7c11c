use std::fmt::Write as _;

use qbb_core::cartan::{RootVec, Weight};
use qbb_core::charcalc::{character_of, root_multiplicities};
use qbb_core::datum::{apply_tau, read_tau_table, DatumFile, LoadedDatum};
use qbb_core::expr;
use qbb_core::ubase::Algebra;
use qbb_core::verma::{build_verma, decompose as decompose_module, irreducible_quotient, tensor};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::{Common, Format};

/// Order used when checking that each `τ` expands as `1 + q Z>=0[[q]]`.
const TAU_SERIES_ORDER: usize = 24;

/// A command result: a line-oriented report and its machine-readable twin.
#[derive(Debug)]
pub struct Output {
    text: String,
    machine: Value,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Machine => format!("{}\n", serde_json::to_string_pretty(&self.machine).expect("json values serialize")),
        }
    }
}

pub struct Context {
    source: String,
    loaded: LoadedDatum,
    cutoff: usize,
}

impl Context {
    pub fn load(c: &Common) -> Result<Self, CliError> {
        let path = c.datum.as_ref().ok_or_else(|| CliError::Input("--datum is required".into()))?;
        let mut loaded = DatumFile::read(path)?.load()?;
        if let Some(t) = &c.tau {
            let table = read_tau_table(t)?;
            apply_tau(&loaded.datum, &mut loaded.tau, &table)?;
        }
        Ok(Context { source: path.display().to_string(), loaded, cutoff: c.cutoff })
    }

    fn algebra(&self, n: usize) -> Result<Algebra, CliError> {
        Ok(Algebra::new(self.loaded.datum.clone(), self.loaded.tau.clone(), n)?)
    }

    fn weight(&self, coeffs: &[i64], flag: &str) -> Result<Weight, CliError> {
        if coeffs.is_empty() {
            return Err(CliError::Input(format!("--{flag} is required")));
        }
        Ok(self.loaded.datum.weight_from_fundamental(coeffs)?)
    }

    fn root(&self, coeffs: &[i64]) -> Result<RootVec, CliError> {
        let n = self.loaded.datum.rank();
        if coeffs.len() != n {
            return Err(CliError::Input(format!("--beta needs {n} entries, got {}", coeffs.len())));
        }
        if coeffs.iter().any(|&k| k < 0) {
            return Err(CliError::Input("--beta entries must be nonnegative".into()));
        }
        Ok(RootVec(coeffs.to_vec()))
    }
}

fn by_height(mut rows: Vec<(RootVec, i64)>) -> Vec<(RootVec, i64)> {
    rows.sort_by(|a, b| a.0.height().cmp(&b.0.height()).then_with(|| a.0.cmp(&b.0)));
    rows
}

fn table_json(rows: &[(RootVec, i64)]) -> Value {
    rows.iter().map(|(b, m)| json!({ "beta": b.0, "height": b.height(), "multiplicity": m })).collect()
}

fn table_text(out: &mut String, rows: &[(RootVec, i64)]) {
    let _ = writeln!(out, "{:<16} {:>6} {:>12}", "beta", "height", "multiplicity");
    for (b, m) in rows {
        let _ = writeln!(out, "{:<16} {:>6} {:>12}", b.to_string(), b.height(), m);
    }
}

pub fn validate(ctx: &Context) -> Result<Output, CliError> {
    let d = &ctx.loaded.datum;
    ctx.loaded.tau.validate(d, ctx.cutoff, TAU_SERIES_ORDER).map_err(|e| CliError::Input(e.to_string()))?;
    let mut text = format!("datum {}: valid\n", ctx.source);
    let mut nodes = Vec::new();
    for i in 0..d.rank() {
        let _ = writeln!(text, "  node {:<8} {:<10} a_ii={:<4} s={}", d.name(i), d.kind(i).to_string(), d.a(i, i), d.s(i));
        nodes.push(json!({ "name": d.name(i), "kind": d.kind(i), "a_ii": d.a(i, i), "s": d.s(i) }));
    }
    let mut tau = Vec::new();
    for ((i, l), v) in ctx.loaded.tau.entries() {
        let _ = writeln!(text, "  tau[{},{l}] = {v}", d.name(*i));
        tau.push(json!({ "node": d.name(*i), "level": l, "value": v.to_string() }));
    }
    let _ = writeln!(text, "  tau checked through height {}", ctx.cutoff);
    let machine = json!({ "datum": ctx.source, "valid": true, "nodes": nodes, "tau": tau, "cutoff": ctx.cutoff });
    Ok(Output { text, machine })
}

pub fn normal_form(ctx: &Context, src: &str) -> Result<Output, CliError> {
    let u = ctx.algebra(ctx.cutoff)?;
    let d = u.datum();
    let x = expr::normal_form(&u, src)?;
    let rendered = x.render(d);
    let terms: Vec<Value> = x
        .terms()
        .iter()
        .map(|(k, c)| {
            json!({
                "f": k.f.render('f', d),
                "h": k.h,
                "e": k.e.render('e', d),
                "coefficient": c.to_string(),
            })
        })
        .collect();
    let text = format!("{src}\n  = {rendered}\n");
    let machine = json!({ "input": src, "normal_form": rendered, "terms": terms });
    Ok(Output { text, machine })
}

pub fn character(ctx: &Context, lambda: &[i64]) -> Result<Output, CliError> {
    let d = &ctx.loaded.datum;
    let w = ctx.weight(lambda, "lambda")?;
    let ch = character_of(d, &w, ctx.cutoff)?;
    let rows = by_height(ch.mults.iter().filter(|(_, &m)| m != 0).map(|(b, &m)| (b.clone(), m)).collect());
    let mut text = format!("character of V({lambda:?}) through depth {}\n", ctx.cutoff);
    table_text(&mut text, &rows);
    let machine = json!({ "lambda": lambda, "cutoff": ctx.cutoff, "multiplicities": table_json(&rows) });
    Ok(Output { text, machine })
}

pub fn weight_mult(ctx: &Context, lambda: &[i64], beta: &[i64]) -> Result<Output, CliError> {
    let d = &ctx.loaded.datum;
    let w = ctx.weight(lambda, "lambda")?;
    let b = ctx.root(beta)?;
    let n = b.height() as usize;
    if n > ctx.cutoff {
        return Err(CliError::Input(format!("beta has height {n}, above the cutoff {}", ctx.cutoff)));
    }
    let u = ctx.algebra(n)?;
    let verma = build_verma(&u, &w, n)?;
    let quotient = irreducible_quotient(&u, &verma)?;
    let gram = quotient.module.dim(&b);
    let formula = character_of(d, &w, n)?.get(&b);
    let agree = gram as i64 == formula;
    let text = format!(
        "dim V({lambda:?})_(lambda - {b}) = {gram}\n  gram rank {gram}, character formula {formula}: {}\n",
        if agree { "agree" } else { "DISAGREE" }
    );
    let machine = json!({
        "lambda": lambda,
        "beta": b.0,
        "gram_rank": gram,
        "character_formula": formula,
        "agree": agree,
    });
    let out = Output { text, machine };
    if agree {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}

pub fn root_mult(ctx: &Context) -> Result<Output, CliError> {
    let rm = root_multiplicities(&ctx.loaded.datum, ctx.cutoff)?;
    let rows = rm.roots();
    let mut text = format!("positive roots through height {}\n", ctx.cutoff);
    table_text(&mut text, &rows);
    let machine = json!({ "cutoff": ctx.cutoff, "roots": table_json(&rows) });
    Ok(Output { text, machine })
}

pub fn decompose(ctx: &Context, lambda: &[i64], mu: &[i64]) -> Result<Output, CliError> {
    let d = &ctx.loaded.datum;
    let n = ctx.cutoff;
    let wl = ctx.weight(lambda, "lambda")?;
    let wm = ctx.weight(mu, "mu")?;
    let u = ctx.algebra(n)?;
    let vl = irreducible_quotient(&u, &build_verma(&u, &wl, n)?)?;
    let vm = irreducible_quotient(&u, &build_verma(&u, &wm, n)?)?;
    let t = tensor(&u, &vl.module, &vm.module, n)?;
    let roots = root_multiplicities(d, n)?;
    let dec = decompose_module(&t.module, &roots)?;
    let mut text = format!("V({lambda:?}) (x) V({mu:?}) through depth {n}\n");
    let _ = writeln!(text, "{:<16} {:<16} {:>12}", "depth", "highest weight", "multiplicity");
    let mut comps = Vec::new();
    for c in &dec.components {
        let _ = writeln!(text, "{:<16} {:<16} {:>12}", c.depth.to_string(), format!("{:?}", c.weight.h), c.multiplicity);
        comps.push(json!({ "depth": c.depth.0, "highest_weight": c.weight.h, "multiplicity": c.multiplicity }));
    }
    match &dec.mismatch {
        None => text.push_str("character sum matches the tensor character\n"),
        Some(b) => {
            let _ = writeln!(text, "character sum DISAGREES at depth {b}");
        }
    }
    let machine = json!({
        "lambda": lambda,
        "mu": mu,
        "cutoff": n,
        "components": comps,
        "characters_match": dec.characters_match,
        "mismatch": dec.mismatch.as_ref().map(|b| b.0.clone()),
    });
    let out = Output { text, machine };
    if dec.characters_match {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}

pub fn check_relations(ctx: &Context, delta: bool) -> Result<Output, CliError> {
    let u = ctx.algebra(ctx.cutoff)?;
    let reports = u.check_relations(ctx.cutoff, delta)?;
    let mut text = format!("relation residuals through height {}\n", ctx.cutoff);
    let mut all = true;
    for r in &reports {
        let ok = r.vanishes && r.delta_vanishes != Some(false);
        all &= ok;
        let delta_col = match r.delta_vanishes {
            Some(true) => "delta 0",
            Some(false) => "delta NONZERO",
            None => "",
        };
        let _ = writeln!(text, "  {:<10} {:<28} {:<8} {}", r.kind, r.params, if r.vanishes { "0" } else { "NONZERO" }, delta_col);
    }
    let _ = writeln!(text, "{} residuals, {}", reports.len(), if all { "all vanish" } else { "some do not vanish" });
    let machine = json!({ "cutoff": ctx.cutoff, "residuals": reports, "all_vanish": all });
    let out = Output { text, machine };
    if all {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}

pub fn form_ranks(ctx: &Context) -> Result<Output, CliError> {
    let u = ctx.algebra(ctx.cutoff)?;
    let mut rows = u.form_ranks(ctx.cutoff)?;
    rows.sort_by(|a, b| a.weight.height().cmp(&b.weight.height()).then_with(|| a.weight.cmp(&b.weight)));
    let mut text = format!("form rank against dim U^- through height {}\n", ctx.cutoff);
    let _ = writeln!(text, "{:<16} {:>6} {:>10} {:>6}", "beta", "words", "gram rank", "dim");
    let mut entries = Vec::new();
    for r in &rows {
        let flag = if r.matches() { "" } else { "MISMATCH" };
        let _ = writeln!(text, "{:<16} {:>6} {:>10} {:>6} {flag}", r.weight.to_string(), r.words, r.gram_rank, r.dim);
        entries.push(json!({ "beta": r.weight.0, "height": r.weight.height(), "words": r.words, "gram_rank": r.gram_rank, "dim": r.dim, "matches": r.matches() }));
    }
    let all = rows.iter().all(|r| r.matches());
    let _ = writeln!(
        text,
        "{}",
        if all { "radical equals the relation ideal in every degree" } else { "radical differs from the relation ideal" }
    );
    let machine = json!({ "cutoff": ctx.cutoff, "degrees": entries, "all_match": all });
    Ok(Output { text, machine })
}
