use serde::Serialize;

use crate::freealg::Letter;
use crate::qfield::RationalFunction;
use crate::ubase::Algebra;

use super::highest::{letter_word, Quotient, Verma};
use super::module::{unit, Module, Op};
use super::VermaError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The statement needs depths beyond the truncation.
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub label: String,
    pub status: Status,
    pub detail: String,
}

impl CheckItem {
    fn new(label: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        let status = if holds { Status::Pass } else { Status::Fail };
        CheckItem { label: label.into(), status, detail: detail.into() }
    }

    fn skipped(label: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckItem { label: label.into(), status: Status::Skipped, detail: detail.into() }
    }
}

/// Collection of check results.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub items: Vec<CheckItem>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|i| i.status == Status::Fail).collect()
    }

    pub fn extend(&mut self, other: Report) {
        self.items.extend(other.items);
    }
}

fn is_zero(v: &[RationalFunction]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Whether `f_F v_λ` vanishes in `V(λ)`: zero Gram norm and zero quotient
/// coordinates.
fn vanishes_in_quotient(u: &Algebra, verma: &Verma, quotient: &Quotient, word: &crate::freealg::Word) -> Result<bool, VermaError> {
    let (beta, v) = verma.coords(u, word)?;
    let g = &quotient.grams[&beta];
    let gv = g.mul_vec(&v);
    let norm = v.iter().zip(&gv).fold(RationalFunction::zero(), |acc, (a, b)| &acc + &(a * b));
    Ok(norm.is_zero() && is_zero(&quotient.project(&beta, &v)))
}

/// Highest-weight annihilation: `f_i^{⟨h_i,λ⟩+1} v_λ = 0` for real `i`, and
/// `f_{ik} v_λ = 0` for imaginary `i` with `⟨h_i,λ⟩ = 0`; for imaginary `i`
/// with `⟨h_i,λ⟩ > 0` the vectors `f_{ik} v_λ` survive.
pub fn check_annihilation(u: &Algebra, verma: &Verma, quotient: &Quotient) -> Result<Report, VermaError> {
    let d = u.datum();
    let lambda = &verma.lambda;
    if !d.is_dominant(lambda) {
        return Err(VermaError::NotDominant(lambda.h.clone()));
    }
    let n = verma.module.cutoff();
    let mut report = Report::default();
    for i in 0..d.rank() {
        let m = lambda.h[i];
        if d.is_real(i) {
            let label = format!("f[{}]^{} v = 0", d.name(i), m + 1);
            if (m + 1) as usize > n {
                report.items.push(CheckItem::skipped(label, "beyond truncation"));
            } else {
                let ok = vanishes_in_quotient(u, verma, quotient, &letter_word(i, 1, (m + 1) as usize))?;
                report.items.push(CheckItem::new(label, ok, ""));
            }
        } else {
            for k in 1..=d.max_level(i, n) {
                let vanishes = vanishes_in_quotient(u, verma, quotient, &letter_word(i, k, 1))?;
                if m == 0 {
                    report.items.push(CheckItem::new(format!("f[{},{k}] v = 0", d.name(i)), vanishes, ""));
                } else {
                    report.items.push(CheckItem::new(format!("f[{},{k}] v != 0", d.name(i)), !vanishes, ""));
                }
            }
        }
    }
    Ok(report)
}

/// Imaginary-node weight conditions on a module: (a) `⟨h_i,μ⟩ >= 0`;
/// (b) `⟨h_i,μ⟩ = 0` forces `M_{μ-lα_i} = 0`; (c) it forces `f_{il} M_μ = 0`;
/// (d) `⟨h_i,μ⟩ <= -l a_ii` forces `e_{il} M_μ = 0`.
pub fn check_imaginary_weights(module: &Module) -> Report {
    let d = module.datum();
    let mut report = Report::default();
    let mut fails = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    let mut counts = [0usize; 4];
    for i in (0..d.rank()).filter(|&i| !d.is_real(i)) {
        for beta in module.depths() {
            if module.dim(&beta) == 0 {
                continue;
            }
            let mu = module.weight_at(&beta).h[i];
            counts[0] += 1;
            if mu < 0 {
                fails[0].push(format!("{beta}"));
            }
            for l in 1..=d.max_level(i, module.cutoff()) {
                let letter = Letter::new(i, l);
                let below = Op::F(letter).target(&beta).expect("lowering always has a target");
                let inside = below.height() <= module.cutoff() as i64;
                if mu == 0 && inside {
                    counts[1] += 1;
                    if module.dim(&below) != 0 {
                        fails[1].push(format!("{below}"));
                    }
                    counts[2] += 1;
                    if module.action(Op::F(letter), &beta).is_some_and(|m| !m.is_zero()) {
                        fails[2].push(format!("{beta}, l={l}"));
                    }
                }
                if mu <= -(l as i64) * d.a(i, i) {
                    if let Some(m) = module.action(Op::E(letter), &beta) {
                        counts[3] += 1;
                        if !m.is_zero() {
                            fails[3].push(format!("{beta}, l={l}"));
                        }
                    }
                }
            }
        }
    }
    let names = ["(a) <h_i, mu> >= 0", "(b) weight spaces below vanish", "(c) f_il kills M_mu", "(d) e_il kills M_mu"];
    for k in 0..4 {
        let detail = if fails[k].is_empty() { format!("{} cases", counts[k]) } else { format!("violated at {}", fails[k].join("; ")) };
        report.items.push(CheckItem::new(names[k], fails[k].is_empty(), detail));
    }
    report
}

/// Integrability conditions within the truncation.
///
/// Condition (iii) is checked on every basis vector `v` of depth `β` and
/// weight `μ`: in any finite-dimensional module of `U_(i)` for real `i` the
/// string through `v` tops out at most `β_i` steps up, so
/// `f_i^{k} v = 0` for `k = max(⟨h_i,μ⟩ + β_i, 0) + 1`. Vectors whose
/// required power leaves the truncation are counted as undetermined.
pub fn check_oint(module: &Module) -> Result<Report, VermaError> {
    let d = module.datum();
    let n = module.cutoff() as i64;
    let mut report = Report::default();
    let total: usize = module.dims().values().sum();
    report.items.push(CheckItem::new("(i) finite weight spaces", true, format!("total dimension {total}")));
    let bad: Vec<String> = module.dims().iter().filter(|(b, &k)| k > 0 && !b.is_nonneg()).map(|(b, _)| b.to_string()).collect();
    report.items.push(CheckItem::new("(ii) weights bounded above", bad.is_empty(), bad.join("; ")));

    let mut tested = 0;
    let mut undetermined = 0;
    let mut failures = Vec::new();
    for i in d.real_nodes() {
        for beta in module.depths() {
            let dim = module.dim(&beta);
            let mu = module.weight_at(&beta).h[i];
            let k = (mu + beta.0[i]).max(0) + 1;
            if beta.height() + k > n {
                undetermined += dim;
                continue;
            }
            for c in 0..dim {
                tested += 1;
                let mut cur = (beta.clone(), unit(dim, c));
                for _ in 0..k {
                    cur = module.apply(Op::F(Letter::new(i, 1)), &cur.0, &cur.1)?.expect("lowering has a target");
                }
                if !is_zero(&cur.1) {
                    failures.push(format!("f[{}]^{k} on basis vector {c} at {beta}", d.name(i)));
                }
            }
        }
    }
    let detail =
        if failures.is_empty() { format!("{tested} vectors tested, {undetermined} beyond truncation") } else { failures.join("; ") };
    report.items.push(CheckItem::new("(iii) real f_i locally nilpotent (bounded)", failures.is_empty(), detail));

    let weights = check_imaginary_weights(module);
    let relabel = [
        ("(iv) <h_i, mu> >= 0 at imaginary i", 0),
        ("(v) f_il kills M_mu when <h_i, mu> = 0", 2),
        ("(vi) e_il kills M_mu when <h_i, mu> <= -l a_ii", 3),
    ];
    for (label, idx) in relabel {
        let item = &weights.items[idx];
        report.items.push(CheckItem { label: label.to_string(), status: item.status, detail: item.detail.clone() });
    }
    Ok(report)
}

/// Grading orthogonality and symmetry of the contravariant form, and
/// agreement of the two Gram constructions.
pub fn check_gram(u: &Algebra, verma: &Verma) -> Result<Report, VermaError> {
    let mut report = Report::default();
    let depths = verma.module.depths();
    for beta in &depths {
        let a = verma.gram(u, beta)?;
        let b = verma.gram_by_action(beta)?;
        report.items.push(CheckItem::new(format!("gram symmetric at {beta}"), a.is_symmetric(), ""));
        report.items.push(CheckItem::new(format!("gram routes agree at {beta}"), a == b, ""));
    }
    let mut cross = 0;
    let mut bad = Vec::new();
    for beta in &depths {
        for gamma in depths.iter().filter(|g| g.height() == beta.height() && *g != beta) {
            for x in &verma.words[beta] {
                for y in &verma.words[gamma] {
                    cross += 1;
                    let nf = u.straighten(&x.reversed(), y)?;
                    if !nf.torus_part().is_empty() {
                        bad.push(format!("{beta} x {gamma}"));
                    }
                }
            }
        }
    }
    let detail = if bad.is_empty() { format!("{cross} pairs") } else { bad.join("; ") };
    report.items.push(CheckItem::new("distinct weights orthogonal", bad.is_empty(), detail));
    Ok(report)
}
