use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::cartan::{RootVec, Weight};
use crate::charcalc::{character, RootMultiplicities};
use crate::linalg::Matrix;
use crate::ubase::{Algebra, TensorElement};

use super::module::{unit, Module, Op};
use super::VermaError;

/// Basis of a tensor product weight space: `(depth_1, index_1, depth_2,
/// index_2)`.
pub type PairIndex = (RootVec, usize, RootVec, usize);

/// `M_1 ⊗ M_2` truncated at depth `N`, with generators acting through `Δ`.
#[derive(Clone, Debug)]
pub struct TensorModule {
    pub module: Module,
    pub pairs: BTreeMap<RootVec, Vec<PairIndex>>,
}

pub fn tensor(u: &Algebra, m1: &Module, m2: &Module, n: usize) -> Result<TensorModule, VermaError> {
    if n > m1.cutoff() || n > m2.cutoff() {
        return Err(VermaError::Cutoff { requested: n, available: m1.cutoff().min(m2.cutoff()) });
    }
    let d = u.datum();
    let top = m1.top() + m2.top();
    let mut module = Module::new(d.clone(), top, n);
    let mut pairs: BTreeMap<RootVec, Vec<PairIndex>> = BTreeMap::new();
    for gamma in module.depths() {
        let mut list = Vec::new();
        for b1 in module.depths() {
            let b2 = &gamma - &b1;
            if !b2.is_nonneg() {
                continue;
            }
            for j1 in 0..m1.dim(&b1) {
                for j2 in 0..m2.dim(&b2) {
                    list.push((b1.clone(), j1, b2.clone(), j2));
                }
            }
        }
        module.set_dim(gamma.clone(), list.len());
        pairs.insert(gamma, list);
    }
    let index: HashMap<RootVec, HashMap<PairIndex, usize>> =
        pairs.iter().map(|(g, l)| (g.clone(), l.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect())).collect();
    let mut deltas: BTreeMap<Op, TensorElement> = BTreeMap::new();
    for op in module.ops() {
        let delta = match op {
            Op::E(l) => u.delta_e(l.node, l.level)?,
            Op::F(l) => u.delta_f(l.node, l.level)?,
        };
        deltas.insert(op, delta);
    }
    for gamma in module.depths() {
        for op in module.ops() {
            let Some(target) = op.target(&gamma) else { continue };
            if target.height() > n as i64 {
                continue;
            }
            let src = &pairs[&gamma];
            let mut m = Matrix::zeros(pairs[&target].len(), src.len());
            for (col, (b1, j1, b2, j2)) in src.iter().enumerate() {
                for ((a, b), c) in deltas[&op].terms() {
                    let Some((t1, v1)) = m1.apply_term(a, b1, &unit(m1.dim(b1), *j1))? else { continue };
                    let Some((t2, v2)) = m2.apply_term(b, b2, &unit(m2.dim(b2), *j2))? else { continue };
                    for (k1, x1) in v1.iter().enumerate() {
                        if x1.is_zero() {
                            continue;
                        }
                        let cx = c * x1;
                        for (k2, x2) in v2.iter().enumerate() {
                            if x2.is_zero() {
                                continue;
                            }
                            let row = index[&target][&(t1.clone(), k1, t2.clone(), k2)];
                            let cur = m.get(row, col) + &(&cx * x2);
                            m.set(row, col, cur);
                        }
                    }
                }
            }
            module.set_action(op, gamma.clone(), m);
        }
    }
    Ok(TensorModule { module, pairs })
}

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub depth: RootVec,
    pub weight: Weight,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub components: Vec<Component>,
    /// Whether `Σ mult(ν) ch V(ν) = ch M` within the truncation.
    pub characters_match: bool,
    /// First depth where the character sum disagrees, if any.
    pub mismatch: Option<RootVec>,
}

/// Scans depths by height; the multiplicity of `V(top - γ)` equals the
/// dimension of the maximal vectors at depth `γ`, since each irreducible
/// summand has a one-dimensional space of maximal vectors. Every raising
/// generator that lands inside the truncation is tested, so the count is
/// exact for the truncated module.
pub fn decompose(module: &Module, roots: &RootMultiplicities) -> Result<Decomposition, VermaError> {
    let d = module.datum();
    let n = module.cutoff();
    let mut components = Vec::new();
    let mut predicted: BTreeMap<RootVec, i64> = BTreeMap::new();
    for gamma in module.depths() {
        if module.dim(&gamma) == 0 {
            continue;
        }
        let mult = module.maximal_vectors(&gamma).len();
        if mult == 0 {
            continue;
        }
        let weight = module.weight_at(&gamma);
        let ch = character(d, &weight, n - gamma.height() as usize, roots)?;
        for (beta, c) in &ch.mults {
            *predicted.entry(&gamma + beta).or_default() += c * mult as i64;
        }
        components.push(Component { depth: gamma, weight, multiplicity: mult });
    }
    let mismatch = module.depths().into_iter().find(|g| predicted.get(g).copied().unwrap_or(0) != module.dim(g) as i64);
    Ok(Decomposition { components, characters_match: mismatch.is_none(), mismatch })
}
