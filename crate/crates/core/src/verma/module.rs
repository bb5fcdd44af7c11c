use std::collections::BTreeMap;

use crate::cartan::{CartanDatum, RootVec, Weight};
use crate::freealg::{weights_up_to, Letter};
use crate::linalg::Matrix;
use crate::qfield::RationalFunction;
use crate::ubase::TermKey;

use super::VermaError;

/// A raising or lowering generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    E(Letter),
    F(Letter),
}

impl Op {
    /// Depth reached from `beta`, or `None` when the weight lies above the
    /// top (the image is zero).
    pub fn target(&self, beta: &RootVec) -> Option<RootVec> {
        let mut t = beta.clone();
        match self {
            Op::E(l) => {
                t.0[l.node] -= l.level as i64;
                t.is_nonneg().then_some(t)
            }
            Op::F(l) => {
                t.0[l.node] += l.level as i64;
                Some(t)
            }
        }
    }
}

/// A weight module truncated at depth `N` below a top weight. Weight spaces
/// are indexed by depth `β` (weight `top - β`); every generator whose source
/// and target lie inside the truncation acts by an exact matrix.
#[derive(Clone, Debug)]
pub struct Module {
    datum: CartanDatum,
    top: Weight,
    cutoff: usize,
    dims: BTreeMap<RootVec, usize>,
    actions: BTreeMap<(Op, RootVec), Matrix>,
}

pub type Vector = Vec<RationalFunction>;

impl Module {
    pub(crate) fn new(datum: CartanDatum, top: Weight, cutoff: usize) -> Self {
        let dims = weights_up_to(datum.rank(), cutoff).into_iter().map(|b| (b, 0)).collect();
        Module { datum, top, cutoff, dims, actions: BTreeMap::new() }
    }

    pub(crate) fn set_dim(&mut self, beta: RootVec, dim: usize) {
        self.dims.insert(beta, dim);
    }

    pub(crate) fn set_action(&mut self, op: Op, beta: RootVec, m: Matrix) {
        self.actions.insert((op, beta), m);
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn top(&self) -> &Weight {
        &self.top
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self, beta: &RootVec) -> usize {
        self.dims.get(beta).copied().unwrap_or(0)
    }

    /// All depths inside the truncation, by height.
    pub fn depths(&self) -> Vec<RootVec> {
        weights_up_to(self.datum.rank(), self.cutoff)
    }

    pub fn dims(&self) -> &BTreeMap<RootVec, usize> {
        &self.dims
    }

    pub fn weight_at(&self, beta: &RootVec) -> Weight {
        self.datum.shift_down(&self.top, beta)
    }

    /// Generators whose action is defined somewhere in the truncation.
    pub fn ops(&self) -> Vec<Op> {
        let mut out = Vec::new();
        for i in 0..self.datum.rank() {
            for l in 1..=self.datum.max_level(i, self.cutoff) {
                out.push(Op::E(Letter::new(i, l)));
                out.push(Op::F(Letter::new(i, l)));
            }
        }
        out
    }

    pub fn action(&self, op: Op, beta: &RootVec) -> Option<&Matrix> {
        self.actions.get(&(op, beta.clone()))
    }

    /// `op · v` for `v` at depth `beta`. `Ok(None)` means the image is zero
    /// because its weight lies above the top.
    pub fn apply(&self, op: Op, beta: &RootVec, v: &[RationalFunction]) -> Result<Option<(RootVec, Vector)>, VermaError> {
        let Some(target) = op.target(beta) else { return Ok(None) };
        if target.height() > self.cutoff as i64 {
            return Err(VermaError::Truncation { depth: target });
        }
        let m = self.actions.get(&(op, beta.clone())).ok_or(VermaError::Truncation { depth: target.clone() })?;
        Ok(Some((target, m.mul_vec(v))))
    }

    /// `f_F q^h e_E · v` for a normal-form monomial.
    pub fn apply_term(&self, key: &TermKey, beta: &RootVec, v: &[RationalFunction]) -> Result<Option<(RootVec, Vector)>, VermaError> {
        let mut cur = (beta.clone(), v.to_vec());
        for l in key.e.letters().iter().rev() {
            match self.apply(Op::E(*l), &cur.0, &cur.1)? {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        if !key.h.is_zero() {
            let c = RationalFunction::q_pow(key.h.pair_weight(&self.weight_at(&cur.0)));
            cur.1 = cur.1.iter().map(|x| x * &c).collect();
        }
        for l in key.f.letters().iter().rev() {
            match self.apply(Op::F(*l), &cur.0, &cur.1)? {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// Weight multiplicities.
    pub fn character(&self) -> BTreeMap<RootVec, usize> {
        self.dims.clone()
    }

    /// Maximal vectors at depth `beta`: the joint kernel of every raising
    /// generator that stays inside the truncation.
    pub fn maximal_vectors(&self, beta: &RootVec) -> Vec<Vector> {
        let d = self.dim(beta);
        let mut stacked = Matrix::zeros(0, d);
        for op in self.ops() {
            if let Op::E(_) = op {
                if let Some(m) = self.action(op, beta) {
                    stacked = stacked.vstack(m);
                }
            }
        }
        stacked.nullspace()
    }
}

pub(crate) fn unit(d: usize, k: usize) -> Vector {
    let mut v = vec![RationalFunction::zero(); d];
    v[k] = RationalFunction::one();
    v
}
