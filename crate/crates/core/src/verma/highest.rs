use std::collections::BTreeMap;

use crate::cartan::{RootVec, Weight};
use crate::freealg::{Letter, Word};
use crate::linalg::Matrix;
use crate::qfield::RationalFunction;
use crate::ubase::{Algebra, Element};

use super::module::{unit, Module, Op, Vector};
use super::VermaError;

/// The Verma module `M(λ)` truncated at depth `N`, with basis `f_F v_λ` for
/// the basis words `F` of `U^-`.
#[derive(Clone, Debug)]
pub struct Verma {
    pub lambda: Weight,
    pub module: Module,
    pub words: BTreeMap<RootVec, Vec<Word>>,
}

/// `ev_λ(π_0(x))`: the pure-torus part evaluated at `λ`.
fn eval_torus(x: &Element, lambda: &Weight) -> RationalFunction {
    let mut acc = RationalFunction::zero();
    for (h, c) in x.torus_part() {
        acc += &(c * &RationalFunction::q_pow(h.pair_weight(lambda)));
    }
    acc
}

pub fn build_verma(u: &Algebra, lambda: &Weight, n: usize) -> Result<Verma, VermaError> {
    if n > u.cutoff() {
        return Err(VermaError::Cutoff { requested: n, available: u.cutoff() });
    }
    let d = u.datum();
    let mut module = Module::new(d.clone(), lambda.clone(), n);
    let mut words = BTreeMap::new();
    for beta in module.depths() {
        let piece = u.basis().piece(&beta).expect("basis built through the cutoff");
        module.set_dim(beta.clone(), piece.dim());
        words.insert(beta, piece.basis.clone());
    }
    for beta in module.depths() {
        let src = &words[&beta];
        for op in module.ops() {
            let Some(target) = op.target(&beta) else { continue };
            if target.height() > n as i64 {
                continue;
            }
            let tgt = u.basis().piece(&target).expect("inside the cutoff");
            let mut m = Matrix::zeros(tgt.dim(), src.len());
            for (c, w) in src.iter().enumerate() {
                match op {
                    Op::F(l) => {
                        for (bw, coeff) in u.reduce_word(&Word(vec![l]).concat(w))? {
                            m.set(tgt.index_of(&bw).expect("basis word"), c, coeff);
                        }
                    }
                    Op::E(l) => {
                        let nf = u.straighten(&Word(vec![l]), w)?;
                        for (k, coeff) in nf.terms() {
                            if !k.e.is_empty() {
                                continue;
                            }
                            let r = tgt.index_of(&k.f).expect("basis word");
                            let v = coeff * &RationalFunction::q_pow(k.h.pair_weight(lambda));
                            let cur = m.get(r, c) + &v;
                            m.set(r, c, cur);
                        }
                    }
                }
            }
            module.set_action(op, beta.clone(), m);
        }
    }
    Ok(Verma { lambda: lambda.clone(), module, words })
}

impl Verma {
    /// Contravariant Gram matrix at depth `β`, from normal forms:
    /// `F(f_X v, f_Y v) = ev_λ(π_0(φ(f_X) f_Y))` with `φ(f_X) = e_{rev X}`.
    pub fn gram(&self, u: &Algebra, beta: &RootVec) -> Result<Matrix, VermaError> {
        let ws = &self.words[beta];
        let mut g = Matrix::zeros(ws.len(), ws.len());
        for (r, x) in ws.iter().enumerate() {
            for (c, y) in ws.iter().enumerate() {
                let nf = u.straighten(&x.reversed(), y)?;
                g.set(r, c, eval_torus(&nf, &self.lambda));
            }
        }
        Ok(g)
    }

    /// The same Gram matrix from the module action alone:
    /// `F(f_X v, w)` is the `v_λ`-coefficient of `e_{x_k} ⋯ e_{x_1} w`.
    pub fn gram_by_action(&self, beta: &RootVec) -> Result<Matrix, VermaError> {
        let ws = &self.words[beta];
        let d = ws.len();
        let mut g = Matrix::zeros(d, d);
        for (r, x) in ws.iter().enumerate() {
            for c in 0..d {
                let mut cur = (beta.clone(), unit(d, c));
                let mut zero = false;
                for l in x.letters() {
                    match self.module.apply(Op::E(*l), &cur.0, &cur.1)? {
                        Some(next) => cur = next,
                        None => {
                            zero = true;
                            break;
                        }
                    }
                }
                if !zero {
                    debug_assert!(cur.0.is_zero());
                    g.set(r, c, cur.1[0].clone());
                }
            }
        }
        Ok(g)
    }

    /// Verma coordinates of `f_F v_λ` for an arbitrary word.
    pub fn coords(&self, u: &Algebra, w: &Word) -> Result<(RootVec, Vector), VermaError> {
        let beta = w.weight(u.rank());
        let ws = &self.words[&beta];
        let mut v = vec![RationalFunction::zero(); ws.len()];
        for (bw, c) in u.reduce_word(w)? {
            let i = ws.iter().position(|x| *x == bw).expect("basis word");
            v[i] = c;
        }
        Ok((beta, v))
    }
}

/// `V(λ) = M(λ)/R(λ)` with `R(λ)` the radical of the contravariant form.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub lambda: Weight,
    pub module: Module,
    /// Per depth: Verma basis indices whose images form the quotient basis.
    pub kept: BTreeMap<RootVec, Vec<usize>>,
    /// Per depth: the projection from Verma coordinates to quotient
    /// coordinates, `G[S,S]^{-1} G[S,:]`.
    pub projection: BTreeMap<RootVec, Matrix>,
    pub grams: BTreeMap<RootVec, Matrix>,
}

impl Quotient {
    /// Image of Verma coordinates in `V(λ)`.
    pub fn project(&self, beta: &RootVec, v: &[RationalFunction]) -> Vector {
        self.projection[beta].mul_vec(v)
    }
}

pub fn irreducible_quotient(u: &Algebra, verma: &Verma) -> Result<Quotient, VermaError> {
    let m = &verma.module;
    let mut module = Module::new(m.datum().clone(), m.top().clone(), m.cutoff());
    let mut kept = BTreeMap::new();
    let mut projection = BTreeMap::new();
    let mut grams = BTreeMap::new();
    for beta in m.depths() {
        let g = verma.gram(u, &beta)?;
        let s = g.independent_rows();
        let rest: Vec<usize> = (0..g.cols()).filter(|c| !s.contains(c)).collect();
        // Solve G[S,S] X = G[S,rest]; P has the identity on S and X on rest.
        let mut p = Matrix::zeros(s.len(), g.cols());
        for (k, &c) in s.iter().enumerate() {
            p.set(k, c, RationalFunction::one());
        }
        if !rest.is_empty() && !s.is_empty() {
            let cols: Vec<usize> = s.iter().chain(&rest).copied().collect();
            let e = g.select(&s, &cols).rref();
            if e.pivots != (0..s.len()).collect::<Vec<_>>() {
                return Err(VermaError::SingularGram { depth: beta.clone() });
            }
            for k in 0..s.len() {
                for (j, &c) in rest.iter().enumerate() {
                    p.set(k, c, e.matrix.get(k, s.len() + j).clone());
                }
            }
        }
        projection.insert(beta.clone(), (p, rest.is_empty()));
        module.set_dim(beta.clone(), s.len());
        kept.insert(beta.clone(), s);
        grams.insert(beta, g);
    }
    for beta in m.depths() {
        for op in m.ops() {
            let Some(a) = m.action(op, &beta) else { continue };
            let target = op.target(&beta).expect("action stored only for valid targets");
            let rows: Vec<usize> = (0..a.rows()).collect();
            let restricted = a.select(&rows, &kept[&beta]);
            let (p, identity) = &projection[&target];
            let q = if *identity { restricted } else { p.mul(&restricted) };
            module.set_action(op, beta.clone(), q);
        }
    }
    let projection = projection.into_iter().map(|(b, (p, _))| (b, p)).collect();
    Ok(Quotient { lambda: verma.lambda.clone(), module, kept, projection, grams })
}

/// `f_{il} v_λ` for convenience in checks.
pub(crate) fn letter_word(i: usize, l: u32, times: usize) -> Word {
    Word(vec![Letter::new(i, l); times])
}
