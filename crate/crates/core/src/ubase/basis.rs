use std::collections::{BTreeMap, HashMap};

use crate::cartan::{CartanDatum, RootVec};
use crate::freealg::{commutator_element, serre_element, weights_up_to, words_of_weight, FreeElement, Letter, Word};
use crate::linalg::Matrix;
use crate::qfield::RationalFunction;

/// Sparse coordinates in a degree's basis: `(basis index, coefficient)`.
pub type Coords = Vec<(usize, RationalFunction)>;

/// One graded piece `U^-_{-β}`.
#[derive(Clone, Debug)]
pub struct DegreePiece {
    pub weight: RootVec,
    /// All words of this weight, in word order.
    pub words: Vec<Word>,
    /// Surviving words (no pivot in the relation ideal), in word order.
    pub basis: Vec<Word>,
    basis_index: HashMap<Word, usize>,
    reduce: HashMap<Word, Coords>,
    /// Echelon rows spanning the relation ideal, indexed like `words`.
    ideal: Vec<BTreeMap<usize, RationalFunction>>,
}

impl DegreePiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ideal_dim(&self) -> usize {
        self.ideal.len()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.basis_index.get(w).copied()
    }

    pub fn coords(&self, w: &Word) -> Option<&Coords> {
        self.reduce.get(w)
    }
}

/// Monomial bases of `U^-` (equally `U^+`) for every weight up to a height
/// cutoff, with the reduction of every word to basis coordinates.
///
/// The relation ideal in weight `β` is spanned by `x I_{β-x}`, `I_{β-x} x`
/// (over letters `x`) and the relation elements of weight exactly `β`; it is
/// row-reduced with pivots at the smallest words, so the basis consists of
/// the words that are not pivots.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    cutoff: usize,
    pieces: BTreeMap<RootVec, DegreePiece>,
}

impl GradedBasis {
    pub fn build(datum: &CartanDatum, cutoff: usize) -> Self {
        let relations = relation_elements(datum, cutoff);
        let mut pieces: BTreeMap<RootVec, DegreePiece> = BTreeMap::new();
        for beta in weights_up_to(datum.rank(), cutoff) {
            let piece = build_piece(datum, &beta, &pieces, &relations);
            pieces.insert(beta, piece);
        }
        GradedBasis { cutoff, pieces }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn piece(&self, beta: &RootVec) -> Option<&DegreePiece> {
        self.pieces.get(beta)
    }

    pub fn pieces(&self) -> impl Iterator<Item = &DegreePiece> {
        self.pieces.values()
    }

    pub fn dim(&self, beta: &RootVec) -> Option<usize> {
        self.pieces.get(beta).map(|p| p.dim())
    }

    /// Reduces a word to `(basis word, coefficient)` pairs, or `None` if the
    /// word lies beyond the cutoff.
    pub fn reduce(&self, w: &Word, rank: usize) -> Option<Vec<(Word, RationalFunction)>> {
        let piece = self.pieces.get(&w.weight(rank))?;
        let coords = piece.reduce.get(w)?;
        Some(coords.iter().map(|(i, c)| (piece.basis[*i].clone(), c.clone())).collect())
    }
}

/// Serre and commutation relations of `U^-` with height at most `cutoff`,
/// keyed by weight.
pub fn relation_elements(datum: &CartanDatum, cutoff: usize) -> BTreeMap<RootVec, Vec<FreeElement>> {
    let n = datum.rank();
    let cut = cutoff as i64;
    let mut out: BTreeMap<RootVec, Vec<FreeElement>> = BTreeMap::new();
    let mut push = |e: FreeElement| {
        if let Some(w) = e.terms().keys().next() {
            out.entry(w.weight(n)).or_default().push(e);
        }
    };
    for i in datum.real_nodes() {
        for j in (0..n).filter(|&j| j != i) {
            for l in 1..=datum.max_level(j, cutoff) {
                let height = 1 - l as i64 * datum.a(i, j) + l as i64;
                if height <= cut {
                    push(serre_element(datum, i, j, l));
                }
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            if datum.a(i, j) != 0 {
                continue;
            }
            for k in 1..=datum.max_level(i, cutoff) {
                for l in 1..=datum.max_level(j, cutoff) {
                    if (i == j && k >= l) || (k + l) as i64 > cut {
                        continue;
                    }
                    push(commutator_element(Letter::new(i, k), Letter::new(j, l)));
                }
            }
        }
    }
    out
}

fn build_piece(
    datum: &CartanDatum,
    beta: &RootVec,
    lower: &BTreeMap<RootVec, DegreePiece>,
    relations: &BTreeMap<RootVec, Vec<FreeElement>>,
) -> DegreePiece {
    let n = datum.rank();
    let words = words_of_weight(datum, beta);
    let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows: Vec<BTreeMap<usize, RationalFunction>> = Vec::new();

    for i in 0..n {
        for l in 1..=datum.max_level(i, beta.0[i].max(0) as usize) {
            let x = Letter::new(i, l);
            let mut gamma = beta.clone();
            gamma.0[i] -= l as i64;
            let Some(sub) = lower.get(&gamma) else { continue };
            for row in &sub.ideal {
                let mut left = BTreeMap::new();
                let mut right = BTreeMap::new();
                for (&c, v) in row {
                    let w = &sub.words[c];
                    let lw = Word::letter(x.node, x.level).concat(w);
                    let rw = w.concat(&Word::letter(x.node, x.level));
                    left.insert(index[&lw], v.clone());
                    right.insert(index[&rw], v.clone());
                }
                rows.push(left);
                rows.push(right);
            }
        }
    }
    if let Some(rels) = relations.get(beta) {
        for r in rels {
            rows.push(r.terms().iter().map(|(w, c)| (index[w], c.clone())).collect());
        }
    }

    let ideal = echelon(rows, words.len());
    let pivot_of: HashMap<usize, usize> = ideal.iter().enumerate().map(|(r, row)| (*row.keys().next().unwrap(), r)).collect();
    let basis: Vec<Word> = (0..words.len()).filter(|c| !pivot_of.contains_key(c)).map(|c| words[c].clone()).collect();
    let basis_index: HashMap<Word, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut reduce = HashMap::with_capacity(words.len());
    for (c, w) in words.iter().enumerate() {
        let coords = match pivot_of.get(&c) {
            None => vec![(basis_index[w], RationalFunction::one())],
            Some(&r) => ideal[r].iter().skip(1).map(|(&k, v)| (basis_index[&words[k]], -v)).collect(),
        };
        reduce.insert(w.clone(), coords);
    }
    DegreePiece { weight: beta.clone(), words, basis, basis_index, reduce, ideal }
}

/// Reduced echelon form of sparse rows; each returned row starts with its
/// pivot (coefficient 1) and has zeros in all other pivot columns.
fn echelon(rows: Vec<BTreeMap<usize, RationalFunction>>, cols: usize) -> Vec<BTreeMap<usize, RationalFunction>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let dense: Vec<Vec<RationalFunction>> = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![RationalFunction::zero(); cols];
            for (c, x) in r {
                v[c] = x;
            }
            v
        })
        .collect();
    let m = Matrix::from_rows(dense, cols).rref();
    (0..m.pivots.len())
        .map(|r| m.matrix.row(r).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_rank_one_is_one_dimensional() {
        let d = CartanDatum::from_matrix(vec![vec![2]], vec![1]).unwrap();
        let b = GradedBasis::build(&d, 4);
        for l in 0..=4 {
            assert_eq!(b.dim(&RootVec(vec![l])), Some(1));
        }
    }

    #[test]
    fn isotropic_basis_is_weakly_decreasing() {
        let d = CartanDatum::from_matrix(vec![vec![0]], vec![1]).unwrap();
        let b = GradedBasis::build(&d, 4);
        let p = b.piece(&RootVec(vec![3])).unwrap();
        assert_eq!(p.dim(), 3);
        for w in &p.basis {
            assert!(w.letters().windows(2).all(|x| x[0].level >= x[1].level));
        }
        let up = Word(vec![Letter::new(0, 1), Letter::new(0, 2)]);
        let down = Word(vec![Letter::new(0, 2), Letter::new(0, 1)]);
        assert_eq!(b.reduce(&up, 1).unwrap(), vec![(down, RationalFunction::one())]);
    }

    #[test]
    fn sl3_serre_cuts_dimension() {
        let d = CartanDatum::from_matrix(vec![vec![2, -1], vec![-1, 2]], vec![1, 1]).unwrap();
        let b = GradedBasis::build(&d, 4);
        assert_eq!(b.dim(&RootVec(vec![1, 1])), Some(2));
        assert_eq!(b.dim(&RootVec(vec![2, 1])), Some(2));
        assert_eq!(b.dim(&RootVec(vec![2, 2])), Some(3));
    }
}
