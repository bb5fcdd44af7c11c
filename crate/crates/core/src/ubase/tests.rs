use crate::cartan::CartanDatum;
use crate::freealg::{Letter, Tau, Word};
use crate::qfield::RationalFunction;

use super::*;

fn algebra(a: Vec<Vec<i64>>, s: Vec<i64>, cutoff: usize) -> Algebra {
    let d = CartanDatum::from_matrix(a, s).unwrap();
    let tau = Tau::geometric(&d, cutoff);
    Algebra::new(d, tau, cutoff).unwrap()
}

fn sl2() -> Algebra {
    algebra(vec![vec![2]], vec![1], 4)
}

fn iso() -> Algebra {
    algebra(vec![vec![0]], vec![1], 4)
}

fn imag() -> Algebra {
    algebra(vec![vec![-2]], vec![1], 4)
}

fn rank2() -> Algebra {
    algebra(vec![vec![2, -1], vec![-1, 0]], vec![1, 1], 4)
}

fn q(e: i64) -> RationalFunction {
    RationalFunction::q_pow(e)
}

fn mul(u: &Algebra, xs: &[&Element]) -> Element {
    let owned: Vec<Element> = xs.iter().map(|x| (*x).clone()).collect();
    u.multiply_all(&owned).unwrap()
}

fn generators(u: &Algebra, max: u32) -> Vec<Gen> {
    let d = u.datum();
    let mut out = Vec::new();
    for i in 0..u.rank() {
        for l in 1..=d.max_level(i, max as usize) {
            out.push(Gen::E(Letter::new(i, l)));
            out.push(Gen::F(Letter::new(i, l)));
        }
        out.push(Gen::T(Torus::k(d, i, 1)));
    }
    out
}

fn gen_height(g: &Gen) -> u32 {
    match g {
        Gen::E(l) | Gen::F(l) => l.level,
        Gen::T(_) => 0,
    }
}

#[test]
fn sl2_commutator() {
    let u = sl2();
    let e = u.e(0, 1).unwrap();
    let big_f = u.f(0, 1).unwrap().scale(&-q(1));
    let lhs = mul(&u, &[&e, &big_f]).sub(&mul(&u, &[&big_f, &e]));
    let k = u.k(0, 1).sub(&u.k(0, -1));
    let rhs = k.scale(&RationalFunction::one().checked_div(&(&q(1) - &q(-1))).unwrap());
    assert_eq!(lhs, rhs);
}

#[test]
fn sl2_torus_action() {
    let u = sl2();
    let e = u.e(0, 1).unwrap();
    let f = u.f(0, 1).unwrap();
    assert_eq!(mul(&u, &[&u.k(0, 1), &e, &u.k(0, -1)]), e.scale(&q(2)));
    assert_eq!(mul(&u, &[&u.k(0, 1), &f, &u.k(0, -1)]), f.scale(&q(-2)));
}

#[test]
fn torus_past_f() {
    let u = rank2();
    let h = Torus::from_parts(&[1, 2], &[0, 1]);
    let f = u.f(1, 2).unwrap();
    let lhs = mul(&u, &[&u.torus(h.clone()), &f]);
    let pair = h.pair_root(u.datum(), &crate::cartan::RootVec(vec![0, 2]));
    let key = TermKey::new(Word::letter(1, 2), h, Word::empty());
    assert_eq!(lhs, Element::term(key, q(-pair)));
}

#[test]
fn isotropic_reorder() {
    let u = iso();
    let got = u.reorder_ef(0, 1, 1);
    let fe = Element::term(TermKey::new(Word::letter(0, 1), Torus::zero(1), Word::letter(0, 1)), RationalFunction::one());
    let tau1 = u.tau().get(0, 1).unwrap();
    let expected = fe.add(&u.k(0, 1).sub(&u.k(0, -1)).scale(&tau1));
    assert_eq!(got, expected);
}

#[test]
fn cross_node_letters_commute() {
    let u = rank2();
    let lhs = mul(&u, &[&u.e(1, 2).unwrap(), &u.f(0, 1).unwrap()]);
    let key = TermKey::new(Word::letter(0, 1), Torus::zero(2), Word::letter(1, 2));
    assert_eq!(lhs, Element::term(key, RationalFunction::one()));
}

#[test]
fn unit_is_neutral() {
    let u = rank2();
    let x = mul(&u, &[&u.e(1, 1).unwrap(), &u.f(1, 2).unwrap(), &u.k(0, 1)]);
    assert_eq!(u.multiply(&u.one(), &x).unwrap(), x);
    assert_eq!(u.multiply(&x, &u.one()).unwrap(), x);
}

#[test]
fn associativity_on_triples() {
    for u in [iso(), imag(), rank2()] {
        let gens = generators(&u, 2);
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    if gen_height(a) + gen_height(b) + gen_height(c) > 3 {
                        continue;
                    }
                    let (x, y, z) = (u.gen_element(a).unwrap(), u.gen_element(b).unwrap(), u.gen_element(c).unwrap());
                    let left = u.multiply(&u.multiply(&x, &y).unwrap(), &z).unwrap();
                    let right = u.multiply(&x, &u.multiply(&y, &z).unwrap()).unwrap();
                    assert_eq!(left, right, "{a:?} {b:?} {c:?}");
                }
            }
        }
    }
}

#[test]
fn schedules_agree_with_multiply() {
    for u in [iso(), imag(), rank2()] {
        let gens = generators(&u, 2);
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    if gen_height(a) + gen_height(b) + gen_height(c) > 3 {
                        continue;
                    }
                    let word = vec![(RationalFunction::one(), vec![a.clone(), b.clone(), c.clone()])];
                    let left = u.rewrite_normalize(&word, Schedule::LeftmostFirst).unwrap();
                    let right = u.rewrite_normalize(&word, Schedule::RightmostFirst).unwrap();
                    assert_eq!(left, right);
                    assert_eq!(left, u.evaluate(&word).unwrap());
                }
            }
        }
    }
}

#[test]
fn delta_on_level_one() {
    let u = sl2();
    let f = u.delta_f(0, 1).unwrap();
    let expected = TensorElement::outer(&u.f(0, 1).unwrap(), &u.one());
    let mut expected = expected;
    expected.add_scaled(&TensorElement::outer(&u.k(0, 1), &u.f(0, 1).unwrap()), &RationalFunction::one());
    assert_eq!(f, expected);
    let e = u.delta_e(0, 1).unwrap();
    let mut expected = TensorElement::outer(&u.e(0, 1).unwrap(), &u.k(0, -1));
    expected.add_scaled(&TensorElement::outer(&u.one(), &u.e(0, 1).unwrap()), &RationalFunction::one());
    assert_eq!(e, expected);
}

#[test]
fn delta_is_multiplicative() {
    for u in [iso(), imag(), rank2()] {
        let gens = generators(&u, 2);
        for a in &gens {
            for b in &gens {
                if gen_height(a) + gen_height(b) > 3 {
                    continue;
                }
                let prod = u.evaluate(&vec![(RationalFunction::one(), vec![a.clone(), b.clone()])]).unwrap();
                let lhs = u.comultiply(&prod).unwrap();
                let rhs = u.tensor_multiply(&u.delta_gen(a).unwrap(), &u.delta_gen(b).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{a:?} {b:?}");
            }
        }
    }
}

#[test]
fn omega_and_phi() {
    let u = rank2();
    assert_eq!(u.omega(&u.e(1, 2).unwrap()).unwrap(), u.f(1, 2).unwrap());
    let gens = generators(&u, 2);
    for a in &gens {
        for b in &gens {
            if gen_height(a) + gen_height(b) > 3 {
                continue;
            }
            let x = u.gen_element(a).unwrap();
            let y = u.gen_element(b).unwrap();
            let xy = u.multiply(&x, &y).unwrap();
            assert_eq!(u.omega(&u.omega(&xy).unwrap()).unwrap(), xy);
            assert_eq!(u.phi(&u.phi(&xy).unwrap()).unwrap(), xy);
            let om = u.multiply(&u.omega(&x).unwrap(), &u.omega(&y).unwrap()).unwrap();
            assert_eq!(u.omega(&xy).unwrap(), om);
            let ph = u.multiply(&u.phi(&y).unwrap(), &u.phi(&x).unwrap()).unwrap();
            assert_eq!(u.phi(&xy).unwrap(), ph, "{a:?} {b:?}");
        }
    }
}

#[test]
fn relations_vanish() {
    for u in [sl2(), iso(), imag(), rank2()] {
        for r in u.check_relations(3, true).unwrap() {
            assert!(r.vanishes, "{} {}", r.kind, r.params);
            assert_eq!(r.delta_vanishes, Some(true), "{} {}", r.kind, r.params);
        }
    }
}

#[test]
fn isotropic_string_relation_at_two() {
    let u = iso();
    assert!(u.string_residual(0, 2, 2).unwrap().is_zero());
    assert!(u.string_delta_residual(0, 2, 2).unwrap().is_zero());
}

#[test]
fn height_overflow_is_reported() {
    let u = iso();
    let f = u.f(0, 3).unwrap();
    let err = u.multiply(&f, &u.f(0, 2).unwrap()).unwrap_err();
    assert!(matches!(err, AlgebraError::HeightOverflow { .. }));
    assert!(matches!(u.f(0, 9), Err(AlgebraError::HeightOverflow { .. })));
}

#[test]
fn form_ranks_against_basis_dimensions() {
    for u in [sl2(), iso(), imag(), rank2()] {
        let rows = u.form_ranks(4).unwrap();
        assert!(!rows.is_empty());
        for r in &rows {
            assert!(r.matches(), "{r:?}");
        }
    }
}
