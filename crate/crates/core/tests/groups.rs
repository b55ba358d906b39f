use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use pogroup::group::Kind;
use pogroup::sigma::{CayleyBall, DEFAULT_BUDGET};
use pogroup::{Element, Group, GroupRef, Hom, Subgroup};

fn pc(v: &[i64]) -> Element {
    Element::Pc(v.to_vec())
}

fn letters(k: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=k, any::<bool>()).prop_map(|(l, s)| if s { l } else { -l }), 0..=max_len)
}

/// Heisenberg `a^x b^y c^z` as the unitriangular matrix entries (x, y, x y + z).
fn heis_mul(p: &[i64], q: &[i64]) -> Vec<i64> {
    let m = [p[0], p[1], p[0] * p[1] + p[2]];
    let n = [q[0], q[1], q[0] * q[1] + q[2]];
    let r = [m[0] + n[0], m[1] + n[1], m[2] + n[2] + m[0] * n[1]];
    vec![r[0], r[1], r[2] - r[0] * r[1]]
}

fn free_reduce(w: &[i32]) -> Vec<i32> {
    let mut st: Vec<i32> = Vec::new();
    for &l in w {
        if st.last() == Some(&-l) {
            st.pop();
        } else {
            st.push(l);
        }
    }
    st
}

proptest! {
    #[test]
    fn free_products_match_rewriting(u in letters(3, 12), v in letters(3, 12)) {
        let f = Group::free_rank(3);
        let x = f.eval_letters(&u);
        let y = f.eval_letters(&v);
        let xy = f.mul(&x, &y);
        let w = xy.word();
        prop_assert!(w.windows(2).all(|p| p[0] != -p[1]));
        let joined: Vec<i32> = u.iter().chain(&v).copied().collect();
        prop_assert_eq!(w.to_vec(), free_reduce(&joined));
    }

    #[test]
    fn heisenberg_products_match_matrices(u in letters(3, 10), v in letters(3, 10)) {
        let h = Group::heisenberg();
        let x = h.eval_letters(&u);
        let y = h.eval_letters(&v);
        prop_assert_eq!(h.mul(&x, &y), pc(&heis_mul(x.pc(), y.pc())));
    }

    #[test]
    fn collection_is_associative(u in letters(5, 8), v in letters(5, 8), w in letters(5, 8)) {
        let g = Group::free_nilpotent2(3);
        let (x, y, z) = (g.eval_letters(&u), g.eval_letters(&v), g.eval_letters(&w));
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
    }

    #[test]
    fn homs_respect_products(imgs in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 2),
                             u in letters(3, 8), v in letters(3, 8)) {
        let h = Group::heisenberg();
        // c must go to the commutator of the images of a and b.
        let a = pc(&imgs[0]);
        let b = pc(&imgs[1]);
        let c = h.commutator(&a, &b);
        let phi = Hom::new("phi", h.clone(), h.clone(), vec![a, b, c]).unwrap();
        prop_assert!(phi.validate());
        let (x, y) = (h.eval_letters(&u), h.eval_letters(&v));
        prop_assert_eq!(phi.apply(&h.mul(&x, &y)), h.mul(&phi.apply(&x), &phi.apply(&y)));
    }

    #[test]
    fn plane_membership_matches_coefficient_search(
        g1 in prop::collection::vec(-3i64..=3, 2),
        g2 in prop::collection::vec(-3i64..=3, 2),
        t in prop::collection::vec(-4i64..=4, 2),
    ) {
        let z2 = Group::zn(2);
        let sub = Subgroup::new(z2.clone(), vec![pc(&g1), pc(&g2)]);
        // Coefficients in [-30, 30] suffice for these sizes.
        let mut found = false;
        for p in -30i64..=30 {
            for q in -30i64..=30 {
                if p * g1[0] + q * g2[0] == t[0] && p * g1[1] + q * g2[1] == t[1] {
                    found = true;
                }
            }
        }
        prop_assert_eq!(sub.contains(&pc(&t)).unwrap(), found);
    }
}

#[test]
fn hom_with_broken_relation_is_rejected() {
    let h = Group::heisenberg();
    let bad = Hom::new("bad", h.clone(), h.clone(), vec![h.gen(0), h.gen(1), h.identity()]);
    assert!(bad.is_err());
}

#[test]
fn presentations_obey_the_class_two_law() {
    for g in [Group::heisenberg(), Group::free_nilpotent2(3)] {
        let p = g.pc().unwrap();
        for i in 0..p.n {
            for j in i + 1..p.n {
                assert_eq!(p.comm(i, j).len(), p.m);
            }
        }
        assert_eq!(g.kind(), Kind::Nilpotent2);
        for x in g.gens().iter().skip(p.n) {
            for y in g.gens() {
                assert!(g.is_identity(&g.commutator(x, &y)));
            }
        }
    }
}

/// Every word of length at most `r`, evaluated with an independent product.
fn words_upto(k: i32, r: usize, mul: impl Fn(&Element, i32) -> Element, id: Element) -> HashMap<Element, usize> {
    let mut seen = HashMap::from([(id.clone(), 0)]);
    let mut layer = vec![id];
    for d in 1..=r {
        let mut next = Vec::new();
        for x in &layer {
            for l in (1..=k).flat_map(|l| [l, -l]) {
                let y = mul(x, l);
                seen.entry(y.clone()).or_insert(d);
                next.push(y);
            }
        }
        layer = next;
    }
    seen
}

#[test]
fn heisenberg_ball_matches_word_enumeration() {
    let h = Group::heisenberg();
    let step = |x: &Element, l: i32| {
        let mut g = vec![0i64; 3];
        g[l.unsigned_abs() as usize - 1] = l.signum() as i64;
        pc(&heis_mul(x.pc(), &g))
    };
    for k in [2, 3] {
        let words = words_upto(k, 3, step, pc(&[0, 0, 0]));
        let gens: Vec<Element> = h.gens().into_iter().take(k as usize).collect();
        let ball = CayleyBall::build(&h, &gens, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(ball.len(), words.len());
        for (i, v) in ball.vertices.iter().enumerate() {
            assert_eq!(words[v] as u32, ball.dist[i], "{}", h.format(v));
        }
    }
}

fn check_ball(g: &GroupRef, r: usize) {
    let ball = CayleyBall::build(g, &g.gens(), r, DEFAULT_BUDGET).unwrap();
    let sym: Vec<Element> = g.symmetric_gens();
    let set: HashSet<&Element> = ball.vertices.iter().collect();
    for (i, v) in ball.vertices.iter().enumerate() {
        if (ball.dist[i] as usize) < r {
            for s in &sym {
                assert!(set.contains(&g.mul(v, s)), "{} lacks a neighbor", g.format(v));
            }
        }
    }
}

#[test]
fn balls_are_closed_below_the_radius() {
    for g in [Group::zn(3), Group::free_rank(2), Group::heisenberg(), Group::free_nilpotent2(3)] {
        check_ball(&g, 3);
    }
}

#[test]
fn free_ball_counts() {
    let f = Group::free_rank(2);
    let ball = CayleyBall::build(&f, &f.gens(), 5, DEFAULT_BUDGET).unwrap();
    for r in 0..=5u32 {
        assert_eq!(ball.count_within(r as usize), (2 * 3usize.pow(r) - 1));
    }
}
