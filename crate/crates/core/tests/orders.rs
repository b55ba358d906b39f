use proptest::prelude::*;

use pogroup::order::{halfspace_predicate, Character, Comparison, NormalSub, Order};
use pogroup::{AlgNum, Element, Group, GroupRef, Hom, Subgroup};

fn pc(v: &[i64]) -> Element {
    Element::Pc(v.to_vec())
}

fn plane_char(values: Vec<AlgNum>) -> Order {
    Order::character(Character::new(&Group::zn(2), values).unwrap())
}

fn ab_map(h: &GroupRef, z2: &GroupRef) -> Hom {
    Hom::new("ab", h.clone(), z2.clone(), vec![pc(&[1, 0]), pc(&[0, 1]), pc(&[0, 0])]).unwrap()
}

fn corpus() -> Vec<Order> {
    let z = Group::zn(1);
    let z2 = Group::zn(2);
    let h = Group::heisenberg();
    let up = Order::from_ints(&z, &[1]).unwrap();
    let irr = Order::character(Character::new(&z2, vec![AlgNum::one(), AlgNum::sqrt(2)]).unwrap());
    let center = Hom::new("center", z.clone(), h.clone(), vec![pc(&[0, 0, 1])]).unwrap();
    let cc = Subgroup::new(h.clone(), vec![pc(&[0, 0, 1])]);
    vec![
        irr.clone(),
        Order::from_ints(&z2, &[2, -1]).unwrap(),
        Order::from_ints(&h, &[0, 1, 0]).unwrap(),
        Order::pullback(&ab_map(&h, &z2), &irr).unwrap(),
        Order::lexicographic(&center, &up, &ab_map(&h, &z2), &irr).unwrap(),
        Order::classification(&h, &Subgroup::trivial(&h), vec![AlgNum::from_int(-1)]).unwrap(),
        Order::classification(&h, &cc, vec![AlgNum::sqrt(3), AlgNum::one()]).unwrap(),
        Order::submonoid(&z, &[3, 5]).unwrap(),
    ]
}

fn ball(o: &Order, r: usize) -> Vec<Element> {
    o.group.ball_elements(&o.group.gens(), r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compare_is_antisymmetric_and_transitive(which in 0usize..8, i in any::<prop::sample::Index>(),
                                               j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let o = &corpus()[which];
        let b = ball(o, 5);
        let (x, y, z) = (i.get(&b), j.get(&b), k.get(&b));
        let xy = o.compare(x, y).unwrap();
        let yx = o.compare(y, x).unwrap();
        prop_assert_eq!(xy == Comparison::LessThan, yx == Comparison::GreaterThan);
        prop_assert_eq!(xy == Comparison::Equal, x == y);
        if o.le(x, y).unwrap() && o.le(y, z).unwrap() {
            prop_assert!(o.le(x, z).unwrap());
        }
    }

    #[test]
    fn pullback_is_functorial(m in prop::collection::vec(-2i64..=2, 4), a in -3i64..=3, b in -3i64..=3) {
        let h = Group::heisenberg();
        let z2 = Group::zn(2);
        let z = Group::zn(1);
        let psi = Hom::new("psi", z2.clone(), z2.clone(), vec![pc(&m[..2]), pc(&m[2..])]).unwrap();
        let phi = ab_map(&h, &z2).then(&psi).unwrap();
        let chi = Hom::new("chi", z2.clone(), z.clone(), vec![pc(&[a]), pc(&[b])]).unwrap();
        let o = Order::from_ints(&z, &[1]).unwrap();
        let composite = Order::pullback(&phi.then(&chi).unwrap(), &o).unwrap();
        let iterated = Order::pullback(&phi, &Order::pullback(&chi, &o).unwrap()).unwrap();
        for g in ball(&composite, 4) {
            prop_assert_eq!(composite.is_positive(&g).unwrap(), iterated.is_positive(&g).unwrap());
        }
    }

    #[test]
    fn plane_characters_are_positive_cones(x in -5i64..=5, y in -5i64..=5, u in -4i64..=4, v in -4i64..=4) {
        let o = plane_char(vec![AlgNum::from_int(x), AlgNum::from_int(y)]);
        let g = pc(&[u, v]);
        prop_assert_eq!(o.is_positive(&g).unwrap(), x * u + y * v > 0);
    }
}

#[test]
fn lexicographic_contains_both_suborders() {
    let z = Group::zn(1);
    let z2 = Group::zn(2);
    let h = Group::heisenberg();
    let up = Order::from_ints(&z, &[1]).unwrap();
    let irr = Order::character(Character::new(&z2, vec![AlgNum::one(), AlgNum::sqrt(2)]).unwrap());
    let center = Hom::new("center", z.clone(), h.clone(), vec![pc(&[0, 0, 1])]).unwrap();
    let ab = ab_map(&h, &z2);
    let lex = Order::lexicographic(&center, &up, &ab, &irr).unwrap();
    let pulled = Order::pullback(&ab, &irr).unwrap();
    let pushed = Order::pushforward(&center, &up).unwrap();
    let mut seen = [0usize; 2];
    for g in ball(&lex, 5) {
        for (i, sub) in [&pulled, &pushed].into_iter().enumerate() {
            if sub.is_positive(&g).unwrap() {
                seen[i] += 1;
                assert!(lex.is_positive(&g).unwrap(), "{}", h.format(&g));
            }
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

/// Subgroups of the Heisenberg group and the plane used for antichain checks.
fn subgroups() -> Vec<Subgroup> {
    let h = Group::heisenberg();
    let z2 = Group::zn(2);
    vec![
        Subgroup::trivial(&h),
        Subgroup::new(h.clone(), vec![pc(&[0, 0, 1])]),
        Subgroup::new(h.clone(), vec![pc(&[0, 1, 0])]),
        Subgroup::new(h.clone(), vec![pc(&[0, 1, 0]), pc(&[0, 0, 1])]),
        Subgroup::new(h.clone(), vec![pc(&[1, 1, 0])]),
        Subgroup::whole(&h),
        Subgroup::new(z2.clone(), vec![pc(&[0, 1])]),
        Subgroup::new(z2.clone(), vec![pc(&[1, 1])]),
        Subgroup::new(z2.clone(), vec![pc(&[2, -1])]),
    ]
}

#[test]
fn antichain_agrees_with_ball_intersection() {
    let mut exact = 0;
    for o in corpus() {
        for k in subgroups() {
            if !k.ambient.same_as(&o.group) {
                continue;
            }
            let v = o.is_antichain(&k).unwrap();
            let brute = o.group.ball_elements(&k.gens, 6).iter().all(|g| !o.is_positive(g).unwrap());
            assert_eq!(v.value, brute, "{} on {}", o.describe(), k.describe());
            exact += 1;
        }
    }
    assert!(exact > 20);
}

#[test]
fn half_space_of_a_kernel_is_kernel_or_positive() {
    let h = Group::heisenberg();
    let z2 = Group::zn(2);
    let ab = ab_map(&h, &z2);
    for o in [
        Order::pullback(&ab, &plane_char(vec![AlgNum::one(), AlgNum::sqrt(2)])).unwrap(),
        Order::from_ints(&h, &[1, 0, 0]).unwrap(),
        Order::classification(&h, &Subgroup::trivial(&h), vec![AlgNum::one()]).unwrap(),
    ] {
        for k in o.maximal_antichain_normal_subgroups().unwrap() {
            let hs = halfspace_predicate(&o, &k).unwrap();
            let kgens: Vec<Element> = k.generators().map(|g| g.to_vec()).unwrap_or_default();
            let kball = h.ball_elements(&kgens, 4);
            for g in ball(&o, 4) {
                let simple = k.contains(&g).unwrap() || o.is_positive(&g).unwrap();
                assert_eq!(hs.contains(&g).unwrap(), simple, "{} at {}", o.describe(), h.format(&g));
                // Direct definition: g is above some element of K.
                if kball.iter().any(|x| o.le(x, &g).unwrap()) {
                    assert!(simple);
                }
            }
        }
    }
}

#[test]
fn half_space_of_the_plane_is_a_closed_half_plane() {
    let z2 = Group::zn(2);
    let o = Order::from_ints(&z2, &[1, 0]).unwrap();
    let k = NormalSub::Generated(Subgroup::new(z2.clone(), vec![pc(&[0, 1])]));
    let hs = halfspace_predicate(&o, &k).unwrap();
    for g in ball(&o, 5) {
        assert_eq!(hs.contains(&g).unwrap(), g.pc()[0] >= 0);
    }
}

#[test]
fn character_canonical_form_keeps_direction() {
    let z2 = Group::zn(2);
    let c = Character::new(&z2, vec![AlgNum::from_int(-3), AlgNum::sqrt(2).scale_int(6)]).unwrap();
    let k = c.canonical().unwrap();
    assert!(k.equivalent(&c));
    let g = pc(&[-1, 0]);
    assert_eq!(k.sign(&g), c.sign(&g));
}
