use proptest::prelude::*;

use pogroup::order::{halfspace_predicate, Character, Order};
use pogroup::sigma::{
    classical_sigma_membership_in, partition, sigma_membership, sigma_membership_in, CayleyBall, Connectivity,
    Schedule, SigmaOptions, DEFAULT_BUDGET,
};
use pogroup::{AlgNum, Group, GroupRef};

fn small() -> Schedule {
    Schedule {
        radii: vec![3, 4],
        slacks: vec![1, 2, 3],
    }
}

fn ball_for(g: &GroupRef, s: &Schedule) -> CayleyBall {
    SigmaOptions::new().ball(g, s).unwrap()
}

fn groups() -> Vec<GroupRef> {
    vec![Group::zn(2), Group::zn(3), Group::free_rank(2), Group::heisenberg()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn both_routes_agree(which in 0usize..4, vals in prop::collection::vec(-3i64..=3, 3)) {
        let g = &groups()[which];
        let n = if g.is_free() || g.is_abelian() { g.n_gens() } else { 2 };
        let mut v: Vec<i64> = vals[..n].to_vec();
        v.resize(g.n_gens(), 0);
        prop_assume!(v.iter().any(|&x| x != 0));
        let c = Character::from_ints(g, &v).unwrap();
        let s = small();
        let ball = ball_for(g, &s);
        // Errors out if the member sets or partitions differ.
        let classical = classical_sigma_membership_in(&c, &ball, &s, 1).unwrap();
        let via_order = sigma_membership_in(&Order::character(c), &ball, &s, 1).unwrap();
        prop_assert_eq!(&classical.outcome, &via_order[0].outcome);
    }

    #[test]
    fn more_slack_never_splits(which in 0usize..4, vals in prop::collection::vec(-2i64..=2, 3)) {
        let g = &groups()[which];
        let mut v: Vec<i64> = vals[..g.n_gens().min(3)].to_vec();
        v.resize(g.n_gens(), 0);
        if !g.is_free() && !g.is_abelian() {
            v[2] = 0;
        }
        prop_assume!(v.iter().any(|&x| x != 0));
        let o = Order::from_ints(g, &v).unwrap();
        let s = small();
        let ball = ball_for(g, &s);
        let k = o.maximal_antichain_normal_subgroups().unwrap().remove(0);
        let hs = halfspace_predicate(&o, &k).unwrap();
        let member: Vec<bool> = ball.vertices.iter().map(|x| hs.contains(x).unwrap()).collect();
        for &r in &s.radii {
            let counts: Vec<usize> = (1..=3).map(|n| partition(&ball, &member, r, n, 1).components()).collect();
            prop_assert!(counts.windows(2).all(|w| w[1] <= w[0]), "{:?}", counts);
        }
    }

    #[test]
    fn positive_scaling_changes_nothing(x in -3i64..=3, y in -3i64..=3, k in 1i64..=4) {
        prop_assume!(x != 0 || y != 0);
        let z2 = Group::zn(2);
        let s = small();
        let ball = ball_for(&z2, &s);
        let a = Order::from_ints(&z2, &[x, y]).unwrap();
        let b = Order::character(
            Character::new(&z2, vec![AlgNum::from_int(x).scale_int(k), AlgNum::from_int(y).scale_int(k)]).unwrap(),
        );
        let va = sigma_membership_in(&a, &ball, &s, 1).unwrap();
        let vb = sigma_membership_in(&b, &ball, &s, 1).unwrap();
        prop_assert_eq!(&va[0].outcome, &vb[0].outcome);
        prop_assert_eq!(&va[0].probes, &vb[0].probes);
    }
}

#[test]
fn free_witnesses_are_members_inside_the_radius() {
    let f = Group::free_rank(2);
    let o = Order::from_ints(&f, &[1, 0]).unwrap();
    let s = Schedule::default();
    let ball = ball_for(&f, &s);
    let v = &sigma_membership_in(&o, &ball, &s, 1).unwrap()[0];
    let k = o.maximal_antichain_normal_subgroups().unwrap().remove(0);
    let hs = halfspace_predicate(&o, &k).unwrap();
    let mut checked = 0;
    for p in &v.probes {
        if let Connectivity::Disconnected { pair } = &p.connectivity {
            for &i in [pair.0, pair.1].iter() {
                assert!(hs.contains(&ball.vertices[i]).unwrap());
                assert!(ball.dist[i] as usize <= p.radius);
            }
            checked += 1;
        }
    }
    assert!(checked >= 3);
}

#[test]
fn repeated_runs_serialize_identically() {
    let h = Group::heisenberg();
    let o = Order::from_ints(&h, &[1, 2, 0]).unwrap();
    let a = serde_json::to_string(&sigma_membership(&o, &small(), &SigmaOptions::new()).unwrap()).unwrap();
    let b = serde_json::to_string(&sigma_membership(&o, &small(), &SigmaOptions::new()).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cached_ball_gives_the_same_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let f = Group::free_rank(2);
    let o = Order::from_ints(&f, &[0, 1]).unwrap();
    let mut opts = SigmaOptions::new();
    opts.cache_dir = Some(dir.path().to_path_buf());
    let first = sigma_membership(&o, &small(), &opts).unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = sigma_membership(&o, &small(), &opts).unwrap();
    let fresh = sigma_membership(&o, &small(), &SigmaOptions::new()).unwrap();
    assert_eq!(first, second);
    assert_eq!(first, fresh);
}

#[test]
fn budget_is_enforced() {
    let f = Group::free_rank(3);
    assert!(CayleyBall::build(&f, &f.gens(), 12, 1000).is_err());
    assert!(CayleyBall::build(&f, &f.gens(), 3, DEFAULT_BUDGET).is_ok());
}
