mod common;

use common::{certified_eps_star, load, q, r, Raw};
use ecgame::least_core::{self, LeastCoreReport};
use ecgame::properties::{self, PropertyReport};
use ecgame::shares::{self, PartitionMode, SharesReport};
use ecgame::{Game, Player, SesgInstance};

fn game(name: &str) -> Game {
    load(name).build_game().unwrap()
}

fn analyze(inst: &SesgInstance) -> (Game, LeastCoreReport) {
    let g = inst.build_game().unwrap();
    let g0 = inst.strip_fees().build_game().unwrap();
    let lc = LeastCoreReport::analyze(&g, Some((&g0, inst.max_fee()))).unwrap();
    (g, lc)
}

#[test]
fn non_convex_community_for_any_fee() {
    for c in [r(0), q(1, 4), r(1), r(3)] {
        let inst = SesgInstance::unit_gain(
            &[(1, r(1)), (2, r(2)), (3, r(3))],
            &[(4, q(11, 2))],
            &[(1, c), (2, c), (3, c), (4, c)],
        )
        .unwrap();
        let g = inst.build_game().unwrap();
        assert_eq!(g.grand_value(), q(11, 2) - r(4) * c);
        let s = g.coalition([0, 1, 3], true).unwrap();
        let t = g.coalition([0, 2, 3], true).unwrap();
        assert_eq!(g.value(s), r(3) - r(3) * c);
        assert_eq!(g.value(t), r(4) - r(3) * c);
        assert!(properties::violates_supermodularity(&g, s, t));
        let convex = properties::check_convex(&g).unwrap();
        assert_eq!(convex.witness, Some((s, t)));
    }
}

#[test]
fn fee_free_bounds_and_tightness() {
    let ex2 = load("example2");
    let (g, lc) = analyze(&ex2);
    assert_eq!(g.grand_value(), r(100));
    assert_eq!(lc.eps_star, q(14, 3));
    assert_eq!(lc.s_min, g.coalition([1, 2], true).unwrap());
    for (p2, eps, lower, upper) in [(90, q(14, 3), r(2), r(5)), (92, r(4), q(8, 5), r(4)), (100, r(0), r(0), r(0))] {
        let (g, lc) = analyze(&ex2.with_capacity(2, r(p2)).unwrap());
        let b = least_core::bounds_no_fees(&g).unwrap();
        assert_eq!((lc.eps_star, b.lower, b.upper), (eps, lower, upper), "p₂ = {p2}");
    }
}

#[test]
fn egalitarian_conditions_differ() {
    let g = game("example3");
    assert_eq!(g.grand_value(), r(10));
    let direct = properties::egalitarian_membership(&g).unwrap();
    assert!(!direct.users_all_in_core);
    assert!(direct.egalitarian_in_core);
    assert_eq!(properties::egalitarian_conditions(&g), direct);
    let s = g.coalition([1, 3], true).unwrap();
    assert_eq!(g.value(s) / r(2), r(3));
}

#[test]
fn fees_break_every_property_but_balancedness() {
    let g = game("example4");
    assert_eq!(g.grand_value(), r(5));
    let p = PropertyReport::analyze(&g).unwrap();
    assert!(!p.superadditive.holds && !p.monotonic.holds && !p.convex.holds);
    assert!(p.balanced.holds && !p.totally_balanced);
    let c = |u: &[usize], a: bool| g.coalition(u.iter().map(|i| i - 1), a).unwrap();
    assert!(properties::violates_superadditivity(&g, c(&[3], false), c(&[1, 4], true)));
    assert!(properties::violates_monotonicity(&g, c(&[1, 4], true), Player::User(2)));
    assert!(properties::violates_supermodularity(&g, c(&[1, 3, 4], true), c(&[2, 3, 4], true)));
    assert!(properties::sesg_balanced_char(&load("example4")).unwrap());
    let (_, lc) = analyze(&load("example4"));
    assert_eq!(lc.eps_star, q(1, 3));
}

#[test]
fn fee_bounds_and_tightness() {
    let ex5 = load("example5");
    let (g, lc) = analyze(&ex5);
    assert_eq!(g.grand_value(), r(96));
    let fb = lc.fee_bounds.unwrap();
    assert_eq!((lc.eps_star, fb.lower, fb.upper, fb.eps0_star), (r(4), q(9, 5), q(9, 2), Some(q(14, 3))));
    assert!(!fb.lower_guaranteed);
    assert!(fb.sandwich_lower.unwrap() < lc.eps_star);
    let (_, lc) = analyze(&ex5.with_capacity(2, r(91)).unwrap());
    assert_eq!((lc.eps_star, lc.fee_bounds.unwrap().upper), (r(4), r(4)));
    let (g, lc) = analyze(&ex5.with_capacity(2, r(99)).unwrap());
    assert_eq!((lc.eps_star, lc.fee_bounds.unwrap().lower), (r(0), r(0)));
    assert_eq!(g.value(g.coalition([1, 2, 3], true).unwrap()), g.grand_value());
}

#[test]
fn unbalanced_tight_upper_bounds() {
    let (g, lc) = analyze(&load("example6"));
    assert_eq!(g.grand_value(), r(4));
    assert!(!lc.balanced);
    let u = lc.unbalanced.unwrap();
    assert_eq!((lc.eps_star, u.eps_tilde, lc.eps_hat, u.eps_bar), (r(-1), r(-1), r(-1), r(-1)));
    let ex = lc.exactness.unwrap();
    assert!(ex.exact);
    assert_eq!(ex.k, Some(1));
    let sh = SharesReport::analyze(&g, &analyze(&load("example6")).1, PartitionMode::Exact).unwrap();
    assert_eq!((sh.min_aggregator, sh.max_aggregator), (r(0), r(5)));
}

#[test]
fn unbalanced_strict_bounds() {
    let (g, lc) = analyze(&load("example7"));
    assert_eq!(g.grand_value(), r(5));
    let u = lc.unbalanced.unwrap();
    assert_eq!(lc.eps_star, q(-2, 3));
    assert_eq!((u.eps_tilde, lc.eps_hat, u.eps_bar), (q(-1, 2), q(-1, 3), q(5, 7)));
    assert!(!lc.formula_exact);
    let t = Raw::from_instance(&load("example7")).table();
    assert_eq!(certified_eps_star(&t, &lc.primal_cert, &lc.dual_cert), q(-2, 3));
}

#[test]
fn cardinality_of_s_hat_is_not_enough() {
    let (g, lc) = analyze(&load("example8"));
    assert_eq!(g.grand_value(), r(1));
    assert_eq!((lc.eps_star, lc.eps_hat), (r(-2), q(-3, 2)));
    assert_eq!(lc.unbalanced.unwrap().eps_tilde, r(-2));
    let ex = lc.exactness.clone().unwrap();
    assert_eq!(ex.s_hat, g.coalition([0, 1, 2, 3, 5], true).unwrap());
    assert_eq!(ex.k, Some(4));
    assert!(!ex.exact);
    assert_eq!(ex.violation, Some(g.coalition([1, 2, 3, 5], true).unwrap()));
    let check = least_core::check_allocation_at(&g, 4, q(-3, 2));
    assert!(!least_core::eps_core_contains(&g, &check, q(-3, 2)).unwrap().contains);
    assert!(shares::s_min(&lc).is_err());
}

#[test]
fn singleton_bound_can_be_tight() {
    let g = game("example_tight");
    assert_eq!(g.grand_value(), r(5));
    let m: Vec<_> = (0..4).map(|i| g.marginal_contribution(Player::User(i)).unwrap()).collect();
    assert_eq!(m, vec![r(0), r(0), r(2), r(3)]);
    let p = PropertyReport::analyze(&g).unwrap();
    assert!(!p.monotonic.holds);
    assert_eq!(p.big_boss, None);
    let (g, lc) = analyze(&load("example_tight"));
    let sh = SharesReport::analyze(&g, &lc, PartitionMode::Singletons).unwrap();
    assert_eq!((lc.eps_star, sh.min_aggregator, sh.singleton_bound), (r(0), r(0), r(0)));
}

#[test]
fn partition_bound_can_be_strict() {
    for (name, vn, eps, ma) in [("example9", r(3), r(0), r(3)), ("example10", r(0), r(-1), r(1))] {
        let (g, lc) = analyze(&load(name));
        assert_eq!((g.grand_value(), lc.eps_star, lc.eps_hat), (vn, eps, eps), "{name}");
        let sh = SharesReport::analyze(&g, &lc, PartitionMode::Exact).unwrap();
        assert_eq!(sh.min_aggregator, ma, "{name}");
        assert_eq!(sh.partition_bound.bound, r(0), "{name}");
        assert!(sh.singleton_bound <= sh.partition_bound.bound);
    }
    let (g, lc) = analyze(&load("example10"));
    assert!(!lc.balanced);
    assert_eq!(lc.exactness.unwrap().k, Some(2));
    let sh = SharesReport::analyze(&g, &analyze(&load("example10")).1, PartitionMode::Exact).unwrap();
    assert_eq!(sh.max_users, r(-1));
}
