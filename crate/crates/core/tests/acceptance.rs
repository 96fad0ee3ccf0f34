//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;

use common::{certified_eps_star, flat, load, q, r, sweep, Table};
use ecgame::least_core::{self, ClanBranch, LeastCoreReport};
use ecgame::properties::{self, PropertyReport};
use ecgame::shares::{self, PartitionMode, SharesReport};
use ecgame::{Coalition, Game, Player, Rational, SesgInstance};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn lift<T>(what: &str, r: ecgame::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn report(inst: &SesgInstance) -> Result<(Game, LeastCoreReport), String> {
    let game = lift("build", inst.build_game())?;
    let game0 = lift("build", inst.strip_fees().build_game())?;
    let lc = lift("least core", LeastCoreReport::analyze(&game, Some((&game0, inst.max_fee()))))?;
    Ok((game, lc))
}

fn criterion_1() -> Outcome {
    let ex2 = load("example2");
    let (g2, lc2) = report(&ex2)?;
    expect("example 2 ε*₀", lc2.eps_star, q(14, 3))?;
    let b = lift("bounds", least_core::bounds_no_fees(&g2))?;
    expect("example 2 bounds", (b.lower, b.upper), (r(2), r(5)))?;

    let (_, lc5) = report(&load("example5"))?;
    expect("example 5 ε*", lc5.eps_star, r(4))?;
    let fb = lc5.fee_bounds.ok_or("example 5 is balanced")?;
    expect("example 5 bounds", (fb.lower, fb.upper), (q(9, 5), q(9, 2)))?;
    expect("example 5 ε*₀", fb.eps0_star, Some(q(14, 3)))?;

    let (_, lc6) = report(&load("example6"))?;
    let u6 = lc6.unbalanced.ok_or("example 6 is unbalanced")?;
    expect("example 6 (ε*, ε̃, ε̂, ε̄)", (lc6.eps_star, u6.eps_tilde, lc6.eps_hat, u6.eps_bar), (r(-1), r(-1), r(-1), r(-1)))?;

    let (_, lc7) = report(&load("example7"))?;
    let u7 = lc7.unbalanced.ok_or("example 7 is unbalanced")?;
    expect("example 7 ε*", lc7.eps_star, q(-2, 3))?;
    expect("example 7 (ε̃, ε̂, ε̄)", (u7.eps_tilde, lc7.eps_hat, u7.eps_bar), (q(-1, 2), q(-1, 3), q(5, 7)))?;

    let (_, lc8) = report(&load("example8"))?;
    expect("example 8 (ε*, ε̂)", (lc8.eps_star, lc8.eps_hat), (r(-2), q(-3, 2)))?;
    expect("example 8 exactness", lc8.exactness.as_ref().map(|e| e.exact), Some(false))?;

    // p₂ = 92: ε*₀ meets the upper bound; p₂ = 100: ε*₀ = 0 meets the lower one
    let (g, lc) = report(&lift("variant", ex2.with_capacity(2, r(92)))?)?;
    let b = lift("bounds", least_core::bounds_no_fees(&g))?;
    expect("example 2, p₂ = 92", (lc.eps_star, b.upper), (r(4), r(4)))?;
    let (g, lc) = report(&lift("variant", ex2.with_capacity(2, r(100)))?)?;
    let b = lift("bounds", least_core::bounds_no_fees(&g))?;
    expect("example 2, p₂ = 100", (lc.eps_star, b.lower), (r(0), r(0)))?;

    let ex5 = load("example5");
    let (_, lc) = report(&lift("variant", ex5.with_capacity(2, r(91)))?)?;
    let fb = lc.fee_bounds.ok_or("balanced")?;
    expect("example 5, p₂ = 91", (lc.eps_star, fb.upper), (r(4), r(4)))?;
    let (_, lc) = report(&lift("variant", ex5.with_capacity(2, r(99)))?)?;
    let fb = lc.fee_bounds.ok_or("balanced")?;
    expect("example 5, p₂ = 99", (lc.eps_star, fb.lower), (r(0), r(0)))?;
    Ok("examples 2, 5, 6, 7, 8 and four tightness variants".into())
}

fn shares_of(name: &str, mode: PartitionMode) -> Result<SharesReport, String> {
    let (game, lc) = report(&load(name))?;
    lift("shares", SharesReport::analyze(&game, &lc, mode))
}

fn criterion_2() -> Outcome {
    let tight = shares_of("example_tight", PartitionMode::Exact)?;
    expect("tight example m_a", tight.min_aggregator, r(0))?;
    expect("tight example singleton bound", tight.singleton_bound, tight.min_aggregator)?;
    let ex9 = shares_of("example9", PartitionMode::Exact)?;
    expect("example 9 (m_a, M_a)", (ex9.min_aggregator, ex9.max_aggregator), (r(3), r(3)))?;
    expect("example 9 partition bound", ex9.partition_bound.bound, r(0))?;
    let ex10 = shares_of("example10", PartitionMode::Exact)?;
    expect("example 10 (m_a, M_a)", (ex10.min_aggregator, ex10.max_aggregator), (r(1), r(1)))?;
    expect("example 10 partition bound", ex10.partition_bound.bound, r(0))?;
    Ok(format!(
        "m_a = 0 tight; m_a = 3 vs bound {}; m_a = 1 vs bound {}",
        ex9.partition_bound.bound, ex10.partition_bound.bound
    ))
}

fn criterion_3() -> Outcome {
    let ex1 = lift("build", load("example1").build_game())?;
    let convex = lift("convexity", properties::check_convex(&ex1))?;
    let pair = (
        lift("coalition", ex1.coalition([0, 1, 3], true))?,
        lift("coalition", ex1.coalition([0, 2, 3], true))?,
    );
    expect("example 1 convex", convex.holds, false)?;
    expect("example 1 witness", convex.witness, Some(pair))?;

    let ex4 = lift("build", load("example4").build_game())?;
    let p = lift("properties", PropertyReport::analyze(&ex4))?;
    expect(
        "example 4 (superadditive, monotonic, convex, totally balanced, balanced)",
        (p.superadditive.holds, p.monotonic.holds, p.convex.holds, p.totally_balanced, p.balanced.holds),
        (false, false, false, false, true),
    )?;
    expect("example 4 subgame sweep", lift("sweep", properties::totally_balanced_sweep(&ex4))?, false)?;
    Ok("example 1 non-convex at {a,1,2,4}, {a,1,3,4}; example 4 balanced only".into())
}

/// Brute-force big boss test for the aggregator.
fn aggregator_big_boss(t: &Table) -> bool {
    t.monotonic()
        && (0..t.full()).all(|m| {
            let outside: Rational = (0..t.n).filter(|i| m & (1 << i) == 0).map(|i| t.marginal(i)).sum();
            t.grand() - t.v[m as usize] >= outside
        })
}

fn criterion_4() -> Outcome {
    let mut counts = [0usize; 5];
    for (k, raw) in sweep(0x5eed, 500, 7).into_iter().enumerate() {
        let inst = raw.instance();
        let t = raw.table();
        let (game, lc) = report(&inst).map_err(|e| format!("instance {k}: {e}"))?;
        let fail = |m: String| format!("instance {k} ({raw:?}): {m}");
        let eps_star = certified_eps_star(&t, &lc.primal_cert, &lc.dual_cert);
        expect("LP ε*", lc.eps_star, eps_star).map_err(fail)?;
        let hat = t.eps_hat();
        if t.balanced() {
            counts[0] += 1;
            expect("ε̂ = ε* on a balanced game", hat, eps_star).map_err(fail)?;
        } else {
            counts[1] += 1;
            let (tilde, bar) = (t.eps_tilde(), t.eps_bar());
            let chain = tilde + tilde < eps_star && eps_star <= tilde && tilde <= hat && hat <= bar;
            expect("2ε̃ < ε* ≤ ε̃ ≤ ε̂ ≤ ε̄", chain, true).map_err(fail)?;
            let ex = lift("exactness", least_core::unbalanced_exactness(&game)).map_err(fail)?;
            expect("exactness verdict", ex.exact, eps_star == hat).map_err(fail)?;
        }
        let mono = t.monotonic();
        expect("monotonicity closed form", properties::sesg_monotone_char(&inst), mono).map_err(fail)?;
        let game0 = raw.fee_free().table().game();
        let fee_char = lift("fee characterization", properties::mono_char_with_fees(&game0, &inst.fees())).map_err(fail)?;
        expect("fee characterization of monotonicity", fee_char, mono).map_err(fail)?;
        match properties::sesg_bigboss_char(&inst) {
            Ok(verdict) => {
                counts[2] += 1;
                let brute = aggregator_big_boss(&t);
                expect("big-boss closed form", verdict, brute).map_err(fail)?;
                let clan = lift("clan", properties::check_clan(&game)).map_err(fail)?;
                expect("big boss found by search", clan.big_boss == Some(Player::Aggregator), brute).map_err(fail)?;
            }
            Err(ecgame::Error::NotApplicable(_)) => {}
            Err(e) => return Err(fail(e.to_string())),
        }
        if lc.formula_exact {
            counts[3] += 1;
            let sh = lift("shares", SharesReport::analyze(&game, &lc, PartitionMode::Exact)).map_err(fail)?;
            let ch = lift("characterization", shares::equality_characterization(&game, &lc)).map_err(fail)?;
            expect("m_a = M_a characterization", ch.equal, sh.min_aggregator == sh.max_aggregator).map_err(fail)?;
            if ch.equal {
                counts[4] += 1;
            }
        }
    }
    Ok(format!(
        "500 instances: {} balanced, {} unbalanced, {} big-boss tests, {} share characterizations ({} with m_a = M_a)",
        counts[0], counts[1], counts[2], counts[3], counts[4]
    ))
}

fn criterion_5() -> Outcome {
    let mut solves = 0;
    let fixtures = [
        "example1", "example2", "example3", "example4", "example5", "example6", "example7", "example8", "example9",
        "example10", "example_tight",
    ];
    let instances = fixtures
        .iter()
        .map(|n| common::Raw::from_instance(&load(n)))
        .chain(sweep(0xce47, 500, 7));
    for (k, raw) in instances.enumerate() {
        let t = raw.table();
        let game = t.game();
        let fail = |m: String| format!("instance {k}: {m}");
        let lp = lift("least core LP", least_core::least_core_lp(&game)).map_err(fail)?;
        let eps = certified_eps_star(&t, &lp.allocation, &lp.dual);
        expect("LP value", lp.eps_star, eps).map_err(fail)?;
        let x = flat(&lp.allocation);
        for (s, l) in &lp.dual {
            if !l.is_zero() {
                let slack = excess(&t, &x, *s) - eps;
                expect("complementary slackness", slack, Rational::ZERO).map_err(fail)?;
            }
        }
        let hat = least_core::eps_hat(&game);
        let cert = lift("λ̂", least_core::dual_certificate_hat(&game, hat.s_hat())).map_err(fail)?;
        expect("λ̂ objective", t.dual_objective(&cert), Some(t.eps_hat())).map_err(fail)?;
        let sh = lift("share LP", shares::max_users_share(&game, eps)).map_err(fail)?;
        let users = flat(&sh.allocation);
        expect("share optimum in the least core", t.min_excess(&users), Some(eps)).map_err(fail)?;
        solves += 2;
    }
    Ok(format!("{solves} LP solves and 511 λ̂ certificates checked"))
}

/// `x(S) − v(S)` from the oracle table.
fn excess(t: &Table, x: &[Rational], s: Coalition) -> Rational {
    let m = s.user_mask();
    let users: Rational = (0..t.n).filter(|i| m & (1 << i) != 0).map(|i| x[i]).sum();
    if s.has_aggregator() {
        users + x[t.n] - t.v[m as usize]
    } else {
        users
    }
}

fn criterion_6() -> Outcome {
    let mut branches = BTreeSet::new();
    let mut cases = 0;
    for k in 2..=5u32 {
        for cap in [2i64, 3, 4] {
            for p2 in 1..=2 * (k as i64 + 1) * cap {
                // p runs over halves to hit the boundaries between branches
                let p = q(p2, 2);
                for c2 in 0..=2 * cap {
                    let c = q(c2, 2);
                    if c > p.min(r(cap)) {
                        continue;
                    }
                    for single_producer in [true, false] {
                        let single = [(1, p)];
                        let others: Vec<(u32, Rational)> = (0..k).map(|j| (j + 2, r(cap))).collect();
                        let (prods, cons) = if single_producer { (&single[..], &others[..]) } else { (&others[..], &single[..]) };
                        let inst = lift("instance", SesgInstance::unit_gain(prods, cons, &[(1, c)]))?;
                        let game = lift("build", inst.build_game())?;
                        let oracle = Table {
                            n: game.n_users(),
                            v: game.table().to_vec(),
                        }
                        .eps_hat();
                        let lp = lift("LP", least_core::least_core_lp(&game))?.eps_star;
                        let (eps, branch) = lift("clan closed form", least_core::clan_equal_capacity_eps(&inst))?;
                        let general = lift("clan general form", least_core::clan_general_eps(&inst))?;
                        let tag = format!("k = {k}, q = {cap}, p = {p}, c = {c}, branch {branch:?}");
                        expect(&tag, (eps, general, lp), (oracle, oracle, oracle))?;
                        branches.insert(format!("{branch:?}"));
                        cases += 1;
                    }
                }
            }
        }
    }
    let all = [
        ClanBranch::CoveredTwo,
        ClanBranch::CoveredThreeHighFee,
        ClanBranch::CoveredHalf,
        ClanBranch::ShortZero,
        ClanBranch::ShortTwo,
        ClanBranch::ShortThree,
        ClanBranch::ShortSurplus,
    ];
    for b in all {
        if !branches.contains(&format!("{b:?}")) {
            return Err(format!("branch {b:?} never reached"));
        }
    }
    Ok(format!("{cases} clan instances, all {} branches", all.len()))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("example-fixture regression", criterion_1),
        ("shares regression", criterion_2),
        ("classification regression", criterion_3),
        ("oracle equivalence", criterion_4),
        ("certificate soundness", criterion_5),
        ("clan closed forms", criterion_6),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
