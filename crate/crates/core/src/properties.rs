//! Structural classification of veto games.
//!
//! Every negative verdict carries a witness that is re-checked against the
//! defining inequality before it is returned.

use crate::error::{Error, Result};
use crate::game::{family, size_guard, Allocation, Coalition, Game, Player};
use crate::least_core;
use crate::rational::Rational;
use crate::sesg::{Role, SesgInstance};

pub const SUPERADDITIVE_MAX_PLAYERS: usize = 14;
pub const CONVEX_MAX_PLAYERS: usize = 12;
pub const SUBGAME_SWEEP_MAX_PLAYERS: usize = 10;

/// Outcome of a property check: `witness` is present exactly when the
/// property fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    fn from_witness(witness: Option<W>) -> Verdict<W> {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

fn recheck(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistency(format!("{what} witness does not re-verify")))
    }
}

/// `v(S ∪ T) < v(S) + v(T)` for disjoint `S`, `T`.
pub fn violates_superadditivity(game: &Game, s: Coalition, t: Coalition) -> bool {
    s.is_disjoint(t) && game.value(s.union(t)) < game.value(s) + game.value(t)
}

/// `v(S ∪ {i}) < v(S)`.
pub fn violates_monotonicity(game: &Game, s: Coalition, i: Player) -> bool {
    !s.contains(i) && s.with(i).is_ok_and(|t| game.value(t) < game.value(s))
}

/// `v(S ∪ T) + v(S ∩ T) < v(S) + v(T)`.
pub fn violates_supermodularity(game: &Game, s: Coalition, t: Coalition) -> bool {
    game.value(s.union(t)) + game.value(s.intersection(t)) < game.value(s) + game.value(t)
}

/// Witness: the violating disjoint pair that is smallest in `(S, T)` bit
/// order with `S < T`.
pub fn check_superadditive(game: &Game) -> Result<Verdict<(Coalition, Coalition)>> {
    size_guard("superadditivity check", game.n_players(), SUPERADDITIVE_MAX_PLAYERS)?;
    let n = game.n_users();
    let full = game.grand().bits();
    let mut witness = None;
    'outer: for s in 1..=full {
        let rest = full & !s;
        // submasks of the complement, increasing
        let mut t = 0u32;
        loop {
            t = t.wrapping_sub(rest) & rest;
            if t == 0 {
                break;
            }
            if t > s {
                let (cs, ct) = (Coalition::raw(n, s), Coalition::raw(n, t));
                if violates_superadditivity(game, cs, ct) {
                    witness = Some((cs, ct));
                    break 'outer;
                }
            }
        }
    }
    if let Some((s, t)) = witness {
        recheck(violates_superadditivity(game, s, t), "superadditivity")?;
    }
    Ok(Verdict::from_witness(witness))
}

/// Checks `v(S ∪ {i}) ≥ v(S)` for every `S ≠ N` (the empty set included)
/// and `i ∉ S`. Witness: first failure with `S` in bit order, then `i` in
/// player order.
pub fn check_monotonic(game: &Game) -> Verdict<(Coalition, Player)> {
    let witness = family::all(game.n_users())
        .filter(|s| !s.is_grand())
        .find_map(|s| {
            let missing = s.complement();
            missing
                .players()
                .find(|&i| violates_monotonicity(game, s, i))
                .map(|i| (s, i))
        });
    Verdict::from_witness(witness)
}

/// Witness preference: both coalitions contain the aggregator, then larger
/// `|S ∪ T|`, then larger `|S ∩ T|`, then smallest `(S, T)` in bit order.
pub fn check_convex(game: &Game) -> Result<Verdict<(Coalition, Coalition)>> {
    size_guard("convexity check", game.n_players(), CONVEX_MAX_PLAYERS)?;
    let n = game.n_users();
    let full = game.grand().bits();
    let key = |s: Coalition, t: Coalition| {
        (
            !(s.has_aggregator() && t.has_aggregator()),
            usize::MAX - s.union(t).len(),
            usize::MAX - s.intersection(t).len(),
            s.bits(),
            t.bits(),
        )
    };
    let mut best: Option<(Coalition, Coalition)> = None;
    for sb in 1..=full {
        for tb in sb + 1..=full {
            // nested pairs satisfy the inequality with equality
            if sb & tb == sb || sb & tb == tb {
                continue;
            }
            let (s, t) = (Coalition::raw(n, sb), Coalition::raw(n, tb));
            if violates_supermodularity(game, s, t) && best.is_none_or(|(bs, bt)| key(s, t) < key(bs, bt)) {
                best = Some((s, t));
            }
        }
    }
    if let Some((s, t)) = best {
        recheck(violates_supermodularity(game, s, t), "convexity")?;
    }
    Ok(Verdict::from_witness(best))
}

/// The maximal `T` with `v(S) = 0` whenever `T ⊄ S`: the intersection of
/// all coalitions of nonzero worth, or `N` when there are none.
pub fn veto_set(game: &Game) -> Coalition {
    family::all(game.n_users())
        .filter(|&s| !game.value(s).is_zero())
        .fold(game.grand(), |acc, s| acc.intersection(s))
}

/// First `S ⊇ T` with `v(N) − v(S) < Σ_{i ∈ N∖S} M(i)`.
fn clan_violation(game: &Game, t: Coalition, marginals: &[Rational]) -> Option<Coalition> {
    let vn = game.grand_value();
    family::all(game.n_users())
        .filter(|s| t.is_subset_of(*s))
        .find(|&s| {
            let outside: Rational = s
                .complement()
                .players()
                .map(|p| match p {
                    Player::User(i) => marginals[i],
                    Player::Aggregator => marginals[game.n_users()],
                })
                .sum();
            vn - game.value(s) < outside
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClanVerdict {
    pub veto_set: Coalition,
    /// A proper veto set satisfying the clan inequality, if one exists.
    pub clan: Option<Coalition>,
    /// A player `i` such that `{i}` is a clan.
    pub big_boss: Option<Player>,
    /// When no clan exists: a coalition `S ⊇ T` breaking the inequality
    /// for the maximal veto set `T`.
    pub witness: Option<Coalition>,
}

/// Clan and big-boss detection for monotonic games.
///
/// Shrinking a veto set only adds coalitions to the clan inequality, so the
/// maximal veto set `T` decides whether any clan exists. When `T = N` it is
/// not proper; `N` minus its highest-index user is then reported, since
/// every `N ∖ {i}` satisfies the inequality trivially.
pub fn check_clan(game: &Game) -> Result<ClanVerdict> {
    if !check_monotonic(game).holds {
        return Err(Error::NotApplicable("clan games are monotonic by definition".into()));
    }
    let marginals: Vec<Rational> = (0..game.n_users())
        .map(Player::User)
        .chain([Player::Aggregator])
        .map(|p| game.marginal_contribution(p))
        .collect::<Result<_>>()?;
    let veto = veto_set(game);
    let candidate = if veto.is_grand() {
        veto.without(Player::User(game.n_users() - 1))?
    } else {
        veto
    };
    let witness = clan_violation(game, candidate, &marginals);
    let clan = witness.is_none().then_some(candidate);
    let big_boss = if clan.is_some() {
        std::iter::once(Player::Aggregator)
            .chain((0..game.n_users()).map(Player::User))
            .filter(|&p| veto.contains(p))
            .find(|&p| {
                let single = Coalition::empty(game.n_users()).with(p).expect("player in range");
                clan_violation(game, single, &marginals).is_none()
            })
    } else {
        None
    };
    Ok(ClanVerdict {
        veto_set: veto,
        clan,
        big_boss,
        witness,
    })
}

/// Balanced iff `v(S) ≤ v(N)` on every proper `S ∋ a`. The witness is the
/// coalition of largest worth (smallest bits on ties). The aggregator-takes-
/// all allocation is checked against the core as well.
pub fn check_balanced(game: &Game) -> Result<Verdict<Coalition>> {
    let vn = game.grand_value();
    let top = family::proper_with_aggregator(game.n_users())
        .fold(None::<Coalition>, |best, s| match best {
            Some(b) if game.value(b) >= game.value(s) => Some(b),
            _ => Some(s),
        })
        .filter(|&s| game.value(s) > vn);
    let greedy = Allocation::new(vec![Rational::ZERO; game.n_users()], vn);
    let in_core = least_core::eps_core_contains(game, &greedy, Rational::ZERO)?.contains;
    if in_core != top.is_none() {
        return Err(Error::Inconsistency(
            "balancedness test and core membership of (0,…,0,v(N)) disagree".into(),
        ));
    }
    Ok(Verdict::from_witness(top))
}

/// Totally balanced iff monotonic for veto games.
pub fn check_totally_balanced(game: &Game) -> bool {
    check_monotonic(game).holds
}

/// Direct sweep: every subgame `(T, v)` with `a ∈ T` has a nonempty core.
/// Subgames without the aggregator are identically zero.
pub fn totally_balanced_sweep(game: &Game) -> Result<bool> {
    size_guard("subgame sweep", game.n_players(), SUBGAME_SWEEP_MAX_PLAYERS)?;
    for t in family::all(game.n_users()).filter(|t| t.has_aggregator() && t.user_count() >= 1) {
        let sub = game.subgame(t)?;
        let lp = least_core::least_core_lp(&sub)?;
        if lp.eps_star.is_negative() {
            return Ok(false);
        }
    }
    // the one-player subgame {a} has core {v(a)}
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Egalitarian {
    /// `(v(N)/|U|, …, v(N)/|U|, 0)` lies in the core.
    pub users_all_in_core: bool,
    /// `(v(N)/|N|, …, v(N)/|N|)` lies in the core.
    pub egalitarian_in_core: bool,
}

/// Core membership of the users-take-all and egalitarian allocations.
pub fn egalitarian_membership(game: &Game) -> Result<Egalitarian> {
    let vn = game.grand_value();
    let nu = game.n_users() as i64;
    let ua = Allocation::new(vec![vn / Rational::from(nu); game.n_users()], Rational::ZERO);
    let share = vn / Rational::from(nu + 1);
    let eg = Allocation::new(vec![share; game.n_users()], share);
    let users_all_in_core = least_core::eps_core_contains(game, &ua, Rational::ZERO)?.contains;
    let egalitarian_in_core = least_core::eps_core_contains(game, &eg, Rational::ZERO)?.contains;
    if users_all_in_core && !egalitarian_in_core {
        return Err(Error::Inconsistency(
            "users-take-all allocation is in the core but the egalitarian one is not".into(),
        ));
    }
    Ok(Egalitarian {
        users_all_in_core,
        egalitarian_in_core,
    })
}

/// The two ratio conditions on coalitions with at least two users:
/// `max v(S)/|S∩U| ≤ v(N)/|U|` and `max v(S)/|S| ≤ v(N)/|N|`, each with
/// `v(N) ≥ 0`. They match [`egalitarian_membership`] on games that vanish
/// on coalitions with fewer than two users.
pub fn egalitarian_conditions(game: &Game) -> Egalitarian {
    let vn = game.grand_value();
    let nu = Rational::from(game.n_users());
    let np = Rational::from(game.n_players());
    let coalitions = || family::proper_with_aggregator_two_users(game.n_users());
    let users_all_in_core = !vn.is_negative()
        && coalitions().all(|s| game.value(s) / Rational::from(s.user_count()) <= vn / nu);
    let egalitarian_in_core =
        !vn.is_negative() && coalitions().all(|s| game.value(s) / Rational::from(s.len()) <= vn / np);
    Egalitarian {
        users_all_in_core,
        egalitarian_in_core,
    }
}

/// Fee charged to `S` in an energy sharing game: `c(S ∩ U)` when the
/// aggregator is present with at least two users, nothing otherwise.
fn fee_charge(s: Coalition, fees: &[Rational]) -> Rational {
    if s.has_aggregator() && s.user_count() >= 2 {
        s.users().map(|i| fees[i]).sum()
    } else {
        Rational::ZERO
    }
}

fn check_fees(game0: &Game, fees: &[Rational]) -> Result<()> {
    if fees.len() != game0.n_users() {
        return Err(Error::InvalidInstance(format!(
            "{} fees given for {} users",
            fees.len(),
            game0.n_users()
        )));
    }
    if let Some(c) = fees.iter().find(|c| c.is_negative()) {
        return Err(Error::InvalidInstance(format!("fees must be nonnegative (got {c})")));
    }
    Ok(())
}

/// `v = v₀ − c(S ∩ U)` on coalitions with the aggregator and two or more
/// users; other entries of `v₀` are kept.
pub fn apply_fees(game0: &Game, fees: &[Rational]) -> Result<Game> {
    check_fees(game0, fees)?;
    Game::from_fn(game0.n_users(), |s| game0.value(s) - fee_charge(s, fees))
}

/// Fee characterization of monotonicity for `v = apply_fees(v₀, c)`:
///
/// (i) each user's fee is covered by its fee-free marginal gain,
/// `c_i ≤ v₀(S ∪ {i}) − v₀(S)` for `S ∋ a` holding two or more users; when
/// `S = {a, j}` the pair is charged for the first time and the condition
/// reads `c_i + c_j ≤ v₀({a,i,j}) − v₀({a,j})`; for `S = {a}` no fee is
/// involved;
///
/// (ii) the aggregator covers the fees it triggers, `c(S) ≤ v₀(S ∪ {a})`
/// for aggregator-free `S` with at least two users.
pub fn mono_char_with_fees(game0: &Game, fees: &[Rational]) -> Result<bool> {
    check_fees(game0, fees)?;
    let n = game0.n_users();
    let user_condition = family::proper_with_aggregator(n).all(|s| {
        s.complement().users().all(|i| {
            let grown = s.with(Player::User(i)).expect("user in range");
            let gain = game0.value(grown) - game0.value(s);
            let charge = match s.user_count() {
                0 => Rational::ZERO,
                1 => fees[i] + s.users().map(|j| fees[j]).sum::<Rational>(),
                _ => fees[i],
            };
            charge <= gain
        })
    });
    let aggregator_condition = family::proper_without_aggregator(n).filter(|s| s.user_count() >= 2).all(|s| {
        let fee: Rational = s.users().map(|i| fees[i]).sum();
        fee <= game0.value(s.with(Player::Aggregator).expect("aggregator")) - game0.value(s)
    });
    Ok(user_condition && aggregator_condition)
}

/// Closed-form monotonicity of a simple energy sharing game. With `g`
/// the exchange gain:
///
/// - two or more producers and consumers: every fee is zero;
/// - a single producer `u` and two or more consumers: `c_u ≤ g·min{p_u, min q_j}`
///   and consumers pay nothing (symmetrically for a single consumer);
/// - one producer and one consumer: `c_1 + c_2 ≤ g·min{p, q}`;
/// - one side empty: every fee is zero, unless there is a single user.
pub fn sesg_monotone_char(inst: &SesgInstance) -> bool {
    let producers: Vec<usize> = inst.producers().collect();
    let consumers: Vec<usize> = inst.consumers().collect();
    let g = inst.gain();
    let cap = |i: usize| inst.user(i).capacity;
    let fee = |i: usize| inst.user(i).fee;
    let all_free = |side: &[usize]| side.iter().all(|&i| fee(i).is_zero());
    let single = |u: usize, others: &[usize]| {
        let smallest = others.iter().map(|&j| cap(j)).min().expect("nonempty side");
        all_free(others) && fee(u) <= g * cap(u).min(smallest)
    };
    match (producers.len(), consumers.len()) {
        (0, 0) => true,
        (0, 1) | (1, 0) => true,
        (1, 1) => fee(producers[0]) + fee(consumers[0]) <= g * cap(producers[0]).min(cap(consumers[0])),
        (1, _) => single(producers[0], &consumers),
        (_, 1) => single(consumers[0], &producers),
        _ => all_free(&producers) && all_free(&consumers),
    }
}

/// Closed-form big-boss test for a monotonic game with two or more users on
/// each side and unequal totals: the scarce side's total must be covered by
/// the abundant side with any single member removed.
pub fn sesg_bigboss_char(inst: &SesgInstance) -> Result<bool> {
    let total = |role: Role| -> Rational {
        inst.users().iter().filter(|u| u.role == role).map(|u| u.capacity).sum()
    };
    let (np, nc) = (inst.producers().count(), inst.consumers().count());
    if np < 2 || nc < 2 {
        return Err(Error::NotApplicable("needs two or more producers and consumers".into()));
    }
    if !sesg_monotone_char(inst) {
        return Err(Error::NotApplicable("the game is not monotonic".into()));
    }
    let (sp, sq) = (total(Role::Producer), total(Role::Consumer));
    if sp == sq {
        return Err(Error::NotApplicable("total production equals total consumption".into()));
    }
    let (abundant, scarce_total, abundant_total) = if sq < sp {
        (Role::Producer, sq, sp)
    } else {
        (Role::Consumer, sp, sq)
    };
    Ok(inst
        .users()
        .iter()
        .filter(|u| u.role == abundant)
        .all(|u| scarce_total <= abundant_total - u.capacity))
}

/// Fee characterization of balancedness: `c(U∖S) ≤ v₀(N) − v₀(S)` for every
/// proper `S ∋ a`, with `v₀` the fee-free game. Needs two or more users,
/// since otherwise the grand coalition is never charged.
pub fn sesg_balanced_char(inst: &SesgInstance) -> Result<bool> {
    if inst.n_users() < 2 {
        return Err(Error::NotApplicable("needs at least two users".into()));
    }
    let game0 = inst.strip_fees().build_game()?;
    let fees = inst.fees();
    let vn0 = game0.grand_value();
    Ok(family::proper_with_aggregator(inst.n_users()).all(|s| {
        let outside: Rational = s.complement().users().map(|i| fees[i]).sum();
        outside <= vn0 - game0.value(s)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub superadditive: Verdict<(Coalition, Coalition)>,
    pub monotonic: Verdict<(Coalition, Player)>,
    pub convex: Verdict<(Coalition, Coalition)>,
    pub veto_set: Coalition,
    /// Absent when the game is not monotonic or no clan exists.
    pub clan: Option<Coalition>,
    pub big_boss: Option<Player>,
    pub balanced: Verdict<Coalition>,
    pub totally_balanced: bool,
}

impl PropertyReport {
    pub fn analyze(game: &Game) -> Result<PropertyReport> {
        let monotonic = check_monotonic(game);
        let (clan, big_boss) = if monotonic.holds {
            let verdict = check_clan(game)?;
            (verdict.clan, verdict.big_boss)
        } else {
            (None, None)
        };
        let balanced = check_balanced(game)?;
        if monotonic.holds && !balanced.holds {
            return Err(Error::Inconsistency("monotonic game with an empty core".into()));
        }
        Ok(PropertyReport {
            superadditive: check_superadditive(game)?,
            totally_balanced: monotonic.holds,
            monotonic,
            convex: check_convex(game)?,
            veto_set: veto_set(game),
            clan,
            big_boss,
            balanced,
        })
    }
}
