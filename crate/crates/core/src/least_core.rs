//! Strong ε-cores, least-core values and their bounds.
//!
//! The least-core value `ε*` is always computed by linear programming with
//! `x_a` eliminated:
//!
//! ```text
//! max ε   s.t.  ε − x(S) ≤ 0                  S proper, a ∉ S
//!               ε + x(N∖S) ≤ v(N) − v(S)      S proper, a ∈ S
//! ```
//!
//! over the user payoffs and `ε`. The closed forms below are reported next
//! to it together with the conditions under which they are exact.

use crate::error::{Error, Result};
use crate::game::{family, size_guard, Allocation, Coalition, Game, Player};
use crate::lp::LinearProgram;
use crate::rational::Rational;
use crate::sesg::SesgInstance;

/// `2^|N| − 2` rows are generated for the least-core program.
pub const LP_MAX_PLAYERS: usize = 16;

/// Nonzero dual weights, one per proper coalition.
pub type DualWeights = Vec<(Coalition, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreViolation {
    /// `x(N) − v(N)`.
    Efficiency { gap: Rational },
    /// `v(S) + ε − x(S) > 0`.
    Coalition { coalition: Coalition, shortfall: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub contains: bool,
    pub violation: Option<CoreViolation>,
}

/// `x ∈ C_ε(N, v)`: efficiency plus `x(S) ≥ v(S) + ε` on every proper
/// coalition. The violation reported is the efficiency gap or the first
/// failing coalition in bit order.
pub fn eps_core_contains(game: &Game, x: &Allocation, eps: Rational) -> Result<Membership> {
    game.check_allocation(x)?;
    let gap = x.total() - game.grand_value();
    let violation = if !gap.is_zero() {
        Some(CoreViolation::Efficiency { gap })
    } else {
        family::proper(game.n_users()).find_map(|s| {
            let shortfall = game.value(s) + eps - x.coalition_sum(s);
            shortfall.is_positive().then_some(CoreViolation::Coalition {
                coalition: s,
                shortfall,
            })
        })
    };
    Ok(Membership {
        contains: violation.is_none(),
        violation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsHat {
    pub value: Rational,
    /// Every minimizing coalition, in bit order.
    pub argmin: Vec<Coalition>,
}

impl EpsHat {
    /// The minimizer of largest cardinality (smallest bits on ties).
    pub fn s_hat(&self) -> Coalition {
        *self
            .argmin
            .iter()
            .rev()
            .max_by_key(|s| s.len())
            .expect("argmin is never empty")
    }

    /// Intersection of all minimizers.
    pub fn s_min(&self) -> Coalition {
        self.argmin
            .iter()
            .fold(self.argmin[0], |acc, s| acc.intersection(*s))
    }
}

/// `(v(N) − v(S)) / (|N| − |S ∩ U|)`.
pub fn hat_ratio(game: &Game, s: Coalition) -> Rational {
    (game.grand_value() - game.value(s)) / Rational::from(game.n_players() - s.user_count())
}

/// `ε̂ = min { (v(N) − v(S)) / (|N| − |S ∩ U|) : S proper, a ∈ S }` with all
/// minimizers.
pub fn eps_hat(game: &Game) -> EpsHat {
    let mut value: Option<Rational> = None;
    let mut argmin = Vec::new();
    for s in family::proper_with_aggregator(game.n_users()) {
        let ratio = hat_ratio(game, s);
        match value {
            Some(v) if ratio > v => {}
            Some(v) if ratio == v => argmin.push(s),
            _ => {
                value = Some(ratio);
                argmin = vec![s];
            }
        }
    }
    EpsHat {
        value: value.expect("{a} is always a proper coalition"),
        argmin,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeastCoreLp {
    pub eps_star: Rational,
    /// A least-core allocation, `x_a = v(N) − x(U)`.
    pub allocation: Allocation,
    /// Optimal multipliers of the dual program.
    pub dual: DualWeights,
}

/// Builds the least-core program. Row `r` belongs to the `r`-th proper
/// coalition in bit order; the last variable is `ε`.
pub fn least_core_program(game: &Game) -> Result<(LinearProgram, Vec<Coalition>)> {
    size_guard("least-core LP", game.n_players(), LP_MAX_PLAYERS)?;
    let n = game.n_users();
    let mut objective = vec![Rational::ZERO; n + 1];
    objective[n] = Rational::ONE;
    let mut lp = LinearProgram::new(objective)?;
    let vn = game.grand_value();
    let coalitions: Vec<Coalition> = family::proper(n).collect();
    for &s in &coalitions {
        let mut row = vec![Rational::ZERO; n + 1];
        row[n] = Rational::ONE;
        if s.has_aggregator() {
            for i in s.complement().users() {
                row[i] = Rational::ONE;
            }
            lp.add_le(row, vn - game.value(s))?;
        } else {
            for i in s.users() {
                row[i] = -Rational::ONE;
            }
            lp.add_le(row, Rational::ZERO)?;
        }
    }
    Ok((lp, coalitions))
}

/// Solves the least-core program exactly. The allocation is re-checked for
/// membership in `C_ε*` and the multipliers for dual feasibility with
/// objective `ε*`.
pub fn least_core_lp(game: &Game) -> Result<LeastCoreLp> {
    let (lp, coalitions) = least_core_program(game)?;
    let solution = lp.solve()?;
    if !solution.is_optimal() {
        return Err(Error::Inconsistency(format!("least-core program reported {}", solution.status)));
    }
    let n = game.n_users();
    let eps_star = solution.primal[n];
    let allocation = Allocation::completing(game, solution.primal[..n].to_vec());
    let dual: DualWeights = coalitions
        .iter()
        .zip(&solution.dual)
        .filter(|(_, l)| !l.is_zero())
        .map(|(s, l)| (*s, *l))
        .collect();
    if !eps_core_contains(game, &allocation, eps_star)?.contains {
        return Err(Error::Inconsistency("least-core allocation leaves C_ε*".into()));
    }
    if dual_lc_objective(game, &dual)? != eps_star {
        return Err(Error::Inconsistency("least-core dual objective differs from ε*".into()));
    }
    check_slackness(game, &allocation, eps_star, &dual)?;
    Ok(LeastCoreLp {
        eps_star,
        allocation,
        dual,
    })
}

/// Verifies the dual constraints of the least-core program and returns the
/// objective `Σ_{S ∋ a} (v(N) − v(S)) λ_S`:
///
/// - for each user `i`, the weight on `a`-free coalitions containing `i`
///   equals the weight on coalitions with `a` that miss `i`;
/// - weights are nonnegative, sum to one, and sit on proper coalitions.
pub fn dual_lc_objective(game: &Game, weights: &[(Coalition, Rational)]) -> Result<Rational> {
    let fail = |msg: String| Err(Error::Inconsistency(format!("dual weights infeasible: {msg}")));
    let n = game.n_users();
    let mut balance = vec![Rational::ZERO; n];
    let mut total = Rational::ZERO;
    let mut objective = Rational::ZERO;
    for &(s, l) in weights {
        if s.n_users() != n || !s.is_proper() {
            return fail(format!("{s} is not a proper coalition of this game"));
        }
        if l.is_negative() {
            return fail(format!("negative weight on {s}"));
        }
        total += l;
        if s.has_aggregator() {
            objective += (game.grand_value() - game.value(s)) * l;
            for i in s.complement().users() {
                balance[i] -= l;
            }
        } else {
            for i in s.users() {
                balance[i] += l;
            }
        }
    }
    if total != Rational::ONE {
        return fail(format!("weights sum to {total}"));
    }
    if let Some(i) = balance.iter().position(|b| !b.is_zero()) {
        return fail(format!("balance condition fails for user {}", i + 1));
    }
    Ok(objective)
}

/// Complementary slackness between an allocation at level `eps` and dual
/// weights: every weighted coalition is tight.
pub fn check_slackness(game: &Game, x: &Allocation, eps: Rational, weights: &[(Coalition, Rational)]) -> Result<()> {
    for &(s, l) in weights {
        if l.is_positive() && x.coalition_sum(s) != game.value(s) + eps {
            return Err(Error::Inconsistency(format!("complementary slackness fails on {s}")));
        }
    }
    Ok(())
}

/// `λ̂_S = 1/(|N∖Ŝ| + 1)` on `Ŝ` and on each singleton outside it. Always
/// dual feasible, with objective equal to the ratio of `Ŝ`.
pub fn dual_certificate_hat(game: &Game, s_hat: Coalition) -> Result<DualWeights> {
    if !s_hat.has_aggregator() || !s_hat.is_proper() || s_hat.n_users() != game.n_users() {
        return Err(Error::NotApplicable(format!("{s_hat} is not a proper coalition with the aggregator")));
    }
    let outside = s_hat.complement();
    let w = Rational::ONE / Rational::from(outside.len() + 1);
    let mut weights = vec![(s_hat, w)];
    for i in outside.users() {
        weights.push((Coalition::from_users(game.n_users(), [i], false)?, w));
    }
    let objective = dual_lc_objective(game, &weights)?;
    if objective != hat_ratio(game, s_hat) {
        return Err(Error::Inconsistency("objective of λ̂ differs from the ratio of Ŝ".into()));
    }
    Ok(weights)
}

/// `(ε̂, …, ε̂, v(N) − ε̂|U|)`.
pub fn uniform_allocation(game: &Game, eps: Rational) -> Allocation {
    Allocation::completing(game, vec![eps; game.n_users()])
}

fn max_leave_one_out(game: &Game) -> Rational {
    family::leave_one_out(game.n_users())
        .map(|s| game.value(s))
        .max()
        .expect("at least one user")
}

fn max_with_aggregator(game: &Game) -> Rational {
    family::proper_with_aggregator(game.n_users())
        .map(|s| game.value(s))
        .max()
        .expect("{a} is proper")
}

/// `(v(N) − max_{leave-one-out} v) / |N|`.
pub fn leave_one_out_lower(game: &Game) -> Rational {
    (game.grand_value() - max_leave_one_out(game)) / Rational::from(game.n_players())
}

/// `min { v(N)/|N|, (v(N) − max_{leave-one-out} v)/2 }`.
pub fn eps_bar(game: &Game) -> Rational {
    let vn = game.grand_value();
    (vn / Rational::from(game.n_players())).min((vn - max_leave_one_out(game)) / Rational::from(2))
}

/// `(v(N) − max_{S ∋ a proper} v(S)) / 2`.
pub fn eps_tilde(game: &Game) -> Rational {
    (game.grand_value() - max_with_aggregator(game)) / Rational::from(2)
}

fn is_balanced(game: &Game) -> bool {
    let vn = game.grand_value();
    family::proper_with_aggregator(game.n_users()).all(|s| game.value(s) <= vn)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoFeeBounds {
    pub lower: Rational,
    pub upper: Rational,
}

/// Bounds for a balanced game read from the `|N|` values `v(N)` and
/// `v(N∖{i})`.
pub fn bounds_no_fees(game0: &Game) -> Result<NoFeeBounds> {
    if !is_balanced(game0) {
        return Err(Error::NotApplicable("the game has an empty core".into()));
    }
    Ok(NoFeeBounds {
        lower: leave_one_out_lower(game0),
        upper: eps_bar(game0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FeeBounds {
    /// Least-core value of the fee-free companion game, when known.
    pub eps0_star: Option<Rational>,
    /// Bounds of the fee-free companion game.
    pub no_fee: Option<NoFeeBounds>,
    /// `ε*₀ − c̄`; strict lower bound when `c̄ > 0`, equal to `ε*` otherwise.
    pub sandwich_lower: Option<Rational>,
    pub max_fee: Option<Rational>,
    /// `(v(N) − max_{leave-one-out} v)/|N|`.
    pub lower: Rational,
    /// The lower bound is only a theorem for monotonic games.
    pub lower_guaranteed: bool,
    /// `min { ε*₀, v(N)/|N|, (v(N) − max_{leave-one-out} v)/2 }`, without the
    /// first term when no companion game is given.
    pub upper: Rational,
}

/// Bounds for a balanced game with fees. `fee_free` is the fee-free
/// companion game together with the largest fee `c̄`.
pub fn bounds_with_fees(game: &Game, fee_free: Option<(&Game, Rational)>) -> Result<FeeBounds> {
    if !is_balanced(game) {
        return Err(Error::NotApplicable("the game has an empty core".into()));
    }
    let (eps0_star, no_fee, max_fee) = match fee_free {
        Some((game0, cbar)) => {
            if game0.n_users() != game.n_users() {
                return Err(Error::MismatchedGame {
                    expected: game.n_users(),
                    found: game0.n_users(),
                });
            }
            (Some(eps_hat(game0).value), Some(bounds_no_fees(game0)?), Some(cbar))
        }
        None => (None, None, None),
    };
    let upper = eps0_star.map_or(eps_bar(game), |e0| e0.min(eps_bar(game)));
    Ok(FeeBounds {
        eps0_star,
        no_fee,
        sandwich_lower: eps0_star.zip(max_fee).map(|(e0, c)| e0 - c),
        max_fee,
        lower: leave_one_out_lower(game),
        lower_guaranteed: crate::properties::check_monotonic(game).holds,
        upper,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnbalancedBounds {
    pub eps_tilde: Rational,
    pub eps_bar: Rational,
}

/// `ε̃` and `ε̄` for a game with an empty core; `2ε̃ < ε* ≤ ε̃`.
pub fn bounds_unbalanced(game: &Game) -> Result<UnbalancedBounds> {
    if is_balanced(game) {
        return Err(Error::NotApplicable("the core is nonempty".into()));
    }
    Ok(UnbalancedBounds {
        eps_tilde: eps_tilde(game),
        eps_bar: eps_bar(game),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exactness {
    /// `ε* = ε̂`.
    pub exact: bool,
    pub s_hat: Coalition,
    /// The user missing from `Ŝ` when `|Ŝ| = |N| − 1`.
    pub k: Option<usize>,
    /// A coalition breaking the system, when `|Ŝ| = |N| − 1` but it fails.
    pub violation: Option<Coalition>,
}

/// Exactness of `ε̂` for a game with an empty core: `Ŝ` must leave out a
/// single user `k`, and
///
/// - `v(N) ≥ v(S) + ε̂` for every proper `S ∋ a, k`,
/// - `v(N) ≥ v(S) + 2ε̂` for every proper `S ∋ a` without `k`.
///
/// When exact, the allocation with `x_k = ε̂`, other users zero and the rest
/// to the aggregator is re-checked to lie in `C_ε̂`.
pub fn unbalanced_exactness(game: &Game) -> Result<Exactness> {
    if is_balanced(game) {
        return Err(Error::NotApplicable("the core is nonempty".into()));
    }
    let hat = eps_hat(game);
    let s_hat = hat.s_hat();
    if s_hat.len() != game.n_players() - 1 {
        return Ok(Exactness {
            exact: false,
            s_hat,
            k: None,
            violation: None,
        });
    }
    let k = s_hat.complement().users().next().expect("one user outside Ŝ");
    let vn = game.grand_value();
    let eps = hat.value;
    let violation = family::proper_with_aggregator(game.n_users()).find(|&s| {
        let margin = if s.contains(Player::User(k)) { eps } else { eps + eps };
        vn < game.value(s) + margin
    });
    if violation.is_none() {
        let check = check_allocation_at(game, k, eps);
        if !eps_core_contains(game, &check, eps)?.contains {
            return Err(Error::Inconsistency("x̌ is not in the ε̂-core".into()));
        }
    }
    Ok(Exactness {
        exact: violation.is_none(),
        s_hat,
        k: Some(k),
        violation,
    })
}

/// `x̌`: user `k` receives `eps`, other users nothing, the aggregator the rest.
pub fn check_allocation_at(game: &Game, k: usize, eps: Rational) -> Allocation {
    let mut users = vec![Rational::ZERO; game.n_users()];
    users[k] = eps;
    Allocation::completing(game, users)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeastCoreReport {
    pub eps_star: Rational,
    pub eps_hat: Rational,
    pub argmin: Vec<Coalition>,
    /// Intersection of `argmin`.
    pub s_min: Coalition,
    pub balanced: bool,
    /// `ε* = ε̂`.
    pub formula_exact: bool,
    pub eps_bar: Rational,
    /// Balanced games only.
    pub fee_bounds: Option<FeeBounds>,
    /// Unbalanced games only.
    pub unbalanced: Option<UnbalancedBounds>,
    /// Unbalanced games only.
    pub exactness: Option<Exactness>,
    pub primal_cert: Allocation,
    pub dual_cert: DualWeights,
    /// `λ̂` built from `Ŝ`.
    pub hat_cert: DualWeights,
}

fn ensure(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistency(what.to_string()))
    }
}

impl LeastCoreReport {
    /// Solves the least-core program and cross-checks every closed form
    /// that applies. `fee_free` is the fee-free companion game and the
    /// largest fee, when the game carries a fee decomposition.
    pub fn analyze(game: &Game, fee_free: Option<(&Game, Rational)>) -> Result<LeastCoreReport> {
        let lp = least_core_lp(game)?;
        let hat = eps_hat(game);
        let balanced = is_balanced(game);
        let eps_star = lp.eps_star;
        let hat_cert = dual_certificate_hat(game, hat.s_hat())?;
        ensure(eps_star <= hat.value, "ε* exceeds ε̂")?;
        // the ratio of {a} equals v(N)/|N| only when v({a}) = 0
        let plain_aggregator = game.value(Coalition::aggregator_only(game.n_users())).is_zero();
        let bar = eps_bar(game);
        if plain_aggregator {
            ensure(hat.value <= bar, "ε̂ exceeds ε̄")?;
        }

        let (fee_bounds, unbalanced, exactness) = if balanced {
            ensure(eps_star == hat.value, "balanced game with ε* ≠ ε̂")?;
            let fb = bounds_with_fees(game, fee_free)?;
            if fb.lower_guaranteed {
                ensure(fb.lower <= eps_star, "monotone lower bound exceeds ε*")?;
            }
            if plain_aggregator {
                ensure(eps_star <= fb.upper, "upper bound below ε*")?;
            }
            if let (Some(e0), Some(low), Some(c)) = (fb.eps0_star, fb.sandwich_lower, fb.max_fee) {
                ensure(eps_star <= e0, "ε* exceeds ε*₀")?;
                if c.is_zero() {
                    ensure(eps_star == e0, "fee-free game with ε* ≠ ε*₀")?;
                } else {
                    ensure(low < eps_star, "ε*₀ − c̄ is not below ε*")?;
                }
            }
            uniform_allocation_check(game, hat.value)?;
            check_slackness(game, &uniform_allocation(game, hat.value), hat.value, &hat_cert)?;
            (Some(fb), None, None)
        } else {
            let ub = bounds_unbalanced(game)?;
            ensure(ub.eps_tilde + ub.eps_tilde < eps_star, "2ε̃ is not below ε*")?;
            ensure(eps_star <= ub.eps_tilde, "ε* exceeds ε̃")?;
            ensure(ub.eps_tilde <= hat.value, "ε̃ exceeds ε̂")?;
            let ex = unbalanced_exactness(game)?;
            ensure(ex.exact == (eps_star == hat.value), "exactness test disagrees with the LP")?;
            (None, Some(ub), Some(ex))
        };

        Ok(LeastCoreReport {
            eps_star,
            eps_hat: hat.value,
            s_min: hat.s_min(),
            argmin: hat.argmin,
            balanced,
            formula_exact: eps_star == hat.value,
            eps_bar: bar,
            fee_bounds,
            unbalanced,
            exactness,
            primal_cert: lp.allocation,
            dual_cert: lp.dual,
            hat_cert,
        })
    }
}

fn uniform_allocation_check(game: &Game, eps: Rational) -> Result<()> {
    let x = uniform_allocation(game, eps);
    ensure(
        eps_core_contains(game, &x, eps)?.contains,
        "(ε̂, …, ε̂, v(N) − ε̂|U|) is not in the ε̂-core",
    )
}

/// Which closed form of the single-producer (or single-consumer) clan was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClanBranch {
    /// The single user covers the whole other side and `|U₂| = 2`.
    CoveredTwo,
    /// Covered, `|U₂| = 3`, and the fee is at least half a capacity.
    CoveredThreeHighFee,
    /// Covered, remaining cases: half a capacity.
    CoveredHalf,
    /// Not covered and the single user is outweighed by all but one: zero.
    ShortZero,
    /// Not covered, `|U₂| = 2`, high fee.
    ShortTwo,
    /// Not covered, `|U₂| = 3`, high fee.
    ShortThree,
    /// Not covered, remaining cases.
    ShortSurplus,
}

/// Least-core value of a monotonic clan game with a single producer
/// (or single consumer) facing `k ≥ 2` users of equal capacity `q`,
/// by case analysis on `p`, `q`, `k` and the fee `c` of the single user:
///
/// - `p ≥ kq`: `(2q − c)/4` if `k = 2`, `(3q − c)/5` if `k = 3` and
///   `c ≥ q/2`, else `q/2`;
/// - `p < kq`: zero when `p ≤ (k−1)q`; else `(p − c)/4` if `k = 2` and
///   `c ≥ 2q − p`, `(p − c)/5` if `k = 3` and `c ≥ 5q − 3p/2`, else
///   `(p − (k−1)q)/2`.
///
/// Capacities are scaled by the exchange gain first.
pub fn clan_equal_capacity_eps(inst: &SesgInstance) -> Result<(Rational, ClanBranch)> {
    let (single, others) = single_side(inst)?;
    let g = inst.gain();
    let q = g * inst.user(others[0]).capacity;
    if others.iter().any(|&j| g * inst.user(j).capacity != q) {
        return Err(Error::NotApplicable("the other side has unequal capacities".into()));
    }
    let p = g * inst.user(single).capacity;
    let c = inst.user(single).fee;
    let k = others.len() as i64;
    let two = Rational::from(2);
    let kq = Rational::from(k) * q;
    Ok(if p >= kq {
        match k {
            2 => ((two * q - c) / Rational::from(4), ClanBranch::CoveredTwo),
            3 if c >= q / two => ((Rational::from(3) * q - c) / Rational::from(5), ClanBranch::CoveredThreeHighFee),
            _ => (q / two, ClanBranch::CoveredHalf),
        }
    } else if p <= Rational::from(k - 1) * q {
        (Rational::ZERO, ClanBranch::ShortZero)
    } else {
        match k {
            2 if c >= two * q - p => ((p - c) / Rational::from(4), ClanBranch::ShortTwo),
            3 if c >= Rational::from(5) * q - Rational::from(3) * p / two => {
                ((p - c) / Rational::from(5), ClanBranch::ShortThree)
            }
            _ => ((p - Rational::from(k - 1) * q) / two, ClanBranch::ShortSurplus),
        }
    })
}

/// Least-core value of a monotonic single-producer (or single-consumer)
/// clan game with arbitrary capacities on the other side `W`:
///
/// - `p ≥ Σq`: `min { (Σq − c)/(k+2), min_{∅≠T⊊W} q(T)/(|T|+1) }`;
/// - `p < Σq`: `min { (p − c)/(k+2), min_{∅≠T⊊W} (p − q(T))₊/(k+1−|T|) }`.
pub fn clan_general_eps(inst: &SesgInstance) -> Result<Rational> {
    let (single, others) = single_side(inst)?;
    let g = inst.gain();
    let p = g * inst.user(single).capacity;
    let c = inst.user(single).fee;
    let qs: Vec<Rational> = others.iter().map(|&j| g * inst.user(j).capacity).collect();
    let k = qs.len();
    let total: Rational = qs.iter().sum();
    let proper_subsets = 1u32..(1u32 << k) - 1;
    let subset_sum = |m: u32| -> Rational { qs.iter().enumerate().filter(|(j, _)| m & (1 << j) != 0).map(|(_, q)| *q).sum() };
    let size = |m: u32| m.count_ones() as usize;
    let kk = Rational::from(k);
    Ok(if p >= total {
        proper_subsets
            .map(|m| subset_sum(m) / Rational::from(size(m) + 1))
            .fold((total - c) / (kk + Rational::from(2)), Rational::min)
    } else {
        proper_subsets
            .map(|m| (p - subset_sum(m)).positive_part() / Rational::from(k + 1 - size(m)))
            .fold((p - c) / (kk + Rational::from(2)), Rational::min)
    })
}

/// The single user and the other side of a monotonic clan game with one
/// producer or one consumer and at least two users opposite.
fn single_side(inst: &SesgInstance) -> Result<(usize, Vec<usize>)> {
    let producers: Vec<usize> = inst.producers().collect();
    let consumers: Vec<usize> = inst.consumers().collect();
    let (single, others) = match (producers.len(), consumers.len()) {
        (1, k) if k >= 2 => (producers[0], consumers),
        (k, 1) if k >= 2 => (consumers[0], producers),
        _ => {
            return Err(Error::NotApplicable(
                "needs exactly one user on one side and two or more on the other".into(),
            ))
        }
    };
    if !crate::properties::sesg_monotone_char(inst) {
        return Err(Error::NotApplicable("the game is not monotonic".into()));
    }
    Ok((single, others))
}
