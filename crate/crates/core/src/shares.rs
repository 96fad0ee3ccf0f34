//! The aggregator's largest and smallest payoff over the least core.
//!
//! With `ε*` fixed, the least core is described by
//!
//! ```text
//! x(S) ≥ ε*                    S proper, a ∉ S
//! x(N∖S) ≤ v(N) − v(S) − ε*    S proper, a ∈ S
//! ```
//!
//! over the user payoffs, and `x_a = v(N) − x(U)`. Maximizing and
//! minimizing `x(U)` over it gives `m_a` and `M_a`.

use std::fmt;

use crate::error::{Error, Result};
use crate::game::{family, size_guard, Allocation, Coalition, Game, Player};
use crate::least_core::{self, LeastCoreReport, LP_MAX_PLAYERS};
use crate::lp::LinearProgram;
use crate::rational::Rational;

/// Exact partition enumeration visits Bell(|U|) partitions.
pub const PARTITION_MAX_USERS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum PartitionMode {
    #[default]
    Exact,
    Singletons,
}

impl fmt::Display for PartitionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionMode::Exact => "exact",
            PartitionMode::Singletons => "singletons",
        })
    }
}

/// `S_min`, the intersection of all coalitions attaining `ε̂`. Users outside
/// it receive exactly `ε*` in every least-core allocation.
pub fn s_min(report: &LeastCoreReport) -> Result<Coalition> {
    if !report.formula_exact {
        return Err(Error::NotApplicable("ε* < ε̂, so S_min does not pin any payoff".into()));
    }
    Ok(report.s_min)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareOptimum {
    /// `x(U)` at the optimum.
    pub users_total: Rational,
    pub allocation: Allocation,
    /// Nonzero multipliers, keyed by the coalition of their row.
    pub dual: Vec<(Coalition, Rational)>,
}

/// The program over the least core at level `eps`, maximizing
/// `sense · x(U)`.
fn share_program(game: &Game, eps: Rational, sense: Rational) -> Result<(LinearProgram, Vec<Coalition>)> {
    size_guard("share LP", game.n_players(), LP_MAX_PLAYERS)?;
    let n = game.n_users();
    let mut lp = LinearProgram::new(vec![sense; n])?;
    let vn = game.grand_value();
    let coalitions: Vec<Coalition> = family::proper(n).collect();
    for &s in &coalitions {
        let mut row = vec![Rational::ZERO; n];
        if s.has_aggregator() {
            for i in s.complement().users() {
                row[i] = Rational::ONE;
            }
            lp.add_le(row, vn - game.value(s) - eps)?;
        } else {
            for i in s.users() {
                row[i] = -Rational::ONE;
            }
            lp.add_le(row, -eps)?;
        }
    }
    Ok((lp, coalitions))
}

fn optimize_users(game: &Game, eps: Rational, sense: Rational) -> Result<ShareOptimum> {
    let (lp, coalitions) = share_program(game, eps, sense)?;
    let solution = lp.solve()?;
    if !solution.is_optimal() {
        return Err(Error::Inconsistency(format!(
            "share program at ε = {eps} reported {}",
            solution.status
        )));
    }
    let allocation = Allocation::completing(game, solution.primal.clone());
    if !least_core::eps_core_contains(game, &allocation, eps)?.contains {
        return Err(Error::Inconsistency("share optimum leaves the least core".into()));
    }
    let dual = coalitions
        .iter()
        .zip(&solution.dual)
        .filter(|(_, l)| !l.is_zero())
        .map(|(s, l)| (*s, *l))
        .collect();
    Ok(ShareOptimum {
        users_total: allocation.users_total(),
        allocation,
        dual,
    })
}

/// `M_U = max x(U)` over `C_ε*`, so `m_a = v(N) − M_U`. The multipliers are
/// checked against the dual constraints.
pub fn max_users_share(game: &Game, eps_star: Rational) -> Result<ShareOptimum> {
    let opt = optimize_users(game, eps_star, Rational::ONE)?;
    let objective = dual_shares_objective(game, eps_star, &opt.dual)?;
    if objective != opt.users_total {
        return Err(Error::Inconsistency("share dual objective differs from M_U".into()));
    }
    Ok(opt)
}

/// `m_a` with the allocation attaining it.
pub fn min_aggregator_share(game: &Game, eps_star: Rational) -> Result<(Rational, Allocation)> {
    let opt = max_users_share(game, eps_star)?;
    Ok((opt.allocation.aggregator(), opt.allocation))
}

/// `M_a` with the allocation attaining it, from `min x(U)` over `C_ε*`.
pub fn max_aggregator_share(game: &Game, eps_star: Rational) -> Result<(Rational, Allocation)> {
    let opt = optimize_users(game, eps_star, -Rational::ONE)?;
    Ok((opt.allocation.aggregator(), opt.allocation))
}

/// Closed form of `M_a` where it is known: `v(N) − ε*|U|` for balanced
/// games and `v(N) − ε*` for unbalanced games with `ε* = ε̂`.
pub fn max_aggregator_closed_form(game: &Game, report: &LeastCoreReport) -> Option<Rational> {
    if report.balanced {
        Some(game.grand_value() - report.eps_star * Rational::from(game.n_users()))
    } else if report.formula_exact {
        Some(game.grand_value() - report.eps_star)
    } else {
        None
    }
}

/// Checks the dual constraints of the share program,
/// `Σ_{S ∋ a, i ∉ S} λ_S − Σ_{S ∌ a, i ∈ S} λ_S = 1` for every user, and
/// returns the objective
/// `Σ_{S ∋ a} (v(N) − v(S) − ε) λ_S − ε Σ_{S ∌ a} λ_S`.
pub fn dual_shares_objective(game: &Game, eps: Rational, weights: &[(Coalition, Rational)]) -> Result<Rational> {
    let fail = |msg: String| Err(Error::Inconsistency(format!("share dual infeasible: {msg}")));
    let n = game.n_users();
    let mut balance = vec![Rational::ZERO; n];
    let mut objective = Rational::ZERO;
    for &(s, l) in weights {
        if s.n_users() != n || !s.is_proper() {
            return fail(format!("{s} is not a proper coalition of this game"));
        }
        if l.is_negative() {
            return fail(format!("negative weight on {s}"));
        }
        if s.has_aggregator() {
            objective += (game.grand_value() - game.value(s) - eps) * l;
            for i in s.complement().users() {
                balance[i] += l;
            }
        } else {
            objective -= eps * l;
            for i in s.users() {
                balance[i] -= l;
            }
        }
    }
    if let Some(i) = balance.iter().position(|b| *b != Rational::ONE) {
        return fail(format!("constraint of user {} sums to {}", i + 1, balance[i]));
    }
    Ok(objective)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Characterization {
    /// Predicted `m_a = M_a`.
    pub equal: bool,
    pub explanation: String,
}

/// Predicts `m_a = M_a` without solving the share programs.
///
/// Balanced games: equality iff `S_min = {a}`. Unbalanced games with
/// `ε* = ε̂` and `Ŝ = N ∖ {k}`: equality iff the coalitions `S ∋ a, k` with
/// `v(N) − v(S) = ε*` intersect in `{a, k}` (an empty family intersects in
/// `N`).
pub fn equality_characterization(game: &Game, report: &LeastCoreReport) -> Result<Characterization> {
    if !report.formula_exact {
        return Err(Error::NotApplicable("no characterization when ε* < ε̂".into()));
    }
    let n = game.n_users();
    if report.balanced {
        let equal = report.s_min == Coalition::aggregator_only(n);
        return Ok(Characterization {
            equal,
            explanation: format!("balanced, S_min = {}", report.s_min),
        });
    }
    let k = report
        .exactness
        .as_ref()
        .and_then(|e| e.k)
        .ok_or_else(|| Error::Inconsistency("unbalanced exact game without a left-out user".into()))?;
    let vn = game.grand_value();
    let tight: Vec<Coalition> = family::proper_with_aggregator(n)
        .filter(|s| s.contains(Player::User(k)) && vn - game.value(*s) == report.eps_star)
        .collect();
    let meet = tight.iter().fold(game.grand(), |acc, s| acc.intersection(*s));
    let target = Coalition::from_users(n, [k], true)?;
    Ok(Characterization {
        equal: meet == target,
        explanation: format!(
            "unbalanced with k = {}, {} tight coalitions containing k meet in {}",
            k + 1,
            tight.len(),
            meet
        ),
    })
}

/// Visits every partition of `{0, …, n−1}` as a list of block masks, in
/// restricted-growth-string order.
pub fn for_each_partition<F: FnMut(&[u32])>(n: usize, mut visit: F) {
    fn rec<F: FnMut(&[u32])>(i: usize, n: usize, blocks: &mut Vec<u32>, visit: &mut F) {
        if i == n {
            visit(blocks);
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << i;
            rec(i + 1, n, blocks, visit);
            blocks[b] &= !(1 << i);
        }
        blocks.push(1 << i);
        rec(i + 1, n, blocks, visit);
        blocks.pop();
    }
    rec(0, n, &mut Vec::new(), &mut visit);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionBound {
    pub bound: Rational,
    /// Blocks of the minimizing partition (aggregator-free coalitions).
    pub partition: Vec<Coalition>,
}

/// `|𝒜|(v(N) − ε*) − Σ_{A ∈ 𝒜} v(N∖A)`, an upper bound on `M_U`.
fn partition_cost(game: &Game, eps_star: Rational, blocks: &[Coalition]) -> Rational {
    let vn = game.grand_value();
    blocks
        .iter()
        .map(|a| vn - eps_star - game.value(a.complement()))
        .sum()
}

/// `m_a ≥ v(N) − min_𝒜 [|𝒜|(v(N) − ε*) − Σ_{A∈𝒜} v(N∖A)]` over partitions
/// `𝒜` of the users. The singleton partition gives
/// `v(N) + ε*|U| − Σ_i M(i)`.
pub fn partition_lower_bound(game: &Game, eps_star: Rational, mode: PartitionMode) -> Result<PartitionBound> {
    let n = game.n_users();
    let as_coalitions = |masks: &[u32]| -> Vec<Coalition> {
        masks.iter().map(|&m| Coalition::users_mask_only(n, m)).collect()
    };
    let best = match mode {
        PartitionMode::Singletons => {
            let blocks = as_coalitions(&(0..n).map(|i| 1u32 << i).collect::<Vec<_>>());
            let cost = partition_cost(game, eps_star, &blocks);
            (cost, blocks)
        }
        PartitionMode::Exact => {
            if n > PARTITION_MAX_USERS {
                return Err(Error::SizeGuard {
                    operation: "exact partition bound",
                    n_players: game.n_players(),
                    limit: PARTITION_MAX_USERS + 1,
                });
            }
            let mut best: Option<(Rational, Vec<Coalition>)> = None;
            for_each_partition(n, |masks| {
                let blocks = as_coalitions(masks);
                let cost = partition_cost(game, eps_star, &blocks);
                if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                    best = Some((cost, blocks));
                }
            });
            best.expect("at least one partition")
        }
    };
    Ok(PartitionBound {
        bound: game.grand_value() - best.0,
        partition: best.1,
    })
}

/// The 0/1 dual of a partition: weight one on `N ∖ A` for each block `A`.
/// When the partition bound equals `m_a` this is an optimal dual solution
/// of the share program.
pub fn partition_dual(partition: &[Coalition]) -> Vec<(Coalition, Rational)> {
    partition.iter().map(|a| (a.complement(), Rational::ONE)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharesReport {
    pub eps_star: Rational,
    /// `M_a`.
    pub max_aggregator: Rational,
    /// `m_a`.
    pub min_aggregator: Rational,
    /// `M_U = v(N) − m_a`.
    pub max_users: Rational,
    /// Known only when `ε* = ε̂`.
    pub s_min: Option<Coalition>,
    /// `m_a = M_a` from the share programs.
    pub equality: bool,
    /// The structural prediction of `equality`, when `ε* = ε̂`.
    pub characterization: Option<Characterization>,
    /// Closed form of `M_a`, when `ε* = ε̂`.
    pub max_closed_form: Option<Rational>,
    pub partition_mode: PartitionMode,
    pub partition_bound: PartitionBound,
    pub singleton_bound: Rational,
    /// Attains `M_a`.
    pub max_cert: Allocation,
    /// Attains `m_a`.
    pub min_cert: Allocation,
}

fn ensure(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistency(what.to_string()))
    }
}

impl SharesReport {
    /// Solves both share programs at `ε*` from `report` and cross-checks
    /// every closed form that applies.
    pub fn analyze(game: &Game, report: &LeastCoreReport, mode: PartitionMode) -> Result<SharesReport> {
        let eps = report.eps_star;
        let vn = game.grand_value();
        let users_max = max_users_share(game, eps)?;
        let min_cert = users_max.allocation.clone();
        let (max_aggregator, max_cert) = max_aggregator_share(game, eps)?;
        let min_aggregator = min_cert.aggregator();
        ensure(min_aggregator <= max_aggregator, "m_a exceeds M_a")?;
        ensure(min_aggregator == vn - users_max.users_total, "m_a ≠ v(N) − M_U")?;

        let max_closed_form = max_aggregator_closed_form(game, report);
        if let Some(m) = max_closed_form {
            ensure(m == max_aggregator, "closed form of M_a disagrees with the LP")?;
        }
        let equality = min_aggregator == max_aggregator;
        let (s_min, characterization) = if report.formula_exact {
            let pinned = report.s_min.complement();
            for x in [&min_cert, &max_cert] {
                ensure(
                    pinned.users().all(|i| x.user(i) == eps),
                    "a least-core allocation is not pinned to ε* outside S_min",
                )?;
            }
            let ch = equality_characterization(game, report)?;
            ensure(ch.equal == equality, "characterization of m_a = M_a disagrees with the LPs")?;
            if !report.balanced && equality {
                let k = report.exactness.as_ref().and_then(|e| e.k).expect("checked above");
                ensure(
                    min_cert == least_core::check_allocation_at(game, k, eps),
                    "m_a = M_a but the share optimum is not x̌",
                )?;
            }
            (Some(report.s_min), Some(ch))
        } else {
            (None, None)
        };

        let singleton_bound = partition_lower_bound(game, eps, PartitionMode::Singletons)?.bound;
        let partition_bound = partition_lower_bound(game, eps, mode)?;
        ensure(singleton_bound <= partition_bound.bound, "singleton bound exceeds the partition bound")?;
        ensure(partition_bound.bound <= min_aggregator, "partition bound exceeds m_a")?;
        if partition_bound.bound == min_aggregator {
            let dual = partition_dual(&partition_bound.partition);
            let objective = dual_shares_objective(game, eps, &dual)?;
            ensure(objective == users_max.users_total, "partition dual is not optimal")?;
        }

        Ok(SharesReport {
            eps_star: eps,
            max_aggregator,
            min_aggregator,
            max_users: users_max.users_total,
            s_min,
            equality,
            characterization,
            max_closed_form,
            partition_mode: mode,
            partition_bound,
            singleton_bound,
            max_cert,
            min_cert,
        })
    }
}
