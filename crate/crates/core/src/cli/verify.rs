//! Cross-checks of every closed form that applies to an instance against
//! brute force or the LP.

use serde::{Deserialize, Serialize};

use super::instance::Instance;
use super::report::{fee_free, not_applicable_to_none};
use crate::error::{Error, Result};
use crate::game::{Game, Player};
use crate::least_core::{self, LeastCoreReport};
use crate::properties::{self, PropertyReport, SUBGAME_SWEEP_MAX_PLAYERS};
use crate::rational::Rational;
use crate::shares::{PartitionMode, SharesReport, PARTITION_MAX_USERS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl Check {
    pub fn failed(&self) -> bool {
        matches!(self.outcome, Outcome::Fail(_))
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, outcome: Outcome) {
        self.0.push(Check {
            name: name.into(),
            outcome,
        });
    }

    /// Records a comparison; `None` means the closed form does not apply.
    fn compare<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, closed: Option<T>, brute: T) {
        let outcome = match closed {
            None => Outcome::Skip("not applicable".into()),
            Some(c) if c == brute => Outcome::Pass,
            Some(c) => Outcome::Fail(format!("closed form gives {c:?}, direct computation {brute:?}")),
        };
        self.push(name, outcome);
    }

    /// Records the result of a self-checking analysis. Consistency failures
    /// fail the check; size guards and inapplicability skip it.
    fn analysis<T>(&mut self, name: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => {
                self.push(name, Outcome::Pass);
                Ok(Some(v))
            }
            Err(Error::Inconsistency(m)) => {
                self.push(name, Outcome::Fail(m));
                Ok(None)
            }
            Err(e @ (Error::SizeGuard { .. } | Error::NotApplicable(_))) => {
                self.push(name, Outcome::Skip(e.to_string()));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

/// Whether `v(S) = 0` for every coalition holding fewer than two users.
fn vanishes_below_two_users(game: &Game) -> bool {
    crate::game::family::all(game.n_users())
        .filter(|s| s.user_count() < 2)
        .all(|s| game.value(s).is_zero())
}

/// Runs every check. Errors are reserved for invalid input.
pub fn verify(inst: &Instance) -> Result<Vec<Check>> {
    let game = inst.game()?;
    let companion = fee_free(inst)?;
    let companion_ref = companion.as_ref().map(|(g, c)| (g, *c));
    let mut checks = Checks(Vec::new());

    let props = checks.analysis("property analysis", PropertyReport::analyze(&game))?;
    let lc = checks.analysis(
        "least core: LP against ε̂, bounds and certificates",
        LeastCoreReport::analyze(&game, companion_ref),
    )?;
    if let Some(lc) = &lc {
        let mode = if game.n_users() <= PARTITION_MAX_USERS {
            PartitionMode::Exact
        } else {
            PartitionMode::Singletons
        };
        checks.analysis(
            "shares: LP against closed forms and partition bound",
            SharesReport::analyze(&game, lc, mode),
        )?;
        let hat = least_core::dual_certificate_hat(&game, least_core::eps_hat(&game).s_hat())
            .and_then(|w| least_core::dual_lc_objective(&game, &w));
        checks.analysis("λ̂ is dual feasible with objective ε̂", hat.and_then(|obj| {
            if obj == lc.eps_hat {
                Ok(())
            } else {
                Err(Error::Inconsistency(format!("objective {obj} ≠ ε̂ = {}", lc.eps_hat)))
            }
        }))?;
    }

    if vanishes_below_two_users(&game) {
        let direct = properties::egalitarian_membership(&game);
        if let Some(direct) = checks.analysis("egalitarian allocations: direct membership", direct)? {
            checks.compare(
                "egalitarian allocations: ratio conditions",
                Some(properties::egalitarian_conditions(&game)),
                direct,
            );
        }
    }

    if let Some(p) = &props {
        if game.n_players() <= SUBGAME_SWEEP_MAX_PLAYERS {
            let sweep = checks.analysis("subgame sweep", properties::totally_balanced_sweep(&game))?;
            if let Some(sweep) = sweep {
                checks.compare("totally balanced iff monotonic", Some(sweep), p.monotonic.holds);
            }
        }
    }

    if let (Instance::Sesg(s), Some((game0, _))) = (inst, &companion) {
        if let Some(p) = &props {
            checks.compare("monotonicity closed form", Some(properties::sesg_monotone_char(s)), p.monotonic.holds);
            checks.compare(
                "fee characterization of monotonicity",
                Some(properties::mono_char_with_fees(game0, &s.fees())?),
                p.monotonic.holds,
            );
            checks.compare(
                "big-boss closed form",
                not_applicable_to_none(properties::sesg_bigboss_char(s))?,
                p.big_boss == Some(Player::Aggregator),
            );
            checks.compare(
                "fee characterization of balancedness",
                not_applicable_to_none(properties::sesg_balanced_char(s))?,
                p.balanced.holds,
            );
        }
        let eps_hat = least_core::eps_hat(&game).value;
        checks.compare(
            "clan closed form",
            not_applicable_to_none(least_core::clan_general_eps(s))?,
            eps_hat,
        );
        checks.compare(
            "clan closed form, equal capacities",
            not_applicable_to_none(least_core::clan_equal_capacity_eps(s))?.map(|(e, _)| e),
            eps_hat,
        );
        let eps0 = least_core::eps_hat(game0).value;
        let zero_marginal = (0..game0.n_users()).any(|i| {
            game0
                .marginal_contribution(Player::User(i))
                .map(|m| m.is_zero())
                .unwrap_or(false)
        });
        checks.compare("fee-free ε*₀ = 0 iff a user adds nothing", Some(eps0 == Rational::ZERO), zero_marginal);
    }
    Ok(checks.0)
}
