//! TU games with a veto aggregator.
//!
//! A [`Game`] stores `v(S)` for every coalition containing the aggregator;
//! every coalition without it is worth zero. Games are immutable after
//! construction.

mod coalition;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use coalition::{family, Coalition, Player};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_MAX_PLAYERS: usize = 24;

/// Enumeration cap on `|N|`. `ECGAME_MAX_PLAYERS` overrides the default;
/// values above 31 are clamped since coalitions are 32-bit masks.
pub fn max_players() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("ECGAME_MAX_PLAYERS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .map(|n| n.clamp(2, 31))
            .unwrap_or(DEFAULT_MAX_PLAYERS)
    })
}

pub(crate) fn check_player_count(n_users: usize) -> Result<()> {
    if n_users == 0 {
        return Err(Error::NoUsers);
    }
    let cap = max_players();
    if n_users + 1 > cap {
        return Err(Error::TooManyPlayers {
            n_players: n_users + 1,
            cap,
        });
    }
    Ok(())
}

pub(crate) fn size_guard(operation: &'static str, n_players: usize, limit: usize) -> Result<()> {
    if n_players > limit {
        return Err(Error::SizeGuard {
            operation,
            n_players,
            limit,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    n_users: usize,
    /// Indexed by the user mask of `S`, standing for `S ∪ {a}`.
    values: Vec<Rational>,
}

impl Game {
    /// Tabulates `f` over every coalition containing the aggregator.
    pub fn from_fn<F>(n_users: usize, mut f: F) -> Result<Game>
    where
        F: FnMut(Coalition) -> Rational,
    {
        check_player_count(n_users)?;
        let values = (0..1u32 << n_users)
            .map(|m| f(Coalition::with_aggregator_mask(n_users, m)))
            .collect();
        Ok(Game { n_users, values })
    }

    pub fn try_from_fn<F>(n_users: usize, mut f: F) -> Result<Game>
    where
        F: FnMut(Coalition) -> Result<Rational>,
    {
        check_player_count(n_users)?;
        let values = (0..1u32 << n_users)
            .map(|m| f(Coalition::with_aggregator_mask(n_users, m)))
            .collect::<Result<_>>()?;
        Ok(Game { n_users, values })
    }

    /// `values[m]` is `v(S ∪ {a})` where `m` is the user mask of `S`.
    pub fn from_table(n_users: usize, values: Vec<Rational>) -> Result<Game> {
        check_player_count(n_users)?;
        if values.len() != 1 << n_users {
            return Err(Error::TableSize {
                expected: 1 << n_users,
                found: values.len(),
            });
        }
        Ok(Game { n_users, values })
    }

    pub fn zero(n_users: usize) -> Result<Game> {
        Self::from_fn(n_users, |_| Rational::ZERO)
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_players(&self) -> usize {
        self.n_users + 1
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n_users)
    }

    pub fn coalition(&self, users: impl IntoIterator<Item = usize>, with_aggregator: bool) -> Result<Coalition> {
        Coalition::from_users(self.n_users, users, with_aggregator)
    }

    fn check_coalition(&self, s: Coalition) -> Result<()> {
        if s.n_users() != self.n_users {
            return Err(Error::MismatchedGame {
                expected: self.n_users,
                found: s.n_users(),
            });
        }
        Ok(())
    }

    /// `v(S)`: the table entry when `a ∈ S`, zero otherwise.
    ///
    /// Panics if `s` was built for a different number of users; see
    /// [`Game::try_value`].
    pub fn value(&self, s: Coalition) -> Rational {
        assert_eq!(s.n_users(), self.n_users, "coalition from a different game");
        if s.has_aggregator() {
            self.values[s.user_mask() as usize]
        } else {
            Rational::ZERO
        }
    }

    pub fn try_value(&self, s: Coalition) -> Result<Rational> {
        self.check_coalition(s)?;
        Ok(self.value(s))
    }

    pub fn grand_value(&self) -> Rational {
        self.values[self.values.len() - 1]
    }

    /// Raw table, indexed by user mask.
    pub fn table(&self) -> &[Rational] {
        &self.values
    }

    /// `M(i) = v(N) − v(N \ {i})`.
    pub fn marginal_contribution(&self, player: Player) -> Result<Rational> {
        let rest = self.grand().without(player)?;
        Ok(self.grand_value() - self.value(rest))
    }

    /// `e(S, x) = v(S) − x(S)`.
    pub fn excess(&self, x: &Allocation, s: Coalition) -> Result<Rational> {
        self.check_coalition(s)?;
        self.check_allocation(x)?;
        Ok(self.value(s) - x.coalition_sum(s))
    }

    pub(crate) fn check_allocation(&self, x: &Allocation) -> Result<()> {
        if x.len() != self.n_players() {
            return Err(Error::AllocationLength {
                expected: self.n_players(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// The subgame on `T ∋ a`, with users renumbered densely.
    pub fn subgame(&self, t: Coalition) -> Result<Game> {
        self.check_coalition(t)?;
        if !t.has_aggregator() {
            return Err(Error::NotApplicable(
                "subgames without the aggregator are identically zero".into(),
            ));
        }
        let members: Vec<usize> = t.users().collect();
        Game::from_fn(members.len(), |s| {
            let mask = s.users().fold(0u32, |m, k| m | (1 << members[k]));
            self.values[mask as usize]
        })
    }
}

/// Payoff vector ordered users first, aggregator last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Allocation {
    payoffs: Vec<Rational>,
}

impl Allocation {
    pub fn new(users: Vec<Rational>, aggregator: Rational) -> Allocation {
        let mut payoffs = users;
        payoffs.push(aggregator);
        Allocation { payoffs }
    }

    pub fn from_payoffs(payoffs: Vec<Rational>) -> Allocation {
        Allocation { payoffs }
    }

    /// Efficient completion of a user payoff vector: `x_a = v(N) − x(U)`.
    pub fn completing(game: &Game, users: Vec<Rational>) -> Allocation {
        let xa = game.grand_value() - users.iter().sum::<Rational>();
        Allocation::new(users, xa)
    }

    pub fn len(&self) -> usize {
        self.payoffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payoffs.is_empty()
    }

    pub fn payoffs(&self) -> &[Rational] {
        &self.payoffs
    }

    pub fn user(&self, i: usize) -> Rational {
        self.payoffs[i]
    }

    pub fn aggregator(&self) -> Rational {
        self.payoffs[self.payoffs.len() - 1]
    }

    pub fn get(&self, p: Player) -> Rational {
        match p {
            Player::User(i) => self.payoffs[i],
            Player::Aggregator => self.aggregator(),
        }
    }

    /// `x(U)`.
    pub fn users_total(&self) -> Rational {
        self.payoffs[..self.payoffs.len() - 1].iter().sum()
    }

    pub fn total(&self) -> Rational {
        self.payoffs.iter().sum()
    }

    /// `x(S)`, with `x(∅) = 0`.
    pub fn coalition_sum(&self, s: Coalition) -> Rational {
        debug_assert_eq!(s.n_players(), self.payoffs.len());
        s.players().map(|p| self.get(p)).sum()
    }
}
