use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A player of the game: one of the users (dense, zero-based) or the
/// aggregator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    User(usize),
    Aggregator,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::User(i) => write!(f, "{}", i + 1),
            Player::Aggregator => f.write_str("a"),
        }
    }
}

/// Subset of `N = U ∪ {a}`. Bits `0..n_users` are the users, bit `n_users`
/// is the aggregator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition {
    bits: u32,
    n_users: u8,
}

impl Coalition {
    pub(crate) const fn raw(n_users: usize, bits: u32) -> Coalition {
        Coalition {
            bits,
            n_users: n_users as u8,
        }
    }

    pub fn from_bits(n_users: usize, bits: u32) -> Result<Coalition> {
        if n_users > 31 || (bits >> (n_users + 1)) != 0 {
            return Err(Error::CoalitionOutOfRange { bits, n_users });
        }
        Ok(Self::raw(n_users, bits))
    }

    pub fn empty(n_users: usize) -> Coalition {
        Self::raw(n_users, 0)
    }

    pub fn grand(n_users: usize) -> Coalition {
        Self::raw(n_users, (1u32 << (n_users + 1)) - 1)
    }

    pub fn aggregator_only(n_users: usize) -> Coalition {
        Self::raw(n_users, 1 << n_users)
    }

    /// All users, no aggregator.
    pub fn all_users(n_users: usize) -> Coalition {
        Self::raw(n_users, (1u32 << n_users) - 1)
    }

    /// Builds a coalition from zero-based user indices.
    pub fn from_users(
        n_users: usize,
        users: impl IntoIterator<Item = usize>,
        with_aggregator: bool,
    ) -> Result<Coalition> {
        let mut c = if with_aggregator {
            Self::aggregator_only(n_users)
        } else {
            Self::empty(n_users)
        };
        for i in users {
            c = c.with(Player::User(i))?;
        }
        Ok(c)
    }

    /// `S ∪ {a}` where `S` is given by its user mask.
    pub(crate) fn with_aggregator_mask(n_users: usize, user_mask: u32) -> Coalition {
        Self::raw(n_users, user_mask | (1 << n_users))
    }

    pub(crate) fn users_mask_only(n_users: usize, user_mask: u32) -> Coalition {
        Self::raw(n_users, user_mask)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn n_users(&self) -> usize {
        self.n_users as usize
    }

    pub fn n_players(&self) -> usize {
        self.n_users as usize + 1
    }

    fn player_bit(&self, p: Player) -> Result<u32> {
        match p {
            Player::Aggregator => Ok(1 << self.n_users),
            Player::User(i) if i < self.n_users() => Ok(1 << i),
            Player::User(i) => Err(Error::PlayerOutOfRange {
                index: i,
                n_users: self.n_users(),
            }),
        }
    }

    pub fn contains(&self, p: Player) -> bool {
        self.player_bit(p).is_ok_and(|b| self.bits & b != 0)
    }

    pub fn has_aggregator(&self) -> bool {
        self.bits & (1 << self.n_users) != 0
    }

    /// The user part `S ∩ U` as a bit mask.
    pub fn user_mask(&self) -> u32 {
        self.bits & ((1u32 << self.n_users) - 1)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// `|S ∩ U|`.
    pub fn user_count(&self) -> usize {
        self.user_mask().count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_grand(&self) -> bool {
        self.bits == Self::grand(self.n_users()).bits
    }

    /// Nonempty and different from `N`.
    pub fn is_proper(&self) -> bool {
        !self.is_empty() && !self.is_grand()
    }

    pub fn with(&self, p: Player) -> Result<Coalition> {
        Ok(Self::raw(self.n_users(), self.bits | self.player_bit(p)?))
    }

    pub fn without(&self, p: Player) -> Result<Coalition> {
        Ok(Self::raw(self.n_users(), self.bits & !self.player_bit(p)?))
    }

    pub fn union(&self, other: Coalition) -> Coalition {
        debug_assert_eq!(self.n_users, other.n_users);
        Self::raw(self.n_users(), self.bits | other.bits)
    }

    pub fn intersection(&self, other: Coalition) -> Coalition {
        debug_assert_eq!(self.n_users, other.n_users);
        Self::raw(self.n_users(), self.bits & other.bits)
    }

    /// `N \ S`.
    pub fn complement(&self) -> Coalition {
        Self::raw(self.n_users(), Self::grand(self.n_users()).bits & !self.bits)
    }

    pub fn is_subset_of(&self, other: Coalition) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(&self, other: Coalition) -> bool {
        self.bits & other.bits == 0
    }

    /// Members in increasing user order, aggregator last.
    pub fn players(&self) -> impl Iterator<Item = Player> {
        self.users()
            .map(Player::User)
            .chain(self.has_aggregator().then_some(Player::Aggregator))
    }

    pub fn users(&self) -> impl Iterator<Item = usize> {
        let mask = self.user_mask();
        (0..self.n_users()).filter(move |i| mask & (1 << i) != 0)
    }

    /// Renders the coalition with caller-supplied user labels, e.g. `{a,1,3}`.
    pub fn display_with<F: Fn(usize) -> String>(&self, label: F) -> String {
        let mut parts: Vec<String> = Vec::with_capacity(self.len());
        if self.has_aggregator() {
            parts.push("a".to_string());
        }
        parts.extend(self.users().map(label));
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|i| (i + 1).to_string()))
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Set families over `N`, realized as iterators.
pub mod family {
    use super::Coalition;

    /// Every subset of `N`, including `∅` and `N`.
    pub fn all(n_users: usize) -> impl Iterator<Item = Coalition> {
        (0..(1u32 << (n_users + 1))).map(move |b| Coalition::raw(n_users, b))
    }

    /// Proper coalitions: nonempty and not `N`.
    pub fn proper(n_users: usize) -> impl Iterator<Item = Coalition> {
        all(n_users).filter(Coalition::is_proper)
    }

    /// Proper coalitions containing the aggregator, `{a}` included.
    pub fn proper_with_aggregator(n_users: usize) -> impl Iterator<Item = Coalition> {
        (0..(1u32 << n_users) - 1).map(move |m| Coalition::with_aggregator_mask(n_users, m))
    }

    /// Proper coalitions without the aggregator; `U` itself is included.
    pub fn proper_without_aggregator(n_users: usize) -> impl Iterator<Item = Coalition> {
        (1..(1u32 << n_users)).map(move |m| Coalition::users_mask_only(n_users, m))
    }

    /// Coalitions with the aggregator and at least two users, `N` excluded.
    pub fn proper_with_aggregator_two_users(n_users: usize) -> impl Iterator<Item = Coalition> {
        proper_with_aggregator(n_users).filter(|s| s.user_count() >= 2)
    }

    /// Leave-one-out coalitions `N \ {i}` for every user `i`.
    pub fn leave_one_out(n_users: usize) -> impl Iterator<Item = Coalition> {
        let full = (1u32 << n_users) - 1;
        (0..n_users).map(move |i| Coalition::with_aggregator_mask(n_users, full & !(1 << i)))
    }
}
