//! Single-time-step energy sharing games.
//!
//! Each user is either a producer able to send up to `p_i` units or a
//! consumer able to receive up to `q_i` units, and pays a fixed admission
//! fee `c_i`. A coalition holding the aggregator and at least two users
//! is worth
//!
//! ```text
//! v(S) = (α + γ − β) · min{ Σ_{S∩U₁} p_i , Σ_{S∩U₂} q_i } − Σ_{S∩U} c_i
//! ```
//!
//! with empty sums equal to zero; every other coalition is worth zero.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{check_player_count, Coalition, Game};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Producer,
    Consumer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesgUser {
    pub id: u32,
    pub role: Role,
    pub capacity: Rational,
    pub fee: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesgInstance {
    alpha: Rational,
    beta: Rational,
    gamma: Rational,
    /// Sorted by id; position is the dense user index.
    users: Vec<SesgUser>,
}

impl SesgInstance {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, mut users: Vec<SesgUser>) -> Result<SesgInstance> {
        let invalid = |msg: String| Err(Error::InvalidInstance(msg));
        if !gamma.is_positive() {
            return invalid(format!("gamma must be positive (got {gamma})"));
        }
        if !(alpha + gamma - beta).is_positive() {
            return invalid(format!(
                "alpha + gamma - beta must be positive (got {})",
                alpha + gamma - beta
            ));
        }
        let mut seen = BTreeSet::new();
        for u in &users {
            if u.id == 0 {
                return invalid("user ids must be positive integers".into());
            }
            if !seen.insert(u.id) {
                return invalid(format!("duplicate user id {}", u.id));
            }
            if !u.capacity.is_positive() {
                return invalid(format!("user {}: capacity must be positive (got {})", u.id, u.capacity));
            }
            if u.fee.is_negative() {
                return invalid(format!("user {}: fee must be nonnegative (got {})", u.id, u.fee));
            }
        }
        check_player_count(users.len())?;
        users.sort_by_key(|u| u.id);
        Ok(SesgInstance {
            alpha,
            beta,
            gamma,
            users,
        })
    }

    /// Instance with `α = β = γ = 1`, so the exchange gain `α + γ − β` is one.
    /// Users missing from `fees` pay nothing.
    pub fn unit_gain(
        producers: &[(u32, Rational)],
        consumers: &[(u32, Rational)],
        fees: &[(u32, Rational)],
    ) -> Result<SesgInstance> {
        let mut users: Vec<SesgUser> = producers
            .iter()
            .map(|&(id, capacity)| (id, Role::Producer, capacity))
            .chain(consumers.iter().map(|&(id, capacity)| (id, Role::Consumer, capacity)))
            .map(|(id, role, capacity)| SesgUser {
                id,
                role,
                capacity,
                fee: Rational::ZERO,
            })
            .collect();
        for &(id, fee) in fees {
            let user = users
                .iter_mut()
                .find(|u| u.id == id)
                .ok_or_else(|| Error::InvalidInstance(format!("fee given for unknown user id {id}")))?;
            user.fee = fee;
        }
        Self::new(Rational::ONE, Rational::ONE, Rational::ONE, users)
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    pub fn beta(&self) -> Rational {
        self.beta
    }

    pub fn gamma(&self) -> Rational {
        self.gamma
    }

    /// `α + γ − β`.
    pub fn gain(&self) -> Rational {
        self.alpha + self.gamma - self.beta
    }

    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn users(&self) -> &[SesgUser] {
        &self.users
    }

    pub fn user(&self, index: usize) -> &SesgUser {
        &self.users[index]
    }

    pub fn id_of(&self, index: usize) -> u32 {
        self.users[index].id
    }

    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.users.binary_search_by_key(&id, |u| u.id).ok()
    }

    pub fn producers(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices_with(Role::Producer)
    }

    pub fn consumers(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices_with(Role::Consumer)
    }

    fn indices_with(&self, role: Role) -> impl Iterator<Item = usize> + '_ {
        self.users
            .iter()
            .enumerate()
            .filter(move |(_, u)| u.role == role)
            .map(|(i, _)| i)
    }

    pub fn fees(&self) -> Vec<Rational> {
        self.users.iter().map(|u| u.fee).collect()
    }

    /// `c̄ = max_i c_i` (zero without users).
    pub fn max_fee(&self) -> Rational {
        self.users.iter().map(|u| u.fee).max().unwrap_or(Rational::ZERO)
    }

    pub fn has_fees(&self) -> bool {
        self.users.iter().any(|u| !u.fee.is_zero())
    }

    /// Total capacity of the given role inside the user mask.
    pub(crate) fn capacity_in(&self, mask: u32, role: Role) -> Rational {
        self.users
            .iter()
            .enumerate()
            .filter(|(i, u)| u.role == role && mask & (1 << i) != 0)
            .map(|(_, u)| u.capacity)
            .sum()
    }

    pub fn value(&self, s: Coalition) -> Result<Rational> {
        if s.n_users() != self.n_users() {
            return Err(Error::MismatchedGame {
                expected: self.n_users(),
                found: s.n_users(),
            });
        }
        Ok(self.value_unchecked(s))
    }

    fn value_unchecked(&self, s: Coalition) -> Rational {
        if !s.has_aggregator() || s.user_count() < 2 {
            return Rational::ZERO;
        }
        let mask = s.user_mask();
        let sent = self.capacity_in(mask, Role::Producer);
        let received = self.capacity_in(mask, Role::Consumer);
        let fees: Rational = s.users().map(|i| self.users[i].fee).sum();
        self.gain() * sent.min(received) - fees
    }

    /// Full value table. The grand coalition uses the same closed form.
    pub fn build_game(&self) -> Result<Game> {
        Game::from_fn(self.n_users(), |s| self.value_unchecked(s))
    }

    /// The same community with every admission fee set to zero.
    pub fn strip_fees(&self) -> SesgInstance {
        let mut stripped = self.clone();
        for u in &mut stripped.users {
            u.fee = Rational::ZERO;
        }
        stripped
    }

    /// Copy with one user's capacity replaced.
    pub fn with_capacity(&self, id: u32, capacity: Rational) -> Result<SesgInstance> {
        let mut users = self.users.clone();
        let user = users
            .iter_mut()
            .find(|u| u.id == id)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown user id {id}")))?;
        user.capacity = capacity;
        Self::new(self.alpha, self.beta, self.gamma, users)
    }

    /// Random instance with `α = β = γ = 1`, integer capacities in
    /// `[1, max_capacity]` and integer fees in `[0, max_fee]`. Producers get
    /// ids `1..=producers`, consumers the ids after them.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        producers: usize,
        consumers: usize,
        max_capacity: i64,
        max_fee: i64,
    ) -> Result<SesgInstance> {
        if max_capacity < 1 {
            return Err(Error::InvalidInstance(format!("max capacity must be at least 1 (got {max_capacity})")));
        }
        if max_fee < 0 {
            return Err(Error::InvalidInstance(format!("max fee must be nonnegative (got {max_fee})")));
        }
        check_player_count(producers + consumers)?;
        let users = (0..producers + consumers)
            .map(|i| SesgUser {
                id: i as u32 + 1,
                role: if i < producers { Role::Producer } else { Role::Consumer },
                capacity: Rational::from(rng.gen_range(1..=max_capacity)),
                fee: Rational::from(rng.gen_range(0..=max_fee)),
            })
            .collect();
        Self::new(Rational::ONE, Rational::ONE, Rational::ONE, users)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::family;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn example2() -> SesgInstance {
        SesgInstance::unit_gain(&[(1, r(10)), (2, r(90))], &[(3, r(86)), (4, r(14))], &[]).unwrap()
    }

    fn example1(c: Rational) -> SesgInstance {
        let fees: Vec<_> = (1..=4).map(|i| (i, c)).collect();
        SesgInstance::unit_gain(&[(1, r(1)), (2, r(2)), (3, r(3))], &[(4, Rational::new(11, 2))], &fees).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let inst = example2();
        let n = inst.n_users();
        assert_eq!(inst.value(Coalition::grand(n)).unwrap(), r(100));

        let ex4 = SesgInstance::unit_gain(
            &[(1, r(4)), (2, r(6))],
            &[(3, r(2)), (4, r(7))],
            &[(1, r(1)), (2, r(1)), (3, r(1)), (4, r(1))],
        )
        .unwrap();
        assert_eq!(ex4.value(Coalition::from_users(4, [1, 3], true).unwrap()).unwrap(), r(4));
        // producers only: no exchange, fees still charged
        assert_eq!(ex4.value(Coalition::from_users(4, [0, 1], true).unwrap()).unwrap(), r(-2));
        assert!(ex4.value(Coalition::grand(3)).is_err());
    }

    #[test]
    fn example1_grand_value() {
        for c in [r(0), Rational::new(1, 2), r(1), r(3)] {
            let game = example1(c).build_game().unwrap();
            assert_eq!(game.grand_value(), Rational::new(11, 2) - r(4) * c);
            assert_eq!(game.value(game.coalition([1, 2, 3], true).unwrap()), r(5) - r(3) * c);
        }
    }

    #[test]
    fn example6_table() {
        let inst = SesgInstance::unit_gain(&[(1, r(6)), (2, r(4))], &[(3, r(6))], &[(2, r(2))]).unwrap();
        let game = inst.build_game().unwrap();
        assert_eq!(game.value(game.coalition([0, 2], true).unwrap()), r(6));
        assert_eq!(game.value(game.coalition([1, 2], true).unwrap()), r(2));
        assert_eq!(game.value(game.coalition([0, 1], true).unwrap()), r(-2));
        assert_eq!(game.grand_value(), r(4));
    }

    #[test]
    fn empty_side_pays_fees() {
        let inst = SesgInstance::unit_gain(&[], &[(1, r(3)), (2, r(5)), (3, r(1))], &[(1, r(1)), (2, r(2)), (3, r(4))]).unwrap();
        let game = inst.build_game().unwrap();
        let fees = inst.fees();
        for s in family::proper_with_aggregator_two_users(3).chain([game.grand()]) {
            let c: Rational = s.users().map(|i| fees[i]).sum();
            assert_eq!(game.value(s), -c);
        }
    }

    #[test]
    fn strip_fees_gives_fee_free_companion() {
        let with_fees = SesgInstance::unit_gain(
            &[(1, r(10)), (2, r(90))],
            &[(3, r(86)), (4, r(14))],
            &[(1, r(1)), (2, r(1)), (3, r(1)), (4, r(1))],
        )
        .unwrap();
        assert_eq!(with_fees.strip_fees(), example2());
        assert_eq!(example2().strip_fees(), example2());

        let v = with_fees.build_game().unwrap();
        let v0 = with_fees.strip_fees().build_game().unwrap();
        let fees = with_fees.fees();
        // enumeration: v0(S) − v(S) = c(S ∩ U) on coalitions where the formula applies
        for s in family::proper_with_aggregator_two_users(4).chain([v.grand()]) {
            let c: Rational = s.users().map(|i| fees[i]).sum();
            assert_eq!(v0.value(s) - v.value(s), c, "coalition {s}");
        }
    }

    #[test]
    fn validation() {
        let bad_cap = SesgInstance::unit_gain(&[(1, r(0))], &[(2, r(1))], &[]);
        assert!(matches!(bad_cap, Err(Error::InvalidInstance(_))));
        let dup = SesgInstance::unit_gain(&[(1, r(1))], &[(1, r(1))], &[]);
        assert!(matches!(dup, Err(Error::InvalidInstance(m)) if m.contains("duplicate")));
        let neg_fee = SesgInstance::unit_gain(&[(1, r(1))], &[(2, r(1))], &[(2, r(-1))]);
        assert!(neg_fee.is_err());
        let users = vec![SesgUser { id: 1, role: Role::Producer, capacity: r(1), fee: r(0) }];
        assert!(SesgInstance::new(r(1), r(3), r(1), users.clone()).is_err());
        assert!(SesgInstance::new(r(1), r(0), r(0), users).is_err());
    }

    #[test]
    fn ids_map_to_sorted_dense_indices() {
        let inst = SesgInstance::unit_gain(&[(40, r(2))], &[(7, r(3)), (12, r(1))], &[]).unwrap();
        assert_eq!(inst.id_of(0), 7);
        assert_eq!(inst.index_of(40), Some(2));
        assert_eq!(inst.producers().collect::<Vec<_>>(), vec![2]);
        assert_eq!(inst.index_of(5), None);
    }
}
