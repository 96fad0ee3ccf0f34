//! Independent oracle for integration tests.
//!
//! Values are recomputed from raw instance data with plain bitmask loops
//! (bit `i` is user `i`, the aggregator is implicit), and LP results are
//! accepted only with a primal point and a dual point checked here.

#![allow(dead_code)]

use ecgame::{Allocation, Coalition, Game, Rational, Role, SesgInstance, SesgUser};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn r(n: i64) -> Rational {
    Rational::from(n)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Raw energy sharing data with unit gain: `(capacity, fee)` per side.
#[derive(Clone, Debug)]
pub struct Raw {
    pub producers: Vec<(Rational, Rational)>,
    pub consumers: Vec<(Rational, Rational)>,
}

impl Raw {
    pub fn n(&self) -> usize {
        self.producers.len() + self.consumers.len()
    }

    fn user(&self, i: usize) -> (Role, Rational, Rational) {
        if i < self.producers.len() {
            let (c, f) = self.producers[i];
            (Role::Producer, c, f)
        } else {
            let (c, f) = self.consumers[i - self.producers.len()];
            (Role::Consumer, c, f)
        }
    }

    /// `v(S ∪ {a})` for the user mask `m`.
    pub fn value(&self, m: u32) -> Rational {
        if m.count_ones() < 2 {
            return Rational::ZERO;
        }
        let (mut p, mut c, mut fees) = (Rational::ZERO, Rational::ZERO, Rational::ZERO);
        for i in 0..self.n() {
            if m & (1 << i) != 0 {
                let (role, cap, fee) = self.user(i);
                match role {
                    Role::Producer => p += cap,
                    Role::Consumer => c += cap,
                }
                fees += fee;
            }
        }
        p.min(c) - fees
    }

    /// Unit-gain instance data, producers first.
    pub fn from_instance(inst: &SesgInstance) -> Raw {
        assert_eq!(inst.gain(), Rational::ONE);
        let side = |role: Role| -> Vec<(Rational, Rational)> {
            inst.users().iter().filter(|u| u.role == role).map(|u| (u.capacity, u.fee)).collect()
        };
        Raw {
            producers: side(Role::Producer),
            consumers: side(Role::Consumer),
        }
    }

    pub fn fee_free(&self) -> Raw {
        Raw {
            producers: self.producers.iter().map(|&(c, _)| (c, Rational::ZERO)).collect(),
            consumers: self.consumers.iter().map(|&(c, _)| (c, Rational::ZERO)).collect(),
        }
    }

    pub fn instance(&self) -> SesgInstance {
        let users = (0..self.n())
            .map(|i| {
                let (role, capacity, fee) = self.user(i);
                SesgUser {
                    id: i as u32 + 1,
                    role,
                    capacity,
                    fee,
                }
            })
            .collect();
        SesgInstance::new(r(1), r(1), r(1), users).unwrap()
    }

    pub fn table(&self) -> Table {
        let n = self.n();
        Table {
            n,
            v: (0..1u32 << n).map(|m| self.value(m)).collect(),
        }
    }

    pub fn random(rng: &mut ChaCha8Rng, n_users: usize, max_cap: i64, max_fee: i64) -> Raw {
        let np = rng.gen_range(1..n_users);
        let mut draw = |k: usize| -> Vec<(Rational, Rational)> {
            (0..k)
                .map(|_| (r(rng.gen_range(1..=max_cap)), r(rng.gen_range(0..=max_fee))))
                .collect()
        };
        let producers = draw(np);
        let consumers = draw(n_users - np);
        Raw { producers, consumers }
    }
}

/// Seeded stream of instances with `2 ≤ |U| ≤ max_users`. Fees are zero for
/// roughly a third of them.
pub fn sweep(seed: u64, count: usize, max_users: usize) -> Vec<Raw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_users);
            let max_fee = [0, 1, 3][rng.gen_range(0..3)];
            Raw::random(&mut rng, n, 12, max_fee)
        })
        .collect()
}

/// A game given by `v(S ∪ {a})` for each user mask; `v` is zero without `a`.
#[derive(Clone, Debug)]
pub struct Table {
    pub n: usize,
    pub v: Vec<Rational>,
}

impl Table {
    pub fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn grand(&self) -> Rational {
        self.v[self.full() as usize]
    }

    pub fn game(&self) -> Game {
        Game::from_table(self.n, self.v.clone()).unwrap()
    }

    /// `ε̂` by its definition.
    pub fn eps_hat(&self) -> Rational {
        (0..self.full())
            .map(|m| (self.grand() - self.v[m as usize]) / r((self.n + 1 - m.count_ones() as usize) as i64))
            .min()
            .unwrap()
    }

    pub fn eps_tilde(&self) -> Rational {
        let best = (0..self.full()).map(|m| self.v[m as usize]).max().unwrap();
        (self.grand() - best) / r(2)
    }

    pub fn eps_bar(&self) -> Rational {
        let best = (0..self.n).map(|i| self.v[(self.full() & !(1 << i)) as usize]).max().unwrap();
        (self.grand() / r(self.n as i64 + 1)).min((self.grand() - best) / r(2))
    }

    pub fn balanced(&self) -> bool {
        (0..self.full()).all(|m| self.v[m as usize] <= self.grand())
    }

    pub fn monotonic(&self) -> bool {
        // a-free coalitions are worth zero; adding a never loses value
        // exactly when every v(S ∪ {a}) ≥ 0
        let with_a = (0..=self.full()).all(|m| {
            (0..self.n).all(|i| m & (1 << i) != 0 || self.v[(m | 1 << i) as usize] >= self.v[m as usize])
        });
        with_a && self.v.iter().all(|x| !x.is_negative())
    }

    pub fn marginal(&self, i: usize) -> Rational {
        self.grand() - self.v[(self.full() & !(1 << i)) as usize]
    }

    /// Smallest `x(S) − v(S)` over proper coalitions, or `None` when
    /// `x(N) ≠ v(N)`. Payoffs are users first, aggregator last.
    pub fn min_excess(&self, x: &[Rational]) -> Option<Rational> {
        let n = self.n;
        if x.iter().copied().sum::<Rational>() != self.grand() {
            return None;
        }
        let user_sum = |m: u32| -> Rational { (0..n).filter(|i| m & (1 << i) != 0).map(|i| x[i]).sum() };
        let without_a = (1..=self.full()).map(&user_sum);
        let with_a = (0..self.full()).map(|m| user_sum(m) + x[n] - self.v[m as usize]);
        without_a.chain(with_a).min()
    }

    /// Checks the textbook least-core dual: weights `λ_S ≥ 0` on proper
    /// coalitions summing to one such that every player lies in coalitions of
    /// the same total weight `μ`. Returns `μ v(N) − Σ λ_S v(S)`.
    pub fn dual_objective(&self, weights: &[(Coalition, Rational)]) -> Option<Rational> {
        let n = self.n;
        let mut per_player = vec![Rational::ZERO; n + 1];
        let mut total = Rational::ZERO;
        let mut value = Rational::ZERO;
        for &(s, l) in weights {
            if l.is_negative() || !s.is_proper() || s.is_empty() {
                return None;
            }
            total += l;
            let m = s.user_mask();
            for (i, w) in per_player.iter_mut().enumerate().take(n) {
                if m & (1 << i) != 0 {
                    *w += l;
                }
            }
            if s.has_aggregator() {
                per_player[n] += l;
                value += l * self.v[m as usize];
            }
        }
        let mu = per_player[n];
        (total == Rational::ONE && per_player.iter().all(|w| *w == mu)).then(|| mu * self.grand() - value)
    }
}

/// Payoffs as users first, aggregator last.
pub fn flat(x: &Allocation) -> Vec<Rational> {
    (0..x.len() - 1).map(|i| x.user(i)).chain([x.aggregator()]).collect()
}

/// Least-core value certified by a primal point and a dual point checked by
/// the oracle.
pub fn certified_eps_star(t: &Table, x: &Allocation, dual: &[(Coalition, Rational)]) -> Rational {
    let primal = t.min_excess(&flat(x)).expect("allocation is efficient");
    let dual = t.dual_objective(dual).expect("dual weights are feasible");
    assert_eq!(primal, dual, "primal and dual objectives differ");
    primal
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

pub fn load(name: &str) -> SesgInstance {
    match ecgame::cli::instance::read_instance(&fixture(name)).unwrap() {
        ecgame::cli::instance::Instance::Sesg(s) => s,
        other => panic!("{name} is not an energy sharing instance: {other:?}"),
    }
}
