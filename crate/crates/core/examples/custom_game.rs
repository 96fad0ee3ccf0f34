//! Any game with a veto aggregator can be analyzed from its value function.
//!
//! `cargo run --example custom_game`

use ecgame::least_core::LeastCoreReport;
use ecgame::properties::PropertyReport;
use ecgame::shares::{PartitionMode, SharesReport};
use ecgame::{Game, Rational};

fn main() -> ecgame::Result<()> {
    // Three users; a coalition with the aggregator earns the square of its
    // user count.
    let game = Game::from_fn(3, |s| Rational::from((s.user_count() * s.user_count()) as i64))?;
    let p = PropertyReport::analyze(&game)?;
    println!("convex: {}, big boss: {:?}", p.convex.holds, p.big_boss.map(|b| b.to_string()));
    let lc = LeastCoreReport::analyze(&game, None)?;
    println!("ε* = {}", lc.eps_star);
    let sh = SharesReport::analyze(&game, &lc, PartitionMode::Exact)?;
    println!("aggregator share in [{}, {}]", sh.min_aggregator, sh.max_aggregator);
    Ok(())
}
