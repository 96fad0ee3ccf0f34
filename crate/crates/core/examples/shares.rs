//! Range of the aggregator's payoff over the least core, and the partition
//! lower bound on its smallest value.
//!
//! `cargo run --example shares`

use ecgame::least_core::LeastCoreReport;
use ecgame::shares::{PartitionMode, SharesReport};
use ecgame::{Rational, SesgInstance};

fn main() -> ecgame::Result<()> {
    let r = Rational::from;
    let inst = SesgInstance::unit_gain(&[(1, r(6)), (2, r(6))], &[(3, r(5)), (4, r(10))], &[(3, r(2)), (4, r(7))])?;
    let game = inst.build_game()?;
    let lc = LeastCoreReport::analyze(&game, None)?;
    for mode in [PartitionMode::Exact, PartitionMode::Singletons] {
        let sh = SharesReport::analyze(&game, &lc, mode)?;
        println!("{mode} partitions");
        println!("  aggregator share in [{}, {}]", sh.min_aggregator, sh.max_aggregator);
        println!("  users can get at most {}", sh.max_users);
        let parts: Vec<_> = sh.partition_bound.partition.iter().map(|p| p.to_string()).collect();
        println!("  lower bound {} from {}", sh.partition_bound.bound, parts.join(" "));
        println!("  singleton bound {}", sh.singleton_bound);
        println!("  smallest share equals the closed form: {}", sh.equality);
    }
    Ok(())
}
