//! Structural properties of a small energy community with fees.
//!
//! `cargo run --example properties`

use ecgame::properties::PropertyReport;
use ecgame::{Rational, SesgInstance};

fn main() -> ecgame::Result<()> {
    let r = Rational::from;
    let inst = SesgInstance::unit_gain(
        &[(1, r(4)), (2, r(6))],
        &[(3, r(2)), (4, r(7))],
        &[(1, r(1)), (2, r(1)), (3, r(1)), (4, r(1))],
    )?;
    let game = inst.build_game()?;
    let p = PropertyReport::analyze(&game)?;

    println!("v(N) = {}", game.grand_value());
    println!("superadditive: {}", p.superadditive.holds);
    if let Some((s, t)) = p.superadditive.witness {
        println!("  v({s}) + v({t}) > v({})", s.union(t));
    }
    println!("monotonic: {}", p.monotonic.holds);
    if let Some((s, i)) = p.monotonic.witness {
        println!("  adding {i} to {s} lowers the value");
    }
    println!("convex: {}", p.convex.holds);
    println!("veto players: {}", p.veto_set);
    println!("balanced: {}", p.balanced.holds);
    println!("totally balanced: {}", p.totally_balanced);
    Ok(())
}
