//! An unbalanced community: ε* is negative and the closed form may only
//! bound it.
//!
//! `cargo run --example unbalanced`

use ecgame::least_core::LeastCoreReport;
use ecgame::{Rational, SesgInstance};

fn main() -> ecgame::Result<()> {
    let r = Rational::from;
    let inst = SesgInstance::unit_gain(
        &[(1, r(7)), (2, r(8)), (3, r(10))],
        &[(4, r(5)), (5, r(8)), (6, r(10))],
        &[(1, r(1)), (2, r(4)), (3, r(5)), (4, r(3)), (5, r(4)), (6, r(1))],
    )?;
    let game = inst.build_game()?;
    let lc = LeastCoreReport::analyze(&game, Some((&inst.strip_fees().build_game()?, inst.max_fee())))?;
    let u = lc.unbalanced.as_ref().expect("this community is unbalanced");
    println!("v(N) = {}", game.grand_value());
    println!("2ε̃ < ε* ≤ ε̃ ≤ ε̂ ≤ ε̄");
    println!("{} < {} ≤ {} ≤ {} ≤ {}", u.eps_tilde + u.eps_tilde, lc.eps_star, u.eps_tilde, lc.eps_hat, u.eps_bar);
    let ex = lc.exactness.as_ref().unwrap();
    println!("Ŝ = {}, exact: {}", ex.s_hat, ex.exact);
    if let Some(s) = ex.violation {
        println!("the candidate allocation is blocked by {s}");
    }
    Ok(())
}
