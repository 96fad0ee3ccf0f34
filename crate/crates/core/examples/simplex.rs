//! The exact rational simplex on a small program, with its dual.
//!
//! `cargo run --example simplex`

use ecgame::lp::{LinearProgram, LpStatus};
use ecgame::Rational;

fn main() -> ecgame::Result<()> {
    let r = Rational::from;
    // max 3x + 2y  s.t.  x + y ≤ 4,  x + 3y ≤ 6,  x ≤ 3,  x, y ≥ 0
    let mut lp = LinearProgram::new(vec![r(3), r(2)])?;
    lp.add_le(vec![r(1), r(1)], r(4))?;
    lp.add_le(vec![r(1), r(3)], r(6))?;
    lp.add_le(vec![r(1), r(0)], r(3))?;
    lp.add_le(vec![r(-1), r(0)], r(0))?;
    lp.add_le(vec![r(0), r(-1)], r(0))?;
    let sol = lp.solve()?;
    assert_eq!(sol.status, LpStatus::Optimal);
    println!("optimum {} at x = {}, y = {}", sol.objective_value, sol.primal[0], sol.primal[1]);
    let duals: Vec<_> = sol.dual.iter().map(|d| d.to_string()).collect();
    println!("row multipliers {}", duals.join(" "));
    sol.verify(&lp)?;

    let mut open = LinearProgram::new(vec![r(1), r(0)])?;
    open.add_le(vec![r(0), r(1)], r(1))?;
    println!("without a bound on x: {}", open.solve()?.status);
    Ok(())
}
