//! Least-core value of a fee-free community, with the closed form, the LP
//! certificates and the bounds.
//!
//! `cargo run --example least_core`

use ecgame::least_core::{self, LeastCoreReport};
use ecgame::{Rational, SesgInstance};

fn main() -> ecgame::Result<()> {
    let r = Rational::from;
    let inst = SesgInstance::unit_gain(&[(1, r(10)), (2, r(90))], &[(3, r(86)), (4, r(14))], &[])?;
    let game = inst.build_game()?;
    let report = LeastCoreReport::analyze(&game, None)?;

    println!("v(N) = {}", game.grand_value());
    println!("balanced: {}", report.balanced);
    println!("ε* = {} (closed form ε̂ = {})", report.eps_star, report.eps_hat);
    println!("minimizers of the ratio: {}", report.argmin.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "));
    let x = &report.primal_cert;
    println!("allocation: users {:?}, aggregator {}", x.payoffs()[..game.n_users()].iter().map(|v| v.to_string()).collect::<Vec<_>>(), x.aggregator());
    println!("dual certificate:");
    for (s, w) in &report.dual_cert {
        println!("  λ{s} = {w}");
    }
    let b = least_core::bounds_no_fees(&game)?;
    println!("bounds: {} ≤ ε* ≤ {}", b.lower, b.upper);

    // Raising one producer's capacity moves the bounds.
    for p2 in [92, 100] {
        let g = inst.with_capacity(2, r(p2))?.build_game()?;
        let lp = least_core::least_core_lp(&g)?;
        let b = least_core::bounds_no_fees(&g)?;
        println!("p2 = {p2}: ε* = {}, bounds [{}, {}]", lp.eps_star, b.lower, b.upper);
    }
    Ok(())
}
