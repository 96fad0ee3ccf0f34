//! Cross-checks every closed form against the LP on random communities.
//!
//! `cargo run --release --example verify`

use ecgame::cli::instance::Instance;
use ecgame::cli::verify::{verify, Outcome};
use ecgame::SesgInstance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ecgame::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut passed, mut skipped) = (0, 0);
    for round in 0..50 {
        let inst = SesgInstance::random(&mut rng, 1 + round % 3, 1 + round % 4, 12, (round % 3) as i64)?;
        for check in verify(&Instance::Sesg(inst))? {
            match check.outcome {
                Outcome::Pass => passed += 1,
                Outcome::Skip(_) => skipped += 1,
                Outcome::Fail(msg) => {
                    eprintln!("{}: {msg}", check.name);
                    std::process::exit(1);
                }
            }
        }
    }
    println!("{passed} checks passed, {skipped} not applicable");
    Ok(())
}
