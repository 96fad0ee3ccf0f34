//! Generating, writing and reading instance files.
//!
//! `cargo run --example instances`

use ecgame::cli::instance::{parse_instance, render_instance, Instance};
use ecgame::SesgInstance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ecgame::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let inst = SesgInstance::random(&mut rng, 2, 3, 10, 2)?;
    let text = render_instance(&Instance::Sesg(inst.clone()));
    print!("{text}");

    let back = parse_instance(&text).expect("rendered instances parse");
    assert_eq!(back, Instance::Sesg(inst.clone()));

    // The same game as an explicit table of coalition values.
    let table = render_instance(&Instance::Table(inst.build_game()?));
    println!("{} lines as a table", table.lines().count());

    match parse_instance("{\n  \"kind\": \"sesg\",\n  \"gamma\": 0\n}\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
