pub mod cli;
pub mod error;
pub mod game;
pub mod least_core;
pub mod lp;
pub mod properties;
pub mod rational;
pub mod sesg;
pub mod shares;

pub use error::{Error, Result};
pub use game::{family, Allocation, Coalition, Game, Player};
pub use rational::Rational;
pub use sesg::{Role, SesgInstance, SesgUser};
