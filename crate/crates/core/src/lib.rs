pub mod corpus;
pub mod error;
pub mod game;
pub mod graph;
pub mod io;
pub mod params;
pub mod reduction;
pub mod sim;
pub mod strategy;

pub use error::{Error, Result};
