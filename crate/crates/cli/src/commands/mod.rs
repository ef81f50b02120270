pub mod cost;
pub mod eval;
pub mod prune;
pub mod render;
pub mod stats;
