pub mod cli;
pub mod engine;
pub mod formulas;
pub mod frontends;
pub mod relterm;
pub mod semantics;
