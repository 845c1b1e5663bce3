pub mod bench;
pub mod bnb;
pub mod encode;
pub mod graph;
pub mod heuristics;
pub mod oracle;
pub mod ovgen;
pub mod pattern;
pub mod solver;
pub mod verify;
