pub mod cnf;
pub mod embedding;
pub mod generate;
pub mod graph;
pub mod id;
pub mod io;
pub mod lp;
pub mod network;
pub mod paft;
pub mod rational;
pub mod reductions;
pub mod solvers;
pub mod threshold;
