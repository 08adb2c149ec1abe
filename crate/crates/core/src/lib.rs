pub mod config;
pub mod grades;
pub mod reduce;
pub mod syntax;
pub mod typecheck;
pub mod usage;
pub mod extract;
pub mod frontend;
pub mod harness;
pub mod cli;
