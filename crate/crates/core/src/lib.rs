pub mod harness;
pub mod rules;
pub mod runtime;
pub mod sim;
