pub mod commands;
pub mod pairfile;
