pub mod cert;
pub mod cli;
pub mod parse;
