pub mod arith;
pub mod berlekamp;
pub mod cli;
pub mod config;
pub mod double;
pub mod error;
pub mod field;
pub mod hamming;
pub mod locators;
pub mod matrix;
pub mod metric;
pub mod multi;
pub mod oracle;
pub mod par;
pub mod scheme;
pub mod shorten;
pub mod sim;
pub mod single;
pub mod sweep;
