//! Command implementations and report rendering behind the `weilbound`
//! binary.

pub mod commands;
pub mod output;
pub mod primes;
