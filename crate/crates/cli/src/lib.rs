//! Library surface of the `slitflat` command line tool: the verification
//! suites, shared between the `verify` subcommand and the integration
//! tests.

pub mod checks;
