//! Library surface of the command-line tool: the benchmark harness,
//! exposed separately so the timing code is testable.

pub mod bench;
