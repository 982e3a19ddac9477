//! Parser and report types behind the `grasspi` binary, exposed for
//! integration tests and embedding.

pub mod parser;
pub mod report;
