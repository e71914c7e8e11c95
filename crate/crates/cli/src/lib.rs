//! Library half of the `hesslab` binary, exposed so tests can drive the
//! reports without spawning a process.

pub mod cache;
pub mod commands;
pub mod output;

pub use cache::{Cache, CacheKey};
pub use commands::{
    analyze, kahler, verify, AnalyzeOptions, AnalyzeReport, CliError, CliResult, Context, KahlerCliReport,
    VerifyOptions, VerifyReport, Witness,
};
pub use output::{Format, Render};
