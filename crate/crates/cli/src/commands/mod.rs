pub mod constants;
pub mod norm;
pub mod report;
pub mod simulate;
pub mod transform;

use anyhow::Result;

use crate::args::Command;
use crate::output::emit;

/// Runs one subcommand and writes its outputs; `Ok(false)` means a
/// numerical gate failed.
pub fn run(cmd: &Command) -> Result<bool> {
    let (rec, out, id) = match cmd {
        Command::Transform(a) => (transform::run(a)?, &a.out, &a.id),
        Command::NormEstimate(a) => (norm::run(a)?, &a.out, &a.id),
        Command::Simulate(a) => (simulate::run(a)?, &a.out, &a.id),
        Command::Constants(a) => (constants::run(a)?, &a.out, &a.id),
        Command::Report(a) => (report::run(a)?, &a.out, &a.id),
    };
    emit(&rec, out.as_deref(), id.as_deref())?;
    Ok(rec.gates_ok)
}
