//! Runs the quick ledger checks and prints their status.
use mbt::verify::run_check;

fn main() -> mbt::Result<()> {
    for name in ["k4-handicap", "w4-handicap", "k5minus", "classification", "min-density-k3"] {
        let r = run_check(name, None)?;
        println!("{:?} {name} {:.3}s", r.status, r.runtime.as_secs_f64());
    }
    Ok(())
}
