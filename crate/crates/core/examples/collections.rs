//! Enumerates the small triangle collections and prints their atlas.
use mbt::collections::{verify_classification, write_atlas};

fn main() -> mbt::Result<()> {
    let r = verify_classification()?;
    println!("pass={} non-basic={:?} basic={:?}", r.pass, r.minimal, r.basic);
    write_atlas(&r.classes, std::io::stdout())?;
    Ok(())
}
