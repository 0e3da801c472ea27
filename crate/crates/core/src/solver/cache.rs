//! Binary transposition cache: magic, version, board fingerprint, then
//! `(key, winner)` records.

use std::fs::File;
use std::hash::{Hash, Hasher};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::Engine;
use crate::error::{Error, Result};
use crate::game::Board;

const MAGIC: &[u8; 4] = b"MBTC";
pub const CACHE_VERSION: u32 = 1;

/// Stable hash of the goal copies and rules. Caches are only reused for an
/// identical fingerprint.
pub fn board_fingerprint(board: &Board) -> u64 {
    // FNV-1a over a canonical byte stream; std's hasher is not stable
    // across releases.
    struct Fnv(u64);
    impl Hasher for Fnv {
        fn finish(&self) -> u64 {
            self.0
        }
        fn write(&mut self, bytes: &[u8]) {
            for b in bytes {
                self.0 ^= *b as u64;
                self.0 = self.0.wrapping_mul(0x100000001b3);
            }
        }
    }
    let mut h = Fnv(0xcbf29ce484222325);
    (board.edge_count() as u64).hash(&mut h);
    for s in board.winning_sets() {
        (s.len() as u64).hash(&mut h);
        for &(e, r) in s {
            e.hash(&mut h);
            (r as u8).hash(&mut h);
        }
    }
    let c = board.config;
    (c.maker_bias as u64, c.breaker_bias as u64, c.handicap as u64, c.maker_moves_first).hash(&mut h);
    h.finish()
}

pub fn save_cache(engine: &Engine, board: &Board, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&board_fingerprint(board).to_le_bytes())?;
    let table = engine.table();
    w.write_all(&(table.len() as u64).to_le_bytes())?;
    let mut entries: Vec<_> = table.iter().collect();
    entries.sort_unstable_by_key(|(k, _)| **k);
    for ((code, ledger), &v) in entries {
        w.write_all(&code.to_le_bytes())?;
        w.write_all(&ledger.to_le_bytes())?;
        w.write_all(&[v as u8])?;
    }
    w.flush()?;
    Ok(())
}

/// Loads records into `engine`. Returns the number loaded; a missing file
/// loads nothing.
pub fn load_cache(engine: &mut Engine, board: &Board, path: &Path) -> Result<usize> {
    if !path.exists() {
        return Ok(0);
    }
    let mut r = BufReader::new(File::open(path)?);
    let bad = |m: &str| Error::InvalidConfig(format!("cache {}: {m}", path.display()));
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("not a cache file"));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    let mut b16 = [0u8; 16];
    r.read_exact(&mut b4)?;
    if u32::from_le_bytes(b4) != CACHE_VERSION {
        return Err(bad("version mismatch"));
    }
    r.read_exact(&mut b8)?;
    if u64::from_le_bytes(b8) != board_fingerprint(board) {
        return Err(bad("written for a different board"));
    }
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8);
    let table = engine.table_mut();
    for _ in 0..n {
        r.read_exact(&mut b16)?;
        r.read_exact(&mut b4)?;
        let mut v = [0u8; 1];
        r.read_exact(&mut v)?;
        table.insert((u128::from_le_bytes(b16), u32::from_le_bytes(b4)), v[0] != 0);
    }
    Ok(n as usize)
}
