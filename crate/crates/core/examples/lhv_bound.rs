//! Exhaustive LHV bound for the Bell expression of a paradox, its quantum
//! value and the white-noise visibility needed for a violation.
//!
//! Run with a bundled name or a path: `cargo run --example lhv_bound -- table-s1-5q`.

use ghzlab::lhv::{bell_from_paradox, concurrent_value, lhv_bound, threshold_visibility, violation_factor};
use ghzlab::report::load_spec;

fn main() -> ghzlab::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "paper-4q".into());
    let expr = bell_from_paradox(&load_spec(&name)?.spec);
    println!("B = {expr}");
    let b = lhv_bound(&expr)?;
    println!("{} deterministic strategies, LHV range [{}, {}]", b.strategies, b.min_value, b.max_value);
    println!("quantum value: {:.6}", concurrent_value(&expr)?);
    println!("violation factor: {:.6}", violation_factor(&expr)?);
    println!("threshold visibility: {:.6}", threshold_visibility(&expr)?);
    Ok(())
}
