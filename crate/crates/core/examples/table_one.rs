//! Every reducible paradox of Table I: printed candidate states, the
//! phase-corrected ones, and a reducibility scan.

use ghzlab::assets::{self, TABLE_ONE};
use ghzlab::paradox::{check_candidate, reducibility_scan, ReducibilityOptions};

fn main() -> ghzlab::Result<()> {
    for name in TABLE_ONE {
        let f = assets::load(name)?;
        let dups = f.spec.duplicate_relations();
        println!("{name}: {} relations{}", f.spec.len(), if dups.is_empty() { "" } else { ", duplicated row" });
        for c in &f.candidates {
            let chk = check_candidate(&f.spec, &c.state, &c.bipartition)?;
            println!(
                "  [{}] {}: product {}, relations {:?}",
                c.label.as_deref().unwrap_or("-"),
                chk.bipartition,
                chk.is_product,
                chk.relations
            );
        }
        match reducibility_scan(&f.spec, &ReducibilityOptions::default()) {
            Ok(rep) => {
                let best = rep.best().expect("at least two qubits");
                println!("  scan: {:?} at {} ({:.6})", rep.verdict, best.bipartition, best.best_overlap);
            }
            Err(e) => println!("  scan: {e}"),
        }
    }
    Ok(())
}
