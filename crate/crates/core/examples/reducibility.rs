//! Best product-state overlap with the common eigenspace across every
//! bipartition. The four-qubit paradox stays at 1/2 everywhere; the GHZ row
//! of Table I collapses onto a product across {1}|{2,3,4}.

use ghzlab::paradox::{reducibility_scan, ReducibilityOptions};
use ghzlab::report::load_spec;

fn main() -> ghzlab::Result<()> {
    let opts = ReducibilityOptions::default();
    for name in ["paper-4q", "table-s1-4q-row2"] {
        let spec = load_spec(name)?.spec;
        let rep = reducibility_scan(&spec, &opts)?;
        println!("{name}: eigenspace dimension {}, verdict {:?}", rep.eigenspace_dim, rep.verdict);
        for r in &rep.records {
            println!("  {:<12} {:.9} ({:?})", r.bipartition.to_string(), r.best_overlap, r.method);
        }
    }
    Ok(())
}
