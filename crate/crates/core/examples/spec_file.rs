//! Writing and reading a paradox file, here the three-qubit Mermin paradox.

use ghzlab::paradox::{ParadoxSpec, Relation, Sign};
use ghzlab::quantum::GlobalObservable;
use ghzlab::specfile::SpecFile;

fn main() -> ghzlab::Result<()> {
    let base = ghzlab::assets::mermin_3q();
    let mut relations = base.relations.clone();
    relations.push(Relation::new(GlobalObservable::paulis("ZZI")?, Sign::Plus));
    let f = SpecFile::new(ParadoxSpec::new("mermin-3q-plus-zz", 3, relations)?);
    let text = f.to_json()?;
    println!("{text}");
    let back: SpecFile = text.parse()?;
    println!("reloaded {} relations, equal: {}", back.spec.len(), back.spec == f.spec);
    Ok(())
}
