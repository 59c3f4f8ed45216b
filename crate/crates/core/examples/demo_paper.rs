//! The full four-qubit reproduction: verification, bound, simulation,
//! witness and reducibility, with reported and computed values side by side.

fn main() -> ghzlab::Result<()> {
    let out = ghzlab::report::cmd_demo_paper(0)?;
    print!("{}", out.report.to_text());
    Ok(())
}
