//! Recompute the reference tables of supporting forms and their values.

use tropical_pants::tables::verify_tables;

fn main() -> tropical_pants::Result<()> {
    let report = verify_tables()?;
    println!("{}", report.summary());
    println!("forms checked: {}, lift values checked: {}", report.forms_checked, report.lift_values_checked);
    Ok(())
}
