//! Writing a sweep as CSV and JSON and reading the JSON back.

use ntos::cli::nsweep_table;
use ntos::cli::table::{read_json, write_table, Format};
use ntos::experiments::nsweep;
use ntos::model::ChainParams;

fn main() -> ntos::Result<()> {
    let params = ChainParams::symmetric(2.0, 1.5, 1.0, 1e-7)?;
    let table = nsweep_table(&nsweep(&params, 2, 40)?);
    let dir = std::env::temp_dir().join("ntos-artifacts-example");
    std::fs::create_dir_all(&dir).map_err(|source| ntos::Error::Io { path: dir.clone(), source })?;
    let csv = dir.join("nsweep.csv");
    let json = dir.join("nsweep.json");
    write_table(&table, Format::Csv, &csv)?;
    write_table(&table, Format::Json, &json)?;
    assert_eq!(read_json(&json)?, table);
    println!("{} rows written to {} and {}", table.rows(), csv.display(), json.display());
    print!("{}", table.to_csv()?.lines().take(16).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
