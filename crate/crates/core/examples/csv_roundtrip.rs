//! Write a sample to CSV, read it back and produce a report.
//!
//! ```bash
//! cargo run --release --example csv_roundtrip
//! ```

use std::fs::File;

use dirrho::io::{estimate_dataset, ingest_csv, write_data_csv, ColumnSelector, CsvOptions};
use dirrho::seed::stream;
use dirrho::{CopulaModel, Result, TiePolicy};

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("dirrho-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("fgm.csv");

    let model = CopulaModel::fgm(3, 1.0)?;
    write_data_csv(&model.sample(500, &mut stream(3, &[]))?, File::create(&path)?)?;

    let all = ingest_csv(&path, &CsvOptions::default())?;
    let report = estimate_dataset(&all, None, TiePolicy::Stable, false)?;
    println!("{}", report.to_text(4));

    // two columns, selected by name and by position
    let options = CsvOptions {
        columns: Some(vec![ColumnSelector::Name("x1".into()), ColumnSelector::Position(3)]),
        ..CsvOptions::default()
    };
    let pair = ingest_csv(&path, &options)?;
    print!("{}", estimate_dataset(&pair, None, TiePolicy::Stable, false)?.to_csv(4)?);
    Ok(())
}
