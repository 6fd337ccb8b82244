//! A reduced simulation study: replicate means against population values,
//! the decomposition table, and the root-n convergence check.
//!
//! ```bash
//! cargo run --release --example simulation_study
//! ```

use dirrho::simulation::{convergence_diagnostic, run_decomposition_table, run_plan, Preset};
use dirrho::{CopulaModel, Direction, Result};

fn main() -> Result<()> {
    let plan = Preset::Table1.plan(2024).with_replicates(100);
    println!("{}", run_plan(&plan)?.to_text(4));

    let plan = Preset::Table4.plan(2024).with_replicates(50);
    println!("{}", run_decomposition_table(&plan)?.to_text(4));

    let model = CopulaModel::clayton(3, 1.0)?;
    let alpha: Direction = "-++".parse()?;
    println!("{:>6} {:>9} {:>9} {:>12}", "n", "mean", "sd", "sd*sqrt(n)");
    for row in convergence_diagnostic(&model, &alpha, &[50, 200, 800], 200, 5)? {
        println!("{:>6} {:>9.4} {:>9.4} {:>12.4}", row.n, row.mean, row.sd, row.scaled_sd);
    }
    Ok(())
}
