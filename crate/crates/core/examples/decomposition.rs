//! Lower-orthant subset coefficients, the decomposed estimator and the
//! empirical-process integral, all on one sample.
//!
//! ```bash
//! cargo run --release --example decomposition
//! ```

use dirrho::estimator::{rho_hat_decomposed, rho_hat_directional, rho_hat_minus_subset};
use dirrho::process::{empirical_process, estimator_via_process_integral, EmpiricalProcessSpec};
use dirrho::seed::stream;
use dirrho::{compute_ranks, CopulaModel, Direction, Result, TiePolicy};

fn main() -> Result<()> {
    let model = CopulaModel::clayton(4, 1.0)?;
    let ranks = compute_ranks(&model.sample(100, &mut stream(9, &[]))?, TiePolicy::Stable);
    let pseudo = ranks.pseudo_observations();

    for subset in [&[0, 3][..], &[0, 1, 3], &[0, 2, 3], &[0, 1, 2, 3]] {
        let label: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
        println!("rho_hat_minus_{:<5} {:>8.4}", label.join(""), rho_hat_minus_subset(&pseudo, subset)?);
    }

    let alpha: Direction = "(-1,1,1,-1)".parse()?;
    let direct = rho_hat_directional(&ranks, &alpha)?.value;
    let decomposed = rho_hat_decomposed(&ranks, &alpha)?.value;
    let process = estimator_via_process_integral(&ranks, &alpha)?;
    println!("{alpha}");
    println!("  direct      {direct:.12}");
    println!("  decomposed  {decomposed:.12}");
    println!("  process     {process:.12}");

    let spec = EmpiricalProcessSpec::full(&alpha);
    println!("  process at the centre: {:.4}", empirical_process(&ranks, &spec, &[0.5; 4])?);
    Ok(())
}
