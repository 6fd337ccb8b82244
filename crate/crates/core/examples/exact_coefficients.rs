//! Population coefficients for each supported copula family.
//!
//! ```bash
//! cargo run --release --example exact_coefficients
//! ```

use dirrho::exact::{
    closed_form_mn, exact_rho_many, rho_decomposition_many, rho_directional_definition, IntegratorConfig,
};
use dirrho::{all_directions, CopulaModel, Result};

fn main() -> Result<()> {
    let quad = IntegratorConfig::quadrature(32)?;

    // closed forms
    for spec in ["product:d=3", "comonotone:d=3", "fgm:lambda=0.6:d=3"] {
        let model: CopulaModel = spec.parse()?;
        let dirs = all_directions(model.dim())?;
        println!("{model}");
        for r in exact_rho_many(&model, &dirs, &quad)? {
            println!("  {:<12} {:>9.5}", r.alpha.to_string(), r.estimate.value);
        }
    }

    // comonotone values as exact fractions
    for alpha in all_directions(3)? {
        println!("comonotone {alpha}: {}", closed_form_mn(&alpha)?);
    }

    // Clayton: margin decomposition against direct quadrature of the definition
    let model = CopulaModel::clayton(3, 1.0)?;
    let dirs = all_directions(3)?;
    let decomposed = rho_decomposition_many(&model, &dirs, &quad)?;
    println!("{model}");
    println!("  {:<12} {:>10} {:>10}", "alpha", "decomp", "direct");
    for (alpha, dec) in dirs.iter().zip(&decomposed) {
        let direct = rho_directional_definition(&model, alpha, &quad)?;
        println!("  {:<12} {:>10.5} {:>10.5}", alpha.to_string(), dec.value, direct.value);
    }

    // Monte Carlo with a standard error
    let mc = IntegratorConfig::monte_carlo(200_000, 7)?;
    let r = rho_directional_definition(&model, &dirs[0], &mc)?;
    println!("monte carlo {}: {:.4} (se {:.4})", dirs[0], r.value, r.std_error.unwrap_or(f64::NAN));
    Ok(())
}
