use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use super::CopulaModel;
use crate::data::DataMatrix;
use crate::error::{Error, Result};

const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

impl CopulaModel {
    /// Draws `count` i.i.d. rows from the copula. Every value lies in (0, 1).
    ///
    /// Clayton uses the Marshall–Olkin frailty construction and FGM uses
    /// rejection from the uniform proposal with envelope `1 + |λ|`.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<DataMatrix> {
        if count == 0 {
            return Err(Error::Parameter("sample size must be positive".into()));
        }
        let d = self.dim();
        let mut values = Vec::with_capacity(count * d);
        if self.is_effectively_product() {
            values.extend((0..count * d).map(|_| rng.sample::<f64, _>(Open01)));
            return DataMatrix::from_row_major(count, d, values);
        }
        match *self {
            Self::Comonotone { .. } => {
                for _ in 0..count {
                    let v: f64 = rng.sample(Open01);
                    values.extend(std::iter::repeat_n(v, d));
                }
            }
            Self::Fgm { lambda, .. } => {
                let envelope = 1.0 + lambda.abs();
                let mut row = vec![0.0; d];
                for _ in 0..count {
                    loop {
                        row.iter_mut().for_each(|x| *x = rng.sample(Open01));
                        let density = 1.0 + lambda * row.iter().map(|x| 1.0 - 2.0 * x).product::<f64>();
                        if rng.random::<f64>() * envelope < density {
                            break;
                        }
                    }
                    values.extend_from_slice(&row);
                }
            }
            Self::Clayton { theta, .. } => {
                let frailty = Gamma::new(1.0 / theta, 1.0)
                    .map_err(|e| Error::Parameter(format!("Clayton frailty: {e}")))?;
                for _ in 0..count {
                    let w: f64 = frailty.sample(rng);
                    for _ in 0..d {
                        let e: f64 = Exp1.sample(rng);
                        // (1 + E/W)^(-1/θ), kept strictly inside (0, 1)
                        let u = (-(e / w).ln_1p() / theta).exp();
                        values.push(u.clamp(f64::MIN_POSITIVE, BELOW_ONE));
                    }
                }
            }
            Self::Uniform | Self::Product { .. } => unreachable!(),
        }
        DataMatrix::from_row_major(count, d, values)
    }
}

/// Entry-wise `1 − x`. Sampling from C and reflecting samples the survival copula of C.
pub fn survival_reflect(data: &DataMatrix) -> Result<DataMatrix> {
    if let Some(pos) = data.values().iter().position(|&x| !(x > 0.0 && x < 1.0)) {
        let d = data.ncols();
        return Err(Error::OutsideUnitCube(format!(
            "entry at row {}, column {} is {}, expected a value in (0, 1)",
            pos / d,
            pos % d,
            data.values()[pos]
        )));
    }
    data.map(|x| 1.0 - x)
}
