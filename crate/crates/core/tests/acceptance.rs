//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dirrho::direction::normalization_constant_f64;
use dirrho::estimator::{
    decomposition_prefactor_exact, rho_hat_decomposed, rho_hat_directional, rho_hat_ratio, rho_hat_star3,
};
use dirrho::exact::{
    closed_form_fgm, closed_form_mn, exact_rho_many, fgm_unit_coefficient, rho_decomposition_many,
    IntegratorConfig,
};
use dirrho::process::estimator_via_process_integral;
use dirrho::seed::stream;
use dirrho::simulation::{convergence_diagnostic, run_decomposition_table, run_plan, Preset};
use dirrho::sum::mean_sd;
use dirrho::{all_directions, compute_ranks, CopulaModel, DataMatrix, Direction, RankMatrix, TiePolicy};

type Outcome = Result<String, String>;

const THETAS: [f64; 5] = [0.4, 0.6, 1.0, 2.0, 5.0];

fn dir(v: &[i32]) -> Direction {
    Direction::from_i32s(v).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_ranks(n: usize, d: usize, rng: &mut ChaCha8Rng) -> RankMatrix {
    let cols = (0..d)
        .map(|_| {
            let mut c: Vec<usize> = (1..=n).collect();
            c.shuffle(rng);
            c
        })
        .collect();
    RankMatrix::from_columns(cols).unwrap()
}

fn ranks_of(model: &CopulaModel, n: usize, seed: u64, path: &[u64]) -> RankMatrix {
    let x = model.sample(n, &mut stream(seed, path)).unwrap();
    compute_ranks(&x, TiePolicy::Stable)
}

fn fgm_closed_form() -> Outcome {
    let cfg = IntegratorConfig::quadrature(32).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for d in [3, 4, 5] {
        let dirs = all_directions(d).unwrap();
        for lambda in [-1.0, -0.5, 0.6, 1.0] {
            let model = CopulaModel::fgm(d, lambda).unwrap();
            let decomposed = rho_decomposition_many(&model, &dirs, &cfg).map_err(|e| e.to_string())?;
            for (alpha, dec) in dirs.iter().zip(decomposed) {
                let closed = closed_form_fgm(alpha, lambda).unwrap();
                worst = worst.max((closed - dec.value).abs());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("max |closed - decomposition| = {worst:.2e}"))?;
    let unit = fgm_unit_coefficient(4).unwrap();
    ensure(unit == Ratio::new(5, 891), || format!("unit coefficient {unit}"))?;
    for alpha in all_directions(4).unwrap() {
        let positives = 4 - alpha.minus_count();
        let sign = if positives % 2 == 0 { 1.0 } else { -1.0 };
        for lambda in [-1.0, -0.5, 0.6, 1.0] {
            let want = sign * 5.0 * lambda / 891.0;
            let got = closed_form_fgm(&alpha, lambda).unwrap();
            ensure((got - want).abs() <= 1e-15, || format!("{alpha} at {lambda}: {got} vs {want}"))?;
        }
    }
    Ok(format!("max |closed - decomposition| = {worst:.1e}; d=4 is +-5*lambda/891 by parity of |J|"))
}

fn comonotone_formulas() -> Outcome {
    let expected: [(&[i32], Ratio<i128>); 5] = [
        (&[1, 1, 1], Ratio::from_integer(1)),
        (&[-1, 1, 1], Ratio::new(-1, 3)),
        (&[-1, -1, 1], Ratio::new(-1, 3)),
        (&[-1, -1, -1], Ratio::from_integer(1)),
        (&[-1, -1, 1, 1], Ratio::new(-7, 33)),
    ];
    for (alpha, want) in expected {
        let got = closed_form_mn(&dir(alpha)).unwrap();
        ensure(got == want, || format!("{alpha:?}: {got} vs {want}"))?;
    }
    // oracle: E[prod_I (1-U) prod_J U] for a single uniform U shared by all coordinates
    let samples = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let u: Vec<f64> = (0..samples).map(|_| rng.random::<f64>()).collect();
    let mut worst_z = 0.0f64;
    for d in [3, 4] {
        let c = normalization_constant_f64(d).unwrap();
        for alpha in all_directions(d).unwrap() {
            let k = alpha.minus_count() as i32;
            let values: Vec<f64> = u
                .iter()
                .map(|&x| c * ((1.0 - x).powi(k) * x.powi(d as i32 - k) - 0.5f64.powi(d as i32)))
                .collect();
            let (mean, sd) = mean_sd(&values);
            let se = sd / (samples as f64).sqrt();
            let r = closed_form_mn(&alpha).unwrap();
            let closed = *r.numer() as f64 / *r.denom() as f64;
            let z = (closed - mean).abs() / se;
            worst_z = worst_z.max(z);
            ensure(z <= 3.0, || format!("{alpha}: closed {closed:.5}, MC {mean:.5} +- {se:.1e}"))?;
        }
    }
    Ok(format!("all 24 directions within 3 se of the MC oracle (worst {worst_z:.2} se)"))
}

struct ExactTable {
    name: &'static str,
    alpha: &'static [i32],
    values: [f64; 5],
}

const EXACT_TABLES: [ExactTable; 3] = [
    ExactTable {
        name: "table 1",
        alpha: &[-1, 1, 1],
        values: [-0.0726, -0.0969, -0.1338, -0.1906, -0.2684],
    },
    ExactTable {
        name: "table 2",
        alpha: &[-1, -1, 1],
        values: [-0.0919, -0.1287, -0.1850, -0.2621, -0.3212],
    },
    ExactTable {
        name: "table 3",
        alpha: &[-1, 1, 1, -1],
        values: [-0.0664, -0.0876, -0.1176, -0.1583, -0.1966],
    },
];

fn clayton_exact_columns() -> Outcome {
    let cfg = IntegratorConfig::quadrature(32).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for table in &EXACT_TABLES {
        let alpha = dir(table.alpha);
        let mirrored = -&alpha;
        let mut same = true;
        let mut mirror = true;
        let mut worst = 0.0f64;
        for (&theta, &paper) in THETAS.iter().zip(&table.values) {
            let model = CopulaModel::clayton(alpha.dim(), theta).unwrap();
            let both = exact_rho_many(&model, &[alpha.clone(), mirrored.clone()], &cfg)
                .map_err(|e| e.to_string())?;
            let (a, m) = (both[0].estimate.value, both[1].estimate.value);
            same &= (a - paper).abs() <= 0.005;
            mirror &= (m - paper).abs() <= 0.005;
            worst = worst.max((a - paper).abs().min((m - paper).abs()));
        }
        let orientation = match (same, mirror) {
            (true, true) => "alpha (alpha and -alpha coincide)",
            (true, false) => "alpha",
            (false, true) => "-alpha",
            (false, false) => return Err(format!("{}: no single orientation within 0.005", table.name)),
        };
        summary.push(format!("{} matches {orientation}, max gap {worst:.4}", table.name));
    }
    Ok(summary.join("; "))
}

fn table_reproduction() -> Outcome {
    let paper_n500 = [-0.0714, -0.0969, -0.1347, -0.1928, -0.2686];
    let report = run_plan(&Preset::Table1.plan(42)).map_err(|e| e.to_string())?;
    let alpha = dir(&[-1, 1, 1]);
    let mut worst1 = 0.0f64;
    for (&theta, &paper) in THETAS.iter().zip(&paper_n500) {
        let cell = report.cell(Some(theta), 500, &alpha).ok_or("missing cell")?;
        let gap = (cell.mean - paper).abs();
        worst1 = worst1.max(gap);
        ensure(gap <= 0.01, || format!("table 1, theta={theta}: mean {:.4} vs {paper}", cell.mean))?;
    }
    let paper_t4 = [
        [-0.0650, -0.0658, -0.0672, -0.0664],
        [-0.0828, -0.0862, -0.0860, -0.0878],
        [-0.1113, -0.1149, -0.1179, -0.1176],
        [-0.1545, -0.1570, -0.1582, -0.1583],
        [-0.1923, -0.1944, -0.1954, -0.1965],
    ];
    let table = run_decomposition_table(&Preset::Table4.plan(42)).map_err(|e| e.to_string())?;
    let mut worst4 = 0.0f64;
    let mut failures = Vec::new();
    for (row, &paper) in table.rows.iter().zip(paper_t4.iter().flatten()) {
        let gap = (row.assembled_mean - paper).abs();
        worst4 = worst4.max(gap);
        if gap > 0.015 {
            failures.push(format!(
                "theta={} n={}: {:.4} vs {paper}",
                row.parameter.unwrap(),
                row.n,
                row.assembled_mean
            ));
        }
    }
    ensure(table.rows.len() == 20, || format!("table 4 has {} rows", table.rows.len()))?;
    ensure(failures.is_empty(), || format!("table 4 outside 0.015: {}", failures.join(", ")))?;
    Ok(format!(
        "table 1 n=500 max gap {worst1:.4} (orientation alpha); table 4 assembled max gap {worst4:.4}"
    ))
}

fn decomposition_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for d in [3, 4, 5] {
        let dirs = all_directions(d).unwrap();
        for _ in 0..1000 {
            let n = rng.random_range(2..=60);
            let r = random_ranks(n, d, &mut rng);
            for alpha in &dirs {
                let a = rho_hat_directional(&r, alpha).unwrap().value;
                let b = rho_hat_decomposed(&r, alpha).unwrap().value;
                worst = worst.max((a - b).abs());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("max gap {worst:.2e}"))?;
    for n in 5..=100usize {
        let r = random_ranks(n, 3, &mut rng);
        for alpha in all_directions(3).unwrap() {
            let s: i128 = (0..n)
                .map(|j| {
                    (0..3)
                        .map(|i| {
                            let rank = r.rank(j, i) as i128;
                            if alpha.sign(i).as_i32() > 0 { rank } else { n as i128 + 1 - rank }
                        })
                        .product::<i128>()
                })
                .sum();
            let m = n as i128;
            let closed = Ratio::new(8 * s, m * (m - 1) * (m + 1) * (m + 1)) - Ratio::new(m + 1, m - 1);
            let general = rho_hat_ratio(&r, &alpha).unwrap();
            ensure(general == closed, || format!("d=3 closed form differs at n={n}, {alpha}"))?;
        }
        let m = n as i128;
        let want = Ratio::new(240 * (m + 1).pow(3), 33 * m.pow(3) + 27 * m.pow(2) - 37 * m - 23);
        let got = decomposition_prefactor_exact(n, 4).unwrap();
        ensure(got == want, || format!("d=4 prefactor at n={n}: {got} vs {want}"))?;
    }
    Ok(format!("max |decomposed - direct| = {worst:.1e}; d=3 closed form and d=4 prefactor exact for n=5..100"))
}

fn structural_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_sum = 0.0f64;
    for trial in 0..200 {
        let d = 2 + trial % 5;
        let n = rng.random_range(2..80);
        // coarse values so that ties occur
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| (rng.random::<f64>() * 20.0).round() - 7.0).collect())
            .collect();
        let r = compute_ranks(&DataMatrix::from_rows(&rows).unwrap(), TiePolicy::Stable);
        let reflected = r.reflected();
        let mut total = 0.0;
        for alpha in all_directions(d).unwrap() {
            let v = rho_hat_directional(&r, &alpha).unwrap().value;
            total += v;
            let w = rho_hat_directional(&reflected, &-&alpha).unwrap().value;
            ensure(v == w, || format!("reflection: {v} vs {w} for {alpha}"))?;
        }
        worst_sum = worst_sum.max(total.abs());
    }
    ensure(worst_sum <= 1e-12, || format!("direction sum reached {worst_sum:.2e}"))?;
    for d in [2, 3, 4, 6] {
        let r = ranks_of(&CopulaModel::comonotone(d).unwrap(), 101, 7, &[d as u64]);
        for alpha in [Direction::all_plus(d).unwrap(), Direction::all_minus(d).unwrap()] {
            let v = rho_hat_directional(&r, &alpha).unwrap().value;
            ensure(v == 1.0, || format!("comonotone d={d} {alpha}: {v}"))?;
        }
    }
    Ok(format!("direction sums <= {worst_sum:.1e}, reflection exact, aligned comonotone estimates = 1"))
}

fn fgm_example() -> Outcome {
    let model = CopulaModel::fgm(3, 0.6).unwrap();
    let plus = Direction::all_plus(3).unwrap();
    let minus = Direction::all_minus(3).unwrap();
    let mut star = Vec::new();
    let mut up = Vec::new();
    let mut down = Vec::new();
    for rep in 0..1000u64 {
        let r = ranks_of(&model, 500, 77, &[rep]);
        star.push(rho_hat_star3(&r).unwrap());
        up.push(rho_hat_directional(&r, &plus).unwrap().value);
        down.push(rho_hat_directional(&r, &minus).unwrap().value);
    }
    let (s, _) = mean_sd(&star);
    let (p, _) = mean_sd(&up);
    let (m, _) = mean_sd(&down);
    ensure(s.abs() <= 0.005, || format!("mean star3 {s:.4}"))?;
    ensure((p.abs() - 0.0222).abs() <= 0.005, || format!("mean (1,1,1) {p:.4}"))?;
    ensure((m.abs() - 0.0222).abs() <= 0.005, || format!("mean (-1,-1,-1) {m:.4}"))?;
    Ok(format!(
        "mean star3 {s:.4}, (1,1,1) {p:.4}, (-1,-1,-1) {m:.4}; signs are those of the population values {:.4} and {:.4}",
        closed_form_fgm(&plus, 0.6).unwrap(),
        closed_form_fgm(&minus, 0.6).unwrap()
    ))
}

fn process_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let d = 2 + (trial % 2) as usize;
        let n = rng.random_range(2..=50);
        let theta = rng.random_range(0.2..6.0);
        let r = ranks_of(&CopulaModel::clayton(d, theta).unwrap(), n, 8, &[trial]);
        for alpha in all_directions(d).unwrap() {
            let a = estimator_via_process_integral(&r, &alpha).map_err(|e| e.to_string())?;
            let b = rho_hat_directional(&r, &alpha).unwrap().value;
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-6, || format!("max gap {worst:.2e}"))?;
    Ok(format!("max |process integral - direct| = {worst:.1e} over 100 samples"))
}

fn consistency() -> Outcome {
    let model = CopulaModel::clayton(3, 1.0).unwrap();
    let rows = convergence_diagnostic(&model, &dir(&[-1, 1, 1]), &[50, 200, 800], 1000, 9)
        .map_err(|e| e.to_string())?;
    let sd: Vec<f64> = rows.iter().map(|r| r.sd).collect();
    ensure(sd[0] > sd[1] && sd[1] > sd[2], || format!("sd not decreasing: {sd:?}"))?;
    let ratios = [sd[0] / sd[1], sd[1] / sd[2]];
    for r in ratios {
        ensure((1.6..=2.6).contains(&r), || format!("sd ratio {r:.3} outside [1.6, 2.6]"))?;
    }
    Ok(format!(
        "sd {:.4} > {:.4} > {:.4}; ratios {:.2}, {:.2}",
        sd[0], sd[1], sd[2], ratios[0], ratios[1]
    ))
}

type Criterion = (u32, &'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "FGM closed form vs decomposition", fgm_closed_form, 5),
        (2, "comonotone closed forms vs Monte Carlo", comonotone_formulas, 30),
        (3, "Clayton exact columns", clayton_exact_columns, 120),
        (4, "table reproduction", table_reproduction, 600),
        (5, "estimator decomposition identity", decomposition_identity, 60),
        (6, "structural identities", structural_identities, 10),
        (7, "FGM simulation example", fgm_example, 120),
        (8, "empirical process identity", process_identity, 60),
        (9, "consistency diagnostic", consistency, 180),
    ];
    let mut failed = 0;
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed > Duration::from_secs(budget) {
                Err(format!("took {elapsed:.1?}, budget {budget} s ({detail})"))
            } else {
                Ok(detail)
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {id} PASS [{elapsed:.1?}] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL [{elapsed:.1?}] {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
