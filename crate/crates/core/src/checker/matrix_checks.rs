use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::random::{banded_rank, gaussian, gaussian_vector, unitary};
use crate::matrix::{
    bc_core_ep, bc_core_ep_candidate, bc_core_ep_index, bc_core_ep_per_k, bc_inverse, closed_forms,
    direct_sum_check, dual_bc_core_ep, i13_family, pinv, rank, solve_constrained, vector_norm,
    ComplexMatrix, MatrixError, Tolerances,
};

use super::{Counterexample, TheoremCheck};

pub const MATRIX_CHECK_IDS: [&str; 8] = [
    "matrix_rank_criterion",
    "matrix_formula_agreement",
    "matrix_per_k_agreement",
    "matrix_projector_identity",
    "matrix_direct_sum",
    "matrix_least_squares",
    "matrix_specializations",
    "matrix_dual_residuals",
];

/// Seeded family of random triples `(A, B, C)` with an admissible `k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSweep {
    pub seed: u64,
    pub count: usize,
    pub n: usize,
    /// Random `{1,3}`-inverse realizations tried per instance, besides the pseudoinverse.
    pub realizations: usize,
    /// Feasible competitors per least-squares instance.
    pub candidates: usize,
    /// Absolute agreement threshold.
    pub tol: f64,
}

impl Default for MatrixSweep {
    fn default() -> Self {
        MatrixSweep {
            seed: 0,
            count: 200,
            n: 4,
            realizations: 4,
            candidates: 1000,
            tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixInstance {
    pub index: usize,
    pub pattern: &'static str,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
}

/// Nilpotent Jordan block of size `s` in the top-left corner of an `n × n` zero matrix.
fn nilpotent(n: usize, s: usize) -> ComplexMatrix {
    (1..s).fold(ComplexMatrix::zeros(n, n), |m, i| {
        &m + &ComplexMatrix::unit(n, i - 1, i)
    })
}

fn draw(
    rng: &mut ChaCha8Rng,
    n: usize,
    pattern: usize,
) -> (&'static str, ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let band = |rng: &mut ChaCha8Rng, r| banded_rank(rng, n, r, 0.5, 2.0);
    match pattern {
        0 => {
            // Unitary similarity of (nilpotent ⊕ invertible), with B = C = I.
            let s = rng.random_range(0..=n);
            let mut core = nilpotent(n, s);
            if s < n {
                let inv = banded_rank(rng, n - s, n - s, 0.5, 2.0);
                let block = nalgebra::DMatrix::from_fn(n, n, |i, j| {
                    if i >= s && j >= s {
                        inv.get(i - s, j - s)
                    } else {
                        core.get(i, j)
                    }
                });
                core = ComplexMatrix::new(block).expect("finite entries");
            }
            let q = unitary(rng, n);
            let a = &(&q * &core) * &q.adjoint();
            (
                "nilpotent_plus_invertible",
                a,
                ComplexMatrix::identity(n),
                ComplexMatrix::identity(n),
            )
        }
        1 => {
            let r = rng.random_range(0..n);
            ("deficient_c", band(rng, n), band(rng, n), band(rng, r))
        }
        _ => {
            let mut r = || rng.random_range(0..=n);
            let (ra, rb, rc) = (r(), r(), r());
            ("random_ranks", band(rng, ra), band(rng, rb), band(rng, rc))
        }
    }
}

pub const MAX_POWER_CONDITION: f64 = 1e6;

/// `σ_1 / σ_r` of `(CA)^{n+1}`, with `r` its numerical rank; 1 for the zero matrix.
fn power_condition(a: &ComplexMatrix, c: &ComplexMatrix, n: usize) -> f64 {
    let ca = c * a;
    let f = n + 1;
    let cut = Tolerances::default().product_cut(n, 2 * f, ca.spectral_norm().powi(f as i32));
    let p = rank(&ca.pow(f), cut).expect("valid cut");
    match p.rank {
        0 => 1.0,
        r => p.singular_values[0] / p.singular_values[r - 1],
    }
}

impl MatrixSweep {
    /// Instance `i`, redrawn from its own stream until some `k ≤ n` is admissible
    /// and `(CA)^{n+1}` has condition number at most [`MAX_POWER_CONDITION`] on its range.
    ///
    /// The second condition keeps `‖X‖` moderate at every `k ≤ n`, without
    /// which no absolute residual threshold is attainable.
    pub fn instance(&self, index: usize) -> MatrixInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(
            self.seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(index as u64),
        );
        let tol = Tolerances::default();
        loop {
            let (pattern, a, b, c) = draw(&mut rng, self.n, index % 3);
            let scan = bc_core_ep_index(&a, &b, &c, None, &tol).expect("square triple");
            if scan.index().is_some() && power_condition(&a, &c, self.n) <= MAX_POWER_CONDITION {
                return MatrixInstance {
                    index,
                    pattern,
                    a,
                    b,
                    c,
                };
            }
        }
    }

    pub fn instances(&self) -> Vec<MatrixInstance> {
        (0..self.count)
            .into_par_iter()
            .map(|i| self.instance(i))
            .collect()
    }

    fn universe(&self) -> String {
        format!(
            "matrix:n={}:seed={}:count={}",
            self.n, self.seed, self.count
        )
    }

    fn rng_for(&self, inst: &MatrixInstance, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(
            self.seed ^ (inst.index as u64).wrapping_mul(0x2545_f491_4f6c_dd1d) ^ salt,
        )
    }
}

type Eval = fn(&MatrixSweep, &MatrixInstance) -> Result<Option<String>, MatrixError>;

fn eval_for(id: &str) -> Option<Eval> {
    Some(match id {
        "matrix_rank_criterion" => rank_criterion,
        "matrix_formula_agreement" => formula_agreement,
        "matrix_per_k_agreement" => per_k_agreement,
        "matrix_projector_identity" => projector_identity,
        "matrix_direct_sum" => direct_sum,
        "matrix_least_squares" => least_squares,
        "matrix_specializations" => specializations,
        "matrix_dual_residuals" => dual_residuals,
        _ => return None,
    })
}

/// Runs one matrix check over `sweep`; `None` for an unknown id.
pub fn run_matrix_check(
    sweep: &MatrixSweep,
    id: &str,
    instances: &[MatrixInstance],
) -> Option<TheoremCheck> {
    let eval = eval_for(id)?;
    let mut failures: Vec<Counterexample> = instances
        .par_iter()
        .filter_map(|inst| {
            let detail = match eval(sweep, inst) {
                Ok(None) => return None,
                Ok(Some(d)) => d,
                Err(e) => e.to_string(),
            };
            Some(Counterexample {
                elements: vec![inst.index],
                k: None,
                detail: format!("{}: {detail}", inst.pattern),
            })
        })
        .collect();
    failures.sort_by_key(|f| f.elements[0]);
    Some(TheoremCheck::from_failures(
        id,
        sweep.universe(),
        instances.len() as u64,
        failures,
    ))
}

/// Every matrix check over the instances of `sweep`.
pub fn matrix_checks(sweep: &MatrixSweep) -> Vec<TheoremCheck> {
    let instances = sweep.instances();
    MATRIX_CHECK_IDS
        .iter()
        .filter_map(|id| run_matrix_check(sweep, id, &instances))
        .collect()
}

fn over(what: &str, value: f64, limit: f64) -> Option<String> {
    (value > limit || value.is_nan()).then(|| format!("{what} = {value:.3e} exceeds {limit:.0e}"))
}

fn rank_criterion(sw: &MatrixSweep, i: &MatrixInstance) -> Result<Option<String>, MatrixError> {
    let tol = Tolerances {
        verify: sw.tol,
        ..Tolerances::default()
    };
    let scan = bc_core_ep_index(&i.a, &i.b, &i.c, None, &tol)?;
    for row in &scan.table {
        let cand = bc_core_ep_candidate(&i.a, &i.b, &i.c, row.k, &tol)?;
        if cand.verified() != row.admissible {
            return Ok(Some(format!(
                "k = {}: ranks ({}, {}, {}) but the candidate residual is {:.3e}",
                row.k,
                row.rank_kb,
                row.rank_kc,
                row.rank_next_b,
                cand.max_residual()
            )));
        }
    }
    Ok(None)
}

fn formula_agreement(sw: &MatrixSweep, i: &MatrixInstance) -> Result<Option<String>, MatrixError> {
    let tol = Tolerances::default();
    let sol = bc_core_ep(&i.a, &i.b, &i.c, None, &tol)?;
    let check = |f: crate::matrix::ClosedForms, label: &str| {
        over(&format!("{label} spread"), f.max_spread(), sw.tol).or_else(|| {
            over(
                &format!("{label} gap to X"),
                f.via_kc.max_abs_diff(&sol.inverse),
                sw.tol,
            )
        })
    };
    let f = closed_forms(&i.a, &i.b, &i.c, sol.k, &tol, pinv)?;
    if let Some(e) = check(f, "pseudoinverse") {
        return Ok(Some(e));
    }
    let mut rng = sw.rng_for(i, 1);
    for r in 0..sw.realizations {
        let scale = 1.0 / sw.n as f64;
        let f = closed_forms(&i.a, &i.b, &i.c, sol.k, &tol, |m, cut| {
            let z = gaussian(&mut rng, m.ncols(), m.nrows()).scale(scale);
            i13_family(m, &z, cut)
        })?;
        if let Some(e) = check(f, &format!("realization {r}")) {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

fn per_k_agreement(sw: &MatrixSweep, i: &MatrixInstance) -> Result<Option<String>, MatrixError> {
    let per_k = bc_core_ep_per_k(&i.a, &i.b, &i.c, None, &Tolerances::default())?;
    Ok(over(
        "largest gap between admissible k",
        per_k.max_disagreement,
        sw.tol,
    ))
}

fn projector_identity(_: &MatrixSweep, i: &MatrixInstance) -> Result<Option<String>, MatrixError> {
    let sol = bc_core_ep(&i.a, &i.b, &i.c, None, &Tolerances::default())?;
    Ok((!sol.verified()).then(|| {
        let worst = sol
            .residuals
            .iter()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .expect("residuals");
        format!(
            "{} = {:.3e} exceeds {:.3e}",
            worst.0, worst.1, sol.tolerance
        )
    }))
}

fn direct_sum(_: &MatrixSweep, i: &MatrixInstance) -> Result<Option<String>, MatrixError> {
    let tol = Tolerances::default();
    let sol = bc_core_ep(&i.a, &i.b, &i.c, None, &tol)?;
    let r = direct_sum_check(&i.a, &i.b, &i.c, &sol, &tol)?;
    Ok((!r.holds()).then(|| format!("{r:?}")))
}

fn least_squares(sw: &MatrixSweep, i: &MatrixInstance) -> Result<Option<String>, MatrixError> {
    let tol = Tolerances::default();
    let mut rng = sw.rng_for(i, 2);
    let rhs = gaussian_vector(&mut rng, sw.n);
    let sol = solve_constrained(&i.a, &i.b, &i.c, &rhs, &tol)?;
    for (name, &v) in &sol.residuals {
        if let Some(e) = over(name, v, sw.tol) {
            return Ok(Some(e));
        }
    }
    let ca = &i.c * &i.a;
    let misfit = |x: &[Complex64]| {
        let r: Vec<Complex64> = ca.apply(x).iter().zip(&rhs).map(|(u, v)| u - v).collect();
        vector_norm(&r)
    };
    let best = misfit(&sol.x);
    let q = &ca.pow(sol.k) * &i.b;
    for t in 0..sw.candidates {
        let w = gaussian_vector(&mut rng, sw.n);
        let other = misfit(&q.apply(&w));
        if other < best - sw.tol {
            return Ok(Some(format!(
                "candidate {t} has misfit {other:.6e} < {best:.6e}"
            )));
        }
    }
    let p = bc_core_ep(&i.a, &i.b, &i.c, Some(sol.k), &tol)?
        .projector
        .apply(&rhs);
    let gap: Vec<Complex64> = ca
        .apply(&sol.x)
        .iter()
        .zip(&p)
        .map(|(u, v)| u - v)
        .collect();
    Ok(over("‖CAx − P b‖", vector_norm(&gap), sw.tol))
}

fn specializations(sw: &MatrixSweep, i: &MatrixInstance) -> Result<Option<String>, MatrixError> {
    let tol = Tolerances::default();
    let n = sw.n;
    let scan = bc_core_ep_index(&i.a, &i.b, &i.c, None, &tol)?;
    if scan.members.first() == Some(&0) {
        // At k = 0 this is the (B,C)-core inverse A^(B,C) C†.
        let x = bc_core_ep(&i.a, &i.b, &i.c, Some(0), &tol)?.inverse;
        let y = &bc_inverse(&i.a, &i.b, &i.c, &tol)?.inverse * &pinv(&i.c, None)?;
        if let Some(e) = over("k = 0 gap to A^(B,C) C†", x.max_abs_diff(&y), sw.tol) {
            return Ok(Some(e));
        }
    }
    // Core-EP inverse of A as the (I, I)-core-EP inverse.
    let id = ComplexMatrix::identity(n);
    let sol = bc_core_ep(&i.a, &id, &id, None, &tol)?;
    let k = sol.k;
    let na = i.a.spectral_norm();
    let cut = |f: usize| tol.product_cut(n, f, na.powi(f as i32));
    let ak = i.a.pow(k);
    let drazin = &(&ak * &pinv(&i.a.pow(2 * k + 1), cut(2 * k + 1))?) * &ak;
    let core_ep = &(&drazin * &ak) * &pinv(&ak, cut(k))?;
    Ok(over(
        "gap to A^D A^k (A^k)†",
        sol.inverse.max_abs_diff(&core_ep),
        sw.tol,
    ))
}

fn dual_residuals(_: &MatrixSweep, i: &MatrixInstance) -> Result<Option<String>, MatrixError> {
    let tol = Tolerances::default();
    let primal = bc_core_ep(&i.a, &i.b, &i.c, None, &tol)?;
    let d = dual_bc_core_ep(&i.a, &i.b, &i.c, None, &tol)?;
    if d.k != primal.k {
        return Ok(Some(format!(
            "dual index {} differs from {}",
            d.k, primal.k
        )));
    }
    Ok((!d.verified()).then(|| format!("{:?} against {:.3e}", d.residuals, d.tolerance)))
}
