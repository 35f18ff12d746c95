use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::linalg::{
    null_basis, pinv, projector, range_basis, range_residual, rank_of, spectral_norm,
};
use super::{vector_norm, ComplexMatrix, MatrixError};

/// Rank cut and residual tolerance shared by the solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Absolute singular-value cut; `None` uses the relative default of [`super::rank`].
    pub rank: Option<f64>,
    /// Residuals must stay below `verify · (1 + ‖inputs‖)`, with `‖inputs‖`
    /// the largest Frobenius norm among `A`, `B`, `C`.
    pub verify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: None,
            verify: 1e-8,
        }
    }
}

impl Tolerances {
    fn bound(&self, inputs: &[&ComplexMatrix]) -> f64 {
        self.verify * (1.0 + inputs.iter().map(|m| m.norm()).fold(0.0, f64::max))
    }

    /// Singular-value cut for a computed product of `factors` matrices whose
    /// spectral norms multiply to `norm_bound`.
    ///
    /// Without an explicit `rank` cut this is `dim · factors · ε · norm_bound`,
    /// a bound on the rounding error of forming the product. A cut relative to
    /// the product's own largest singular value is too small for powers that
    /// shrink, and lets rounding noise count as rank.
    pub fn product_cut(&self, dim: usize, factors: usize, norm_bound: f64) -> Option<f64> {
        self.cut((dim * factors.max(1)) as f64 * f64::EPSILON * norm_bound)
    }

    /// The explicit `rank` cut if set, else `default`.
    fn cut(&self, default: f64) -> Option<f64> {
        Some(self.rank.unwrap_or(default).max(f64::MIN_POSITIVE))
    }
}

fn square_triple(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
) -> Result<usize, MatrixError> {
    let n = a.nrows();
    for (name, m) in [("A", a), ("B", b), ("C", c)] {
        if m.nrows() != n || m.ncols() != n {
            return Err(MatrixError::Dimension(format!(
                "{name} is {}x{}, expected {n}x{n}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(n)
}

/// The computed sequence `X, MX, M²X, ...` for `M = CA`, with a rank cut per term.
struct Chain {
    terms: Vec<ComplexMatrix>,
    cuts: Vec<Option<f64>>,
}

/// `(CA)^j B`, `(CA)^j C` and `(CA)^j` for `j ≤ len`.
///
/// Forming `M·P` in floating point perturbs it by about `n²·ε·‖M‖·‖P‖`, and an
/// error made at step `i` is carried to step `j` by `M^{j-1-i}`. The cut for
/// the term `P_j` is `n²·ε·(‖P_j‖ + Σ_{i<j} ‖M^{j-1-i}‖·(‖M‖ + ‖C‖‖A‖)·‖P_i‖)`,
/// where `‖C‖‖A‖` accounts for the rounding in `M` itself. Bounding by
/// `(‖C‖‖A‖)^j` instead overshoots badly when `‖CA‖` is far above its spectral radius.
struct Chains {
    ca: ComplexMatrix,
    b: Chain,
    c: Chain,
    power: Chain,
}

impl Chains {
    fn new(
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        c: &ComplexMatrix,
        len: usize,
        tol: &Tolerances,
    ) -> Self {
        let n = a.nrows();
        let ca = c * a;
        let step = spectral_norm(&ca) + spectral_norm(c) * spectral_norm(a);
        let run = |x: &ComplexMatrix| -> Vec<ComplexMatrix> {
            std::iter::successors(Some(x.clone()), |p| Some(&ca * p))
                .take(len + 1)
                .collect()
        };
        let powers = run(&ComplexMatrix::identity(n));
        let power_norms: Vec<f64> = powers.iter().map(spectral_norm).collect();
        let chain = |terms: Vec<ComplexMatrix>| -> Chain {
            let norms: Vec<f64> = terms.iter().map(spectral_norm).collect();
            let cuts = (0..terms.len())
                .map(|j| {
                    let carried: f64 = (0..j)
                        .map(|i| power_norms[j - 1 - i] * step * norms[i])
                        .sum();
                    tol.cut((n * n) as f64 * f64::EPSILON * (norms[j] + carried))
                })
                .collect();
            Chain { terms, cuts }
        };
        Chains {
            b: chain(run(b)),
            c: chain(run(c)),
            power: chain(powers),
            ca,
        }
    }
}

/// Rank cuts for `(CA)^k B`, `(CA)^k C`, `(CA)^{k+1} B` and `(CA)^{k+1}`.
#[derive(Clone, Copy)]
struct Cuts {
    kb: Option<f64>,
    kc: Option<f64>,
    next_b: Option<f64>,
    power: Option<f64>,
}

/// `(CA)^k B`, `(CA)^k C` and `(CA)^{k+1} B` for one `k`.
struct Powers {
    ca: ComplexMatrix,
    kb: ComplexMatrix,
    kc: ComplexMatrix,
    next_b: ComplexMatrix,
    cuts: Cuts,
}

impl Powers {
    fn at(
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        c: &ComplexMatrix,
        k: usize,
        tol: &Tolerances,
    ) -> Self {
        let Chains {
            ca,
            b: mut cb,
            c: mut cc,
            power,
        } = Chains::new(a, b, c, k + 1, tol);
        let cuts = Cuts {
            kb: cb.cuts[k],
            kc: cc.cuts[k],
            next_b: cb.cuts[k + 1],
            power: power.cuts[k + 1],
        };
        let next_b = cb.terms.pop().expect("k + 2 terms");
        Powers {
            ca,
            kb: cb.terms.swap_remove(k),
            kc: cc.terms.swap_remove(k),
            next_b,
            cuts,
        }
    }
}

/// Ranks of `(CA)^k B`, `(CA)^k C` and `(CA)^{k+1} B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankRow {
    pub k: usize,
    pub rank_kb: usize,
    pub rank_kc: usize,
    pub rank_next_b: usize,
    pub admissible: bool,
}

impl RankRow {
    fn new(k: usize, rank_kb: usize, rank_kc: usize, rank_next_b: usize) -> Self {
        RankRow {
            k,
            rank_kb,
            rank_kc,
            rank_next_b,
            admissible: rank_kb == rank_kc && rank_kc == rank_next_b,
        }
    }
}

fn format_table(rows: &[RankRow]) -> String {
    rows.iter()
        .map(|r| {
            format!(
                "k={}: ({}, {}, {})",
                r.k, r.rank_kb, r.rank_kc, r.rank_next_b
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn rank_row(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    k: usize,
    tol: &Tolerances,
) -> Result<RankRow, MatrixError> {
    let p = Powers::at(a, b, c, k, tol);
    Ok(RankRow::new(
        k,
        rank_of(&p.kb, p.cuts.kb)?,
        rank_of(&p.kc, p.cuts.kc)?,
        rank_of(&p.next_b, p.cuts.next_b)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexScan {
    pub k_max: usize,
    pub members: Vec<usize>,
    pub table: Vec<RankRow>,
}

impl IndexScan {
    pub fn index(&self) -> Option<usize> {
        self.members.first().copied()
    }
}

/// Every `k ≤ k_max` (default `n`) with `rk((CA)^k B) = rk((CA)^k C) = rk((CA)^{k+1} B)`.
pub fn bc_core_ep_index(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    k_max: Option<usize>,
    tol: &Tolerances,
) -> Result<IndexScan, MatrixError> {
    let n = square_triple(a, b, c)?;
    let k_max = k_max.unwrap_or(n);
    let ch = Chains::new(a, b, c, k_max + 1, tol);
    let table = (0..=k_max)
        .map(|k| {
            Ok(RankRow::new(
                k,
                rank_of(&ch.b.terms[k], ch.b.cuts[k])?,
                rank_of(&ch.c.terms[k], ch.c.cuts[k])?,
                rank_of(&ch.b.terms[k + 1], ch.b.cuts[k + 1])?,
            ))
        })
        .collect::<Result<Vec<_>, MatrixError>>()?;
    let members = table.iter().filter(|r| r.admissible).map(|r| r.k).collect();
    Ok(IndexScan {
        k_max,
        members,
        table,
    })
}

/// The condition equations are identical for the dual inverse; see [`dual_bc_core_ep`].
pub fn dual_bc_core_ep_index(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    k_max: Option<usize>,
    tol: &Tolerances,
) -> Result<IndexScan, MatrixError> {
    bc_core_ep_index(a, b, c, k_max, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoreEpSolution {
    pub k: usize,
    pub inverse: ComplexMatrix,
    /// Orthogonal projector onto the column space of `(CA)^k C`.
    pub projector: ComplexMatrix,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
}

impl CoreEpSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }

    pub fn verified(&self) -> bool {
        self.max_residual() <= self.tolerance
    }
}

fn pick_k(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    k: Option<usize>,
    tol: &Tolerances,
) -> Result<usize, MatrixError> {
    let n = square_triple(a, b, c)?;
    match k {
        Some(k) => {
            let row = rank_row(a, b, c, k, tol)?;
            if row.admissible {
                Ok(k)
            } else {
                Err(MatrixError::NotAdmissible {
                    k,
                    table: format_table(&[row]),
                })
            }
        }
        None => {
            let scan = bc_core_ep_index(a, b, c, Some(n), tol)?;
            scan.index().ok_or_else(|| MatrixError::NotInvertible {
                k_max: n,
                table: format_table(&scan.table),
            })
        }
    }
}

/// `X = (CA)^k B · ((CA)^{k+1} B)†` at `k`, or at the smallest admissible `k ≤ n`.
///
/// The result carries the residual of each defining condition.
pub fn bc_core_ep(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    k: Option<usize>,
    tol: &Tolerances,
) -> Result<CoreEpSolution, MatrixError> {
    let k = pick_k(a, b, c, k, tol)?;
    bc_core_ep_candidate(a, b, c, k, tol)
}

/// The closed form and its residuals at `k`, without checking that `k` is admissible.
///
/// At an inadmissible `k` some residual stays large.
pub fn bc_core_ep_candidate(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    k: usize,
    tol: &Tolerances,
) -> Result<CoreEpSolution, MatrixError> {
    square_triple(a, b, c)?;
    let p = Powers::at(a, b, c, k, tol);
    let x = &p.kb * &pinv(&p.next_b, p.cuts.next_b)?;
    let proj = projector(&p.kc, p.cuts.kc)?;
    let cax = &p.ca * &x;

    let mut residuals = BTreeMap::new();
    let mut put = |name: &str, v: f64| {
        residuals.insert(name.to_string(), v);
    };
    put("cax_kc", (&(&cax * &p.kc) - &p.kc).norm());
    put("x_next_b", (&(&x * &p.next_b) - &p.kb).norm());
    put("cax_hermitian", (&cax - &cax.adjoint()).norm());
    put("cax_idempotent", (&(&cax * &cax) - &cax).norm());
    put("cax_projector", (&cax - &proj).norm());
    put("xcax_x", (&(&x * &cax) - &x).norm());
    put("column_space_kb", range_residual(&x, &p.kb, p.cuts.kb)?);
    put(
        "row_space_kc_star",
        range_residual(&x.adjoint(), &p.kc, p.cuts.kc)?,
    );

    Ok(CoreEpSolution {
        k,
        inverse: x,
        projector: proj,
        residuals,
        tolerance: tol.bound(&[a, b, c]),
    })
}

/// Solutions at every admissible `k ≤ k_max`, with the largest entrywise gap between any two.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerKSolutions {
    pub solutions: Vec<CoreEpSolution>,
    pub max_disagreement: f64,
    /// Set when two admissible `k` give inverses further apart than `threshold`.
    pub disagreement: bool,
    pub threshold: f64,
}

pub fn bc_core_ep_per_k(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    k_max: Option<usize>,
    tol: &Tolerances,
) -> Result<PerKSolutions, MatrixError> {
    let scan = bc_core_ep_index(a, b, c, k_max, tol)?;
    let solutions = scan
        .members
        .iter()
        .map(|&k| bc_core_ep_candidate(a, b, c, k, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let mut max_disagreement: f64 = 0.0;
    for (i, s) in solutions.iter().enumerate() {
        for t in &solutions[i + 1..] {
            max_disagreement = max_disagreement.max(s.inverse.max_abs_diff(&t.inverse));
        }
    }
    let threshold = tol.verify;
    Ok(PerKSolutions {
        solutions,
        max_disagreement,
        disagreement: max_disagreement > threshold,
        threshold,
    })
}

/// Drazin's `(B,C)`-inverse `Y = B (CAB)† C`.
///
/// Requires `col(C) ⊆ col(CAB)` and `row(B) ⊆ row(CAB)`, tested by rank.
pub fn bc_inverse(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<BcSolution, MatrixError> {
    square_triple(a, b, c)?;
    let cab = &(c * a) * b;
    let (na, nb, nc) = (spectral_norm(a), spectral_norm(b), spectral_norm(c));
    let cut = tol.product_cut(a.nrows(), 3, (nc * na * nb).max(nb).max(nc));
    let rank_cab = rank_of(&cab, cut)?;
    let rank_with_c = rank_of(&cab.hstack(c), cut)?;
    let rank_with_b = rank_of(&cab.vstack(b), cut)?;
    if rank_with_c != rank_cab || rank_with_b != rank_cab {
        return Err(MatrixError::NotBcInvertible {
            rank_cab,
            rank_with_c,
            rank_with_b,
        });
    }
    let y = &(b * &pinv(&cab, cut)?) * c;
    let mut residuals = BTreeMap::new();
    residuals.insert("yab_b".to_string(), (&(&(&y * a) * b) - b).norm());
    residuals.insert("cay_c".to_string(), (&(&(c * a) * &y) - c).norm());
    residuals.insert(
        "column_space_b".to_string(),
        range_residual(&y, b, tol.rank)?,
    );
    residuals.insert(
        "row_space_c".to_string(),
        range_residual(&y.adjoint(), &c.adjoint(), tol.rank)?,
    );
    Ok(BcSolution {
        inverse: y,
        residuals,
        tolerance: tol.bound(&[a, b, c]),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BcSolution {
    pub inverse: ComplexMatrix,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
}

impl BcSolution {
    pub fn verified(&self) -> bool {
        self.residuals.values().all(|&r| r <= self.tolerance)
    }
}

/// The three closed forms for the `(B,C)`-core-EP inverse at `k`, each built
/// from `{1,3}`-inverses produced by `g`:
/// `d^{(Q,P)} g(P)`, `d^{(Q,P)} A g((CA)^{k+1})` and `Q g((CA)^{k+1} B)`,
/// where `Q = (CA)^k B`, `P = (CA)^k C` and `d = g(P) CA`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedForms {
    pub via_kc: ComplexMatrix,
    pub via_power: ComplexMatrix,
    pub via_next_b: ComplexMatrix,
}

impl ClosedForms {
    pub fn max_spread(&self) -> f64 {
        let (x, y, z) = (&self.via_kc, &self.via_power, &self.via_next_b);
        x.max_abs_diff(y)
            .max(y.max_abs_diff(z))
            .max(x.max_abs_diff(z))
    }
}

pub fn closed_forms<G>(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    k: usize,
    tol: &Tolerances,
    mut g: G,
) -> Result<ClosedForms, MatrixError>
where
    G: FnMut(&ComplexMatrix, Option<f64>) -> Result<ComplexMatrix, MatrixError>,
{
    square_triple(a, b, c)?;
    let p = Powers::at(a, b, c, k, tol);
    let g_kc = g(&p.kc, p.cuts.kc)?;
    let d = &g_kc * &p.ca;
    // Q and P carry the rounding noise of the powers, which the default cut of
    // the inner (Q,P)-inverse would not account for.
    let own = tol.product_cut(
        a.nrows(),
        3,
        spectral_norm(&p.kc) * spectral_norm(&d) * spectral_norm(&p.kb),
    );
    let inner = Tolerances {
        rank: [p.cuts.kb, p.cuts.kc, own]
            .into_iter()
            .flatten()
            .reduce(f64::max),
        ..*tol
    };
    let z = bc_inverse(&d, &p.kb, &p.kc, &inner)?.inverse;
    let g_power = g(&p.ca.pow(k + 1), p.cuts.power)?;
    Ok(ClosedForms {
        via_kc: &z * &g_kc,
        via_power: &(&z * a) * &g_power,
        via_next_b: &p.kb * &g(&p.next_b, p.cuts.next_b)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstrainedSolution {
    pub k: usize,
    pub x: Vec<Complex64>,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
}

/// Minimizer of `‖CAx − b‖₂` over `x ∈ col((CA)^k B)`, namely `x = X b`.
///
/// Checks `CAx = P_{(CA)^k C} b` and membership of `x` in the constraint space.
pub fn solve_constrained(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    rhs: &[Complex64],
    tol: &Tolerances,
) -> Result<ConstrainedSolution, MatrixError> {
    let n = square_triple(a, b, c)?;
    if rhs.len() != n {
        return Err(MatrixError::Dimension(format!(
            "right-hand side has {} entries, expected {n}",
            rhs.len()
        )));
    }
    let sol = bc_core_ep(a, b, c, None, tol)?;
    let x = sol.inverse.apply(rhs);
    let ca = c * a;
    let cax = ca.apply(&x);
    let pb = sol.projector.apply(rhs);
    let diff: Vec<Complex64> = cax.iter().zip(&pb).map(|(u, v)| u - v).collect();

    let p = Powers::at(a, b, c, sol.k, tol);
    let xcol = DMatrix::from_column_slice(n, 1, &x);
    let outside = &ComplexMatrix::identity(n) - &projector(&p.kb, p.cuts.kb)?;
    let off = vector_norm((&outside * &ComplexMatrix(xcol)).inner().as_slice());

    let mut residuals = BTreeMap::new();
    residuals.insert("cax_projected_rhs".to_string(), vector_norm(&diff));
    residuals.insert("constraint_space".to_string(), off);
    let tolerance = sol.tolerance * (1.0 + vector_norm(rhs));
    Ok(ConstrainedSolution {
        k: sol.k,
        x,
        residuals,
        tolerance,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualSolution {
    pub k: usize,
    pub inverse: ComplexMatrix,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
}

impl DualSolution {
    pub fn verified(&self) -> bool {
        self.residuals.values().all(|&r| r <= self.tolerance)
    }
}

/// Dual inverse `Y` with `Q = QYAB`, `col(Y) = col(Q*)` and `row(Y) = row(P)`,
/// for `Q = (CA)^k B`, `P = (CA)^k C`.
///
/// Computed as `Y = ((CA)^{k+1} B)† (CA)^k C`; it exists at exactly the same
/// `k` as the primal inverse.
pub fn dual_bc_core_ep(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    k: Option<usize>,
    tol: &Tolerances,
) -> Result<DualSolution, MatrixError> {
    let k = pick_k(a, b, c, k, tol)?;
    let p = Powers::at(a, b, c, k, tol);
    let y = &pinv(&p.next_b, p.cuts.next_b)? * &p.kc;
    let ab = a * b;
    let mut residuals = BTreeMap::new();
    residuals.insert(
        "kb_yab".to_string(),
        (&(&(&p.kb * &y) * &ab) - &p.kb).norm(),
    );
    residuals.insert(
        "column_space_kb_star".to_string(),
        range_residual(&y, &p.kb.adjoint(), p.cuts.kb)?,
    );
    residuals.insert(
        "row_space_kc".to_string(),
        range_residual(&y.adjoint(), &p.kc.adjoint(), p.cuts.kc)?,
    );
    Ok(DualSolution {
        k,
        inverse: y,
        residuals,
        tolerance: tol.bound(&[a, b, c]),
    })
}

/// `C^n = col((CA)^k B) ⊕ N(X·CA)`, checked by dimension count and the rank of the stacked bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DirectSumReport {
    pub n: usize,
    pub range_dim: usize,
    pub null_dim: usize,
    pub stacked_rank: usize,
}

impl DirectSumReport {
    pub fn holds(&self) -> bool {
        self.range_dim + self.null_dim == self.n && self.stacked_rank == self.n
    }
}

pub fn direct_sum_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    sol: &CoreEpSolution,
    tol: &Tolerances,
) -> Result<DirectSumReport, MatrixError> {
    let n = square_triple(a, b, c)?;
    let p = Powers::at(a, b, c, sol.k, tol);
    let range = range_basis(&p.kb, p.cuts.kb)?;
    // X·CA is idempotent, so its nonzero singular values are at least 1.
    let null = null_basis(&(&sol.inverse * &p.ca), Some(0.5))?;
    let (range_dim, null_dim) = (range.ncols(), null.ncols());
    let stacked_rank = if range_dim + null_dim == 0 {
        0
    } else {
        let cols: Vec<_> = range
            .column_iter()
            .chain(null.column_iter())
            .map(|c| c.into_owned())
            .collect();
        rank_of(&ComplexMatrix(DMatrix::from_columns(&cols)), tol.rank)?
    };
    Ok(DirectSumReport {
        n,
        range_dim,
        null_dim,
        stacked_rank,
    })
}
