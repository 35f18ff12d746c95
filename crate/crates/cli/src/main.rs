use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coreep::checker::{matrix_checks, run_check, MatrixSweep, MONOID_CHECKS};
use coreep::matrix::{
    bc_core_ep, bc_core_ep_index, bc_inverse, dual_bc_core_ep, parse_vector, pinv,
    solve_constrained,
};
use coreep::search::{compute, find_bc_core_ep, InverseStatus, SearchOutcome};
use coreep::{
    ComplexMatrix, FiniteStarMonoid, InverseKind, Ledger, MatrixError, SweepConfig, Tolerances,
};
use serde::Serialize;
use serde_json::{json, Value};

mod render;
#[cfg(test)]
mod tests;

use render::{member_set, rank_table, residual_lines};

#[derive(Parser)]
#[command(
    name = "coreep",
    version,
    about = "Generalized inverses in finite *-monoids and complex matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Largest k scanned (monoids: 2·|S|, matrices: n)
    #[arg(long, global = true)]
    kmax: Option<usize>,
    /// Residual tolerance, scaled by 1 + max ‖input‖
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Absolute singular-value cut for numeric ranks
    #[arg(long, global = true)]
    rank_tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one generalized inverse
    Invert {
        #[arg(long)]
        kind: String,
        /// Use this k instead of the smallest admissible one (matrices only)
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        target: Target,
    },
    /// Report the index set of an indexed kind
    Index {
        #[arg(long, default_value = "bc-core-ep")]
        kind: String,
        #[command(flatten)]
        target: Target,
    },
    /// Minimize ‖CAx − b‖ over x in the column space of (CA)^k B
    Solve {
        #[arg(long, num_args = 3, value_names = ["A", "B", "C"], required = true)]
        matrices: Vec<PathBuf>,
        #[arg(long)]
        rhs: PathBuf,
    },
    /// Run the theorem ledger
    Check {
        /// zn:N, mat:N:M, file:PATH or matrices[:N]; repeatable
        #[arg(long, required = true)]
        universe: Vec<String>,
        /// Restrict to these check ids (comma separated)
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Sample this many tuples instead of sweeping exhaustively
        #[arg(long)]
        samples: Option<usize>,
        /// Number of random matrix instances
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Recompute one of the worked examples
    Reproduce {
        #[arg(value_enum)]
        example: Example,
    },
}

#[derive(Args)]
struct Target {
    /// zn:N, mat:N:M or file:PATH
    #[arg(long, conflicts_with = "matrices", requires = "elements")]
    universe: Option<String>,
    /// Element ids, comma separated
    #[arg(long, value_delimiter = ',')]
    elements: Vec<usize>,
    /// Matrix files (JSON or CSV)
    #[arg(long, num_args = 1..=3)]
    matrices: Vec<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    /// a = b = 1, c = 2 in Z_8
    Z8,
    /// A = I, B = E33, C = the 3x3 shift
    #[value(alias = "example36")]
    Shift,
}

/// A finished command: its report and exit code.
struct Outcome {
    json: Value,
    table: String,
    code: u8,
}

impl Outcome {
    fn new(json: Value, table: String, ok: bool) -> Self {
        Outcome {
            json,
            table,
            code: if ok { 0 } else { 1 },
        }
    }
}

/// Bad input; exits with status 2.
type Res<T> = Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Runs the command and writes its report; returns the exit code.
fn execute(cli: &Cli) -> Res<u8> {
    let (code, text) = report(cli)?;
    emit(&cli.common.out, &text)?;
    Ok(code)
}

fn report(cli: &Cli) -> Res<(u8, String)> {
    let outcome = run(cli)?;
    let text = match cli.common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json).expect("json");
            s.push('\n');
            s
        }
        Format::Table => outcome.table,
    };
    Ok((outcome.code, text))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Res<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Res<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::Invert { kind, k, target } => {
            let kind: InverseKind = kind.parse().map_err(|e| format!("{e}"))?;
            match &target.universe {
                Some(u) => invert_monoid(u, kind, &target.elements, c),
                None => invert_matrices(&load_matrices(&target.matrices)?, kind, *k, c),
            }
        }
        Command::Index { kind, target } => {
            let kind: InverseKind = kind.parse().map_err(|e| format!("{e}"))?;
            if !kind.is_indexed() {
                return Err(format!("{kind} has no index set"));
            }
            match &target.universe {
                Some(u) => invert_monoid(u, kind, &target.elements, c),
                None => index_matrices(&load_matrices(&target.matrices)?, kind, c),
            }
        }
        Command::Solve { matrices, rhs } => solve(&load_matrices(matrices)?, rhs, c),
        Command::Check {
            universe,
            only,
            samples,
            count,
        } => check(universe, only, *samples, *count, c),
        Command::Reproduce { example } => Ok(match example {
            Example::Z8 => reproduce_z8(),
            Example::Shift => reproduce_shift(),
        }),
    }
}

fn tolerances(c: &Common) -> Res<Tolerances> {
    let mut tol = Tolerances::default();
    for v in [c.tol, c.rank_tol].into_iter().flatten() {
        if !(v.is_finite() && v > 0.0) {
            return Err(MatrixError::BadTolerance(v).to_string());
        }
    }
    if let Some(v) = c.tol {
        tol.verify = v;
    }
    tol.rank = c.rank_tol;
    Ok(tol)
}

fn load_matrices(paths: &[PathBuf]) -> Res<Vec<ComplexMatrix>> {
    if paths.is_empty() {
        return Err("give --universe with --elements, or --matrices".to_string());
    }
    paths.iter().map(|p| load_matrix(p)).collect()
}

fn load_matrix(p: &Path) -> Res<ComplexMatrix> {
    let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
    ComplexMatrix::parse(&text).map_err(|e| format!("{}: {e}", p.display()))
}

fn invert_monoid(universe: &str, kind: InverseKind, ids: &[usize], c: &Common) -> Res<Outcome> {
    let m = FiniteStarMonoid::from_descriptor(universe).map_err(|e| e.to_string())?;
    let args = ids
        .iter()
        .map(|&i| m.element(i))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let outcome = compute(&m, kind, &args, c.kmax).map_err(|e| e.to_string())?;
    let mut table = format!(
        "{kind} in {} of ({})\n",
        m.universe(),
        args.iter()
            .map(|&e| m.describe(e))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let ok = match &outcome {
        SearchOutcome::Single(r) => {
            let all = r.all();
            if all.is_empty() {
                table.push_str("no solution\n");
            } else {
                for x in &all {
                    table.push_str(&format!("x = {} (id {x})\n", m.describe(*x)));
                }
            }
            r.exists()
        }
        SearchOutcome::Indexed(r) => {
            table.push_str(&format!(
                "I ∩ [0,{}] = {}\n",
                r.searched_bound,
                member_set(&r.members)
            ));
            match (r.index, r.inverse) {
                (Some(i), Some(x)) => {
                    table.push_str(&format!(
                        "index = {i}\ninverse = {} (id {x})\n",
                        m.describe(x)
                    ));
                    let distinct = r.distinct_inverses();
                    if distinct.len() > 1 {
                        table.push_str(&format!(
                            "different witnesses across k: {:?}\n",
                            distinct.iter().map(|e| e.id()).collect::<Vec<_>>()
                        ));
                    }
                }
                _ if r.status == InverseStatus::NotDetermined => {
                    table.push_str("undetermined within the bound\n")
                }
                _ => table.push_str("no admissible k\n"),
            }
            r.status == InverseStatus::Exists
        }
    };
    let json = json!({
        "universe": m.universe().to_string(),
        "kind": kind,
        "arguments": ids,
        "result": outcome,
    });
    Ok(Outcome::new(json, table, ok))
}

fn triple(
    ms: &[ComplexMatrix],
    kind: InverseKind,
) -> Res<(&ComplexMatrix, &ComplexMatrix, &ComplexMatrix)> {
    match ms {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!(
            "{kind} needs three matrices A B C, got {}",
            ms.len()
        )),
    }
}

/// Non-existence is a result (exit 1); anything else is bad input.
fn not_invertible(kind: InverseKind, e: MatrixError) -> Res<Outcome> {
    match e {
        MatrixError::NotInvertible { .. }
        | MatrixError::NotAdmissible { .. }
        | MatrixError::NotBcInvertible { .. } => {
            let reason = e.to_string();
            let json = json!({ "kind": kind, "status": "not_invertible", "reason": reason });
            Ok(Outcome::new(json, format!("{kind}: {reason}\n"), false))
        }
        e => Err(e.to_string()),
    }
}

#[derive(Serialize)]
struct MatrixInverse<'a> {
    kind: InverseKind,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    inverse: &'a ComplexMatrix,
    residuals: &'a std::collections::BTreeMap<String, f64>,
    tolerance: f64,
    verified: bool,
}

fn matrix_outcome(
    kind: InverseKind,
    k: Option<usize>,
    x: &ComplexMatrix,
    residuals: &std::collections::BTreeMap<String, f64>,
    tolerance: f64,
) -> Outcome {
    let verified = residuals.values().all(|&r| r <= tolerance);
    let report = MatrixInverse {
        kind,
        status: "exists",
        k,
        inverse: x,
        residuals,
        tolerance,
        verified,
    };
    let mut table = format!("{kind}");
    if let Some(k) = k {
        table.push_str(&format!(" at k = {k}"));
    }
    table.push('\n');
    table.push_str(&render::matrix(x));
    table.push_str(&residual_lines(residuals, tolerance));
    Outcome::new(
        serde_json::to_value(&report).expect("json"),
        table,
        verified,
    )
}

fn invert_matrices(
    ms: &[ComplexMatrix],
    kind: InverseKind,
    k: Option<usize>,
    c: &Common,
) -> Res<Outcome> {
    let tol = tolerances(c)?;
    let done = match kind {
        InverseKind::MoorePenrose => {
            let [a] = ms else {
                return Err(format!("{kind} needs one matrix, got {}", ms.len()));
            };
            let x = pinv(a, tol.rank).map_err(|e| e.to_string())?;
            let mut residuals = std::collections::BTreeMap::new();
            let (ax, xa) = (a * &x, &x * a);
            residuals.insert("axa_a".into(), (&(&ax * a) - a).norm());
            residuals.insert("xax_x".into(), (&(&x * &ax) - &x).norm());
            residuals.insert("ax_hermitian".into(), (&ax - &ax.adjoint()).norm());
            residuals.insert("xa_hermitian".into(), (&xa - &xa.adjoint()).norm());
            let bound = tol.verify * (1.0 + a.norm());
            return Ok(matrix_outcome(kind, None, &x, &residuals, bound));
        }
        InverseKind::Bc => {
            let (a, b, cm) = triple(ms, kind)?;
            bc_inverse(a, b, cm, &tol)
                .map(|s| matrix_outcome(kind, None, &s.inverse, &s.residuals, s.tolerance))
        }
        InverseKind::BcCoreEp => {
            let (a, b, cm) = triple(ms, kind)?;
            bc_core_ep(a, b, cm, k, &tol)
                .map(|s| matrix_outcome(kind, Some(s.k), &s.inverse, &s.residuals, s.tolerance))
        }
        InverseKind::WCoreEp => {
            // The w-core-EP inverse of A is the (A,A)-core-EP inverse of W.
            let [a, w] = ms else {
                return Err(format!("{kind} needs two matrices A W, got {}", ms.len()));
            };
            bc_core_ep(w, a, a, k, &tol)
                .map(|s| matrix_outcome(kind, Some(s.k), &s.inverse, &s.residuals, s.tolerance))
        }
        InverseKind::DualBcCoreEp => {
            let (a, b, cm) = triple(ms, kind)?;
            dual_bc_core_ep(a, b, cm, k, &tol)
                .map(|s| matrix_outcome(kind, Some(s.k), &s.inverse, &s.residuals, s.tolerance))
        }
        _ => {
            return Err(format!(
                "{kind} is only available on finite monoids; matrices support \
                 moore_penrose, bc, bc_core_ep, w_core_ep and dual_bc_core_ep"
            ))
        }
    };
    done.or_else(|e| not_invertible(kind, e))
}

fn index_matrices(ms: &[ComplexMatrix], kind: InverseKind, c: &Common) -> Res<Outcome> {
    let tol = tolerances(c)?;
    let scan = match kind {
        InverseKind::WCoreEp => {
            let [a, w] = ms else {
                return Err(format!("{kind} needs two matrices A W, got {}", ms.len()));
            };
            bc_core_ep_index(w, a, a, c.kmax, &tol)
        }
        _ => {
            let (a, b, cm) = triple(ms, kind)?;
            bc_core_ep_index(a, b, cm, c.kmax, &tol)
        }
    }
    .map_err(|e| e.to_string())?;
    let mut table = rank_table(&scan.table);
    table.push_str(&format!(
        "I ∩ [0,{}] = {}\n",
        scan.k_max,
        member_set(&scan.members)
    ));
    if let Some(i) = scan.index() {
        table.push_str(&format!("index = {i}\n"));
    }
    let json = json!({
        "kind": kind,
        "k_max": scan.k_max,
        "members": scan.members,
        "index": scan.index(),
        "rank_table": scan.table,
    });
    Ok(Outcome::new(json, table, true))
}

fn solve(ms: &[ComplexMatrix], rhs: &Path, c: &Common) -> Res<Outcome> {
    let tol = tolerances(c)?;
    let (a, b, cm) = triple(ms, InverseKind::BcCoreEp)?;
    let text = fs::read_to_string(rhs).map_err(|e| format!("{}: {e}", rhs.display()))?;
    let v = parse_vector(&text).map_err(|e| format!("{}: {e}", rhs.display()))?;
    let sol = match solve_constrained(a, b, cm, &v, &tol) {
        Ok(s) => s,
        Err(e) => return not_invertible(InverseKind::BcCoreEp, e),
    };
    let verified = sol.residuals.values().all(|&r| r <= sol.tolerance);
    let mut table = format!("k = {}\nx =\n", sol.k);
    for z in &sol.x {
        table.push_str(&format!("  {}\n", render::complex(*z)));
    }
    table.push_str(&residual_lines(&sol.residuals, sol.tolerance));
    let mut json = serde_json::to_value(&sol).expect("json");
    json["verified"] = Value::Bool(verified);
    Ok(Outcome::new(json, table, verified))
}

fn check(
    universes: &[String],
    only: &[String],
    samples: Option<usize>,
    count: usize,
    c: &Common,
) -> Res<Outcome> {
    let mut ledger = Ledger::default();
    for u in universes {
        if let Some(rest) = u.strip_prefix("matrices") {
            let n = match rest.strip_prefix(':') {
                Some(n) => n.parse().map_err(|_| format!("bad universe {u:?}"))?,
                None if rest.is_empty() => 4,
                None => return Err(format!("bad universe {u:?}")),
            };
            let sweep = MatrixSweep {
                seed: c.seed,
                count,
                n,
                tol: c.tol.unwrap_or(1e-8),
                ..MatrixSweep::default()
            };
            ledger.checks.extend(
                matrix_checks(&sweep)
                    .into_iter()
                    .filter(|t| only.is_empty() || only.contains(&t.id)),
            );
            continue;
        }
        let m = FiniteStarMonoid::from_descriptor(u).map_err(|e| e.to_string())?;
        let cfg = SweepConfig {
            k_max: c.kmax,
            samples,
            seed: c.seed,
        };
        for def in MONOID_CHECKS.iter() {
            if only.is_empty() || only.iter().any(|o| o == def.id) {
                ledger.checks.push(run_check(&m, def, &cfg));
            }
        }
    }
    if ledger.checks.is_empty() {
        return Err(format!("no check matches {only:?}"));
    }
    let ok = ledger.passed();
    let json = serde_json::to_value(&ledger).expect("json");
    Ok(Outcome::new(json, ledger.to_table(), ok))
}

fn reproduce_z8() -> Outcome {
    let m = FiniteStarMonoid::zn(8).expect("Z_8");
    let el = |i| m.element(i).expect("in range");
    let k_max = 10;
    let main = find_bc_core_ep(&m, el(1), el(1), el(2), k_max);
    let cc = find_bc_core_ep(&m, el(1), el(2), el(2), k_max);
    let id = |x: Option<coreep::Element>| x.map(|e| e.id());
    let mut table = format!("Z_8, a = 1, b = 1, c = 2, k <= {k_max}\n");
    table.push_str(&format!(
        "I_(1,2)(1) ∩ [0,{k_max}] = {}, i = {}, inverse = {}\n",
        member_set(&main.members),
        render::opt(main.index),
        render::opt(id(main.inverse)),
    ));
    table.push_str(&format!(
        "(c,c) case b = c = 2: I ∩ [0,{k_max}] = {}, i = {}, inverse = {}\n",
        member_set(&cc.members),
        render::opt(cc.index),
        render::opt(id(cc.inverse)),
    ));
    let json = json!({
        "example": "z8",
        "universe": "zn:8",
        "k_max": k_max,
        "bc": { "a": 1, "b": 1, "c": 2, "members": main.members, "index": main.index, "inverse": id(main.inverse) },
        "cc": { "a": 1, "b": 2, "c": 2, "members": cc.members, "index": cc.index, "inverse": id(cc.inverse) },
    });
    Outcome::new(json, table, true)
}

fn reproduce_shift() -> Outcome {
    let a = ComplexMatrix::identity(3);
    let b = ComplexMatrix::unit(3, 2, 2);
    let c = &ComplexMatrix::unit(3, 0, 1) + &ComplexMatrix::unit(3, 1, 2);
    let tol = Tolerances::default();
    let scan = bc_core_ep_index(&a, &b, &c, Some(3), &tol).expect("square triple");
    let sol = bc_core_ep(&a, &b, &c, Some(1), &tol).expect("k = 1 is admissible");
    let ca = &c * &a;
    let shifted = bc_inverse(&a, &(&ca * &b), &(&ca * &c), &tol);

    let mut table = String::from("A = I_3, B = E33, C = E12 + E23\n");
    table.push_str(&rank_table(&scan.table));
    table.push_str(&format!("I ∩ [0,3] = {}\n", member_set(&scan.members)));
    table.push_str("X at k = 1:\n");
    table.push_str(&render::matrix(&sol.inverse));
    table.push_str(&residual_lines(&sol.residuals, sol.tolerance));
    let shifted_json = match &shifted {
        Ok(s) => {
            table.push_str("(CAB, CAC)-inverse of A exists\n");
            json!({ "exists": true, "inverse": s.inverse })
        }
        Err(e) => {
            table.push_str(&format!("(CAB, CAC)-inverse of A: {e}\n"));
            json!({ "exists": false, "reason": e.to_string() })
        }
    };
    let json = json!({
        "example": "shift",
        "rank_table": scan.table,
        "members": scan.members,
        "index": scan.index(),
        "k": sol.k,
        "inverse": sol.inverse,
        "residuals": sol.residuals,
        "tolerance": sol.tolerance,
        "cab_cac_inverse": shifted_json,
    });
    Outcome::new(json, table, true)
}
