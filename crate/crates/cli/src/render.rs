//! Plain-text renderings for `--format table`.

use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};

use coreep::matrix::RankRow;
use coreep::ComplexMatrix;
use num_complex::Complex64;

/// `{3..10}` for a contiguous run, `{1, 3}` otherwise, `{}` when empty.
pub fn member_set(members: &[usize]) -> String {
    match members {
        [] => "{}".to_string(),
        [x] => format!("{{{x}}}"),
        [lo, .., hi] if hi - lo + 1 == members.len() => format!("{{{lo}..{hi}}}"),
        _ => format!(
            "{{{}}}",
            members
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

pub fn opt<T: Display>(v: Option<T>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}

fn real(x: f64) -> String {
    // Avoid printing "-0.000000".
    let s = format!("{x:.6}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn complex(z: Complex64) -> String {
    let im = real(z.im);
    if im == real(0.0) {
        real(z.re)
    } else if im.starts_with('-') {
        format!("{}{}j", real(z.re), im)
    } else {
        format!("{}+{}j", real(z.re), im)
    }
}

pub fn matrix(m: &ComplexMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| complex(m.get(r, c))).collect())
        .collect();
    let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|s| format!("{s:>w$}")).collect();
        let _ = writeln!(out, "  [{}]", line.join("  "));
    }
    out
}

pub fn residual_lines(residuals: &BTreeMap<String, f64>, tolerance: f64) -> String {
    let w = residuals.keys().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (name, v) in residuals {
        let flag = if *v <= tolerance { "" } else { "  > tol" };
        let _ = writeln!(out, "  {name:<w$}  {v:.3e}{flag}");
    }
    let _ = writeln!(out, "  tolerance {tolerance:.3e}");
    out
}

pub fn rank_table(rows: &[RankRow]) -> String {
    let mut out = String::from("   k  rk(Q)  rk(P)  rk(CAQ)  admissible\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>4}  {:>5}  {:>5}  {:>7}  {}",
            r.k,
            r.rank_kb,
            r.rank_kc,
            r.rank_next_b,
            if r.admissible { "yes" } else { "no" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_sets() {
        assert_eq!(member_set(&[]), "{}");
        assert_eq!(member_set(&[4]), "{4}");
        assert_eq!(member_set(&[3, 4, 5]), "{3..5}");
        assert_eq!(member_set(&[1, 3]), "{1, 3}");
    }

    #[test]
    fn complex_entries() {
        assert_eq!(complex(Complex64::new(-0.0, 1e-12)), "0.000000");
        assert_eq!(complex(Complex64::new(1.0, -2.0)), "1.000000-2.000000j");
        assert_eq!(complex(Complex64::new(0.5, 0.25)), "0.500000+0.250000j");
    }
}
