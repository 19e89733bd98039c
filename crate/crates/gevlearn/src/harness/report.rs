//! Deterministic artifact formatting. All numeric CSV cells carry 12
//! significant digits so downstream checks at 1e-8 can re-verify from the
//! files alone; identical runs produce byte-identical artifacts.

use std::fmt::Write as _;

use crate::regret::BoundsTableRow;

/// Format one numeric cell. Magnitudes below 1e-300 print as 0; the
/// clamp is output-side only, the math never rounds.
pub fn cell(v: f64) -> String {
    if v == 0.0 || v.abs() < 1e-300 {
        return "0".to_string();
    }
    format!("{:.11e}", v)
}

/// Render a CSV from a header and formatted rows.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// CSV form of the bound table.
pub fn bounds_csv(rows: &[BoundsTableRow]) -> String {
    let header = [
        "model",
        "n",
        "l",
        "log_n",
        "surplus_at_zero",
        "eta_formula",
        "bound_formula",
        "eta_exact",
        "bound_exact",
    ];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.model.clone(),
                r.n.to_string(),
                cell(r.l),
                cell(r.log_n),
                cell(r.surplus_at_zero),
                cell(r.eta_formula),
                cell(r.bound_formula),
                cell(r.eta_exact),
                cell(r.bound_exact),
            ]
        })
        .collect();
    csv(&header, &body)
}

/// Aligned-text form of the bound table.
pub fn bounds_text(rows: &[BoundsTableRow], horizon: usize, u_max: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Optimized regret bounds (T = {horizon}, u_max = {u_max})"
    );
    let _ = writeln!(
        out,
        "{:<10} {:>4} {:>8} {:>12} {:>14} {:>12} {:>14}",
        "model", "n", "L", "optimal eta", "bound", "eta (exact)", "bound (exact)"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<10} {:>4} {:>8.4} {:>12.4} {:>14.4} {:>12.4} {:>14.4}",
            r.model, r.n, r.l, r.eta_formula, r.bound_formula, r.eta_exact, r.bound_exact
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_formats_and_clamps() {
        assert_eq!(cell(0.0), "0");
        assert_eq!(cell(1e-305), "0");
        assert_eq!(cell(1.0), "1.00000000000e0");
        let pi = cell(std::f64::consts::PI);
        assert_eq!(pi, "3.14159265359e0");
    }

    #[test]
    fn csv_shape() {
        let out = csv(&["a", "b"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(out, "a,b\n1,2\n");
    }
}
