//! Parse transform expressions, decide separability on a grid, and extract
//! the row/column factors in the pinned gauge g'(i) = g(i,1),
//! g''(j) = g(1,j)/g(1,1).
//!
//! ```bash
//! cargo run --example separability
//! ```

use nullforge::transform::{four_point_witness, is_separable, preserves_eigenvalues, SEPARABILITY_TOL};
use nullforge::TransformFn;

fn main() {
    let cases: Vec<(&str, Vec<(&str, f64)>)> = vec![
        ("q^(i-j)", vec![("q", 2.0)]),
        ("c", vec![("c", 7.0)]),
        ("1/(f+i^2)", vec![("f", 1.0)]),
        ("1/(f+j^2)^0.5", vec![("f", 1.0)]),
        ("(f+i^2)/(h+j)", vec![("f", 0.5), ("h", 3.0)]),
        ("sin(2*a*i)*a^((-1)^j*j)", vec![("a", 1.0)]),
        ("f+i-j", vec![("f", 7.5)]),
    ];

    let (n, m) = (6, 6);
    println!("separability on the {n}x{m} grid (anchored scan, tol {SEPARABILITY_TOL:.0e}):\n");
    for (src, params) in cases {
        let g = TransformFn::parse(src, &params).unwrap();
        let report = is_separable(&g, n, m, SEPARABILITY_TOL).unwrap();
        let full = four_point_witness(&g, n, m, SEPARABILITY_TOL).unwrap();
        print!("{src:<26} separable: {:<5} (full scan agrees: {})", report.separable, report.separable == full.is_none());
        if let Some(w) = report.witness {
            print!("  witness {w:?}");
        }
        if report.separable {
            let unit_diag = preserves_eigenvalues(&g, n, 1e-10).unwrap();
            print!("  preserves eigenvalues: {unit_diag}");
        }
        println!();
        if let (Some(rf), Some(cf)) = (&report.row_factors, &report.col_factors) {
            println!("    g'(i)  = {rf:?}");
            println!("    g''(j) = {cf:?}");
        }
    }
}
