//! Walk through the worked 3x3 examples: how constant, row-only, column-only
//! and geometric rescalings preserve the null pair of a rank-one matrix, and
//! how a non-separable shift does not.
//!
//! ```bash
//! cargo run --example worked_examples
//! ```

use nullforge::matrix::DenseMatrix;
use nullforge::transform::{apply_transform, is_separable, verify_theorem1, Mode, SEPARABILITY_TOL};
use nullforge::TransformFn;

fn show(label: &str, a: &DenseMatrix, g: &TransformFn, src: &str) {
    let report = verify_theorem1(a, g, Mode::Multiply).unwrap();
    println!(
        "{label:<28} g = {src:<16} separable: {:<5} nullity {} -> {}",
        report.separable, report.nullity_before, report.nullity_after
    );
    let b = apply_transform(a, g, Mode::Multiply).unwrap();
    for v in b.null_basis(0.0).vectors() {
        println!("{:>30} {v}", "kernel vector:");
    }
}

fn main() {
    let a = DenseMatrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![3, 6, 9]]);
    println!("A = [[1,2,3],[2,4,6],[3,6,9]], rank {}, nullity {}\n", a.rank(0.0), a.nullity(0.0));

    show("case 1: constant", &a, &TransformFn::parse("c", &[("c", 3.0)]).unwrap(), "c");
    show(
        "case 2: row-only",
        &a,
        &TransformFn::parse("1/(f+i^2)", &[("f", 1.0)]).unwrap(),
        "1/(f+i^2)",
    );
    show("case 3: column-only", &a, &TransformFn::parse("1/j", &[]).unwrap(), "1/j");
    show(
        "case 4a: geometric",
        &a,
        &TransformFn::parse("f^(i-j)", &[("f", 2.0)]).unwrap(),
        "f^(i-j), f=2",
    );
    show(
        "case 4b: shifted difference",
        &a,
        &TransformFn::parse("f+i-j", &[("f", 3.0)]).unwrap(),
        "f+i-j, f=3",
    );

    // The shifted difference fails the four-point identity; print the witness.
    let g = TransformFn::parse("f+i-j", &[("f", 3.0)]).unwrap();
    let rep = is_separable(&g, 3, 3, SEPARABILITY_TOL).unwrap();
    let (i, j, x, y) = rep.witness.unwrap();
    println!(
        "\nwitness for f+i-j: g({i},{j})*g({x},{y}) = {} but g({x},{j})*g({i},{y}) = {}",
        g.evaluate(i, j).unwrap() * g.evaluate(x, y).unwrap(),
        g.evaluate(x, j).unwrap() * g.evaluate(i, y).unwrap(),
    );
}
