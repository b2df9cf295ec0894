//! Acceptance suite: every release criterion runs here, one pass/fail line
//! each, with its runtime budget enforced. Run with
//!
//! ```bash
//! cargo test --test acceptance -- --nocapture
//! ```

mod common;

use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{nonseparable_example, random_matrix_corpus, rational, separable_families};
use nullforge::analysis::{localization_metrics, profile};
use nullforge::io::{load_fixture_suite, run_fixture};
use nullforge::matrix::{subspace_equal, DenseMatrix, Vector};
use nullforge::models::{
    self, build, deconstruction, nonlocal_cw, uniform_cw, zero_mode_analytic, ModelKind, ModelSpec,
    ZeroModeFormula,
};
use nullforge::transform::{
    apply_transform, four_point_witness, is_separable, predict_null_basis, verify_similarity,
    verify_theorem1, Mode, Orientation, SEPARABILITY_TOL,
};
use nullforge::TransformFn;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn rank_one_matrix() -> DenseMatrix {
    DenseMatrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![3, 6, 9]])
}

type CriterionFn = fn() -> Result<String, String>;

#[test]
fn acceptance_criteria() {
    let criteria: Vec<(u32, &str, Option<f64>, CriterionFn)> = vec![
        (1, "worked-example golden suite", Some(1.0), criterion_1),
        (2, "nullity preservation over the random corpus", Some(30.0), criterion_2),
        (3, "predicted null bases span the computed kernels", None, criterion_3),
        (4, "eigenvalue multisets and similarity conjugation", None, criterion_4),
        (5, "clockwork profile reproduction", Some(1.0), criterion_5),
        (6, "deconstruction zero-mode law", None, criterion_6),
        (7, "independent chiral profiles", None, criterion_7),
        (8, "Kaluza-Klein tower spectra and gap laws", Some(5.0), criterion_8),
        (9, "non-local multinomial kernel", None, criterion_9),
        (10, "separability classification", None, criterion_10),
    ];

    let mut failures = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed().as_secs_f64();
        let within_budget = limit.is_none_or(|l| elapsed < l);
        match (&outcome, within_budget) {
            (Ok(detail), true) => {
                println!("PASS criterion {id} ({name}) [{elapsed:.2}s]: {detail}");
            }
            (Ok(detail), false) => {
                println!(
                    "FAIL criterion {id} ({name}) [{elapsed:.2}s]: over the {:.0}s budget ({detail})",
                    limit.unwrap()
                );
                failures.push(id);
            }
            (Err(reason), _) => {
                println!("FAIL criterion {id} ({name}) [{elapsed:.2}s]: {reason}");
                failures.push(id);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

/// Worked 3x3 examples: rescalings by a constant, a row-only factor, a
/// column-only factor and the geometric family preserve nullity 2 exactly and
/// reproduce the printed bases; the shifted difference drops it to 1.
fn criterion_1() -> Result<String, String> {
    let fixtures = load_fixture_suite(&fixtures_dir()).map_err(|e| e.to_string())?;
    let worked: Vec<_> = fixtures.iter().filter(|f| f.name.starts_with("case")).collect();
    if worked.len() < 7 {
        return Err(format!("expected at least 7 worked-example fixtures, found {}", worked.len()));
    }
    for fixture in &worked {
        let outcome = run_fixture(fixture);
        if !outcome.passed {
            return Err(format!("fixture {} failed: {:?}", outcome.name, outcome.checks));
        }
    }

    let a = rank_one_matrix();
    for f in [2i64, 3] {
        let g = TransformFn::parse("f^(i-j)", &[("f", f as f64)]).unwrap();
        let b = apply_transform(&a, &g, Mode::Multiply).map_err(|e| e.to_string())?;
        if b.nullity(0.0) != 2 {
            return Err(format!("geometric f={f}: nullity {} != 2", b.nullity(0.0)));
        }
        let basis = b.null_basis(0.0);
        let want = [
            Vector::Rational(vec![rational(-3, f * f), rational(0, 1), rational(1, 1)]),
            Vector::Rational(vec![rational(-2, f), rational(1, 1), rational(0, 1)]),
        ];
        if basis.vectors() != want {
            return Err(format!("geometric f={f}: basis {:?} != printed block", basis.vectors()));
        }
    }
    let shifted = TransformFn::parse("f+i-j", &[("f", 3.0)]).unwrap();
    let b = apply_transform(&a, &shifted, Mode::Multiply).map_err(|e| e.to_string())?;
    if b.nullity(0.0) != 1 {
        return Err(format!("shifted difference: nullity {} != 1", b.nullity(0.0)));
    }
    Ok(format!("{} fixtures plus direct checks, all exact", worked.len()))
}

/// 500 random matrices x 6 separable families x both modes: rank and nullity
/// never move, in exact arithmetic with zero tolerance.
fn criterion_2() -> Result<String, String> {
    let corpus = random_matrix_corpus(0xC2, 500);
    let families = separable_families();
    let mut checks = 0usize;
    for (k, m) in corpus.iter().enumerate() {
        let mode = if k % 2 == 0 { Mode::Multiply } else { Mode::Divide };
        for g in &families {
            let report = verify_theorem1(m, g, mode).map_err(|e| e.to_string())?;
            if !report.separable {
                return Err(format!("family misclassified as non-separable at matrix {k}"));
            }
            if !report.preserved {
                return Err(format!(
                    "nullity changed {} -> {} at matrix {k}",
                    report.nullity_before, report.nullity_after
                ));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} exact preservation checks"))
}

/// For every corpus case with a nonzero kernel, the predicted basis and the
/// computed basis of the transformed matrix span the same subspace, exactly.
fn criterion_3() -> Result<String, String> {
    let corpus = random_matrix_corpus(0xC2, 500);
    let families = separable_families();
    let mut checks = 0usize;
    for (k, m) in corpus.iter().enumerate() {
        let basis = m.null_basis(0.0);
        if basis.is_empty() {
            continue;
        }
        let mode = if k % 2 == 0 { Mode::Multiply } else { Mode::Divide };
        for g in &families {
            let predicted = predict_null_basis(&basis, g, m.rows(), m.cols(), mode)
                .map_err(|e| e.to_string())?;
            let computed = apply_transform(m, g, mode).map_err(|e| e.to_string())?.null_basis(0.0);
            if !subspace_equal(&predicted, &computed, 0.0) {
                return Err(format!("subspaces differ at matrix {k}"));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} exact subspace matches"))
}

/// 200 random float 5x5 matrices with the geometric family at f in
/// {0.5, 2, 3}: eigenvalue multisets agree within 1e-8 and conjugation by the
/// diagonal similarity matrix reproduces the transform within 1e-10.
fn criterion_4() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let fs = [0.5f64, 2.0, 3.0];
    for case in 0..200usize {
        let rows: Vec<Vec<f64>> =
            (0..5).map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let a = DenseMatrix::from_f64_rows(&rows).unwrap();
        let f = fs[case % 3];
        let mode = if case % 2 == 0 { Mode::Multiply } else { Mode::Divide };
        let g = TransformFn::parse("f^(i-j)", &[("f", f)]).unwrap();
        let b = apply_transform(&a, &g, mode).map_err(|e| e.to_string())?;

        let ea = a.eigenvalues().map_err(|e| e.to_string())?;
        let mut eb = b.eigenvalues().map_err(|e| e.to_string())?;
        for x in &ea {
            let (idx, dist) = eb
                .iter()
                .enumerate()
                .map(|(i, y)| (i, (x - y).norm()))
                .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
                .ok_or("eigenvalue count mismatch")?;
            if dist > 1e-8 {
                return Err(format!("case {case}: eigenvalue {x} unmatched by {dist:.2e}"));
            }
            eb.remove(idx);
        }

        let report = verify_similarity(&a, &g, mode).map_err(|e| e.to_string())?;
        if report.max_rel_err > 1e-10 {
            return Err(format!("case {case}: conjugation error {:.2e}", report.max_rel_err));
        }
        let want = match mode {
            Mode::Multiply => Orientation::PAPInv,
            Mode::Divide => Orientation::PInvAP,
        };
        if report.orientation != want {
            return Err(format!("case {case}: unexpected orientation {:?}", report.orientation));
        }
    }
    Ok("200 eigenvalue multisets within 1e-8, conjugation within 1e-10".into())
}

/// Clockwork reproduction at n = 15, q = 2: the geometric closed form is the
/// kernel of the divided chain exactly (and its mirror the kernel of the
/// multiplied chain), log amplitudes are affine with slope +/- log10(2),
/// suppression is exactly 2^-15, and the alternating-column closed form is
/// the kernel of its rescaled chain.
fn criterion_5() -> Result<String, String> {
    let n = 15;
    let chain = uniform_cw(n, &rational(1, 1));
    let g = TransformFn::parse("q^(i-j)", &[("q", 2.0)]).unwrap();

    let check_orientation = |mode: Mode, formula_q: BigRational, want_slope: f64| -> Result<(), String> {
        let b = apply_transform(&chain, &g, mode).map_err(|e| e.to_string())?;
        let kernel = b.null_basis(0.0);
        if kernel.len() != 1 {
            return Err(format!("kernel dimension {} != 1", kernel.len()));
        }
        let formula = zero_mode_analytic(&ZeroModeFormula::CwGeometric { q: formula_q }, n)
            .map_err(|e| e.to_string())?;
        if !kernel.vectors()[0].proportional_to(&formula, 0.0) {
            return Err("kernel is not proportional to the geometric closed form".into());
        }
        let p = profile(&formula).map_err(|e| e.to_string())?;
        for w in p.log10_amplitude.windows(2) {
            let (Some(a), Some(b)) = (w[0], w[1]) else { return Err("zero amplitude".into()) };
            if ((b - a) - want_slope).abs() > 1e-9 {
                return Err(format!("log-slope {} != {want_slope}", b - a));
            }
        }
        let metrics = localization_metrics(&p);
        let want = 2f64.powi(-(n as i32));
        if ((metrics.suppression - want) / want).abs() > 1e-12 {
            return Err(format!("suppression {} != 2^-{n}", metrics.suppression));
        }
        Ok(())
    };

    // Dividing by q^(i-j) localizes at site 1 (the closed-form orientation);
    // multiplying mirrors it, which is the closed form at 1/q.
    check_orientation(Mode::Divide, rational(2, 1), -(2f64.log10()))?;
    check_orientation(Mode::Multiply, rational(1, 2), 2f64.log10())?;

    let alt = TransformFn::parse("q^((-1)^j*j)", &[("q", 2.0)]).unwrap();
    let b = apply_transform(&chain, &alt, Mode::Multiply).map_err(|e| e.to_string())?;
    let kernel = b.null_basis(0.0);
    let formula = zero_mode_analytic(&ZeroModeFormula::AlternatingCol { q: rational(2, 1) }, n)
        .map_err(|e| e.to_string())?;
    if kernel.len() != 1 || !kernel.vectors()[0].proportional_to(&formula, 0.0) {
        return Err("alternating-column kernel does not match its closed form".into());
    }
    Ok("both orientations, slopes, suppression 2^-15 and alternating profile exact".into())
}

/// The deconstruction chain has a kernel exactly when n = 2 (mod 3).
fn criterion_6() -> Result<String, String> {
    for n in 2..=30 {
        let h = deconstruction(n, &rational(1, 1));
        let want = usize::from(n % 3 == 2);
        let got = h.nullity(0.0);
        if got != want {
            return Err(format!("n = {n}: nullity {got} != {want}"));
        }
    }
    Ok("n = 2..30, exact".into())
}

/// The n = 50, a = 1 transformed chain: the right kernel matches the
/// column-factor closed form and the left kernel the sine closed form, both
/// with residual <= 1e-9; sweeping the row factor over five functions leaves
/// the right kernel subspace untouched.
fn criterion_7() -> Result<String, String> {
    let n = 50;
    let spec = ModelSpec::new(ModelKind::Deconstruction, n).with_gf(
        "sin(2*a*i)*a^((-1)^j*j)",
        &[("a", 1.0)],
        Mode::Multiply,
    );
    let h = build(&spec).map_err(|e| e.to_string())?;

    let residual_ok = |m: &DenseMatrix, v: &Vector| -> bool {
        m.matvec(v).max_abs() <= 1e-9 * m.max_abs_entry() * v.max_abs()
    };

    let right = zero_mode_analytic(&ZeroModeFormula::DeconTransformedRight { a: rational(1, 1) }, n)
        .map_err(|e| e.to_string())?;
    if !residual_ok(&h, &right) {
        return Err("right closed form does not annihilate the transformed chain".into());
    }
    let right_kernel = h.null_basis(1e-10);
    if right_kernel.len() != 1
        || !right_kernel.vectors()[0].proportional_to(&Vector::Float(right.to_float()), 1e-9)
    {
        return Err("computed right kernel differs from the closed form".into());
    }

    let left = zero_mode_analytic(&ZeroModeFormula::DeconTransformedLeft { a: 1.0 }, n)
        .map_err(|e| e.to_string())?;
    let ht = h.transpose();
    if !residual_ok(&ht, &left) {
        return Err("left closed form does not annihilate the transpose".into());
    }
    let left_kernel = ht.null_basis(1e-10);
    if left_kernel.len() != 1
        || !left_kernel.vectors()[0].proportional_to(&Vector::Float(left.to_float()), 1e-9)
    {
        return Err("computed left kernel differs from the closed form".into());
    }

    // Right kernels are blind to the row factor, left kernels to the column
    // factor. The a = 1.5 variant runs on a shorter chain: at n = 50 the
    // column scaling spans 1.5^(+/-50) and the float kernel stops being
    // numerically one-dimensional.
    let row_factors = ["sin(2*a*i)", "1", "1/(1+i^2)", "exp(i/25)", "cos(i)+2"];
    for (col_a, sites) in [(1.0f64, n), (1.5, 14)] {
        let mut kernels = Vec::new();
        for rf in row_factors {
            let src = format!("({rf})*a^((-1)^j*j)");
            let tf = TransformFn::parse(&src, &[("a", col_a)]).map_err(|e| e.to_string())?;
            let base = deconstruction(sites, &rational(1, 1)).to_float();
            let b = apply_transform(&base, &tf, Mode::Multiply).map_err(|e| e.to_string())?;
            kernels.push(b.null_basis(1e-10));
        }
        for k in 1..kernels.len() {
            if kernels[k].len() != 1 || !subspace_equal(&kernels[0], &kernels[k], 1e-9) {
                return Err(format!(
                    "right kernel moved under row factor `{}` (column a = {col_a})",
                    row_factors[k]
                ));
            }
        }
    }
    let col_factors = ["a^((-1)^j*j)", "1", "1/(1+j^2)", "exp(j/25)", "cos(j)+2"];
    let mut left_kernels = Vec::new();
    for cf in col_factors {
        let src = format!("sin(2*a*i)*({cf})");
        let tf = TransformFn::parse(&src, &[("a", 1.0)]).map_err(|e| e.to_string())?;
        let base = deconstruction(n, &rational(1, 1)).to_float();
        let b = apply_transform(&base, &tf, Mode::Multiply).map_err(|e| e.to_string())?;
        left_kernels.push(b.transpose().null_basis(1e-10));
    }
    for k in 1..left_kernels.len() {
        if left_kernels[k].len() != 1 || !subspace_equal(&left_kernels[0], &left_kernels[k], 1e-9) {
            return Err(format!("left kernel moved under column factor `{}`", col_factors[k]));
        }
    }
    Ok("closed forms within 1e-9; right kernel invariant across 5 row factors (a = 1 and 1.5), left kernel across 5 column factors".into())
}

/// N = 50 tower: numeric singular values match the closed form within 1e-8
/// (after the denominator adjudication, which the comparison records), the
/// band form with +cos matches the same multiset, and the gap fits follow the
/// constant and linear-in-k laws.
fn criterion_8() -> Result<String, String> {
    let n = 50;
    let spec = ModelSpec::new(ModelKind::KkBidiagonal, n);
    let cmp = models::compare_spectrum(&spec).map_err(|e| e.to_string())?;
    if cmp.max_rel_err_analytic > 1e-8 {
        return Err(format!("analytic mismatch {:.2e}", cmp.max_rel_err_analytic));
    }

    // The +cos display form lists the same multiset from the band top.
    let mut band: Vec<f64> = (1..=n)
        .map(|k| {
            let theta = k as f64 * std::f64::consts::PI / (n as f64 + 1.0);
            (2.0 + 2.0 * theta.cos()).max(0.0).sqrt()
        })
        .collect();
    band.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (got, want) in cmp.numeric.iter().zip(&band) {
        if (got - want).abs() > 1e-8 * want.max(1.0) {
            return Err(format!("band form mismatch: {got} vs {want}"));
        }
    }

    let numeric = build(&spec).map_err(|e| e.to_string())?.to_float().singular_values();
    let fits = models::gap_fit_report(&numeric, 10).map_err(|e| e.to_string())?;
    if fits.constant.rms_rel_residual >= 0.02 {
        return Err(format!(
            "constant-law rms residual {:.3}% >= 2%",
            100.0 * fits.constant.rms_rel_residual
        ));
    }
    if fits.linear_in_k.max_rel_residual >= 0.05 || fits.linear_in_k.rms_rel_residual >= 0.05 {
        return Err(format!(
            "linear-law residual max {:.3}% / rms {:.3}% >= 5%",
            100.0 * fits.linear_in_k.max_rel_residual,
            100.0 * fits.linear_in_k.rms_rel_residual
        ));
    }
    let level = std::f64::consts::PI / (n as f64 + 1.0);
    if ((fits.constant.coeff - level) / level).abs() > 0.05 {
        return Err(format!("constant level {} not within 5% of pi/(N+1)", fits.constant.coeff));
    }
    let slope = 0.5 * std::f64::consts::PI.powi(2) / ((n as f64 + 1.0) * (n as f64 + 1.0));
    if ((fits.linear_in_k.coeff - slope) / slope).abs() > 0.10 {
        return Err(format!("linear slope {} not within 10% of the band-top law", fits.linear_in_k.coeff));
    }
    Ok(format!(
        "analytic err {:.1e}; display-convention mismatch {:.1e} recorded; gaps: constant rms {:.2}% (max {:.2}%), linear max {:.2}%",
        cmp.max_rel_err_analytic,
        cmp.max_rel_err_quoted,
        100.0 * fits.constant.rms_rel_residual,
        100.0 * fits.constant.max_rel_residual,
        100.0 * fits.linear_in_k.max_rel_residual,
    ))
}

/// The multinomial closed form equals the elimination kernel exactly, for
/// unit couplings and for random rational couplings with a_0 = 1, n = 2..8.
fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    let mut checks = 0usize;
    for n in 2..=8usize {
        let mut coupling_sets = vec![vec![rational(1, 1); n + 1]];
        for _ in 0..3 {
            let mut a = vec![rational(1, 1)];
            for _ in 0..n {
                a.push(rational(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4)));
            }
            coupling_sets.push(a);
        }
        for couplings in coupling_sets {
            let h = nonlocal_cw(n, &couplings).map_err(|e| e.to_string())?;
            let kernel = h.null_basis(0.0);
            if kernel.len() != 1 {
                return Err(format!("n = {n}: kernel dimension {}", kernel.len()));
            }
            let formula =
                zero_mode_analytic(&ZeroModeFormula::NonlocalMultinomial { couplings }, n)
                    .map_err(|e| e.to_string())?;
            // Both carry the same gauge (last component 1): exact equality.
            if formula != kernel.vectors()[0] {
                return Err(format!("n = {n}: formula differs from the elimination kernel"));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} exact kernel identities"))
}

/// Separability classification on grids up to 8x8, anchored scan agreeing
/// with the full quadruple scan; the shifted difference yields a concrete
/// violating witness.
fn criterion_10() -> Result<String, String> {
    let separable: Vec<(&str, Vec<(&str, f64)>)> = vec![
        ("q^(i-j)", vec![("q", 2.0)]),
        ("c", vec![("c", 7.0)]),
        ("1/(f+i^2)", vec![("f", 1.0)]),
        ("1/(f+j^2)^0.5", vec![("f", 1.0)]),
        ("(f+i^2)/(h+j)", vec![("f", 0.5), ("h", 3.0)]),
        ("q^((-1)^j*j)", vec![("q", 1.5)]),
    ];
    for (src, params) in &separable {
        let g = TransformFn::parse(src, params).map_err(|e| e.to_string())?;
        for (n, m) in [(2, 2), (5, 3), (8, 8)] {
            let rep = is_separable(&g, n, m, SEPARABILITY_TOL).map_err(|e| e.to_string())?;
            if !rep.separable {
                return Err(format!("`{src}` misclassified on {n}x{m}"));
            }
            if four_point_witness(&g, n, m, SEPARABILITY_TOL).map_err(|e| e.to_string())?.is_some() {
                return Err(format!("full scan disagrees for `{src}` on {n}x{m}"));
            }
        }
    }

    let check_witness = |g: &TransformFn, n: usize, m: usize| -> Result<(), String> {
        let rep = is_separable(g, n, m, SEPARABILITY_TOL).map_err(|e| e.to_string())?;
        if rep.separable {
            return Err(format!("misclassified as separable on {n}x{m}"));
        }
        let (i, j, x, y) = rep.witness.ok_or("missing witness")?;
        let lhs = g.evaluate(i, j).unwrap() * g.evaluate(x, y).unwrap();
        let rhs = g.evaluate(x, j).unwrap() * g.evaluate(i, y).unwrap();
        if (lhs - rhs).abs() <= 1e-8 * lhs.abs().max(rhs.abs()) {
            return Err("witness does not violate the four-point identity".into());
        }
        if four_point_witness(g, n, m, SEPARABILITY_TOL).map_err(|e| e.to_string())?.is_none() {
            return Err("full scan found no violation".into());
        }
        Ok(())
    };
    let shifted3 = TransformFn::parse("f+i-j", &[("f", 3.0)]).unwrap();
    check_witness(&shifted3, 3, 3)?;
    check_witness(&nonseparable_example(), 8, 8)?;
    Ok("6 separable families and 2 shifted-difference witnesses, anchored = full scan".into())
}
