//! Shared oracles and generators for the integration suites. Each test
//! target compiles its own copy, so not every helper is used everywhere.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use nullforge::matrix::{bigint_determinant, DenseMatrix};
use nullforge::TransformFn;

/// Brute-force rank oracle: the largest k such that some k x k minor has a
/// nonzero determinant. Exponential; meant for dims <= 7.
pub fn minor_rank(rows: &[Vec<i64>]) -> usize {
    let n = rows.len();
    let m = rows[0].len();
    for k in (1..=n.min(m)).rev() {
        for rsel in combinations(n, k) {
            for csel in combinations(m, k) {
                let sub: Vec<BigInt> = rsel
                    .iter()
                    .flat_map(|&r| csel.iter().map(move |&c| BigInt::from(rows[r][c])))
                    .collect();
                if bigint_determinant(k, &sub) != BigInt::from(0) {
                    return k;
                }
            }
        }
    }
    0
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in start..n {
            current.push(v);
            rec(v + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

pub fn random_int_rows<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> DenseMatrix {
    DenseMatrix::from_i64_rows(&random_int_rows(rng, rows, cols, bound))
}

/// Product of two thin integer factors: rank at most `rank`.
pub fn random_low_rank_rows<R: Rng>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> Vec<Vec<i64>> {
    let left = random_int_rows(rng, rows, rank, 3);
    let right = random_int_rows(rng, rank, cols, 3);
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (0..rank).map(|t| left[i][t] * right[t][j]).sum())
                .collect()
        })
        .collect()
}

/// Six separable transform families with exactly-representable parameters,
/// finite and nonzero on every grid up to at least 8 x 8.
pub fn separable_families() -> Vec<TransformFn> {
    let parse = |src: &str, params: &[(&str, f64)]| TransformFn::parse(src, params).unwrap();
    vec![
        parse("c", &[("c", 2.5)]),
        parse("1/(f+i^2)", &[("f", 1.0)]),
        parse("1/(f+j^2)", &[("f", 2.0)]),
        parse("q^(i-j)", &[("q", 2.0)]),
        parse("q^((-1)^j*j)", &[("q", 1.5)]),
        parse("(f+i^2)/(h+j)", &[("f", 0.5), ("h", 3.0)]),
    ]
}

/// A transform violating the four-point identity on any grid with two rows
/// and two columns. The non-integer shift keeps it nonzero at every integer
/// index difference, so it satisfies the evaluation precondition on any grid.
pub fn nonseparable_example() -> TransformFn {
    TransformFn::parse("f+i-j", &[("f", 7.5)]).unwrap()
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Deterministic corpus of random integer matrices, dims <= 8 and entries in
/// [-9, 9]. A third of them get one row duplicated so that extra nullity
/// (beyond the rectangular shape) shows up without leaving the entry range.
pub fn random_matrix_corpus(seed: u64, count: usize) -> Vec<DenseMatrix> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=8);
            let mut data = random_int_rows(&mut rng, rows, cols, 9);
            if k % 3 == 0 && rows >= 2 {
                let (src, dst) = (rng.gen_range(0..rows), rng.gen_range(0..rows));
                data[dst] = data[src].clone();
            }
            DenseMatrix::from_i64_rows(&data)
        })
        .collect()
}
