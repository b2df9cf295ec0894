//! Zero-mode profiles of the rescaled clockwork chain at n = 15, q = 2: the
//! geometric family in both orientations and the alternating-column family,
//! with localization metrics. The CSV blocks match
//! `nullforge nullmodes --model uniform_cw --n 15 --gf "q^(i-j)" ... --format csv`.
//!
//! ```bash
//! cargo run --example clockwork_profile
//! ```

use num_rational::BigRational;

use nullforge::analysis::{localization_metrics, profile};
use nullforge::io::profile_csv;
use nullforge::models::{uniform_cw, zero_mode_analytic, ZeroModeFormula};
use nullforge::transform::{apply_transform, Mode};
use nullforge::TransformFn;

fn main() {
    let n = 15;
    let chain = uniform_cw(n, &BigRational::from_integer(1.into()));
    let geometric = TransformFn::parse("q^(i-j)", &[("q", 2.0)]).unwrap();
    let alternating = TransformFn::parse("q^((-1)^j*j)", &[("q", 2.0)]).unwrap();

    for (label, g, mode) in [
        ("geometric, divide (localized at site 1)", &geometric, Mode::Divide),
        ("geometric, multiply (localized at the last site)", &geometric, Mode::Multiply),
        ("alternating column, multiply", &alternating, Mode::Multiply),
    ] {
        let b = apply_transform(&chain, g, mode).unwrap();
        let kernel = b.null_basis(0.0);
        let p = profile(&kernel.vectors()[0]).unwrap();
        let m = localization_metrics(&p);
        println!("# {label}");
        println!("#   ipr {:.4}, peak site {}, suppression {:.3e}", m.ipr, m.peak_site, m.suppression);
        print!("{}", profile_csv(&p));
        println!();
    }

    // The closed form carries the divide orientation; its mirror at 1/q is the
    // multiply orientation.
    let formula = zero_mode_analytic(
        &ZeroModeFormula::CwGeometric { q: BigRational::from_integer(2.into()) },
        n,
    )
    .unwrap();
    let kernel = apply_transform(&chain, &geometric, Mode::Divide)
        .unwrap()
        .null_basis(0.0);
    println!(
        "# closed form proportional to the divide-mode kernel: {}",
        kernel.vectors()[0].proportional_to(&formula, 0.0)
    );
}
