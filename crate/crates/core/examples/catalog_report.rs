//! Prints the text report for every catalog entry at small parameters.

use std::collections::BTreeMap;

use metric_lie::cli::report::build_report;
use metric_lie::constructions::catalog;
use metric_lie::linalg::Tolerance;

fn main() -> metric_lie::error::Result<()> {
    let tol = Tolerance::default();
    let entries: [(&str, &[(&str, f64)]); 7] = [
        ("heisenberg", &[("n", 2.0)]),
        ("einstein_solvable", &[("n", 2.0)]),
        ("sl_killing", &[("n", 2.0)]),
        ("sl_complex_typeI", &[("n", 2.0), ("lambda", 1.0), ("mu", 2.0)]),
        ("affine_plane", &[]),
        ("abelian", &[("p", 1.0), ("q", 2.0)]),
        ("double_ext_demo", &[("n", 2.0)]),
    ];
    for (name, params) in entries {
        let params: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let m = catalog(name, &params)?;
        println!("== {name} {params:?}\n{}", build_report(&m, &tol)?.to_text());
    }
    Ok(())
}
