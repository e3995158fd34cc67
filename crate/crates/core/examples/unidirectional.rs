//! Keeping only one terminal coupling can reverse the size scaling.

use ntos::experiments::{fit_linear_regime, unidirectional_sweeps};
use ntos::model::ChainParams;

fn main() -> ntos::Result<()> {
    let params = ChainParams::new(2.5, 2.8, 1.0, 0.0, 0.0)?;
    let sizes: Vec<usize> = (2..=60).collect();
    let (left, right) = unidirectional_sweeps(&params, 1e-5, &sizes)?;
    for (label, sweep) in [("lambda_L only", &left), ("lambda_R only", &right)] {
        let law = sweep.law.expect("one-sided law");
        let fit = fit_linear_regime(sweep)?;
        println!("{label}: law slope {:+.6}, fitted {:+.6} over N {}..{}", law.slope, fit.slope, fit.window.0, fit.window.1);
    }
    println!("{:>4} {:>12} {:>12}", "N", "ln|E| (L)", "ln|E| (R)");
    for (l, r) in left.records.iter().zip(&right.records).step_by(4) {
        println!("{:>4} {:>12.4} {:>12.4}", l.n, l.e_min.norm().ln(), r.e_min.norm().ln());
    }
    Ok(())
}
