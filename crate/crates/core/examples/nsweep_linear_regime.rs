//! `ln|E_min|` against `N`, the fitted line and the closed-form law.

use ntos::experiments::{fit_linear_regime, nsweep};
use ntos::model::ChainParams;

fn main() -> ntos::Result<()> {
    for (label, t1, t2) in [("point gap", 2.5, 2.8), ("line gap", 2.8, 1.5)] {
        let params = ChainParams::symmetric(t1, t2, 1.0, 1e-7)?;
        let sweep = nsweep(&params, 2, 70)?;
        let law = sweep.law.expect("law applies away from the boundaries");
        let fit = fit_linear_regime(&sweep)?;
        println!("{label} ({t1}, {t2}, 1, 1e-7)");
        println!("  law  slope {:+.6}  intercept {:+.4}", law.slope, law.intercept);
        println!(
            "  fit  slope {:+.6}  intercept {:+.4}  N {}..{}  r2 {:.8}",
            fit.slope, fit.intercept, fit.window.0, fit.window.1, fit.r2
        );
        for (rec, pred) in sweep.records.iter().zip(&sweep.predictions).step_by(8) {
            println!(
                "  N {:>3}  ln|E_min| {:>9.4}  law {:>9.4}  {}",
                rec.n,
                rec.e_min.norm().ln(),
                pred.unwrap_or(f64::NAN),
                rec.e_min_source.as_str()
            );
        }
    }
    Ok(())
}
