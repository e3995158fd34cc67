//! `E_min` far below what a dense solver can resolve, from the consistency
//! function in double-double arithmetic.

use ntos::analytic::linear_law;
use ntos::eig::extended::emin_root_detailed;
use ntos::eig::spectrum_record;
use ntos::model::{ChainParams, SystemSize};

fn main() -> ntos::Result<()> {
    let params = ChainParams::symmetric(2.8, 1.5, 1.0, 1e-9)?;
    let law = linear_law(&params)?;
    println!("{:>4} {:>24} {:>12} {:>10} {:>10}", "N", "E_min", "residual", "ln|E|", "law");
    for n in [10, 30, 60, 100, 150] {
        let size = SystemSize::new(n)?;
        let root = emin_root_detailed(&params, size, 1e-3)?;
        let e = root.value().re;
        println!(
            "{n:>4} {:>24.16e} {:>12.2e} {:>10.4} {:>10.4}",
            e,
            root.residual,
            e.abs().ln(),
            law.predict_ln_abs(n)
        );
    }
    let rec = spectrum_record(&params, SystemSize::new(60)?)?;
    println!("spectrum_record at N = 60 picks {} for E_min", rec.e_min_source.as_str());
    Ok(())
}
