//! Critical size and energy: closed form, second-order expansion and the
//! numeric onset of a complex `E_min`.

use ntos::analytic::{saturation_prediction, SaturationCoefficients};
use ntos::experiments::{detect_saturation, nsweep, DEFAULT_IM_TOL};
use ntos::model::ChainParams;

fn main() -> ntos::Result<()> {
    for (t1, t2, lam) in [(2.5, 2.8, 1e-5), (2.0, 1.5, 1e-7), (2.5, 2.8, 1e-7)] {
        let params = ChainParams::symmetric(t1, t2, 1.0, lam)?;
        let closed = saturation_prediction(&params)?;
        let taylor = SaturationCoefficients::taylor(&params)?.turning_point()?;
        let numeric = detect_saturation(&nsweep(&params, 2, 90)?, DEFAULT_IM_TOL)?;
        println!("({t1}, {t2}, 1, {lam:e})");
        println!("  closed form   N_c {:>6.2}  E_c {:.4}", closed.n_c, closed.e_c);
        println!("  expansion     N_c {:>6.2}  E_c {:.4}", taylor.n_c, taylor.e_c);
        println!(
            "  numeric       N_c {:>6}  E_c {:.4} (fold midpoint {:.4}, {})",
            numeric.n_c_num,
            numeric.e_c_num,
            numeric.e_c_fold,
            numeric.criterion.as_str()
        );
    }
    Ok(())
}
