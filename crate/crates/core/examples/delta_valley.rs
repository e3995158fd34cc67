//! The valley of `ln Δ(N, E)` and its turning point, an independent check on
//! the critical size and energy.

use ntos::analytic::saturation_prediction;
use ntos::eig::{delta_map, DeltaForm};
use ntos::model::ChainParams;

fn main() -> ntos::Result<()> {
    let params = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5)?;
    let map = delta_map(&params, (2.0, 80.0), (0.005, 0.4), (781, 400), DeltaForm::Modulus)?;
    let valley = map.valley();
    for (e, n) in valley.iter().step_by(40) {
        println!("E {e:.4}  valley at N {n:.1}");
    }
    let (e, n) = map.turning_point().expect("valley is nonempty");
    let pred = saturation_prediction(&params)?;
    println!("turning point E {e:.4}, N {n:.1}");
    println!("closed form   E {:.4}, N {:.1}", pred.e_c, pred.n_c);
    Ok(())
}
