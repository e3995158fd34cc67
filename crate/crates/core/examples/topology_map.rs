//! Coarse text rendering of the winding map over `(t1, t2)` at `γ = 1`.
//! `+`/`-` mark winding ±1, `.` the line gap and a blank the masked tube.

use ntos::experiments::{phase_grid, Axis, PhaseQuantity, PhaseSpec};

fn main() -> ntos::Result<()> {
    let axis = Axis { lo: -4.0, hi: 4.0, count: 41 };
    let grid = phase_grid(&PhaseSpec {
        t1: axis,
        t2: axis,
        gamma: 1.0,
        lambda_l: 0.0,
        lambda_r: 0.0,
        quantity: PhaseQuantity::Winding,
        tube: 0.05,
    })?;
    println!("t2 up, t1 right");
    for j in (0..grid.t2_axis.len()).rev() {
        let row: String = (0..grid.t1_axis.len())
            .map(|i| match grid.values[i][j] {
                Some(w) if w > 0.5 => '+',
                Some(w) if w < -0.5 => '-',
                Some(_) => '.',
                None => ' ',
            })
            .collect();
        println!("{:>5.1} {row}", grid.t2_axis[j]);
    }
    println!("{} of {} cells unmasked", grid.unmasked(), 41 * 41);
    Ok(())
}
