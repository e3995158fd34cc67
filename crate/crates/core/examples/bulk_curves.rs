//! PBC and GBZ bulk spectra, and how far the finite-chain bulk eigenvalues
//! sit from each.

use ntos::analytic::{bulk_curves, CurveKind};
use ntos::experiments::bulk_convergence;
use ntos::model::ChainParams;

fn main() -> ntos::Result<()> {
    let params = ChainParams::symmetric(2.0, 1.5, 1.0, 1e-7)?;
    for kind in [CurveKind::Pbc, CurveKind::Gbz] {
        let c = bulk_curves(&params, kind, 256)?;
        let (re_max, im_max) = c
            .samples
            .iter()
            .fold((0.0f64, 0.0f64), |(r, i), e| (r.max(e.re.abs()), i.max(e.im.abs())));
        println!(
            "{}: winding about 0 = {}, |Re| <= {re_max:.3}, |Im| <= {im_max:.3}",
            kind.as_str(),
            c.winding_about_origin()
        );
    }

    let sizes = [20, 40, 60];
    let cases = [
        ("(2, 1.5, 1, 1e-7) to PBC", params, CurveKind::Pbc),
        ("(2.5, 2.8, 1, 1e-5, 0) to PBC", ChainParams::new(2.5, 2.8, 1.0, 1e-5, 0.0)?, CurveKind::Pbc),
        ("(2.5, 2.8, 1, 0, 1e-5) to GBZ", ChainParams::new(2.5, 2.8, 1.0, 0.0, 1e-5)?, CurveKind::Gbz),
    ];
    for (label, p, kind) in cases {
        let d = bulk_convergence(&p, &sizes, kind)?;
        println!("{label}: {:?}", d.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
    }
    Ok(())
}
