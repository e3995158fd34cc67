//! Two-wave reconstruction of the `E_min` eigenvector compared with inverse
//! iteration on the dense matrix.

use ntos::eig::dense::Certifier;
use ntos::eig::eigvec::{boundary_residuals, overlap};
use ntos::eig::{reconstruct_eigenvector, spectrum_record};
use ntos::model::{build_hamiltonian, ChainParams, SystemSize};

fn main() -> ntos::Result<()> {
    let params = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5)?;
    for n in [10, 20, 40] {
        let size = SystemSize::new(n)?;
        let rec = spectrum_record(&params, size)?;
        let state = reconstruct_eigenvector(&params, size, rec.e_min)?;
        let h = build_hamiltonian(&params, size);
        let (dense_vec, residual) = Certifier::new(&h).eigenvector(rec.e_min);
        let (left, right) = boundary_residuals(&params, size, rec.e_min, &state.psi);
        println!(
            "N {n:>3}: E_min {:+.4e}, overlap {:.12}, inverse-iteration residual {residual:.1e}, terminal rows {left:.1e} / {right:.1e}",
            rec.e_min.re,
            overlap(&state.psi, &dense_vec),
        );
    }
    Ok(())
}
