//! Dense spectrum of one chain and where `E_min` came from.
//!
//! cargo run --release --example spectrum -- 2.5 2.8 1 1e-5 1e-5 30

use ntos::eig::spectrum_record;
use ntos::model::{classify_topology, ChainParams, SystemSize};

fn main() -> ntos::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let [t1, t2, gamma, ll, lr, n] = match args[..] {
        [a, b, c, d, e, f] => [a, b, c, d, e, f],
        _ => [2.5, 2.8, 1.0, 1e-5, 1e-5, 30.0],
    };
    let params = ChainParams::new(t1, t2, gamma, ll, lr)?;
    let size = SystemSize::new(n as usize)?;
    let signs = classify_topology(&params)?;
    let rec = spectrum_record(&params, size)?;

    println!("{params:?}");
    println!("phase {:?}, winding {}, s_t {}, s_g {}", signs.cls, signs.winding, signs.s_t, signs.s_g);
    println!("dim {}, |H|_F {:.4}, max residual {:.2e}", size.dim(), rec.h_norm, rec.max_residual);
    println!("E_min = {:.6e} {:+.6e}i  ({})", rec.e_min.re, rec.e_min.im, rec.e_min_source.as_str());

    let mut ev = rec.eigenvalues.clone();
    ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    println!("five smallest |E|:");
    for e in ev.iter().take(5) {
        println!("  {:>+.6e} {:>+.6e}i", e.re, e.im);
    }
    Ok(())
}
