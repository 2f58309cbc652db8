//! Plane-wave convergence study on one mesh family.
//!
//! `cargo run --release --example convergence_table -- [family] [levels]`

use hdiv_wave::analysis::{eoc, mean_rate};
use hdiv_wave::mesh::{generate, MeshFamily, MeshKind};
use hdiv_wave::simulation::{simulate, Discretization, SimOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let kind: MeshKind = args.next().as_deref().unwrap_or("triangle").parse()?;
    let levels: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let family = MeshFamily::unit_square(kind, 8);
    let opts = SimOptions { energy_every: 100, ..SimOptions::default() };

    let mut rows = Vec::new();
    println!("h,energy_error,discrete_error,velocity_error,div_error,tau_max");
    for level in 0..levels {
        let h = family.nominal_h(level);
        let disc = Discretization::new(generate(&family, level)?)?;
        let out = simulate(&disc, h, &opts, |_, _, _| Ok(()))?;
        let r = out.report;
        println!(
            "{h},{:.6},{:.6},{:.6},{:.6},{:.5}",
            r.energy_error, r.discrete_error, r.velocity_error, r.div_error, out.stability.tau_max
        );
        rows.push(r);
    }
    let energy: Vec<_> = rows.iter().map(|r| (r.h, r.energy_error)).collect();
    let discrete: Vec<_> = rows.iter().map(|r| (r.h, r.discrete_error)).collect();
    let (re, rd) = (eoc(&energy), eoc(&discrete));
    println!("eoc energy:   {:?} mean {:?}", re, mean_rate(&re));
    println!("eoc discrete: {:?} mean {:?}", rd, mean_rate(&rd));
    Ok(())
}
