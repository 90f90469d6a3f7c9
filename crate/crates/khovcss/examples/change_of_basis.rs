//! The 1/X and ± bases give conjugate complexes with the same homology.

use khovcss::diagram::gen_torus;
use khovcss::homalg::homology_dims;
use khovcss::khovanov::{build_complex, change_basis, LabelBasis};

fn main() -> khovcss::Result<()> {
    let d = gen_torus(3)?;
    for reduced in [true, false] {
        let pm = build_complex(&d, reduced, LabelBasis::Pm)?;
        let onex = build_complex(&d, reduced, LabelBasis::OneX)?;
        let converted = change_basis(&onex)?;
        let same = pm.differentials() == converted.differentials();
        println!(
            "reduced={reduced}: ± equals converted 1/X: {same}; ranks {:?} vs {:?}",
            homology_dims(&pm)?.ranks,
            homology_dims(&onex)?.ranks
        );
        let d0 = pm.differential(0).expect("degree 0 map");
        println!("  ∂⁰ in ±:  {d0:?}");
        println!("  ∂⁰ in 1/X: {:?}", onex.differential(0).expect("degree 0 map"));
    }
    Ok(())
}
