//! Build reduced and unreduced complexes, check ∂² = 0, and print homology.

use khovcss::diagram::{braid_closure, clasp, gen_torus};
use khovcss::khovanov::{build_complex, homology, LabelBasis};

fn main() -> khovcss::Result<()> {
    let examples =
        [("clasp", clasp()), ("trefoil", gen_torus(3)?), ("figure-eight", braid_closure(3, &[1, -2, 1, -2])?)];
    for (name, d) in &examples {
        for reduced in [true, false] {
            let c = build_complex(d, reduced, LabelBasis::Pm)?;
            c.check_d_squared()?;
            let h = homology(d, reduced)?;
            let hs: Vec<usize> = c.degrees().map(|i| h.h(i)).collect();
            println!(
                "{name:<13} {:<9} dims {:?}  Kh {:?}",
                if reduced { "reduced" } else { "unreduced" },
                c.dims(),
                hs
            );
        }
    }
    Ok(())
}
