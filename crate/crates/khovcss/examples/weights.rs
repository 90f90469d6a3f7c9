//! Minimum homology weights along Reidemeister moves: exact doubling
//! under positive curls, and an exploratory look at R2 and R3.

use khovcss::diagram::{kinked_unknot, random_rmove_pair, RMove};
use khovcss::homalg::{min_homology_weight, DistanceMode};
use khovcss::khovanov::{build_complex, homology, LabelBasis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn weights(d: &khovcss::diagram::PlanarDiagram) -> khovcss::Result<Vec<String>> {
    let c = build_complex(d, true, LabelBasis::Pm)?;
    let h = homology(d, true)?;
    c.degrees()
        .map(|i| {
            if h.h(i) == 0 {
                return Ok("-".to_string());
            }
            Ok(min_homology_weight(&c, i, DistanceMode::default())?.to_string())
        })
        .collect()
}

fn main() -> khovcss::Result<()> {
    for (neg, pos) in [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2)] {
        println!("unknot {neg}- {pos}+ : d^i = {:?}", weights(&kinked_unknot(neg, pos))?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in [RMove::R2, RMove::R3] {
        for _ in 0..3 {
            let (a, b) = random_rmove_pair(&mut rng, kind, 6)?;
            println!("{kind:?} (shift {}): {:?} -> {:?}", kind.shift(), weights(&a)?, weights(&b)?);
        }
    }
    Ok(())
}
