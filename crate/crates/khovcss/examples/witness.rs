//! Explicit torus codewords, checked on the sparse cube far beyond what a
//! dense complex could hold.

use khovcss::families::{torus_witness, unknot_certificate, verify_torus_witness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> khovcss::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (l, r) in [(3, 2), (8, 5), (12, 6), (14, 9)] {
        let eps: Vec<bool> = (0..l - 1).map(|_| rng.gen()).collect();
        let rep = verify_torus_witness(l, r, &eps)?;
        println!(
            "l={l:>2} r={r:>2}: weight {:>4} (C(l,r) = {:>4})  cocycle {}  not a coboundary {}",
            rep.weight, rep.expected_weight, rep.cocycle, rep.not_coboundary
        );
    }

    let states = torus_witness(4, 2, &[true, false, true])?;
    for s in &states {
        println!("  {}", s.describe(4, khovcss::khovanov::LabelBasis::Pm));
    }

    for (neg, pos) in [(1, 1), (2, 2), (3, 1)] {
        let cert = unknot_certificate(neg, pos)?;
        println!("unknot with {neg} negative / {pos} positive curls: {} <= d <= {}", cert.lower, cert.upper);
    }
    Ok(())
}
