//! [[n;k;d]] for small members of each family, exact and bounded.

use khovcss::csscode::{CssCode, Provenance};
use khovcss::diagram::Family;
use khovcss::families::{expected_params, FamilySpec};
use khovcss::homalg::DistanceMode;
use khovcss::khovanov::{build_complex, LabelBasis};

fn main() -> khovcss::Result<()> {
    let specs = [
        FamilySpec::new(Family::Unlink, 1, None)?,
        FamilySpec::new(Family::Unlink, 2, None)?,
        FamilySpec::new(Family::Unknot, 1, None)?,
        FamilySpec::new(Family::Unknot, 2, None)?,
        FamilySpec::new(Family::Torus, 5, Some(3))?,
        FamilySpec::new(Family::Torus, 6, Some(4))?,
    ];
    for spec in specs {
        let c = build_complex(&spec.diagram()?, true, LabelBasis::Pm)?;
        let i0 = spec.degree() as i32;
        let code = CssCode::from_complex_slice(&c, i0, Some(Provenance::family(spec.family, spec.l, i0)))?;
        let exact = code.params(DistanceMode::default())?;
        let bounded = code.params(DistanceMode::Bounded { w_max: 3 })?;
        let e = expected_params(&spec);
        println!(
            "{:<6} l={} i0={}: {exact}  (d_x {}, d_z {})  bounded(w<=3): {}  closed form [[{};{};{}]]",
            spec.family.to_string(),
            spec.l,
            i0,
            exact.d_x,
            exact.d_z,
            bounded.d,
            e.n,
            e.k,
            e.d
        );
    }
    Ok(())
}
