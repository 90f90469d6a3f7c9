//! Closed forms against computation, one JSON line per instance.

use khovcss::diagram::Family;
use khovcss::families::verify_family;
use khovcss::homalg::DistanceMode;

fn main() -> khovcss::Result<()> {
    let runs = [
        (Family::Unlink, vec![1, 2], DistanceMode::default()),
        (Family::Unknot, vec![1, 2, 3], DistanceMode::Bounded { w_max: 4 }),
        (Family::Torus, vec![3, 4, 5], DistanceMode::default()),
    ];
    for (family, ls, mode) in runs {
        for rec in verify_family(family, &ls, mode)? {
            println!("{}", serde_json::to_string(&rec)?);
        }
    }
    Ok(())
}
