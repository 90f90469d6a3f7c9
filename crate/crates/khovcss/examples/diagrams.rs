//! Generate the three families and a braid closure; print crossings,
//! components and a few resolution circle counts.

use khovcss::diagram::{braid_closure, gen_family, Family};

fn main() -> khovcss::Result<()> {
    for family in [Family::Unknot, Family::Unlink, Family::Torus] {
        for l in 1..=3 {
            let d = gen_family(family, l)?;
            println!(
                "{family:<7} l={l}: {} crossings, {} components, marked edge {:?}",
                d.n_crossings(),
                d.components(),
                d.marked_edge()
            );
        }
    }

    let figure_eight = braid_closure(3, &[1, -2, 1, -2])?;
    println!("\nfigure-eight closure: {:?}", figure_eight.crossings());
    for mask in 0..1u64 << figure_eight.n_crossings() {
        print!("{}", figure_eight.circle_count(mask));
    }
    println!("  <- circles per resolution");

    let m = figure_eight.mirror();
    println!("mirror equals canonical form of itself: {}", m.same_as(&m.canonical()));
    println!("{}", serde_json::to_string(&gen_family(Family::Torus, 2)?)?);
    Ok(())
}
