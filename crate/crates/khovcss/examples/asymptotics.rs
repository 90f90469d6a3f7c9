//! Growth of the unknot and unlink lengths and the balanced torus slice.

use khovcss::asymptotics::{best_param_check, convergence_table, legendre_check, unlink_t};
use khovcss::families::{epsilon_stream, r_of_l, subfamily_constants};

fn main() -> khovcss::Result<()> {
    println!("T_l: {:?}", (0..8).map(|l| unlink_t(l).to_string()).collect::<Vec<_>>());
    println!("legendre identity holds up to l = 200: {}", (0..=200).all(|l| legendre_check(l).pass));

    for row in convergence_table(&[10, 100, 1000, 10_000])? {
        println!(
            "l={:>6}  sum-of-squares ratio {:.6}  unlink ratio {:.6}",
            row.l, row.sum_squares_ratio, row.unlink_ratio
        );
    }

    let c = subfamily_constants(1e-13)?;
    println!("alpha0 {:.12}  beta0 {:.12}  gamma0 {:.12}", c.alpha0, c.beta0, c.gamma0);
    println!("r_l for l = 10, 100, 1000: {} {} {}", r_of_l(10), r_of_l(100), r_of_l(1000));

    let rep = best_param_check(2..=2000);
    println!("inequality holds from l = {:?}; ratio band from l = {:?}", rep.threshold, rep.ratio_threshold);
    let eps: Vec<String> = epsilon_stream(1..=12).iter().map(|(_, e)| format!("{e:+.3}")).collect();
    println!("eps_1..12: {}", eps.join(" "));
    Ok(())
}
