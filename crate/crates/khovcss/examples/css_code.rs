//! Slice a complex into a CSS code, audit its sparseness and export it.

use khovcss::csscode::{CssCode, ExportFormat, Provenance};
use khovcss::diagram::{gen_family, Family};
use khovcss::khovanov::{build_complex, LabelBasis};

fn main() -> khovcss::Result<()> {
    let (family, l, r) = (Family::Torus, 4, 2);
    let c = build_complex(&gen_family(family, l)?, true, LabelBasis::Pm)?;
    let code = CssCode::from_complex_slice(&c, r, Some(Provenance::family(family, l, r)))?;
    println!("n = {}, k = {}", code.n(), code.k());

    let audit = code.sparseness_audit();
    println!("H_X rows {:?}, H_Z rows {:?}", audit.h_x.row_range(), audit.h_z.row_range());
    for check in &audit.checks {
        println!("  {:<5} {}", if check.pass { "ok" } else { "FAIL" }, check.claim);
    }

    let dir = std::env::temp_dir().join("khovcss-css-example");
    for format in [ExportFormat::Alist, ExportFormat::MatrixMarket, ExportFormat::Json] {
        for path in code.write_files(format, &dir, "torus_4_2")? {
            println!("wrote {}", path.display());
        }
    }
    let files = code.export(ExportFormat::Alist)?;
    let texts: Vec<&str> = files.iter().map(|(_, t)| t.as_str()).collect();
    let back = CssCode::import(ExportFormat::Alist, &texts)?;
    println!("alist round trip: {}", back.h_x() == code.h_x() && back.h_z() == code.h_z());
    println!("\nH_X in alist form:\n{}", files[0].1);
    Ok(())
}
