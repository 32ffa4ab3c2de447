//! The connection form of the degree-one bundle over the sphere as a
//! contact form, plus its Euler pairing.

use contact_bundles::construct::boothby_wang;
use contact_bundles::{contact_check, decompose_alpha, euler_pairing, gallery};

fn main() -> contact_bundles::Result<()> {
    let bundle = gallery::hopf_data(24)?;
    let alpha = boothby_wang(&bundle)?;
    let (_, u, _) = decompose_alpha(&alpha)?;
    println!("pair: (0, {})", u.eval(&[0.0, 0.0, 1.0]));

    let report = contact_check(&alpha, 1e-9)?;
    println!(
        "contact sweep: min {:.6} at {:?} (passed: {})",
        report.min_value, report.argmin, report.passed
    );

    let pairing = euler_pairing(&bundle, "s2")?;
    println!("Euler pairing against the fundamental cycle: {pairing:.6}");
    Ok(())
}
