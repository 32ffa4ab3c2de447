//! Dividing sets, the contact form they carry, and the induced
//! symplectic pieces for the twisted form on the 3-torus.

use contact_bundles::gallery::lutz_t3_data;
use contact_bundles::splitting::{
    dividing_set, gamma_contact_check, symplectic_pieces, weak_filling_w1, weak_filling_w2,
    contact_slice,
};
use contact_bundles::{decompose_alpha, BaseForm};

fn main() -> contact_bundles::Result<()> {
    let (bundle, alpha) = lutz_t3_data(32);
    let base = bundle.base.clone();
    let (beta, u, regular) = decompose_alpha(&alpha)?;
    println!("0 regular value of u: {regular}");

    let mesh = dividing_set(&u, &base, 1)?;
    println!(
        "dividing set: {} zeros, {} cells in the positive piece",
        mesh.zero_points.len(),
        mesh.positive_cells()
    );

    let gamma = gamma_contact_check(&beta, &mesh, 1)?;
    println!("contact form on the dividing set: min {:.6}", gamma.min_value);

    let omega = BaseForm::zero(2, base.clone());
    let (plus, minus) = symplectic_pieces(&beta, &u, &omega, 1, 0.1)?;
    println!(
        "pieces: plus min {:.4}, minus min {:.4}",
        plus.min_value, minus.min_value
    );

    let slice = contact_slice(&beta, &u, &base, 1, 0.0)?;
    let w1 = weak_filling_w1(&slice, &omega, 1)?;
    let w2 = weak_filling_w2(&slice, &omega, 1, &[])?;
    println!("weak fillings: w1 {} / w2 {}", w1.passed, w2.passed);
    Ok(())
}
