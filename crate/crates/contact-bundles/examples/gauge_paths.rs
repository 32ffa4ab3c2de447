//! Gauge changes leave the contact verdict untouched, and the convex
//! path between gauge-related forms stays contact.

use contact_bundles::construct::interpolation_check;
use contact_bundles::gallery::lutz_t3_data;
use contact_bundles::{change_gauge, contact_check, decompose_alpha, BaseForm, ScalarField};

fn main() -> contact_bundles::Result<()> {
    let (bundle, alpha) = lutz_t3_data(24);
    let base = bundle.base.clone();
    let (beta, u, _) = decompose_alpha(&alpha)?;

    let gamma = BaseForm::new(1, base.clone()).with_term(&[0], ScalarField::constant(0.1));
    let shifted = change_gauge(&alpha, &gamma)?;
    let before = contact_check(&alpha, 1e-9)?;
    let after = contact_check(&shifted, 1e-9)?;
    println!(
        "contact min before/after the gauge change: {:.12} / {:.12}",
        before.min_value, after.min_value
    );

    let back = change_gauge(&shifted, &gamma.neg())?;
    let p = [0.3, 0.15];
    let v = vec![1.0, 0.0];
    println!(
        "round trip is exact: {}",
        alpha.a().eval_on_vectors(&p, &[v.clone()])? == back.a().eval_on_vectors(&p, &[v])?
    );

    let beta1 = beta.sub(&gamma.scale_field(&u))?;
    let reports = interpolation_check(&beta, &beta1, &u, &bundle, &[], Some(1))?;
    let min = reports
        .iter()
        .map(|r| r.min_value)
        .fold(f64::INFINITY, f64::min);
    println!(
        "interpolation: {} samples, worst min {:.6}, all contact: {}",
        reports.len(),
        min,
        reports.iter().all(|r| r.passed)
    );
    Ok(())
}
