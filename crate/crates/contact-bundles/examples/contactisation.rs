//! Contactisation of the ideal Liouville structure on T^2 x D^2: the
//! form u lambda + u psi is contact up to and including the boundary.

use contact_bundles::construct::{contactise, BoundarySlice, ContactiseInput};
use contact_bundles::{BaseForm, BundleSpec, ModelFactor, ModelManifold, ScalarField};

fn main() -> contact_bundles::Result<()> {
    let tau = std::f64::consts::TAU;
    let base = ModelManifold::product(vec![
        ModelFactor::circle(12),
        ModelFactor::circle(12),
        ModelFactor::interval(0.0, 1.0, 12),
        ModelFactor::circle(12),
    ]);
    let bundle = BundleSpec::trivial(base.clone());
    let r = ScalarField::coordinate(2);
    let u = ScalarField::one().sub(&r.powi(2));
    let ang = ScalarField::coordinate(3).scale(tau);
    let x = r.mul(&ang.cos());
    let y = r.mul(&ang.sin());
    let lambda = BaseForm::new(1, base.clone())
        .with_term(&[0], x.div(&u))
        .with_term(&[1], y.div(&u).neg());
    let extension = BaseForm::new(1, base.clone())
        .with_term(&[0], x)
        .with_term(&[1], y.neg());

    let (_, report) = contactise(&ContactiseInput {
        bundle,
        u,
        lambda,
        extension: Some(extension),
        boundary: Some(BoundarySlice { factor: 2, value: 1.0 }),
        interior_eps: 0.05,
    })?;
    println!(
        "interior symplectic min {:.4}, boundary contact min {:.4}, contact min {:.4}",
        report.interior_symplectic.min_value,
        report.boundary_contact.unwrap().min_value,
        report.contact.min_value
    );
    Ok(())
}
