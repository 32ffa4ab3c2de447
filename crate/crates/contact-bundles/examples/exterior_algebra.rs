//! Wedge products, exterior derivatives and frame evaluation on a torus
//! and a sphere.

use contact_bundles::{
    frame_at, positivity_sweep, tangential_max, BaseForm, ModelFactor, ModelManifold, ScalarField,
};

fn main() -> contact_bundles::Result<()> {
    let tau = std::f64::consts::TAU;

    // forms on T^2 with period-1 coordinates
    let t2 = ModelManifold::torus(2, 32);
    let beta = BaseForm::new(1, t2.clone())
        .with_term(&[0], ScalarField::coordinate(1).scale(tau).cos());
    let dbeta = beta.ext_d();
    let fr = frame_at(&t2, &[0.25, 0.125])?;
    println!("d(cos(2 pi t2) dt1) on the coordinate frame: {:.6}", dbeta.eval_on_frame(&fr)?);

    // d^2 = 0 and the Leibniz rule, numerically
    let f = ScalarField::coordinate(0)
        .scale(tau)
        .sin()
        .mul(&ScalarField::coordinate(1).scale(2.0 * tau).cos());
    let ddf = BaseForm::zero_form(f.clone(), t2.clone()).ext_d().ext_d();
    println!("max |d(df)| over the grid: {:.3e}", tangential_max(&ddf, &t2)?);

    let a = BaseForm::zero_form(f, t2.clone());
    let ab = a.wedge(&beta)?;
    let lhs = ab.ext_d();
    let rhs = a.ext_d().wedge(&beta)?.add(&a.wedge(&dbeta)?)?;
    println!(
        "Leibniz residual: {:.3e}",
        tangential_max(&lhs.sub(&rhs)?, &t2)?
    );

    // the outward-oriented area form of the unit sphere sweeps to +1
    let s2 = ModelManifold::product(vec![ModelFactor::sphere2(24)]);
    let area = BaseForm::new(2, s2.clone())
        .with_term(&[1, 2], ScalarField::coordinate(0))
        .with_term(&[2, 0], ScalarField::coordinate(1))
        .with_term(&[0, 1], ScalarField::coordinate(2));
    let sweep = positivity_sweep(&area, &s2, 1e-9)?;
    println!(
        "sphere area form on oriented frames: min {:.12} (passed: {})",
        sweep.min_value, sweep.passed
    );
    Ok(())
}
