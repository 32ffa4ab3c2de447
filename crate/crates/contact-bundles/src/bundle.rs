//! Calculus of invariant forms on a principal circle bundle, represented
//! downstairs as pairs (a, b) <-> a + psi ^ b relative to a reference
//! connection with prescribed curvature.
//!
//! The total space is never materialized: the connection form psi enters
//! only through its normalization psi(d_theta) = 1 and its curvature. The
//! bundle is oriented fiber-first, so a top wedge power is positive
//! upstairs exactly when its b-component is positive on oriented base
//! frames.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::form::{tangential_max, BaseForm};
use crate::manifold::Manifold;
use crate::sweep::{positivity_sweep, PositivityReport};
use crate::tolerances::{
    A_COMPONENT_TOL, CLOSEDNESS_TOL, INTEGRALITY_TOL, REGULARITY_TOL,
};
use crate::cycle::{integrate_cycle, Cycle2};

/// A circle bundle over a model base, described by its curvature form and
/// a set of named generator cycles for pairing checks.
pub struct BundleSpec {
    pub base: Manifold,
    pub curvature: BaseForm,
    pub generators: Vec<Cycle2>,
}

pub type Bundle = Arc<BundleSpec>;

impl BundleSpec {
    /// Validates closedness of the curvature and integrality of the Euler
    /// pairings against every generator cycle.
    pub fn new(base: Manifold, curvature: BaseForm, generators: Vec<Cycle2>) -> Result<Bundle> {
        assert_eq!(curvature.degree, 2, "curvature must be a 2-form");
        let d_omega = curvature.ext_d();
        let closed = tangential_max(&d_omega, &base)?;
        if closed > CLOSEDNESS_TOL {
            return Err(Error::Precondition(format!(
                "curvature not closed: max |d omega| = {closed:.3e}"
            )));
        }
        let bundle = Arc::new(BundleSpec {
            base,
            curvature,
            generators,
        });
        for cycle in &bundle.generators {
            let pairing = euler_pairing(&bundle, &cycle.name)?;
            if (pairing - pairing.round()).abs() > INTEGRALITY_TOL {
                return Err(Error::Precondition(format!(
                    "Euler pairing against '{}' is {pairing}, not within {INTEGRALITY_TOL} of an integer",
                    cycle.name
                )));
            }
        }
        Ok(bundle)
    }

    /// A bundle with vanishing curvature and no registered cycles.
    pub fn trivial(base: Manifold) -> Bundle {
        let omega = BaseForm::zero(2, base.clone());
        Arc::new(BundleSpec {
            base,
            curvature: omega,
            generators: Vec::new(),
        })
    }

    pub fn dimension_n(&self) -> usize {
        debug_assert_eq!(self.base.intrinsic_dim() % 2, 0);
        self.base.intrinsic_dim() / 2
    }
}

/// The pair (a, b) representing the invariant form a + psi ^ b.
///
/// Gauge offsets applied through `change_gauge` are kept on a stack so an
/// immediately-undone gauge change restores the original coefficients
/// bit for bit.
#[derive(Clone)]
pub struct InvariantForm {
    a: BaseForm,
    b: BaseForm,
    pub bundle: Bundle,
    gauge_stack: Vec<(BaseForm, u64)>,
}

impl InvariantForm {
    pub fn new(a: BaseForm, b: BaseForm, bundle: Bundle) -> Self {
        assert_eq!(
            a.degree,
            b.degree + 1,
            "pair degrees must satisfy deg a = deg b + 1"
        );
        InvariantForm {
            a,
            b,
            bundle,
            gauge_stack: Vec::new(),
        }
    }

    /// A contact candidate alpha = beta + u psi.
    pub fn contact_candidate(beta: BaseForm, u: ScalarField, bundle: Bundle) -> Self {
        let b = BaseForm::zero_form(u, bundle.base.clone());
        InvariantForm::new(beta, b, bundle)
    }

    pub fn degree(&self) -> usize {
        self.a.degree
    }

    /// Horizontal component, gauge terms materialized.
    pub fn a(&self) -> BaseForm {
        let mut a = self.a.clone();
        for (gamma, _) in &self.gauge_stack {
            let gb = gamma.wedge(&self.b).expect("same manifold");
            a = a.sub(&gb).expect("same manifold");
        }
        a
    }

    /// Fiber component.
    pub fn b(&self) -> BaseForm {
        self.b.clone()
    }

    fn same_bundle(&self, other: &InvariantForm) -> bool {
        Arc::ptr_eq(&self.bundle, &other.bundle)
    }
}

/// (a1 + psi^b1) ^ (a2 + psi^b2), using psi ^ psi = 0.
pub fn inv_wedge(t1: &InvariantForm, t2: &InvariantForm) -> Result<InvariantForm> {
    if !t1.same_bundle(t2) {
        return Err(Error::BundleMismatch);
    }
    let (a1, b1) = (t1.a(), t1.b());
    let (a2, b2) = (t2.a(), t2.b());
    let a = a1.wedge(&a2)?;
    let mut b = b1.wedge(&a2)?;
    let a1b2 = a1.wedge(&b2)?;
    b = if t1.degree() % 2 == 0 {
        b.add(&a1b2)?
    } else {
        b.sub(&a1b2)?
    };
    Ok(InvariantForm::new(a, b, t1.bundle.clone()))
}

/// d(a + psi^b) = (da + omega^b) + psi^(-db), from d psi = pi* omega.
pub fn inv_d(t: &InvariantForm) -> Result<InvariantForm> {
    let (a, b) = (t.a(), t.b());
    let da = a.ext_d();
    let wb = t.bundle.curvature.wedge(&b)?;
    Ok(InvariantForm::new(da.add(&wb)?, b.ext_d().neg(), t.bundle.clone()))
}

/// The volume candidate of a contact pair, by the closed formula
/// (d beta + u omega)^(n-1) ^ [n beta ^ du + u (d beta + u omega)].
///
/// Deliberately built from raw form operations, independent of the
/// invariant wedge/differential path it cross-checks.
pub fn omega_volume(
    beta: &BaseForm,
    u: &ScalarField,
    omega: &BaseForm,
    n: usize,
) -> Result<BaseForm> {
    let manifold = beta.manifold.clone();
    let du = BaseForm::zero_form(u.clone(), manifold.clone()).ext_d();
    let core = beta.ext_d().add(&omega.scale_field(u))?;
    let mut bracket = beta.wedge(&du)?.scale(n as f64);
    bracket = bracket.add(&core.scale_field(u))?;
    let mut out = bracket;
    for _ in 0..n.saturating_sub(1) {
        out = core.wedge(&out)?;
    }
    Ok(out)
}

/// Contact verification: computes alpha ^ (d alpha)^n through the
/// invariant-pair algebra, asserts the horizontal component vanishes, and
/// sweeps the fiber component over oriented base frames.
pub fn contact_check(alpha: &InvariantForm, tol: f64) -> Result<PositivityReport> {
    let top = top_wedge_power(alpha)?;
    assert_a_component_vanishes(&top)?;
    positivity_sweep(&top.b(), &alpha.bundle.base, tol)
}

/// alpha ^ (d alpha)^n for a degree-one invariant form.
pub fn top_wedge_power(alpha: &InvariantForm) -> Result<InvariantForm> {
    assert_eq!(alpha.degree(), 1, "contact candidates have degree one");
    let n = alpha.bundle.dimension_n();
    let dalpha = inv_d(alpha)?;
    let mut acc = alpha.clone();
    for _ in 0..n {
        acc = inv_wedge(&acc, &dalpha)?;
    }
    Ok(acc)
}

fn assert_a_component_vanishes(top: &InvariantForm) -> Result<()> {
    let base = &top.bundle.base;
    let a = top.a();
    // Degree 2n+1 on a 2n-dimensional base: when the ambient model is flat
    // the coefficients must vanish identically; on curved ambients the
    // restriction vanishes by arity and only structural sanity remains.
    if base.ambient_dim() == base.intrinsic_dim() {
        if a.is_structurally_zero() {
            return Ok(());
        }
        let worst = a.max_abs_coeff_on_grid();
        if worst > A_COMPONENT_TOL {
            return Err(Error::InternalConsistency(format!(
                "horizontal top component should vanish, max coefficient {worst:.3e}"
            )));
        }
    } else if a.degree <= base.intrinsic_dim() {
        return Err(Error::InternalConsistency(format!(
            "top wedge power produced degree {} on an intrinsic dimension {} base",
            a.degree,
            base.intrinsic_dim()
        )));
    }
    Ok(())
}

/// Max grid residual between the engine's fiber component of
/// alpha ^ (d alpha)^n and the closed volume formula.
pub fn identity_check_lemma_volume(alpha: &InvariantForm) -> Result<f64> {
    let n = alpha.bundle.dimension_n();
    let engine = top_wedge_power(alpha)?.b();
    let (beta, u, _) = decompose_alpha(alpha)?;
    let formula = omega_volume(&beta, &u, &alpha.bundle.curvature, n)?;
    tangential_max(&engine.sub(&formula)?, &alpha.bundle.base)
}

/// Re-expresses an invariant form relative to psi' = psi + gamma:
/// (a, b) becomes (a - gamma ^ b, b) over the curvature omega + d gamma.
///
/// An immediately repeated change with the negated offset pops the stack
/// and restores the original pair exactly.
pub fn change_gauge(t: &InvariantForm, gamma: &BaseForm) -> Result<InvariantForm> {
    let new_curvature = t.bundle.curvature.add(&gamma.ext_d())?;
    let bundle = Arc::new(BundleSpec {
        base: t.bundle.base.clone(),
        curvature: new_curvature,
        generators: t.bundle.generators.clone(),
    });
    let undoes_last = t
        .gauge_stack
        .last()
        .map(|(g, id)| gamma.neg_of() == Some(*id) || g.neg_of() == Some(gamma.id()))
        .unwrap_or(false);
    let mut out = t.clone();
    out.bundle = bundle;
    if undoes_last {
        out.gauge_stack.pop();
    } else {
        out.gauge_stack.push((gamma.clone(), gamma.id()));
    }
    Ok(out)
}

/// Pairing of the Euler class against a named generator cycle:
/// -(1/2 pi) times the curvature integral.
pub fn euler_pairing(bundle: &BundleSpec, cycle_name: &str) -> Result<f64> {
    let cycle = bundle
        .generators
        .iter()
        .find(|c| c.name == cycle_name)
        .ok_or_else(|| Error::UnknownCycle(cycle_name.into()))?;
    let integral = integrate_cycle(&bundle.curvature, cycle)?;
    Ok(-integral.value / std::f64::consts::TAU)
}

/// Accessor for the stored pair of a contact candidate, plus a scan for
/// whether zero is a regular value of u on the grid.
pub fn decompose_alpha(alpha: &InvariantForm) -> Result<(BaseForm, ScalarField, bool)> {
    assert_eq!(alpha.degree(), 1);
    let beta = alpha.a();
    let b = alpha.b();
    let u = b
        .coeffs
        .get(&vec![])
        .cloned()
        .unwrap_or_else(ScalarField::zero);
    let base = &alpha.bundle.base;
    let du = BaseForm::zero_form(u.clone(), base.clone()).ext_d();
    let mut regular = true;
    for flat in 0..base.grid_size() {
        let p = base.grid_point(flat);
        if u.eval(&p).abs() >= REGULARITY_TOL {
            continue;
        }
        let fr = crate::manifold::frame_at(base, &p)?;
        let grad_norm = fr
            .vectors
            .iter()
            .map(|v| du.eval_on_vectors(&p, std::slice::from_ref(v)).unwrap_or(0.0))
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt();
        if grad_norm < REGULARITY_TOL {
            regular = false;
            break;
        }
    }
    Ok((beta, u, regular))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{ModelFactor, ModelManifold};

    const TAU: f64 = std::f64::consts::TAU;

    /// beta = cos(2 pi theta2) d theta1, u = sin(2 pi theta2) over the
    /// trivial bundle on the 2-torus.
    pub fn lutz_t3(res: usize) -> (Bundle, InvariantForm) {
        let base = ModelManifold::torus(2, res);
        let bundle = BundleSpec::trivial(base.clone());
        let beta = BaseForm::new(1, base.clone())
            .with_term(&[0], ScalarField::coordinate(1).scale(TAU).cos());
        let u = ScalarField::coordinate(1).scale(TAU).sin();
        let alpha = InvariantForm::contact_candidate(beta, u, bundle.clone());
        (bundle, alpha)
    }

    #[test]
    fn inv_wedge_matches_componentwise_expansion() {
        let (bundle, _) = lutz_t3(12);
        let base = bundle.base.clone();
        let beta = BaseForm::new(1, base.clone())
            .with_term(&[0], ScalarField::coordinate(1).scale(TAU).cos());
        let u = ScalarField::coordinate(1).scale(TAU).sin();
        let t1 = InvariantForm::new(beta.clone(), BaseForm::zero(0, base.clone()), bundle.clone());
        let t2 = InvariantForm::new(
            BaseForm::zero(1, base.clone()),
            BaseForm::zero_form(u.clone(), base.clone()),
            bundle.clone(),
        );
        let w = inv_wedge(&t1, &t2).unwrap();
        // (beta, 0) ^ (0, u) = (0, -u beta): check at a sample point
        let p = [0.3, 0.1];
        let b = w.b();
        let got = b.eval_on_vectors(&p, &[vec![1.0, 0.0]]).unwrap();
        let expected = -(TAU * 0.1).sin() * (TAU * 0.1).cos();
        assert!((got - expected).abs() < 1e-14);
        assert!(tangential_max(&w.a(), &base).unwrap() < 1e-14);
    }

    #[test]
    fn horizontal_forms_close_under_wedge() {
        let (bundle, _) = lutz_t3(8);
        let base = bundle.base.clone();
        let a1 = BaseForm::new(1, base.clone()).with_term(&[0], ScalarField::one());
        let a2 = BaseForm::new(1, base.clone()).with_term(&[1], ScalarField::one());
        let t1 = InvariantForm::new(a1, BaseForm::zero(0, base.clone()), bundle.clone());
        let t2 = InvariantForm::new(a2, BaseForm::zero(0, base.clone()), bundle.clone());
        let w = inv_wedge(&t1, &t2).unwrap();
        let fr = crate::manifold::frame_at(&base, &[0.2, 0.2]).unwrap();
        assert_eq!(w.a().eval_on_frame(&fr).unwrap(), 1.0);
        assert!(w.b().is_structurally_zero());
    }

    #[test]
    fn psi_wedge_psi_vanishes() {
        let (bundle, _) = lutz_t3(8);
        let base = bundle.base.clone();
        let psi = InvariantForm::new(
            BaseForm::zero(1, base.clone()),
            BaseForm::zero_form(ScalarField::one(), base.clone()),
            bundle.clone(),
        );
        let w = inv_wedge(&psi, &psi).unwrap();
        assert!(tangential_max(&w.a(), &base).unwrap() < 1e-15);
        assert!(tangential_max(&w.b(), &base).unwrap() < 1e-15);
    }

    #[test]
    fn inv_d_of_contact_candidate() {
        let (bundle, alpha) = lutz_t3(16);
        let base = bundle.base.clone();
        let d = inv_d(&alpha).unwrap();
        // a-part: d beta (omega = 0); b-part: -du = -2 pi cos(2 pi theta2) d theta2
        let expected_b = BaseForm::new(1, base.clone())
            .with_term(&[1], ScalarField::coordinate(1).scale(TAU).cos().scale(-TAU));
        let diff = d.b().sub(&expected_b).unwrap();
        assert!(tangential_max(&diff, &base).unwrap() < 1e-9);
        let expected_a = BaseForm::new(1, base.clone())
            .with_term(&[0], ScalarField::coordinate(1).scale(TAU).cos())
            .ext_d();
        let diff_a = d.a().sub(&expected_a).unwrap();
        assert!(tangential_max(&diff_a, &base).unwrap() < 1e-9);
    }

    #[test]
    fn closed_horizontal_form_has_zero_differential() {
        let (bundle, _) = lutz_t3(8);
        let base = bundle.base.clone();
        let a = BaseForm::new(1, base.clone()).with_term(&[0], ScalarField::constant(2.0));
        let t = InvariantForm::new(a, BaseForm::zero(0, base.clone()), bundle);
        let d = inv_d(&t).unwrap();
        assert!(tangential_max(&d.a(), &base).unwrap() < 1e-12);
        assert!(tangential_max(&d.b(), &base).unwrap() < 1e-12);
    }

    #[test]
    fn inv_d_squared_vanishes() {
        let (_, alpha) = lutz_t3(12);
        let base = alpha.bundle.base.clone();
        let dd = inv_d(&inv_d(&alpha).unwrap()).unwrap();
        assert!(tangential_max(&dd.a(), &base).unwrap() <= 1e-5);
        assert!(tangential_max(&dd.b(), &base).unwrap() <= 1e-5);
    }

    #[test]
    fn lutz_volume_is_2pi() {
        let (bundle, alpha) = lutz_t3(24);
        let report = contact_check(&alpha, 1e-9).unwrap();
        assert!(report.passed);
        assert!((report.min_value - TAU).abs() < 1e-6);
        let _ = bundle;
    }

    #[test]
    fn omega_volume_collapses_for_boothby_wang_data() {
        // u = 1, beta = 0, omega symplectic: volume formula gives omega^n
        let base = ModelManifold::product(vec![ModelFactor::sphere2(10)]);
        let area = BaseForm::new(2, base.clone())
            .with_term(&[1, 2], ScalarField::coordinate(0))
            .with_term(&[2, 0], ScalarField::coordinate(1))
            .with_term(&[0, 1], ScalarField::coordinate(2));
        let beta = BaseForm::zero(1, base.clone());
        let omega_n =
            omega_volume(&beta, &ScalarField::one(), &area, 1).unwrap();
        let diff = omega_n.sub(&area).unwrap();
        assert!(tangential_max(&diff, &base).unwrap() < 1e-12);
    }

    #[test]
    fn omega_volume_vanishes_for_constant_zero_u() {
        let (bundle, _) = lutz_t3(8);
        let base = bundle.base.clone();
        let beta = BaseForm::new(1, base.clone()).with_term(&[0], ScalarField::one());
        let v = omega_volume(&beta, &ScalarField::zero(), &bundle.curvature, 1).unwrap();
        assert!(tangential_max(&v, &base).unwrap() < 1e-15);
    }

    #[test]
    fn lemma_volume_identity_on_lutz() {
        let (_, alpha) = lutz_t3(16);
        let residual = identity_check_lemma_volume(&alpha).unwrap();
        assert!(residual <= 1e-8, "residual {residual}");
    }

    #[test]
    fn lemma_volume_identity_trivial_case() {
        let base = ModelManifold::product(vec![ModelFactor::sphere2(8)]);
        let area = BaseForm::new(2, base.clone())
            .with_term(&[1, 2], ScalarField::coordinate(0))
            .with_term(&[2, 0], ScalarField::coordinate(1))
            .with_term(&[0, 1], ScalarField::coordinate(2));
        let bundle = BundleSpec::new(base.clone(), area, vec![]).unwrap();
        let alpha = InvariantForm::contact_candidate(
            BaseForm::zero(1, base.clone()),
            ScalarField::one(),
            bundle,
        );
        let residual = identity_check_lemma_volume(&alpha).unwrap();
        assert_eq!(residual, 0.0);
    }

    #[test]
    fn boothby_wang_over_sphere_is_contact() {
        let base = ModelManifold::product(vec![ModelFactor::sphere2(14)]);
        let area = BaseForm::new(2, base.clone())
            .with_term(&[1, 2], ScalarField::coordinate(0))
            .with_term(&[2, 0], ScalarField::coordinate(1))
            .with_term(&[0, 1], ScalarField::coordinate(2));
        let bundle = BundleSpec::new(base.clone(), area, vec![]).unwrap();
        let alpha = InvariantForm::contact_candidate(
            BaseForm::zero(1, base.clone()),
            ScalarField::one(),
            bundle,
        );
        let report = contact_check(&alpha, 1e-9).unwrap();
        assert!(report.passed);
        assert!((report.min_value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_u_fails_contact() {
        let (bundle, _) = lutz_t3(12);
        let alpha = InvariantForm::contact_candidate(
            BaseForm::zero(1, bundle.base.clone()),
            ScalarField::coordinate(1).scale(TAU).sin(),
            bundle,
        );
        let report = contact_check(&alpha, 1e-9).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn gauge_round_trip_is_exact() {
        let (_, alpha) = lutz_t3(12);
        let base = alpha.bundle.base.clone();
        let gamma = BaseForm::new(1, base.clone()).with_term(&[0], ScalarField::constant(0.1));
        let shifted = change_gauge(&alpha, &gamma).unwrap();
        let back = change_gauge(&shifted, &gamma.neg()).unwrap();
        // bit-exact recovery at samples
        for flat in 0..base.grid_size() {
            let p = base.grid_point(flat);
            for v in [[1.0, 0.0], [0.0, 1.0]] {
                let before = alpha.a().eval_on_vectors(&p, &[v.to_vec()]).unwrap();
                let after = back.a().eval_on_vectors(&p, &[v.to_vec()]).unwrap();
                assert_eq!(before, after);
            }
        }
    }

    #[test]
    fn gauge_shift_matches_beta_minus_u_gamma() {
        let (_, alpha) = lutz_t3(12);
        let base = alpha.bundle.base.clone();
        let gamma = BaseForm::new(1, base.clone()).with_term(&[0], ScalarField::constant(0.1));
        let shifted = change_gauge(&alpha, &gamma).unwrap();
        let (beta, u, _) = decompose_alpha(&alpha).unwrap();
        let expected = beta.sub(&gamma.scale_field(&u)).unwrap();
        let diff = shifted.a().sub(&expected).unwrap();
        assert!(tangential_max(&diff, &base).unwrap() < 1e-14);
    }

    #[test]
    fn gauge_invariance_of_contact_min() {
        let (_, alpha) = lutz_t3(16);
        let gamma = BaseForm::new(1, alpha.bundle.base.clone())
            .with_term(&[0], ScalarField::constant(0.1));
        let shifted = change_gauge(&alpha, &gamma).unwrap();
        let r0 = contact_check(&alpha, 1e-9).unwrap();
        let r1 = contact_check(&shifted, 1e-9).unwrap();
        assert_eq!(r0.passed, r1.passed);
        assert!((r0.min_value - r1.min_value).abs() <= 1e-9);
    }

    #[test]
    fn decompose_alpha_accessor_and_regularity() {
        let (_, alpha) = lutz_t3(16);
        let (beta, u, regular) = decompose_alpha(&alpha).unwrap();
        assert!(regular);
        let p = [0.2, 0.15];
        assert!((u.eval(&p) - (TAU * 0.15).sin()).abs() < 1e-15);
        assert!(
            (beta.eval_on_vectors(&p, &[vec![1.0, 0.0]]).unwrap() - (TAU * 0.15).cos()).abs()
                < 1e-15
        );
    }

    #[test]
    fn boothby_wang_pair_has_empty_dividing_set() {
        let base = ModelManifold::product(vec![ModelFactor::sphere2(8)]);
        let area = BaseForm::new(2, base.clone())
            .with_term(&[1, 2], ScalarField::coordinate(0))
            .with_term(&[2, 0], ScalarField::coordinate(1))
            .with_term(&[0, 1], ScalarField::coordinate(2));
        let bundle = BundleSpec::new(base.clone(), area, vec![]).unwrap();
        let alpha = InvariantForm::contact_candidate(
            BaseForm::zero(1, base.clone()),
            ScalarField::one(),
            bundle,
        );
        let (_, u, regular) = decompose_alpha(&alpha).unwrap();
        assert!(regular);
        for flat in 0..base.grid_size() {
            assert!(u.eval(&base.grid_point(flat)) > 0.5);
        }
    }

    #[test]
    fn flat_u_on_open_set_flags_irregular() {
        let (bundle, _) = lutz_t3(16);
        let base = bundle.base.clone();
        // vanishes identically on a band around theta2 = 0.5
        let u = ScalarField::from_parts(
            |p: &[f64]| {
                let t = p[1];
                if (0.4..=0.6).contains(&t) {
                    0.0
                } else {
                    ((t - 0.5).abs() - 0.1).powi(3)
                }
            },
            |_| ScalarField::zero(),
        );
        let alpha = InvariantForm::contact_candidate(
            BaseForm::new(1, base.clone()).with_term(&[0], ScalarField::one()),
            u,
            bundle,
        );
        let (_, _, regular) = decompose_alpha(&alpha).unwrap();
        assert!(!regular);
    }
}
