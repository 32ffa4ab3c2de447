//! Built-in model scenarios with natively registered analytic fields.
//!
//! These are the concrete manifolds the crate is organized around: the
//! twisted torus form on T^3, the Boothby-Wang form of the Hopf bundle,
//! the twisted bundles over T^2 x S^2 built through the full existence
//! pipeline, the open-book form on S^3 x T^2, and the contactisation of
//! the ideal Liouville structure on T^2 x D^2.

use std::time::Instant;

use crate::bundle::{
    change_gauge, contact_check, decompose_alpha, euler_pairing, identity_check_lemma_volume,
    Bundle, BundleSpec, InvariantForm,
};
use crate::bourgeois::{
    bourgeois_form, bourgeois_splitting, xy_fields, xy_identity_residual, OpenBookSpec,
};
use crate::construct::{
    assemble_global, assemble_neck, boothby_wang, contactise, interpolation_check, scale_tune,
    AssemblyReport, BandChart, BoundarySlice, ContactiseInput, GlobalPieces, NeckAssembly,
    NeckResult,
};
use crate::curve::{bump_on, rising_step, CurveFn, PiecewisePoly, Poly};
use crate::cycle::Cycle2;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::form::BaseForm;
use crate::manifold::{Manifold, ModelFactor, ModelManifold};
use crate::profiles::{make_cutoff, make_profiles, ProfileParams};
use crate::report::{CheckEntry, Provenance, Report};
use crate::splitting::{
    contact_slice, dividing_set, gamma_contact_check, pieces_volume_consistency,
    slice_contact_family, symplectic_pieces, weak_filling_w1, weak_filling_w2,
};
use crate::sweep::resolutions;
use crate::tolerances::{INTEGRALITY_TOL, POSITIVITY_TOL};

pub const GALLERY_NAMES: [&str; 7] = [
    "lutz-t3",
    "hopf",
    "t2s2-k0",
    "t2s2-k1",
    "t2s2-k2",
    "bourgeois-s3",
    "contactise-t2d2",
];

const TAU: f64 = std::f64::consts::TAU;

#[derive(Clone, Copy, Debug)]
pub struct GalleryOptions {
    pub resolution_scale: f64,
    pub tol: f64,
}

impl Default for GalleryOptions {
    fn default() -> Self {
        GalleryOptions {
            resolution_scale: 1.0,
            tol: POSITIVITY_TOL,
        }
    }
}

fn scaled(base: usize, opts: &GalleryOptions) -> usize {
    ((base as f64 * opts.resolution_scale).round() as usize).max(3)
}

pub fn run_gallery(name: &str, opts: &GalleryOptions) -> Result<Report> {
    match name {
        "lutz-t3" => lutz_t3_report(opts),
        "hopf" => hopf_report(opts),
        "t2s2-k0" => t2s2_report(0, opts),
        "t2s2-k1" => t2s2_report(1, opts),
        "t2s2-k2" => t2s2_report(2, opts),
        "bourgeois-s3" => bourgeois_report(opts),
        "contactise-t2d2" => contactise_report(opts),
        other => Err(Error::UnknownGallery {
            name: other.into(),
            valid: GALLERY_NAMES.join(", "),
        }),
    }
}

fn provenance(m: &Manifold, opts: &GalleryOptions, params: serde_json::Value, t0: Instant) -> Provenance {
    Provenance {
        resolutions: resolutions(m),
        tolerance: opts.tol,
        resolution_scale: opts.resolution_scale,
        parameters: params,
        wall_time_ms: t0.elapsed().as_millis(),
    }
}

/// beta = cos(2 pi theta2) d theta1, u = sin(2 pi theta2) on the trivial
/// bundle over T^2.
pub fn lutz_t3_data(res: usize) -> (Bundle, InvariantForm) {
    let base = ModelManifold::torus(2, res);
    let bundle = BundleSpec::trivial(base.clone());
    let beta = BaseForm::new(1, base.clone())
        .with_term(&[0], ScalarField::coordinate(1).scale(TAU).cos());
    let u = ScalarField::coordinate(1).scale(TAU).sin();
    (
        bundle.clone(),
        InvariantForm::contact_candidate(beta, u, bundle),
    )
}

fn lutz_t3_report(opts: &GalleryOptions) -> Result<Report> {
    let t0 = Instant::now();
    let res = scaled(24, opts);
    let (bundle, alpha) = lutz_t3_data(res);
    let base = bundle.base.clone();
    let (beta, u, regular) = decompose_alpha(&alpha)?;
    let mut checks = Vec::new();

    let contact = contact_check(&alpha, opts.tol)?;
    checks.push(CheckEntry::value(
        "contact-min",
        contact.min_value,
        TAU,
        1e-6,
    ));
    checks.push(CheckEntry::positivity("contact", &contact));
    checks.push(CheckEntry::residual(
        "lemma-volume",
        identity_check_lemma_volume(&alpha)?,
        1e-8,
    ));
    checks.push(CheckEntry::flag(
        "u-regular",
        regular,
        "0 is a regular value of u",
    ));

    let mesh = dividing_set(&u, &base, 1)?;
    let two_circles = mesh.zero_points.len() == 2 * res
        && mesh.zero_points.iter().all(|z| {
            let t = z.params[1].rem_euclid(1.0);
            t.min(1.0 - t) < 1e-9 || (t - 0.5).abs() < 1e-9
        });
    checks.push(CheckEntry::flag(
        "dividing-set",
        two_circles,
        format!("{} zeros on the two circles", mesh.zero_points.len()),
    ));
    checks.push(CheckEntry::positivity(
        "gamma-contact",
        &gamma_contact_check(&beta, &mesh, 1)?,
    ));

    let omega = bundle.curvature.clone();
    let eps = 0.1;
    let (plus, minus) = symplectic_pieces(&beta, &u, &omega, 1, eps)?;
    checks.push(CheckEntry::positivity("piece-plus", &plus));
    checks.push(CheckEntry::positivity("piece-minus", &minus));
    checks.push(CheckEntry::residual(
        "pieces-volume-consistency",
        pieces_volume_consistency(&beta, &u, &omega, 1, eps)?,
        1e-5,
    ));
    let scan = crate::splitting::eps_scan(&beta, &u, &omega, 1, &base);
    let largest = scan.iter().find(|(_, ok)| *ok).map(|(e, _)| *e);
    checks.push(CheckEntry::flag(
        "eps-scan",
        largest.is_some(),
        format!(
            "largest passing standoff {:?} of {:?}",
            largest,
            scan.iter().map(|(e, _)| *e).collect::<Vec<_>>()
        ),
    ));

    for (s, outcome) in slice_contact_family(&beta, &u, &base, 1, &[-0.2, 0.0, 0.2], 1) {
        match outcome {
            Ok(r) => checks.push(CheckEntry::positivity(format!("slice:{s}"), &r)),
            Err(e) => checks.push(CheckEntry::failure(format!("slice:{s}"), &e)),
        }
    }

    let s0 = contact_slice(&beta, &u, &base, 1, 0.0)?;
    checks.push(CheckEntry::positivity(
        "w1",
        &weak_filling_w1(&s0, &omega, 1)?,
    ));
    checks.push(CheckEntry::positivity(
        "w2",
        &weak_filling_w2(&s0, &omega, 1, &[])?,
    ));

    // gauge round trip and invariance of the contact minimum
    let gamma = BaseForm::new(1, base.clone()).with_term(&[0], ScalarField::constant(0.1));
    let shifted = change_gauge(&alpha, &gamma)?;
    let back = change_gauge(&shifted, &gamma.neg())?;
    let mut round_trip: f64 = 0.0;
    for flat in 0..base.grid_size() {
        let p = base.grid_point(flat);
        for v in [[1.0, 0.0], [0.0, 1.0]] {
            let d = alpha.a().eval_on_vectors(&p, &[v.to_vec()])?
                - back.a().eval_on_vectors(&p, &[v.to_vec()])?;
            round_trip = round_trip.max(d.abs());
        }
    }
    checks.push(CheckEntry::residual("gauge-round-trip", round_trip, 0.0));
    let shifted_contact = contact_check(&shifted, opts.tol)?;
    checks.push(CheckEntry::residual(
        "gauge-invariance",
        (contact.min_value - shifted_contact.min_value).abs(),
        1e-9,
    ));

    // convex interpolation along the gauge path
    let beta1 = beta.sub(&gamma.scale_field(&u))?;
    let reports = interpolation_check(&beta, &beta1, &u, &bundle, &[], Some(1))?;
    let worst = reports
        .iter()
        .min_by(|a, b| a.min_value.partial_cmp(&b.min_value).unwrap())
        .expect("11 samples");
    checks.push(
        CheckEntry::positivity("interpolation", worst)
            .with_note(format!("{} t-samples", reports.len())),
    );

    Ok(Report::new(
        "lutz-t3",
        "verify-contact",
        checks,
        provenance(
            &base,
            opts,
            serde_json::json!({"resolution": res, "eps": eps}),
            t0,
        ),
    ))
}

/// Curvature dA/2 over the unit sphere: total integral 2 pi, Euler
/// pairing -1 against the outward-oriented fundamental cycle.
pub fn hopf_data(res: usize) -> Result<Bundle> {
    let base = ModelManifold::product(vec![ModelFactor::sphere2(res)]);
    let area = BaseForm::new(2, base.clone())
        .with_term(&[1, 2], ScalarField::coordinate(0))
        .with_term(&[2, 0], ScalarField::coordinate(1))
        .with_term(&[0, 1], ScalarField::coordinate(2));
    let cycle = Cycle2::sphere_factor("s2", 0, vec![0.0; 3], 256);
    BundleSpec::new(base, area.scale(0.5), vec![cycle])
}

fn hopf_report(opts: &GalleryOptions) -> Result<Report> {
    let t0 = Instant::now();
    let res = scaled(20, opts);
    let bundle = hopf_data(res)?;
    let mut checks = Vec::new();
    let alpha = boothby_wang(&bundle)?;
    let contact = contact_check(&alpha, opts.tol)?;
    checks.push(CheckEntry::positivity("contact", &contact));
    checks.push(CheckEntry::value("contact-min", contact.min_value, 0.5, 1e-9));
    let pairing = euler_pairing(&bundle, "s2")?;
    checks.push(CheckEntry::value("euler:s2", pairing, -1.0, INTEGRALITY_TOL));
    checks.push(CheckEntry::value(
        "euler-magnitude",
        pairing.abs(),
        1.0,
        INTEGRALITY_TOL,
    ));
    checks.push(CheckEntry::residual(
        "lemma-volume",
        identity_check_lemma_volume(&alpha)?,
        1e-8,
    ));
    let base = bundle.base.clone();
    Ok(Report::new(
        "hopf",
        "euler",
        checks,
        provenance(&base, opts, serde_json::json!({"resolution": res}), t0),
    ))
}

// --- the T^2 x S^2 pipeline ---------------------------------------------

/// Band half-height: the neck [-1, 1] x T^3 occupies |Z| <= Z1 on the
/// sphere factor via t = -Z / Z1.
const Z1: f64 = 0.35;
/// The cap radial profile blends from e^(1 - Z/Z1) to a round profile
/// over this window of |Z|.
const BLEND_LO: f64 = 0.45;
const BLEND_HI: f64 = 0.6;
/// The curvature bump representing the Euler class sits deep in the
/// northern cap.
const BUMP_LO: f64 = 0.8;
const BUMP_HI: f64 = 0.95;

fn sqrt_one_minus_sq() -> CurveFn {
    CurveFn::new(
        |z| (1.0 - z * z).sqrt(),
        || {
            let minus_z = PiecewisePoly::new(vec![], vec![Poly(vec![0.0, -1.0])]).curve();
            minus_z.div(&sqrt_one_minus_sq())
        },
    )
}

fn exp_cap_curve() -> CurveFn {
    // e^(1 - z/Z1)
    CurveFn::exp_of(&PiecewisePoly::new(vec![], vec![Poly(vec![1.0, -1.0 / Z1])]).curve())
}

/// W(Z) with K W(Z) (X dtheta1 - Y dtheta2) the global horizontal part:
/// the neck profile over the band, blended into round caps.
fn radial_w(f_profile: &CurveFn, a_north: f64, a_south: f64) -> CurveFn {
    let band = f_profile
        .compose_affine(-1.0 / Z1, 0.0)
        .div(&sqrt_one_minus_sq());
    let rise_n = rising_step(BLEND_LO, BLEND_HI).curve();
    let rise_s = rise_n.compose_affine(-1.0, 0.0);
    let one = CurveFn::constant(1.0);
    let north = band
        .mul(&one.add(&rise_n.scale(-1.0)))
        .add(&CurveFn::constant(a_north).mul(&rise_n));
    let south = band
        .mul(&one.add(&rise_s.scale(-1.0)))
        .add(&CurveFn::constant(a_south).mul(&rise_s));
    CurveFn::piecewise2(
        -BLEND_HI,
        &CurveFn::constant(a_south),
        &CurveFn::piecewise2(
            -BLEND_LO,
            &south,
            &CurveFn::piecewise2(
                BLEND_LO,
                &band,
                &CurveFn::piecewise2(BLEND_HI, &north, &CurveFn::constant(a_north)),
            ),
        ),
    )
}

fn blend_constant() -> f64 {
    let zm = 0.5 * (BLEND_LO + BLEND_HI);
    (1.0 - zm / Z1).exp() / (1.0 - zm * zm).sqrt()
}

/// Curvature representative of the twisted bundle: -k bump(Z) dphi ^ dZ,
/// supported deep in the northern cap.
fn t2s2_curvature(base: &Manifold, k: i64) -> BaseForm {
    if k == 0 {
        return BaseForm::zero(2, base.clone());
    }
    let z = ScalarField::coordinate(4);
    let bump = ScalarField::compose_curve(&bump_on(BUMP_LO, BUMP_HI).curve(), &z)
        .scale(-(k as f64));
    let x = ScalarField::coordinate(2);
    let y = ScalarField::coordinate(3);
    let denom = x.mul(&x).add(&y.mul(&y));
    BaseForm::new(2, base.clone())
        .with_term(&[3, 4], bump.mul(&x).div(&denom))
        .with_term(&[2, 4], bump.mul(&y).div(&denom).neg())
}

pub struct T2S2Pipeline {
    pub bundle: Bundle,
    pub glued: InvariantForm,
    pub assembly: AssemblyReport,
    pub neck: NeckResult,
    pub k_scale: f64,
    pub base: Manifold,
}

/// Runs the full existence pipeline for the bundle of Euler pairing k
/// over T^2 x S^2 and returns the glued invariant contact form.
/// The twisted bundle over T^2 x S^2 alone: curvature bump plus the two
/// generator cycles.
pub fn t2s2_bundle(k: i64, opts: &GalleryOptions) -> Result<Bundle> {
    let circle_res = scaled(12, opts);
    let sphere_res = scaled(20, opts);
    let base = ModelManifold::product(vec![
        ModelFactor::circle(circle_res),
        ModelFactor::circle(circle_res),
        ModelFactor::sphere2(sphere_res),
    ]);
    let omega_ref = t2s2_curvature(&base, k);
    let t2_cycle = Cycle2::torus_factor("t2", 5, 0, 1, vec![0.0, 0.0, 1.0, 0.0, 0.0], 128);
    let s2_cycle = Cycle2::sphere_factor("s2", 2, vec![0.0; 5], 256);
    BundleSpec::new(base, omega_ref, vec![t2_cycle, s2_cycle])
}

pub fn build_t2s2(
    k: i64,
    opts: &GalleryOptions,
    params: ProfileParams,
) -> Result<(T2S2Pipeline, Vec<CheckEntry>)> {
    let sphere_res = scaled(20, opts);
    let circle_res = scaled(12, opts);
    let mut checks = Vec::new();
    let bundle = t2s2_bundle(k, opts)?;
    let base = bundle.base.clone();

    // profiles for the neck; the collar margin must cover the blend zone
    let profiles = make_profiles(params)?;
    checks.push(CheckEntry::flag(
        "profiles",
        true,
        format!("f_min {:.1}, w_min {:.1}", profiles.f_min, profiles.w_min),
    ));

    // tune the scaling of the exact pieces on the standalone disc model
    let (piece, lambda) = disc_piece_model(scaled(8, opts));
    let slice = disc_boundary_slice(&piece, &lambda)?;
    let sigma = BaseForm::new(2, piece.clone()).with_term(
        &[2, 3],
        ScalarField::coordinate(2).scale(-2.0 * TAU * k as f64),
    );
    let (k_scale, trail) = scale_tune(&sigma, &lambda, &slice, &piece, 2)?;
    checks.push(
        CheckEntry::value("scale-tune", k_scale, k_scale, 0.0)
            .with_note(format!("{} candidates tried", trail.len())),
    );

    // the abstract neck over Gamma = T^3 with the constant gauge path
    let neck_model = ModelManifold::product(vec![
        ModelFactor::interval(-1.0, 1.0, circle_res + 4),
        ModelFactor::circle(circle_res),
        ModelFactor::circle(circle_res),
        ModelFactor::circle(circle_res),
    ]);
    let neck_bundle = BundleSpec::trivial(neck_model.clone());
    let phi = ScalarField::coordinate(3).scale(TAU);
    let beta_neck = BaseForm::new(1, neck_model.clone())
        .with_term(&[1], phi.cos())
        .with_term(&[2], phi.sin().neg())
        .scale(k_scale);
    let neck = assemble_neck(&NeckAssembly {
        bundle: neck_bundle,
        beta: beta_neck,
        gamma_path: BaseForm::zero(1, neck_model.clone()),
        profiles: profiles.clone(),
    })?;
    checks.push(CheckEntry::positivity("neck-contact", &neck.contact));
    checks.push(CheckEntry::residual(
        "neck-oracle",
        neck.oracle_rel_err,
        crate::tolerances::NECK_ORACLE_REL_TOL,
    ));

    // global pieces
    let a = blend_constant();
    let z = ScalarField::coordinate(4);
    let x = ScalarField::coordinate(2);
    let y = ScalarField::coordinate(3);
    let f_used = neck.profiles.f.clone();
    let g_used = neck.profiles.g.clone();

    let horizontal = |w_curve: &CurveFn| -> BaseForm {
        let w = ScalarField::compose_curve(w_curve, &z).scale(k_scale);
        BaseForm::new(1, base.clone())
            .with_term(&[0], w.mul(&x))
            .with_term(&[1], w.mul(&y).neg())
    };
    let w_neck_curve = f_used
        .compose_affine(-1.0 / Z1, 0.0)
        .div(&sqrt_one_minus_sq());
    let rise_n = rising_step(BLEND_LO, BLEND_HI).curve();
    let one = CurveFn::constant(1.0);
    let cap_band_n = exp_cap_curve().div(&sqrt_one_minus_sq());
    let w_plus_curve = CurveFn::piecewise2(
        BLEND_LO,
        &cap_band_n,
        &CurveFn::piecewise2(
            BLEND_HI,
            &cap_band_n
                .mul(&one.add(&rise_n.scale(-1.0)))
                .add(&CurveFn::constant(a).mul(&rise_n)),
            &CurveFn::constant(a),
        ),
    );
    let cap_band_s = exp_cap_curve().compose_affine(-1.0, 0.0).div(&sqrt_one_minus_sq());
    let rise_s = rise_n.compose_affine(-1.0, 0.0);
    let w_minus_curve = CurveFn::piecewise2(
        -BLEND_HI,
        &CurveFn::constant(a),
        &CurveFn::piecewise2(
            -BLEND_LO,
            &cap_band_s
                .mul(&one.add(&rise_s.scale(-1.0)))
                .add(&CurveFn::constant(a).mul(&rise_s)),
            &cap_band_s,
        ),
    );
    // sanity: the full radial profile is what the pieces agree on
    let _ = radial_w(&f_used, a, a);

    let plus = InvariantForm::contact_candidate(
        horizontal(&w_plus_curve),
        ScalarField::one(),
        bundle.clone(),
    );
    let neck_piece = InvariantForm::contact_candidate(
        horizontal(&w_neck_curve),
        ScalarField::compose_curve(&g_used.compose_affine(-1.0 / Z1, 0.0), &z),
        bundle.clone(),
    );
    let minus = InvariantForm::contact_candidate(
        horizontal(&w_minus_curve),
        ScalarField::constant(-1.0),
        bundle.clone(),
    );
    let band = BandChart {
        t: ScalarField::coordinate(4).scale(-1.0 / Z1),
        axis: 2,
    };
    let (glued, assembly) = assemble_global(&GlobalPieces {
        bundle: bundle.clone(),
        plus,
        neck: Some(neck_piece),
        minus: Some(minus),
        band: Some(band),
    })?;
    checks.push(CheckEntry::residual(
        "seam",
        assembly.seam_residual,
        crate::tolerances::SEAM_TOL,
    ));
    checks.push(CheckEntry::positivity("contact", &assembly.contact));
    let max_t = assembly
        .dividing_t_values
        .iter()
        .fold(0.0f64, |acc, t| acc.max(t.abs()));
    checks.push(CheckEntry::value(
        "dividing-set",
        max_t,
        0.0,
        1.0 / sphere_res as f64,
    ));

    Ok((
        T2S2Pipeline {
            bundle,
            glued,
            assembly,
            neck,
            k_scale,
            base,
        },
        checks,
    ))
}

/// Standalone T^2 x D^2 model in polar chart, with the Liouville form
/// x dtheta1 - y dtheta2.
pub fn disc_piece_model(res: usize) -> (Manifold, BaseForm) {
    let piece = ModelManifold::product(vec![
        ModelFactor::circle(res),
        ModelFactor::circle(res),
        ModelFactor::interval(0.0, 1.0, res),
        ModelFactor::circle(res),
    ]);
    let r = ScalarField::coordinate(2);
    let ang = ScalarField::coordinate(3).scale(TAU);
    let lambda = BaseForm::new(1, piece.clone())
        .with_term(&[0], r.mul(&ang.cos()))
        .with_term(&[1], r.mul(&ang.sin()).neg());
    (piece, lambda)
}

pub fn disc_boundary_slice(
    piece: &Manifold,
    lambda: &BaseForm,
) -> Result<crate::splitting::ContactSliceData> {
    let axes = piece.axes();
    let mut points = Vec::new();
    for i in 0..axes[0].samples.len() {
        for j in 0..axes[1].samples.len() {
            for l in 0..axes[3].samples.len() {
                let params = vec![
                    axes[0].samples[i],
                    axes[1].samples[j],
                    1.0,
                    axes[3].samples[l],
                ];
                points.push(piece.chart(&params));
            }
        }
    }
    let u = ScalarField::one().sub(&ScalarField::coordinate(2));
    crate::splitting::slice_from_points(lambda, &u, piece, 0.0, points)
}

fn t2s2_report(k: i64, opts: &GalleryOptions) -> Result<Report> {
    t2s2_report_with(k, opts, ProfileParams::default())
}

pub fn t2s2_report_with(
    k: i64,
    opts: &GalleryOptions,
    params: ProfileParams,
) -> Result<Report> {
    let t0 = Instant::now();
    let (pipe, mut checks) = build_t2s2(k, opts, params)?;

    // Euler pairings of the assembled bundle
    let t2_pairing = euler_pairing(&pipe.bundle, "t2")?;
    let s2_pairing = euler_pairing(&pipe.bundle, "s2")?;
    checks.push(CheckEntry::value("euler:t2", t2_pairing, 0.0, INTEGRALITY_TOL));
    checks.push(CheckEntry::value(
        "euler:s2",
        s2_pairing,
        k as f64,
        INTEGRALITY_TOL * (1.0 + k as f64),
    ));

    // cross-validation of the two volume paths on the glued form
    checks.push(CheckEntry::residual(
        "lemma-volume",
        identity_check_lemma_volume(&pipe.glued)?,
        1e-5,
    ));

    // weak fillings of the induced pieces on nearby slices
    let (beta, u, _) = decompose_alpha(&pipe.glued)?;
    let core = beta
        .scale_field(&ScalarField::one().div(&u))
        .ext_d()
        .add(&pipe.bundle.curvature)?;
    for (s, omega, tag) in [(0.2, core.clone(), "plus"), (-0.2, core.neg(), "minus")] {
        let slice = contact_slice(&beta, &u, &pipe.base, 2, s)?;
        let w1 = weak_filling_w1(&slice, &omega, 2)?;
        let w2 = weak_filling_w2(&slice, &omega, 2, &[])?;
        checks.push(CheckEntry::positivity(format!("w1-{tag}"), &w1));
        checks.push(CheckEntry::positivity(format!("w2-{tag}"), &w2));
        if w1.passed && !w2.passed {
            checks.push(CheckEntry::flag(
                format!("w1-implies-w2-{tag}"),
                false,
                "w1 passed but w2 failed",
            ));
        }
    }

    // symplectic pieces of the glued form
    let eps = crate::splitting::default_eps(&u, &pipe.base);
    let (plus, minus) = symplectic_pieces(&beta, &u, &pipe.bundle.curvature, 2, eps)?;
    checks.push(CheckEntry::positivity("piece-plus", &plus));
    checks.push(CheckEntry::positivity("piece-minus", &minus));

    let base = pipe.base.clone();
    Ok(Report::new(
        format!("t2s2-k{k}"),
        "construct",
        checks,
        provenance(
            &base,
            opts,
            serde_json::json!({"k": k, "scale": pipe.k_scale, "z1": Z1}),
            t0,
        ),
    ))
}

fn bourgeois_report(opts: &GalleryOptions) -> Result<Report> {
    bourgeois_report_with(opts, 0.8, (0.25, 0.7))
}

pub fn bourgeois_report_with(
    opts: &GalleryOptions,
    r0: f64,
    transition: (f64, f64),
) -> Result<Report> {
    let t0 = Instant::now();
    let sphere_res = scaled(12, opts);
    let circle_res = scaled(8, opts);
    let ob = OpenBookSpec::standard_s3(sphere_res, circle_res, r0);
    let mut checks = Vec::new();

    let book = ob.validate()?;
    checks.push(CheckEntry::positivity("book-contact", &book.contact_on_n));
    checks.push(CheckEntry::positivity("book-pages", &book.pages_symplectic));
    checks.push(CheckEntry::value(
        "book-binding-slices-min",
        book.binding_slices_min,
        book.binding_slices_min,
        0.0,
    ));

    let cutoff = make_cutoff(r0, transition)?;
    checks.push(CheckEntry::flag("cutoff", true, "three-bullet validator"));
    let (x, y) = xy_fields(&ob, &cutoff);
    checks.push(CheckEntry::residual(
        "xy-identity",
        xy_identity_residual(&ob, &x, &y)?,
        1e-8,
    ));

    let (alpha, _bundle) = bourgeois_form(&ob, &x, &y)?;
    let contact = contact_check(&alpha, opts.tol)?;
    checks.push(CheckEntry::positivity("contact", &contact));
    checks.push(CheckEntry::residual(
        "lemma-volume",
        identity_check_lemma_volume(&alpha)?,
        1e-5,
    ));

    let split = bourgeois_splitting(&ob, &x, &y, 0.05)?;
    checks.push(CheckEntry::positivity("gamma-contact", &split.gamma_contact));
    checks.push(CheckEntry::positivity("piece-plus", &split.piece_plus));
    checks.push(CheckEntry::positivity("piece-minus", &split.piece_minus));
    let pages_ok = split.dividing.zero_points.iter().all(|z| {
        let d = (z.params[1] / std::f64::consts::PI).rem_euclid(1.0);
        d < 1e-6 || d > 1.0 - 1e-6
    });
    checks.push(CheckEntry::flag(
        "dividing-set",
        pages_ok,
        format!("{} zeros on the pages 0 and pi", split.dividing.zero_points.len()),
    ));

    // slice family around the dividing set
    let (beta, u, _) = decompose_alpha(&alpha)?;
    for (s, outcome) in slice_contact_family(&beta, &u, &ob.base, 1, &[-0.1, 0.0, 0.1], 2) {
        match outcome {
            Ok(r) => checks.push(CheckEntry::positivity(format!("slice:{s}"), &r)),
            Err(e) => checks.push(CheckEntry::failure(format!("slice:{s}"), &e)),
        }
    }

    let base = ob.base.clone();
    Ok(Report::new(
        "bourgeois-s3",
        "bourgeois",
        checks,
        provenance(
            &base,
            opts,
            serde_json::json!({"r0": r0, "transition": [transition.0, transition.1]}),
            t0,
        ),
    ))
}

fn contactise_report(opts: &GalleryOptions) -> Result<Report> {
    let t0 = Instant::now();
    let res = scaled(10, opts);
    let base = ModelManifold::product(vec![
        ModelFactor::circle(res),
        ModelFactor::circle(res),
        ModelFactor::interval(0.0, 1.0, res),
        ModelFactor::circle(res),
    ]);
    let bundle = BundleSpec::trivial(base.clone());
    let r = ScalarField::coordinate(2);
    let u = ScalarField::one().sub(&r.powi(2));
    let ang = ScalarField::coordinate(3).scale(TAU);
    let x = r.mul(&ang.cos());
    let y = r.mul(&ang.sin());
    let lambda = BaseForm::new(1, base.clone())
        .with_term(&[0], x.div(&u))
        .with_term(&[1], y.div(&u).neg());
    let extension = BaseForm::new(1, base.clone())
        .with_term(&[0], x)
        .with_term(&[1], y.neg());
    let input = ContactiseInput {
        bundle,
        u,
        lambda,
        extension: Some(extension),
        boundary: Some(BoundarySlice {
            factor: 2,
            value: 1.0,
        }),
        interior_eps: 0.05,
    };
    let (alpha, report) = contactise(&input)?;
    let mut checks = vec![
        CheckEntry::positivity("interior-symplectic", &report.interior_symplectic),
        CheckEntry::positivity(
            "boundary-contact",
            report.boundary_contact.as_ref().expect("boundary supplied"),
        ),
        CheckEntry::positivity("contact", &report.contact),
    ];
    checks.push(CheckEntry::residual(
        "lemma-volume",
        identity_check_lemma_volume(&alpha)?,
        1e-5,
    ));
    Ok(Report::new(
        "contactise-t2d2",
        "contactise",
        checks,
        provenance(&base, opts, serde_json::json!({"resolution": res}), t0),
    ))
}
