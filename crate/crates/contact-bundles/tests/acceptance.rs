//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one pass/fail line.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use contact_bundles::bundle::{contact_check, decompose_alpha};
use contact_bundles::construct::{boothby_wang, collar_normalize, contactise, ContactiseInput};
use contact_bundles::field::ScalarField;
use contact_bundles::form::{tangential_max, BaseForm};
use contact_bundles::gallery::{
    build_t2s2, disc_piece_model, hopf_data, run_gallery, GalleryOptions,
};
use contact_bundles::manifold::{Manifold, ModelFactor, ModelManifold};
use contact_bundles::profiles::{
    make_collar_profile, make_cutoff, make_profiles, ProfileParams,
};
use contact_bundles::report::Report;
use contact_bundles::splitting::{slice_from_points, weak_filling_w1, weak_filling_w2};
use contact_bundles::bundle::{euler_pairing, BundleSpec};
use contact_bundles::tolerances::{NECK_ORACLE_REL_TOL, SEAM_TOL};

const TAU: f64 = std::f64::consts::TAU;

struct Gate {
    criterion: &'static str,
    failures: Vec<String>,
}

impl Gate {
    fn new(criterion: &'static str) -> Self {
        Gate {
            criterion,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        let status = if ok { "pass" } else { "FAIL" };
        println!("[{status}] {}: {name} - {detail}", self.criterion);
        if !ok {
            self.failures.push(format!("{name}: {detail}"));
        }
    }

    fn entry(&mut self, report: &Report, name: &str) {
        match report.check(name) {
            Some(c) => {
                let detail = if let Some(m) = c.min_value {
                    format!("min {m:.6e} (tol {:.1e})", c.tolerance)
                } else if let Some(r) = c.residual {
                    format!("residual {r:.3e} (tol {:.1e})", c.tolerance)
                } else if let Some(v) = c.value {
                    format!(
                        "value {v:.6} expected {:.6} (tol {:.1e})",
                        c.expected.unwrap_or(f64::NAN),
                        c.tolerance
                    )
                } else {
                    c.note.clone()
                };
                self.check(&format!("{}:{name}", report.name), c.passed, detail);
            }
            None => self.check(
                &format!("{}:{name}", report.name),
                false,
                "missing report entry".into(),
            ),
        }
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "{} failed:\n{}",
            self.criterion,
            self.failures.join("\n")
        );
    }
}

// --- randomized smooth test forms -----------------------------------------

/// A trig polynomial in circle coordinates and a low-degree polynomial in
/// sphere ambient coordinates; returned both with analytic gradients and
/// as an opaque finite-difference field over the identical formula.
fn random_field(
    rng: &mut ChaCha8Rng,
    circle_axes: &[usize],
    ambient_poly_axes: &[usize],
) -> (ScalarField, ScalarField) {
    #[derive(Clone)]
    enum Atom {
        Trig { axis: usize, freq: f64, phase: f64, cosine: bool },
        Linear { axis: usize },
    }
    let mut atoms = Vec::new();
    let n_terms = rng.gen_range(1..=3);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        let n_factors = rng.gen_range(1..=2);
        let mut factors = Vec::new();
        for _ in 0..n_factors {
            if !circle_axes.is_empty() && (ambient_poly_axes.is_empty() || rng.gen_bool(0.7)) {
                factors.push(Atom::Trig {
                    axis: circle_axes[rng.gen_range(0..circle_axes.len())],
                    freq: rng.gen_range(1..=2) as f64 * TAU,
                    phase: rng.gen_range(0.0..TAU),
                    cosine: rng.gen_bool(0.5),
                });
            } else {
                factors.push(Atom::Linear {
                    axis: ambient_poly_axes[rng.gen_range(0..ambient_poly_axes.len())],
                });
            }
        }
        let amp = rng.gen_range(0.2..1.0);
        terms.push((amp, factors));
        atoms.extend(terms.last().unwrap().1.iter().cloned());
    }
    let _ = atoms;

    let eval_atom = |a: &Atom, p: &[f64]| -> f64 {
        match a {
            Atom::Trig { axis, freq, phase, cosine } => {
                let arg = freq * p[*axis] + phase;
                if *cosine {
                    arg.cos()
                } else {
                    arg.sin()
                }
            }
            Atom::Linear { axis } => p[*axis],
        }
    };
    let terms_fd = terms.clone();
    let fd = ScalarField::from_fn(move |p| {
        terms_fd
            .iter()
            .map(|(amp, factors)| amp * factors.iter().map(|a| eval_atom(a, p)).product::<f64>())
            .sum()
    });

    let mut analytic = ScalarField::zero();
    for (amp, factors) in &terms {
        let mut term = ScalarField::constant(*amp);
        for a in factors {
            let f = match a {
                Atom::Trig { axis, freq, phase, cosine } => {
                    let arg = ScalarField::coordinate(*axis)
                        .scale(*freq)
                        .add(&ScalarField::constant(*phase));
                    if *cosine {
                        arg.cos()
                    } else {
                        arg.sin()
                    }
                }
                Atom::Linear { axis } => ScalarField::coordinate(*axis),
            };
            term = term.mul(&f);
        }
        analytic = analytic.add(&term);
    }
    (analytic, fd)
}

fn random_form(
    rng: &mut ChaCha8Rng,
    m: &Manifold,
    degree: usize,
    circle_axes: &[usize],
    poly_axes: &[usize],
) -> (BaseForm, BaseForm) {
    let ambient = m.ambient_dim();
    let mut analytic = BaseForm::zero(degree, m.clone());
    let mut fd = BaseForm::zero(degree, m.clone());
    let n_terms = rng.gen_range(1..=2);
    for _ in 0..n_terms {
        let mut idx: Vec<usize> = (0..ambient).collect();
        for k in 0..degree {
            let swap = rng.gen_range(k..ambient);
            idx.swap(k, swap);
        }
        let mut idx: Vec<usize> = idx[..degree].to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != degree {
            continue;
        }
        let (fa, ff) = random_field(rng, circle_axes, poly_axes);
        analytic = analytic.with_term(&idx, fa);
        fd = fd.with_term(&idx, ff);
    }
    (analytic, fd)
}

#[test]
fn criterion_1_algebraic_suites() {
    let t0 = Instant::now();
    let mut gate = Gate::new("criterion-1");
    let mut rng = ChaCha8Rng::seed_from_u64(420);

    let t4 = ModelManifold::torus(4, 5);
    let t2s2 = ModelManifold::product(vec![
        ModelFactor::circle(5),
        ModelFactor::circle(5),
        ModelFactor::sphere2(7),
    ]);
    let cases: [(&Manifold, Vec<usize>, Vec<usize>); 2] = [
        (&t4, vec![0, 1, 2, 3], vec![]),
        (&t2s2, vec![0, 1], vec![2, 3, 4]),
    ];

    let mut worst_fd: f64 = 0.0;
    let mut worst_an: f64 = 0.0;
    let mut worst_comm: f64 = 0.0;
    for case in 0..50 {
        let (m, circles, polys) = &cases[case % 2];
        let p = rng.gen_range(0..=1usize);
        let q = rng.gen_range(1..=2usize);
        let (a_an, a_fd) = random_form(&mut rng, m, p, circles, polys);
        let (b_an, b_fd) = random_form(&mut rng, m, q, circles, polys);

        for (a, b, worst) in [
            (&a_an, &b_an, &mut worst_an),
            (&a_fd, &b_fd, &mut worst_fd),
        ] {
            // d(d a) = 0
            let dd = tangential_max(&a.ext_d().ext_d(), m).unwrap();
            *worst = worst.max(dd);
            // Leibniz
            let dab = a.wedge(b).unwrap().ext_d();
            let mut rhs = a.ext_d().wedge(b).unwrap();
            let adb = a.wedge(&b.ext_d()).unwrap();
            rhs = if p % 2 == 0 {
                rhs.add(&adb).unwrap()
            } else {
                rhs.sub(&adb).unwrap()
            };
            let leibniz = tangential_max(&dab.sub(&rhs).unwrap(), m).unwrap();
            *worst = worst.max(leibniz);
        }

        // graded commutativity, pointwise
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        let ab = a_an.wedge(&b_an).unwrap();
        let ba = b_an.wedge(&a_an).unwrap().scale(sign);
        worst_comm = worst_comm.max(tangential_max(&ab.sub(&ba).unwrap(), m).unwrap());
    }
    gate.check(
        "fd-residuals",
        worst_fd <= 1e-5,
        format!("max d.d/Leibniz residual {worst_fd:.3e} (tol 1e-5, fd step 1e-5)"),
    );
    gate.check(
        "analytic-residuals",
        worst_an <= 1e-10,
        format!("max d.d/Leibniz residual {worst_an:.3e} (tol 1e-10)"),
    );
    gate.check(
        "graded-commutativity",
        worst_comm <= 1e-10,
        format!("max pointwise residual {worst_comm:.3e}"),
    );
    let elapsed = t0.elapsed().as_secs_f64();
    gate.check(
        "runtime",
        elapsed <= 60.0,
        format!("{elapsed:.1} s (budget 60 s)"),
    );
    gate.finish();
}

#[test]
fn criterion_2_lemma_volume_cross_check() {
    let mut gate = Gate::new("criterion-2");
    let opts = GalleryOptions::default();
    let lutz = run_gallery("lutz-t3", &opts).unwrap();
    gate.entry(&lutz, "lemma-volume");
    let bourgeois = run_gallery("bourgeois-s3", &opts).unwrap();
    gate.entry(&bourgeois, "lemma-volume");
    gate.finish();
}

#[test]
fn criterion_3_euler_pairings() {
    let mut gate = Gate::new("criterion-3");
    let opts = GalleryOptions::default();
    for k in 0..=2i64 {
        let t0 = Instant::now();
        let bundle = contact_bundles::gallery::t2s2_bundle(k, &opts).unwrap();
        let t2 = euler_pairing(&bundle, "t2").unwrap();
        let s2 = euler_pairing(&bundle, "s2").unwrap();
        let elapsed = t0.elapsed().as_secs_f64();
        gate.check(
            &format!("t2s2-k{k}:t2"),
            t2.abs() <= 1e-3,
            format!("pairing {t2:.6}"),
        );
        gate.check(
            &format!("t2s2-k{k}:s2"),
            (s2 - k as f64).abs() <= 1e-3,
            format!("pairing {s2:.6} expected {k}"),
        );
        gate.check(
            &format!("t2s2-k{k}:runtime"),
            elapsed <= 30.0,
            format!("{elapsed:.2} s (budget 30 s)"),
        );
    }
    let t0 = Instant::now();
    let hopf = hopf_data(20).unwrap();
    let pairing = euler_pairing(&hopf, "s2").unwrap();
    gate.check(
        "hopf:magnitude",
        (pairing.abs() - 1.0).abs() <= 1e-3,
        format!("pairing {pairing:.6}"),
    );
    gate.check(
        "hopf:runtime",
        t0.elapsed().as_secs_f64() <= 30.0,
        format!("{:.2} s", t0.elapsed().as_secs_f64()),
    );
    gate.finish();
}

#[test]
fn criterion_4_existence_pipeline() {
    let mut gate = Gate::new("criterion-4");
    let opts = GalleryOptions::default();
    for k in 0..=2i64 {
        let t0 = Instant::now();
        let (pipe, _) = build_t2s2(k, &opts, ProfileParams::default()).unwrap();
        let elapsed = t0.elapsed().as_secs_f64();
        let sphere_res = pipe.base.factors[2].resolution;
        gate.check(
            &format!("k{k}:sphere-samples"),
            sphere_res * sphere_res >= 400,
            format!("{} samples", sphere_res * sphere_res),
        );
        gate.check(
            &format!("k{k}:contact"),
            pipe.assembly.contact.passed && pipe.assembly.contact.min_value > 1e-9,
            format!("min {:.6e}", pipe.assembly.contact.min_value),
        );
        let max_t = pipe
            .assembly
            .dividing_t_values
            .iter()
            .fold(0.0f64, |acc, t| acc.max(t.abs()));
        gate.check(
            &format!("k{k}:dividing-set"),
            !pipe.assembly.dividing_t_values.is_empty()
                && max_t <= 1.0 / sphere_res as f64,
            format!("max |t| = {max_t:.3e} over {} zeros", pipe.assembly.dividing_t_values.len()),
        );
        gate.check(
            &format!("k{k}:seam"),
            pipe.assembly.seam_residual <= SEAM_TOL,
            format!("residual {:.3e}", pipe.assembly.seam_residual),
        );
        gate.check(
            &format!("k{k}:runtime"),
            elapsed <= 300.0,
            format!("{elapsed:.1} s (budget 300 s)"),
        );
    }
    gate.finish();
}

#[test]
fn criterion_5_neck_oracle() {
    let mut gate = Gate::new("criterion-5");
    let opts = GalleryOptions::default();
    for k in 0..=2i64 {
        let (pipe, _) = build_t2s2(k, &opts, ProfileParams::default()).unwrap();
        gate.check(
            &format!("k{k}:oracle"),
            pipe.neck.oracle_rel_err <= NECK_ORACLE_REL_TOL,
            format!("relative disagreement {:.3e}", pipe.neck.oracle_rel_err),
        );
    }
    gate.finish();
}

#[test]
fn criterion_6_profiles_and_cutoffs() {
    let mut gate = Gate::new("criterion-6");
    match make_profiles(ProfileParams::default()) {
        Ok(pair) => {
            gate.check(
                "profiles",
                true,
                format!("four bullets hold; f_min {:.1}, w_min {:.1}", pair.f_min, pair.w_min),
            );
            gate.check(
                "profile-endpoints",
                pair.f.eval(-1.0) == 1.0 && pair.g.eval(-1.0) == 1.0 && pair.g.eval(0.0) == 0.0,
                "f(-1) = g(-1) = 1 and g(0) = 0 exactly".into(),
            );
        }
        Err(e) => gate.check("profiles", false, e.to_string()),
    }
    match make_cutoff(0.8, (0.25, 0.7)) {
        Ok(cut) => {
            gate.check(
                "cutoff",
                true,
                format!(
                    "three bullets hold; rho(0.01) = {}, rho(0.8) = {}",
                    cut.rho.eval(0.01),
                    cut.rho.eval(0.8)
                ),
            );
        }
        Err(e) => gate.check("cutoff", false, e.to_string()),
    }
    gate.finish();
}

#[test]
fn criterion_7_weak_fillings() {
    let mut gate = Gate::new("criterion-7");
    let opts = GalleryOptions::default();
    let report = run_gallery("t2s2-k1", &opts).unwrap();
    for name in ["w1-plus", "w2-plus", "w1-minus", "w2-minus"] {
        gate.entry(&report, name);
    }
    // w1 => w2 on every gallery input carrying both checks
    for name in ["lutz-t3", "t2s2-k0", "t2s2-k1", "t2s2-k2"] {
        let r = run_gallery(name, &opts).unwrap();
        for tag in ["", "-plus", "-minus"] {
            let (w1, w2) = (r.check(&format!("w1{tag}")), r.check(&format!("w2{tag}")));
            if let (Some(w1), Some(w2)) = (w1, w2) {
                gate.check(
                    &format!("{name}:w1-implies-w2{tag}"),
                    !w1.passed || w2.passed,
                    format!("w1 {} w2 {}", w1.passed, w2.passed),
                );
            }
        }
    }

    // after the collar modification, the collar slices satisfy the first
    // condition with the modified form itself
    let collar = ModelManifold::product(vec![
        ModelFactor::interval(0.0, 1.0, 8),
        ModelFactor::circle(8),
        ModelFactor::circle(8),
        ModelFactor::circle(8),
    ]);
    let phi = ScalarField::coordinate(3).scale(TAU);
    let beta0 = BaseForm::new(1, collar.clone())
        .with_term(&[1], phi.cos())
        .with_term(&[2], phi.sin().neg());
    let r0 = 0.5;
    let radial = ScalarField::coordinate(0)
        .scale(1.0 - r0)
        .add(&ScalarField::constant(r0));
    let omega_plus = beta0.scale_field(&radial).ext_d();
    let gamma = beta0.scale_field(&radial.sub(&ScalarField::constant(r0)));
    let profile = make_collar_profile(0.2, 8.0);
    let out = collar_normalize(&omega_plus, &beta0, &collar, &profile, 2, Some(&gamma)).unwrap();
    gate.check(
        "collar-normalized-sweep",
        out.sweep.passed,
        format!("min {:.3e}", out.sweep.min_value),
    );
    let axes = collar.axes();
    let mut points = Vec::new();
    for i in 0..axes[1].samples.len() {
        for j in 0..axes[2].samples.len() {
            for l in 0..axes[3].samples.len() {
                let params = vec![
                    0.95,
                    axes[1].samples[i],
                    axes[2].samples[j],
                    axes[3].samples[l],
                ];
                points.push(collar.chart(&params));
            }
        }
    }
    let u_slice = ScalarField::constant(0.95).sub(&ScalarField::coordinate(0));
    let slice = slice_from_points(&beta0, &u_slice, &collar, 0.0, points).unwrap();
    let w1 = weak_filling_w1(&slice, &out.omega_tilde, 2).unwrap();
    gate.check(
        "collar-normalized-w1",
        w1.passed,
        format!("min {:.3e} ({})", w1.min_value, w1.note),
    );
    let w2 = weak_filling_w2(&slice, &out.omega_tilde, 2, &[]).unwrap();
    gate.check(
        "collar-normalized-w2",
        w2.passed,
        format!("min {:.3e} ({})", w2.min_value, w2.note),
    );
    gate.finish();
}

#[test]
fn criterion_8_bourgeois() {
    let mut gate = Gate::new("criterion-8");
    let t0 = Instant::now();
    let report = run_gallery("bourgeois-s3", &GalleryOptions::default()).unwrap();
    for name in [
        "contact",
        "xy-identity",
        "dividing-set",
        "gamma-contact",
        "piece-plus",
        "piece-minus",
    ] {
        gate.entry(&report, name);
    }
    let elapsed = t0.elapsed().as_secs_f64();
    gate.check(
        "runtime",
        elapsed <= 300.0,
        format!("{elapsed:.1} s (budget 300 s)"),
    );
    gate.finish();
}

#[test]
fn criterion_9_contactisation() {
    let mut gate = Gate::new("criterion-9");
    let report = run_gallery("contactise-t2d2", &GalleryOptions::default()).unwrap();
    for name in ["interior-symplectic", "boundary-contact", "contact"] {
        gate.entry(&report, name);
    }

    // u = 1, lambda = 0 reproduces the connection-form pair exactly
    let base = ModelManifold::torus(2, 12);
    let omega = BaseForm::new(2, base.clone()).with_term(&[0, 1], ScalarField::one());
    let bundle = BundleSpec::new(base.clone(), omega, vec![]).unwrap();
    let input = ContactiseInput {
        bundle: bundle.clone(),
        u: ScalarField::one(),
        lambda: BaseForm::zero(1, base.clone()),
        extension: None,
        boundary: None,
        interior_eps: 0.1,
    };
    let (alpha, _) = contactise(&input).unwrap();
    let bw = boothby_wang(&bundle).unwrap();
    let mut exact = true;
    for flat in 0..base.grid_size() {
        let p = base.grid_point(flat);
        for v in [[1.0, 0.0], [0.0, 1.0]] {
            exact &= alpha.a().eval_on_vectors(&p, &[v.to_vec()]).unwrap()
                == bw.a().eval_on_vectors(&p, &[v.to_vec()]).unwrap();
        }
        exact &= alpha.b().coeffs[&vec![]].eval(&p) == bw.b().coeffs[&vec![]].eval(&p);
    }
    gate.check(
        "degenerate-case",
        exact,
        "pair equality with the connection form, exact".into(),
    );
    gate.finish();
}

#[test]
fn criterion_10_gauge_and_interpolation() {
    let mut gate = Gate::new("criterion-10");
    let report = run_gallery("lutz-t3", &GalleryOptions::default()).unwrap();
    gate.entry(&report, "gauge-round-trip");
    gate.entry(&report, "gauge-invariance");
    gate.entry(&report, "interpolation");
    let interp = report.check("interpolation").unwrap();
    gate.check(
        "interpolation-samples",
        interp.note.contains("11 t-samples"),
        interp.note.clone(),
    );
    gate.finish();
}

/// Disc-model K-tuning stays within the documented bound.
#[test]
fn scale_tune_stays_bounded_on_disc_pieces() {
    let (piece, lambda) = disc_piece_model(6);
    let slice = contact_bundles::gallery::disc_boundary_slice(&piece, &lambda).unwrap();
    let sigma = BaseForm::new(2, piece.clone()).with_term(
        &[2, 3],
        ScalarField::coordinate(2).scale(-2.0 * TAU),
    );
    let (k, _) = contact_bundles::construct::scale_tune(&sigma, &lambda, &slice, &piece, 2).unwrap();
    assert!(k <= 1024.0, "K = {k}");
}

/// The second filling condition degenerates exactly when the blend
/// cancels: omega = -d beta0 at b = 1. Checked on the open-book slice,
/// where the restricted form is honestly contact.
#[test]
fn w2_detects_cancelling_blend() {
    let ob = contact_bundles::bourgeois::OpenBookSpec::standard_s3(6, 6, 0.8);
    let cutoff = make_cutoff(0.8, (0.25, 0.7)).unwrap();
    let (x, y) = contact_bundles::bourgeois::xy_fields(&ob, &cutoff);
    let (alpha, _) = contact_bundles::bourgeois::bourgeois_form(&ob, &x, &y).unwrap();
    let (beta, u, _) = decompose_alpha(&alpha).unwrap();
    let m = ob.base.clone();
    let slice = contact_bundles::splitting::contact_slice(&beta, &u, &m, 1, 0.0).unwrap();
    let omega = beta.ext_d().neg();
    let w2 = weak_filling_w2(&slice, &omega, 2, &[1.0]).unwrap();
    assert!(!w2.passed);
    assert!(w2.min_value.abs() < 1e-12);
    // with omega = 0 the k = 0 condition of w1 is the zero form while the
    // contact direction k = 1 stays positive: the worst offender is k = 0
    let w1 = weak_filling_w1(&slice, &BaseForm::zero(2, m.clone()), 2).unwrap();
    assert!(!w1.passed);
    assert!(w1.note.contains("worst k = 0"), "note: {}", w1.note);
    // rescaling beta by a positive constant keeps every verdict
    for c in [0.5, 2.0] {
        let scaled =
            contact_bundles::splitting::contact_slice(&beta.scale(c), &u, &m, 1, 0.0).unwrap();
        let w1c = weak_filling_w1(&scaled, &BaseForm::zero(2, m.clone()), 2).unwrap();
        assert_eq!(w1c.passed, w1.passed);
        let w2c = weak_filling_w2(&scaled, &omega.scale(c), 2, &[1.0]).unwrap();
        assert_eq!(w2c.passed, w2.passed);
    }
}

/// Boothby-Wang degenerate inputs for the volume formula: u = 1 gives
/// omega^n; u = 0 annihilates it.
#[test]
fn omega_volume_degenerate_cases() {
    let m = ModelManifold::torus(2, 10);
    let omega = BaseForm::new(2, m.clone()).with_term(&[0, 1], ScalarField::one());
    let beta = BaseForm::zero(1, m.clone());
    let v1 = contact_bundles::bundle::omega_volume(&beta, &ScalarField::one(), &omega, 1).unwrap();
    assert!(tangential_max(&v1.sub(&omega).unwrap(), &m).unwrap() < 1e-14);
    let beta2 = BaseForm::new(1, m.clone()).with_term(&[0], ScalarField::one());
    let v0 = contact_bundles::bundle::omega_volume(&beta2, &ScalarField::zero(), &omega, 1).unwrap();
    assert!(tangential_max(&v0, &m).unwrap() < 1e-14);
}

/// Contact verification is part of every pipeline stage; spot-check the
/// decomposition of the glued bundle form against its construction data.
#[test]
fn glued_form_decomposes_to_band_profile() {
    let opts = GalleryOptions {
        resolution_scale: 0.5,
        ..Default::default()
    };
    let (pipe, _) = build_t2s2(1, &opts, ProfileParams::default()).unwrap();
    let (_, u, regular) = decompose_alpha(&pipe.glued).unwrap();
    assert!(regular);
    // u = 1 on the northern cap, -1 on the southern cap
    let north = pipe.base.chart(&[0.1, 0.1, 0.3, 0.3]);
    let south = pipe.base.chart(&[0.1, 0.1, std::f64::consts::PI - 0.3, 0.3]);
    assert_eq!(u.eval(&north), 1.0);
    assert_eq!(u.eval(&south), -1.0);
    let contact = contact_check(&pipe.glued, 1e-9).unwrap();
    assert!(contact.passed);
}
