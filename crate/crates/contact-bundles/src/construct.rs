//! The existence machinery: Boothby-Wang forms, collar normalization,
//! gauge alignment, the profile-driven neck, global gluing, scaling of
//! exact pieces, contactisation of ideal Liouville data, and convex
//! interpolation of contact pairs.

use rayon::prelude::*;

use crate::bundle::{contact_check, top_wedge_power, Bundle, InvariantForm};
#[cfg(test)]
use crate::bundle::BundleSpec;
use crate::curve::CurveFn;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::form::{increasing_subsets, tangential_max, BaseForm};
use crate::manifold::{frame_at, FactorKind, Manifold};
use crate::profiles::{make_profiles, validate_profiles, CollarProfile, ProfilePair};
use crate::splitting::{
    dividing_set, oriented_complement_frame, slice_from_points, tangential_max_filtered,
    weak_filling_w1, ContactSliceData, DividingSetMesh,
};
use crate::sweep::{positivity_sweep, resolutions, sweep_filtered, PositivityReport};
use crate::tolerances::{
    CLOSEDNESS_TOL, COLLAR_NORMAL_FORM_TOL, GAUGE_SPLIT_TOL, NECK_ORACLE_FLOOR,
    NECK_ORACLE_REL_TOL, POSITIVITY_TOL, ROOT_TOL, SCALE_TUNE_CAP, SEAM_TOL,
    TRANSVERSALITY_TOL, W2_DEFAULT_B,
};

const QUADRATURE_PANELS: usize = 128;
const GAMMA_PATH_FREEZE_TOL: f64 = 1e-12;
const ORACLE_FD_STEP: f64 = 1e-5;
const SEAM_FD_STEP: f64 = 1e-4;

/// Connection form as the contact form when the curvature (or its
/// negation, for the reversed orientation) is symplectic.
pub fn boothby_wang(bundle: &Bundle) -> Result<InvariantForm> {
    let base = bundle.base.clone();
    let plus = InvariantForm::contact_candidate(
        BaseForm::zero(1, base.clone()),
        ScalarField::one(),
        bundle.clone(),
    );
    let report = contact_check(&plus, POSITIVITY_TOL)?;
    if report.passed {
        return Ok(plus);
    }
    let minus = InvariantForm::contact_candidate(
        BaseForm::zero(1, base.clone()),
        ScalarField::constant(-1.0),
        bundle.clone(),
    );
    let report_minus = contact_check(&minus, POSITIVITY_TOL)?;
    if report_minus.passed {
        return Ok(minus);
    }
    Err(Error::SweepFailed {
        what: "curvature is not symplectic for either orientation".into(),
        min: report.min_value.max(report_minus.min_value),
        argmin: report.argmin,
    })
}

/// Restriction of a form to the slice {t = t0}, pulled back over the
/// collar: dt-components drop, coefficients freeze in t.
pub fn freeze_slice(form: &BaseForm, t_ambient: usize, t0: f64) -> BaseForm {
    let mut out = BaseForm::new(form.degree, form.manifold.clone());
    for (idx, c) in &form.coeffs {
        if idx.contains(&t_ambient) {
            continue;
        }
        out = out.with_term(idx, freeze_field(c, t_ambient, t0));
    }
    out
}

fn freeze_field(c: &ScalarField, t_ambient: usize, t0: f64) -> ScalarField {
    let base = c.clone();
    let grad = c.clone();
    ScalarField::from_parts(
        move |p: &[f64]| {
            let mut q = p.to_vec();
            q[t_ambient] = t0;
            base.eval(&q)
        },
        move |i| {
            if i == t_ambient {
                ScalarField::zero()
            } else {
                freeze_field(&grad.partial(i), t_ambient, t0)
            }
        },
    )
}

/// Interior product with the unit coordinate field of one ambient axis.
pub fn interior_product_axis(form: &BaseForm, t_ambient: usize) -> BaseForm {
    let mut out = BaseForm::new(form.degree.saturating_sub(1), form.manifold.clone());
    for (idx, c) in &form.coeffs {
        if let Some(pos) = idx.iter().position(|&i| i == t_ambient) {
            let rest: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|&i| i != t_ambient)
                .collect();
            let signed = if pos % 2 == 0 { c.clone() } else { c.neg() };
            out = out.with_term(&rest, signed);
        }
    }
    out
}

fn interval_factor(m: &Manifold) -> Result<(usize, usize, usize, f64, f64)> {
    for (fi, f) in m.factors.iter().enumerate() {
        if let FactorKind::Interval(a, b) = f.kind {
            return Ok((fi, m.ambient_offset(fi), m.param_offset(fi), a, b));
        }
    }
    Err(Error::Precondition(
        "manifold carries no interval factor".into(),
    ))
}

/// Slice frames of a collar at a fixed value of the interval coordinate,
/// oriented with the outward (+t) direction first.
fn collar_slice(m: &Manifold, t_param: usize, t_ambient: usize, t_val: f64) -> Vec<(Vec<f64>, Vec<Vec<f64>>)> {
    let axes = m.axes();
    let others: Vec<usize> = (0..axes.len()).filter(|&k| k != t_param).collect();
    let count: usize = others.iter().map(|&k| axes[k].samples.len()).product();
    let mut out = Vec::with_capacity(count);
    for line in 0..count {
        let mut params = vec![0.0; axes.len()];
        params[t_param] = t_val;
        let mut rem = line;
        for &k in others.iter().rev() {
            let n = axes[k].samples.len();
            params[k] = axes[k].samples[rem % n];
            rem /= n;
        }
        let p = m.chart(&params);
        let fr = frame_at(m, &p).expect("chart point on manifold");
        let mut outward = vec![0.0; p.len()];
        outward[t_ambient] = 1.0;
        let frame = oriented_complement_frame(&fr, &outward).expect("interval direction in frame");
        out.push((p, frame));
    }
    out
}

/// Outcome of the collar modification `omega_tilde = omega^G + d(c gamma)
/// + d(b beta)`.
pub struct CollarNormalization {
    pub omega_tilde: BaseForm,
    pub omega_slice: BaseForm,
    pub gamma: BaseForm,
    pub sweep: PositivityReport,
    /// Residual of the exponential normal form near the outer boundary.
    pub normal_form_residual: f64,
    /// Worst convex-combination slice value seen while validating the
    /// weak-filling precondition.
    pub precondition_min: f64,
}

/// Modifies a symplectic collar so that near the outer boundary it takes
/// the normal form `omega^G + d(e^s b(1) beta)` with s = log b(t) - log b(1).
pub fn collar_normalize(
    omega_plus: &BaseForm,
    beta: &BaseForm,
    collar: &Manifold,
    profile: &CollarProfile,
    n: usize,
    gamma: Option<&BaseForm>,
) -> Result<CollarNormalization> {
    profile.validate()?;
    let (_, t_ambient, t_param, lo, hi) = interval_factor(collar)?;
    if (lo, hi) != (0.0, 1.0) {
        return Err(Error::Precondition(
            "collar interval must be [0, 1]".into(),
        ));
    }
    let closed = tangential_max(&omega_plus.ext_d(), collar)?;
    if closed > CLOSEDNESS_TOL {
        return Err(Error::Precondition(format!(
            "collar form is not closed: {closed:.3e}"
        )));
    }
    let omega_slice = freeze_slice(omega_plus, t_ambient, 0.0);
    let gamma = match gamma {
        Some(g) => g.clone(),
        None => {
            // homotopy primitive along t of the dt-component
            let contracted = interior_product_axis(omega_plus, t_ambient);
            let mut g = BaseForm::new(1, collar.clone());
            for (idx, c) in &contracted.coeffs {
                g = g.with_term(
                    idx,
                    ScalarField::integral_along_axis(c, t_ambient, 0.0, QUADRATURE_PANELS),
                );
            }
            g
        }
    };
    let split_residual = tangential_max(
        &omega_plus
            .sub(&omega_slice)?
            .sub(&gamma.ext_d())?,
        collar,
    )?;
    if split_residual > GAUGE_SPLIT_TOL {
        return Err(Error::Precondition(format!(
            "omega does not split against the frozen slice: residual {split_residual:.3e}"
        )));
    }

    // Weak-filling precondition on slices, for convex combinations of the
    // frozen form and the full collar form.
    let dbeta = beta.ext_d();
    let dgamma = gamma.ext_d();
    let mut precondition_min = f64::INFINITY;
    for &t_val in &[0.01, 0.25, 0.5, 0.75, 0.99] {
        let slices = collar_slice(collar, t_param, t_ambient, t_val);
        for &c_t in &[0.0, 0.5, 1.0] {
            for &b_t in &W2_DEFAULT_B {
                let blend = dbeta
                    .scale(b_t)
                    .add(&omega_slice)?
                    .add(&dgamma.scale(c_t))?;
                let mut form = beta.clone();
                for _ in 0..n.saturating_sub(1) {
                    form = form.wedge(&blend)?;
                }
                for (p, frame) in &slices {
                    let v = form.eval_on_vectors(p, frame)?;
                    precondition_min = precondition_min.min(v);
                    if v <= 0.0 {
                        return Err(Error::Precondition(format!(
                            "slice weak-filling fails at t = {t_val}, c = {c_t}, b = {b_t}: value {v:.3e}"
                        )));
                    }
                }
            }
        }
    }

    let c_lift = profile.c.lift(t_ambient);
    let b_lift = profile.b.lift(t_ambient);
    let omega_tilde = omega_slice
        .add(&gamma.scale_field(&c_lift).ext_d())?
        .add(&beta.scale_field(&b_lift).ext_d())?;
    let mut top = omega_tilde.clone();
    for _ in 0..n.saturating_sub(1) {
        top = top.wedge(&omega_tilde)?;
    }
    let sweep = positivity_sweep(&top, collar, POSITIVITY_TOL)?;
    if !sweep.passed {
        return Err(Error::TuningFailure(format!(
            "collar sweep failed (min {:.3e} at {:?}); raise the slope of b",
            sweep.min_value, sweep.argmin
        )));
    }
    let normal = omega_slice.add(&beta.scale_field(&b_lift).ext_d())?;
    let normal_form_residual = tangential_max_filtered(
        &omega_tilde.sub(&normal)?,
        collar,
        |p| p[t_ambient] >= 0.92,
    )?;
    if normal_form_residual > COLLAR_NORMAL_FORM_TOL {
        return Err(Error::InternalConsistency(format!(
            "collar normal form residual {normal_form_residual:.3e}"
        )));
    }
    Ok(CollarNormalization {
        omega_tilde,
        omega_slice,
        gamma,
        sweep,
        normal_form_residual,
        precondition_min,
    })
}

/// Split of a closed collar 1-form into a frozen slice representative
/// plus an exact part recovered by quadrature along the collar.
pub struct GaugeSplit {
    pub slice_part: BaseForm,
    pub h: ScalarField,
    /// d(chi h), the adjustment applied to the connection over the piece.
    pub correction: BaseForm,
    pub residual: f64,
}

pub fn connection_align(
    gamma: &BaseForm,
    collar: &Manifold,
    chi: &CurveFn,
) -> Result<GaugeSplit> {
    let (_, t_ambient, _, lo, _) = interval_factor(collar)?;
    let closed = tangential_max(&gamma.ext_d(), collar)?;
    if closed > CLOSEDNESS_TOL {
        return Err(Error::Precondition(format!(
            "gauge form is not closed: max |d gamma| = {closed:.3e}"
        )));
    }
    let slice_part = freeze_slice(gamma, t_ambient, lo);
    let dt_component = interior_product_axis(gamma, t_ambient);
    let integrand = dt_component
        .coeffs
        .get(&vec![])
        .cloned()
        .unwrap_or_else(ScalarField::zero);
    let h = ScalarField::integral_along_axis(&integrand, t_ambient, lo, QUADRATURE_PANELS);
    let dh = BaseForm::zero_form(h.clone(), collar.clone()).ext_d();
    let residual = tangential_max(&gamma.sub(&slice_part)?.sub(&dh)?, collar)?;
    if residual > GAUGE_SPLIT_TOL {
        return Err(Error::InternalConsistency(format!(
            "gauge split residual {residual:.3e}"
        )));
    }
    let chi_h = chi.lift(t_ambient).mul(&h);
    let correction = BaseForm::zero_form(chi_h, collar.clone()).ext_d();
    Ok(GaugeSplit {
        slice_part,
        h,
        correction,
        residual,
    })
}

/// Data of the neck [-1, 1] x Gamma: a contact form on the slice, a gauge
/// path gamma_t frozen near the ends, and the profile pair.
pub struct NeckAssembly {
    pub bundle: Bundle,
    pub beta: BaseForm,
    pub gamma_path: BaseForm,
    pub profiles: ProfilePair,
}

pub struct NeckResult {
    pub alpha: InvariantForm,
    pub contact: PositivityReport,
    /// Worst relative disagreement between the generic engine and the
    /// closed expansion of the neck volume.
    pub oracle_rel_err: f64,
    /// Profiles actually used (after any plateau escalation).
    pub profiles: ProfilePair,
}

/// Builds f beta + g psi_t over the neck and verifies it twice: through
/// the generic pair calculus and against the closed expansion
/// n dt ^ ((f'g - fg') beta + g^2 d(gamma_t)/dt) ^ (f d beta + g omega_t)^(n-1).
pub fn assemble_neck(na: &NeckAssembly) -> Result<NeckResult> {
    let neck = na.bundle.base.clone();
    let (_, t_ambient, _, lo, hi) = interval_factor(&neck)?;
    if (lo, hi) != (-1.0, 1.0) {
        return Err(Error::Precondition("neck interval must be [-1, 1]".into()));
    }
    validate_profiles(&na.profiles.f, &na.profiles.g, &na.profiles.params)?;
    for idx in na.gamma_path.coeffs.keys() {
        if idx.contains(&t_ambient) {
            return Err(Error::Precondition(
                "gauge path must have no dt-component".into(),
            ));
        }
    }
    // the path must be frozen near the ends
    let dgamma_dt = partial_t_form(&na.gamma_path, t_ambient, false);
    let end_drift = tangential_max_filtered(&dgamma_dt, &neck, |p| p[t_ambient].abs() >= 0.9)?;
    if end_drift > GAMMA_PATH_FREEZE_TOL {
        return Err(Error::Precondition(format!(
            "gauge path is not frozen near the ends: drift {end_drift:.3e}"
        )));
    }

    let mut params = na.profiles.params;
    let mut pair = na.profiles.clone();
    let mut last_report;
    loop {
        let alpha = neck_pair(&na.bundle, &na.beta, &na.gamma_path, &pair, t_ambient)?;
        let report = contact_check(&alpha, POSITIVITY_TOL)?;
        if report.passed {
            let oracle_rel_err =
                neck_oracle_agreement(na, &pair, &alpha, t_ambient)?;
            return Ok(NeckResult {
                alpha,
                contact: report,
                oracle_rel_err,
                profiles: pair,
            });
        }
        last_report = report;
        if !params.escalate() {
            return Err(Error::SweepFailed {
                what: "neck sweep failed at the escalation caps".into(),
                min: last_report.min_value,
                argmin: last_report.argmin,
            });
        }
        pair = make_profiles(params)?;
    }
}

fn neck_pair(
    bundle: &Bundle,
    beta: &BaseForm,
    gamma_path: &BaseForm,
    profiles: &ProfilePair,
    t_ambient: usize,
) -> Result<InvariantForm> {
    let f = profiles.f.lift(t_ambient);
    let g = profiles.g.lift(t_ambient);
    let a = beta.scale_field(&f).add(&gamma_path.scale_field(&g))?;
    Ok(InvariantForm::contact_candidate(a, g, bundle.clone()))
}

/// d(coefficients)/dt as a form, either analytically or by central
/// differences in the collar coordinate.
fn partial_t_form(form: &BaseForm, t_ambient: usize, by_fd: bool) -> BaseForm {
    let mut out = BaseForm::new(form.degree, form.manifold.clone());
    for (idx, c) in &form.coeffs {
        let dc = if by_fd {
            let cc = c.clone();
            ScalarField::from_fn(move |p: &[f64]| {
                let mut q = p.to_vec();
                q[t_ambient] = p[t_ambient] + ORACLE_FD_STEP;
                let hi = cc.eval(&q);
                q[t_ambient] = p[t_ambient] - ORACLE_FD_STEP;
                let lo = cc.eval(&q);
                (hi - lo) / (2.0 * ORACLE_FD_STEP)
            })
        } else {
            c.partial(t_ambient)
        };
        out = out.with_term(idx, dc);
    }
    out
}

fn neck_oracle_agreement(
    na: &NeckAssembly,
    profiles: &ProfilePair,
    alpha: &InvariantForm,
    t_ambient: usize,
) -> Result<f64> {
    let neck = na.bundle.base.clone();
    let n = na.bundle.dimension_n();
    let f = profiles.f.lift(t_ambient);
    let g = profiles.g.lift(t_ambient);
    let fp = profiles.f.deriv().lift(t_ambient);
    let gp = profiles.g.deriv().lift(t_ambient);
    let w = fp.mul(&g).sub(&f.mul(&gp));
    // the oracle differentiates the path independently, by central
    // differences in t
    let dgamma_dt = partial_t_form(&na.gamma_path, t_ambient, true);
    let x = na
        .beta
        .scale_field(&w)
        .add(&dgamma_dt.scale_field(&g.mul(&g)))?;
    let y = na
        .beta
        .ext_d()
        .scale_field(&f)
        .add(&na.bundle.curvature.add(&na.gamma_path.ext_d())?.scale_field(&g))?;
    let dt = BaseForm::new(1, neck.clone()).with_term(&[t_ambient], ScalarField::one());
    let mut oracle = dt.wedge(&x)?;
    for _ in 0..n.saturating_sub(1) {
        oracle = oracle.wedge(&y)?;
    }
    oracle = oracle.scale(n as f64);
    let engine = top_wedge_power(alpha)?.b();
    let worst = (0..neck.grid_size())
        .into_par_iter()
        .map(|flat| {
            let p = neck.grid_point(flat);
            let fr = frame_at(&neck, &p).expect("grid");
            let e = engine.eval_on_frame(&fr).expect("degree");
            let o = oracle.eval_on_frame(&fr).expect("degree");
            if e.abs() > NECK_ORACLE_FLOOR {
                (e - o).abs() / e.abs()
            } else {
                0.0
            }
        })
        .reduce(|| 0.0, f64::max);
    if worst > NECK_ORACLE_REL_TOL {
        return Err(Error::InternalConsistency(format!(
            "neck oracle disagreement {worst:.3e}"
        )));
    }
    Ok(worst)
}

/// Chart of the global band: a collar coordinate field on the closed
/// base, with the parameter axis used for seams and the dividing set.
pub struct BandChart {
    /// The collar coordinate t as a field on the global base.
    pub t: ScalarField,
    /// Parameter axis along which t is monotone (transverse axis).
    pub axis: usize,
}

pub struct GlobalPieces {
    pub bundle: Bundle,
    pub plus: InvariantForm,
    pub neck: Option<InvariantForm>,
    pub minus: Option<InvariantForm>,
    pub band: Option<BandChart>,
}

pub struct AssemblyReport {
    pub seam_residual: f64,
    pub contact: PositivityReport,
    /// Collar-coordinate values of every detected zero of u.
    pub dividing_t_values: Vec<f64>,
}

/// Glues the pieces into one invariant form. The pair representations
/// must agree, with their first derivatives in the collar coordinate, on
/// the overlap collars around t = -1 and t = +1.
pub fn assemble_global(pieces: &GlobalPieces) -> Result<(InvariantForm, AssemblyReport)> {
    let (neck, minus, band) = match (&pieces.neck, &pieces.minus, &pieces.band) {
        (Some(n), Some(m), Some(b)) => (n, m, b),
        (None, None, _) => {
            let contact = contact_check(&pieces.plus, POSITIVITY_TOL)?;
            return Ok((
                pieces.plus.clone(),
                AssemblyReport {
                    seam_residual: 0.0,
                    contact,
                    dividing_t_values: Vec::new(),
                },
            ));
        }
        _ => {
            return Err(Error::Precondition(
                "neck and negative piece must be supplied together".into(),
            ))
        }
    };
    let base = pieces.bundle.base.clone();

    // Seam agreement on the overlap collars.
    let mut seam_residual: f64 = 0.0;
    let mut worst_point: Vec<f64> = Vec::new();
    for flat in 0..base.grid_size() {
        let params = base.grid_params(flat);
        let p = base.chart(&params);
        let t = band.t.eval(&p);
        let (cap, which) = if (-1.15..=-0.95).contains(&t) {
            (&pieces.plus, -1.0)
        } else if (0.95..=1.15).contains(&t) {
            (minus, 1.0)
        } else {
            continue;
        };
        let _ = which;
        let fr = frame_at(&base, &p)?;
        let r = seam_residual_at(cap, neck, &base, &params, band.axis, &fr)?;
        if r > seam_residual {
            seam_residual = r;
            worst_point = p.clone();
        }
    }
    if seam_residual > SEAM_TOL {
        return Err(Error::SeamMismatch {
            point: worst_point,
            residual: seam_residual,
            tol: SEAM_TOL,
        });
    }

    // Glue coefficients by region.
    let t_field = band.t.clone();
    let selector = std::sync::Arc::new(move |p: &[f64]| -> usize {
        let t = t_field.eval(p);
        if t <= -1.0 {
            0
        } else if t >= 1.0 {
            2
        } else {
            1
        }
    });
    let glue_form = |a: &BaseForm, b: &BaseForm, c: &BaseForm| -> BaseForm {
        let mut indices: std::collections::BTreeSet<Vec<usize>> = Default::default();
        for f in [a, b, c] {
            indices.extend(f.coeffs.keys().cloned());
        }
        let mut out = BaseForm::new(a.degree, base.clone());
        for idx in indices {
            let branches = [a, b, c]
                .iter()
                .map(|f| f.coeffs.get(&idx).cloned().unwrap_or_else(ScalarField::zero))
                .collect::<Vec<_>>();
            out = out.with_term(&idx, ScalarField::piecewise(selector.clone(), branches));
        }
        out
    };
    let glued_a = glue_form(&pieces.plus.a(), &neck.a(), &minus.a());
    let glued_b = glue_form(&pieces.plus.b(), &neck.b(), &minus.b());
    let glued = InvariantForm::new(glued_a, glued_b.clone(), pieces.bundle.clone());

    let contact = contact_check(&glued, POSITIVITY_TOL)?;
    let u = glued_b
        .coeffs
        .get(&vec![])
        .cloned()
        .unwrap_or_else(ScalarField::zero);
    let mesh = dividing_set(&u, &base, band.axis)?;
    let dividing_t_values = mesh
        .zero_points
        .iter()
        .map(|z| band.t.eval(&z.ambient))
        .collect();
    Ok((
        glued,
        AssemblyReport {
            seam_residual,
            contact,
            dividing_t_values,
        },
    ))
}

fn seam_residual_at(
    cap: &InvariantForm,
    neck: &InvariantForm,
    base: &Manifold,
    params: &[f64],
    axis: usize,
    fr: &crate::manifold::Frame,
) -> Result<f64> {
    let h = SEAM_FD_STEP;
    let (ca, na_) = (cap.a(), neck.a());
    let (cb, nb) = (cap.b(), neck.b());
    let evals = |params: &[f64]| -> Result<Vec<f64>> {
        let p = base.chart(params);
        let mut out = Vec::with_capacity(fr.vectors.len() + 1);
        for v in &fr.vectors {
            let dv = ca.eval_on_vectors(&p, std::slice::from_ref(v))?
                - na_.eval_on_vectors(&p, std::slice::from_ref(v))?;
            out.push(dv);
        }
        let cu = cb.coeffs.get(&vec![]).map(|f| f.eval(&p)).unwrap_or(0.0);
        let nu = nb.coeffs.get(&vec![]).map(|f| f.eval(&p)).unwrap_or(0.0);
        out.push(cu - nu);
        Ok(out)
    };
    let center = evals(params)?;
    let mut plus = params.to_vec();
    plus[axis] += h;
    let mut minus = params.to_vec();
    minus[axis] -= h;
    let (ev_p, ev_m) = (evals(&plus)?, evals(&minus)?);
    let mut worst: f64 = 0.0;
    for (k, &c) in center.iter().enumerate() {
        worst = worst.max(c.abs());
        worst = worst.max(((ev_p[k] - ev_m[k]) / (2.0 * h)).abs());
    }
    Ok(worst)
}

/// Doubling search for the scale making sigma + K d lambda symplectic
/// and weakly filling on the slice. Returns the first passing K and the
/// (K, passed) trail.
pub fn scale_tune(
    sigma: &BaseForm,
    lambda: &BaseForm,
    slice: &ContactSliceData,
    piece: &Manifold,
    n: usize,
) -> Result<(f64, Vec<(f64, bool)>)> {
    let dlambda = lambda.ext_d();
    let mut k = 1.0;
    let mut trail = Vec::new();
    while k <= SCALE_TUNE_CAP {
        let omega = sigma.add(&dlambda.scale(k))?;
        let mut top = omega.clone();
        for _ in 0..n.saturating_sub(1) {
            top = top.wedge(&omega)?;
        }
        let sweep_ok = positivity_sweep(&top, piece, POSITIVITY_TOL)?.passed;
        let w1_ok = sweep_ok && weak_filling_w1(slice, &omega, n)?.passed;
        trail.push((k, sweep_ok && w1_ok));
        if sweep_ok && w1_ok {
            return Ok((k, trail));
        }
        k *= 2.0;
    }
    Err(Error::TuningFailure(format!(
        "no K up to {SCALE_TUNE_CAP} makes the piece symplectic and weakly filling"
    )))
}

/// Where the boundary of an ideal Liouville domain sits in the chart.
pub struct BoundarySlice {
    /// Interval factor index carrying the boundary.
    pub factor: usize,
    /// Parameter value of the boundary (an interval endpoint).
    pub value: f64,
}

pub struct ContactiseInput {
    pub bundle: Bundle,
    pub u: ScalarField,
    pub lambda: BaseForm,
    /// Analytic extension of u * lambda across {u = 0}; required when a
    /// boundary is present (the raw product is 0 * infinity there).
    pub extension: Option<BaseForm>,
    pub boundary: Option<BoundarySlice>,
    /// Standoff for the interior symplectic check, in units of u.
    pub interior_eps: f64,
}

pub struct ContactiseReport {
    pub contact: PositivityReport,
    pub interior_symplectic: PositivityReport,
    pub boundary_contact: Option<PositivityReport>,
}

/// The invariant contact form (u lambda, u) of an ideal Liouville domain.
pub fn contactise(input: &ContactiseInput) -> Result<(InvariantForm, ContactiseReport)> {
    let base = input.bundle.base.clone();
    let n = input.bundle.dimension_n();

    // u >= 0 with the boundary as regular zero set
    let min_u = (0..base.grid_size())
        .into_par_iter()
        .map(|flat| input.u.eval(&base.grid_point(flat)))
        .reduce(|| f64::INFINITY, f64::min);
    if min_u < -ROOT_TOL {
        return Err(Error::Precondition(format!(
            "u must be nonnegative; min over grid {min_u:.3e}"
        )));
    }

    // d lambda + omega symplectic away from the boundary
    let core = input.lambda.ext_d().add(&input.bundle.curvature)?;
    let mut top = core.clone();
    for _ in 0..n.saturating_sub(1) {
        top = top.wedge(&core)?;
    }
    let eps = input.interior_eps;
    let u = input.u.clone();
    let interior_symplectic =
        sweep_filtered(&top, &base, POSITIVITY_TOL, move |p| u.eval(p) > eps, false)?;
    if !interior_symplectic.passed {
        return Err(Error::SweepFailed {
            what: "interior symplectic form".into(),
            min: interior_symplectic.min_value,
            argmin: interior_symplectic.argmin,
        });
    }

    let beta = match &input.extension {
        Some(ext) => ext.clone(),
        None => input.lambda.scale_field(&input.u),
    };

    // boundary: u vanishes transversally and the extension restricts to a
    // contact form there
    let boundary_contact = match &input.boundary {
        Some(b) => {
            let axes = base.axes();
            let t_param = base.param_offset(b.factor);
            let mut hit = false;
            if let FactorKind::Interval(lo, hi) = base.factors[b.factor].kind {
                hit = (b.value - lo).abs() < 1e-12 || (b.value - hi).abs() < 1e-12;
            }
            if !hit {
                return Err(Error::Precondition(
                    "boundary value must be an interval endpoint".into(),
                ));
            }
            // transversality of u along the boundary axis
            let others: Vec<usize> = (0..axes.len()).filter(|&k| k != t_param).collect();
            let count: usize = others.iter().map(|&k| axes[k].samples.len()).product();
            let mut points = Vec::with_capacity(count);
            for line in 0..count {
                let mut params = vec![0.0; axes.len()];
                params[t_param] = b.value;
                let mut rem = line;
                for &k in others.iter().rev() {
                    let nsm = axes[k].samples.len();
                    params[k] = axes[k].samples[rem % nsm];
                    rem /= nsm;
                }
                let p = base.chart(&params);
                let uv = input.u.eval(&p);
                if uv.abs() > ROOT_TOL {
                    return Err(Error::Precondition(format!(
                        "u does not vanish on the declared boundary: u = {uv:.3e}"
                    )));
                }
                let h = 1e-5;
                let mut q = params.to_vec();
                q[t_param] = b.value - h;
                let inner = input.u.eval(&base.chart(&q));
                if (inner / h).abs() < TRANSVERSALITY_TOL {
                    return Err(Error::TangentialZero {
                        point: p,
                        slope: (inner / h).abs(),
                        tol: TRANSVERSALITY_TOL,
                    });
                }
                points.push(p);
            }
            let slice = slice_from_points(&beta, &input.u, &base, 0.0, points)?;
            let report = slice_contact_report(&slice, n)?;
            if !report.passed {
                return Err(Error::SweepFailed {
                    what: "boundary contact form".into(),
                    min: report.min_value,
                    argmin: report.argmin,
                });
            }
            Some(report)
        }
        None => None,
    };

    let alpha = InvariantForm::contact_candidate(beta, input.u.clone(), input.bundle.clone());
    let contact = contact_check(&alpha, POSITIVITY_TOL)?;
    Ok((
        alpha,
        ContactiseReport {
            contact,
            interior_symplectic,
            boundary_contact,
        },
    ))
}

/// beta ^ (d beta)^(n-1) evaluated over the slice frames.
pub fn slice_contact_report(slice: &ContactSliceData, n: usize) -> Result<PositivityReport> {
    let mut form = slice.beta.clone();
    let dbeta = slice.beta.ext_d();
    for _ in 0..n.saturating_sub(1) {
        form = form.wedge(&dbeta)?;
    }
    let mut worst: Option<(f64, Vec<f64>)> = None;
    for (p, frame) in slice.points.iter().zip(&slice.frames) {
        let v = form.eval_on_vectors(p, frame)?;
        if worst.as_ref().map(|(w, _)| v < *w).unwrap_or(true) {
            worst = Some((v, p.clone()));
        }
    }
    let (min, argmin) = worst.ok_or(Error::EmptyRegion("empty slice".into()))?;
    Ok(PositivityReport::new(
        min,
        argmin,
        resolutions(&slice.manifold),
        POSITIVITY_TOL,
    ))
}

/// Contactness of the convex path (1-t) beta0 + t beta1 + u psi.
///
/// Both ends must induce the same symplectic form away from the dividing
/// set and the same kernel on it.
pub fn interpolation_check(
    beta0: &BaseForm,
    beta1: &BaseForm,
    u: &ScalarField,
    bundle: &Bundle,
    t_samples: &[f64],
    dividing_axis: Option<usize>,
) -> Result<Vec<PositivityReport>> {
    let base = bundle.base.clone();
    let eps = crate::splitting::default_eps(u, &base).max(1e-6);
    let diff = beta0.sub(beta1)?;
    let inv_u = ScalarField::one().div(u);
    let same_piece = tangential_max_filtered(
        &diff.scale_field(&inv_u).ext_d(),
        &base,
        |p| u.eval(p).abs() >= eps,
    )?;
    if same_piece > GAUGE_SPLIT_TOL {
        return Err(Error::Precondition(format!(
            "the two forms induce different symplectic pieces: residual {same_piece:.3e}"
        )));
    }
    if let Some(axis) = dividing_axis {
        let mesh: DividingSetMesh = dividing_set(u, &base, axis)?;
        let cross = beta0.wedge(beta1)?;
        for z in &mesh.zero_points {
            let fr = frame_at(&base, &z.ambient)?;
            let subsets = increasing_subsets(fr.vectors.len(), 2);
            for s in subsets {
                let picked: Vec<Vec<f64>> = s.iter().map(|&k| fr.vectors[k].clone()).collect();
                let v = cross.eval_on_vectors(&z.ambient, &picked)?;
                if v.abs() > 1e-6 {
                    return Err(Error::Precondition(format!(
                        "kernels differ on the dividing set: |beta0 ^ beta1| = {v:.3e}"
                    )));
                }
            }
        }
    }
    let samples: Vec<f64> = if t_samples.is_empty() {
        (0..11).map(|k| k as f64 / 10.0).collect()
    } else {
        t_samples.to_vec()
    };
    let mut out = Vec::with_capacity(samples.len());
    for &t in &samples {
        let blend = beta0.scale(1.0 - t).add(&beta1.scale(t))?;
        let alpha = InvariantForm::contact_candidate(blend, u.clone(), bundle.clone());
        out.push(contact_check(&alpha, POSITIVITY_TOL)?);
    }
    Ok(out)
}
