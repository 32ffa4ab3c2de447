//! Dividing sets, induced symplectic pieces, and weak-filling checks.
//!
//! Zeros of the invariant function u are located by bisection along one
//! designated parameter axis of the sampling chart; every model in the
//! gallery is monotone in a single coordinate near its zeros.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::form::BaseForm;
use crate::manifold::{frame_at, Frame, Manifold};
use crate::sweep::{resolutions, sweep_filtered, PositivityReport};
use crate::tolerances::{
    CLOSEDNESS_TOL, EPS_FRACTION_DEFAULT, EPS_SCAN_FRACTIONS, POSITIVITY_TOL, ROOT_TOL,
    TRANSVERSALITY_TOL, W2_DEFAULT_B,
};

const BISECT_MAX_ITERS: usize = 120;
const PARAM_FD_STEP: f64 = 1e-5;
const FRAME_INDEPENDENCE_TOL: f64 = 1e-10;

/// A zero of u found on a parameter line.
#[derive(Clone, Debug)]
pub struct ZeroPoint {
    pub ambient: Vec<f64>,
    pub params: Vec<f64>,
    /// Directional derivative of u along the transverse parameter axis.
    pub slope: f64,
}

/// Zero set of u with per-cell signs partitioning the grid into the two
/// pieces.
pub struct DividingSetMesh {
    pub manifold: Manifold,
    pub u: ScalarField,
    pub transverse_axis: usize,
    pub zero_points: Vec<ZeroPoint>,
    /// Sign of u at each grid sample (+1, -1, or 0 within the root
    /// tolerance), indexed like the flat grid.
    pub sign_regions: Vec<i8>,
}

impl DividingSetMesh {
    pub fn is_empty(&self) -> bool {
        self.zero_points.is_empty()
    }

    pub fn positive_cells(&self) -> usize {
        self.sign_regions.iter().filter(|&&s| s >= 0).count()
    }

    pub fn negative_cells(&self) -> usize {
        self.sign_regions.iter().filter(|&&s| s <= 0).count()
    }
}

fn eval_on_line(u: &ScalarField, m: &Manifold, params: &mut [f64], axis: usize, x: f64) -> f64 {
    params[axis] = x;
    u.eval(&m.chart(params))
}

/// Locates the zero set of u by bisection along `axis`, validating
/// transversality at every bracketed root.
pub fn dividing_set(u: &ScalarField, m: &Manifold, axis: usize) -> Result<DividingSetMesh> {
    let axes = m.axes();
    assert!(axis < axes.len(), "transverse axis out of range");
    let size = m.grid_size();
    if size == 0 {
        return Err(Error::EmptyGrid);
    }
    let mut sign_regions = vec![0i8; size];
    for (flat, sign) in sign_regions.iter_mut().enumerate() {
        let v = u.eval(&m.grid_point(flat));
        *sign = if v > ROOT_TOL {
            1
        } else if v < -ROOT_TOL {
            -1
        } else {
            0
        };
    }

    // Walk each grid line along the transverse axis.
    let line_axes: Vec<usize> = (0..axes.len()).filter(|&k| k != axis).collect();
    let line_count: usize = line_axes
        .iter()
        .map(|&k| axes[k].samples.len())
        .product::<usize>()
        .max(1);
    let n_axis = axes[axis].samples.len();
    let periodic = axes[axis].periodic;
    let period = axes[axis].hi - axes[axis].lo;

    let mut zero_points = Vec::new();
    for line in 0..line_count {
        let mut params = vec![0.0; axes.len()];
        let mut rem = line;
        for &k in line_axes.iter().rev() {
            let n = axes[k].samples.len();
            params[k] = axes[k].samples[rem % n];
            rem /= n;
        }
        let brackets = n_axis - if periodic { 0 } else { 1 };
        for j in 0..brackets {
            let x0 = axes[axis].samples[j];
            let x1 = if j + 1 < n_axis {
                axes[axis].samples[j + 1]
            } else {
                axes[axis].samples[0] + period
            };
            let u0 = eval_on_line(u, m, &mut params, axis, x0);
            let u1 = eval_on_line(u, m, &mut params, axis, x1);
            if u0 == 0.0 || u0.signum() == u1.signum() || u1 == 0.0 {
                continue;
            }
            let (mut lo, mut hi, mut ulo) = (x0, x1, u0);
            let mut root = 0.5 * (lo + hi);
            for _ in 0..BISECT_MAX_ITERS {
                root = 0.5 * (lo + hi);
                let ur = eval_on_line(u, m, &mut params, axis, root);
                if ur.abs() <= ROOT_TOL {
                    break;
                }
                if ur.signum() == ulo.signum() {
                    lo = root;
                    ulo = ur;
                } else {
                    hi = root;
                }
            }
            let residual = eval_on_line(u, m, &mut params, axis, root).abs();
            if residual > ROOT_TOL {
                return Err(Error::InternalConsistency(format!(
                    "bisection stalled at |u| = {residual:.3e}"
                )));
            }
            let h = PARAM_FD_STEP;
            let slope = (eval_on_line(u, m, &mut params, axis, root + h)
                - eval_on_line(u, m, &mut params, axis, root - h))
                / (2.0 * h);
            params[axis] = root;
            let ambient = m.chart(&params);
            if slope.abs() < TRANSVERSALITY_TOL {
                return Err(Error::TangentialZero {
                    point: ambient,
                    slope: slope.abs(),
                    tol: TRANSVERSALITY_TOL,
                });
            }
            zero_points.push(ZeroPoint {
                ambient,
                params: params.clone(),
                slope,
            });
        }
    }
    Ok(DividingSetMesh {
        manifold: m.clone(),
        u: u.clone(),
        transverse_axis: axis,
        zero_points,
        sign_regions,
    })
}

/// Orthonormal frame of the orthogonal complement of `direction` inside
/// the span of `fr`, oriented so that (direction, frame) is positive.
pub fn oriented_complement_frame(fr: &Frame, direction: &[f64]) -> Result<Vec<Vec<f64>>> {
    let dim = fr.vectors.len();
    let norm: f64 = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < FRAME_INDEPENDENCE_TOL {
        return Err(Error::Precondition(
            "degenerate frame: normal direction vanishes".into(),
        ));
    }
    let nu: Vec<f64> = direction.iter().map(|x| x / norm).collect();
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(dim - 1);
    for e in &fr.vectors {
        let mut v = e.clone();
        let d: f64 = v.iter().zip(&nu).map(|(a, b)| a * b).sum();
        for (vi, ni) in v.iter_mut().zip(&nu) {
            *vi -= d * ni;
        }
        for w in &frame {
            let d: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
            for (vi, wi) in v.iter_mut().zip(w) {
                *vi -= d * wi;
            }
        }
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            for vi in &mut v {
                *vi /= n;
            }
            frame.push(v);
            if frame.len() == dim - 1 {
                break;
            }
        }
    }
    if frame.len() != dim - 1 {
        return Err(Error::Precondition(
            "degenerate frame: complement construction collapsed".into(),
        ));
    }
    // Orientation relative to the ambient frame: coordinates of
    // (nu, frame...) in the fr basis.
    let coords = |v: &[f64]| -> Vec<f64> {
        fr.vectors
            .iter()
            .map(|e| e.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    };
    let mut rows: Vec<Vec<f64>> = vec![coords(&nu)];
    rows.extend(frame.iter().map(|v| coords(v)));
    if det(&rows) < 0.0 {
        if frame.len() >= 2 {
            let k = frame.len();
            frame.swap(k - 2, k - 1);
        } else {
            for x in &mut frame[0] {
                *x = -*x;
            }
        }
    }
    Ok(frame)
}

fn det(rows: &[Vec<f64>]) -> f64 {
    let k = rows.len();
    let mut m: Vec<f64> = rows.iter().flatten().copied().collect();
    let mut d = 1.0;
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&i, &j| m[i * k + col].abs().partial_cmp(&m[j * k + col].abs()).unwrap())
            .unwrap();
        if m[piv * k + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..k {
                m.swap(piv * k + c, col * k + c);
            }
            d = -d;
        }
        d *= m[col * k + col];
        for row in col + 1..k {
            let f = m[row * k + col] / m[col * k + col];
            for c in col..k {
                m[row * k + c] -= f * m[col * k + c];
            }
        }
    }
    d
}

/// Tangential gradient of u at `p`, as an ambient vector in the span of
/// the oriented frame.
fn tangential_gradient(du: &BaseForm, fr: &Frame) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; fr.point.len()];
    for e in &fr.vectors {
        let c = du.eval_on_vectors(&fr.point, std::slice::from_ref(e))?;
        for (g, ei) in grad.iter_mut().zip(e) {
            *g += c * ei;
        }
    }
    Ok(grad)
}

/// Positive boundary frame of the positive piece at a zero of u: the
/// outward normal (the direction in which u decreases) placed first.
pub fn gamma_frame(m: &Manifold, du: &BaseForm, p: &[f64]) -> Result<Vec<Vec<f64>>> {
    let fr = frame_at(m, p)?;
    let grad = tangential_gradient(du, &fr)?;
    let outward: Vec<f64> = grad.iter().map(|x| -x).collect();
    oriented_complement_frame(&fr, &outward)
}

/// Contactness of the restriction of beta to the dividing set: sweeps
/// beta ^ (d beta)^(n-1) over positive boundary frames at the recorded
/// zeros.
pub fn gamma_contact_check(
    beta: &BaseForm,
    ds: &DividingSetMesh,
    n: usize,
) -> Result<PositivityReport> {
    let m = &ds.manifold;
    if ds.zero_points.is_empty() {
        return Err(Error::EmptyRegion("dividing set has no zeros".into()));
    }
    let du = BaseForm::zero_form(ds.u.clone(), m.clone()).ext_d();
    let mut form = beta.clone();
    for _ in 0..n.saturating_sub(1) {
        form = form.wedge(&beta.ext_d())?;
    }
    let mut worst: Option<(f64, Vec<f64>)> = None;
    for z in &ds.zero_points {
        let frame = gamma_frame(m, &du, &z.ambient)?;
        let v = form.eval_on_vectors(&z.ambient, &frame)?;
        if worst.as_ref().map(|(w, _)| v < *w).unwrap_or(true) {
            worst = Some((v, z.ambient.clone()));
        }
    }
    let (min, argmin) = worst.expect("nonempty zero set");
    Ok(PositivityReport::new(
        min,
        argmin,
        resolutions(m),
        POSITIVITY_TOL,
    ))
}

/// The boundary criterion -du ^ beta ^ (d beta)^(n-1),
/// evaluated on the positive frame of the full base at each zero point.
pub fn boundary_criterion_min(beta: &BaseForm, ds: &DividingSetMesh, n: usize) -> Result<f64> {
    let m = &ds.manifold;
    let du = BaseForm::zero_form(ds.u.clone(), m.clone()).ext_d();
    let mut form = du.neg().wedge(beta)?;
    for _ in 0..n.saturating_sub(1) {
        form = form.wedge(&beta.ext_d())?;
    }
    let mut min = f64::INFINITY;
    for z in &ds.zero_points {
        let fr = frame_at(m, &z.ambient)?;
        min = min.min(form.eval_on_frame(&fr)?);
    }
    Ok(min)
}

/// Slice of a level set u = s: sample points with their positive
/// boundary-style frames and the ambient 1-form restricted there.
pub struct ContactSliceData {
    pub s: f64,
    pub manifold: Manifold,
    pub beta: BaseForm,
    pub points: Vec<Vec<f64>>,
    pub frames: Vec<Vec<Vec<f64>>>,
}

/// Builds the slice Gamma_s = {u = s} through the dividing-set machinery
/// applied to u - s.
pub fn contact_slice(
    beta: &BaseForm,
    u: &ScalarField,
    m: &Manifold,
    axis: usize,
    s: f64,
) -> Result<ContactSliceData> {
    let shifted = u.sub(&ScalarField::constant(s));
    let ds = dividing_set(&shifted, m, axis)?;
    if ds.zero_points.is_empty() {
        return Err(Error::EmptyRegion(format!("no samples on the level u = {s}")));
    }
    slice_from_points(
        beta,
        u,
        m,
        s,
        ds.zero_points.iter().map(|z| z.ambient.clone()).collect(),
    )
}

/// Builds slice data from explicitly supplied level points (used for
/// boundary slices that sit at a chart edge instead of a sign change).
pub fn slice_from_points(
    beta: &BaseForm,
    u: &ScalarField,
    m: &Manifold,
    s: f64,
    points: Vec<Vec<f64>>,
) -> Result<ContactSliceData> {
    let du = BaseForm::zero_form(u.clone(), m.clone()).ext_d();
    for p in &points {
        let v = u.eval(p);
        if (v - s).abs() > ROOT_TOL {
            return Err(Error::Precondition(format!(
                "slice point off level: |u - s| = {:.3e}",
                (v - s).abs()
            )));
        }
    }
    let frames = points
        .iter()
        .map(|p| gamma_frame(m, &du, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(ContactSliceData {
        s,
        manifold: m.clone(),
        beta: beta.clone(),
        points,
        frames,
    })
}

impl ContactSliceData {
    /// Positive frame of eta = ker(beta) inside the slice tangent space at
    /// point `i`: F is positive when (R, F) is a positive slice frame for
    /// the Riesz vector R of beta.
    fn eta_frame(&self, i: usize) -> Result<Vec<Vec<f64>>> {
        let p = &self.points[i];
        let gamma = &self.frames[i];
        let vals: Vec<f64> = gamma
            .iter()
            .map(|v| self.beta.eval_on_vectors(p, std::slice::from_ref(v)))
            .collect::<Result<Vec<f64>>>()?;
        let norm2: f64 = vals.iter().map(|x| x * x).sum();
        if norm2.sqrt() < 1e-10 {
            return Err(Error::Precondition(format!(
                "restricted contact form vanishes at slice sample {p:?}"
            )));
        }
        let dim = p.len();
        let mut riesz = vec![0.0; dim];
        for (c, v) in vals.iter().zip(gamma) {
            for (r, vi) in riesz.iter_mut().zip(v) {
                *r += c * vi;
            }
        }
        let pseudo = Frame {
            point: p.clone(),
            vectors: gamma.clone(),
            oriented: true,
        };
        oriented_complement_frame(&pseudo, &riesz)
    }
}

/// First weak-filling condition: (d beta0)^k ^ omega^(n-1-k) positive on
/// eta for every k = 0..n-1. Reports the worst (k, point).
pub fn weak_filling_w1(
    slice: &ContactSliceData,
    omega: &BaseForm,
    n: usize,
) -> Result<PositivityReport> {
    let dbeta = slice.beta.ext_d();
    let mut worst: Option<(f64, Vec<f64>, usize)> = None;
    for k in 0..n {
        let mut form = BaseForm::zero_form(ScalarField::one(), slice.manifold.clone());
        for _ in 0..k {
            form = form.wedge(&dbeta)?;
        }
        for _ in 0..(n - 1 - k) {
            form = form.wedge(omega)?;
        }
        for (i, p) in slice.points.iter().enumerate() {
            let eta = slice.eta_frame(i)?;
            let v = form.eval_on_vectors(p, &eta)?;
            if worst.as_ref().map(|(w, _, _)| v < *w).unwrap_or(true) {
                worst = Some((v, p.clone(), k));
            }
        }
    }
    let (min, argmin, k) = worst.ok_or(Error::EmptyRegion("empty slice".into()))?;
    Ok(
        PositivityReport::new(min, argmin, resolutions(&slice.manifold), POSITIVITY_TOL)
            .with_note(format!("worst k = {k}")),
    )
}

/// Second weak-filling condition: (b d beta0 + omega)^(n-1) positive on
/// eta, sampled over constants b. The condition is pointwise in the value
/// of b, so constants probe the same family as arbitrary nonnegative
/// functions.
pub fn weak_filling_w2(
    slice: &ContactSliceData,
    omega: &BaseForm,
    n: usize,
    b_samples: &[f64],
) -> Result<PositivityReport> {
    let b_samples = if b_samples.is_empty() {
        &W2_DEFAULT_B[..]
    } else {
        b_samples
    };
    let dbeta = slice.beta.ext_d();
    let mut worst: Option<(f64, Vec<f64>, f64)> = None;
    for &b in b_samples {
        let blend = dbeta.scale(b).add(omega)?;
        let mut form = BaseForm::zero_form(ScalarField::one(), slice.manifold.clone());
        for _ in 0..n.saturating_sub(1) {
            form = form.wedge(&blend)?;
        }
        for (i, p) in slice.points.iter().enumerate() {
            let eta = slice.eta_frame(i)?;
            let v = form.eval_on_vectors(p, &eta)?;
            if worst.as_ref().map(|(w, _, _)| v < *w).unwrap_or(true) {
                worst = Some((v, p.clone(), b));
            }
        }
    }
    let (min, argmin, b) = worst.ok_or(Error::EmptyRegion("empty slice".into()))?;
    Ok(
        PositivityReport::new(min, argmin, resolutions(&slice.manifold), POSITIVITY_TOL)
            .with_note(format!("worst b = {b}")),
    )
}

/// The symplectic pieces +-(d(beta/u) + omega) on {+-u >= eps}: sweeps
/// their top powers (orientation reversed on the negative piece) and
/// checks closedness away from the dividing set.
pub fn symplectic_pieces(
    beta: &BaseForm,
    u: &ScalarField,
    omega: &BaseForm,
    n: usize,
    eps: f64,
) -> Result<(PositivityReport, PositivityReport)> {
    assert!(eps > 0.0, "standoff must be positive");
    let m = beta.manifold.clone();
    let inv_u = ScalarField::one().div(u);
    let core = beta.scale_field(&inv_u).ext_d().add(omega)?;
    let omega_plus = core.clone();
    let omega_minus = core.neg();

    let mut plus_top = omega_plus.clone();
    let mut minus_top = omega_minus.clone();
    for _ in 0..n.saturating_sub(1) {
        plus_top = plus_top.wedge(&omega_plus)?;
        minus_top = minus_top.wedge(&omega_minus)?;
    }
    let u_plus = u.clone();
    let plus = sweep_filtered(&plus_top, &m, POSITIVITY_TOL, move |p| u_plus.eval(p) >= eps, false)
        .map_err(|e| match e {
            Error::EmptyRegion(_) => Error::EmptyRegion("positive piece".into()),
            other => other,
        })?;
    let u_minus = u.clone();
    let minus = sweep_filtered(
        &minus_top,
        &m,
        POSITIVITY_TOL,
        move |p| u_minus.eval(p) <= -eps,
        true,
    )
    .map_err(|e| match e {
        Error::EmptyRegion(_) => Error::EmptyRegion("negative piece".into()),
        other => other,
    })?;

    // Closedness of the pieces away from the dividing set.
    let d_core = core.ext_d();
    let closed = tangential_max_filtered(&d_core, &m, |p| u.eval(p).abs() >= eps)?;
    if closed > CLOSEDNESS_TOL {
        return Err(Error::InternalConsistency(format!(
            "induced pieces are not closed: max |d omega_+| = {closed:.3e}"
        )));
    }
    Ok((plus, minus))
}

/// Default interior standoff: a fraction of max |u| over the grid.
pub fn default_eps(u: &ScalarField, m: &Manifold) -> f64 {
    let max_u = (0..m.grid_size())
        .into_par_iter()
        .map(|flat| u.eval(&m.grid_point(flat)).abs())
        .reduce(|| 0.0, f64::max);
    EPS_FRACTION_DEFAULT * max_u
}

/// Scans the candidate standoff fractions and reports each (eps, passed)
/// pair, largest first.
pub fn eps_scan(
    beta: &BaseForm,
    u: &ScalarField,
    omega: &BaseForm,
    n: usize,
    m: &Manifold,
) -> Vec<(f64, bool)> {
    let max_u = (0..m.grid_size())
        .into_par_iter()
        .map(|flat| u.eval(&m.grid_point(flat)).abs())
        .reduce(|| 0.0, f64::max);
    EPS_SCAN_FRACTIONS
        .iter()
        .map(|f| {
            let eps = f * max_u;
            let ok = symplectic_pieces(beta, u, omega, n, eps)
                .map(|(p, q)| p.passed && q.passed)
                .unwrap_or(false);
            (eps, ok)
        })
        .collect()
}

/// Max over selected grid samples of |form| on increasing frame tuples.
pub fn tangential_max_filtered(
    form: &BaseForm,
    m: &Manifold,
    keep: impl Fn(&[f64]) -> bool + Sync,
) -> Result<f64> {
    let intrinsic = m.intrinsic_dim();
    if form.degree > intrinsic {
        return Ok(0.0);
    }
    let subsets = crate::form::increasing_subsets(intrinsic, form.degree);
    let worst = (0..m.grid_size())
        .into_par_iter()
        .filter_map(|flat| {
            let p = m.grid_point(flat);
            if !keep(&p) {
                return None;
            }
            let fr = frame_at(m, &p).expect("grid point off manifold");
            let mut local: f64 = 0.0;
            for subset in &subsets {
                let picked: Vec<Vec<f64>> =
                    subset.iter().map(|&k| fr.vectors[k].clone()).collect();
                local = local.max(form.eval_on_vectors(&p, &picked).expect("arity").abs());
            }
            Some(local)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Cross-validation of the pieces against the volume form: on samples
/// with |u| >= eps the identity Omega = u^(n+1) (d(beta/u) + omega)^n
/// holds; returns the max relative residual.
pub fn pieces_volume_consistency(
    beta: &BaseForm,
    u: &ScalarField,
    omega: &BaseForm,
    n: usize,
    eps: f64,
) -> Result<f64> {
    let m = beta.manifold.clone();
    let volume = crate::bundle::omega_volume(beta, u, omega, n)?;
    let inv_u = ScalarField::one().div(u);
    let core = beta.scale_field(&inv_u).ext_d().add(omega)?;
    let mut top = core.clone();
    for _ in 0..n.saturating_sub(1) {
        top = top.wedge(&core)?;
    }
    let scaled = top.scale_field(&u.powi(n as i32 + 1));
    let worst = (0..m.grid_size())
        .into_par_iter()
        .filter_map(|flat| {
            let p = m.grid_point(flat);
            if u.eval(&p).abs() < eps {
                return None;
            }
            let fr = frame_at(&m, &p).expect("on grid");
            let a = volume.eval_on_frame(&fr).expect("degree");
            let b = scaled.eval_on_frame(&fr).expect("degree");
            Some((a - b).abs() / (1.0 + a.abs().max(b.abs())))
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Runs the boundary contact check on each requested level of u.
pub fn slice_contact_family(
    beta: &BaseForm,
    u: &ScalarField,
    m: &Manifold,
    axis: usize,
    s_values: &[f64],
    n: usize,
) -> Vec<(f64, Result<PositivityReport>)> {
    s_values
        .iter()
        .map(|&s| {
            let outcome = (|| {
                let shifted = u.sub(&ScalarField::constant(s));
                let ds = dividing_set(&shifted, m, axis)?;
                if ds.is_empty() {
                    return Err(Error::EmptyRegion(format!("no samples on the level u = {s}")));
                }
                gamma_contact_check(beta, &ds, n)
            })();
            (s, outcome)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::ModelManifold;

    const TAU: f64 = std::f64::consts::TAU;

    fn lutz_data(res: usize) -> (Manifold, BaseForm, ScalarField) {
        let m = ModelManifold::torus(2, res);
        let beta = BaseForm::new(1, m.clone())
            .with_term(&[0], ScalarField::coordinate(1).scale(TAU).cos());
        let u = ScalarField::coordinate(1).scale(TAU).sin();
        (m, beta, u)
    }

    #[test]
    fn sine_zeros_on_torus() {
        let (m, _, u) = lutz_data(24);
        let ds = dividing_set(&u, &m, 1).unwrap();
        // two circles: every line along theta2 crosses 0 and 0.5
        assert_eq!(ds.zero_points.len(), 2 * 24);
        for z in &ds.zero_points {
            let t = z.params[1].rem_euclid(1.0);
            let near0 = t.min(1.0 - t) < 1e-9;
            let near_half = (t - 0.5).abs() < 1e-9;
            assert!(near0 || near_half, "zero at {t}");
            assert!(z.slope.abs() > 1.0);
        }
    }

    #[test]
    fn constant_u_has_empty_mesh() {
        let m = ModelManifold::torus(2, 12);
        let ds = dividing_set(&ScalarField::one(), &m, 1).unwrap();
        assert!(ds.is_empty());
        assert_eq!(ds.positive_cells(), m.grid_size());
    }

    #[test]
    fn tangential_zero_is_detected() {
        let m = ModelManifold::torus(2, 16);
        // cubic tangency: the sign still changes but the slope vanishes
        let u = ScalarField::coordinate(1).scale(TAU).sin().powi(3);
        assert!(matches!(
            dividing_set(&u, &m, 1),
            Err(Error::TangentialZero { .. })
        ));
    }

    #[test]
    fn lutz_gamma_contact_passes_with_unit_min() {
        let (m, beta, u) = lutz_data(16);
        let ds = dividing_set(&u, &m, 1).unwrap();
        let report = gamma_contact_check(&beta, &ds, 1).unwrap();
        assert!(report.passed);
        assert!((report.min_value - 1.0).abs() < 1e-9);
        // boundary criterion: -du ^ beta > 0 on positive base frames
        assert!(boundary_criterion_min(&beta, &ds, 1).unwrap() > 0.0);
    }

    #[test]
    fn gamma_contact_is_scale_invariant() {
        let (m, beta, u) = lutz_data(16);
        let ds = dividing_set(&u, &m, 1).unwrap();
        for c in [0.5, 2.0] {
            let r = gamma_contact_check(&beta.scale(c), &ds, 1).unwrap();
            assert!(r.passed);
        }
    }

    #[test]
    fn lutz_pieces_pass() {
        let (m, beta, u) = lutz_data(24);
        let omega = BaseForm::zero(2, m.clone());
        let (plus, minus) = symplectic_pieces(&beta, &u, &omega, 1, 0.1).unwrap();
        assert!(plus.passed, "plus min {}", plus.min_value);
        assert!(minus.passed, "minus min {}", minus.min_value);
        let residual = pieces_volume_consistency(&beta, &u, &omega, 1, 0.1).unwrap();
        assert!(residual <= 1e-5, "residual {residual}");
    }

    #[test]
    fn boothby_wang_piece_is_whole_base() {
        // u = 1: the positive piece is everything and omega_+ = omega
        let m = ModelManifold::torus(2, 16);
        let omega = BaseForm::new(2, m.clone()).with_term(&[0, 1], ScalarField::one());
        let beta = BaseForm::zero(1, m.clone());
        let (plus, minus) = match symplectic_pieces(&beta, &ScalarField::one(), &omega, 1, 0.5) {
            Ok(_) => panic!("negative piece should be empty"),
            Err(Error::EmptyRegion(which)) => {
                assert_eq!(which, "negative piece");
                let u = ScalarField::one();
                let inv = ScalarField::one().div(&u);
                let top = beta.scale_field(&inv).ext_d().add(&omega).unwrap();
                let plus = sweep_filtered(&top, &m, POSITIVITY_TOL, |_| true, false).unwrap();
                (plus, ())
            }
            Err(e) => panic!("unexpected error {e}"),
        };
        assert!(plus.passed);
        let _ = minus;
    }

    #[test]
    fn empty_slice_is_an_error() {
        let (m, beta, u) = lutz_data(12);
        assert!(matches!(
            contact_slice(&beta, &u, &m, 1, 5.0),
            Err(Error::EmptyRegion(_))
        ));
    }

    #[test]
    fn lutz_slice_family_passes() {
        let (m, beta, u) = lutz_data(24);
        let outcomes = slice_contact_family(&beta, &u, &m, 1, &[-0.2, 0.0, 0.2], 1);
        for (s, r) in outcomes {
            let report = r.unwrap_or_else(|e| panic!("slice {s}: {e}"));
            assert!(report.passed, "slice {s} min {}", report.min_value);
        }
    }

    #[test]
    fn w1_is_vacuous_for_n1() {
        let (m, beta, u) = lutz_data(16);
        let slice = contact_slice(&beta, &u, &m, 1, 0.0).unwrap();
        let omega = BaseForm::zero(2, m.clone());
        let report = weak_filling_w1(&slice, &omega, 1).unwrap();
        assert!(report.passed);
        assert_eq!(report.min_value, 1.0);
    }

    #[test]
    fn w2_b_zero_recovers_omega_power() {
        let (m, beta, u) = lutz_data(16);
        let slice = contact_slice(&beta, &u, &m, 1, 0.0).unwrap();
        let omega = BaseForm::zero(2, m.clone());
        // n = 1: (b d beta + omega)^0 = 1 regardless of b
        let report = weak_filling_w2(&slice, &omega, 1, &[0.0]).unwrap();
        assert!(report.passed);
        assert_eq!(report.min_value, 1.0);
    }

    #[test]
    fn eps_scan_reports_passes() {
        let (m, beta, u) = lutz_data(16);
        let omega = BaseForm::zero(2, m.clone());
        let scan = eps_scan(&beta, &u, &omega, 1, &m);
        assert_eq!(scan.len(), 4);
        assert!(scan.iter().any(|(_, ok)| *ok));
    }
}
