//! The open-book construction of invariant contact forms on N x T^2.
//!
//! From a contact form supported by an open book on N, the pair
//! (alpha - x dphi, y) is an invariant contact candidate over N x S^1,
//! where x and y extend rho cos / rho sin of the page angle across the
//! binding as honest Cartesian coordinates.

use crate::bundle::{Bundle, BundleSpec, InvariantForm};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::form::BaseForm;
use crate::manifold::{frame_at, FactorKind, Frame, Manifold};
use crate::profiles::CutoffRho;
use crate::splitting::{
    dividing_set, gamma_contact_check, oriented_complement_frame, symplectic_pieces,
    DividingSetMesh,
};
use crate::sweep::{resolutions, PositivityReport};
use crate::tolerances::POSITIVITY_TOL;
use crate::curve::CurveFn;

/// An open book on the sphere factor of N x S^1: binding {z1 = 0}, page
/// angle arg z1, binding-parallel circles along z2.
pub struct OpenBookSpec {
    /// Product base N x S^1 with the sphere factor first.
    pub base: Manifold,
    /// Contact form on N, lifted (coefficients do not involve the circle).
    pub alpha_n: BaseForm,
    /// Ambient axes of the complex coordinate vanishing on the binding.
    pub z1: (usize, usize),
    /// Ambient axes of the complex coordinate parametrizing the binding.
    pub z2: (usize, usize),
    /// Radius of the binding neighborhood.
    pub r0: f64,
}

pub struct OpenBookReport {
    pub contact_on_n: PositivityReport,
    pub pages_symplectic: PositivityReport,
    pub binding_slices_min: f64,
}

impl OpenBookSpec {
    /// The standard book: alpha = x1 dy1 - y1 dx1 + x2 dy2 - y2 dx2
    /// restricted to the unit 3-sphere, binding {z1 = 0}.
    pub fn standard_s3(sphere_res: usize, circle_res: usize, r0: f64) -> Self {
        let base = crate::manifold::ModelManifold::product(vec![
            crate::manifold::ModelFactor::sphere3(sphere_res),
            crate::manifold::ModelFactor::circle(circle_res),
        ]);
        let alpha_n = BaseForm::new(1, base.clone())
            .with_term(&[1], ScalarField::coordinate(0))
            .with_term(&[0], ScalarField::coordinate(1).neg())
            .with_term(&[3], ScalarField::coordinate(2))
            .with_term(&[2], ScalarField::coordinate(3).neg());
        OpenBookSpec {
            base,
            alpha_n,
            z1: (0, 1),
            z2: (2, 3),
            r0,
        }
    }

    fn sphere_dim(&self) -> usize {
        self.base.factors[0].intrinsic_dim()
    }

    /// Distance from the binding.
    pub fn radius_field(&self) -> ScalarField {
        radius_field(self.z1.0, self.z1.1)
    }

    /// Direction of increasing page angle at p, embedded in ambient
    /// coordinates.
    fn page_direction(&self, p: &[f64]) -> Vec<f64> {
        let (ax, ay) = self.z1;
        let r = (p[ax] * p[ax] + p[ay] * p[ay]).sqrt();
        let mut v = vec![0.0; p.len()];
        v[ax] = -p[ay] / r;
        v[ay] = p[ax] / r;
        v
    }

    /// Validates the supported-open-book conditions at grid samples.
    pub fn validate(&self) -> Result<OpenBookReport> {
        let m = &self.base;
        let n_dim = self.sphere_dim();
        let d_alpha = self.alpha_n.ext_d();
        let radius = self.radius_field();
        // binding standoff: half the smallest grid radius
        let mut min_grid_r = f64::INFINITY;
        for flat in 0..m.grid_size() {
            min_grid_r = min_grid_r.min(radius.eval(&m.grid_point(flat)));
        }
        let page_floor = 0.5 * min_grid_r;

        // (contact on N) alpha ^ (d alpha)^((dim N - 1)/2) > 0 on oriented
        // N-frames, and (i) d alpha positive on page frames.
        let mut contact_min: Option<(f64, Vec<f64>)> = None;
        let mut pages_min: Option<(f64, Vec<f64>)> = None;
        let mut volume = self.alpha_n.clone();
        for _ in 0..(n_dim - 1) / 2 {
            volume = volume.wedge(&d_alpha)?;
        }
        let mut page_power = BaseForm::zero_form(ScalarField::one(), m.clone());
        for _ in 0..(n_dim - 1) / 2 {
            page_power = page_power.wedge(&d_alpha)?;
        }
        for flat in 0..m.grid_size() {
            let p = m.grid_point(flat);
            let fr = frame_at(m, &p)?;
            let n_frame: Vec<Vec<f64>> = fr.vectors[..n_dim].to_vec();
            let v = volume.eval_on_vectors(&p, &n_frame)?;
            if contact_min.as_ref().map(|(w, _)| v < *w).unwrap_or(true) {
                contact_min = Some((v, p.clone()));
            }
            if radius.eval(&p) >= page_floor {
                let pseudo = Frame {
                    point: p.clone(),
                    vectors: n_frame,
                    oriented: true,
                };
                let page = oriented_complement_frame(&pseudo, &self.page_direction(&p))?;
                let w = page_power.eval_on_vectors(&p, &page)?;
                if pages_min.as_ref().map(|(b, _)| w < *b).unwrap_or(true) {
                    pages_min = Some((w, p));
                }
            }
        }
        let (cmin, cargmin) = contact_min.ok_or(Error::EmptyGrid)?;
        let (pmin, pargmin) = pages_min.ok_or(Error::EmptyGrid)?;
        let contact_on_n =
            PositivityReport::new(cmin, cargmin, resolutions(m), POSITIVITY_TOL);
        let pages_symplectic =
            PositivityReport::new(pmin, pargmin, resolutions(m), POSITIVITY_TOL);

        // (ii) alpha contact on binding-parallel slices B_N x {z},
        // |z| <= r0: alpha evaluated on the slice rotation direction.
        let mut slices_min = f64::INFINITY;
        let (bx, by) = self.z1;
        let (cx, cy) = self.z2;
        let slice_samples = 24;
        for iz in 0..5 {
            let rho_z = self.r0 * iz as f64 / 4.0 * 0.99;
            let angles = if iz == 0 { 1 } else { 8 };
            for ia in 0..angles {
                let za = std::f64::consts::TAU * ia as f64 / angles as f64;
                let (zx, zy) = (rho_z * za.cos(), rho_z * za.sin());
                let w = (1.0 - rho_z * rho_z).sqrt();
                for k in 0..slice_samples {
                    let xi = std::f64::consts::TAU * (k as f64 + 0.5) / slice_samples as f64;
                    let mut p = vec![0.0; self.base.ambient_dim()];
                    p[bx] = zx;
                    p[by] = zy;
                    p[cx] = w * xi.cos();
                    p[cy] = w * xi.sin();
                    let mut tau = vec![0.0; p.len()];
                    tau[cx] = -p[cy] / w;
                    tau[cy] = p[cx] / w;
                    let v = self
                        .alpha_n
                        .eval_on_vectors(&p, std::slice::from_ref(&tau))?;
                    slices_min = slices_min.min(v);
                }
            }
        }
        if cmin <= POSITIVITY_TOL || pmin <= POSITIVITY_TOL || slices_min <= POSITIVITY_TOL {
            return Err(Error::Precondition(format!(
                "open book not supported: contact min {cmin:.3e}, pages min {pmin:.3e}, binding slices min {slices_min:.3e}"
            )));
        }
        Ok(OpenBookReport {
            contact_on_n,
            pages_symplectic,
            binding_slices_min: slices_min,
        })
    }
}

fn radius_field(ax: usize, ay: usize) -> ScalarField {
    ScalarField::from_parts(
        move |p: &[f64]| (p[ax] * p[ax] + p[ay] * p[ay]).sqrt(),
        move |i| {
            if i == ax {
                ScalarField::coordinate(ax).div(&radius_field(ax, ay))
            } else if i == ay {
                ScalarField::coordinate(ay).div(&radius_field(ax, ay))
            } else {
                ScalarField::zero()
            }
        },
    )
}

/// The global fields x = rho cos(phi), y = rho sin(phi). Near the binding
/// rho equals r, so both reduce to the Cartesian coordinates of the
/// transverse disc and extend smoothly across it.
pub fn xy_fields(ob: &OpenBookSpec, cutoff: &CutoffRho) -> (ScalarField, ScalarField) {
    let (ax, ay) = ob.z1;
    let c1 = cutoff.transition.0;
    // m(r) = rho(r)/r away from the identity zone, exactly 1 inside it
    let m_curve = CurveFn::piecewise2(
        c1,
        &CurveFn::constant(1.0),
        &cutoff.rho.div(&identity_curve()),
    );
    let r = radius_field(ax, ay);
    let m = ScalarField::compose_curve(&m_curve, &r);
    let x = m.mul(&ScalarField::coordinate(ax));
    let y = m.mul(&ScalarField::coordinate(ay));
    (x, y)
}

fn identity_curve() -> CurveFn {
    crate::curve::PiecewisePoly::new(vec![], vec![crate::curve::Poly(vec![0.0, 1.0])]).curve()
}

/// Max residual of the identity x dy - y dx = rho^2 dphi at grid samples.
pub fn xy_identity_residual(
    ob: &OpenBookSpec,
    x: &ScalarField,
    y: &ScalarField,
) -> Result<f64> {
    let m = &ob.base;
    let dx = BaseForm::zero_form(x.clone(), m.clone()).ext_d();
    let dy = BaseForm::zero_form(y.clone(), m.clone()).ext_d();
    let lhs = dy.scale_field(x).sub(&dx.scale_field(y))?;
    // rho^2 dphi = m(r)^2 (X dY - Y dX)
    let (ax, ay) = ob.z1;
    let xa = ScalarField::coordinate(ax);
    let ya = ScalarField::coordinate(ay);
    let m_sq = x.mul(x).add(&y.mul(y)).div(
        &xa.mul(&xa).add(&ya.mul(&ya)),
    );
    let rhs = BaseForm::new(1, m.clone())
        .with_term(&[ay], xa.mul(&m_sq))
        .with_term(&[ax], ya.mul(&m_sq).neg());
    crate::form::tangential_max(&lhs.sub(&rhs)?, m)
}

/// The invariant contact candidate (alpha - x dphi, y) on the trivial
/// bundle over N x S^1.
pub fn bourgeois_form(
    ob: &OpenBookSpec,
    x: &ScalarField,
    y: &ScalarField,
) -> Result<(InvariantForm, Bundle)> {
    let base = ob.base.clone();
    let circle_factor = base
        .factors
        .iter()
        .position(|f| matches!(f.kind, FactorKind::Circle))
        .ok_or_else(|| Error::Precondition("base must carry the phi circle".into()))?;
    let c_axis = base.ambient_offset(circle_factor);
    let bundle = BundleSpec::trivial(base.clone());
    let x_dphi = BaseForm::new(1, base.clone()).with_term(&[c_axis], x.clone());
    let beta = ob.alpha_n.sub(&x_dphi)?;
    Ok((
        InvariantForm::contact_candidate(beta, y.clone(), bundle.clone()),
        bundle,
    ))
}

pub struct BourgeoisSplitting {
    pub dividing: DividingSetMesh,
    pub gamma_contact: PositivityReport,
    pub piece_plus: PositivityReport,
    pub piece_minus: PositivityReport,
}

/// Dividing set {y = 0}, the contact form on it, and the symplectic
/// pieces +-d(alpha/y - (x/y) dphi) on {+-y >= eps}.
pub fn bourgeois_splitting(
    ob: &OpenBookSpec,
    x: &ScalarField,
    y: &ScalarField,
    eps: f64,
) -> Result<BourgeoisSplitting> {
    let base = ob.base.clone();
    let page_axis = base.param_offset(0) + 1; // (eta, xi1, xi2): the page angle
    let dividing = dividing_set(y, &base, page_axis)?;
    let (alpha, _) = bourgeois_form(ob, x, y)?;
    let beta = alpha.a();
    let n = base.intrinsic_dim() / 2;
    let gamma_contact = gamma_contact_check(&beta, &dividing, n)?;
    let omega = BaseForm::zero(2, base.clone());
    let (piece_plus, piece_minus) = symplectic_pieces(&beta, y, &omega, n, eps)?;
    Ok(BourgeoisSplitting {
        dividing,
        gamma_contact,
        piece_plus,
        piece_minus,
    })
}
