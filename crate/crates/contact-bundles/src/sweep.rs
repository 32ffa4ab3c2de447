//! Positivity sweeps: evaluate a top-degree form on oriented frames over
//! the whole sample grid and report the minimum.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::form::BaseForm;
use crate::manifold::{frame_at, Manifold};

/// Result of a top-form positivity sweep.
#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub min_value: f64,
    pub argmin: Vec<f64>,
    pub resolution: Vec<usize>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

impl PositivityReport {
    pub fn new(min_value: f64, argmin: Vec<f64>, resolution: Vec<usize>, tol: f64) -> Self {
        PositivityReport {
            min_value,
            argmin,
            resolution,
            tolerance: tol,
            passed: min_value > tol,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Min-merge keeping pass semantics (all must pass).
    pub fn merge(self, other: PositivityReport) -> PositivityReport {
        if other.min_value < self.min_value {
            PositivityReport {
                passed: self.passed && other.passed,
                ..other
            }
        } else {
            PositivityReport {
                passed: self.passed && other.passed,
                ..self
            }
        }
    }
}

pub fn resolutions(m: &Manifold) -> Vec<usize> {
    m.factors.iter().map(|f| f.resolution).collect()
}

/// Evaluates `a` on the oriented frame at every grid sample of `m`.
pub fn positivity_sweep(a: &BaseForm, m: &Manifold, tol: f64) -> Result<PositivityReport> {
    sweep_filtered(a, m, tol, |_| true, false)
}

/// Sweep over the samples selected by `keep`; `reverse_orientation`
/// negates one frame vector before evaluating (for pieces carrying the
/// opposite orientation).
pub fn sweep_filtered(
    a: &BaseForm,
    m: &Manifold,
    tol: f64,
    keep: impl Fn(&[f64]) -> bool + Sync,
    reverse_orientation: bool,
) -> Result<PositivityReport> {
    if a.degree != m.intrinsic_dim() {
        return Err(Error::ArityMismatch {
            degree: a.degree,
            vectors: m.intrinsic_dim(),
        });
    }
    let size = m.grid_size();
    if size == 0 {
        return Err(Error::EmptyGrid);
    }
    let best = (0..size)
        .into_par_iter()
        .filter_map(|flat| {
            let p = m.grid_point(flat);
            if !keep(&p) {
                return None;
            }
            let mut fr = frame_at(m, &p).expect("grid point off manifold");
            if reverse_orientation {
                fr = fr.with_reversed_vector(0);
            }
            let v = a.eval_on_frame(&fr).expect("degree checked");
            Some((v, flat))
        })
        .min_by(|a, b| a.partial_cmp(b).expect("non-finite sweep value"))
        .ok_or_else(|| Error::EmptyRegion("no samples selected".into()))?;
    Ok(PositivityReport::new(
        best.0,
        m.grid_point(best.1),
        resolutions(m),
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;
    use crate::manifold::ModelManifold;

    #[test]
    fn constant_area_form_passes() {
        let m = ModelManifold::torus(2, 24);
        let tau = std::f64::consts::TAU;
        let w = BaseForm::new(2, m.clone()).with_term(&[0, 1], ScalarField::constant(tau));
        let report = positivity_sweep(&w, &m, 1e-9).unwrap();
        assert!(report.passed);
        assert!((report.min_value - tau).abs() < 1e-12);
    }

    #[test]
    fn sign_changing_form_fails() {
        let m = ModelManifold::torus(2, 24);
        let tau = std::f64::consts::TAU;
        let w = BaseForm::new(2, m.clone())
            .with_term(&[0, 1], ScalarField::coordinate(0).scale(tau).sin());
        let report = positivity_sweep(&w, &m, 1e-9).unwrap();
        assert!(!report.passed);
        assert!(report.min_value < 0.0);
    }

    #[test]
    fn degree_mismatch_rejected() {
        let m = ModelManifold::torus(2, 8);
        let w = BaseForm::new(1, m.clone()).with_term(&[0], ScalarField::one());
        assert!(positivity_sweep(&w, &m, 1e-9).is_err());
    }

    #[test]
    fn empty_filter_is_an_error() {
        let m = ModelManifold::torus(2, 8);
        let w = BaseForm::new(2, m.clone()).with_term(&[0, 1], ScalarField::one());
        assert!(matches!(
            sweep_filtered(&w, &m, 1e-9, |_| false, false),
            Err(Error::EmptyRegion(_))
        ));
    }
}
