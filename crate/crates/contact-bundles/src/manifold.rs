//! Model base manifolds: ordered products of circles, intervals and unit
//! spheres, embedded in Euclidean ambient coordinates.
//!
//! Points live in the concatenated ambient space of the factors. Sampling
//! runs over per-factor parameter grids (midpoint rules, so sphere poles
//! and other chart degeneracies are never hit); frames are orthonormal
//! tangent bases ordered factor by factor, outward-normal-first on
//! spheres.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tolerances::FRAME_TANGENCY_TOL;
#[cfg(test)]
use crate::tolerances::SPHERE_NORM_TOL;

pub const TAU: f64 = std::f64::consts::TAU;
pub const PI: f64 = std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FactorKind {
    Circle,
    /// Closed interval [a, b].
    Interval(f64, f64),
    Sphere2,
    Sphere3,
}

#[derive(Clone, Debug)]
pub struct ModelFactor {
    pub kind: FactorKind,
    /// Samples per intrinsic dimension.
    pub resolution: usize,
}

impl ModelFactor {
    pub fn circle(resolution: usize) -> Self {
        ModelFactor {
            kind: FactorKind::Circle,
            resolution,
        }
    }

    pub fn interval(a: f64, b: f64, resolution: usize) -> Self {
        ModelFactor {
            kind: FactorKind::Interval(a, b),
            resolution,
        }
    }

    pub fn sphere2(resolution: usize) -> Self {
        ModelFactor {
            kind: FactorKind::Sphere2,
            resolution,
        }
    }

    pub fn sphere3(resolution: usize) -> Self {
        ModelFactor {
            kind: FactorKind::Sphere3,
            resolution,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            FactorKind::Circle | FactorKind::Interval(..) => 1,
            FactorKind::Sphere2 => 3,
            FactorKind::Sphere3 => 4,
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self.kind {
            FactorKind::Circle | FactorKind::Interval(..) => 1,
            FactorKind::Sphere2 => 2,
            FactorKind::Sphere3 => 3,
        }
    }
}

/// One parameter axis of the sampling chart.
#[derive(Clone, Debug)]
pub struct ParamAxis {
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
    pub samples: Vec<f64>,
}

impl ParamAxis {
    fn midpoints(lo: f64, hi: f64, n: usize, periodic: bool) -> Self {
        let step = (hi - lo) / n as f64;
        ParamAxis {
            lo,
            hi,
            periodic,
            samples: (0..n).map(|j| lo + (j as f64 + 0.5) * step).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModelManifold {
    pub factors: Vec<ModelFactor>,
    ambient_offsets: Vec<usize>,
    param_offsets: Vec<usize>,
    axes: Vec<ParamAxis>,
}

pub type Manifold = Arc<ModelManifold>;

impl ModelManifold {
    pub fn product(factors: Vec<ModelFactor>) -> Manifold {
        let mut ambient_offsets = Vec::with_capacity(factors.len());
        let mut param_offsets = Vec::with_capacity(factors.len());
        let mut axes = Vec::new();
        let (mut aoff, mut poff) = (0, 0);
        for f in &factors {
            ambient_offsets.push(aoff);
            param_offsets.push(poff);
            aoff += f.ambient_dim();
            poff += f.intrinsic_dim();
            match f.kind {
                FactorKind::Circle => {
                    axes.push(ParamAxis::midpoints(0.0, 1.0, f.resolution, true))
                }
                FactorKind::Interval(a, b) => {
                    axes.push(ParamAxis::midpoints(a, b, f.resolution, false))
                }
                FactorKind::Sphere2 => {
                    axes.push(ParamAxis::midpoints(0.0, PI, f.resolution, false));
                    axes.push(ParamAxis::midpoints(0.0, TAU, f.resolution, true));
                }
                FactorKind::Sphere3 => {
                    axes.push(ParamAxis::midpoints(0.0, PI / 2.0, f.resolution, false));
                    axes.push(ParamAxis::midpoints(0.0, TAU, f.resolution, true));
                    axes.push(ParamAxis::midpoints(0.0, TAU, f.resolution, true));
                }
            }
        }
        Arc::new(ModelManifold {
            factors,
            ambient_offsets,
            param_offsets,
            axes,
        })
    }

    pub fn torus(dims: usize, resolution: usize) -> Manifold {
        ModelManifold::product(vec![ModelFactor::circle(resolution); dims])
    }

    pub fn ambient_dim(&self) -> usize {
        self.factors.iter().map(ModelFactor::ambient_dim).sum()
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.factors.iter().map(ModelFactor::intrinsic_dim).sum()
    }

    pub fn axes(&self) -> &[ParamAxis] {
        &self.axes
    }

    pub fn ambient_offset(&self, factor: usize) -> usize {
        self.ambient_offsets[factor]
    }

    pub fn param_offset(&self, factor: usize) -> usize {
        self.param_offsets[factor]
    }

    /// Factor index owning a parameter axis.
    pub fn factor_of_axis(&self, axis: usize) -> usize {
        match self.param_offsets.partition_point(|&o| o <= axis) {
            0 => 0,
            k => k - 1,
        }
    }

    /// Maps chart parameters (one slot per parameter axis) to an ambient
    /// point.
    pub fn chart(&self, params: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient_dim()];
        for (fi, f) in self.factors.iter().enumerate() {
            let a = self.ambient_offsets[fi];
            let p = self.param_offsets[fi];
            match f.kind {
                FactorKind::Circle => out[a] = params[p].rem_euclid(1.0),
                FactorKind::Interval(..) => out[a] = params[p],
                FactorKind::Sphere2 => {
                    let (colat, az) = (params[p], params[p + 1]);
                    out[a] = colat.sin() * az.cos();
                    out[a + 1] = colat.sin() * az.sin();
                    out[a + 2] = colat.cos();
                }
                FactorKind::Sphere3 => {
                    let (eta, xi1, xi2) = (params[p], params[p + 1], params[p + 2]);
                    out[a] = eta.cos() * xi1.cos();
                    out[a + 1] = eta.cos() * xi1.sin();
                    out[a + 2] = eta.sin() * xi2.cos();
                    out[a + 3] = eta.sin() * xi2.sin();
                }
            }
        }
        out
    }

    pub fn grid_size(&self) -> usize {
        self.axes.iter().map(|ax| ax.samples.len()).product()
    }

    /// Chart parameters of the flat grid index (row-major over axes).
    pub fn grid_params(&self, mut flat: usize) -> Vec<f64> {
        let mut params = vec![0.0; self.axes.len()];
        for (k, ax) in self.axes.iter().enumerate().rev() {
            let n = ax.samples.len();
            params[k] = ax.samples[flat % n];
            flat /= n;
        }
        params
    }

    pub fn grid_point(&self, flat: usize) -> Vec<f64> {
        self.chart(&self.grid_params(flat))
    }

    /// Checks sphere constraints at a point.
    pub fn contains(&self, p: &[f64], tol: f64) -> Result<()> {
        if p.len() != self.ambient_dim() {
            return Err(Error::OffManifold {
                detail: format!(
                    "ambient dimension {} expected, point has {}",
                    self.ambient_dim(),
                    p.len()
                ),
            });
        }
        for (fi, f) in self.factors.iter().enumerate() {
            let a = self.ambient_offsets[fi];
            let d = f.ambient_dim();
            match f.kind {
                FactorKind::Sphere2 | FactorKind::Sphere3 => {
                    let norm2: f64 = p[a..a + d].iter().map(|x| x * x).sum();
                    if (norm2 - 1.0).abs() > tol {
                        return Err(Error::OffManifold {
                            detail: format!(
                                "factor {fi}: |x|^2 = {norm2} off unit sphere by {:.3e}",
                                (norm2 - 1.0).abs()
                            ),
                        });
                    }
                }
                FactorKind::Interval(lo, hi) => {
                    let x = p[a];
                    if x < lo - tol || x > hi + tol {
                        return Err(Error::OffManifold {
                            detail: format!("factor {fi}: {x} outside [{lo}, {hi}]"),
                        });
                    }
                }
                FactorKind::Circle => {}
            }
        }
        Ok(())
    }
}

/// An oriented orthonormal tangent frame at a point.
#[derive(Clone, Debug)]
pub struct Frame {
    pub point: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub oriented: bool,
}

impl Frame {
    /// Copy with one vector negated; flips the orientation.
    pub fn with_reversed_vector(&self, k: usize) -> Frame {
        let mut vectors = self.vectors.clone();
        for x in &mut vectors[k] {
            *x = -*x;
        }
        Frame {
            point: self.point.clone(),
            vectors,
            oriented: !self.oriented,
        }
    }
}

/// Oriented orthonormal tangent frame at `p`, factor frames concatenated
/// in factor order. Sphere factors get outward-normal-first orientation.
pub fn frame_at(m: &ModelManifold, p: &[f64]) -> Result<Frame> {
    m.contains(p, FRAME_TANGENCY_TOL)?;
    let ambient = m.ambient_dim();
    let mut vectors = Vec::with_capacity(m.intrinsic_dim());
    for (fi, f) in m.factors.iter().enumerate() {
        let a = m.ambient_offset(fi);
        match f.kind {
            FactorKind::Circle | FactorKind::Interval(..) => {
                let mut v = vec![0.0; ambient];
                v[a] = 1.0;
                vectors.push(v);
            }
            FactorKind::Sphere2 => {
                let x = [p[a], p[a + 1], p[a + 2]];
                let (e1, e2) = sphere2_frame(&x);
                vectors.push(embed(&e1, a, ambient));
                vectors.push(embed(&e2, a, ambient));
            }
            FactorKind::Sphere3 => {
                let x = [p[a], p[a + 1], p[a + 2], p[a + 3]];
                let es = sphere3_frame(&x);
                for e in es {
                    vectors.push(embed(&e, a, ambient));
                }
            }
        }
    }
    Ok(Frame {
        point: p.to_vec(),
        vectors,
        oriented: true,
    })
}

fn embed(v: &[f64], offset: usize, ambient: usize) -> Vec<f64> {
    let mut out = vec![0.0; ambient];
    out[offset..offset + v.len()].copy_from_slice(v);
    out
}

/// Two orthonormal tangent vectors at x in S^2 with det[x, e1, e2] > 0.
fn sphere2_frame(x: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    // Seed with the ambient axis least aligned with x, then complete by a
    // cross product; det[x, e1, x cross e1] = |x cross e1|^2 > 0.
    let k = (0..3)
        .min_by(|&i, &j| x[i].abs().partial_cmp(&x[j].abs()).unwrap())
        .unwrap();
    let mut e1 = [0.0; 3];
    e1[k] = 1.0;
    let dot = e1[0] * x[0] + e1[1] * x[1] + e1[2] * x[2];
    for i in 0..3 {
        e1[i] -= dot * x[i];
    }
    let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    for v in &mut e1 {
        *v /= n;
    }
    let e2 = [
        x[1] * e1[2] - x[2] * e1[1],
        x[2] * e1[0] - x[0] * e1[2],
        x[0] * e1[1] - x[1] * e1[0],
    ];
    (e1, e2)
}

/// Three orthonormal tangent vectors at x in S^3 with det[x, e1, e2, e3] > 0.
fn sphere3_frame(x: &[f64; 4]) -> Vec<[f64; 4]> {
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| {
        x[i].abs()
            .partial_cmp(&x[j].abs())
            .unwrap()
            .then(i.cmp(&j))
    });
    let mut es: Vec<[f64; 4]> = Vec::with_capacity(3);
    for &k in order.iter().take(3) {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        let dx: f64 = (0..4).map(|i| v[i] * x[i]).sum();
        for i in 0..4 {
            v[i] -= dx * x[i];
        }
        for prev in &es {
            let d: f64 = (0..4).map(|i| v[i] * prev[i]).sum();
            for i in 0..4 {
                v[i] -= d * prev[i];
            }
        }
        let n: f64 = (0..4).map(|i| v[i] * v[i]).sum::<f64>().sqrt();
        for vi in &mut v {
            *vi /= n;
        }
        es.push(v);
    }
    let rows = [*x, es[0], es[1], es[2]];
    if det4(&rows) < 0.0 {
        es.swap(1, 2);
    }
    es
}

fn det4(rows: &[[f64; 4]; 4]) -> f64 {
    let mut m = *rows;
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_frame_is_coordinate_frame() {
        let t2 = ModelManifold::torus(2, 8);
        let fr = frame_at(&t2, &[0.25, 0.5]).unwrap();
        assert_eq!(fr.vectors, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(fr.oriented);
    }

    #[test]
    fn sphere2_frame_orientation_at_pole() {
        let s2 = ModelManifold::product(vec![ModelFactor::sphere2(8)]);
        let fr = frame_at(&s2, &[0.0, 0.0, 1.0]).unwrap();
        let (e1, e2) = (&fr.vectors[0], &fr.vectors[1]);
        // det[n, e1, e2] > 0 with n = (0,0,1)
        let det = e1[0] * e2[1] - e1[1] * e2[0];
        assert!(det > 0.0);
        for e in [e1, e2] {
            assert!(e[2].abs() < FRAME_TANGENCY_TOL);
            let n: f64 = e.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn product_frame_has_orthonormal_tangent_vectors() {
        let m = ModelManifold::product(vec![ModelFactor::sphere2(6), ModelFactor::circle(6)]);
        for flat in [0, 7, 23] {
            let p = m.grid_point(flat);
            let fr = frame_at(&m, &p).unwrap();
            assert_eq!(fr.vectors.len(), 3);
            for (i, v) in fr.vectors.iter().enumerate() {
                let sphere_dot: f64 = (0..3).map(|k| v[k] * p[k]).sum();
                assert!(sphere_dot.abs() < FRAME_TANGENCY_TOL);
                for (j, w) in fr.vectors.iter().enumerate() {
                    let d: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((d - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sphere_samples_are_unit_norm() {
        let m = ModelManifold::product(vec![ModelFactor::sphere3(5)]);
        for flat in 0..m.grid_size() {
            let p = m.grid_point(flat);
            let n2: f64 = p.iter().map(|x| x * x).sum();
            assert!((n2 - 1.0).abs() < SPHERE_NORM_TOL);
        }
    }

    #[test]
    fn sphere3_frame_is_positively_oriented() {
        let m = ModelManifold::product(vec![ModelFactor::sphere3(4)]);
        for flat in 0..m.grid_size() {
            let p = m.grid_point(flat);
            let fr = frame_at(&m, &p).unwrap();
            let rows = [
                [p[0], p[1], p[2], p[3]],
                [
                    fr.vectors[0][0],
                    fr.vectors[0][1],
                    fr.vectors[0][2],
                    fr.vectors[0][3],
                ],
                [
                    fr.vectors[1][0],
                    fr.vectors[1][1],
                    fr.vectors[1][2],
                    fr.vectors[1][3],
                ],
                [
                    fr.vectors[2][0],
                    fr.vectors[2][1],
                    fr.vectors[2][2],
                    fr.vectors[2][3],
                ],
            ];
            assert!(det4(&rows) > 0.0);
        }
    }

    #[test]
    fn off_manifold_point_is_rejected() {
        let s2 = ModelManifold::product(vec![ModelFactor::sphere2(4)]);
        assert!(frame_at(&s2, &[0.5, 0.5, 0.5]).is_err());
    }
}
