//! Differential forms on model manifolds, stored as antisymmetric ambient
//! coefficients over strictly increasing multi-indices.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::manifold::{frame_at, Frame, Manifold};

static NEXT_FORM_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_FORM_ID.fetch_add(1, Ordering::Relaxed)
}

pub type MultiIndex = Vec<usize>;

#[derive(Clone)]
pub struct BaseForm {
    pub degree: usize,
    pub coeffs: BTreeMap<MultiIndex, ScalarField>,
    pub manifold: Manifold,
    id: u64,
    neg_of: Option<u64>,
}

impl BaseForm {
    /// Degrees beyond the ambient dimension are allowed and hold no
    /// coefficients; they arise as wedge overflow and are identically zero.
    pub fn new(degree: usize, manifold: Manifold) -> Self {
        BaseForm {
            degree,
            coeffs: BTreeMap::new(),
            manifold,
            id: fresh_id(),
            neg_of: None,
        }
    }

    pub fn zero(degree: usize, manifold: Manifold) -> Self {
        BaseForm::new(degree, manifold)
    }

    /// A function as a form of degree zero.
    pub fn zero_form(f: ScalarField, manifold: Manifold) -> Self {
        let mut form = BaseForm::new(0, manifold);
        form.coeffs.insert(vec![], f);
        form
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn neg_of(&self) -> Option<u64> {
        self.neg_of
    }

    /// Adds `field * dx^indices`; indices need not be sorted.
    pub fn with_term(mut self, indices: &[usize], field: ScalarField) -> Self {
        let (sorted, sign) = sort_index(indices).expect("repeated index in term");
        assert_eq!(sorted.len(), self.degree, "term degree mismatch");
        let signed = if sign < 0 { field.neg() } else { field };
        self.insert_term(sorted, signed);
        self.id = fresh_id();
        self.neg_of = None;
        self
    }

    fn insert_term(&mut self, idx: MultiIndex, field: ScalarField) {
        match self.coeffs.remove(&idx) {
            Some(existing) => {
                self.coeffs.insert(idx, existing.add(&field));
            }
            None => {
                self.coeffs.insert(idx, field);
            }
        }
    }

    pub fn same_manifold(&self, other: &BaseForm) -> bool {
        Arc::ptr_eq(&self.manifold, &other.manifold)
    }

    pub fn add(&self, other: &BaseForm) -> Result<BaseForm> {
        if !self.same_manifold(other) {
            return Err(Error::ManifoldMismatch);
        }
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut out = BaseForm::new(self.degree, self.manifold.clone());
        for (idx, f) in &self.coeffs {
            out.insert_term(idx.clone(), f.clone());
        }
        for (idx, f) in &other.coeffs {
            out.insert_term(idx.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BaseForm) -> Result<BaseForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BaseForm {
        let mut out = self.scale(-1.0);
        out.neg_of = Some(self.id);
        out
    }

    pub fn scale(&self, c: f64) -> BaseForm {
        let mut out = BaseForm::new(self.degree, self.manifold.clone());
        for (idx, f) in &self.coeffs {
            out.coeffs.insert(idx.clone(), f.scale(c));
        }
        out
    }

    pub fn scale_field(&self, s: &ScalarField) -> BaseForm {
        let mut out = BaseForm::new(self.degree, self.manifold.clone());
        for (idx, f) in &self.coeffs {
            out.coeffs.insert(idx.clone(), f.mul(s));
        }
        out
    }

    /// Wedge product. Degree overflow beyond the ambient dimension yields
    /// the zero form.
    pub fn wedge(&self, other: &BaseForm) -> Result<BaseForm> {
        if !self.same_manifold(other) {
            return Err(Error::ManifoldMismatch);
        }
        let degree = self.degree + other.degree;
        if degree > self.manifold.ambient_dim() {
            return Ok(BaseForm::new(degree, self.manifold.clone()));
        }
        let mut out = BaseForm::new(degree, self.manifold.clone());
        for (ia, fa) in &self.coeffs {
            for (ib, fb) in &other.coeffs {
                if let Some((merged, sign)) = merge_indices(ia, ib) {
                    let term = fa.mul(fb);
                    let term = if sign < 0 { term.neg() } else { term };
                    out.insert_term(merged, term);
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative via ambient partials of the coefficients.
    pub fn ext_d(&self) -> BaseForm {
        let ambient = self.manifold.ambient_dim();
        if self.degree + 1 > ambient {
            return BaseForm::new(self.degree + 1, self.manifold.clone());
        }
        let mut out = BaseForm::new(self.degree + 1, self.manifold.clone());
        for (idx, f) in &self.coeffs {
            for i in 0..ambient {
                if idx.contains(&i) {
                    continue;
                }
                let mut with_i = vec![i];
                with_i.extend_from_slice(idx);
                let (merged, sign) = sort_index(&with_i).expect("index collision");
                let part = f.partial(i);
                let part = if sign < 0 { part.neg() } else { part };
                out.insert_term(merged, part);
            }
        }
        out
    }

    /// Fully antisymmetric multilinear evaluation on frame vectors.
    pub fn eval_on_vectors(&self, p: &[f64], vectors: &[Vec<f64>]) -> Result<f64> {
        if vectors.len() != self.degree {
            return Err(Error::ArityMismatch {
                degree: self.degree,
                vectors: vectors.len(),
            });
        }
        let mut total = 0.0;
        for (idx, f) in &self.coeffs {
            let c = f.eval(p);
            if c == 0.0 {
                continue;
            }
            total += c * index_det(idx, vectors);
        }
        Ok(total)
    }

    pub fn eval_on_frame(&self, fr: &Frame) -> Result<f64> {
        self.eval_on_vectors(&fr.point, &fr.vectors)
    }

    /// Max |coefficient| over the grid. Meaningful as an identity check
    /// only when the ambient and intrinsic dimensions agree.
    pub fn max_abs_coeff_on_grid(&self) -> f64 {
        let m = &self.manifold;
        (0..m.grid_size())
            .into_par_iter()
            .map(|flat| {
                let p = m.grid_point(flat);
                self.coeffs
                    .values()
                    .map(|f| f.eval(&p).abs())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Sorts a multi-index, returning the permutation sign; `None` on repeats.
pub fn sort_index(idx: &[usize]) -> Option<(MultiIndex, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    // insertion sort, counting swaps
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// Merges two strictly increasing multi-indices, returning the sign of
/// the interleaving permutation; `None` when they intersect.
pub fn merge_indices(a: &[usize], b: &[usize]) -> Option<(MultiIndex, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut sign = 1;
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, sign))
}

fn index_det(idx: &[usize], vectors: &[Vec<f64>]) -> f64 {
    let k = idx.len();
    match k {
        0 => 1.0,
        1 => vectors[0][idx[0]],
        2 => {
            vectors[0][idx[0]] * vectors[1][idx[1]] - vectors[1][idx[0]] * vectors[0][idx[1]]
        }
        3 => {
            let m = |r: usize, c: usize| vectors[c][idx[r]];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => {
            let mut m = vec![0.0; k * k];
            for r in 0..k {
                for c in 0..k {
                    m[r * k + c] = vectors[c][idx[r]];
                }
            }
            lu_det(&mut m, k)
        }
    }
}

fn lu_det(m: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&i, &j| {
                m[i * k + col]
                    .abs()
                    .partial_cmp(&m[j * k + col].abs())
                    .unwrap()
            })
            .unwrap();
        if m[piv * k + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..k {
                m.swap(piv * k + c, col * k + c);
            }
            det = -det;
        }
        det *= m[col * k + col];
        for row in col + 1..k {
            let f = m[row * k + col] / m[col * k + col];
            for c in col..k {
                m[row * k + c] -= f * m[col * k + c];
            }
        }
    }
    det
}

/// All strictly increasing `k`-subsets of `0..n`.
pub fn increasing_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return vec![];
    }
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Max over grid samples of |form| evaluated on every increasing tuple of
/// oriented-frame vectors. The restriction of a form whose degree exceeds
/// the intrinsic dimension vanishes by arity, giving zero.
pub fn tangential_max(form: &BaseForm, m: &Manifold) -> Result<f64> {
    let intrinsic = m.intrinsic_dim();
    if form.degree > intrinsic {
        return Ok(0.0);
    }
    let subsets = increasing_subsets(intrinsic, form.degree);
    let size = m.grid_size();
    if size == 0 {
        return Err(Error::EmptyGrid);
    }
    let worst = (0..size)
        .into_par_iter()
        .map(|flat| {
            let p = m.grid_point(flat);
            let fr = frame_at(m, &p).expect("grid point off manifold");
            let mut local: f64 = 0.0;
            for subset in &subsets {
                let picked: Vec<Vec<f64>> =
                    subset.iter().map(|&k| fr.vectors[k].clone()).collect();
                let v = form
                    .eval_on_vectors(&p, &picked)
                    .expect("arity checked above");
                local = local.max(v.abs());
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::ModelManifold;

    fn t2() -> Manifold {
        ModelManifold::torus(2, 16)
    }

    fn dtheta(m: &Manifold, i: usize) -> BaseForm {
        BaseForm::new(1, m.clone()).with_term(&[i], ScalarField::one())
    }

    #[test]
    fn wedge_of_coordinate_forms() {
        let m = t2();
        let w = dtheta(&m, 0).wedge(&dtheta(&m, 1)).unwrap();
        let fr = frame_at(&m, &[0.1, 0.7]).unwrap();
        assert_eq!(w.eval_on_frame(&fr).unwrap(), 1.0);
        let w_rev = dtheta(&m, 1).wedge(&dtheta(&m, 0)).unwrap();
        assert_eq!(w_rev.eval_on_frame(&fr).unwrap(), -1.0);
    }

    #[test]
    fn one_form_wedge_self_vanishes() {
        let m = t2();
        let theta2 = ScalarField::coordinate(1);
        let a = BaseForm::new(1, m.clone())
            .with_term(&[0], theta2.scale(std::f64::consts::TAU).cos())
            .with_term(&[1], ScalarField::constant(0.3));
        let aa = a.wedge(&a).unwrap();
        assert!(tangential_max(&aa, &m).unwrap() < 1e-14);
    }

    #[test]
    fn wedge_degree_overflow_is_zero_not_error() {
        let m = t2();
        let vol = dtheta(&m, 0).wedge(&dtheta(&m, 1)).unwrap();
        let over = vol.wedge(&dtheta(&m, 0)).unwrap();
        assert!(over.is_structurally_zero());
    }

    #[test]
    fn ext_d_of_sine() {
        let m = t2();
        let tau = std::f64::consts::TAU;
        let f = ScalarField::coordinate(0).scale(tau).sin();
        let df = BaseForm::zero_form(f, m.clone()).ext_d();
        let expected = BaseForm::new(1, m.clone())
            .with_term(&[0], ScalarField::coordinate(0).scale(tau).cos().scale(tau));
        let diff = df.sub(&expected).unwrap();
        assert!(tangential_max(&diff, &m).unwrap() < 1e-9);
    }

    #[test]
    fn ext_d_of_fd_sine_within_tolerance() {
        let m = t2();
        let tau = std::f64::consts::TAU;
        let f = ScalarField::from_fn(move |p| (tau * p[0]).sin());
        let df = BaseForm::zero_form(f, m.clone()).ext_d();
        let expected = BaseForm::new(1, m.clone())
            .with_term(&[0], ScalarField::coordinate(0).scale(tau).cos().scale(tau));
        let diff = df.sub(&expected).unwrap();
        assert!(tangential_max(&diff, &m).unwrap() <= 1e-6);
    }

    #[test]
    fn constant_coefficient_d() {
        // d(x dy) = dx wedge dy on the sphere ambient
        let m = ModelManifold::product(vec![crate::manifold::ModelFactor::sphere2(10)]);
        let x = ScalarField::coordinate(0);
        let xdy = BaseForm::new(1, m.clone()).with_term(&[1], x);
        let d = xdy.ext_d();
        let expected = BaseForm::new(2, m.clone()).with_term(&[0, 1], ScalarField::one());
        let diff = d.sub(&expected).unwrap();
        assert!(tangential_max(&diff, &m).unwrap() < 1e-12);
    }

    #[test]
    fn d_squared_vanishes_for_periodic_polynomial() {
        let m = t2();
        let tau = std::f64::consts::TAU;
        let f = ScalarField::coordinate(0)
            .scale(tau)
            .sin()
            .mul(&ScalarField::coordinate(1).scale(tau).cos());
        let ddf = BaseForm::zero_form(f, m.clone()).ext_d().ext_d();
        assert!(tangential_max(&ddf, &m).unwrap() <= 1e-6);
    }

    #[test]
    fn area_form_on_oriented_sphere_frame() {
        let m = ModelManifold::product(vec![crate::manifold::ModelFactor::sphere2(10)]);
        // x dy^dz + y dz^dx + z dx^dy
        let area = BaseForm::new(2, m.clone())
            .with_term(&[1, 2], ScalarField::coordinate(0))
            .with_term(&[2, 0], ScalarField::coordinate(1))
            .with_term(&[0, 1], ScalarField::coordinate(2));
        let p = [0.0, 0.0, 1.0];
        let value = area
            .eval_on_vectors(&p, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
            .unwrap();
        assert!((value - 1.0).abs() < 1e-15);
        // and on every oriented grid frame the area form is +1
        for flat in 0..m.grid_size() {
            let q = m.grid_point(flat);
            let fr = frame_at(&m, &q).unwrap();
            assert!((area.eval_on_frame(&fr).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn reversing_one_frame_vector_flips_top_forms() {
        let m = ModelManifold::product(vec![
            crate::manifold::ModelFactor::circle(6),
            crate::manifold::ModelFactor::sphere2(6),
        ]);
        let vol = BaseForm::new(3, m.clone())
            .with_term(&[0, 2, 3], ScalarField::coordinate(3).add(&ScalarField::constant(2.0)));
        for flat in [0, 11, 29] {
            let p = m.grid_point(flat);
            let fr = frame_at(&m, &p).unwrap();
            let v = vol.eval_on_frame(&fr).unwrap();
            for k in 0..fr.vectors.len() {
                let rev = fr.with_reversed_vector(k);
                assert!(!rev.oriented);
                assert_eq!(vol.eval_on_frame(&rev).unwrap(), -v);
            }
        }
    }

    #[test]
    fn swapping_frame_vectors_negates() {
        let m = t2();
        let w = dtheta(&m, 0).wedge(&dtheta(&m, 1)).unwrap();
        let p = [0.3, 0.4];
        let v = w
            .eval_on_vectors(&p, &[vec![1.0, 0.0], vec![0.0, 1.0]])
            .unwrap();
        let v_swapped = w
            .eval_on_vectors(&p, &[vec![0.0, 1.0], vec![1.0, 0.0]])
            .unwrap();
        assert_eq!(v, -v_swapped);
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let m = t2();
        let w = dtheta(&m, 0);
        assert!(matches!(
            w.eval_on_vectors(&[0.0, 0.0], &[]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn merge_sign_matches_sort_sign() {
        let a = vec![1, 4];
        let b = vec![0, 2];
        let (merged, sign) = merge_indices(&a, &b).unwrap();
        let mut cat = a.clone();
        cat.extend(&b);
        let (sorted, sort_sign) = sort_index(&cat).unwrap();
        assert_eq!(merged, sorted);
        assert_eq!(sign, sort_sign);
        assert!(merge_indices(&[0, 1], &[1]).is_none());
    }

    #[test]
    fn increasing_subsets_counts() {
        assert_eq!(increasing_subsets(4, 2).len(), 6);
        assert_eq!(increasing_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(increasing_subsets(2, 3).is_empty());
    }
}
