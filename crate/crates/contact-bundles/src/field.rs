//! Scalar coefficient fields on ambient coordinates.
//!
//! A `ScalarField` is a real-valued function of an ambient point together
//! with a differentiation scheme: either an analytic gradient (itself a
//! family of `ScalarField`s, so higher derivatives stay analytic) or
//! central finite differences with a fixed step.

use std::sync::Arc;

use crate::tolerances::FD_STEP;

type EvalFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(usize) -> ScalarField + Send + Sync;

#[derive(Clone)]
pub struct ScalarField {
    inner: Arc<Repr>,
}

struct Repr {
    eval: Box<EvalFn>,
    grad: Option<Box<GradFn>>,
    fd_step: f64,
}

impl ScalarField {
    pub fn from_fn(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField {
            inner: Arc::new(Repr {
                eval: Box::new(f),
                grad: None,
                fd_step: FD_STEP,
            }),
        }
    }

    pub fn from_parts(
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(usize) -> ScalarField + Send + Sync + 'static,
    ) -> Self {
        ScalarField {
            inner: Arc::new(Repr {
                eval: Box::new(f),
                grad: Some(Box::new(grad)),
                fd_step: FD_STEP,
            }),
        }
    }

    pub fn with_fd_step(self, step: f64) -> Self {
        let grad = if self.inner.grad.is_some() {
            let base = self.clone();
            Some(Box::new(move |i| base.partial(i)) as Box<GradFn>)
        } else {
            None
        };
        ScalarField {
            inner: Arc::new(Repr {
                eval: {
                    let base = self.clone();
                    Box::new(move |p| base.eval(p))
                },
                grad,
                fd_step: step,
            }),
        }
    }

    pub fn constant(c: f64) -> Self {
        ScalarField::from_parts(move |_| c, |_| ScalarField::zero())
    }

    pub fn zero() -> Self {
        ScalarField::from_parts(|_| 0.0, |_| ScalarField::zero())
    }

    pub fn one() -> Self {
        ScalarField::constant(1.0)
    }

    /// The ambient coordinate x_i.
    pub fn coordinate(i: usize) -> Self {
        ScalarField::from_parts(
            move |p: &[f64]| p[i],
            move |j| {
                if j == i {
                    ScalarField::one()
                } else {
                    ScalarField::zero()
                }
            },
        )
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        (self.inner.eval)(p)
    }

    pub fn has_analytic_grad(&self) -> bool {
        self.inner.grad.is_some()
    }

    pub fn fd_step(&self) -> f64 {
        self.inner.fd_step
    }

    /// The partial derivative with respect to ambient coordinate `i`,
    /// as a field. Analytic when available, central differences otherwise.
    pub fn partial(&self, i: usize) -> ScalarField {
        match &self.inner.grad {
            Some(g) => g(i),
            None => {
                let base = self.clone();
                let h = self.inner.fd_step;
                ScalarField {
                    inner: Arc::new(Repr {
                        eval: Box::new(move |p: &[f64]| {
                            let mut q = p.to_vec();
                            q[i] = p[i] + h;
                            let hi = base.eval(&q);
                            q[i] = p[i] - h;
                            let lo = base.eval(&q);
                            (hi - lo) / (2.0 * h)
                        }),
                        grad: None,
                        fd_step: h,
                    }),
                }
            }
        }
    }

    pub fn add(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        let (ga, gb) = (self.clone(), other.clone());
        ScalarField::from_parts(
            move |p| a.eval(p) + b.eval(p),
            move |i| ga.partial(i).add(&gb.partial(i)),
        )
    }

    pub fn sub(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        let (ga, gb) = (self.clone(), other.clone());
        ScalarField::from_parts(
            move |p| a.eval(p) - b.eval(p),
            move |i| ga.partial(i).sub(&gb.partial(i)),
        )
    }

    pub fn mul(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        let (ga, gb) = (self.clone(), other.clone());
        ScalarField::from_parts(
            move |p| a.eval(p) * b.eval(p),
            move |i| {
                ga.partial(i)
                    .mul(&gb)
                    .add(&ga.mul(&gb.partial(i)))
            },
        )
    }

    pub fn div(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        let (ga, gb) = (self.clone(), other.clone());
        ScalarField::from_parts(
            move |p| a.eval(p) / b.eval(p),
            move |i| {
                // (a/b)' = (a' b - a b') / b^2
                let num = ga.partial(i).mul(&gb).sub(&ga.mul(&gb.partial(i)));
                num.div(&gb.mul(&gb))
            },
        )
    }

    pub fn neg(&self) -> ScalarField {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> ScalarField {
        let a = self.clone();
        let g = self.clone();
        ScalarField::from_parts(move |p| c * a.eval(p), move |i| g.partial(i).scale(c))
    }

    pub fn sin(&self) -> ScalarField {
        let a = self.clone();
        let g = self.clone();
        ScalarField::from_parts(move |p| a.eval(p).sin(), move |i| {
            g.cos().mul(&g.partial(i))
        })
    }

    pub fn cos(&self) -> ScalarField {
        let a = self.clone();
        let g = self.clone();
        ScalarField::from_parts(move |p| a.eval(p).cos(), move |i| {
            g.sin().neg().mul(&g.partial(i))
        })
    }

    pub fn exp(&self) -> ScalarField {
        let a = self.clone();
        let g = self.clone();
        ScalarField::from_parts(move |p| a.eval(p).exp(), move |i| {
            g.exp().mul(&g.partial(i))
        })
    }

    pub fn powi(&self, k: i32) -> ScalarField {
        let a = self.clone();
        let g = self.clone();
        ScalarField::from_parts(move |p| a.eval(p).powi(k), move |i| {
            g.powi(k - 1).scale(k as f64).mul(&g.partial(i))
        })
    }

    /// Composition h(p) = curve(inner(p)) with the chain rule.
    pub fn compose_curve(curve: &crate::curve::CurveFn, inner: &ScalarField) -> ScalarField {
        let (c, f) = (curve.clone(), inner.clone());
        let (dc, df) = (curve.clone(), inner.clone());
        ScalarField::from_parts(
            move |p| c.eval(f.eval(p)),
            move |i| ScalarField::compose_curve(&dc.deriv(), &df).mul(&df.partial(i)),
        )
    }

    /// Region-dispatched field. All branches must agree (with their first
    /// derivatives) wherever the selector can flip between them at the
    /// resolution of the differentiation scheme.
    pub fn piecewise(
        selector: Arc<dyn Fn(&[f64]) -> usize + Send + Sync>,
        branches: Vec<ScalarField>,
    ) -> ScalarField {
        let sel = selector.clone();
        let eval_branches = branches.clone();
        let grad_sel = selector;
        ScalarField::from_parts(
            move |p| eval_branches[sel(p)].eval(p),
            move |i| {
                ScalarField::piecewise(
                    grad_sel.clone(),
                    branches.iter().map(|b| b.partial(i)).collect(),
                )
            },
        )
    }

    /// Composite Simpson integral of `integrand` in coordinate `axis`
    /// from `s0` to the point's own coordinate. The partial along `axis`
    /// is the integrand itself; cross partials integrate the integrand's
    /// partials.
    pub fn integral_along_axis(
        integrand: &ScalarField,
        axis: usize,
        s0: f64,
        panels: usize,
    ) -> ScalarField {
        let f = integrand.clone();
        let g = integrand.clone();
        ScalarField::from_parts(
            move |p: &[f64]| {
                let s1 = p[axis];
                let n = panels.max(1) * 2; // even subdivision for Simpson
                let h = (s1 - s0) / n as f64;
                if h == 0.0 {
                    return 0.0;
                }
                let mut q = p.to_vec();
                let mut acc = 0.0;
                for k in 0..=n {
                    q[axis] = s0 + k as f64 * h;
                    let w = if k == 0 || k == n {
                        1.0
                    } else if k % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    acc += w * f.eval(&q);
                }
                acc * h / 3.0
            },
            move |i| {
                if i == axis {
                    g.clone()
                } else {
                    ScalarField::integral_along_axis(&g.partial(i), axis, s0, panels)
                }
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_and_arithmetic() {
        let x = ScalarField::coordinate(0);
        let y = ScalarField::coordinate(1);
        let f = x.mul(&y).add(&x.powi(2));
        assert_eq!(f.eval(&[2.0, 3.0]), 10.0);
        assert_eq!(f.partial(0).eval(&[2.0, 3.0]), 7.0);
        assert_eq!(f.partial(1).eval(&[2.0, 3.0]), 2.0);
    }

    #[test]
    fn analytic_second_derivatives() {
        let x = ScalarField::coordinate(0);
        let f = x.scale(2.0 * std::f64::consts::PI).sin();
        let fxx = f.partial(0).partial(0);
        let w = 2.0 * std::f64::consts::PI;
        let p = [0.3];
        let expected = -w * w * (w * 0.3).sin();
        assert!((fxx.eval(&p) - expected).abs() < 1e-9);
    }

    #[test]
    fn fd_fallback_matches_analytic() {
        let w = 2.0 * std::f64::consts::PI;
        let f_fd = ScalarField::from_fn(move |p| (w * p[0]).sin());
        let d = f_fd.partial(0);
        let p = [0.17];
        assert!((d.eval(&p) - w * (w * 0.17).cos()).abs() < 1e-6);
    }

    #[test]
    fn quotient_rule() {
        let x = ScalarField::coordinate(0);
        let one = ScalarField::one();
        let f = one.div(&x);
        let p = [2.0];
        assert!((f.partial(0).eval(&p) + 0.25).abs() < 1e-12);
    }

    #[test]
    fn integral_along_axis_recovers_primitive() {
        // d/dt of the integral is the integrand; the integral of cos is sin.
        let t = ScalarField::coordinate(0);
        let integrand = t.cos();
        let f = ScalarField::integral_along_axis(&integrand, 0, 0.0, 64);
        let p = [1.2, 0.0];
        assert!((f.eval(&p) - 1.2f64.sin()).abs() < 1e-10);
        assert!((f.partial(0).eval(&p) - 1.2f64.cos()).abs() < 1e-12);
    }
}
