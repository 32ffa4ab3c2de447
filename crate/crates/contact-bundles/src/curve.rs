//! One-dimensional smooth functions with exact derivatives.
//!
//! Profiles, cutoffs and radial blends are built from piecewise
//! polynomials, so every derivative the validators touch is analytic.

use std::sync::Arc;

use crate::field::ScalarField;

type Eval1 = dyn Fn(f64) -> f64 + Send + Sync;
type Deriv1 = dyn Fn() -> CurveFn + Send + Sync;

#[derive(Clone)]
pub struct CurveFn {
    inner: Arc<Repr>,
}

struct Repr {
    eval: Box<Eval1>,
    deriv: Box<Deriv1>,
}

impl CurveFn {
    pub fn new(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn() -> CurveFn + Send + Sync + 'static,
    ) -> Self {
        CurveFn {
            inner: Arc::new(Repr {
                eval: Box::new(eval),
                deriv: Box::new(deriv),
            }),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.inner.eval)(t)
    }

    pub fn deriv(&self) -> CurveFn {
        (self.inner.deriv)()
    }

    pub fn constant(c: f64) -> CurveFn {
        CurveFn::new(move |_| c, || CurveFn::constant(0.0))
    }

    pub fn add(&self, other: &CurveFn) -> CurveFn {
        let (a, b) = (self.clone(), other.clone());
        let (da, db) = (self.clone(), other.clone());
        CurveFn::new(move |t| a.eval(t) + b.eval(t), move || da.deriv().add(&db.deriv()))
    }

    pub fn mul(&self, other: &CurveFn) -> CurveFn {
        let (a, b) = (self.clone(), other.clone());
        let (da, db) = (self.clone(), other.clone());
        CurveFn::new(move |t| a.eval(t) * b.eval(t), move || {
            da.deriv().mul(&db).add(&da.mul(&db.deriv()))
        })
    }

    pub fn scale(&self, c: f64) -> CurveFn {
        let a = self.clone();
        let d = self.clone();
        CurveFn::new(move |t| c * a.eval(t), move || d.deriv().scale(c))
    }

    pub fn div(&self, other: &CurveFn) -> CurveFn {
        let (a, b) = (self.clone(), other.clone());
        let (da, db) = (self.clone(), other.clone());
        CurveFn::new(move |t| a.eval(t) / b.eval(t), move || {
            let num = da.deriv().mul(&db).add(&da.mul(&db.deriv()).scale(-1.0));
            num.div(&db.mul(&db))
        })
    }

    /// Branch dispatch at a single break; both sides must agree smoothly
    /// around it.
    pub fn piecewise2(breakpoint: f64, left: &CurveFn, right: &CurveFn) -> CurveFn {
        let (l, r) = (left.clone(), right.clone());
        let (dl, dr) = (left.clone(), right.clone());
        CurveFn::new(
            move |t| {
                if t < breakpoint {
                    l.eval(t)
                } else {
                    r.eval(t)
                }
            },
            move || CurveFn::piecewise2(breakpoint, &dl.deriv(), &dr.deriv()),
        )
    }

    pub fn exp_of(inner: &CurveFn) -> CurveFn {
        let a = inner.clone();
        let d = inner.clone();
        CurveFn::new(move |t| a.eval(t).exp(), move || {
            CurveFn::exp_of(&d).mul(&d.deriv())
        })
    }

    /// h(t) = self(a t + b), with exact chain rule.
    pub fn compose_affine(&self, a: f64, b: f64) -> CurveFn {
        let f = self.clone();
        let d = self.clone();
        CurveFn::new(move |t| f.eval(a * t + b), move || {
            d.deriv().compose_affine(a, b).scale(a)
        })
    }

    /// Mirror: t -> self(|t|) for even extensions of left-half data.
    pub fn even_extension(&self) -> CurveFn {
        // Valid when the underlying left-half function has zero slope at 0.
        let f = self.clone();
        let d = self.clone();
        CurveFn::new(move |t| f.eval(-t.abs()), move || {
            let inner = d.deriv();
            let g = inner.clone();
            CurveFn::new(
                move |t| {
                    if t <= 0.0 {
                        g.eval(t)
                    } else {
                        -g.eval(-t)
                    }
                },
                {
                    let h = inner.clone();
                    move || h.even_extension()
                },
            )
        })
    }

    /// Lift onto a product manifold: reads ambient coordinate `axis`.
    pub fn lift(&self, axis: usize) -> ScalarField {
        let f = self.clone();
        let d = self.clone();
        ScalarField::from_parts(
            move |p: &[f64]| f.eval(p[axis]),
            move |i| {
                if i == axis {
                    d.deriv().lift(axis)
                } else {
                    ScalarField::zero()
                }
            },
        )
    }
}

/// Dense polynomial, coefficients by ascending power.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn deriv(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k + 1) as f64)
                .collect(),
        )
    }

    /// Antiderivative with value 0 at t = 0.
    pub fn integral(&self) -> Poly {
        let mut out = vec![0.0];
        out.extend(self.0.iter().enumerate().map(|(k, &c)| c / (k + 1) as f64));
        Poly(out)
    }

    /// Coefficients of p(a t + b).
    pub fn compose_affine(&self, a: f64, b: f64) -> Poly {
        let mut acc = Poly(vec![0.0]);
        for &c in self.0.iter().rev() {
            acc = acc.mul_affine(a, b);
            if acc.0.is_empty() {
                acc.0.push(0.0);
            }
            acc.0[0] += c;
        }
        acc
    }

    fn mul_affine(&self, a: f64, b: f64) -> Poly {
        // self * (a t + b)
        let n = self.0.len();
        let mut out = vec![0.0; n + 1];
        for (k, &c) in self.0.iter().enumerate() {
            out[k] += c * b;
            out[k + 1] += c * a;
        }
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0.0; n];
        for (k, &c) in self.0.iter().enumerate() {
            out[k] += c;
        }
        for (k, &c) in other.0.iter().enumerate() {
            out[k] += c;
        }
        Poly(out)
    }

    pub fn mul_poly(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn scale(&self, c: f64) -> Poly {
        Poly(self.0.iter().map(|&a| a * c).collect())
    }
}

/// Piecewise polynomial on a sorted break sequence; piece `k` applies on
/// `[breaks[k-1], breaks[k])` with the first piece extending left and the
/// last extending right.
#[derive(Clone, Debug)]
pub struct PiecewisePoly {
    pub breaks: Vec<f64>,
    pub pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breaks: Vec<f64>, pieces: Vec<Poly>) -> Self {
        assert_eq!(pieces.len(), breaks.len() + 1);
        assert!(breaks.windows(2).all(|w| w[0] <= w[1]));
        PiecewisePoly { breaks, pieces }
    }

    fn segment(&self, t: f64) -> usize {
        self.breaks.partition_point(|&b| b <= t)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.pieces[self.segment(t)].eval(t)
    }

    pub fn deriv(&self) -> PiecewisePoly {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(Poly::deriv).collect(),
        }
    }

    pub fn curve(&self) -> CurveFn {
        let f = self.clone();
        let d = self.clone();
        CurveFn::new(move |t| f.eval(t), move || d.deriv().curve())
    }
}

/// Quintic smoothstep rising 0 -> 1 on [0, 1] with vanishing first and
/// second derivatives at both ends: 6 s^5 - 15 s^4 + 10 s^3.
pub fn smoothstep_poly() -> Poly {
    Poly(vec![0.0, 0.0, 0.0, 10.0, -15.0, 6.0])
}

/// Quartic bump 30 s^2 (1 - s)^2 on [0, 1]: nonnegative, unit integral,
/// vanishing with its first derivative at both ends.
pub fn unit_bump_poly() -> Poly {
    Poly(vec![0.0, 0.0, 30.0, -60.0, 30.0])
}

/// Odd quintic step (15 s - 10 s^3 + 3 s^5) / 8: value +-1 at s = +-1,
/// first two derivatives vanish there, strictly increasing inside.
pub fn odd_step_poly() -> Poly {
    Poly(vec![0.0, 15.0 / 8.0, 0.0, -10.0 / 8.0, 0.0, 3.0 / 8.0])
}

/// Smoothstep rising 0 -> 1 across [a, b], constant outside.
pub fn rising_step(a: f64, b: f64) -> PiecewisePoly {
    let core = smoothstep_poly().compose_affine(1.0 / (b - a), -a / (b - a));
    PiecewisePoly::new(
        vec![a, b],
        vec![Poly(vec![0.0]), core, Poly(vec![1.0])],
    )
}

/// Smoothstep falling 1 -> 0 across [a, b], constant outside.
pub fn falling_step(a: f64, b: f64) -> PiecewisePoly {
    let rise = rising_step(a, b);
    PiecewisePoly {
        breaks: rise.breaks.clone(),
        pieces: rise
            .pieces
            .iter()
            .map(|p| p.scale(-1.0).add(&Poly(vec![1.0])))
            .collect(),
    }
}

/// C^2 bump supported on [a, b], nonnegative, unit integral.
pub fn bump_on(a: f64, b: f64) -> PiecewisePoly {
    let w = b - a;
    let core = unit_bump_poly()
        .compose_affine(1.0 / w, -a / w)
        .scale(1.0 / w);
    PiecewisePoly::new(vec![a, b], vec![Poly(vec![0.0]), core, Poly(vec![0.0])])
}
