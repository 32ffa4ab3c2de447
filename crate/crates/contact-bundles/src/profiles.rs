//! Profile and cutoff families for the neck and collar constructions.
//!
//! All families are piecewise-polynomial splines (C^2 is enough for every
//! check in the crate), so the validators differentiate exactly.

use crate::curve::{
    bump_on, falling_step, odd_step_poly, smoothstep_poly, unit_bump_poly, CurveFn,
    PiecewisePoly, Poly,
};
use crate::error::{Error, Result};
use crate::tolerances::{
    G_PRIME_ACTIVE, PLATEAU_CAP, PROFILE_EXACT_TOL, PROFILE_GRID, TRANSITION_FLOOR,
};

/// Parameters of the default neck profile family.
#[derive(Clone, Copy, Debug)]
pub struct ProfileParams {
    /// Plateau height of f at the middle of the neck.
    pub plateau: f64,
    /// Half-width of the odd transition of g around 0.
    pub transition: f64,
    /// delta: f equals e^(t+1) on (-1-eps, -1+delta].
    pub exp_zone: f64,
    /// Collar margin epsilon of the common domain (-1-eps, 1+eps).
    pub eps: f64,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams {
            plateau: 50.0,
            transition: 0.2,
            exp_zone: 0.2,
            eps: 0.35,
        }
    }
}

impl ProfileParams {
    /// One escalation step: double the plateau, halve the transition.
    /// Returns false once both limits are saturated.
    pub fn escalate(&mut self) -> bool {
        let mut moved = false;
        if self.plateau * 2.0 <= PLATEAU_CAP {
            self.plateau *= 2.0;
            moved = true;
        }
        if self.transition / 2.0 >= TRANSITION_FLOOR {
            self.transition /= 2.0;
            moved = true;
        }
        moved
    }
}

/// The validated pair (f, g) driving the neck form f beta + g psi.
#[derive(Clone)]
pub struct ProfilePair {
    pub f: CurveFn,
    pub g: CurveFn,
    pub eps: f64,
    pub params: ProfileParams,
    /// min f over the region where g' is active, recorded by the validator.
    pub f_min: f64,
    /// min (f'g - fg') over the same region.
    pub w_min: f64,
}

/// Builds and validates the default family:
///   f = exp(F) with F(t) = t+1 up to -1+delta, then a strictly
///   increasing climb that flattens exactly at 0 with F(0) = ln(plateau),
///   mirrored evenly;
///   g = 1, an odd quintic step on [-transition, transition], then -1.
pub fn make_profiles(params: ProfileParams) -> Result<ProfilePair> {
    if params.plateau < 2.0 {
        return Err(Error::ProfileInvalid {
            bullet: "plateau must be at least 2".into(),
            witness: params.plateau,
        });
    }
    if !(params.transition > 0.0 && params.transition < 1.0) {
        return Err(Error::ProfileInvalid {
            bullet: "transition half-width must lie in (0, 1)".into(),
            witness: params.transition,
        });
    }
    let t0 = -1.0 + params.exp_zone;
    if !(t0 < 0.0) {
        return Err(Error::ProfileInvalid {
            bullet: "exp zone must end before 0".into(),
            witness: t0,
        });
    }

    // F' on the climb, in the normalized coordinate sigma = (t - t0)/(-t0):
    // a ramp-down from slope 1 plus a bump sized to land F(0) = ln(plateau).
    let ln_h = params.plateau.ln();
    let amp = (ln_h - (t0 + 1.0)) / (-t0) - 0.5;
    if amp < 0.0 {
        return Err(Error::ProfileInvalid {
            bullet: "plateau too low for the exp zone".into(),
            witness: ln_h,
        });
    }
    let ramp_down = Poly(vec![1.0]).add(&smoothstep_poly().scale(-1.0));
    let fprime_sigma = ramp_down.add(&unit_bump_poly().scale(amp));
    let climb_sigma = fprime_sigma.integral().scale(-t0); // F - F(t0), in sigma
    let a = 1.0 / (-t0);
    let climb = climb_sigma
        .compose_affine(a, 1.0)
        .add(&Poly(vec![t0 + 1.0]));
    let climb_mirror = climb.compose_affine(-1.0, 0.0);
    let big_f = PiecewisePoly::new(
        vec![t0, 0.0, -t0],
        vec![
            Poly(vec![1.0, 1.0]),
            climb,
            climb_mirror,
            Poly(vec![1.0, -1.0]),
        ],
    );
    let f = CurveFn::exp_of(&big_f.curve());

    let aw = params.transition;
    let g_core = odd_step_poly()
        .compose_affine(1.0 / aw, 0.0)
        .scale(-1.0);
    let g = PiecewisePoly::new(
        vec![-aw, aw],
        vec![Poly(vec![1.0]), g_core, Poly(vec![-1.0])],
    )
    .curve();

    let (f_min, w_min) = validate_profiles(&f, &g, &params)?;
    Ok(ProfilePair {
        f,
        g,
        eps: params.eps,
        params,
        f_min,
        w_min,
    })
}

/// The four-bullet validator. Returns (f_min, w_min) over the active
/// transition region.
pub fn validate_profiles(f: &CurveFn, g: &CurveFn, params: &ProfileParams) -> Result<(f64, f64)> {
    let eps = params.eps;
    let lo = -1.0 - eps + 1e-9;
    let hi = 1.0 + eps - 1e-9;
    let n = PROFILE_GRID;
    let fp = f.deriv();
    let gp = g.deriv();
    let mut f_min = f64::INFINITY;
    let mut w_min = f64::INFINITY;
    let mut sign_changes = 0usize;
    let mut prev_sign = 0i8;
    for k in 0..=n {
        let t = lo + (hi - lo) * k as f64 / n as f64;
        let (fv, gv) = (f.eval(t), g.eval(t));
        let (fpv, gpv) = (fp.eval(t), gp.eval(t));

        if (fv - f.eval(-t)).abs() > PROFILE_EXACT_TOL {
            return Err(Error::ProfileInvalid {
                bullet: "f is not even".into(),
                witness: t,
            });
        }
        if fv.abs() < 1e-15 {
            return Err(Error::ProfileInvalid {
                bullet: "f vanishes".into(),
                witness: t,
            });
        }
        if t <= -1.0 + params.exp_zone && (fv - (t + 1.0).exp()).abs() > PROFILE_EXACT_TOL {
            return Err(Error::ProfileInvalid {
                bullet: "f deviates from e^(t+1) on the left collar".into(),
                witness: t,
            });
        }

        if (gv + g.eval(-t)).abs() > PROFILE_EXACT_TOL {
            return Err(Error::ProfileInvalid {
                bullet: "g is not odd".into(),
                witness: t,
            });
        }
        if t <= -1.0 && (gv - 1.0).abs() > PROFILE_EXACT_TOL {
            return Err(Error::ProfileInvalid {
                bullet: "g is not 1 near the left end".into(),
                witness: t,
            });
        }
        let sign = if gv > 0.0 {
            1
        } else if gv < 0.0 {
            -1
        } else {
            0
        };
        if sign != 0 {
            if prev_sign != 0 && sign != prev_sign {
                sign_changes += 1;
            }
            prev_sign = sign;
        }

        let w = fpv * gv - fv * gpv;
        if w <= 0.0 {
            return Err(Error::ProfileInvalid {
                bullet: "f'g - fg' is not positive".into(),
                witness: t,
            });
        }
        if gpv.abs() > G_PRIME_ACTIVE {
            f_min = f_min.min(fv);
            w_min = w_min.min(w);
        }
    }
    if sign_changes != 1 {
        return Err(Error::ProfileInvalid {
            bullet: format!("g has {sign_changes} sign changes, expected one"),
            witness: 0.0,
        });
    }
    Ok((f_min, w_min))
}

/// Monotone collar reparametrization b and interpolation cutoff c on [0, 1].
#[derive(Clone)]
pub struct CollarProfile {
    pub b: CurveFn,
    pub c: CurveFn,
    pub eps: f64,
    /// Slope of b past its transition; zero slope models a broken input.
    pub slope: f64,
}

/// b: identically 0 up to eps/2, then b' grows smoothly to `slope`;
/// c: identically 1 on [0, eps], falling smoothly to 0 before 1.
pub fn make_collar_profile(eps: f64, slope: f64) -> CollarProfile {
    assert!(eps > 0.0 && eps < 0.5, "collar eps out of range");
    let w = eps / 2.0;
    let rise = smoothstep_poly().compose_affine(1.0 / w, -0.5 * eps / w);
    let bprime = PiecewisePoly::new(
        vec![eps / 2.0, eps / 2.0 + w],
        vec![Poly(vec![0.0]), rise.scale(slope), Poly(vec![slope])],
    );
    // integrate piecewise, matching values at the breakpoints
    let p1 = bprime.pieces[1].integral();
    let c1 = p1.eval(eps / 2.0);
    let piece1 = p1.add(&Poly(vec![-c1]));
    let v1 = piece1.eval(eps / 2.0 + w);
    let piece2 = Poly(vec![-(eps / 2.0 + w) * slope + v1, slope]);
    let b = PiecewisePoly::new(
        vec![eps / 2.0, eps / 2.0 + w],
        vec![Poly(vec![0.0]), piece1, piece2],
    )
    .curve();
    let c = falling_step(eps, 0.9).curve();
    CollarProfile {
        b,
        c,
        eps,
        slope,
    }
}

impl CollarProfile {
    pub fn validate(&self) -> Result<()> {
        let n = PROFILE_GRID;
        let bp = self.b.deriv();
        for k in 0..=n {
            let t = k as f64 / n as f64;
            let (bv, cv) = (self.b.eval(t), self.c.eval(t));
            if t <= self.eps / 2.0 && bv.abs() > PROFILE_EXACT_TOL {
                return Err(Error::ProfileInvalid {
                    bullet: "b must vanish near 0".into(),
                    witness: t,
                });
            }
            if bp.eval(t) < 0.0 {
                return Err(Error::ProfileInvalid {
                    bullet: "b must be monotone increasing".into(),
                    witness: t,
                });
            }
            // strict positivity of b' past eps/2 is what the collar sweep
            // needs; a flat b is reported there as a tuning failure, not
            // rejected here
            if t <= self.eps && (cv - 1.0).abs() > PROFILE_EXACT_TOL {
                return Err(Error::ProfileInvalid {
                    bullet: "c must be 1 on [0, eps]".into(),
                    witness: t,
                });
            }
            if t >= 0.95 && cv.abs() > PROFILE_EXACT_TOL {
                return Err(Error::ProfileInvalid {
                    bullet: "c must vanish near 1".into(),
                    witness: t,
                });
            }
            if !(-PROFILE_EXACT_TOL..=1.0 + PROFILE_EXACT_TOL).contains(&cv) {
                return Err(Error::ProfileInvalid {
                    bullet: "c must take values in [0, 1]".into(),
                    witness: t,
                });
            }
        }
        Ok(())
    }
}

/// Radial cutoff for the open-book construction: identity near the
/// binding, monotone, identically 1 from the outer transition radius on.
#[derive(Clone)]
pub struct CutoffRho {
    pub rho: CurveFn,
    pub r0: f64,
    pub transition: (f64, f64),
}

pub fn make_cutoff(r0: f64, transition: (f64, f64)) -> Result<CutoffRho> {
    let (c1, c2) = transition;
    if !(0.0 < c1 && c1 < c2 && c2 < r0) {
        return Err(Error::CutoffInvalid {
            bullet: "transition interval must satisfy 0 < c1 < c2 < r0".into(),
            witness: c1,
        });
    }
    let w = c2 - c1;
    let amp = (1.0 - c1) / w - 0.5;
    if amp < 0.0 {
        return Err(Error::CutoffInvalid {
            bullet: "transition too wide: rho would need a negative slope".into(),
            witness: w,
        });
    }
    let ramp_down = Poly(vec![1.0]).add(&smoothstep_poly().scale(-1.0));
    let rho_prime_sigma = ramp_down.add(&unit_bump_poly().scale(amp));
    let climb = rho_prime_sigma
        .integral()
        .scale(w)
        .compose_affine(1.0 / w, -c1 / w)
        .add(&Poly(vec![c1]));
    let rho = PiecewisePoly::new(
        vec![c1, c2],
        vec![Poly(vec![0.0, 1.0]), climb, Poly(vec![1.0])],
    )
    .curve();
    let out = CutoffRho {
        rho,
        r0,
        transition,
    };
    out.validate()?;
    Ok(out)
}

impl CutoffRho {
    pub fn validate(&self) -> Result<()> {
        let n = PROFILE_GRID;
        let rp = self.rho.deriv();
        for k in 0..=n {
            let r = k as f64 / n as f64;
            let v = self.rho.eval(r);
            if r <= self.transition.0 && (v - r).abs() > PROFILE_EXACT_TOL {
                return Err(Error::CutoffInvalid {
                    bullet: "rho must equal r near the binding".into(),
                    witness: r,
                });
            }
            if rp.eval(r) < -PROFILE_EXACT_TOL {
                return Err(Error::CutoffInvalid {
                    bullet: "rho' must be nonnegative".into(),
                    witness: r,
                });
            }
            if r >= self.transition.1 && (v - 1.0).abs() > PROFILE_EXACT_TOL {
                return Err(Error::CutoffInvalid {
                    bullet: "rho must be 1 from the outer radius on".into(),
                    witness: r,
                });
            }
        }
        Ok(())
    }
}

/// Smooth 0 -> 1 interpolation across an interval, for gauge alignment.
pub fn chi_cutoff(lo: f64, hi: f64) -> CurveFn {
    crate::curve::rising_step(lo, hi).curve()
}

/// Bump profile with unit integral supported on (lo, hi).
pub fn bump_profile(lo: f64, hi: f64) -> CurveFn {
    bump_on(lo, hi).curve()
}
