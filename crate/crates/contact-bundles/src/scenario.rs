//! JSON scenario files: schema validation with JSON-pointer error paths,
//! and the recipe dispatcher producing machine-readable reports.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::Value;

use crate::bundle::{
    contact_check, decompose_alpha, euler_pairing, identity_check_lemma_volume, Bundle,
    BundleSpec, InvariantForm,
};
use crate::cycle::Cycle2;
use crate::error::{Error, Result};
use crate::expr::{parse_expression, Expr};
use crate::form::BaseForm;
use crate::gallery::GalleryOptions;
use crate::manifold::{FactorKind, Manifold, ModelFactor, ModelManifold};
use crate::report::{CheckEntry, Provenance, Report};
use crate::splitting::{
    contact_slice, default_eps, dividing_set, gamma_contact_check, slice_contact_family,
    symplectic_pieces, weak_filling_w1, weak_filling_w2,
};
use crate::sweep::resolutions;
use crate::tolerances::INTEGRALITY_TOL;

pub const SCENARIO_SCHEMA: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    VerifyContact,
    Split,
    Euler,
    Construct,
    Bourgeois,
    Contactise,
}

impl Recipe {
    pub fn name(&self) -> &'static str {
        match self {
            Recipe::VerifyContact => "verify-contact",
            Recipe::Split => "split",
            Recipe::Euler => "euler",
            Recipe::Construct => "construct",
            Recipe::Bourgeois => "bourgeois",
            Recipe::Contactise => "contactise",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CurvatureTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: Expr,
}

#[derive(Clone, Debug)]
pub enum GeneratorSpec {
    /// Fundamental cycle of two circle factors.
    Torus {
        name: String,
        factors: (usize, usize),
        expected: Option<f64>,
    },
    /// Spherical cycle over a 2-sphere factor.
    Sphere {
        name: String,
        factor: usize,
        expected: Option<f64>,
    },
}

impl GeneratorSpec {
    pub fn name(&self) -> &str {
        match self {
            GeneratorSpec::Torus { name, .. } | GeneratorSpec::Sphere { name, .. } => name,
        }
    }

    fn expected(&self) -> Option<f64> {
        match self {
            GeneratorSpec::Torus { expected, .. } | GeneratorSpec::Sphere { expected, .. } => {
                *expected
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum RecipeParams {
    Pair {
        beta: Vec<(usize, Expr)>,
        u: Expr,
        dividing_axis: Option<usize>,
        eps: Option<f64>,
        s_values: Vec<f64>,
    },
    Euler,
    Construct {
        family: String,
        k: i64,
        plateau: Option<f64>,
        transition: Option<f64>,
    },
    Bourgeois {
        r0: f64,
        transition: (f64, f64),
    },
    Contactise {
        family: String,
    },
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub factors: Option<Vec<ModelFactor>>,
    pub curvature: Vec<CurvatureTerm>,
    pub generators: Vec<GeneratorSpec>,
    pub recipe: Recipe,
    pub params: RecipeParams,
    pub checks: Vec<String>,
    pub output: Option<PathBuf>,
}

fn schema_err(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn as_object<'v>(
    v: &'v Value,
    ptr: &str,
    allowed: &[&str],
) -> Result<&'v serde_json::Map<String, Value>> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema_err(ptr, "expected an object"))?;
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema_err(format!("{ptr}/{key}"), "unknown key"));
        }
    }
    Ok(obj)
}

fn required<'v>(
    obj: &'v serde_json::Map<String, Value>,
    key: &str,
    ptr: &str,
) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| schema_err(format!("{ptr}/{key}"), "missing required key"))
}

fn as_usize(v: &Value, ptr: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema_err(ptr, "expected a nonnegative integer"))
}

fn as_f64(v: &Value, ptr: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema_err(ptr, "expected a number"))
}

fn as_str<'v>(v: &'v Value, ptr: &str) -> Result<&'v str> {
    v.as_str().ok_or_else(|| schema_err(ptr, "expected a string"))
}

fn parse_expr_field(v: &Value, ptr: &str) -> Result<Expr> {
    let text = as_str(v, ptr)?;
    parse_expression(text).map_err(|e| match e {
        Error::Expr { offset, message } => {
            schema_err(ptr, format!("expression error at byte {offset}: {message}"))
        }
        other => other,
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    parse_scenario(&value)
}

pub fn parse_scenario(value: &Value) -> Result<Scenario> {
    let root = as_object(
        value,
        "",
        &[
            "schema", "name", "manifold", "bundle", "recipe", "parameters", "checks", "output",
        ],
    )?;
    let schema = as_usize(required(root, "schema", "")?, "/schema")? as u64;
    if schema != SCENARIO_SCHEMA {
        return Err(schema_err("/schema", format!("unsupported schema {schema}")));
    }
    let name = as_str(required(root, "name", "")?, "/name")?.to_string();
    let recipe = match as_str(required(root, "recipe", "")?, "/recipe")? {
        "verify-contact" => Recipe::VerifyContact,
        "split" => Recipe::Split,
        "euler" => Recipe::Euler,
        "construct" => Recipe::Construct,
        "bourgeois" => Recipe::Bourgeois,
        "contactise" => Recipe::Contactise,
        other => return Err(schema_err("/recipe", format!("unknown recipe '{other}'"))),
    };

    let needs_manifold = matches!(
        recipe,
        Recipe::VerifyContact | Recipe::Split | Recipe::Euler
    );
    let factors = match root.get("manifold") {
        Some(v) => Some(parse_manifold(v)?),
        None if needs_manifold => {
            return Err(schema_err("/manifold", "missing required key"));
        }
        None => None,
    };

    let (curvature, generators) = match root.get("bundle") {
        Some(v) => parse_bundle(v)?,
        None if needs_manifold => (Vec::new(), Vec::new()),
        None => (Vec::new(), Vec::new()),
    };

    let params_value = required(root, "parameters", "")?;
    let params = parse_params(&recipe, params_value)?;

    let checks = match root.get("checks") {
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| schema_err("/checks", "expected an array"))?;
            arr.iter()
                .enumerate()
                .map(|(k, item)| Ok(as_str(item, &format!("/checks/{k}"))?.to_string()))
                .collect::<Result<Vec<_>>>()?
        }
        None => Vec::new(),
    };
    let output = match root.get("output") {
        Some(Value::Null) | None => None,
        Some(v) => Some(PathBuf::from(as_str(v, "/output")?)),
    };

    Ok(Scenario {
        name,
        factors,
        curvature,
        generators,
        recipe,
        params,
        checks,
        output,
    })
}

fn parse_manifold(v: &Value) -> Result<Vec<ModelFactor>> {
    let obj = as_object(v, "/manifold", &["factors"])?;
    let arr = required(obj, "factors", "/manifold")?
        .as_array()
        .ok_or_else(|| schema_err("/manifold/factors", "expected an array"))?;
    if arr.is_empty() {
        return Err(schema_err("/manifold/factors", "at least one factor required"));
    }
    arr.iter()
        .enumerate()
        .map(|(k, item)| {
            let ptr = format!("/manifold/factors/{k}");
            let f = as_object(item, &ptr, &["kind", "resolution", "range"])?;
            let kind = as_str(required(f, "kind", &ptr)?, &format!("{ptr}/kind"))?;
            let resolution = as_usize(
                required(f, "resolution", &ptr)?,
                &format!("{ptr}/resolution"),
            )?;
            if resolution < 2 {
                return Err(schema_err(
                    format!("{ptr}/resolution"),
                    "resolution must be at least 2",
                ));
            }
            match kind {
                "circle" => Ok(ModelFactor::circle(resolution)),
                "sphere2" => Ok(ModelFactor::sphere2(resolution)),
                "sphere3" => Ok(ModelFactor::sphere3(resolution)),
                "interval" => {
                    let range = required(f, "range", &ptr)?;
                    let pair = range
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| schema_err(format!("{ptr}/range"), "expected [lo, hi]"))?;
                    let lo = as_f64(&pair[0], &format!("{ptr}/range/0"))?;
                    let hi = as_f64(&pair[1], &format!("{ptr}/range/1"))?;
                    if lo >= hi {
                        return Err(schema_err(format!("{ptr}/range"), "lo must be below hi"));
                    }
                    Ok(ModelFactor::interval(lo, hi, resolution))
                }
                other => Err(schema_err(
                    format!("{ptr}/kind"),
                    format!("unknown factor kind '{other}'"),
                )),
            }
        })
        .collect()
}

fn parse_bundle(v: &Value) -> Result<(Vec<CurvatureTerm>, Vec<GeneratorSpec>)> {
    let obj = as_object(v, "/bundle", &["curvature", "generators"])?;
    let mut curvature = Vec::new();
    if let Some(arr) = obj.get("curvature") {
        let arr = arr
            .as_array()
            .ok_or_else(|| schema_err("/bundle/curvature", "expected an array"))?;
        for (k, item) in arr.iter().enumerate() {
            let ptr = format!("/bundle/curvature/{k}");
            let t = as_object(item, &ptr, &["i", "j", "coeff"])?;
            let i = as_usize(required(t, "i", &ptr)?, &format!("{ptr}/i"))?;
            let j = as_usize(required(t, "j", &ptr)?, &format!("{ptr}/j"))?;
            if i == j {
                return Err(schema_err(ptr, "indices must differ"));
            }
            let coeff = parse_expr_field(required(t, "coeff", &ptr)?, &format!("{ptr}/coeff"))?;
            curvature.push(CurvatureTerm { i, j, coeff });
        }
    }
    let mut generators = Vec::new();
    if let Some(arr) = obj.get("generators") {
        let arr = arr
            .as_array()
            .ok_or_else(|| schema_err("/bundle/generators", "expected an array"))?;
        let mut seen = BTreeSet::new();
        for (k, item) in arr.iter().enumerate() {
            let ptr = format!("/bundle/generators/{k}");
            let g = as_object(item, &ptr, &["name", "kind", "factors", "factor", "expected"])?;
            let name = as_str(required(g, "name", &ptr)?, &format!("{ptr}/name"))?.to_string();
            if !seen.insert(name.clone()) {
                return Err(schema_err(format!("{ptr}/name"), "duplicate generator name"));
            }
            let expected = match g.get("expected") {
                Some(v) => Some(as_f64(v, &format!("{ptr}/expected"))?),
                None => None,
            };
            match as_str(required(g, "kind", &ptr)?, &format!("{ptr}/kind"))? {
                "torus" => {
                    let pair = required(g, "factors", &ptr)?
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| {
                            schema_err(format!("{ptr}/factors"), "expected two factor indices")
                        })?;
                    let a = as_usize(&pair[0], &format!("{ptr}/factors/0"))?;
                    let b = as_usize(&pair[1], &format!("{ptr}/factors/1"))?;
                    generators.push(GeneratorSpec::Torus {
                        name,
                        factors: (a, b),
                        expected,
                    });
                }
                "sphere" => {
                    let factor =
                        as_usize(required(g, "factor", &ptr)?, &format!("{ptr}/factor"))?;
                    generators.push(GeneratorSpec::Sphere {
                        name,
                        factor,
                        expected,
                    });
                }
                other => {
                    return Err(schema_err(
                        format!("{ptr}/kind"),
                        format!("unknown generator kind '{other}'"),
                    ))
                }
            }
        }
    }
    Ok((curvature, generators))
}

fn parse_params(recipe: &Recipe, v: &Value) -> Result<RecipeParams> {
    let ptr = "/parameters";
    match recipe {
        Recipe::VerifyContact | Recipe::Split => {
            let obj = as_object(v, ptr, &["beta", "u", "dividing_axis", "eps", "s_values"])?;
            let beta_arr = required(obj, "beta", ptr)?
                .as_array()
                .ok_or_else(|| schema_err(format!("{ptr}/beta"), "expected an array"))?;
            let mut beta = Vec::new();
            for (k, item) in beta_arr.iter().enumerate() {
                let tptr = format!("{ptr}/beta/{k}");
                let t = as_object(item, &tptr, &["axis", "coeff"])?;
                let axis = as_usize(required(t, "axis", &tptr)?, &format!("{tptr}/axis"))?;
                let coeff =
                    parse_expr_field(required(t, "coeff", &tptr)?, &format!("{tptr}/coeff"))?;
                beta.push((axis, coeff));
            }
            let u = parse_expr_field(required(obj, "u", ptr)?, &format!("{ptr}/u"))?;
            let dividing_axis = match obj.get("dividing_axis") {
                Some(v) => Some(as_usize(v, &format!("{ptr}/dividing_axis"))?),
                None => None,
            };
            if *recipe == Recipe::Split && dividing_axis.is_none() {
                return Err(schema_err(
                    format!("{ptr}/dividing_axis"),
                    "split recipes must name the transverse axis",
                ));
            }
            let eps = match obj.get("eps") {
                Some(v) => Some(as_f64(v, &format!("{ptr}/eps"))?),
                None => None,
            };
            let s_values = match obj.get("s_values") {
                Some(v) => v
                    .as_array()
                    .ok_or_else(|| schema_err(format!("{ptr}/s_values"), "expected an array"))?
                    .iter()
                    .enumerate()
                    .map(|(k, item)| as_f64(item, &format!("{ptr}/s_values/{k}")))
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            Ok(RecipeParams::Pair {
                beta,
                u,
                dividing_axis,
                eps,
                s_values,
            })
        }
        Recipe::Euler => {
            as_object(v, ptr, &[])?;
            Ok(RecipeParams::Euler)
        }
        Recipe::Construct => {
            let obj = as_object(v, ptr, &["family", "k", "plateau", "transition"])?;
            let family = as_str(required(obj, "family", ptr)?, &format!("{ptr}/family"))?;
            if family != "t2s2" {
                return Err(schema_err(
                    format!("{ptr}/family"),
                    format!("unknown construct family '{family}'"),
                ));
            }
            let k = required(obj, "k", ptr)?
                .as_i64()
                .ok_or_else(|| schema_err(format!("{ptr}/k"), "expected an integer"))?;
            let plateau = match obj.get("plateau") {
                Some(v) => Some(as_f64(v, &format!("{ptr}/plateau"))?),
                None => None,
            };
            let transition = match obj.get("transition") {
                Some(v) => Some(as_f64(v, &format!("{ptr}/transition"))?),
                None => None,
            };
            Ok(RecipeParams::Construct {
                family: family.to_string(),
                k,
                plateau,
                transition,
            })
        }
        Recipe::Bourgeois => {
            let obj = as_object(v, ptr, &["r0", "transition"])?;
            let r0 = as_f64(required(obj, "r0", ptr)?, &format!("{ptr}/r0"))?;
            let pair = required(obj, "transition", ptr)?
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| schema_err(format!("{ptr}/transition"), "expected [lo, hi]"))?;
            let lo = as_f64(&pair[0], &format!("{ptr}/transition/0"))?;
            let hi = as_f64(&pair[1], &format!("{ptr}/transition/1"))?;
            Ok(RecipeParams::Bourgeois {
                r0,
                transition: (lo, hi),
            })
        }
        Recipe::Contactise => {
            let obj = as_object(v, ptr, &["family"])?;
            let family = as_str(required(obj, "family", ptr)?, &format!("{ptr}/family"))?;
            if family != "t2d2" {
                return Err(schema_err(
                    format!("{ptr}/family"),
                    format!("unknown contactise family '{family}'"),
                ));
            }
            Ok(RecipeParams::Contactise {
                family: family.to_string(),
            })
        }
    }
}

/// Evaluates an expression over every grid sample, surfacing domain
/// errors with their location.
fn prevalidate_expr(e: &Expr, m: &Manifold, pointer: &str) -> Result<()> {
    if let Some(i) = e.max_coord() {
        if i >= m.ambient_dim() {
            return Err(schema_err(
                pointer,
                format!(
                    "expression references x{i} but the ambient dimension is {}",
                    m.ambient_dim()
                ),
            ));
        }
    }
    for flat in 0..m.grid_size() {
        let p = m.grid_point(flat);
        if let Err(msg) = e.eval(&p) {
            return Err(schema_err(
                pointer,
                format!("domain error at {p:?}: {msg}"),
            ));
        }
    }
    Ok(())
}

fn scenario_bundle(sc: &Scenario, m: &Manifold) -> Result<Bundle> {
    let mut omega = BaseForm::zero(2, m.clone());
    for (idx, term) in sc.curvature.iter().enumerate() {
        let ptr = format!("/bundle/curvature/{idx}");
        if term.i >= m.ambient_dim() || term.j >= m.ambient_dim() {
            return Err(schema_err(ptr, "coefficient index beyond the ambient dimension"));
        }
        prevalidate_expr(&term.coeff, m, &format!("{ptr}/coeff"))?;
        omega = omega.with_term(&[term.i, term.j], term.coeff.to_field(m.ambient_dim())?);
    }
    let mut cycles = Vec::new();
    let default_params: Vec<f64> = m.axes().iter().map(|ax| ax.samples[0]).collect();
    let basepoint = m.chart(&default_params);
    for (idx, g) in sc.generators.iter().enumerate() {
        let ptr = format!("/bundle/generators/{idx}");
        match g {
            GeneratorSpec::Torus { name, factors, .. } => {
                for &f in [factors.0, factors.1].iter() {
                    if f >= m.factors.len()
                        || !matches!(m.factors[f].kind, FactorKind::Circle)
                    {
                        return Err(schema_err(
                            format!("{ptr}/factors"),
                            "torus generators need two circle factors",
                        ));
                    }
                }
                cycles.push(Cycle2::torus_factor(
                    name.clone(),
                    m.ambient_dim(),
                    m.ambient_offset(factors.0),
                    m.ambient_offset(factors.1),
                    basepoint.clone(),
                    128,
                ));
            }
            GeneratorSpec::Sphere { name, factor, .. } => {
                if *factor >= m.factors.len()
                    || !matches!(m.factors[*factor].kind, FactorKind::Sphere2)
                {
                    return Err(schema_err(
                        format!("{ptr}/factor"),
                        "sphere generators need a 2-sphere factor",
                    ));
                }
                cycles.push(Cycle2::sphere_factor(
                    name.clone(),
                    m.ambient_offset(*factor),
                    basepoint.clone(),
                    256,
                ));
            }
        }
    }
    BundleSpec::new(m.clone(), omega, cycles)
}

fn scaled_factors(factors: &[ModelFactor], scale: f64) -> Vec<ModelFactor> {
    factors
        .iter()
        .map(|f| ModelFactor {
            kind: f.kind,
            resolution: ((f.resolution as f64 * scale).round() as usize).max(3),
        })
        .collect()
}

/// Executes a scenario; failures become report entries, never panics.
pub fn run_scenario(sc: &Scenario, opts: &GalleryOptions) -> Report {
    let t0 = Instant::now();
    match run_scenario_inner(sc, opts, t0) {
        Ok(report) => apply_check_filter(report, &sc.checks),
        Err(e) => Report::new(
            sc.name.clone(),
            sc.recipe.name(),
            vec![CheckEntry::failure("scenario", &e)],
            Provenance {
                resolutions: vec![],
                tolerance: opts.tol,
                resolution_scale: opts.resolution_scale,
                parameters: serde_json::json!({}),
                wall_time_ms: t0.elapsed().as_millis(),
            },
        ),
    }
}

fn apply_check_filter(mut report: Report, wanted: &[String]) -> Report {
    if wanted.is_empty() {
        return report;
    }
    let mut filtered = Vec::new();
    for want in wanted {
        match report.checks.iter().find(|c| &c.name == want) {
            Some(c) => filtered.push(c.clone()),
            None => filtered.push(CheckEntry::flag(
                want.clone(),
                false,
                "no such check in this recipe",
            )),
        }
    }
    report.overall_pass = !filtered.is_empty() && filtered.iter().all(|c| c.passed);
    report.checks = filtered;
    report
}

fn run_scenario_inner(sc: &Scenario, opts: &GalleryOptions, t0: Instant) -> Result<Report> {
    match (&sc.recipe, &sc.params) {
        (Recipe::VerifyContact | Recipe::Split, RecipeParams::Pair { .. }) => {
            run_pair_recipe(sc, opts, t0)
        }
        (Recipe::Euler, RecipeParams::Euler) => run_euler(sc, opts, t0),
        (
            Recipe::Construct,
            RecipeParams::Construct {
                k,
                plateau,
                transition,
                ..
            },
        ) => {
            let mut params = crate::profiles::ProfileParams::default();
            if let Some(p) = plateau {
                params.plateau = *p;
            }
            if let Some(t) = transition {
                params.transition = *t;
            }
            let mut report = crate::gallery::t2s2_report_with(*k, opts, params)?;
            report.name = sc.name.clone();
            Ok(report)
        }
        (Recipe::Bourgeois, RecipeParams::Bourgeois { r0, transition }) => {
            let mut report = crate::gallery::bourgeois_report_with(opts, *r0, *transition)?;
            report.name = sc.name.clone();
            Ok(report)
        }
        (Recipe::Contactise, RecipeParams::Contactise { .. }) => {
            let mut report = crate::gallery::run_gallery("contactise-t2d2", opts)?;
            report.name = sc.name.clone();
            Ok(report)
        }
        _ => Err(Error::Precondition(
            "recipe and parameters disagree".into(),
        )),
    }
}

fn run_pair_recipe(sc: &Scenario, opts: &GalleryOptions, t0: Instant) -> Result<Report> {
    let RecipeParams::Pair {
        beta: beta_terms,
        u: u_expr,
        dividing_axis,
        eps,
        s_values,
    } = &sc.params
    else {
        unreachable!("dispatch checked");
    };
    let factors = scaled_factors(
        sc.factors.as_ref().expect("manifold required by parser"),
        opts.resolution_scale,
    );
    let m = ModelManifold::product(factors);
    let n = m.intrinsic_dim() / 2;
    if m.intrinsic_dim() % 2 != 0 {
        return Err(Error::Precondition(
            "the base of a circle bundle must be even-dimensional".into(),
        ));
    }
    let bundle = scenario_bundle(sc, &m)?;
    let mut checks = Vec::new();

    prevalidate_expr(u_expr, &m, "/parameters/u")?;
    let mut beta = BaseForm::zero(1, m.clone());
    for (idx, (axis, coeff)) in beta_terms.iter().enumerate() {
        let ptr = format!("/parameters/beta/{idx}");
        if *axis >= m.ambient_dim() {
            return Err(schema_err(
                format!("{ptr}/axis"),
                "axis beyond the ambient dimension",
            ));
        }
        prevalidate_expr(coeff, &m, &format!("{ptr}/coeff"))?;
        beta = beta.with_term(&[*axis], coeff.to_field(m.ambient_dim())?);
    }
    let u = u_expr.to_field(m.ambient_dim())?;
    let alpha = InvariantForm::contact_candidate(beta.clone(), u.clone(), bundle.clone());

    let contact = contact_check(&alpha, opts.tol)?;
    checks.push(CheckEntry::positivity("contact", &contact));
    checks.push(CheckEntry::residual(
        "lemma-volume",
        identity_check_lemma_volume(&alpha)?,
        1e-5,
    ));
    let (_, _, regular) = decompose_alpha(&alpha)?;
    checks.push(CheckEntry::flag(
        "u-regular",
        regular,
        "0 is a regular value of u on the grid",
    ));

    if let Some(axis) = dividing_axis {
        if *axis >= m.axes().len() {
            return Err(schema_err(
                "/parameters/dividing_axis",
                "axis beyond the parameter dimension",
            ));
        }
        let mesh = dividing_set(&u, &m, *axis)?;
        checks.push(CheckEntry::flag(
            "dividing-set",
            true,
            format!("{} zeros located", mesh.zero_points.len()),
        ));
        if !mesh.is_empty() {
            checks.push(CheckEntry::positivity(
                "gamma-contact",
                &gamma_contact_check(&beta, &mesh, n)?,
            ));
        }
        if sc.recipe == Recipe::Split {
            let eps = eps.unwrap_or_else(|| default_eps(&u, &m));
            let (plus, minus) = symplectic_pieces(&beta, &u, &bundle.curvature, n, eps)?;
            checks.push(CheckEntry::positivity("piece-plus", &plus));
            checks.push(CheckEntry::positivity("piece-minus", &minus));
            let s0 = contact_slice(&beta, &u, &m, *axis, 0.0)?;
            checks.push(CheckEntry::positivity(
                "w1",
                &weak_filling_w1(&s0, &bundle.curvature, n)?,
            ));
            checks.push(CheckEntry::positivity(
                "w2",
                &weak_filling_w2(&s0, &bundle.curvature, n, &[])?,
            ));
            if !s_values.is_empty() {
                for (s, outcome) in slice_contact_family(&beta, &u, &m, *axis, s_values, n) {
                    match outcome {
                        Ok(r) => checks.push(CheckEntry::positivity(format!("slice:{s}"), &r)),
                        Err(e) => checks.push(CheckEntry::failure(format!("slice:{s}"), &e)),
                    }
                }
            }
        }
    }

    for g in &sc.generators {
        let pairing = euler_pairing(&bundle, g.name())?;
        let expected = g.expected().unwrap_or_else(|| pairing.round());
        checks.push(CheckEntry::value(
            format!("euler:{}", g.name()),
            pairing,
            expected,
            INTEGRALITY_TOL,
        ));
    }

    Ok(Report::new(
        sc.name.clone(),
        sc.recipe.name(),
        checks,
        Provenance {
            resolutions: resolutions(&m),
            tolerance: opts.tol,
            resolution_scale: opts.resolution_scale,
            parameters: serde_json::json!({"eps": eps, "dividing_axis": dividing_axis}),
            wall_time_ms: t0.elapsed().as_millis(),
        },
    ))
}

fn run_euler(sc: &Scenario, opts: &GalleryOptions, t0: Instant) -> Result<Report> {
    let factors = scaled_factors(
        sc.factors.as_ref().expect("manifold required by parser"),
        opts.resolution_scale,
    );
    let m = ModelManifold::product(factors);
    let bundle = scenario_bundle(sc, &m)?;
    if sc.generators.is_empty() {
        return Err(Error::Precondition(
            "euler recipes need at least one generator cycle".into(),
        ));
    }
    let mut checks = Vec::new();
    for g in &sc.generators {
        let pairing = euler_pairing(&bundle, g.name())?;
        let expected = g.expected().unwrap_or_else(|| pairing.round());
        checks.push(CheckEntry::value(
            format!("euler:{}", g.name()),
            pairing,
            expected,
            INTEGRALITY_TOL,
        ));
        checks.push(CheckEntry::residual(
            format!("integrality:{}", g.name()),
            (pairing - pairing.round()).abs(),
            INTEGRALITY_TOL,
        ));
    }
    Ok(Report::new(
        sc.name.clone(),
        "euler",
        checks,
        Provenance {
            resolutions: resolutions(&m),
            tolerance: opts.tol,
            resolution_scale: opts.resolution_scale,
            parameters: serde_json::json!({}),
            wall_time_ms: t0.elapsed().as_millis(),
        },
    ))
}
