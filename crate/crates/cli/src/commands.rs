use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use weil_core::bundle::{transition_lift, ProjectiveLine, WeilPoint};
use weil_core::elliptic::{FormalGroupLaw, WeierstrassCurve};
use weil_core::io::{
    element_texts, texts, AlgebraFile, CurveFile, SeriesFile, SystemFile, TransitionFile, ValuesFile,
};
use weil_core::mahler::MahlerCoefficients;
use weil_core::padic::{arith, ArithOp};
use weil_core::weil::make_dual_numbers;
use weil_core::{Error, PadicContext, PadicElement, PadicNumber, PadicSeries, Valuation};

use crate::input::{context, parse_list, read_json, LoadedPoint};
use crate::{ChartOp, DiophOp, FglOp, Global, MahlerOp, PadicOp, Pair, Single};

pub enum Body {
    Text(String),
    Json(Value),
}

/// A result to print plus whether the requested check passed.
pub struct Outcome {
    body: Body,
    passed: bool,
}

impl Outcome {
    fn text(s: String) -> Self {
        Self {
            body: Body::Text(s),
            passed: true,
        }
    }

    fn json(v: Value) -> Self {
        Self::check(v, true)
    }

    fn check(v: Value, passed: bool) -> Self {
        Self {
            body: Body::Json(v),
            passed,
        }
    }

    pub fn emit(self, out: Option<&Path>) -> Result<ExitCode> {
        let mut text = match self.body {
            Body::Text(s) => s,
            Body::Json(v) => serde_json::to_string_pretty(&v)?,
        };
        text.push('\n');
        match out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(if self.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
    }
}

fn element_json(x: &PadicElement) -> Value {
    json!({ "coeffs": element_texts(x), "display": x.to_string() })
}

fn point_json(xi: &WeilPoint<PadicNumber>) -> Value {
    let rows: Vec<Value> = xi.rows().iter().map(element_json).collect();
    json!({ "coords": rows })
}

fn digits(x: &PadicNumber) -> Result<String> {
    let d = x.digit_expansion()?;
    Ok(d.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
}

pub fn padic(global: &Global, op: PadicOp) -> Result<Outcome> {
    let ctx = context(global, None, None)?;
    let binary = |x: &str, y: &str, op| -> Result<Outcome> {
        let r = arith(&ctx.parse(x)?, &ctx.parse(y)?, op)?;
        Ok(Outcome::text(format!("{} (norm {})", r.rational_string(), r.norm())))
    };
    match op {
        PadicOp::Add(Pair { x, y }) => binary(&x, &y, ArithOp::Add),
        PadicOp::Sub(Pair { x, y }) => binary(&x, &y, ArithOp::Sub),
        PadicOp::Mul(Pair { x, y }) => binary(&x, &y, ArithOp::Mul),
        PadicOp::Div(Pair { x, y }) => binary(&x, &y, ArithOp::Div),
        PadicOp::Norm(Single { x }) => Ok(Outcome::text(ctx.parse(&x)?.norm().to_string())),
        PadicOp::Digits(Single { x }) => Ok(Outcome::text(digits(&ctx.parse(&x)?)?)),
        PadicOp::Show(Single { x }) => {
            let x = ctx.parse(&x)?;
            let digits = if x.is_integral() { Some(digits(&x)?) } else { None };
            Ok(Outcome::json(json!({
                "prime": ctx.prime(),
                "precision": ctx.precision(),
                "value": x.rational_string(),
                "valuation": x.valuation(),
                "norm": x.norm().to_string(),
                "digits": digits,
            })))
        }
    }
}

pub fn algebra_check(global: &Global, path: &Path) -> Result<Outcome> {
    let file: AlgebraFile = read_json(path)?;
    let ctx = context(global, file.prime, file.precision)?;
    Ok(match file.build(&ctx) {
        Ok(algebra) => Outcome::json(json!({
            "valid": true,
            "dim": algebra.dim(),
            "nilpotency_index": algebra.nilpotency_index(),
        })),
        Err(e) => Outcome::check(json!({ "valid": false, "error": e.to_string() }), false),
    })
}

fn convergence_failure(e: &Error) -> Option<Outcome> {
    match e {
        Error::Convergence(cert) => Some(Outcome::check(
            json!({ "error": e.to_string(), "certificate": cert }),
            false,
        )),
        _ => None,
    }
}

pub fn lift(global: &Global, series: &Path, point: &Path, check_diagram: bool) -> Result<Outcome> {
    let series_file: SeriesFile = read_json(series)?;
    let point = LoadedPoint::read(point)?;
    let ctx = context(
        global,
        series_file.prime.or(point.algebra_file.prime),
        series_file.precision.or(point.algebra_file.precision),
    )?;
    let f = series_file.to_series(&ctx)?;
    let (algebra, coords) = point.build(&ctx)?;
    let xi = WeilPoint::new(&algebra, coords)?;
    let value = match f.lift_series(xi.rows()) {
        Ok(v) => v,
        Err(e) => return convergence_failure(&e).ok_or_else(|| e.into()),
    };
    let mut out = json!({ "value": element_json(&value) });
    let mut passed = true;
    if check_diagram {
        let direct = f.series_eval(&xi.project_point())?;
        let diff = (value.project().clone() - &direct).valuation();
        passed = diff.at_least(ctx.precision() as i64);
        out["diagram"] = json!({
            "projected_lift": value.project().rational_string(),
            "eval_of_projection": direct.rational_string(),
            "discrepancy_valuation": diff,
            "pass": passed,
        });
    }
    Ok(Outcome::check(out, passed))
}

pub fn mahler(global: &Global, op: MahlerOp) -> Result<Outcome> {
    let path = match &op {
        MahlerOp::Fit { samples } => samples,
        MahlerOp::Eval { coeffs, .. } | MahlerOp::Check { coeffs } => coeffs,
    };
    let file: ValuesFile = read_json(path)?;
    let ctx = context(global, file.prime, file.precision)?;
    let values = file.to_padics(&ctx)?;
    Ok(match op {
        MahlerOp::Fit { .. } => {
            let a = MahlerCoefficients::fit(&ctx, &values);
            Outcome::json(json!({ "coefficients": texts(a.coeffs()) }))
        }
        MahlerOp::Eval { x, .. } => {
            let a = MahlerCoefficients::new(&ctx, values);
            let value = a.eval(&ctx.parse(&x)?)?;
            Outcome::json(json!({ "value": value.rational_string() }))
        }
        MahlerOp::Check { .. } => {
            let report = MahlerCoefficients::new(&ctx, values).continuity_check();
            let verdict = report.verdict;
            Outcome::check(serde_json::to_value(report)?, verdict)
        }
    })
}

fn load_curve(global: &Global, path: &Path) -> Result<(PadicContext, WeierstrassCurve<PadicNumber>)> {
    let file: CurveFile = read_json(path)?;
    let ctx = context(global, file.prime, file.precision)?;
    let curve = file.to_curve(&ctx)?;
    Ok((ctx, curve))
}

fn random_curve(global: &Global, seed: u64) -> Result<(PadicContext, WeierstrassCurve<PadicNumber>)> {
    let ctx = context(global, None, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coeffs = [(); 5].map(|_| ctx.integer(rng.gen_range(-50..=50)));
        if let Ok(curve) = WeierstrassCurve::new_elliptic(&ctx, coeffs) {
            return Ok((ctx, curve));
        }
    }
}

/// `"z + w - z*w"`, lowest degree first.
fn series_display(f: &PadicSeries, names: &[&str]) -> String {
    let mut terms: Vec<_> = f.terms().collect();
    terms.sort_by_key(|(m, _)| (m.iter().sum::<u32>(), std::cmp::Reverse((*m).clone())));
    let mut out = String::new();
    for (m, c) in terms {
        let c = c.rational_string();
        let (negative, magnitude) = match c.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, c.as_str()),
        };
        let monomial: Vec<String> = m
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, x)| if *e == 1 { x.to_string() } else { format!("{x}^{e}") })
            .collect();
        let body = match (magnitude, monomial.is_empty()) {
            (_, true) => magnitude.to_string(),
            ("1", false) => monomial.join("*"),
            _ => format!("{magnitude}*{}", monomial.join("*")),
        };
        out += match (out.is_empty(), negative) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        out += &body;
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn curve_json(curve: &WeierstrassCurve<PadicNumber>) -> Value {
    let [a1, a2, a3, a4, a6] = curve.coefficients().map(|a| a.rational_string());
    json!({ "a1": a1, "a2": a2, "a3": a3, "a4": a4, "a6": a6 })
}

pub fn fgl(global: &Global, op: FglOp) -> Result<Outcome> {
    match op {
        FglOp::Build { curve, degree } => {
            let (_, curve) = load_curve(global, &curve)?;
            let fgl = FormalGroupLaw::build(&curve, degree)?;
            Ok(Outcome::json(json!({
                "curve": curve_json(&curve),
                "degree": degree,
                "law": SeriesFile::from_series(fgl.law()),
                "law_display": series_display(fgl.law(), &["z", "w"]),
                "inverse": SeriesFile::from_series(fgl.inverse_series()),
                "invariant_differential": SeriesFile::from_series(fgl.invariant_coeff()),
            })))
        }
        FglOp::Add { curve, x, y, degree } => {
            let (ctx, curve) = load_curve(global, &curve)?;
            let fgl = FormalGroupLaw::build(&curve, degree)?;
            let dual = make_dual_numbers(&ctx)?;
            let jet = |s: &str| -> Result<PadicElement> {
                let c = parse_list(&ctx, s)?;
                if c.len() != 2 {
                    bail!("a dual-number jet needs two components \"z0,z1\", got {s:?}");
                }
                Ok(PadicElement::new(&dual, c)?)
            };
            let sum = fgl.jet_group_add(&jet(&x)?, &jet(&y)?)?;
            Ok(Outcome::json(json!({ "degree": degree, "sum": element_json(&sum) })))
        }
        FglOp::Verify { curve, seed, degree } => {
            let (_, curve) = match (curve, seed) {
                (Some(path), _) => load_curve(global, &path)?,
                (None, Some(seed)) => random_curve(global, seed)?,
                (None, None) => bail!("give a curve file or --seed for a random curve"),
            };
            let report = FormalGroupLaw::build(&curve, degree)?.verify_axioms()?;
            let passed = report.passed();
            Ok(Outcome::check(
                json!({
                    "curve": curve_json(&curve),
                    "degree": degree,
                    "axioms": if passed { "pass" } else { "fail" },
                    "discrepancy_valuations": report,
                }),
                passed,
            ))
        }
    }
}

pub fn dioph(global: &Global, op: DiophOp) -> Result<Outcome> {
    let path = match &op {
        DiophOp::Tangent { system, .. } | DiophOp::Hensel { system, .. } | DiophOp::Points { system, .. } => system,
    };
    let file: SystemFile = read_json(path)?;
    let ctx = context(global, file.prime, file.precision)?;
    let system = file.to_system(&ctx)?;
    match op {
        DiophOp::Tangent { at, .. } => {
            let t = system.tangent_space(&parse_list(&ctx, &at)?)?;
            let kernel: Vec<_> = t.kernel_basis.iter().map(|v| texts(v)).collect();
            Ok(Outcome::json(json!({
                "base": texts(&t.base),
                "kernel": kernel,
                "rank": t.rank,
                "min_pivot_valuation": t.min_pivot_valuation,
                "residual_valuations": t.residual_valuations,
            })))
        }
        DiophOp::Hensel { seed, .. } => {
            let result = match system.hensel_lift(&parse_list(&ctx, &seed)?) {
                Ok(r) => r,
                Err(e @ Error::NoConvergence(_)) => {
                    return Ok(Outcome::check(json!({ "error": e.to_string() }), false))
                }
                Err(e) => return Err(e.into()),
            };
            let digits: Vec<_> = result.root.iter().map(digits).collect::<Result<_>>()?;
            Ok(Outcome::json(json!({
                "root": texts(&result.root),
                "digits": digits,
                "iterations": result.iterations(),
                "residual_valuations": result.residual_valuations,
            })))
        }
        DiophOp::Points { at, vector, .. } => {
            let base = parse_list(&ctx, &at)?;
            let dual = make_dual_numbers(&ctx)?;
            let points = system.infinitesimal_points(&base, &dual)?;
            let vectors = match vector {
                Some(v) => vec![parse_list(&ctx, &v)?],
                None => points.kernel_basis().to_vec(),
            };
            let mut passed = true;
            let checks = vectors
                .iter()
                .map(|v| {
                    let check = points.verify(v)?;
                    passed &= check.passed;
                    Ok(json!({ "vector": texts(v), "check": check }))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::check(
                json!({ "base": texts(&base), "verdict": if passed { "pass" } else { "fail" }, "points": checks }),
                passed,
            ))
        }
    }
}

pub fn chart(global: &Global, op: ChartOp) -> Result<Outcome> {
    let ChartOp::Transit {
        transition,
        point,
        cocycle,
        samples,
        seed,
    } = op;
    if cocycle {
        return cocycle_suite(global, samples, seed);
    }
    let (transition, point) = transition
        .zip(point)
        .ok_or_else(|| anyhow!("chart transit needs a transition file and a point file"))?;
    let file: TransitionFile = read_json(&transition)?;
    let point = LoadedPoint::read(&point)?;
    let ctx = context(
        global,
        file.prime.or(point.algebra_file.prime),
        file.precision.or(point.algebra_file.precision),
    )?;
    let t = file.to_transition(&ctx)?;
    let (algebra, coords) = point.build(&ctx)?;
    let xi = WeilPoint::new(&algebra, coords)?;
    match transition_lift(&t, &xi) {
        Ok(image) => Ok(Outcome::json(point_json(&image))),
        Err(e) => convergence_failure(&e).ok_or_else(|| e.into()),
    }
}

fn cocycle_suite(global: &Global, samples: usize, seed: u64) -> Result<Outcome> {
    let ctx = PadicContext::new(
        global.prime.unwrap_or(5),
        global.precision.unwrap_or(crate::input::DEFAULT_PRECISION),
    )?;
    let p = ctx.prime();
    if p == 2 {
        bail!("the cocycle check needs units y0 != 0, 1 mod p, so p must be odd");
    }
    let dual = make_dual_numbers(&ctx)?;
    let line = ProjectiveLine::new(&ctx);
    let tolerance = ctx.precision() as i64 - 4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Valuation::Infinite;
    let mut failures = 0;
    for _ in 0..samples {
        // residue in 2..p keeps y0 a unit away from 1
        let residue = rng.gen_range(2..p) as i64;
        let y0 = ctx.integer(residue) + ctx.integer(p as i64) * &ctx.integer(rng.gen_range(-1_000_000..1_000_000));
        let y1 = ctx.integer(rng.gen_range(-1_000_000..1_000_000));
        let xi = WeilPoint::new(&dual, vec![vec![y0, y1]])?;
        let d = line.cocycle(&xi)?.discrepancy;
        worst = worst.min(d);
        failures += !d.at_least(tolerance) as usize;
    }
    let passed = failures == 0;
    Ok(Outcome::check(
        json!({
            "prime": p,
            "precision": ctx.precision(),
            "samples": samples,
            "tolerance_valuation": tolerance,
            "worst_discrepancy_valuation": worst,
            "failures": failures,
            "verdict": if passed { "pass" } else { "fail" },
        }),
        passed,
    ))
}
