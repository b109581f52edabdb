//! Thin wrappers printing module results.

use crate::cache::Key;
use crate::output::{Output, Table};
use crate::{parse, Ctx, Failure};
use clap::Subcommand;
use geocycle::cycles::{cycle_merom, pv_cycle, trace_cycle, CycleResult, MeromConfig};
use geocycle::cycles::merom::{f_class_eval, f_eval};
use geocycle::lattice::split;
use geocycle::maass::{solve_mock, MockConfig, MockPart, MockPartText};
use geocycle::numerics::complex::{fmt_real, ComplexText};
use geocycle::numerics::intmat::ext_gcd;
use geocycle::numerics::rational::rat_to_string;
use geocycle::qforms::{act, automorph, class_reps, cycle, mat_inv, reduce_indef, reduce_posdef, QForm};
use geocycle::qseries::{plus_basis, VVQSeries, VVQSeriesText};
use geocycle::theta::{hecke_theta_series, raised_siegel_eval, siegel_eval, unary_theta_series};
use serde_json::json;
use std::collections::BTreeMap;

#[derive(Subcommand, Debug)]
pub enum FormsCmd {
    /// Reduce a form (Gauss for d < 0, cycle reduction for d > 0).
    Reduce {
        #[arg(short = 'q', long = "form", value_parser = parse::form, allow_hyphen_values = true)]
        q: QForm,
    },
    /// One representative per class of discriminant d.
    Classes {
        #[arg(short = 'd', long = "disc", allow_hyphen_values = true)]
        d: i64,
    },
    /// Fundamental automorph of an indefinite form.
    Automorph {
        #[arg(short = 'A', long = "form", value_parser = parse::form, allow_hyphen_values = true)]
        a: QForm,
    },
}

#[derive(Subcommand, Debug)]
pub enum GeodesicCmd {
    /// Endpoints, unit, automorph and normalizing matrix of S_A.
    Info {
        #[arg(short = 'A', long = "form", value_parser = parse::form, allow_hyphen_values = true)]
        a: QForm,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Sublattices I, N, M = I + N and their discriminant groups.
    Split {
        #[arg(short = 'A', long = "form", value_parser = parse::form, allow_hyphen_values = true)]
        a: QForm,
    },
}

#[derive(Subcommand, Debug)]
pub enum SeriesCmd {
    /// Hecke indefinite theta ϑ_I (default order 10).
    Hecke {
        #[arg(short = 'A', long = "form", value_parser = parse::form, allow_hyphen_values = true)]
        a: QForm,
    },
    /// Unary theta Θ_{3/2,N}, or Θ_{1/2,N} with --half (default order 10).
    Unary {
        #[arg(short = 'A', long = "form", value_parser = parse::form, allow_hyphen_values = true)]
        a: QForm,
        #[arg(long)]
        half: bool,
    },
    /// Weakly holomorphic basis of weight 3/2 - k, principal parts down to dmin (default order 10).
    PlusBasis {
        #[arg(short = 'k')]
        k: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -4)]
        dmin: i64,
    },
    /// Mock modular form with shadow D^{-1/2} Θ_{3/2,N} (default order 25).
    Mock {
        #[arg(short = 'A', long = "form", value_parser = parse::form, allow_hyphen_values = true)]
        a: QForm,
    },
}

#[derive(Subcommand, Debug)]
pub enum EvalCmd {
    /// f_{k,d}(z), or f_{k,P}(z) with --class.
    F {
        #[arg(short = 'k')]
        k: u32,
        #[arg(short = 'd', long = "disc", allow_hyphen_values = true, required_unless_present = "class")]
        d: Option<i64>,
        #[arg(long, value_parser = parse::form, allow_hyphen_values = true)]
        class: Option<QForm>,
        #[arg(short = 'z', allow_hyphen_values = true)]
        z: String,
    },
    /// Siegel theta Θ_L(τ, z), or R_0 Θ_L with --raised.
    Siegel {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(short = 'z', allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        raised: bool,
    },
    /// C_A(sum c_d f_{k,d}) for coefficients like "-3:2,-4:1".
    Cycle {
        #[arg(short = 'A', long = "form", value_parser = parse::form, allow_hyphen_values = true)]
        a: QForm,
        #[arg(short = 'k')]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Trace C_D(f_{k,P}) over the classes of discriminant D.
    Trace {
        #[arg(short = 'D', long = "disc")]
        d: i64,
        #[arg(short = 'k')]
        k: u32,
        #[arg(short = 'P', long = "class", value_parser = parse::form, allow_hyphen_values = true)]
        p: QForm,
    },
}

/// Significant decimal digits printed at precision `prec`.
pub fn digits(prec: u32) -> usize {
    ((prec as f64 * std::f64::consts::LOG10_2) as usize).saturating_sub(3).max(15)
}

/// A representative with `a > 0` of the class of an indefinite form.
pub fn positive_rep(q: &QForm) -> QForm {
    if q.a > 0 {
        return *q;
    }
    for r in 1..50i64 {
        for x in -r..=r {
            for y in -r..=r {
                if x.abs().max(y.abs()) != r || ext_gcd(x, y).0 != 1 || q.eval(x, y) <= 0 {
                    continue;
                }
                // g^{-1} has first column (x, y), so the new leading coefficient is Q(x, y)
                let (_, s, t) = ext_gcd(x, y);
                return act(&mat_inv(&[[x, -t], [y, s]]), q);
            }
        }
    }
    unreachable!("indefinite forms represent positive values")
}

pub fn hecke_cached(ctx: &Ctx, a: &QForm, order: i64) -> Result<VVQSeries, Failure> {
    let key = Key { kind: "hecke", target: a.to_string(), order, prec: ctx.global.prec };
    let (t, _) = ctx.cache.fetch(&key, || -> Result<VVQSeriesText, Failure> {
        let sp = split(a)?;
        let geo = geocycle::qforms::geodesic(a, ctx.global.prec)?;
        Ok(hecke_theta_series(&sp, &geo, order)?.to_text())
    })?;
    VVQSeries::from_text(&t).ok_or_else(|| Failure::invalid("corrupt cached series"))
}

pub fn unary_cached(ctx: &Ctx, a: &QForm, order: i64, half: bool) -> Result<VVQSeries, Failure> {
    let key = Key { kind: if half { "unary-1/2" } else { "unary-3/2" }, target: a.to_string(), order, prec: ctx.global.prec };
    let (t, _) = ctx.cache.fetch(&key, || -> Result<VVQSeriesText, Failure> {
        let sp = split(a)?;
        Ok(unary_theta_series(&sp.n, !half, a, order)?.to_text())
    })?;
    VVQSeries::from_text(&t).ok_or_else(|| Failure::invalid("corrupt cached series"))
}

pub fn mock_cached(ctx: &Ctx, a: &QForm, order: i64) -> Result<(MockPart, MockPartText), Failure> {
    let cfg = MockConfig { order, den_bound: ctx.global.den_bound, prec: ctx.global.prec, ..Default::default() };
    let key = Key { kind: "mock", target: format!("{a}|{}", cfg.den_bound), order, prec: cfg.prec };
    let (t, _) = ctx.cache.fetch(&key, || -> Result<MockPartText, Failure> {
        let sp = split(a)?;
        Ok(solve_mock(&sp.n, a, &cfg)?.to_text())
    })?;
    let m = MockPart::from_text(&t).ok_or_else(|| Failure::invalid("corrupt cached mock part"))?;
    Ok((m, t))
}

pub fn forms(_ctx: &Ctx, c: FormsCmd) -> Result<Output, Failure> {
    match c {
        FormsCmd::Reduce { q } => {
            if q.disc() < 0 {
                let (r, g) = reduce_posdef(&q)?;
                Ok(Output::object(&json!({ "form": q, "reduced": r, "matrix": g })))
            } else {
                let (r, g) = reduce_indef(&q)?;
                let cyc: Vec<QForm> = cycle(&r).into_iter().map(|(f, _)| f).collect();
                Ok(Output::object(&json!({ "form": q, "reduced": r, "matrix": g, "cycle": cyc })))
            }
        }
        FormsCmd::Classes { d } => {
            let reps = class_reps(d)?;
            let rows = reps.iter().map(|f| f.triple().iter().map(i64::to_string).collect()).collect();
            Ok(Output::object(&reps).with_table(Table { header: vec!["a", "b", "c"], rows }))
        }
        FormsCmd::Automorph { a } => {
            let m = automorph(&a)?;
            Ok(Output::object(&json!({
                "form": a,
                "t": m.t.to_string(),
                "u": m.u.to_string(),
                "M": m.m,
                "eps": m.eps.to_text(),
            })))
        }
    }
}

pub fn geodesic(ctx: &Ctx, c: GeodesicCmd) -> Result<Output, Failure> {
    let GeodesicCmd::Info { a } = c;
    let p = ctx.global.prec;
    let g = geocycle::qforms::geodesic(&a, p)?;
    let mut v = serde_json::to_value(g.to_text(digits(p))).expect("json");
    v["log_eps"] = json!(fmt_real(&g.log_eps, digits(p)));
    Ok(Output::object(&v))
}

pub fn lattice(_ctx: &Ctx, c: LatticeCmd) -> Result<Output, Failure> {
    let LatticeCmd::Split { a } = c;
    let sp = split(&a)?;
    Ok(Output::object(&json!({
        "form": a,
        "index": sp.index,
        "L": sp.l.to_text(),
        "I": sp.i.to_text(),
        "N": sp.n.to_text(),
        "M": sp.m.to_text(),
        "components": sp.components,
        "cosets": sp.cosets,
    })))
}

fn series_table(s: &VVQSeriesText) -> Table {
    let mut rows = vec![];
    for c in &s.components {
        for t in &c.terms {
            rows.push(vec![c.gamma.to_string(), t.exp.clone(), t.coeff.clone()]);
        }
    }
    Table { header: vec!["component", "exponent", "coefficient"], rows }
}

pub fn series(ctx: &Ctx, c: SeriesCmd) -> Result<Output, Failure> {
    let p = ctx.global.prec;
    match c {
        SeriesCmd::Hecke { a } => {
            let t = hecke_cached(ctx, &a, ctx.global.order.unwrap_or(10))?.to_text();
            Ok(Output::object(&t).with_table(series_table(&t)))
        }
        SeriesCmd::Unary { a, half } => {
            let t = unary_cached(ctx, &a, ctx.global.order.unwrap_or(10), half)?.to_text();
            Ok(Output::object(&t).with_table(series_table(&t)))
        }
        SeriesCmd::PlusBasis { k, dmin } => {
            let order = ctx.global.order.unwrap_or(10);
            let key = Key { kind: "plus-basis", target: format!("k={k}|dmin={dmin}"), order, prec: p };
            let (ts, _) = ctx.cache.fetch(&key, || -> Result<Vec<VVQSeriesText>, Failure> {
                Ok(plus_basis(k, dmin, order)?.iter().map(VVQSeries::to_text).collect())
            })?;
            let mut rows = vec![];
            for (i, t) in ts.iter().enumerate() {
                for r in series_table(t).rows {
                    rows.push([vec![i.to_string()], r].concat());
                }
            }
            Ok(Output::object(&ts).with_table(Table { header: vec!["index", "component", "exponent", "coefficient"], rows }))
        }
        SeriesCmd::Mock { a } => {
            let (_, t) = mock_cached(ctx, &a, ctx.global.order.unwrap_or(25))?;
            Ok(Output::object(&t).with_table(series_table(&t.holo)))
        }
    }
}

/// JSON view of a meromorphic cycle integral.
pub fn cycle_json(r: &CycleResult, prec: u32) -> serde_json::Value {
    let dg = digits(prec);
    json!({
        "value": ComplexText::from_complex(&r.value, dg),
        "error": fmt_real(&r.error, 6),
        "recognized": r.recognized.as_ref().map(|x| rat_to_string(&x.value)),
        "ambiguous": r.recognized.as_ref().map(|x| x.ambiguous),
        "shift": r.shift,
        "experimental": r.experimental,
        "evals": r.evals,
        "poles": r.poles.iter().map(|p| json!({
            "disc": p.disc,
            "form": p.form,
            "s": ComplexText::from_complex(&p.s, 20),
            "on_cycle": p.on_cycle,
            "residue": ComplexText::from_complex(&p.residue, 20),
        })).collect::<Vec<_>>(),
    })
}

pub fn merom_config(ctx: &Ctx) -> MeromConfig {
    let mut cfg = MeromConfig { den_bound: ctx.global.den_bound, ..Default::default() };
    if let Some(t) = ctx.global.tol {
        cfg.recog_tol = t;
    }
    cfg
}

/// δ sequence for the principal-value extrapolation.
pub fn pv_deltas() -> Vec<f64> {
    (0..10).map(|i| 0.2 / f64::powi(2.0, i)).collect()
}

pub fn cycle_value(ctx: &Ctx, a: &QForm, k: u32, coeffs: &BTreeMap<i64, rug::Rational>) -> Result<CycleResult, Failure> {
    let cfg = merom_config(ctx);
    let p = ctx.global.prec;
    if ctx.global.pv {
        Ok(pv_cycle(a, k, coeffs, &pv_deltas(), &MeromConfig { finite_part: false, ..cfg }, p)?)
    } else {
        Ok(cycle_merom(a, k, coeffs, &cfg, p)?)
    }
}

pub fn eval(ctx: &Ctx, c: EvalCmd) -> Result<Output, Failure> {
    let p = ctx.global.prec;
    let dg = digits(p);
    match c {
        EvalCmd::F { k, d, class, z } => {
            let z = parse::upper(&z, p).map_err(Failure::invalid)?;
            let v = match (class, d) {
                (Some(q), _) => f_class_eval(k, &q, &z)?,
                (None, Some(d)) => f_eval(k, d, &z)?,
                (None, None) => return Err(Failure::invalid("give -d or --class")),
            };
            Ok(Output::object(&json!({
                "k": k,
                "disc": d.or(class.map(|q| q.disc())),
                "class": class,
                "z": ComplexText::from_complex(&z, dg),
                "value": ComplexText::from_complex(&v.value, dg),
                "error": fmt_real(&v.error, 6),
                "terms": v.terms,
            })))
        }
        EvalCmd::Siegel { tau, z, raised } => {
            let tau = parse::upper(&tau, p).map_err(Failure::invalid)?;
            let z = parse::upper(&z, p).map_err(Failure::invalid)?;
            let tol = ctx.global.tol.unwrap_or(1e-30);
            let v = if raised { raised_siegel_eval(&tau, &z, tol)? } else { siegel_eval(&tau, &z, tol)? };
            let comps: Vec<ComplexText> = v.comps.iter().map(|c| ComplexText::from_complex(c, dg)).collect();
            let rows = comps.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.0.clone(), c.1.clone()]).collect();
            Ok(Output::object(&json!({
                "kernel": if raised { "raised" } else { "plain" },
                "tau": ComplexText::from_complex(&tau, dg),
                "z": ComplexText::from_complex(&z, dg),
                "components": comps,
                "tail": fmt_real(&v.tail, 6),
                "terms": v.terms,
            }))
            .with_table(Table { header: vec!["component", "re", "im"], rows }))
        }
        EvalCmd::Cycle { a, k, coeffs } => {
            let coeffs = parse::coeffs(&coeffs).map_err(Failure::invalid)?;
            let r = cycle_value(ctx, &a, k, &coeffs)?;
            let mut v = cycle_json(&r, p);
            v["form"] = json!(a);
            v["k"] = json!(k);
            v["coeffs"] = json!(coeffs.iter().map(|(d, c)| (d.to_string(), rat_to_string(c))).collect::<BTreeMap<_, _>>());
            Ok(Output::object(&v))
        }
        EvalCmd::Trace { d, k, p: cls } => {
            let r = trace_cycle(d, k, &cls, &merom_config(ctx), p)?;
            let mut v = cycle_json(&r, p);
            v["disc"] = json!(d);
            v["k"] = json!(k);
            v["class"] = json!(cls);
            v["forms"] = json!(class_reps(d)?);
            Ok(Output::object(&v))
        }
    }
}
