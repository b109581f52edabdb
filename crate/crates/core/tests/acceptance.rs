//! Acceptance criteria AC-1 .. AC-7, one line each.

use geocycle::cycles::closed::{closed_form, even_input, input_coeffs, odd_input};
use geocycle::cycles::{cycle_merom, cycle_siegel, cycle_theta_i_star, siegel_cycle_rhs, trace_cycle, MeromConfig, QuadConfig};
use geocycle::lattice::{s_residual, split};
use geocycle::maass::{solve_mock, xi_numeric, MockConfig, MockPart};
use geocycle::numerics::complex::Complex;
use geocycle::qforms::{geodesic, QForm};
use geocycle::theta::{hecke_theta_window, unary_theta_series};
use rug::{Float, Rational};
use std::collections::BTreeMap;
use std::time::Instant;

const P: u32 = 256;

struct Outcome {
    pass: bool,
    detail: String,
}

fn taus() -> Vec<(&'static str, Complex)> {
    vec![
        ("i", Complex::from_f64(P, 0.0, 1.0)),
        ("1/5+i/2", Complex::new(Float::with_val(P, 1) / 5u32, Float::with_val(P, 1) / 2u32)),
        ("-1/3+2i", Complex::new(-Float::with_val(P, 1) / 3u32, Float::with_val(P, 2))),
    ]
}

fn forms() -> Vec<QForm> {
    vec![QForm::new(1, 1, -1), QForm::new(1, 2, -1), QForm::new(1, 3, -1)]
}

/// For D = 5, 8, 13 the fundamental unit has norm -1 and the Hecke theta vanishes, so these
/// extra discriminants (unit of norm +1) keep the theta checks nontrivial.
fn extra_forms() -> Vec<QForm> {
    vec![QForm::new(1, 2, -2), QForm::new(1, 3, -3)]
}

fn ac1() -> Outcome {
    let cfg = QuadConfig { tol: 1e-22, ..Default::default() };
    let mut worst = 0f64;
    let mut largest = 0f64;
    let mut cells = 0;
    for a in forms().into_iter().chain(extra_forms()) {
        let sp = split(&a).unwrap();
        let geo = geodesic(&a, P).unwrap();
        for (_, tau) in taus() {
            let lhs = cycle_siegel(&a, &tau, 1e-30, &cfg).unwrap();
            let rhs = siegel_cycle_rhs(&sp, &geo, &tau, 40).unwrap();
            for (x, y) in lhs.values.iter().zip(&rhs) {
                worst = worst.max((x - y).abs().to_f64());
                largest = largest.max(y.abs().to_f64());
            }
            cells += 1;
        }
    }
    Outcome {
        pass: worst < 1e-20,
        detail: format!("max |cycle_siegel - RHS| = {worst:.3e} over {cells} cells, max |RHS| = {largest:.3e} (bound 1e-20)"),
    }
}

fn ac2() -> Outcome {
    let cfg = QuadConfig { tol: 1e-22, ..Default::default() };
    let mut worst = 0f64;
    let mut cells = 0;
    for a in forms().into_iter().chain(extra_forms()) {
        for (_, tau) in taus() {
            let r = cycle_theta_i_star(&a, &tau, 1e-30, &cfg).unwrap();
            for x in &r.values {
                worst = worst.max(x.abs().to_f64());
            }
            cells += 1;
        }
    }
    Outcome { pass: worst < 1e-18, detail: format!("max |C_A(Theta*_I)| = {worst:.3e} over {cells} cells (bound 1e-18)") }
}

fn ac3(mocks: &BTreeMap<i64, (QForm, MockPart)>) -> Outcome {
    let cfg = MeromConfig::default();
    let mut pass = true;
    let mut parts = vec![];
    for k in [3u32, 5] {
        let g = odd_input(k, 8).unwrap();
        let coeffs = input_coeffs(&g);
        for (d, (a, mock)) in mocks {
            let q = cycle_merom(a, k, &coeffs, &cfg, P).unwrap();
            let c = closed_form(a, k, &g, mock).unwrap();
            let cv = Float::with_val(P, &c.value);
            let diff = Float::with_val(P, &q.value.re - &cv).abs().to_f64().max(q.value.im.to_f64().abs());
            let rel = diff / cv.to_f64().abs().max(1.0);
            let rec = q.recognized.as_ref().filter(|r| !r.ambiguous && *r.value.denom() <= 1_000_000u32);
            let ok = rec.map(|r| r.value == c.value).unwrap_or(false) && rel <= 1e-10;
            pass &= ok;
            parts.push(format!(
                "k={k} D={d}: quad {} closed {} rel {rel:.1e}",
                rec.map(|r| r.value.to_string()).unwrap_or_else(|| "unrecognized".into()),
                c.value
            ));
        }
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn ac4(mocks: &BTreeMap<i64, (QForm, MockPart)>) -> Outcome {
    let mut pass = true;
    let mut parts = vec![];
    let bound = Float::with_val(P, Float::i_exp(1, -64));
    for d in [5i64, 8] {
        let (a, m) = &mocks[&d];
        let sp = split(a).unwrap();
        let tau = Complex::from_f64(P, 0.0, 1.0);
        let h = Float::with_val(P, Float::i_exp(1, -64));
        let xi = xi_numeric(&m.holo, &m.shadow, d, &tau, &h).unwrap();
        let sh = unary_theta_series(&sp.n, true, a, 40).unwrap().eval(&tau);
        let sd = Float::with_val(P, d).sqrt();
        let xi_err = xi
            .iter()
            .zip(&sh)
            .map(|(x, y)| (x - &y.scale(&Float::with_val(P, sd.recip_ref()))).abs().to_f64())
            .fold(0f64, f64::max);
        // the float solve is only reported; the rational coefficients are what gets certified
        let mut worst = 0f64;
        for (g, e, x) in &m.floats {
            if *e < m.holo.order {
                let exact = Float::with_val(P, &m.holo.coeff(*g, e));
                worst = worst.max(Float::with_val(P, x - &exact).abs().to_f64());
            }
        }
        let ok = m.residual < bound && m.exact_residual < bound && xi_err < 1e-15;
        pass &= ok;
        parts.push(format!(
            "D={d}: residual {:.1e} exact {:.1e} xi {:.1e} (bound 2^-64); |float-exact| {:.1e} (info)",
            m.residual.to_f64(),
            m.exact_residual.to_f64(),
            xi_err,
            worst
        ));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn ac6() -> Outcome {
    let mut pass = true;
    let mut parts = vec![];
    for a in forms().into_iter().chain(extra_forms()) {
        let sp = split(&a).unwrap();
        let geo = geodesic(&a, P).unwrap();
        let w0 = hecke_theta_window(&sp, &geo, 16, 0).unwrap();
        let w1 = hecke_theta_window(&sp, &geo, 16, 1).unwrap();
        let same = w0.comps == w1.comps;
        let tau = Complex::from_f64(P, 0.0, 1.0);
        let stau = Complex::from_f64(P, -1.0, 0.0).div(&tau);
        let s = sp.i.group.weil_s(P, false);
        let v = w0.eval(&tau);
        let size = v.iter().map(|x| x.abs().to_f64()).fold(0f64, f64::max);
        let r = s_residual(&v, &w0.eval(&stau), &tau, 2, &s).to_f64();
        pass &= same && r < 1e-15;
        parts.push(format!(
            "D={}: windows {} S-residual {r:.1e} (|theta(i)| {size:.1e})",
            a.disc(),
            if same { "equal" } else { "DIFFER" }
        ));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn ac7() -> Outcome {
    let principal: BTreeMap<i64, Rational> = [(5, Rational::from(1)), (8, Rational::from(1))].into_iter().collect();
    let g = match even_input(&principal, 4) {
        Ok(g) => g,
        Err(e) => return Outcome { pass: false, detail: format!("no weight -1/2 input: {e}") },
    };
    let p = QForm::new(1, 0, 1);
    let cfg = MeromConfig::default();
    let mut total = Complex::zero(P);
    let mut err = 0f64;
    let mut parts = vec![];
    for (dneg, c) in input_coeffs(&g) {
        let d = -dneg;
        if geocycle::qforms::is_square(d) {
            if c != 0 {
                return Outcome { pass: false, detail: format!("square coefficient a_g(-{d}) = {c}") };
            }
            continue;
        }
        let t = trace_cycle(d, 2, &p, &cfg, P).unwrap();
        total += &t.value.scale(&Float::with_val(P, &c));
        err += t.error.to_f64() * c.to_f64().abs();
        parts.push(format!("a_g(-{d}) = {c}, C_{d} = {:.6}", t.value.re.to_f64()));
    }
    let tol = Float::with_val(P, 1e-12 * total.abs().to_f64() + err);
    let rec = geocycle::numerics::rational::rational_reconstruct(&total.re, 1_000_000, &tol);
    let pass = rec.as_ref().map(|r| !r.ambiguous).unwrap_or(false) && total.im.to_f64().abs() < tol.to_f64();
    parts.push(format!("sum = {}", rec.map(|r| r.value.to_string()).unwrap_or_else(|| "unrecognized".into())));
    Outcome { pass, detail: parts.join("; ") }
}

fn main() {
    // the standard test-harness flags are accepted and ignored
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let start = Instant::now();
    let mut mocks = BTreeMap::new();
    for a in [QForm::new(1, 1, -1), QForm::new(1, 2, -1), QForm::new(1, 2, -2)] {
        let sp = split(&a).unwrap();
        mocks.insert(a.disc(), (a, solve_mock(&sp.n, &a, &MockConfig::default()).unwrap()));
    }
    let ac3_mocks: BTreeMap<i64, (QForm, MockPart)> = mocks.iter().map(|(d, v)| (*d, v.clone())).collect();
    let results: Vec<(&str, bool, Outcome)> = vec![
        ("AC-1", true, ac1()),
        ("AC-2", true, ac2()),
        ("AC-3", true, ac3(&ac3_mocks)),
        ("AC-4", true, ac4(&mocks)),
        ("AC-5", true, Outcome { pass: property_suite_passed(), detail: "invariance suite: tests/properties.rs (100 seed-pinned cases each)".into() }),
        ("AC-6", true, ac6()),
        ("AC-7", false, ac7()),
    ];
    let mut failed = false;
    for (name, gating, o) in &results {
        let tag = match (o.pass, gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (report only)",
        };
        println!("{name} {tag}: {}", o.detail);
        failed |= !o.pass && *gating;
    }
    println!("acceptance finished in {:.0} s", start.elapsed().as_secs_f64());
    if failed {
        std::process::exit(1);
    }
}

/// Runs the property-test target and reports whether it passed.
fn property_suite_passed() -> bool {
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().unwrap();
    let Ok(entries) = std::fs::read_dir(dir) else { return false };
    let mut candidates: Vec<_> = entries
        .flatten()
        .map(|e| e.path())
        .filter(|p| {
            let name = p.file_name().unwrap().to_string_lossy().to_string();
            name.starts_with("properties-") && !name.contains('.')
        })
        .collect();
    candidates.sort_by_key(|p| std::fs::metadata(p).and_then(|m| m.modified()).ok());
    match candidates.last() {
        Some(p) => std::process::Command::new(p).arg("--quiet").output().map(|o| o.status.success()).unwrap_or(false),
        None => false,
    }
}
