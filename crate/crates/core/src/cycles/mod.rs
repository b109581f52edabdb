//! Cycle integrals along closed geodesics: quadrature, the Siegel theta cycle
//! identity, meromorphic cycle integrals and their closed form.

pub mod closed;
pub mod merom;

use crate::error::{Error, Result};
use crate::lattice::{split, up_map, Splitting};
use crate::numerics::complex::{pi, Complex};
use crate::numerics::linalg::{lstsq, Matrix};
use crate::numerics::rational::{binom, rational_reconstruct, Reconstruction};
use crate::numerics::special::GaussLegendre;
use crate::qforms::{class_reps, cm_point, geodesic, is_square, mobius, reduce_posdef, GeodesicClass, QForm};
use merom::MeromForm;
use rug::ops::Pow;
use rug::Rational;
use std::collections::BTreeMap;
use crate::qseries::VVQSeries;
use crate::theta::{hecke_theta_series, raised_siegel_eval, theta_i_star_eval, unary_theta_series};
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

/// Quadrature settings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadConfig {
    pub nodes: usize,
    pub max_panels: usize,
    /// Absolute target for the doubling difference.
    pub tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { nodes: 64, max_panels: 256, tol: 1e-25 }
    }
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub values: Vec<Complex>,
    pub error: Float,
    pub panels: usize,
    pub evals: usize,
}

fn composite<F>(a: &Float, b: &Float, panels: usize, gl: &GaussLegendre, f: &F) -> Result<Vec<Complex>>
where
    F: Fn(&Float) -> Result<Vec<Complex>> + Sync,
{
    let p = a.prec();
    let h = Float::with_val(p, b - a) / panels as u32;
    let mut pts = Vec::with_capacity(panels * gl.len());
    for k in 0..panels {
        let lo = Float::with_val(p, &h * k as u32) + a;
        let hi = Float::with_val(p, &lo + &h);
        pts.extend(gl.mapped(&lo, &hi));
    }
    let vals: Vec<Result<Vec<Complex>>> = pts.par_iter().map(|(t, _)| f(t)).collect();
    let mut acc: Option<Vec<Complex>> = None;
    for ((_, w), v) in pts.iter().zip(vals) {
        let v = v?;
        let acc = acc.get_or_insert_with(|| vec![Complex::zero(p); v.len()]);
        for (s, x) in acc.iter_mut().zip(&v) {
            *s += &x.scale(w);
        }
    }
    Ok(acc.unwrap_or_default())
}

/// `∫_a^b f(t) dt` by composite Gauss-Legendre, doubling panels until two
/// successive sums agree to `cfg.tol` in every component.
pub fn integrate<F>(a: &Float, b: &Float, f: &F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(&Float) -> Result<Vec<Complex>> + Sync,
{
    let p = a.prec();
    let gl = GaussLegendre::new(cfg.nodes, p);
    let mut panels = 1;
    let mut prev = composite(a, b, panels, &gl, f)?;
    let mut evals = gl.len();
    loop {
        panels *= 2;
        let cur = composite(a, b, panels, &gl, f)?;
        evals += panels * gl.len();
        let mut err = Float::new(p);
        for (x, y) in cur.iter().zip(&prev) {
            let d = (x - y).abs();
            if d > err {
                err = d;
            }
        }
        if err.to_f64() <= cfg.tol {
            return Ok(QuadResult { values: cur, error: err, panels, evals });
        }
        if panels >= cfg.max_panels {
            return Err(Error::Quadrature(format!("no convergence with {panels} panels, difference {:e}", err.to_f64())));
        }
        prev = cur;
    }
}

/// `C_A(F) = ∫ F(z) dz` over one period, oriented as `t` runs from `ε^2` down to 1.
/// `f(z, dz/ds)` returns the integrand already multiplied by `dz/ds`.
pub fn cycle_integral<F>(geo: &GeodesicClass, f: &F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(&Complex, &Complex) -> Result<Vec<Complex>> + Sync,
{
    let p = geo.prec();
    let hi = geo.log_eps.clone();
    let lo = Float::with_val(p, -&hi);
    let g = |s: &Float| {
        let (z, dz) = geo.point(&Complex::from_real(s.clone()));
        f(&z, &dz)
    };
    let mut r = integrate(&lo, &hi, &g, cfg)?;
    for v in r.values.iter_mut() {
        *v = -v.clone();
    }
    Ok(r)
}

fn scale_all(v: Vec<Complex>, s: &Complex) -> Vec<Complex> {
    v.into_iter().map(|x| &x * s).collect()
}

/// `C_A(R_0 Θ_L(τ, ·))` componentwise over `L'/L`.
pub fn cycle_siegel(a: &QForm, tau: &Complex, theta_tol: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    let geo = geodesic(a, tau.prec())?;
    cycle_integral(&geo, &|z, dz| Ok(scale_all(raised_siegel_eval(tau, z, theta_tol)?.comps, dz)), cfg)
}

/// `C_A(Θ*_I(τ, ·))` componentwise over `I'/I`.
pub fn cycle_theta_i_star(a: &QForm, tau: &Complex, theta_tol: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    let geo = geodesic(a, tau.prec())?;
    let sp = split(a)?;
    cycle_integral(&geo, &|z, dz| Ok(scale_all(theta_i_star_eval(&sp, tau, z, theta_tol)?.comps, dz)), cfg)
}

/// `-(4π/√D) (ϑ_I ⊗ conj(Θ_{3/2,N}) v^{3/2})^L (τ)` from the exact expansions.
pub fn siegel_cycle_rhs(sp: &Splitting, geo: &GeodesicClass, tau: &Complex, order: i64) -> Result<Vec<Complex>> {
    let hecke = hecke_theta_series(sp, geo, order)?;
    let unary = unary_theta_series(&sp.n, true, &sp.form, order)?;
    Ok(siegel_cycle_rhs_from(sp, &hecke, &unary, tau))
}

/// As [`siegel_cycle_rhs`], from precomputed `ϑ_I` and `Θ_{3/2,N}`.
pub fn siegel_cycle_rhs_from(sp: &Splitting, hecke: &VVQSeries, unary: &VVQSeries, tau: &Complex) -> Vec<Complex> {
    let p = tau.prec();
    let hecke = hecke.eval(tau);
    let unary = unary.eval(tau);
    let v = &tau.im;
    let v32 = Float::with_val(p, v.sqrt_ref()) * v;
    let d = Float::with_val(p, sp.form.disc());
    let pref = -(Float::with_val(p, pi(p) * 4u32) / d.sqrt()) * v32;
    let mut tensor = vec![Complex::zero(p); sp.m.group.order()];
    for (k, &(ci, cn)) in sp.components.iter().enumerate() {
        tensor[k] = (&hecke[ci] * &unary[cn].conj()).scale(&pref);
    }
    up_map(&tensor, &sp.l, &sp.m, Complex::zero(p))
}

/// A pole of the cycle integrand near the integration contour.
#[derive(Clone, Debug)]
pub struct PoleReport {
    pub disc: i64,
    pub form: QForm,
    /// Parameter `s = log t` of the pole (complex; real when on the cycle).
    pub s: Complex,
    pub on_cycle: bool,
    /// Residue of the integrand form `F(z) A(z,1)^{k-1} dz` at the pole.
    pub residue: Complex,
}

/// Result of a meromorphic cycle integral.
#[derive(Clone, Debug)]
pub struct CycleResult {
    pub value: Complex,
    pub error: Float,
    pub poles: Vec<PoleReport>,
    /// Imaginary shift of the integration line in `s`.
    pub shift: f64,
    pub recognized: Option<Reconstruction>,
    pub closed_form: Option<Rational>,
    pub evals: usize,
    pub experimental: bool,
}

/// Settings for meromorphic cycle integrals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeromConfig {
    pub quad: QuadConfig,
    pub den_bound: u64,
    /// Relative tolerance for rational recognition.
    pub recog_tol: f64,
    /// Use the finite part when poles lie on the cycle; otherwise report an error.
    pub finite_part: bool,
    /// Fixed imaginary shift of the contour; chosen automatically when absent.
    pub shift: Option<f64>,
}

impl Default for MeromConfig {
    fn default() -> Self {
        MeromConfig { quad: QuadConfig { tol: 1e-30, ..Default::default() }, den_bound: 1_000_000, recog_tol: 1e-12, finite_part: true, shift: None }
    }
}

/// `F = sum_d c_d f_{k,d}` as a pointwise evaluator.
pub struct Combination {
    pub k: u32,
    pub terms: Vec<(Rational, MeromForm)>,
}

impl Combination {
    pub fn new(k: u32, coeffs: &BTreeMap<i64, Rational>, prec: u32) -> Result<Self> {
        let mut terms = vec![];
        for (d, c) in coeffs {
            if *c != 0 {
                terms.push((c.clone(), MeromForm::for_disc(k, *d, prec)?));
            }
        }
        Ok(Combination { k, terms })
    }

    pub fn for_class(k: u32, p: &QForm, prec: u32) -> Result<Self> {
        Ok(Combination { k, terms: vec![(Rational::from(1), MeromForm::for_class(k, p, prec)?)] })
    }

    pub fn eval(&self, z: &Complex) -> Result<Complex> {
        let mut acc = Complex::zero(z.prec());
        for (c, f) in &self.terms {
            acc += &f.eval(z)?.scale(&Float::with_val(z.prec(), c));
        }
        Ok(acc)
    }

    /// `(disc, reduced pole classes, coefficient)` for each term.
    fn pole_sources(&self) -> Vec<(i64, Vec<QForm>, Rational)> {
        self.terms.iter().map(|(c, f)| (f.disc, f.pole_forms(), c.clone())).collect()
    }
}

fn f64_point(geo: &GeodesicClass, s: (f64, f64)) -> (f64, f64) {
    let (z, _) = geo.point(&Complex::from_f64(64, s.0, s.1));
    z.to_f64()
}

/// Poles of `F` with `|Im s| <= band` over one period, with their residues.
pub fn scan_poles(geo: &GeodesicClass, comb: &Combination, band: f64) -> Result<Vec<PoleReport>> {
    let p = geo.prec();
    let a = geo.form;
    let l = geo.log_eps.to_f64();
    let (mut x0, mut x1, mut ymin) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
    let n = 80;
    for i in 0..=n {
        for j in 0..=n {
            let s = (-l + 2.0 * l * i as f64 / n as f64, -band + 2.0 * band * j as f64 / n as f64);
            let (x, y) = f64_point(geo, s);
            x0 = x0.min(x);
            x1 = x1.max(x);
            ymin = ymin.min(y);
        }
    }
    let pad = 0.1 * (x1 - x0) + 0.05;
    let ymin = 0.8 * ymin;
    let sc = &geo.sigma;
    // σ^{-1} = [[δ, -β], [-γ, α]]
    let sinv: crate::qforms::RMat2 = [
        [sc[1][1].clone(), Float::with_val(p, -&sc[0][1])],
        [Float::with_val(p, -&sc[1][0]), sc[0][0].clone()],
    ];
    let period = Float::with_val(p, &geo.log_eps * 2u32);
    let half_pi = Float::with_val(p, pi(p) / 2u32);
    let mut out = vec![];
    for (d, classes, coef) in comb.pole_sources() {
        let md = (-d) as f64;
        let amax = (md.sqrt() / (2.0 * ymin)).floor() as i64;
        for qa in 1..=amax.max(1) {
            let blo = (-2.0 * qa as f64 * (x1 + pad)).floor() as i64;
            let bhi = (-2.0 * qa as f64 * (x0 - pad)).ceil() as i64;
            for qb in blo..=bhi {
                let num = qb * qb - d;
                if num % (4 * qa) != 0 {
                    continue;
                }
                let q = QForm::new(qa, qb, num / (4 * qa));
                if classes.len() < class_reps(d)?.len() && !classes.contains(&reduce_posdef(&q)?.0) {
                    continue;
                }
                let z0 = cm_point(&q, p)?;
                let w0 = mobius(&sinv, &z0);
                let mut s0 = w0.ln();
                s0.im -= &half_pi;
                if s0.im.to_f64().abs() > band {
                    continue;
                }
                // shift into [-L, L)
                let k = Float::with_val(p, Float::with_val(p, &s0.re + &geo.log_eps) / &period).floor();
                s0.re -= Float::with_val(p, &k * &period);
                let on = 2 * a.a * q.c - a.b * q.b + 2 * a.c * q.a == 0;
                if on {
                    s0.im = Float::new(p);
                }
                let res = residue_at(&q, &a, comb.k, &z0).scale(&Float::with_val(p, &coef));
                out.push(PoleReport { disc: d, form: q, s: s0, on_cycle: on, residue: res });
            }
        }
    }
    // translates under the automorph land on the same parameter modulo the period
    let close = Float::with_val(p, 2f64.powi(-(p as i32) / 2));
    for pole in out.iter_mut() {
        if Float::with_val(p, &geo.log_eps - &pole.s.re) < close {
            pole.s.re -= &period;
        }
    }
    out.sort_by(|x, y| x.s.re.partial_cmp(&y.s.re).unwrap());
    out.dedup_by(|x, y| {
        x.disc == y.disc && Float::with_val(p, &x.s.re - &y.s.re).abs() < close && Float::with_val(p, &x.s.im - &y.s.im).abs() < close
    });
    Ok(out)
}

/// Residue of `C Q(z,1)^{-k} A(z,1)^{k-1}` at the root `z0` of `Q`, `C = |d|^{k-1/2}/π`.
fn residue_at(q: &QForm, a: &QForm, k: u32, z0: &Complex) -> Complex {
    let p = z0.prec();
    let n = k as usize;
    let two_iy = Complex::new(Float::new(p), Float::with_val(p, &z0.im * 2u32));
    // (t + 2iy)^{-k} = sum binom(-k, m) (2iy)^{-k-m} t^m
    let first: Vec<Complex> = (0..n)
        .map(|m| {
            let b = binom(&Rational::from(-(k as i64)), m as u32);
            two_iy.powi(-(k as i64) - m as i64).scale(&Float::with_val(p, &b))
        })
        .collect();
    let qa0 = a.eval_z(z0);
    let qa1 = &z0.scale(&Float::with_val(p, 2 * a.a)) + &Complex::from_f64(p, a.b as f64, 0.0);
    let lin = vec![qa0, qa1, Complex::from_f64(p, a.a as f64, 0.0)];
    let mut pw = vec![Complex::one(p)];
    for _ in 0..k - 1 {
        let mut nxt = vec![Complex::zero(p); pw.len() + 2];
        for (i, x) in pw.iter().enumerate() {
            for (j, y) in lin.iter().enumerate() {
                nxt[i + j] += &(x * y);
            }
        }
        pw = nxt;
    }
    let mut c = Complex::zero(p);
    for m in 0..n {
        let j = n - 1 - m;
        if j < pw.len() {
            c += &(&first[m] * &pw[j]);
        }
    }
    let d = q.disc();
    let cst = Float::with_val(p, -d).pow(Float::with_val(p, k as f64 - 0.5)) / pi(p) / Float::with_val(p, q.a).pow(k);
    c.scale(&cst)
}

fn choose_shift(poles: &[PoleReport], max_shift: f64) -> f64 {
    let dist = |eta: f64| poles.iter().map(|p| (p.s.im.to_f64() - eta).abs()).fold(f64::INFINITY, f64::min);
    if !poles.iter().any(|p| p.on_cycle) && dist(0.0) >= 0.1 {
        return 0.0;
    }
    let mut best = (0.0, -1.0);
    for i in -60..=60 {
        let eta = max_shift * i as f64 / 60.0;
        if i == 0 && poles.iter().any(|p| p.on_cycle) {
            continue;
        }
        let d = dist(eta) - 1e-3 * eta.abs();
        if d > best.1 {
            best = (eta, d);
        }
    }
    best.0
}

/// Cycle integral of `F(z) A(z,1)^{k-1}` over one period; poles on the cycle are
/// handled by the finite part (average of the contours passing on either side).
pub fn cycle_of(a: &QForm, comb: &Combination, cfg: &MeromConfig, prec: u32) -> Result<CycleResult> {
    let geo = geodesic(a, prec)?;
    let k = comb.k;
    let poles = scan_poles(&geo, comb, 0.5)?;
    let on: Vec<&PoleReport> = poles.iter().filter(|p| p.on_cycle).collect();
    if !on.is_empty() && !cfg.finite_part {
        let list: Vec<String> = on.iter().map(|p| format!("{} (d = {})", p.form, p.disc)).collect();
        return Err(Error::PoleOnCycle(list.join(", ")));
    }
    let eta = cfg.shift.unwrap_or_else(|| choose_shift(&poles, 0.3));
    let p = prec;
    let etaf = Float::with_val(p, eta);
    let integrand = |s: &Float| -> Result<Vec<Complex>> {
        let (z, dz) = geo.point(&Complex::new(s.clone(), etaf.clone()));
        let v = &(&comb.eval(&z)? * &a.eval_z(&z).powi(k as i64 - 1)) * &dz;
        Ok(vec![v])
    };
    // absolute tolerance from the integrand scale
    let l = geo.log_eps.to_f64();
    let mut scale: f64 = 1e-300;
    for i in 0..16 {
        let s = Float::with_val(p, -l + 2.0 * l * (i as f64 + 0.5) / 16.0);
        scale = scale.max(integrand(&s)?[0].abs().to_f64());
    }
    let qcfg = QuadConfig { tol: cfg.quad.tol * scale * 2.0 * l, ..cfg.quad.clone() };
    let hi = geo.log_eps.clone();
    let lo = Float::with_val(p, -&hi);
    let r = integrate(&lo, &hi, &integrand, &qcfg)?;
    let mut val = r.values[0].clone();
    // PV = I(η) + sign(η) (2πi Σ_between + πi Σ_on)
    if eta != 0.0 {
        let sign = if eta > 0.0 { 1.0 } else { -1.0 };
        let mut corr = Complex::zero(p);
        for pole in &poles {
            let im = pole.s.im.to_f64();
            let w = if pole.on_cycle {
                0.5
            } else if (eta > 0.0 && im > 0.0 && im < eta) || (eta < 0.0 && im < 0.0 && im > eta) {
                1.0
            } else {
                0.0
            };
            if w != 0.0 {
                corr += &pole.residue.scale(&Float::with_val(p, w));
            }
        }
        let two_pi_i = Complex::new(Float::new(p), Float::with_val(p, pi(p) * 2u32 * sign));
        val += &(&corr * &two_pi_i);
    }
    // C_A runs with t decreasing
    let value = -val;
    let mag = value.abs();
    let rel_tol = Float::with_val(p, cfg.recog_tol) * mag.clone().max(&Float::with_val(p, 1e-300));
    let recognized = if value.im.clone().abs() <= Float::with_val(p, &rel_tol + &r.error) {
        rational_reconstruct(&value.re, cfg.den_bound, &Float::with_val(p, &rel_tol + &r.error))
    } else {
        None
    };
    Ok(CycleResult { value, error: r.error, poles, shift: eta, recognized, closed_form: None, evals: r.evals, experimental: false })
}

/// `C_A(sum_d c_d f_{k,d})`.
pub fn cycle_merom(a: &QForm, k: u32, coeffs: &BTreeMap<i64, Rational>, cfg: &MeromConfig, prec: u32) -> Result<CycleResult> {
    let comb = Combination::new(k, coeffs, prec)?;
    cycle_of(a, &comb, cfg, prec)
}

/// `C_D(f_{k,P}) = sum over classes A of discriminant D of C_A(f_{k,P})`.
pub fn trace_cycle(dtr: i64, k: u32, p: &QForm, cfg: &MeromConfig, prec: u32) -> Result<CycleResult> {
    if dtr <= 0 || is_square(dtr) {
        return Err(Error::InvalidInput(format!("trace discriminant {dtr} must be positive and nonsquare")));
    }
    let comb = Combination::for_class(k, p, prec)?;
    let mut total: Option<CycleResult> = None;
    for a in class_reps(dtr)? {
        let r = cycle_of(&a, &comb, cfg, prec)?;
        total = Some(match total {
            None => r,
            Some(mut t) => {
                t.value += &r.value;
                t.error += &r.error;
                t.poles.extend(r.poles);
                t.evals += r.evals;
                t
            }
        });
    }
    let mut t = total.ok_or_else(|| Error::InvalidInput(format!("no classes of discriminant {dtr}")))?;
    let pr = t.value.prec();
    let tol = Float::with_val(pr, cfg.recog_tol) * t.value.abs() + &t.error;
    t.recognized = if t.value.im.clone().abs() <= tol { rational_reconstruct(&t.value.re, cfg.den_bound, &tol) } else { None };
    Ok(t)
}

/// Experimental principal value: symmetric exclusion `|s - s*| < δ` around each pole on the
/// cycle, extrapolated to `δ -> 0` by fitting odd powers of `δ`.
pub fn pv_cycle(a: &QForm, k: u32, coeffs: &BTreeMap<i64, Rational>, deltas: &[f64], cfg: &MeromConfig, prec: u32) -> Result<CycleResult> {
    let comb = Combination::new(k, coeffs, prec)?;
    let geo = geodesic(a, prec)?;
    let poles = scan_poles(&geo, &comb, 0.5)?;
    let stars: Vec<Float> = poles.iter().filter(|p| p.on_cycle).map(|p| p.s.re.clone()).collect();
    if stars.is_empty() {
        let mut r = cycle_of(a, &comb, cfg, prec)?;
        r.experimental = true;
        return Ok(r);
    }
    if deltas.len() < 2 || deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("δ sequence must be decreasing with at least two entries".into()));
    }
    let p = prec;
    let integrand = |s: &Float| -> Result<Vec<Complex>> {
        let (z, dz) = geo.point(&Complex::from_real(s.clone()));
        Ok(vec![&(&comb.eval(&z)? * &a.eval_z(&z).powi(k as i64 - 1)) * &dz])
    };
    let l = geo.log_eps.clone();
    let period = Float::with_val(p, &l * 2u32);
    // start the period at a pole so exclusions sit at the ends and in the interior
    let s0 = stars[0].clone();
    let mut cuts: Vec<Float> = stars.iter().map(|s| Float::with_val(p, s - &s0)).collect();
    cuts.push(period.clone());
    let mut values = vec![];
    let mut evals = 0;
    let mut err = Float::new(p);
    for &dl in deltas {
        let dlf = Float::with_val(p, dl);
        let mut acc = Complex::zero(p);
        for w in cuts.windows(2) {
            let lo = Float::with_val(p, &w[0] + &dlf) + &s0;
            let hi = Float::with_val(p, &w[1] - &dlf) + &s0;
            let r = integrate(&lo, &hi, &integrand, &QuadConfig { max_panels: 1024, ..cfg.quad.clone() })?;
            acc += &r.values[0];
            evals += r.evals;
            err += &r.error;
        }
        values.push(-acc);
    }
    // even-order pole terms leave δ^{1-2m}, the regular part odd powers of δ
    let lowest = 1 - 2 * (k as i32 / 2);
    let mut powers: Vec<i32> = (0..).map(|i| lowest + 2 * i).take_while(|&j| j < 0).collect();
    powers.insert(0, 0);
    let mut j = 1;
    let cols = (deltas.len() - 1).max(powers.len() + 1);
    while powers.len() < cols {
        powers.push(j);
        j += 2;
    }
    if deltas.len() < powers.len() + 1 {
        return Err(Error::InvalidInput(format!("need at least {} δ values for k = {k}", powers.len() + 1)));
    }
    let fit = |skip: usize| -> Complex {
        let rows: Vec<usize> = (skip..deltas.len()).collect();
        let np = powers.len().min(rows.len());
        let mut mat = Matrix::zeros(rows.len(), np, p);
        let mut re = vec![Float::new(p); rows.len()];
        let mut im = vec![Float::new(p); rows.len()];
        for (r, &i) in rows.iter().enumerate() {
            for (c, &e) in powers.iter().take(np).enumerate() {
                mat.set(r, c, Float::with_val(p, deltas[i]).pow(e));
            }
            re[r] = values[i].re.clone();
            im[r] = values[i].im.clone();
        }
        Complex::new(lstsq(&mat, &re).x[0].clone(), lstsq(&mat, &im).x[0].clone())
    };
    let value = fit(0);
    // stability: the last two extrapolations (with and without the largest δ)
    let stable = (&value - &fit(1)).abs();
    if !stable.is_finite() {
        return Err(Error::Quadrature("principal-value extrapolation did not converge".into()));
    }
    let error = Float::with_val(p, &err + &stable);
    let tol = Float::with_val(p, cfg.recog_tol) * value.abs() + &error;
    let recognized = rational_reconstruct(&value.re, cfg.den_bound, &tol);
    Ok(CycleResult { value, error, poles, shift: 0.0, recognized, closed_form: None, evals, experimental: true })
}
