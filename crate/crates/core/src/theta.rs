//! Theta functions: numeric Siegel thetas with certified truncation, and exact
//! expansions of the unary thetas of `N` and the Hecke theta series of `I`.

use crate::error::{Error, Result};
use crate::lattice::{act_rvec, bilinear, form_vec, majorant, poly_p, poly_q, qnorm, to_fvec, FVec, RVec, Splitting, Sublattice};
use crate::numerics::complex::{pi, Complex};
use crate::numerics::quadfield::QuadElem;
use crate::qforms::{GeodesicClass, Mat2, QForm};
use crate::qseries::VVQSeries;
use rug::{Float, Rational};
use std::collections::HashMap;

/// All integer `x` with `x^T G x <= r` for a positive definite `G` (Fincke-Pohst).
pub fn enumerate_ellipsoid(g: &[Vec<f64>], r: f64) -> Vec<Vec<i64>> {
    let n = g.len();
    // q[i][i] and q[i][j] (j > i) with x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    let mut q = g.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut out = vec![];
    let mut x = vec![0i64; n];
    fn rec(i: usize, rem: f64, q: &[Vec<f64>], x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let n = q.len();
        let c: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let w = (rem.max(0.0) / q[i][i]).sqrt();
        let lo = (c - w - 1e-9).ceil() as i64;
        let hi = (c + w + 1e-9).floor() as i64;
        for xi in lo..=hi {
            x[i] = xi;
            let t = xi as f64 - c;
            let used = q[i][i] * t * t;
            if used > rem + 1e-9 * (1.0 + rem) {
                continue;
            }
            if i == 0 {
                out.push(x.clone());
            } else {
                rec(i - 1, rem - used, q, x, out);
            }
        }
        x[i] = 0;
    }
    if n > 0 {
        rec(n - 1, r, &q, &mut x, &mut out);
    }
    out
}

/// Summand weight of a Siegel-type theta.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// `v e(...)`.
    Plain,
    /// `2 pi v^2 p_X y^{-2} conj(Q_X) e(...)`.
    Raised,
    /// `v^{1/2} p_Y e(...)`.
    ThetaI,
    /// `v^{3/2} p_Y y^{-2} conj(Q_Y) e(...)`.
    ThetaIStar,
}

/// Numeric theta value with its certified tail bound.
#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub comps: Vec<Complex>,
    pub tail: Float,
    pub terms: usize,
}

fn det_f64(g: &[Vec<f64>]) -> f64 {
    match g.len() {
        1 => g[0][0],
        2 => g[0][0] * g[1][1] - g[0][1] * g[1][0],
        3 => {
            g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
        }
        _ => unimplemented!("rank above 3"),
    }
}

fn ball_volume(r: usize) -> f64 {
    match r {
        1 => 2.0,
        2 => std::f64::consts::PI,
        3 => 4.0 / 3.0 * std::f64::consts::PI,
        _ => unimplemented!(),
    }
}

/// Rigorous bound on `sum_{M(x) > r} W(M(x)) exp(-2 pi v M(x))` with `W(t) <= c (1 + t)`.
fn tail_bound(g: &[Vec<f64>], v: f64, r: f64, wlin: f64) -> f64 {
    let n = g.len();
    let det = det_f64(g).abs();
    let diam: f64 = (0..n).map(|k| g[k][k].sqrt()).sum();
    let count = |t: f64| ball_volume(n) * (t.sqrt() + diam).powi(n as i32) / det.sqrt();
    let h = 1.0 / (2.0 * std::f64::consts::PI * v);
    let mut total = 0.0;
    for j in 0..100_000 {
        let t0 = r + j as f64 * h;
        let t1 = t0 + h;
        let term = count(t1) * wlin * (1.0 + t1) * (-2.0 * std::f64::consts::PI * v * t0).exp();
        total += term;
        if term < total * 1e-18 && j > 10 {
            break;
        }
    }
    total
}

/// Majorant Gram matrix of the dual basis of `sub` at `z`, in f64.
fn majorant_gram(dual: &[FVec], z: &Complex) -> Vec<Vec<f64>> {
    let p = z.prec();
    let y2 = Float::with_val(p, z.im.square_ref());
    let pp: Vec<Float> = dual.iter().map(|d| Float::with_val(p, poly_p(d, z) * &z.im)).collect();
    let qq: Vec<Complex> = dual.iter().map(|d| poly_q(d, z)).collect();
    let n = dual.len();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let a = Float::with_val(p, &pp[i] * &pp[j]);
            let b = Float::with_val(p, &qq[i].re * &qq[j].re) + Float::with_val(p, &qq[i].im * &qq[j].im);
            g[i][j] = ((a + b) / Float::with_val(p, &y2 * 4u32)).to_f64();
        }
    }
    g
}

/// Theta sum over the dual lattice of `sub` at `(τ, z)` with absolute tail below `tol`.
pub fn theta_sum(sub: &Sublattice, tau: &Complex, z: &Complex, kernel: Kernel, tol: f64) -> Result<ThetaValue> {
    let p = tau.prec();
    if tau.im <= 0 || z.im <= 0 {
        return Err(Error::InvalidInput("theta needs Im tau > 0 and Im z > 0".into()));
    }
    let dual_r = sub.dual_basis();
    let dual: Vec<FVec> = dual_r.iter().map(|d| to_fvec(d, p)).collect();
    let g = majorant_gram(&dual, z);
    let v = tau.im.to_f64();
    let y = z.im.to_f64();
    let wlin = match kernel {
        Kernel::Plain => v,
        Kernel::Raised => 2.0 * std::f64::consts::PI * v * v * 4.0 / y,
        Kernel::ThetaI => v.sqrt() * 2.0,
        Kernel::ThetaIStar => v.powf(1.5) * 4.0 / y,
    };
    let mut r = (1.0 / tol).ln() / (2.0 * std::f64::consts::PI * v);
    let mut tail = tail_bound(&g, v, r, wlin);
    let mut guard = 0;
    while tail > tol {
        r *= 1.1;
        tail = tail_bound(&g, v, r, wlin);
        guard += 1;
        if guard > 400 {
            return Err(Error::InsufficientPrecision("theta truncation radius did not converge".into()));
        }
    }
    if tol < f64::from(2u32).powi(-(p as i32) + 16) {
        return Err(Error::InsufficientPrecision(format!("tolerance {tol:e} below working precision {p} bits")));
    }
    let pts = enumerate_ellipsoid(&g, r);
    let ncomp = sub.group.order();
    let mut comps = vec![Complex::zero(p); ncomp];
    let twopi = Float::with_val(p, pi(p) * 2u32);
    let two_pi_v = Float::with_val(p, &twopi * &tau.im);
    let mut phase_cache: HashMap<Rational, Complex> = HashMap::new();
    let y2inv = Float::with_val(p, z.im.square_ref()).recip();
    for x in &pts {
        if x.iter().all(|&c| c == 0) && kernel != Kernel::Plain {
            continue;
        }
        let mut xr: RVec = [Rational::new(), Rational::new(), Rational::new()];
        for (k, d) in dual_r.iter().enumerate() {
            if x[k] != 0 {
                for t in 0..3 {
                    xr[t] += Rational::from(&d[t] * x[k]);
                }
            }
        }
        let xf = to_fvec(&xr, p);
        let m = majorant(&xf, z);
        let damp = Float::with_val(p, -Float::with_val(p, &two_pi_v * &m)).exp();
        let qx = qnorm(&xr);
        let qf = Rational::from(&qx - qx.clone().floor());
        let phase = phase_cache
            .entry(qf.clone())
            .or_insert_with(|| Complex::e_real(&Float::with_val(p, Float::with_val(p, &qf) * &tau.re)))
            .clone();
        let base = phase.scale(&damp);
        // e(q(X) u) with integer part of q removed needs the full q(X) times u
        let intpart = Rational::from(&qx - &qf);
        let base = if intpart == 0 {
            base
        } else {
            &base * &Complex::e_real(&Float::with_val(p, Float::with_val(p, &intpart) * &tau.re))
        };
        let w = match kernel {
            Kernel::Plain => base,
            Kernel::ThetaI => base.scale(&poly_p(&xf, z)),
            Kernel::Raised | Kernel::ThetaIStar => {
                let pz = poly_p(&xf, z);
                let qz = poly_q(&xf, z).conj();
                let f = Float::with_val(p, &pz * &y2inv);
                &base * &qz.scale(&f)
            }
        };
        let cls = sub.group.index_of_dual_int(x);
        comps[cls] += &w;
    }
    let v = &tau.im;
    let pref = match kernel {
        Kernel::Plain => v.clone(),
        Kernel::Raised => Float::with_val(p, &twopi * v) * v,
        Kernel::ThetaI => Float::with_val(p, v.sqrt_ref()),
        Kernel::ThetaIStar => Float::with_val(p, v.sqrt_ref()) * v,
    };
    for c in comps.iter_mut() {
        *c = c.scale(&pref);
    }
    Ok(ThetaValue { comps, tail: Float::with_val(p, tail), terms: pts.len() })
}

/// `Θ_L(τ, z)` over `L'/L`.
pub fn siegel_eval(tau: &Complex, z: &Complex, tol: f64) -> Result<ThetaValue> {
    theta_sum(&Sublattice::l(), tau, z, Kernel::Plain, tol)
}

/// `R_0 Θ_L(τ, z)` over `L'/L`.
pub fn raised_siegel_eval(tau: &Complex, z: &Complex, tol: f64) -> Result<ThetaValue> {
    theta_sum(&Sublattice::l(), tau, z, Kernel::Raised, tol)
}

fn check_on_geodesic(a: &QForm, z: &Complex) -> Result<()> {
    let p = z.prec();
    let pa = poly_p(&to_fvec(&form_vec(a), p), z);
    let tol = Float::with_val(p, Float::i_exp(1, -(p as i32) / 2));
    if pa.abs() > tol {
        return Err(Error::InvalidInput(format!("z is not on the geodesic of {a}")));
    }
    Ok(())
}

/// `Θ_I(τ, z)` for `z` on `S_A`, over `I'/I`.
pub fn theta_i_eval(split: &Splitting, tau: &Complex, z: &Complex, tol: f64) -> Result<ThetaValue> {
    check_on_geodesic(&split.form, z)?;
    theta_sum(&split.i, tau, z, Kernel::ThetaI, tol)
}

/// `Θ*_I(τ, z)` for `z` on `S_A`, over `I'/I`.
pub fn theta_i_star_eval(split: &Splitting, tau: &Complex, z: &Complex, tol: f64) -> Result<ThetaValue> {
    check_on_geodesic(&split.form, z)?;
    theta_sum(&split.i, tau, z, Kernel::ThetaIStar, tol)
}

/// Exact `Θ_{3/2,N} = sum (W, A) e(-q(W) τ) e_W` (`weight3 = true`) or
/// `Θ_{1/2,N} = sum e(-q(W) τ) e_W`, for the dual representation of `N`.
pub fn unary_theta_series(n: &Sublattice, weight3: bool, a: &QForm, order: i64) -> Result<VVQSeries> {
    if n.rank() != 1 {
        return Err(Error::InvalidInput("unary theta needs a rank one lattice".into()));
    }
    let g0 = n.gram[0][0];
    if g0 >= 0 {
        return Err(Error::InvalidInput("unary theta needs a negative definite lattice".into()));
    }
    let av = form_vec(a);
    let weight = if weight3 { Rational::from((3, 2)) } else { Rational::from((1, 2)) };
    let mut s = VVQSeries::zero(n.group.desc("N'/N", true), weight, Rational::from(order));
    let nb = &n.basis[0];
    let na = bilinear(nb, &av);
    // W = j n0 / g0, -q(W) = -j^2 / (2 g0)
    let mut j = 0i64;
    loop {
        let e = Rational::from((j * j, -2 * g0));
        if e >= order {
            break;
        }
        for jj in if j == 0 { vec![0] } else { vec![j, -j] } {
            let c = if weight3 { Rational::from(&na * jj) / g0 } else { Rational::from(1) };
            let cls = n.group.index_of(&[Rational::from((jj, g0))]).unwrap();
            s.add_term(cls, e.clone(), c);
        }
        j += 1;
    }
    Ok(s)
}

/// `λ(Y) = (a / sqrt D)(α w^2 + β w + γ)` exactly, for `Y = (α, β, γ)`.
pub fn lambda(a: &QForm, y: &RVec) -> QuadElem {
    let d = a.disc();
    let w = QuadElem::new(Rational::from((-a.b, 2 * a.a)), Rational::from((-1, 2 * a.a)), d);
    let s = QuadElem::rational(y[0].clone(), d) * w.clone() * w.clone()
        + QuadElem::rational(y[1].clone(), d) * w
        + QuadElem::rational(y[2].clone(), d);
    // (x + y sqrt D) a / sqrt D = a y + (a x / D) sqrt D
    QuadElem::new(Rational::from(&s.y * a.a), Rational::from(&s.x * a.a) / d, d)
}

/// Order of the action of `g` on the classes of `I'/I`.
pub fn action_order(split: &Splitting, g: &Mat2) -> usize {
    let i = &split.i;
    let n = i.group.order();
    let mut pow = crate::qforms::IDENTITY;
    for m in 1..=n.max(1) * 4 {
        pow = crate::qforms::mat_mul(g, &pow);
        if (0..n).all(|c| i.class_of(&act_rvec(&pow, &i.rep(c))) == Some(c)) {
            return m;
        }
    }
    unreachable!("finite group action must have finite order")
}

/// Vectors `Y ∈ I'` with `0 < q(Y) < bound` and `R^j0 <= |λ/λ'| < R^{j0+1}`, `R = eps^{4m}`.
pub fn hecke_window(split: &Splitting, geo: &GeodesicClass, bound: i64, j0: u32) -> Result<Vec<(RVec, QuadElem)>> {
    let a = &split.form;
    let i = &split.i;
    let m = action_order(split, &geo.automorph.m) as u32;
    let eps = &geo.automorph.eps;
    let r = eps.pow(4 * m);
    let lo = r.pow(j0);
    let hi = r.pow(j0 + 1);
    let dual = i.dual_basis();
    let lam: Vec<QuadElem> = dual.iter().map(|d| lambda(a, d)).collect();
    let emb: Vec<(f64, f64)> = lam
        .iter()
        .map(|l| {
            let (x, y) = l.embed(128);
            (x.to_f64(), y.to_f64())
        })
        .collect();
    let (rhi, _) = hi.embed(128);
    let rhi = rhi.to_f64();
    // |λ| <= sqrt(B rhi), |λ'| <= sqrt(B / rlo) with rlo >= 1
    let u = (bound as f64 * rhi).sqrt() * (1.0 + 1e-9) + 1e-9;
    let up = (bound as f64).sqrt() * (1.0 + 1e-9) + 1e-9;
    let det = emb[0].0 * emb[1].1 - emb[1].0 * emb[0].1;
    // x = M^{-1} (λ, λ') with M = [[λ1, λ2], [λ1', λ2']]
    let inv = [[emb[1].1 / det, -emb[1].0 / det], [-emb[0].1 / det, emb[0].0 / det]];
    let x1max = (inv[0][0].abs() * u + inv[0][1].abs() * up).ceil() as i64 + 1;
    let mut out = vec![];
    for x1 in -x1max..=x1max {
        // constraints on x2 from |λ| <= u and |λ'| <= up
        let mut lo2 = f64::NEG_INFINITY;
        let mut hi2 = f64::INFINITY;
        for (c, bnd) in [(emb[0].0, emb[1].0), (emb[0].1, emb[1].1)].iter().zip([u, up]) {
            let (c1, c2) = *c;
            let base = c1 * x1 as f64;
            let (a1, a2) = ((-bnd - base) / c2, (bnd - base) / c2);
            lo2 = lo2.max(a1.min(a2));
            hi2 = hi2.min(a1.max(a2));
        }
        if lo2 > hi2 {
            continue;
        }
        for x2 in (lo2.floor() as i64 - 1)..=(hi2.ceil() as i64 + 1) {
            let mut y: RVec = [Rational::new(), Rational::new(), Rational::new()];
            for t in 0..3 {
                y[t] = Rational::from(&dual[0][t] * x1) + Rational::from(&dual[1][t] * x2);
            }
            let q = qnorm(&y);
            if q <= 0 || q >= bound {
                continue;
            }
            let l = lam[0].scale(&Rational::from(x1)) + lam[1].scale(&Rational::from(x2));
            let la = l.abs();
            let lc = l.conj().abs();
            // lo |λ'| <= |λ| < hi |λ'|
            if la >= lo.clone() * lc.clone() && la < hi.clone() * lc {
                out.push((y, l));
            }
        }
    }
    Ok(out)
}

/// Exact Hecke theta `ϑ_I = sum_{Y ∈ Γ_I \ I', q(Y) > 0} sgn(Y, Y0) e(q(Y) τ) e_Y`.
pub fn hecke_theta_series(split: &Splitting, geo: &GeodesicClass, order: i64) -> Result<VVQSeries> {
    hecke_theta_window(split, geo, order, 0)
}

pub fn hecke_theta_window(split: &Splitting, geo: &GeodesicClass, order: i64, j0: u32) -> Result<VVQSeries> {
    let d = split.form.disc();
    if crate::qforms::is_square(d) {
        return Err(Error::SquareDiscriminant(d));
    }
    let m = action_order(split, &geo.automorph.m);
    let mut s = VVQSeries::zero(split.i.group.desc("I'/I", false), Rational::from(1), Rational::from(order));
    for (y, l) in hecke_window(split, geo, order, j0)? {
        debug_assert_ne!(act_rvec(&geo.automorph.m, &y), y, "automorph fixes a vector of positive norm");
        let cls = split.i.class_of(&y).expect("Y in I'");
        let sg = l.signum();
        s.add_term(cls, qnorm(&y), Rational::from((sg as i64, m as i64)));
    }
    Ok(s)
}
