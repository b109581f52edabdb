//! Harmonic Maass preimages of unary theta functions: the completion, a
//! collocation solver for the holomorphic part, and rational reconstruction.

use crate::error::{Error, Result};
use crate::lattice::{automorphy_factor, Sublattice};
use crate::numerics::complex::{pi, Complex};
use crate::numerics::linalg::{lstsq, Matrix};
use crate::numerics::rational::{rat_to_string, rational_reconstruct};
use crate::numerics::special::upper_incomplete_gamma_half;
use crate::qforms::QForm;
use crate::qseries::VVQSeries;
use crate::theta::unary_theta_series;
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Solver settings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MockConfig {
    pub order: i64,
    pub principal_depth: i64,
    pub den_bound: u64,
    /// Real equations per unknown.
    pub oversample: usize,
    pub prec: u32,
}

impl Default for MockConfig {
    fn default() -> Self {
        MockConfig { order: 25, principal_depth: 2, den_bound: 1_000_000, oversample: 3, prec: 256 }
    }
}

/// Holomorphic part of a harmonic Maass form with shadow `D^{-1/2} Θ_{3/2,N}`.
#[derive(Clone, Debug)]
pub struct MockPart {
    /// Exact coefficients below `holo.order`.
    pub holo: VVQSeries,
    pub shadow: VVQSeries,
    pub disc: i64,
    /// Floating solution for every unknown `(component, exponent)`.
    pub floats: Vec<(usize, Rational, Float)>,
    /// Modularity residual of the floating solve.
    pub residual: Float,
    /// Modularity residual with the exact coefficients substituted.
    pub exact_residual: Float,
    /// Largest coefficient change between the solve and the oversampled re-solve.
    pub stability: Float,
    pub den_bound_used: u64,
    /// Unknowns whose reconstruction failed or was ambiguous.
    pub unrecognized: Vec<(usize, Rational)>,
    pub config: MockConfig,
}

/// `F^-(τ) = sum_{m>0} c(m) Γ(1/2, 4π m v) q^{-m}` with `c(m) = -D^{-1/2} b(m) (4π m)^{-1/2}`.
pub fn completion_minus_eval(shadow: &VVQSeries, disc: i64, tau: &Complex) -> Result<Vec<Complex>> {
    let p = tau.prec();
    let fourpi = Float::with_val(p, pi(p) * 4u32);
    let sd = Float::with_val(p, disc).sqrt();
    let mut out = vec![Complex::zero(p); shadow.comps.len()];
    for (g, comp) in shadow.comps.iter().enumerate() {
        for (m, b) in comp {
            if *m <= 0 {
                return Err(Error::InvalidInput("shadow has a nonpositive exponent".into()));
            }
            let mf = Float::with_val(p, m);
            let x = Float::with_val(p, &fourpi * &mf);
            let c = -(Float::with_val(p, b) / &sd) / Float::with_val(p, x.sqrt_ref());
            let gam = upper_incomplete_gamma_half(&Float::with_val(p, &x * &tau.im));
            // q^{-m} = exp(-2πi m τ)
            let arg = tau.scale(&Float::with_val(p, -Float::with_val(p, &fourpi * &mf) / 2u32)).mul_i();
            out[g] += &arg.exp().scale(&Float::with_val(p, c * gam));
        }
    }
    Ok(out)
}

/// `F = holo + F^-` at `τ`.
pub fn completion_eval(holo: &VVQSeries, shadow: &VVQSeries, disc: i64, tau: &Complex) -> Result<Vec<Complex>> {
    let mut h = holo.eval(tau);
    for (x, y) in h.iter_mut().zip(completion_minus_eval(shadow, disc, tau)?) {
        *x += &y;
    }
    Ok(h)
}

/// `ξ_{1/2} F = 2i v^{1/2} conj(∂_τ̄ F)` by central differences with step `h`.
pub fn xi_numeric(holo: &VVQSeries, shadow: &VVQSeries, disc: i64, tau: &Complex, h: &Float) -> Result<Vec<Complex>> {
    let p = tau.prec();
    let hu = Complex::from_real(h.clone());
    let hv = Complex::new(Float::new(p), h.clone());
    let f = |t: &Complex| completion_eval(holo, shadow, disc, t);
    let (fu1, fu0) = (f(&(tau + &hu))?, f(&(tau - &hu))?);
    let (fv1, fv0) = (f(&(tau + &hv))?, f(&(tau - &hv))?);
    let two_h = Float::with_val(p, h * 2u32);
    let sv = Float::with_val(p, tau.im.sqrt_ref());
    Ok((0..fu1.len())
        .map(|g| {
            let du = (&fu1[g] - &fu0[g]).scale(&Float::with_val(p, two_h.recip_ref()));
            let dv = (&fv1[g] - &fv0[g]).scale(&Float::with_val(p, two_h.recip_ref()));
            let dbar = (&du + &dv.mul_i()).scale(&Float::with_val(p, 0.5));
            dbar.conj().mul_i().scale(&Float::with_val(p, &sv * 2u32))
        })
        .collect())
}

/// Weight `1/2` hyperbolic Laplacian of the completion by second differences.
pub fn laplacian_numeric(holo: &VVQSeries, shadow: &VVQSeries, disc: i64, tau: &Complex, h: &Float) -> Result<Vec<Complex>> {
    let p = tau.prec();
    let hu = Complex::from_real(h.clone());
    let hv = Complex::new(Float::new(p), h.clone());
    let f = |t: &Complex| completion_eval(holo, shadow, disc, t);
    let f0 = f(tau)?;
    let (fu1, fu0) = (f(&(tau + &hu))?, f(&(tau - &hu))?);
    let (fv1, fv0) = (f(&(tau + &hv))?, f(&(tau - &hv))?);
    let h2 = Float::with_val(p, h.square_ref());
    let v = &tau.im;
    let v2 = Float::with_val(p, v.square_ref());
    let kv = Float::with_val(p, v * 0.5);
    Ok((0..f0.len())
        .map(|g| {
            let two_f = f0[g].scale(&Float::with_val(p, 2));
            let uu = (&(&fu1[g] + &fu0[g]) - &two_f).scale(&Float::with_val(p, h2.recip_ref()));
            let vv = (&(&fv1[g] + &fv0[g]) - &two_f).scale(&Float::with_val(p, h2.recip_ref()));
            let inv2h = Float::with_val(p, Float::with_val(p, h * 2u32).recip_ref());
            let du = (&fu1[g] - &fu0[g]).scale(&inv2h);
            let dv = (&fv1[g] - &fv0[g]).scale(&inv2h);
            // Δ_k = -v^2 (∂_u^2 + ∂_v^2) + i k v (∂_u + i ∂_v)
            let lap = (&uu + &vv).scale(&Float::with_val(p, -&v2));
            let first = (&du + &dv.mul_i()).mul_i().scale(&kv);
            &lap + &first
        })
        .collect())
}

struct Problem<'a> {
    n: &'a Sublattice,
    shadow: &'a VVQSeries,
    disc: i64,
    parity: i32,
    reps: Vec<usize>,
    s: Vec<Vec<Complex>>,
    t: Vec<Complex>,
    prec: u32,
}

impl Problem<'_> {
    /// Basis vector of unknown `(γ, n)`: `e_γ q^n + parity e_{-γ} q^n`.
    fn column_at(&self, g: usize, e: &Rational, tau: &Complex) -> Vec<Complex> {
        let p = self.prec;
        let grp = &self.n.group;
        let mut v = vec![Complex::zero(p); grp.order()];
        let qn = qpow(e, tau);
        v[g] = qn.clone();
        let ng = grp.neg(g);
        if ng != g {
            v[ng] = if self.parity > 0 { qn } else { -qn };
        }
        v
    }
}

fn qpow(e: &Rational, tau: &Complex) -> Complex {
    let p = tau.prec();
    let t = Float::with_val(p, pi(p) * 2u32) * Float::with_val(p, e);
    tau.scale(&t).mul_i().exp()
}

/// Moves `τ` into the standard fundamental domain, returning `τ*` and `M` with
/// `F(τ) = M F(τ*)` for forms of weight `two_k / 2` with `S`, `T` matrices `s`, `t`.
pub fn pullback(tau: &Complex, s: &[Vec<Complex>], t: &[Complex], two_k: i64) -> (Complex, Vec<Vec<Complex>>) {
    let p = tau.prec();
    let n = t.len();
    let mut m: Vec<Vec<Complex>> = (0..n).map(|i| (0..n).map(|j| if i == j { Complex::one(p) } else { Complex::zero(p) }).collect()).collect();
    let mut cur = tau.clone();
    for _ in 0..10_000 {
        let sh = Float::with_val(p, cur.re.round_ref());
        if !sh.is_zero() {
            let k = sh.to_i32_saturating().unwrap();
            cur.re -= &sh;
            for row in m.iter_mut() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = &*x * &t[j].powi(k as i64);
                }
            }
        }
        if cur.norm_sqr() >= 1 {
            break;
        }
        let next = -cur.recip();
        let fac = automorphy_factor(&next, two_k);
        let mut out = vec![vec![Complex::zero(p); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::zero(p);
                for l in 0..n {
                    acc += &(&m[i][l] * &s[l][j]);
                }
                out[i][j] = &acc * &fac;
            }
        }
        m = out;
        cur = next;
    }
    (cur, m)
}

/// Height of the sampling horocycle.
pub const SAMPLE_Y: f64 = 0.5;

/// Horocycle points `x_m + iY` with `x_m = (m - 1/2) / (2Q)`, `1 - Q <= m <= Q`.
fn sample_points(count: usize, y: f64, prec: u32) -> Vec<Complex> {
    let q = count.div_ceil(2) as i64;
    (1 - q..=q)
        .map(|m| Complex::new(Float::with_val(prec, (m as f64 - 0.5) / (2 * q) as f64), Float::with_val(prec, y)))
        .collect()
}

struct Sample {
    tau: Complex,
    star: Complex,
    m: Vec<Vec<Complex>>,
    minus: Vec<Complex>,
    minus_star: Vec<Complex>,
}

impl Problem<'_> {
    fn sample(&self, tau: &Complex) -> Sample {
        let (star, m) = pullback(tau, &self.s, &self.t, 1);
        let minus = completion_minus_eval(self.shadow, self.disc, tau).unwrap();
        let minus_star = completion_minus_eval(self.shadow, self.disc, &star).unwrap();
        Sample { tau: tau.clone(), star, m, minus, minus_star }
    }

    /// `G(τ) - M G(τ*)` on the representative components.
    fn defect(&self, g_tau: &[Complex], g_star: &[Complex], sm: &Sample) -> Vec<Complex> {
        self.reps
            .iter()
            .map(|&d| {
                let mut acc = Complex::zero(self.prec);
                for (g, x) in g_star.iter().enumerate() {
                    acc += &(&sm.m[d][g] * x);
                }
                &g_tau[d] - &acc
            })
            .collect()
    }
}

struct Solve {
    x: Vec<Float>,
    residual: Float,
}

fn solve_with(pb: &Problem, unknowns: &[(usize, Rational)], samples: &[Sample]) -> Solve {
    let p = pb.prec;
    let nr = pb.reps.len();
    let rows = 2 * nr * samples.len();
    let cols = unknowns.len();
    let blocks: Vec<(Vec<Vec<Complex>>, Vec<Complex>)> = samples
        .par_iter()
        .map(|sm| {
            let colv: Vec<Vec<Complex>> = unknowns
                .iter()
                .map(|(g, e)| pb.defect(&pb.column_at(*g, e, &sm.tau), &pb.column_at(*g, e, &sm.star), sm))
                .collect();
            (colv, pb.defect(&sm.minus, &sm.minus_star, sm))
        })
        .collect();
    let mut a = Matrix::zeros(rows, cols, p);
    let mut b = vec![Float::new(p); rows];
    for (j, (colv, rhs)) in blocks.iter().enumerate() {
        for r in 0..nr {
            let row = 2 * (j * nr + r);
            for (c, col) in colv.iter().enumerate() {
                a.set(row, c, col[r].re.clone());
                a.set(row + 1, c, col[r].im.clone());
            }
            b[row] = -rhs[r].re.clone();
            b[row + 1] = -rhs[r].im.clone();
        }
    }
    let r = lstsq(&a, &b);
    let residual = defect_max(pb, unknowns, &r.x, samples);
    Solve { x: r.x, residual }
}

fn eval_holo(pb: &Problem, unknowns: &[(usize, Rational)], x: &[Float], tau: &Complex) -> Vec<Complex> {
    let mut acc = vec![Complex::zero(pb.prec); pb.n.group.order()];
    for ((g, e), c) in unknowns.iter().zip(x) {
        for (a, v) in acc.iter_mut().zip(pb.column_at(*g, e, tau)) {
            *a += &v.scale(c);
        }
    }
    acc
}

fn defect_max(pb: &Problem, unknowns: &[(usize, Rational)], x: &[Float], samples: &[Sample]) -> Float {
    let p = pb.prec;
    let worst: Vec<Float> = samples
        .par_iter()
        .map(|sm| {
            let mut f = eval_holo(pb, unknowns, x, &sm.tau);
            let mut fs = eval_holo(pb, unknowns, x, &sm.star);
            for (a, b) in f.iter_mut().zip(&sm.minus) {
                *a += b;
            }
            for (a, b) in fs.iter_mut().zip(&sm.minus_star) {
                *a += b;
            }
            pb.defect(&f, &fs, sm).iter().map(|d| d.abs()).fold(Float::new(p), |m, d| if d > m { d } else { m })
        })
        .collect();
    worst.into_iter().fold(Float::new(p), |m, d| if d > m { d } else { m })
}

/// Solves for the holomorphic part of the preimage of `D^{-1/2} Θ_{3/2,N}`.
pub fn solve_mock(n: &Sublattice, a: &QForm, cfg: &MockConfig) -> Result<MockPart> {
    let p = cfg.prec;
    let disc = a.disc();
    let grp = &n.group;
    let shadow = unary_theta_series(n, true, a, cfg.order + cfg.principal_depth + 2)?;
    let parity = {
        let anti = (0..grp.order()).all(|g| {
            let ng = grp.neg(g);
            shadow.comps[g].iter().all(|(e, c)| shadow.coeff(ng, e) == Rational::from(-c))
        });
        if anti {
            -1
        } else {
            1
        }
    };
    let mut reps = vec![];
    for g in 0..grp.order() {
        let ng = grp.neg(g);
        if ng == g && parity < 0 {
            continue;
        }
        if ng >= g {
            reps.push(g);
        }
    }
    let pb = Problem { n, shadow: &shadow, disc, parity, reps, s: grp.weil_s(p, false), t: grp.weil_t(p, false), prec: p };
    // exponents n ≡ q(γ) mod 1
    let mut holo_unknowns = vec![];
    let mut principal = vec![];
    for &g in &pb.reps {
        let q = &grp.qvals[g];
        let mut e = Rational::from(q - q.clone().floor()) - cfg.principal_depth;
        while e < cfg.order {
            if e < 0 {
                principal.push((g, e.clone()));
            } else {
                holo_unknowns.push((g, e.clone()));
            }
            e += 1;
        }
    }
    principal.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    let tol = Float::with_val(p, Float::i_exp(1, -(p as i32) / 4));
    let span = (cfg.order + cfg.principal_depth + 1) as usize;
    let npts = |u: usize| (cfg.oversample * u).div_ceil(2 * pb.reps.len()).max(2 * span);
    let samples = |count: usize| -> Vec<Sample> { sample_points(count, SAMPLE_Y, p).par_iter().map(|t| pb.sample(t)).collect() };
    let base = samples(npts(holo_unknowns.len() + principal.len()));
    // forward selection of principal-part unknowns
    let mut chosen: Vec<(usize, Rational)> = vec![];
    let mut unknowns = holo_unknowns.clone();
    let mut cur = solve_with(&pb, &unknowns, &base);
    for cand in &principal {
        if cur.residual < tol {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(cand.clone());
        let mut u = trial.clone();
        u.extend(holo_unknowns.iter().cloned());
        let s = solve_with(&pb, &u, &base);
        if s.residual < Float::with_val(p, &cur.residual * 0.5) {
            chosen = trial;
            unknowns = u;
            cur = s;
        }
    }
    if cur.residual >= tol {
        return Err(Error::SolverFailed(format!(
            "modularity residual {:e} above 2^-{}; increase order or principal_depth",
            cur.residual.to_f64(),
            p / 4
        )));
    }
    let pts2 = samples(2 * npts(unknowns.len()));
    let again = solve_with(&pb, &unknowns, &pts2);
    let mut stability = Float::new(p);
    for (x, y) in cur.x.iter().zip(&again.x) {
        let d = Float::with_val(p, x - y).abs();
        if d > stability {
            stability = d;
        }
    }
    // reconstruct in order of exponent; exact part stops at the first failure
    let mut idx: Vec<usize> = (0..unknowns.len()).collect();
    idx.sort_by(|&i, &j| unknowns[i].1.cmp(&unknowns[j].1));
    let mut holo = VVQSeries::zero(grp.desc("N'/N", false), Rational::from((1, 2)), Rational::from(cfg.order));
    let mut exact_x = cur.x.clone();
    let mut unrecognized = vec![];
    let mut exact_order: Option<Rational> = None;
    for &i in &idx {
        let (g, e) = &unknowns[i];
        let err = Float::with_val(p, Float::with_val(p, &cur.x[i] - &again.x[i]).abs() * 16u32);
        let t = err.max(&Float::with_val(p, Float::i_exp(1, -(p as i32) / 2)));
        match rational_reconstruct(&cur.x[i], cfg.den_bound, &t) {
            Some(r) if !r.ambiguous => {
                if exact_order.is_none() {
                    exact_x[i] = Float::with_val(p, &r.value);
                    holo.add_term(*g, e.clone(), r.value.clone());
                    let ng = grp.neg(*g);
                    if ng != *g {
                        holo.add_term(ng, e.clone(), if parity > 0 { r.value } else { -r.value });
                    }
                }
            }
            _ => {
                unrecognized.push((*g, e.clone()));
                if exact_order.is_none() {
                    exact_order = Some(e.clone());
                }
            }
        }
    }
    holo.order = exact_order.unwrap_or(Rational::from(cfg.order));
    let exact_residual = defect_max(&pb, &unknowns, &exact_x, &pts2);
    let floats = unknowns.iter().cloned().zip(cur.x.iter().cloned()).map(|((g, e), x)| (g, e, x)).collect();
    Ok(MockPart {
        holo,
        shadow: shadow.clone(),
        disc,
        floats,
        residual: cur.residual,
        exact_residual,
        stability,
        den_bound_used: cfg.den_bound,
        unrecognized,
        config: cfg.clone(),
    })
}

/// Serialized mock part.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MockPartText {
    pub holo: crate::qseries::VVQSeriesText,
    pub shadow: crate::qseries::VVQSeriesText,
    pub disc: i64,
    pub residual: String,
    pub exact_residual: String,
    pub stability: String,
    pub den_bound_used: u64,
    pub unrecognized: Vec<(usize, String)>,
    pub config: MockConfig,
}

impl MockPart {
    pub fn to_text(&self) -> MockPartText {
        let f = |x: &Float| x.to_string_radix(10, Some(12));
        MockPartText {
            holo: self.holo.to_text(),
            shadow: self.shadow.to_text(),
            disc: self.disc,
            residual: f(&self.residual),
            exact_residual: f(&self.exact_residual),
            stability: f(&self.stability),
            den_bound_used: self.den_bound_used,
            unrecognized: self.unrecognized.iter().map(|(g, e)| (*g, rat_to_string(e))).collect(),
            config: self.config.clone(),
        }
    }

    /// Rebuilds from text; floating data is not restored.
    pub fn from_text(t: &MockPartText) -> Option<Self> {
        let p = t.config.prec;
        let parse = |s: &str| Float::parse(s).ok().map(|v| Float::with_val(p, v));
        Some(MockPart {
            holo: VVQSeries::from_text(&t.holo)?,
            shadow: VVQSeries::from_text(&t.shadow)?,
            disc: t.disc,
            floats: vec![],
            residual: parse(&t.residual)?,
            exact_residual: parse(&t.exact_residual)?,
            stability: parse(&t.stability)?,
            den_bound_used: t.den_bound_used,
            unrecognized: t.unrecognized.iter().map(|(g, e)| Some((*g, crate::numerics::rational::parse_rational(e)?))).collect::<Option<_>>()?,
            config: t.config.clone(),
        })
    }

    /// Principal part as `(component, exponent, coefficient)`.
    pub fn principal_part(&self) -> Vec<(usize, Rational, Rational)> {
        let mut out = vec![];
        for (g, c) in self.holo.comps.iter().enumerate() {
            for (e, v) in c.range(..Rational::new()) {
                out.push((g, e.clone(), v.clone()));
            }
        }
        out
    }
}

#[allow(dead_code)]
fn coefficient_map(s: &VVQSeries) -> BTreeMap<(usize, Rational), Rational> {
    let mut m = BTreeMap::new();
    for (g, c) in s.comps.iter().enumerate() {
        for (e, v) in c {
            m.insert((g, e.clone()), v.clone());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::split;

    #[test]
    fn xi_of_completion_is_shadow() {
        let a = QForm::new(1, 1, -1);
        let sp = split(&a).unwrap();
        let p = 256;
        let shadow = unary_theta_series(&sp.n, true, &a, 40).unwrap();
        let holo = VVQSeries::zero(sp.n.group.desc("N'/N", false), Rational::from((1, 2)), Rational::from(40));
        let tau = Complex::from_f64(p, 0.1, 1.0);
        let h = Float::with_val(p, Float::i_exp(1, -64));
        let xi = xi_numeric(&holo, &shadow, 5, &tau, &h).unwrap();
        let sh = shadow.eval(&tau);
        let sd = Float::with_val(p, 5).sqrt();
        for (x, y) in xi.iter().zip(&sh) {
            let d = (x - &y.scale(&Float::with_val(p, sd.recip_ref()))).abs().to_f64();
            assert!(d < 1e-30, "{d:e}");
        }
    }

    #[test]
    fn mock_d5() {
        let a = QForm::new(1, 1, -1);
        let sp = split(&a).unwrap();
        let m = solve_mock(&sp.n, &a, &MockConfig::default()).unwrap();
        assert!(m.residual < Float::with_val(256, Float::i_exp(1, -64)));
        assert!(m.exact_residual < Float::with_val(256, Float::i_exp(1, -64)));
        let pp = m.principal_part();
        assert_eq!(pp.len(), 2);
        for (g, e, c) in &pp {
            assert_eq!(*e, Rational::from((-1, 20)));
            assert_eq!(c.clone().abs(), Rational::from((1, 6)));
            assert!(*g == 1 || *g == 9);
        }
        assert!(m.holo.order > 10);
        // round trip through the text form
        let back = MockPart::from_text(&m.to_text()).unwrap();
        assert_eq!(back.holo, m.holo);
    }
}
