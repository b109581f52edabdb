//! Pointwise evaluation of the meromorphic forms `f_{k,d}` and `f_{k,P}`.

use crate::error::{Error, Result};
use crate::numerics::complex::{pi, Complex};
use crate::numerics::linalg::{lstsq, Matrix};
use crate::numerics::rational::binom;
use crate::qforms::{class_reps, cm_point, is_square, reduce_point, reduce_posdef, QForm};
use crate::qseries::{eisenstein, jfunc, ScalarQSeries};
use rug::ops::Pow;
use rug::{Float, Rational};

/// Weights `2k` with no cusp forms, where `f_{k,P}` is fixed by its principal parts.
pub fn exact_representation_available(k: u32) -> bool {
    matches!(k, 2..=5 | 7)
}

fn series_floats(s: &ScalarQSeries, prec: u32) -> (i64, Vec<Float>) {
    (s.val, s.coeffs.iter().map(|c| Float::with_val(prec, c)).collect())
}

/// Taylor coefficients at `z0` of `sum c_n q^n`: `sum_n c_n (2πi n)^m / m! q0^n`.
fn taylor_at(val: i64, c: &[Float], z0: &Complex, terms: usize) -> Vec<Complex> {
    let p = z0.prec();
    let twopi = Float::with_val(p, pi(p) * 2u32);
    let q0 = z0.scale(&twopi).mul_i().exp();
    let mut qn = q0.powi(val);
    let mut out = vec![Complex::zero(p); terms];
    for (i, cn) in c.iter().enumerate() {
        let n = val + i as i64;
        if !cn.is_zero() {
            let mut t = qn.scale(cn);
            let step = Complex::new(Float::new(p), Float::with_val(p, &twopi * n));
            for (m, o) in out.iter_mut().enumerate() {
                *o += &t;
                t = (&t * &step).scale(&Float::with_val(p, (m + 1) as u32).recip());
            }
        }
        qn = &qn * &q0;
    }
    out
}

fn eval_series(val: i64, c: &[Float], q: &Complex) -> Complex {
    let p = q.prec();
    let mut acc = Complex::zero(p);
    for cn in c.iter().rev() {
        acc = &acc * q;
        acc += &Complex::from_real(cn.clone());
    }
    &acc * &q.powi(val)
}

fn smul(a: &[Complex], b: &[Complex], n: usize) -> Vec<Complex> {
    let p = a[0].prec();
    let mut out = vec![Complex::zero(p); n];
    for (i, x) in a.iter().enumerate().take(n) {
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += &(x * y);
        }
    }
    out
}

fn sinv(a: &[Complex], n: usize) -> Vec<Complex> {
    let p = a[0].prec();
    let inv0 = a[0].recip();
    let mut out = vec![Complex::zero(p); n];
    out[0] = inv0.clone();
    for k in 1..n {
        let mut acc = Complex::zero(p);
        for j in 1..=k.min(a.len() - 1) {
            acc += &(&a[j] * &out[k - j]);
        }
        out[k] = -(&acc * &inv0);
    }
    out
}

/// Order of vanishing of `j - j(z)` and of `E_{2k}` at the CM point of a reduced form.
fn local_orders(q: &QForm, k: u32) -> (usize, usize) {
    let g = q.content();
    let prim = QForm::new(q.a / g, q.b / g, q.c / g);
    if prim == QForm::new(1, 0, 1) {
        (2, if k % 2 == 1 { 1 } else { 0 })
    } else if prim == QForm::new(1, 1, 1) {
        (3, match (2 * k) % 3 { 1 => 1, 2 => 2, _ => 0 })
    } else {
        (1, 0)
    }
}

#[derive(Clone, Debug)]
struct Pole {
    form: QForm,
    jq: Complex,
    r: Vec<Complex>,
}

/// `f = E_{2k} sum_Q sum_j r_{Q,j} (j - j_Q)^{-j}` for a set of classes of one discriminant.
#[derive(Clone, Debug)]
pub struct MeromForm {
    pub k: u32,
    pub disc: i64,
    prec: u32,
    e: (i64, Vec<Float>),
    j: (i64, Vec<Float>),
    poles: Vec<Pole>,
}

impl MeromForm {
    /// `f_{k,d}`.
    pub fn for_disc(k: u32, d: i64, prec: u32) -> Result<Self> {
        check_d(d)?;
        Self::build(k, d, &class_reps(d)?, prec)
    }

    /// `f_{k,P}`.
    pub fn for_class(k: u32, p: &QForm, prec: u32) -> Result<Self> {
        if !p.is_posdef() {
            return Err(Error::InvalidInput(format!("{p} is not positive definite")));
        }
        let (r, _) = reduce_posdef(p)?;
        Self::build(k, p.disc(), &[r], prec)
    }

    fn build(k: u32, d: i64, reps: &[QForm], prec: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("weight parameter k = {k} must be at least 2")));
        }
        if !exact_representation_available(k) {
            return Err(Error::Unsupported(format!("weight {} has cusp forms; use the direct sum", 2 * k)));
        }
        let wp = prec + 64;
        let order = (wp / 2 + 60) as i64;
        let e = series_floats(&eisenstein(2 * k, order)?, wp);
        let j = series_floats(&jfunc(order), wp);
        let terms = 3 * k as usize + 4;
        let mut poles = vec![];
        for q in reps {
            let z0 = cm_point(q, wp)?;
            let (nu, ez) = local_orders(q, k);
            let mut u = taylor_at(j.0, &j.1, &z0, terms + nu);
            let jq = u[0].clone();
            let mut ee = taylor_at(e.0, &e.1, &z0, terms);
            for c in u.iter_mut().take(nu) {
                *c = Complex::zero(wp);
            }
            for c in ee.iter_mut().take(ez) {
                *c = Complex::zero(wp);
            }
            let w: Vec<Complex> = u[nu..].to_vec();
            let winv = sinv(&w, terms);
            let maxpole = nu * k as usize;
            // column j: Laurent coefficients t^{-1..-maxpole} of E w^{-j} t^{-nu j}
            let mut cols = vec![];
            let mut wp_j = vec![Complex::one(wp)];
            wp_j.resize(terms, Complex::zero(wp));
            for jj in 1..=k as usize {
                wp_j = smul(&wp_j, &winv, terms);
                let g = smul(&ee, &wp_j, terms);
                let col: Vec<Complex> =
                    (1..=maxpole).map(|i| if nu * jj >= i { g[nu * jj - i].clone() } else { Complex::zero(wp) }).collect();
                cols.push(col);
            }
            // principal part of C a^{-k} t^{-k} (t + 2iy)^{-k}
            let two_iy = Complex::new(Float::new(wp), Float::with_val(wp, &z0.im * 2u32));
            let cst = Float::with_val(wp, -d).pow(Float::with_val(wp, k as f64 - 0.5)) / pi(wp);
            let base = two_iy.powi(-(k as i64)).scale(&(cst / Float::with_val(wp, q.a).pow(k)));
            let target: Vec<Complex> = (1..=maxpole)
                .map(|i| {
                    if i > k as usize {
                        return Complex::zero(wp);
                    }
                    let m = (k as usize - i) as u32;
                    let b = binom(&Rational::from(-(k as i64)), m);
                    (&base * &two_iy.powi(-(m as i64))).scale(&Float::with_val(wp, &b))
                })
                .collect();
            let r = complex_lstsq(&cols, &target)?;
            poles.push(Pole { form: *q, jq, r });
        }
        Ok(MeromForm { k, disc: d, prec, e, j, poles })
    }

    /// Value at `z`; errors within `2^{-P/8}` of a pole.
    pub fn eval(&self, z: &Complex) -> Result<Complex> {
        let wp = self.prec + 64;
        let zw = Complex::new(Float::with_val(wp, &z.re), Float::with_val(wp, &z.im));
        if zw.im <= 0 {
            return Err(Error::InvalidInput("z must lie in the upper half-plane".into()));
        }
        let (zs, g) = reduce_point(&zw);
        let twopi = Float::with_val(wp, pi(wp) * 2u32);
        let q = zs.scale(&twopi).mul_i().exp();
        let e = eval_series(self.e.0, &self.e.1, &q);
        let jv = eval_series(self.j.0, &self.j.1, &q);
        let thr = Float::with_val(wp, Float::i_exp(1, -(self.prec as i32) / 8));
        let mut acc = Complex::zero(wp);
        for pole in &self.poles {
            let dj = &jv - &pole.jq;
            if dj.abs() < thr {
                return Err(Error::Pole(pole.form.triple()));
            }
            let inv = dj.recip();
            let mut pw = inv.clone();
            for r in &pole.r {
                acc += &(r * &pw);
                pw = &pw * &inv;
            }
        }
        let fz = &e * &acc;
        // f(z) = (cz + d)^{-2k} f(gz)
        let czd = &zw.scale(&Float::with_val(wp, g[1][0])) + &Complex::from_real(Float::with_val(wp, g[1][1]));
        let v = &fz * &czd.powi(-2 * self.k as i64);
        Ok(Complex::new(Float::with_val(self.prec, &v.re), Float::with_val(self.prec, &v.im)))
    }

    /// Reduced representatives whose CM points are poles.
    pub fn pole_forms(&self) -> Vec<QForm> {
        self.poles.iter().map(|p| p.form).collect()
    }
}

fn check_d(d: i64) -> Result<()> {
    if d >= 0 {
        return Err(Error::InvalidInput(format!("discriminant {d} must be negative")));
    }
    if d.rem_euclid(4) > 1 {
        return Err(Error::EmptyDiscriminant(d));
    }
    Ok(())
}

/// Least squares `sum_j r_j cols[j] = target` over the complex numbers.
fn complex_lstsq(cols: &[Vec<Complex>], target: &[Complex]) -> Result<Vec<Complex>> {
    let p = target[0].prec();
    let m = target.len();
    let n = cols.len();
    let mut a = Matrix::zeros(2 * m, 2 * n, p);
    let mut b = vec![Float::new(p); 2 * m];
    for i in 0..m {
        for (j, col) in cols.iter().enumerate() {
            let c = &col[i];
            a.set(2 * i, 2 * j, c.re.clone());
            a.set(2 * i, 2 * j + 1, -c.im.clone());
            a.set(2 * i + 1, 2 * j, c.im.clone());
            a.set(2 * i + 1, 2 * j + 1, c.re.clone());
        }
        b[2 * i] = target[i].re.clone();
        b[2 * i + 1] = target[i].im.clone();
    }
    let r = lstsq(&a, &b);
    let scale = target.iter().map(|t| t.abs()).fold(Float::with_val(p, 1), |m, x| if x > m { x } else { m });
    if r.residual > Float::with_val(p, Float::i_exp(1, -(p as i32) / 2)) * scale {
        return Err(Error::InsufficientPrecision(format!("principal part fit residual {:e}", r.residual.to_f64())));
    }
    Ok((0..n).map(|j| Complex::new(r.x[2 * j].clone(), r.x[2 * j + 1].clone())).collect())
}

/// Value with an estimate of the truncation error.
#[derive(Clone, Debug)]
pub struct FValue {
    pub value: Complex,
    pub error: Float,
    pub terms: usize,
}

/// Direct partial sum over forms with `|Q(z,1)| <= radius` (optionally in the class of `class`),
/// with the tail estimated from the linear growth of the form count.
pub fn f_direct(k: u32, d: i64, class: Option<&QForm>, z: &Complex, radius: f64) -> Result<FValue> {
    check_d(d)?;
    let p = z.prec();
    let target = match class {
        Some(q) => Some(reduce_posdef(q)?.0),
        None => None,
    };
    let (x, y) = z.to_f64();
    let md = (-d) as f64;
    let amax = ((radius + md / 4.0) / (y * y)).ceil() as i64 + 1;
    let mut acc = Complex::zero(p);
    let mut count = 0usize;
    for a in 1..=amax {
        let w = (radius / a as f64).sqrt() + 1.0;
        let blo = (2.0 * a as f64 * (-x - w)).floor() as i64;
        let bhi = (2.0 * a as f64 * (-x + w)).ceil() as i64;
        for b in blo..=bhi {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let q = QForm::new(a, b, num / (4 * a));
            let v = q.eval_z(z);
            if v.abs().to_f64() > radius {
                continue;
            }
            if let Some(t) = &target {
                if reduce_posdef(&q)?.0 != *t {
                    continue;
                }
            }
            if v.abs().to_f64() < 1e-30 {
                return Err(Error::Pole(q.triple()));
            }
            acc += &v.powi(-(k as i64));
            count += 1;
        }
    }
    let cst = Float::with_val(p, -d).pow(Float::with_val(p, k as f64 - 0.5)) / pi(p);
    let kappa = count as f64 / radius;
    let tail = kappa * radius.powi(1 - k as i32) / (k as f64 - 1.0) * cst.to_f64();
    Ok(FValue { value: acc.scale(&cst), error: Float::with_val(p, tail), terms: count })
}

/// `f_{k,d}(z)`.
pub fn f_eval(k: u32, d: i64, z: &Complex) -> Result<FValue> {
    check_d(d)?;
    if is_square(-d) && d == 0 {
        return Err(Error::EmptyDiscriminant(d));
    }
    if exact_representation_available(k) {
        let v = MeromForm::for_disc(k, d, z.prec())?.eval(z)?;
        return Ok(FValue { value: v, error: Float::with_val(z.prec(), Float::i_exp(1, -(z.prec() as i32) + 16)), terms: 0 });
    }
    f_direct(k, d, None, z, 1e5)
}

/// `f_{k,P}(z)`.
pub fn f_class_eval(k: u32, p: &QForm, z: &Complex) -> Result<FValue> {
    if exact_representation_available(k) {
        let v = MeromForm::for_class(k, p, z.prec())?.eval(z)?;
        return Ok(FValue { value: v, error: Float::with_val(z.prec(), Float::i_exp(1, -(z.prec() as i32) + 16)), terms: 0 });
    }
    f_direct(k, p.disc(), Some(p), z, 1e5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qforms::mobius_int;

    #[test]
    fn matches_direct_sum() {
        let p = 128;
        let z = Complex::from_f64(p, 0.31, 1.13);
        for (k, d) in [(3u32, -3i64), (3, -4), (2, -7), (3, -20), (5, -8), (4, -15)] {
            let m = MeromForm::for_disc(k, d, p).unwrap().eval(&z).unwrap();
            let dsum = f_direct(k, d, None, &z, 4000.0).unwrap();
            let diff = (&m - &dsum.value).abs().to_f64();
            let scale = m.abs().to_f64().max(1.0);
            assert!(diff < 5.0 * dsum.error.to_f64() + 1e-12 * scale, "k={k} d={d}: {diff:e} vs est {:e}", dsum.error.to_f64());
        }
    }

    #[test]
    fn covariance() {
        let p = 160;
        let f = MeromForm::for_disc(3, -4, p).unwrap();
        let z = Complex::from_f64(p, -0.2, 0.9);
        let g = [[2, 1], [7, 4]];
        let gz = mobius_int(&g, &z);
        let czd = &z.scale(&Float::with_val(p, 7)) + &Complex::from_f64(p, 4.0, 0.0);
        let lhs = f.eval(&gz).unwrap();
        let rhs = &f.eval(&z).unwrap() * &czd.powi(6);
        assert!((&lhs - &rhs).abs().to_f64() < 1e-30 * rhs.abs().to_f64().max(1.0));
    }

    #[test]
    fn classes_sum_and_poles() {
        let p = 128;
        let z = Complex::from_f64(p, 0.1, 1.7);
        let total = f_eval(3, -20, &z).unwrap().value;
        let mut s = Complex::zero(p);
        for q in class_reps(-20).unwrap() {
            s += &f_class_eval(3, &q, &z).unwrap().value;
        }
        assert!((&total - &s).abs().to_f64() < 1e-30);
        let i = Complex::from_f64(p, 0.0, 1.0);
        assert!(matches!(f_eval(3, -4, &i), Err(Error::Pole(_))));
        assert!(matches!(f_eval(3, -6, &i), Err(Error::EmptyDiscriminant(-6))));
    }

    #[test]
    fn two_precision_anchor() {
        let a = f_eval(3, -3, &Complex::from_f64(256, 0.0, 2.0)).unwrap().value;
        let b = f_eval(3, -3, &Complex::from_f64(512, 0.0, 2.0)).unwrap().value;
        let d = Float::with_val(512, &a.re - &b.re).abs();
        assert!(d < Float::with_val(512, Float::i_exp(1, -200)));
        assert!(a.im.clone().abs() < Float::with_val(256, Float::i_exp(1, -200)));
    }
}
