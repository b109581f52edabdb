//! Integral binary quadratic forms, the modular group action, reduction,
//! class enumeration, automorphs and geodesic data.

use crate::error::{Error, Result};
use crate::numerics::complex::{fmt_real, Complex};
use crate::numerics::intmat::gcd;
use crate::numerics::quadfield::{QuadElem, QuadElemText};
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// 2x2 integer matrix `[[a, b], [c, d]]`.
pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];

pub fn mat_mul(g: &Mat2, h: &Mat2) -> Mat2 {
    let mut r = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = g[i][0] * h[0][j] + g[i][1] * h[1][j];
        }
    }
    r
}

pub fn mat_det(g: &Mat2) -> i64 {
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

/// Inverse of a determinant-one matrix.
pub fn mat_inv(g: &Mat2) -> Mat2 {
    [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]]
}

/// The form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct QForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl From<[i64; 3]> for QForm {
    fn from(v: [i64; 3]) -> Self {
        QForm::new(v[0], v[1], v[2])
    }
}

impl From<QForm> for [i64; 3] {
    fn from(q: QForm) -> Self {
        [q.a, q.b, q.c]
    }
}

impl std::fmt::Display for QForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl QForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn triple(&self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn content(&self) -> i64 {
        gcd(gcd(self.a, self.b), self.c)
    }

    pub fn neg(&self) -> QForm {
        QForm::new(-self.a, -self.b, -self.c)
    }

    pub fn is_posdef(&self) -> bool {
        self.disc() < 0 && self.a > 0
    }

    /// `Q(x, y)` at integers.
    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// `Q(z, 1) = a z^2 + b z + c`.
    pub fn eval_z(&self, z: &Complex) -> Complex {
        let p = z.prec();
        let z2 = z * z;
        let mut r = z2.scale(&Float::with_val(p, self.a));
        r += &z.scale(&Float::with_val(p, self.b));
        r.re += self.c;
        r
    }
}

/// `g.Q = Q o g^{-1}`; the discriminant is preserved.
pub fn act(g: &Mat2, q: &QForm) -> QForm {
    try_act(g, q).expect("integer overflow in form action")
}

pub fn try_act(g: &Mat2, q: &QForm) -> Result<QForm> {
    debug_assert_eq!(mat_det(g), 1);
    let gi = mat_inv(g);
    let (p, qq, r, s) = (gi[0][0] as i128, gi[0][1] as i128, gi[1][0] as i128, gi[1][1] as i128);
    let (a, b, c) = (q.a as i128, q.b as i128, q.c as i128);
    let na = a * p * p + b * p * r + c * r * r;
    let nb = 2 * a * p * qq + b * (p * s + qq * r) + 2 * c * r * s;
    let nc = a * qq * qq + b * qq * s + c * s * s;
    let cv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("form action"));
    Ok(QForm::new(cv(na)?, cv(nb)?, cv(nc)?))
}

fn check_disc(d: i64) -> Result<()> {
    if d == 0 || d.rem_euclid(4) > 1 {
        return Err(Error::EmptyDiscriminant(d));
    }
    if d > 0 && is_square(d) {
        return Err(Error::SquareDiscriminant(d));
    }
    Ok(())
}

pub fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n);
    r * r == n
}

pub fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn is_reduced_posdef(q: &QForm) -> bool {
    q.b.abs() <= q.a && q.a <= q.c && (q.b >= 0 || (q.b.abs() != q.a && q.a != q.c))
}

/// Gauss reduction: returns the reduced form `R` and `g` with `act(g, Q) = R`.
pub fn reduce_posdef(q: &QForm) -> Result<(QForm, Mat2)> {
    if !q.is_posdef() {
        return Err(Error::InvalidInput(format!("{q} is not positive definite")));
    }
    let mut cur = *q;
    let mut g = IDENTITY;
    loop {
        // translate b into (-a, a]
        let two_a = 2 * cur.a;
        let t = (cur.a - cur.b).div_euclid(two_a);
        if t != 0 {
            // Q o [[1, t], [0, 1]]
            let m = [[1, -t], [0, 1]];
            cur = act(&m, &cur);
            g = mat_mul(&m, &g);
        }
        if cur.a > cur.c || (cur.a == cur.c && cur.b < 0) {
            // Q o [[0, -1], [1, 0]]
            let m = [[0, 1], [-1, 0]];
            cur = act(&m, &cur);
            g = mat_mul(&m, &g);
            continue;
        }
        break;
    }
    debug_assert!(is_reduced_posdef(&cur));
    Ok((cur, g))
}

/// Reduced indefinite form: `0 < b < sqrt D` and `sqrt D - b < 2|a| < sqrt D + b`.
pub fn is_reduced_indef(q: &QForm) -> bool {
    let d = q.disc();
    let b = q.b;
    let a2 = 2 * q.a.abs();
    b > 0 && b * b < d && {
        // sqrt D - b < 2|a|  <=>  sqrt D < 2|a| + b
        let s = a2 + b;
        s > 0 && s * s > d
    } && {
        // 2|a| < sqrt D + b  <=>  2|a| - b < sqrt D
        let s = a2 - b;
        s < 0 || s * s < d
    }
}

/// One step of the cycle operator: `Q o [[0, -1], [1, s]]`, returned with `s`.
fn rho(q: &QForm) -> (QForm, i64) {
    let d = q.disc();
    let c = q.c;
    let ac = c.abs();
    let two_c = 2 * ac;
    // choose r = -b + 2 c s in the normalizing window
    let base = (-q.b).rem_euclid(two_c);
    let r = if ac * ac > d {
        // -|c| < r <= |c|
        if base > ac {
            base - two_c
        } else {
            base
        }
    } else {
        // sqrt D - 2|c| < r < sqrt D, largest r in its class below sqrt D
        let mut r = base;
        while r * r < d || r < 0 {
            r += two_c;
        }
        // now r >= sqrt D
        r - two_c
    };
    let s = (r + q.b) / (2 * c);
    debug_assert_eq!(r, -q.b + 2 * c * s);
    let nc = (r * r - d) / (4 * c);
    (QForm::new(c, r, nc), s)
}

fn rho_matrix(s: i64) -> Mat2 {
    // right action by [[0,-1],[1,s]] equals act by its inverse
    [[s, 1], [-1, 0]]
}

/// Reduces an indefinite form, returning `(R, g)` with `act(g, Q) = R`.
pub fn reduce_indef(q: &QForm) -> Result<(QForm, Mat2)> {
    let d = q.disc();
    check_disc(d)?;
    if d < 0 {
        return Err(Error::InvalidInput(format!("{q} is definite")));
    }
    let mut cur = *q;
    let mut g = IDENTITY;
    let mut steps = 0;
    while !is_reduced_indef(&cur) {
        let (n, s) = rho(&cur);
        let m = rho_matrix(s);
        g = mat_mul(&m, &g);
        cur = n;
        steps += 1;
        if steps > 10_000 {
            return Err(Error::Overflow("indefinite reduction"));
        }
    }
    debug_assert_eq!(act(&g, q), cur);
    Ok((cur, g))
}

/// The cycle of reduced forms through a reduced `R`, with the step matrices.
pub fn cycle(r: &QForm) -> Vec<(QForm, Mat2)> {
    let mut out = vec![];
    let mut cur = *r;
    loop {
        let (n, s) = rho(&cur);
        out.push((cur, rho_matrix(s)));
        cur = n;
        if cur == *r {
            break;
        }
        assert!(out.len() < 1_000_000, "cycle did not close");
    }
    out
}

fn canonical_in_cycle(cyc: &[(QForm, Mat2)]) -> QForm {
    cyc.iter()
        .map(|(f, _)| *f)
        .filter(|f| f.a > 0)
        .min_by_key(|f| (f.a, f.b, f.c))
        .expect("cycle contains a form with a > 0")
}

fn reduced_indef_forms(d: i64) -> Vec<QForm> {
    let mut out = vec![];
    let sd = isqrt(d);
    for b in 1..=sd {
        if (b * b - d).rem_euclid(4) != 0 || b * b >= d {
            continue;
        }
        let ac = (b * b - d) / 4; // negative
        let m = -ac;
        for a in 1..=m {
            if m % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let q = QForm::new(sa, b, ac / sa);
                if is_reduced_indef(&q) {
                    out.push(q);
                }
            }
        }
    }
    out
}

/// One representative per class of forms of discriminant `d`
/// (positive definite only when `d < 0`); imprimitive forms included.
pub fn class_reps(d: i64) -> Result<Vec<QForm>> {
    check_disc(d)?;
    if d < 0 {
        let m = -d;
        let mut out = vec![];
        let amax = isqrt(m / 3) + 1;
        for a in 1..=amax {
            for b in -a + 1..=a {
                let num = b * b + m;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                let q = QForm::new(a, b, c);
                if is_reduced_posdef(&q) {
                    out.push(q);
                }
            }
        }
        out.sort();
        return Ok(out);
    }
    let mut remaining: BTreeSet<QForm> = reduced_indef_forms(d).into_iter().collect();
    let mut reps = vec![];
    while let Some(&f) = remaining.iter().next() {
        let cyc = cycle(&f);
        for (g, _) in &cyc {
            remaining.remove(g);
        }
        reps.push(canonical_in_cycle(&cyc));
    }
    reps.sort();
    Ok(reps)
}

/// Exact Pell data of an indefinite form.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorph {
    pub t: rug::Integer,
    pub u: rug::Integer,
    /// Generator of the stabilizer.
    pub m: Mat2,
    /// `(t + u sqrt D) / 2` for the discriminant `D` of the form.
    pub eps: QuadElem,
}

/// Generator of the stabilizer of `A` from the minimal solution of `t^2 - D u^2 = 4`.
pub fn automorph(a: &QForm) -> Result<Automorph> {
    let d = a.disc();
    if d <= 0 {
        return Err(Error::InvalidInput(format!("{a} is not indefinite")));
    }
    check_disc(d)?;
    let g = a.content();
    let p = QForm::new(a.a / g, a.b / g, a.c / g);
    let d0 = p.disc();
    let (r, h) = reduce_indef(&p)?;
    let cyc = cycle(&r);
    let mut prod = IDENTITY;
    for (_, m) in &cyc {
        prod = mat_mul(m, &prod);
    }
    debug_assert_eq!(act(&prod, &r), r);
    // stabilizer of p is h^{-1} prod h
    let gen = mat_mul(&mat_inv(&h), &mat_mul(&prod, &h));
    let mut t = gen[0][0] + gen[1][1];
    let mut u = gen[1][0] / p.a;
    debug_assert_eq!(gen[1][0] % p.a, 0);
    if t < 0 {
        t = -t;
        u = -u;
    }
    let u = u.abs();
    debug_assert_eq!(t * t - d0 * u * u, 4);
    // M_A from the primitive form; identical for A = g p
    let m = [[(t - p.b * u) / 2, -p.c * u], [p.a * u, (t + p.b * u) / 2]];
    debug_assert_eq!(act(&m, a), *a);
    // in terms of D = g^2 D0: u sqrt D0 = (u / g) sqrt D
    let eps = QuadElem::new(Rational::from((t, 2)), Rational::from((u, 2 * g)), d);
    Ok(Automorph { t: t.into(), u: u.into(), m, eps })
}

/// Real 2x2 matrix.
pub type RMat2 = [[Float; 2]; 2];

/// Derived data of the closed geodesic attached to `A`.
#[derive(Clone, Debug)]
pub struct GeodesicClass {
    pub form: QForm,
    pub disc: i64,
    pub w: Float,
    pub w_prime: Float,
    pub sigma: RMat2,
    pub automorph: Automorph,
    /// `ln eps` in the first embedding.
    pub log_eps: Float,
}

pub fn geodesic(a: &QForm, prec: u32) -> Result<GeodesicClass> {
    let d = a.disc();
    if d <= 0 {
        return Err(Error::InvalidInput(format!("{a} is not indefinite")));
    }
    check_disc(d)?;
    if a.a <= 0 {
        return Err(Error::NegativeLeading(a.triple()));
    }
    let aut = automorph(a)?;
    let sd = Float::with_val(prec, d).sqrt();
    let two_a = Float::with_val(prec, 2 * a.a);
    let w = Float::with_val(prec, -a.b - Float::with_val(prec, &sd)) / &two_a;
    let wp = Float::with_val(prec, -a.b + Float::with_val(prec, &sd)) / &two_a;
    let scale = Float::with_val(prec, a.a).sqrt() / Float::with_val(prec, sd.sqrt_ref());
    let sigma = [
        [Float::with_val(prec, &scale * &wp), Float::with_val(prec, &scale * &w)],
        [scale.clone(), scale.clone()],
    ];
    let (e1, _) = aut.eps.embed(prec);
    let log_eps = e1.ln();
    Ok(GeodesicClass { form: *a, disc: d, w, w_prime: wp, sigma, automorph: aut, log_eps })
}

pub fn mobius(g: &RMat2, z: &Complex) -> Complex {
    let p = z.prec();
    let num = &z.scale(&g[0][0]) + &Complex::from_real(Float::with_val(p, &g[0][1]));
    let den = &z.scale(&g[1][0]) + &Complex::from_real(Float::with_val(p, &g[1][1]));
    num.div(&den)
}

pub fn mobius_int(g: &Mat2, z: &Complex) -> Complex {
    let p = z.prec();
    let r: RMat2 = [
        [Float::with_val(p, g[0][0]), Float::with_val(p, g[0][1])],
        [Float::with_val(p, g[1][0]), Float::with_val(p, g[1][1])],
    ];
    mobius(&r, z)
}

impl GeodesicClass {
    /// `z = sigma(i t)` for `t = e^s`, with `dz/ds`.
    pub fn point(&self, s: &Complex) -> (Complex, Complex) {
        let w = Complex::i(s.prec()) * s.exp();
        let z = mobius(&self.sigma, &w);
        // dz/dw = 1 / (gamma w + delta)^2 for det sigma = 1, and dw/ds = w
        let den = &w.scale(&self.sigma[1][0]) + &Complex::from_real(self.sigma[1][1].clone());
        let dz = w.div(&(&den * &den));
        (z, dz)
    }

    pub fn prec(&self) -> u32 {
        self.w.prec()
    }

    pub fn to_text(&self, digits: usize) -> GeodesicText {
        let m = self.automorph.m;
        GeodesicText {
            form: self.form,
            disc: self.disc,
            w: fmt_real(&self.w, digits),
            w_prime: fmt_real(&self.w_prime, digits),
            sigma: [
                [fmt_real(&self.sigma[0][0], digits), fmt_real(&self.sigma[0][1], digits)],
                [fmt_real(&self.sigma[1][0], digits), fmt_real(&self.sigma[1][1], digits)],
            ],
            automorph: m,
            t: self.automorph.t.to_string(),
            u: self.automorph.u.to_string(),
            eps: self.automorph.eps.to_text(),
            eps_decimal: fmt_real(&self.automorph.eps.embed(self.prec()).0, digits),
        }
    }
}

/// Serialized geodesic data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeodesicText {
    pub form: QForm,
    pub disc: i64,
    pub w: String,
    pub w_prime: String,
    pub sigma: [[String; 2]; 2],
    pub automorph: Mat2,
    pub t: String,
    pub u: String,
    pub eps: QuadElemText,
    pub eps_decimal: String,
}

/// CM point `(-b + i sqrt|d|) / (2a)` of a positive definite form.
pub fn cm_point(q: &QForm, prec: u32) -> Result<Complex> {
    if !q.is_posdef() {
        return Err(Error::InvalidInput(format!("{q} is not positive definite")));
    }
    let d = q.disc();
    let two_a = Float::with_val(prec, 2 * q.a);
    let re = Float::with_val(prec, -q.b) / &two_a;
    let im = Float::with_val(prec, -d).sqrt() / two_a;
    Ok(Complex::new(re, im))
}

/// Reduces `z` into the standard fundamental domain, returning `(gz, g)`.
pub fn reduce_point(z: &Complex) -> (Complex, Mat2) {
    let p = z.prec();
    let mut cur = z.clone();
    let mut g = IDENTITY;
    for _ in 0..10_000 {
        let n = Float::with_val(p, cur.re.round_ref());
        let n_i = n.to_f64() as i64;
        if n_i != 0 {
            cur.re -= &n;
            g = mat_mul(&[[1, -n_i], [0, 1]], &g);
        }
        if cur.norm_sqr() < 1 {
            cur = -cur.recip();
            g = mat_mul(&[[0, -1], [1, 0]], &g);
            continue;
        }
        break;
    }
    (cur, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conj_matrix(g: &Mat2, q: &QForm) -> QForm {
        // g X g^{-1} in the model X = [[b/2, c], [-a, -b/2]], scaled by 2
        let x = [[q.b, 2 * q.c], [-2 * q.a, -q.b]];
        let y = mat_mul(&mat_mul(g, &x), &mat_inv(g));
        QForm::new(-y[1][0] / 2, y[0][0], y[0][1] / 2)
    }

    #[test]
    fn action_matches_matrix_conjugation() {
        let q = QForm::new(3, -5, 7);
        for g in [[[1, 1], [0, 1]], [[0, -1], [1, 0]], [[2, 3], [1, 2]], [[5, -2], [-7, 3]]] {
            assert_eq!(act(&g, &q), conj_matrix(&g, &q));
        }
    }

    #[test]
    fn action_law_and_disc() {
        let q = QForm::new(1, 0, 1);
        let g = [[1, 1], [0, 1]];
        let h = [[2, 1], [1, 1]];
        assert_eq!(act(&g, &act(&h, &q)), act(&mat_mul(&g, &h), &q));
        assert_eq!(act(&g, &q).disc(), -4);
        assert_eq!(act(&IDENTITY, &q), q);
    }

    #[test]
    fn posdef_reduction() {
        let (r, g) = reduce_posdef(&QForm::new(3, 2, 2)).unwrap();
        assert_eq!(r, QForm::new(2, 2, 3));
        assert_eq!(act(&g, &QForm::new(3, 2, 2)), r);
        assert_eq!(reduce_posdef(&QForm::new(1, 0, 1)).unwrap().0, QForm::new(1, 0, 1));
        assert!(reduce_posdef(&QForm::new(1, 3, 1)).is_err());
    }

    #[test]
    fn class_lists() {
        assert_eq!(class_reps(-3).unwrap(), vec![QForm::new(1, 1, 1)]);
        assert_eq!(class_reps(-20).unwrap(), vec![QForm::new(1, 0, 5), QForm::new(2, 2, 3)]);
        assert_eq!(class_reps(-12).unwrap(), vec![QForm::new(1, 0, 3), QForm::new(2, 2, 2)]);
        assert_eq!(class_reps(5).unwrap(), vec![QForm::new(1, 1, -1)]);
        assert_eq!(class_reps(8).unwrap(), vec![QForm::new(1, 2, -1)]);
        assert_eq!(class_reps(13).unwrap(), vec![QForm::new(1, 3, -1)]);
        assert!(matches!(class_reps(6), Err(Error::EmptyDiscriminant(6))));
        assert!(matches!(class_reps(9), Err(Error::SquareDiscriminant(9))));
    }

    fn pell_brute(d: i64) -> (i64, i64) {
        for u in 1.. {
            let t2 = d * u * u + 4;
            if is_square(t2) {
                return (isqrt(t2), u);
            }
        }
        unreachable!()
    }

    #[test]
    fn automorph_examples() {
        let a = automorph(&QForm::new(1, 1, -1)).unwrap();
        assert_eq!((a.t.to_i64().unwrap(), a.u.to_i64().unwrap()), (3, 1));
        assert_eq!(a.m, [[1, 1], [1, 2]]);
        assert_eq!(a.eps, QuadElem::new(Rational::from((3, 2)), Rational::from((1, 2)), 5));
        let a = automorph(&QForm::new(1, 0, -2)).unwrap();
        assert_eq!((a.t.to_i64().unwrap(), a.u.to_i64().unwrap()), (6, 2));
        assert_eq!(a.m, [[3, 4], [2, 3]]);
    }

    #[test]
    fn automorph_matches_brute_force_pell() {
        for d in [5i64, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44, 60, 61, 85] {
            for q in class_reps(d).unwrap() {
                let a = automorph(&q).unwrap();
                let g = q.content();
                let (t, u) = pell_brute(d / (g * g));
                assert_eq!((a.t.to_i64().unwrap(), a.u.to_i64().unwrap()), (t, u), "D = {d}, {q}");
                assert_eq!(act(&a.m, &q), q);
                assert_eq!(mat_det(&a.m), 1);
                assert_eq!(a.eps.norm(), Rational::from(1));
            }
        }
    }

    #[test]
    fn indefinite_classes_brute_force() {
        // every form in a box reduces into exactly one listed cycle
        for d in [5i64, 12, 13, 40, 60, 65] {
            let reps = class_reps(d).unwrap();
            let key = |q: &QForm| {
                let (r, _) = reduce_indef(q).unwrap();
                canonical_in_cycle(&cycle(&r))
            };
            for a in -6i64..=6 {
                for b in -12i64..=12 {
                    if a == 0 || (b * b - d) % (4 * a) != 0 {
                        continue;
                    }
                    let c = (b * b - d) / (4 * a);
                    let q = QForm::new(a, b, c);
                    assert!(reps.contains(&key(&q)), "D = {d}, {q}");
                }
            }
            for r in &reps {
                assert_eq!(key(r), *r);
            }
        }
    }

    #[test]
    fn geodesic_data() {
        let gcl = geodesic(&QForm::new(1, 1, -1), 256).unwrap();
        assert!((gcl.w.to_f64() + 1.618033988749895).abs() < 1e-14);
        assert!((gcl.w_prime.to_f64() - 0.6180339887498949).abs() < 1e-14);
        let s = &gcl.sigma;
        let det = Float::with_val(256, &s[0][0] * &s[1][1]) - Float::with_val(256, &s[0][1] * &s[1][0]);
        assert!(Float::with_val(256, det - 1u32).abs() < 1e-70);
        assert!(matches!(geodesic(&QForm::new(-1, 1, 1), 64), Err(Error::NegativeLeading(_))));
    }

    #[test]
    fn cm_points() {
        let z = cm_point(&QForm::new(1, 0, 1), 128).unwrap();
        assert!(z.re.is_zero() && (z.im.to_f64() - 1.0).abs() < 1e-30);
        let q = QForm::new(1, 1, 1);
        let z = cm_point(&q, 256).unwrap();
        assert!(q.eval_z(&z).abs() < Float::with_val(256, Float::i_exp(1, -248)));
    }

    #[test]
    fn point_reduction() {
        let z = Complex::from_f64(128, 0.37, 0.01);
        let (w, g) = reduce_point(&z);
        assert!(w.norm_sqr() >= 1 && w.re.to_f64().abs() <= 0.5);
        let w2 = mobius_int(&g, &z);
        assert!((&w2 - &w).abs() < 1e-25);
    }
}
