//! Exact q-series: scalar level-one forms and vector-valued series over a
//! discriminant group, with Rankin-Cohen brackets and the constant-term pairing.

use crate::error::{Error, Result};
use crate::numerics::complex::Complex;
use crate::numerics::rational::{binom, parse_rational, rat_to_string};
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Laurent series `sum_{i} c_i q^{val + i}` known below exponent `val + len`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarQSeries {
    pub val: i64,
    pub coeffs: Vec<Rational>,
    pub weight: Rational,
}

impl ScalarQSeries {
    pub fn new(val: i64, coeffs: Vec<Rational>, weight: Rational) -> Self {
        ScalarQSeries { val, coeffs, weight }
    }

    pub fn one(order: i64) -> Self {
        let mut c = vec![Rational::new(); order.max(1) as usize];
        c[0] = Rational::from(1);
        ScalarQSeries::new(0, c, Rational::new())
    }

    /// Exclusive bound on the known exponents.
    pub fn order(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn coeff(&self, n: i64) -> Rational {
        if n < self.val || n >= self.order() {
            return Rational::new();
        }
        self.coeffs[(n - self.val) as usize].clone()
    }

    pub fn truncate(&self, order: i64) -> Self {
        let len = (order - self.val).clamp(0, self.coeffs.len() as i64) as usize;
        ScalarQSeries::new(self.val, self.coeffs[..len].to_vec(), self.weight.clone())
    }

    pub fn mul(&self, o: &ScalarQSeries) -> Self {
        let val = self.val + o.val;
        let order = (self.val + o.order()).min(o.val + self.order());
        let len = (order - val).max(0) as usize;
        let mut c = vec![Rational::new(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                c[i + j] += Rational::from(a * b);
            }
        }
        ScalarQSeries::new(val, c, Rational::from(&self.weight + &o.weight))
    }

    pub fn add(&self, o: &ScalarQSeries) -> Self {
        let val = self.val.min(o.val);
        let order = self.order().min(o.order());
        let c = (val..order).map(|n| self.coeff(n) + o.coeff(n)).collect();
        ScalarQSeries::new(val, c, self.weight.clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let c = self.coeffs.iter().map(|x| Rational::from(x * s)).collect();
        ScalarQSeries::new(self.val, c, self.weight.clone())
    }

    /// Drops leading zero coefficients.
    pub fn normalize(mut self) -> Self {
        while !self.coeffs.is_empty() && self.coeffs[0] == 0 {
            self.coeffs.remove(0);
            self.val += 1;
        }
        self
    }

    /// Inverse of a series whose leading coefficient is nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let s = self.clone().normalize();
        if s.coeffs.is_empty() {
            return Err(Error::InvalidInput("cannot invert a zero series".into()));
        }
        let n = s.coeffs.len();
        let lead = s.coeffs[0].clone();
        let mut inv = vec![Rational::new(); n];
        inv[0] = Rational::from(lead.recip_ref());
        for k in 1..n {
            let mut acc = Rational::new();
            for j in 1..=k {
                acc += Rational::from(&s.coeffs[j] * &inv[k - j]);
            }
            inv[k] = -acc / &lead;
        }
        Ok(ScalarQSeries::new(-s.val, inv, Rational::from(-&s.weight)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = ScalarQSeries::one(self.order() * e as i64 + 1);
        acc.weight = Rational::new();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `q d/dq`.
    pub fn derivative(&self) -> Self {
        let c = self.coeffs.iter().enumerate().map(|(i, x)| Rational::from(x * (self.val + i as i64))).collect();
        ScalarQSeries::new(self.val, c, Rational::from(&self.weight + 2u32))
    }

    /// `f(q^m)`.
    pub fn dilate(&self, m: i64) -> Self {
        let val = self.val * m;
        let order = self.order() * m - (m - 1);
        let mut c = vec![Rational::new(); (order - val) as usize];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i * m as usize] = x.clone();
        }
        ScalarQSeries::new(val, c, self.weight.clone())
    }
}

fn bernoulli(n: usize) -> Rational {
    let mut b = vec![Rational::new(); n + 1];
    b[0] = Rational::from(1);
    for m in 1..=n {
        let mut acc = Rational::new();
        for k in 0..m {
            let c = binom(&Rational::from(m as i64 + 1), k as u32);
            acc += c * &b[k];
        }
        b[m] = -acc / (m as u32 + 1);
    }
    b[n].clone()
}

fn sigma(n: i64, k: u32) -> rug::Integer {
    let mut s = rug::Integer::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += rug::Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += rug::Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

use rug::ops::Pow;

/// `E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n` for even `k >= 2`, known below `order`.
pub fn eisenstein(k: u32, order: i64) -> Result<ScalarQSeries> {
    if k % 2 != 0 || k < 2 {
        return Err(Error::InvalidInput(format!("Eisenstein series needs even k >= 4, got {k}")));
    }
    let f = Rational::from(-2 * k as i64) / bernoulli(k as usize);
    let mut c = vec![Rational::new(); order.max(1) as usize];
    c[0] = Rational::from(1);
    for n in 1..order {
        c[n as usize] = Rational::from(&f * sigma(n, k - 1));
    }
    Ok(ScalarQSeries::new(0, c, Rational::from(k)))
}

/// `Delta = (E4^3 - E6^2) / 1728 = q - 24 q^2 + ...`.
pub fn delta(order: i64) -> ScalarQSeries {
    let e4 = eisenstein(4, order).unwrap();
    let e6 = eisenstein(6, order).unwrap();
    let d = e4.pow(3).add(&e6.pow(2).scale(&Rational::from(-1)));
    let mut d = d.scale(&Rational::from((1, 1728))).truncate(order);
    d.weight = Rational::from(12);
    d
}

/// `j = E4^3 / Delta`, known below `order`.
pub fn jfunc(order: i64) -> ScalarQSeries {
    let e4 = eisenstein(4, order + 2).unwrap();
    let d = delta(order + 2).normalize();
    let mut j = e4.pow(3).mul(&d.inverse().unwrap()).truncate(order);
    j.weight = Rational::new();
    j
}

/// `prod_{n >= 1} (1 - q^n)^e`.
pub fn eta_product(e: i64, order: i64) -> ScalarQSeries {
    let mut acc = ScalarQSeries::one(order);
    for n in 1..order {
        let mut f = vec![Rational::new(); order as usize];
        f[0] = Rational::from(1);
        f[n as usize] = Rational::from(-1);
        let fac = ScalarQSeries::new(0, f, Rational::new());
        let fac = if e >= 0 { fac.pow(e as u32) } else { fac.inverse().unwrap().pow((-e) as u32) };
        acc = acc.mul(&fac).truncate(order);
    }
    acc.weight = Rational::from((e, 2));
    acc
}

/// Discriminant-group data a vector-valued series needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDesc {
    pub label: String,
    /// `q(γ)` modulo 1.
    #[serde(with = "rat_vec")]
    pub qvals: Vec<Rational>,
    /// `true` for the dual Weil representation: exponents lie in `-q(γ) + Z`.
    pub dual: bool,
}

mod rat_vec {
    use super::*;
    use serde::{Deserializer, Serializer};
    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rat_to_string))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).ok_or_else(|| serde::de::Error::custom("bad rational")))
            .collect()
    }
}

impl GroupDesc {
    pub fn new(label: &str, qvals: Vec<Rational>, dual: bool) -> Self {
        GroupDesc { label: label.into(), qvals, dual }
    }

    pub fn len(&self) -> usize {
        self.qvals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qvals.is_empty()
    }

    pub fn dualized(&self) -> Self {
        GroupDesc { label: self.label.clone(), qvals: self.qvals.clone(), dual: !self.dual }
    }

    /// Whether `e` is an admissible exponent of component `g`.
    pub fn admissible(&self, g: usize, e: &Rational) -> bool {
        let shift = if self.dual { Rational::from(e + &self.qvals[g]) } else { Rational::from(e - &self.qvals[g]) };
        *shift.denom() == 1
    }
}

/// Vector-valued q-series with exact rational exponents and coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct VVQSeries {
    pub group: GroupDesc,
    pub weight: Rational,
    pub comps: Vec<BTreeMap<Rational, Rational>>,
    /// All exponents below `order` are stored (zero coefficients omitted).
    pub order: Rational,
}

impl VVQSeries {
    pub fn zero(group: GroupDesc, weight: Rational, order: Rational) -> Self {
        let n = group.len();
        VVQSeries { group, weight, comps: vec![BTreeMap::new(); n], order }
    }

    pub fn coeff(&self, g: usize, e: &Rational) -> Rational {
        self.comps[g].get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: usize, e: Rational, c: Rational) {
        if c == 0 || e >= self.order {
            return;
        }
        debug_assert!(self.group.admissible(g, &e), "exponent {e} not admissible in component {g}");
        let ent = self.comps[g].entry(e.clone()).or_default();
        *ent += c;
        if *ent == 0 {
            self.comps[g].remove(&e);
        }
    }

    /// Smallest stored exponent.
    pub fn min_exp(&self) -> Option<Rational> {
        self.comps.iter().filter_map(|c| c.keys().next().cloned()).min()
    }

    /// Coefficient `a(d, γ)` at exponent `d/4` with `γ ≡ d (mod 2)` for series on `Z/2`.
    pub fn plus_coeff(&self, d: i64) -> Rational {
        let g = d.rem_euclid(2) as usize;
        self.coeff(g, &Rational::from((d, 4)))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = self.clone();
        for c in out.comps.iter_mut() {
            for v in c.values_mut() {
                *v *= s;
            }
            c.retain(|_, v| *v != 0);
        }
        out
    }

    pub fn add(&self, o: &VVQSeries) -> Result<Self> {
        if self.group != o.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group.label, o.group.label)));
        }
        let order = self.order.clone().min(o.order.clone());
        let mut out = VVQSeries::zero(self.group.clone(), self.weight.clone(), order);
        for s in [self, o] {
            for (g, c) in s.comps.iter().enumerate() {
                for (e, v) in c {
                    out.add_term(g, e.clone(), v.clone());
                }
            }
        }
        Ok(out)
    }

    /// Product with a scalar level-one series in `q`.
    pub fn mul_scalar(&self, h: &ScalarQSeries) -> Self {
        let minf = self.min_exp().unwrap_or_else(|| self.order.clone());
        let order = (Rational::from(&self.order + h.val)).min(minf + h.order());
        let mut out = VVQSeries::zero(self.group.clone(), Rational::from(&self.weight + &h.weight), order);
        for (g, c) in self.comps.iter().enumerate() {
            for (e, v) in c {
                for (i, hc) in h.coeffs.iter().enumerate() {
                    if *hc == 0 {
                        continue;
                    }
                    let ne = Rational::from(e + (h.val + i as i64));
                    if ne >= out.order {
                        break;
                    }
                    out.add_term(g, ne, Rational::from(v * hc));
                }
            }
        }
        out
    }

    /// `(q d/dq)^s` applied coefficientwise.
    pub fn derivative(&self, s: u32) -> Self {
        let mut out = self.clone();
        for c in out.comps.iter_mut() {
            for (e, v) in c.iter_mut() {
                for _ in 0..s {
                    *v *= e;
                }
            }
            c.retain(|_, v| *v != 0);
        }
        out.weight += 2 * s;
        out
    }

    /// Serre derivative `D - (k/12) E2`.
    pub fn serre(&self) -> Self {
        let span = Rational::from(&self.order - self.min_exp().unwrap_or_default());
        let n = span.ceil().numer().to_i64().unwrap_or(0).max(1) + 1;
        let e2 = eisenstein(2, n).unwrap();
        let k12 = Rational::from(&self.weight / 12u32);
        let d = self.derivative(1);
        let mut corr = self.mul_scalar(&e2).scale(&Rational::from(-k12));
        corr.weight = d.weight.clone();
        let mut out = d.add(&corr).unwrap();
        out.weight = Rational::from(&self.weight + 2u32);
        out
    }

    /// Numeric value at `τ`.
    pub fn eval(&self, tau: &Complex) -> Vec<Complex> {
        let p = tau.prec();
        self.comps
            .iter()
            .map(|c| {
                let mut s = Complex::zero(p);
                for (e, v) in c {
                    let ef = Float::with_val(p, e);
                    let arg = tau.scale(&ef).scale(&Float::with_val(p, 2u32)).mul_i();
                    let t = arg.scale(&crate::numerics::complex::pi(p)).exp();
                    s += &t.scale(&Float::with_val(p, v));
                }
                s
            })
            .collect()
    }

    pub fn to_text(&self) -> VVQSeriesText {
        VVQSeriesText {
            group: self.group.clone(),
            weight: rat_to_string(&self.weight),
            components: self
                .comps
                .iter()
                .enumerate()
                .map(|(g, c)| ComponentText {
                    gamma: g,
                    terms: c
                        .iter()
                        .map(|(e, v)| TermText { exp: rat_to_string(e), coeff: rat_to_string(v) })
                        .collect(),
                })
                .collect(),
            order: rat_to_string(&self.order),
        }
    }

    pub fn from_text(t: &VVQSeriesText) -> Option<Self> {
        let mut s = VVQSeries::zero(t.group.clone(), parse_rational(&t.weight)?, parse_rational(&t.order)?);
        for c in &t.components {
            for term in &c.terms {
                s.add_term(c.gamma, parse_rational(&term.exp)?, parse_rational(&term.coeff)?);
            }
        }
        Some(s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermText {
    pub exp: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComponentText {
    pub gamma: usize,
    pub terms: Vec<TermText>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VVQSeriesText {
    pub group: GroupDesc,
    pub weight: String,
    pub components: Vec<ComponentText>,
    pub order: String,
}

/// Rankin-Cohen bracket on tensor components; component `(i, j)` is `i * |G_g| + j`.
pub fn rankin_cohen(f: &VVQSeries, kappa: &Rational, g: &VVQSeries, ell: &Rational, n: i64) -> Result<VVQSeries> {
    if n < 0 {
        return Err(Error::InvalidInput("Rankin-Cohen index must be >= 0".into()));
    }
    let n = n as u32;
    let nf = f.group.len();
    let ng = g.group.len();
    let mut qvals = Vec::with_capacity(nf * ng);
    for i in 0..nf {
        for j in 0..ng {
            // exponents of the product lie in (±q_i) + (±q_j) + Z
            let a = if f.group.dual { Rational::from(-&f.group.qvals[i]) } else { f.group.qvals[i].clone() };
            let b = if g.group.dual { Rational::from(-&g.group.qvals[j]) } else { g.group.qvals[j].clone() };
            let s = a + b;
            let s = Rational::from(&s - s.clone().floor());
            qvals.push(s);
        }
    }
    let group = GroupDesc::new(&format!("{}x{}", f.group.label, g.group.label), qvals, false);
    let fmin = f.min_exp().unwrap_or_else(|| f.order.clone());
    let gmin = g.min_exp().unwrap_or_else(|| g.order.clone());
    let order = Rational::from(&f.order + &gmin).min(Rational::from(&g.order + &fmin));
    let weight = Rational::from(kappa + ell) + 2 * n;
    let mut out = VVQSeries::zero(group, weight, order);
    let top_f = Rational::from(kappa + (n as i64 - 1));
    let top_g = Rational::from(ell + (n as i64 - 1));
    let coefs: Vec<(u32, Rational)> = (0..=n)
        .map(|s| {
            let sign = if s % 2 == 0 { 1 } else { -1 };
            (s, binom(&top_f, s) * binom(&top_g, n - s) * sign)
        })
        .collect();
    for (i, cf) in f.comps.iter().enumerate() {
        for (j, cg) in g.comps.iter().enumerate() {
            let idx = i * ng + j;
            for (ea, va) in cf {
                for (eb, vb) in cg {
                    let e = Rational::from(ea + eb);
                    if e >= out.order {
                        break;
                    }
                    let mut c = Rational::new();
                    for (s, k) in &coefs {
                        let pa = pow_rat(ea, n - s);
                        let pb = pow_rat(eb, *s);
                        c += Rational::from(k * &pa) * pb;
                    }
                    out.add_term(idx, e, c * va * vb);
                }
            }
        }
    }
    Ok(out)
}

fn pow_rat(x: &Rational, e: u32) -> Rational {
    let mut r = Rational::from(1);
    for _ in 0..e {
        r *= x;
    }
    r
}

/// Re-indexes tensor components through `map` (tensor index -> target index).
pub fn collapse(s: &VVQSeries, map: &[usize], target: GroupDesc) -> VVQSeries {
    let mut out = VVQSeries::zero(target, s.weight.clone(), s.order.clone());
    for (idx, c) in s.comps.iter().enumerate() {
        for (e, v) in c {
            out.add_term(map[idx], e.clone(), v.clone());
        }
    }
    out
}

/// `sum_γ CT(g_γ h_γ)` with an audit of the truncation orders.
pub fn ct_pair(g: &VVQSeries, h: &VVQSeries) -> Result<Rational> {
    if g.group.len() != h.group.len() {
        return Err(Error::GroupMismatch(format!("{} components vs {}", g.group.len(), h.group.len())));
    }
    if let Some(m) = g.min_exp() {
        if h.order <= Rational::from(-&m) {
            return Err(Error::InsufficientPrecision(format!(
                "constant term needs the second series beyond exponent {}, known below {}",
                rat_to_string(&Rational::from(-&m)),
                rat_to_string(&h.order)
            )));
        }
    }
    if let Some(m) = h.min_exp() {
        if g.order <= Rational::from(-&m) {
            return Err(Error::InsufficientPrecision(format!(
                "constant term needs the first series beyond exponent {}, known below {}",
                rat_to_string(&Rational::from(-&m)),
                rat_to_string(&g.order)
            )));
        }
    }
    let mut acc = Rational::new();
    for (cg, ch) in g.comps.iter().zip(&h.comps) {
        for (e, v) in cg {
            if let Some(w) = ch.get(&Rational::from(-e)) {
                acc += Rational::from(v * w);
            }
        }
    }
    Ok(acc)
}

/// Group `Z/2` with `q = 0, 1/4`: the discriminant form of `(Z, x^2)`.
pub fn theta_group() -> GroupDesc {
    GroupDesc::new("Z/2 (x^2)", vec![Rational::new(), Rational::from((1, 4))], false)
}

/// `L'/L` with `q = 0, 3/4`, viewed with the dual representation.
pub fn l_group_dual() -> GroupDesc {
    GroupDesc::new("L'/L", vec![Rational::new(), Rational::from((3, 4))], true)
}

pub fn l_group() -> GroupDesc {
    GroupDesc::new("L'/L", vec![Rational::new(), Rational::from((3, 4))], false)
}

/// `θ = sum_n q^{n^2/4} e_{n mod 2}`, known below exponent `order`.
pub fn unary_theta_half(order: i64, group: GroupDesc) -> VVQSeries {
    let mut s = VVQSeries::zero(group, Rational::from((1, 2)), Rational::from(order));
    let mut n = 0i64;
    while n * n < 4 * order {
        let c = if n == 0 { 1 } else { 2 };
        s.add_term((n % 2) as usize, Rational::from((n * n, 4)), Rational::from(c));
        n += 1;
    }
    s
}

/// Scalar plus-space series `sum a(n) q^n` as a series on `Z/2` with exponent `n/4`.
pub fn from_plus_scalar(f: &ScalarQSeries, group: GroupDesc) -> VVQSeries {
    let order = Rational::from((f.order(), 4));
    let mut s = VVQSeries::zero(group, f.weight.clone(), order);
    for (i, c) in f.coeffs.iter().enumerate() {
        let n = f.val + i as i64;
        s.add_term(n.rem_euclid(2) as usize, Rational::from((n, 4)), c.clone());
    }
    s
}

/// `(α, β, m)` with `4α + 6β - 12m = w`, `α <= 2`, `β <= 1`, smallest `m >= 0`.
pub fn weight_recipe(w: i64) -> Option<(u32, u32, u32)> {
    for m in 0..100i64 {
        for a in 0..=2i64 {
            for b in 0..=1i64 {
                if 4 * a + 6 * b - 12 * m == w {
                    return Some((a as u32, b as u32, m as u32));
                }
            }
        }
    }
    None
}

/// Level-one weakly holomorphic form `E4^α E6^β / Δ^m`, known below `order`.
pub fn level_one_quotient(alpha: u32, beta: u32, m: u32, order: i64) -> ScalarQSeries {
    let pad = order + m as i64 + 2;
    let mut f = ScalarQSeries::one(pad);
    if alpha > 0 {
        f = f.mul(&eisenstein(4, pad).unwrap().pow(alpha));
    }
    if beta > 0 {
        f = f.mul(&eisenstein(6, pad).unwrap().pow(beta));
    }
    if m > 0 {
        let d = delta(pad + m as i64).normalize().inverse().unwrap().pow(m);
        f = f.mul(&d);
    }
    let mut f = f.truncate(order);
    f.weight = Rational::from(4 * alpha as i64 + 6 * beta as i64 - 12 * m as i64);
    f
}

/// Weakly holomorphic forms of weight `3/2 - k` for the dual representation of `L`,
/// with principal parts reaching down to discriminant `dmin`.
pub fn plus_basis(k: i64, dmin: i64, order: i64) -> Result<Vec<VVQSeries>> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::InvalidInput(format!("plus_basis needs odd k >= 3, got {k}")));
    }
    if dmin >= 0 || dmin.rem_euclid(4) > 1 {
        return Err(Error::InvalidInput(format!("dmin = {dmin} must be negative and 0 or 1 mod 4")));
    }
    let (alpha, beta, m) = weight_recipe(1 - k).expect("weight recipe exists for odd k");
    let depth = ((-dmin) as f64 / 4.0).ceil() as i64;
    let extra = (depth - m as i64).max(0);
    let scalar_order = order + extra + 2;
    let base = level_one_quotient(alpha, beta, m, scalar_order);
    let j = jfunc(scalar_order + extra + 2);
    let theta = unary_theta_half(order + depth + 2, l_group_dual());
    let mut forms = vec![];
    let mut cur = base.clone();
    for _ in 0..=extra {
        let mut f = theta.mul_scalar(&cur);
        f.order = f.order.min(Rational::from(order));
        f.comps.iter_mut().for_each(|c| c.retain(|e, _| *e < Rational::from(order)));
        f.weight = Rational::from((3 - 2 * k, 2));
        forms.push(f);
        cur = cur.mul(&j);
    }
    // echelon on the component-0 exponents -m, -m-1, ...
    let n = forms.len();
    for i in (0..n).rev() {
        let lead = Rational::from(-(m as i64) - i as i64);
        let c = forms[i].coeff(0, &lead);
        forms[i] = forms[i].scale(&c.recip());
        for t in 0..n {
            if t != i {
                let ct = forms[t].coeff(0, &lead);
                if ct != 0 {
                    let sub = forms[i].scale(&Rational::from(-ct));
                    forms[t] = forms[t].add(&sub)?;
                }
            }
        }
    }
    Ok(forms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    fn ints(s: &ScalarQSeries, n: usize) -> Vec<i64> {
        s.coeffs.iter().take(n).map(|c| c.numer().to_i64().unwrap()).collect()
    }

    #[test]
    fn classical_expansions() {
        assert_eq!(ints(&eisenstein(4, 5).unwrap(), 3), vec![1, 240, 2160]);
        assert_eq!(ints(&eisenstein(6, 5).unwrap(), 3), vec![1, -504, -16632]);
        let d = delta(6).normalize();
        assert_eq!(d.val, 1);
        assert_eq!(ints(&d, 3), vec![1, -24, 252]);
        let j = jfunc(3);
        assert_eq!(j.val, -1);
        assert_eq!(ints(&j, 3), vec![1, 744, 196884]);
        assert!(eisenstein(3, 5).is_err());
    }

    #[test]
    fn eta_cube_is_jacobi() {
        let e = eta_product(3, 12);
        // prod (1-q^n)^3 = sum (-1)^m (2m+1) q^{m(m+1)/2}
        let mut expect = vec![0i64; 12];
        for m in 0..5i64 {
            let t = m * (m + 1) / 2;
            if t < 12 {
                expect[t as usize] = if m % 2 == 0 { 2 * m + 1 } else { -(2 * m + 1) };
            }
        }
        assert_eq!(ints(&e, 12), expect);
    }

    #[test]
    fn naive_convolution_oracle() {
        let a = eisenstein(4, 20).unwrap();
        let b = eisenstein(6, 20).unwrap();
        let p = a.mul(&b);
        for n in 0..20usize {
            let mut s = Rational::new();
            for i in 0..=n {
                s += Rational::from(&a.coeffs[i] * &b.coeffs[n - i]);
            }
            assert_eq!(p.coeffs[n], s);
        }
    }

    #[test]
    fn theta_components() {
        let t = unary_theta_half(10, theta_group());
        assert_eq!(t.coeff(0, &rat(0, 1)), rat(1, 1));
        assert_eq!(t.coeff(0, &rat(1, 1)), rat(2, 1));
        assert_eq!(t.coeff(0, &rat(4, 1)), rat(2, 1));
        assert_eq!(t.coeff(1, &rat(1, 4)), rat(2, 1));
        assert_eq!(t.coeff(1, &rat(9, 4)), rat(2, 1));
        assert_eq!(t.weight, rat(1, 2));
    }

    #[test]
    fn plus_basis_k3() {
        let b = plus_basis(3, -4, 10).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].plus_coeff(-4), rat(1, 1));
        assert_eq!(b[0].plus_coeff(-3), rat(2, 1));
        assert_eq!(b[0].weight, rat(-3, 2));
        for (g, c) in b[0].comps.iter().enumerate() {
            for e in c.keys() {
                assert!(b[0].group.admissible(g, e));
            }
        }
    }

    #[test]
    fn rc_monomials() {
        let g = GroupDesc::new("triv", vec![Rational::new()], false);
        let mono = |e: i64| {
            let mut s = VVQSeries::zero(g.clone(), rat(0, 1), rat(100, 1));
            s.add_term(0, rat(e, 1), rat(1, 1));
            s
        };
        let (a, b) = (3i64, 5i64);
        let r = rankin_cohen(&mono(a), &rat(1, 1), &mono(b), &rat(1, 2), 1).unwrap();
        assert_eq!(r.coeff(0, &rat(a + b, 1)), rat(a, 2) - rat(b, 1));
        let r0 = rankin_cohen(&mono(a), &rat(1, 1), &mono(b), &rat(1, 2), 0).unwrap();
        assert_eq!(r0.coeff(0, &rat(a + b, 1)), rat(1, 1));
        assert!(rankin_cohen(&mono(a), &rat(1, 1), &mono(b), &rat(1, 2), -1).is_err());
    }

    #[test]
    fn ct_pair_basic() {
        let g = GroupDesc::new("triv", vec![Rational::new()], false);
        let mut a = VVQSeries::zero(g.clone(), rat(0, 1), rat(5, 1));
        a.add_term(0, rat(-1, 1), rat(1, 1));
        let mut b = VVQSeries::zero(g, rat(0, 1), rat(5, 1));
        b.add_term(0, rat(1, 1), rat(1, 1));
        assert_eq!(ct_pair(&a, &b).unwrap(), rat(1, 1));
        assert_eq!(ct_pair(&b, &a).unwrap(), rat(1, 1));
        let mut short = b.clone();
        short.order = rat(1, 1);
        short.comps[0].clear();
        assert!(matches!(ct_pair(&a, &short), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn json_roundtrip() {
        let t = unary_theta_half(5, theta_group());
        let txt = serde_json::to_string(&t.to_text()).unwrap();
        let back: VVQSeriesText = serde_json::from_str(&txt).unwrap();
        assert_eq!(VVQSeries::from_text(&back).unwrap(), t);
    }
}
