//! Exact evaluation of cycle integrals through the constant term of a Rankin-Cohen
//! bracket, and the weakly holomorphic inputs used with it.

use crate::error::{Error, Result};
use crate::lattice::{down_index, split};
use crate::maass::MockPart;
use crate::qforms::{geodesic, QForm};
use crate::qseries::{
    collapse, ct_pair, eisenstein, eta_product, from_plus_scalar, jfunc, l_group, level_one_quotient, plus_basis,
    rankin_cohen, ScalarQSeries, VVQSeries,
};
use crate::theta::hecke_theta_series;
use rug::Rational;
use std::collections::BTreeMap;

/// Breakdown of the exact evaluation.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub value: Rational,
    pub constant_term: Rational,
    /// `(4D)^{k-1}`; the prefactor is minus its square root.
    pub prefactor_sq: Rational,
    /// Positive exponent the bracket had to reach.
    pub required_order: Rational,
}

/// `d -> a_g(d)` for `d < 0`, reading exponent `d/4`.
pub fn input_coeffs(g: &VVQSeries) -> BTreeMap<i64, Rational> {
    let mut out = BTreeMap::new();
    for c in &g.comps {
        for (e, v) in c.range(..Rational::new()) {
            let d = Rational::from(e * 4u32);
            if *d.denom() == 1 {
                out.insert(d.numer().to_i64().unwrap(), v.clone());
            }
        }
    }
    out
}

/// `θ E4^α E6^β / Δ^m` of weight `3/2 - k` for odd `k`, principal part `q^{-1} e_0 + 2 q^{-3/4} e_1`.
pub fn odd_input(k: u32, order: i64) -> Result<VVQSeries> {
    Ok(plus_basis(k as i64, -4, order)?.remove(0))
}

/// `g_1 = θ_1(τ) E4(4τ) / η(4τ)^6 = q^{-1} - 2 + 248 q^3 - ...` in the plus space of weight 3/2.
pub fn zagier_g1(order: i64) -> Result<ScalarQSeries> {
    let pad = order + 8;
    let mut th = vec![Rational::new(); pad as usize];
    let mut n = 0i64;
    while n * n < pad {
        th[(n * n) as usize] += if n == 0 { 1 } else { 2 * if n % 2 == 0 { 1 } else { -1 } };
        n += 1;
    }
    let theta1 = ScalarQSeries::new(0, th, Rational::from((1, 2)));
    let e4 = eisenstein(4, pad / 4 + 2)?.dilate(4);
    let eta = eta_product(-6, pad / 4 + 2).dilate(4);
    let mut f = theta1.mul(&e4).mul(&eta);
    // η(4τ)^{-6} = q^{-1} prod (1 - q^{4n})^{-6}
    f.val -= 1;
    let mut f = f.truncate(order);
    f.weight = Rational::from((3, 2));
    Ok(f)
}

/// A weight `-1/2` form on `L` with principal part `sum_D c_D q^{-D/4} e_{D mod 2}`, solved exactly
/// inside the span of `ϑ^i(g_1) h_i j^n` with `h_i = E4E6/Δ, E4^2/Δ, E6/Δ, E4/Δ`.
pub fn even_input(principal: &BTreeMap<i64, Rational>, order: i64) -> Result<VVQSeries> {
    let dmax = principal.keys().copied().max().unwrap_or(1).max(1);
    let levels = (dmax + 3) / 4;
    let scalar_order = order + levels + 4;
    let mut der = vec![from_plus_scalar(&zagier_g1(4 * scalar_order + 8)?, l_group())];
    for _ in 0..3 {
        let next = der.last().unwrap().serre();
        der.push(next);
    }
    let hs = [(1, 1), (2, 0), (0, 1), (1, 0)];
    let j = jfunc(scalar_order + 2);
    let mut gens = vec![];
    for (g, (al, be)) in der.iter().zip(hs) {
        let mut h = level_one_quotient(al, be, 1, scalar_order);
        for _ in 0..levels {
            gens.push(g.mul_scalar(&h));
            h = h.mul(&j);
        }
    }
    for f in gens.iter_mut() {
        f.weight = Rational::from((-1, 2));
        f.order = f.order.clone().min(Rational::from(order));
        let o = f.order.clone();
        f.comps.iter_mut().for_each(|c| c.retain(|e, _| *e < o));
    }
    // unknowns: one per generator; equations: every principal exponent d/4 < 0
    let mut rows: Vec<i64> = vec![];
    for f in &gens {
        for d in input_coeffs(f).keys() {
            if !rows.contains(&-d) {
                rows.push(-d);
            }
        }
    }
    for d in principal.keys() {
        if !rows.contains(d) {
            rows.push(*d);
        }
    }
    rows.sort();
    let cols = gens.len();
    let mut mat: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&d| {
            let mut r: Vec<Rational> = gens.iter().map(|f| f.coeff((d.rem_euclid(2)) as usize, &Rational::from((-d, 4)))).collect();
            r.push(principal.get(&d).cloned().unwrap_or_default());
            r
        })
        .collect();
    let sol = solve_exact(&mut mat, cols).ok_or_else(|| {
        Error::Unsupported("principal part not attained by the weight -1/2 generators".into())
    })?;
    let mut out = VVQSeries::zero(gens[0].group.clone(), Rational::from((-1, 2)), gens[0].order.clone());
    for (f, c) in gens.iter().zip(&sol) {
        if *c != 0 {
            out = out.add(&f.scale(c))?;
        }
    }
    Ok(out)
}

/// Gaussian elimination on an augmented system; `None` if inconsistent.
fn solve_exact(m: &mut [Vec<Rational>], cols: usize) -> Option<Vec<Rational>> {
    let rows = m.len();
    let mut piv = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let t = Rational::from(&f * &m[r][j]);
                    m[i][j] -= t;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut x = vec![Rational::new(); cols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Order of `ϑ_I` needed by [`closed_form`] for this input and mock part.
pub fn hecke_order_needed(g: &VVQSeries, mock: &MockPart) -> i64 {
    let need = Rational::from(-g.min_exp().unwrap_or_default());
    // bracket order = min(ϑ.order + min Θ̃, Θ̃.order + min ϑ); ϑ starts at a positive exponent
    let mock_min = mock.holo.min_exp().unwrap_or_default();
    Rational::from(&need - &mock_min).ceil().numer().to_i64().unwrap() + 2
}

/// `-(4D)^{(k-1)/2} CT(g_M [ϑ_I, Θ̃^+]_{(k-1)/2})` for odd `k` and `g` of weight `3/2 - k` (dual side).
pub fn closed_form(a: &QForm, k: u32, g: &VVQSeries, mock: &MockPart) -> Result<ClosedForm> {
    let sp = split(a)?;
    let geo = geodesic(a, 128)?;
    let hecke = hecke_theta_series(&sp, &geo, hecke_order_needed(g, mock))?;
    closed_form_from(a, k, g, mock, &hecke)
}

/// As [`closed_form`] with a precomputed `ϑ_I` of order at least [`hecke_order_needed`].
pub fn closed_form_from(a: &QForm, k: u32, g: &VVQSeries, mock: &MockPart, hecke: &VVQSeries) -> Result<ClosedForm> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::InvalidInput(format!("closed form needs odd k >= 3, got {k}")));
    }
    if !g.group.dual || g.group.len() != 2 {
        return Err(Error::GroupMismatch("input must live on the dual of L'/L".into()));
    }
    if g.weight != Rational::from((3 - 2 * k as i64, 2)) {
        return Err(Error::InvalidInput(format!("input weight must be {}/2", 3 - 2 * k as i64)));
    }
    let d = a.disc();
    if mock.disc != d {
        return Err(Error::InvalidInput(format!("mock part is for D = {}, form has D = {d}", mock.disc)));
    }
    let want = hecke_order_needed(g, mock);
    if hecke.order < want {
        return Err(Error::InsufficientPrecision(format!("theta series order {} below {want}", hecke.order)));
    }
    let sp = split(a)?;
    let n = ((k - 1) / 2) as i64;
    let need = Rational::from(-g.min_exp().unwrap_or_default());
    let br = rankin_cohen(hecke, &Rational::from(1), &mock.holo, &Rational::from((1, 2)), n)?;
    let ng = sp.n.group.order();
    let map: Vec<usize> = (0..sp.i.group.order() * ng).map(|t| sp.tensor_index(t / ng, t % ng)).collect();
    let bracket = collapse(&br, &map, sp.m.group.desc("M'/M", false));
    let mut gm = VVQSeries::zero(sp.m.group.desc("M'/M", true), g.weight.clone(), g.order.clone());
    for (t, o) in down_index(&sp.l, &sp.m).into_iter().enumerate() {
        if let Some(i) = o {
            for (e, v) in &g.comps[i] {
                gm.add_term(t, e.clone(), v.clone());
            }
        }
    }
    let ct = ct_pair(&gm, &bracket)?;
    let four_d = Rational::from(4 * d);
    let mut sq = Rational::from(1);
    for _ in 0..(k - 1) {
        sq *= &four_d;
    }
    // (4D)^{(k-1)/2} is an integer power since k is odd
    let mut pre = Rational::from(1);
    for _ in 0..n {
        pre *= &four_d;
    }
    let value = -(pre * &ct);
    Ok(ClosedForm { value, constant_term: ct, prefactor_sq: sq, required_order: need })
}
