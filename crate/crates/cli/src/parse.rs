//! Argument parsers: forms, complex points, g-specs.

use geocycle::numerics::complex::{parse_real, Complex};
use geocycle::numerics::rational::parse_rational;
use geocycle::qforms::QForm;
use rug::{Float, Rational};
use std::collections::BTreeMap;

/// Parses a form written `a,b,c` or `[a,b,c]`.
pub fn form(s: &str) -> Result<QForm, String> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let v: Vec<i64> = t
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad form entry {x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != 3 {
        return Err(format!("a form needs three integers, got {s:?}"));
    }
    Ok(QForm::new(v[0], v[1], v[2]))
}

/// Splits at `+`/`-` that start a new term (not a leading sign or an exponent sign).
fn terms(s: &str) -> Vec<String> {
    let mut out = vec![];
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        let starts = (ch == '+' || ch == '-') && !cur.is_empty() && !matches!(prev, Some('e') | Some('E') | Some('/') | Some('*'));
        if starts {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
        prev = Some(ch);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// A complex number such as `i`, `1/5+i/2`, `-1/3+2i`, `0.2+1.1i` or `3*i`.
pub fn complex(s: &str, prec: u32) -> Result<Complex, String> {
    let mut re = Float::new(prec);
    let mut im = Float::new(prec);
    let ts = terms(s);
    if ts.is_empty() {
        return Err("empty complex number".into());
    }
    for t in ts {
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, t.trim_start_matches('+').to_string()),
        };
        let bad = || format!("bad number in {s:?}");
        if body.contains('i') {
            let rest = body.replacen('i', "", 1).replace('*', "");
            let v = if rest.is_empty() {
                Float::with_val(prec, 1)
            } else if let Some(den) = rest.strip_prefix('/') {
                Float::with_val(prec, 1) / parse_real(prec, den).ok_or_else(bad)?
            } else {
                parse_real(prec, &rest).ok_or_else(bad)?
            };
            im += if neg { -v } else { v };
        } else {
            let v = parse_real(prec, &body).ok_or_else(bad)?;
            re += if neg { -v } else { v };
        }
    }
    Ok(Complex::new(re, im))
}

/// A point of the upper half-plane.
pub fn upper(s: &str, prec: u32) -> Result<Complex, String> {
    let z = complex(s, prec)?;
    if z.im <= 0 {
        return Err(format!("{s:?} is not in the upper half-plane"));
    }
    Ok(z)
}

/// Coefficients `d:c` separated by commas, e.g. `-3:2,-4:1`.
pub fn coeffs(s: &str) -> Result<BTreeMap<i64, Rational>, String> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (d, c) = part.split_once(':').ok_or_else(|| format!("expected d:c, got {part:?}"))?;
        let d: i64 = d.trim().parse().map_err(|e| format!("bad discriminant {d:?}: {e}"))?;
        let c = parse_rational(c).ok_or_else(|| format!("bad coefficient {c:?}"))?;
        *out.entry(d).or_insert_with(Rational::new) += c;
    }
    if out.is_empty() {
        return Err("no coefficients given".into());
    }
    Ok(out)
}

/// Input of weight `3/2 - k` for the rationality check.
#[derive(Clone, Debug, PartialEq)]
pub enum GSpec {
    /// Element `index` of the echelon basis with principal parts down to `-4 (m + index)`.
    Plus(usize),
    /// `c sqrt(r) θ E4^α E6^β j^n / Δ^m`.
    Product { scale: Rational, sqrt: Option<u64>, alpha: u32, beta: u32, jpow: u32, m: u32 },
}

impl GSpec {
    /// `2 × weight`.
    pub fn twice_weight(&self) -> Option<i64> {
        match self {
            GSpec::Plus(_) => None,
            GSpec::Product { alpha, beta, m, .. } => Some(1 + 2 * (4 * *alpha as i64 + 6 * *beta as i64 - 12 * *m as i64)),
        }
    }
}

fn factor(tok: &str) -> Result<(String, u32), String> {
    match tok.split_once('^') {
        Some((b, e)) => Ok((b.trim().to_string(), e.trim().parse().map_err(|e| format!("bad exponent in {tok:?}: {e}"))?)),
        None => Ok((tok.trim().to_string(), 1)),
    }
}

/// Parses `plus:N` or a product like `theta*E4*E6/Delta`, `3*theta*E4^2/Delta`,
/// `sqrt(2)*theta*E4*E6/Delta` or `theta*E4*E6*j/Delta^2`.
pub fn gspec(s: &str) -> Result<GSpec, String> {
    let s = s.trim();
    if let Some(n) = s.strip_prefix("plus:") {
        return Ok(GSpec::Plus(n.trim().parse().map_err(|e| format!("bad plus index: {e}"))?));
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) if !b.contains('/') => (a, Some(b)),
        Some(_) => return Err("at most one '/' in a g-spec".into()),
        None => (s, None),
    };
    let mut scale = Rational::from(1);
    let mut sqrt = None;
    let (mut alpha, mut beta, mut jpow, mut theta) = (0u32, 0u32, 0u32, 0u32);
    for tok in num.split('*').map(str::trim) {
        if let Some(r) = tok.strip_prefix("sqrt(").and_then(|t| t.strip_suffix(')')) {
            let r: u64 = r.trim().parse().map_err(|e| format!("bad sqrt argument: {e}"))?;
            sqrt = Some(r);
            continue;
        }
        if let Some(c) = parse_rational(tok) {
            scale *= c;
            continue;
        }
        let (b, e) = factor(tok)?;
        match b.as_str() {
            "theta" => theta += e,
            "E4" => alpha += e,
            "E6" => beta += e,
            "j" => jpow += e,
            _ => return Err(format!("unknown factor {b:?} (theta, E4, E6, j, Delta, a rational, sqrt(n))")),
        }
    }
    let mut m = 0u32;
    if let Some(den) = den {
        for tok in den.split('*').map(str::trim) {
            let (b, e) = factor(tok)?;
            if b != "Delta" {
                return Err(format!("only Delta may divide, got {b:?}"));
            }
            m += e;
        }
    }
    if theta != 1 {
        return Err("a g-spec needs exactly one factor theta".into());
    }
    if let Some(r) = sqrt {
        let q = (r as f64).sqrt().round() as u64;
        if q * q == r {
            scale *= q;
            sqrt = None;
        }
    }
    Ok(GSpec::Product { scale, sqrt, alpha, beta, jpow, m })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let p = 64;
        let c = |s: &str| complex(s, p).unwrap().to_f64();
        assert_eq!(c("i"), (0.0, 1.0));
        assert_eq!(c("1/5+i/2"), (0.2, 0.5));
        assert_eq!(c("-1/3+2i"), (-1.0 / 3.0, 2.0));
        assert_eq!(c("0.2+1.1i"), (0.2, 1.1));
        assert_eq!(c("3*i - 1"), (-1.0, 3.0));
        assert_eq!(c("1e-1+i"), (0.1, 1.0));
        assert!(upper("-i", p).is_err());
        assert!(complex("x", p).is_err());
    }

    #[test]
    fn gspecs() {
        assert_eq!(
            gspec("theta*E4*E6/Delta").unwrap(),
            GSpec::Product { scale: Rational::from(1), sqrt: None, alpha: 1, beta: 1, jpow: 0, m: 1 }
        );
        assert_eq!(gspec("theta*E4*E6/Delta").unwrap().twice_weight(), Some(-3));
        assert_eq!(gspec("theta*E4^2/Delta").unwrap().twice_weight(), Some(-7));
        let g = gspec("sqrt(2)*theta*E4*E6/Delta").unwrap();
        assert!(matches!(g, GSpec::Product { sqrt: Some(2), .. }));
        let g = gspec("sqrt(4)*theta*E4*E6/Delta").unwrap();
        assert!(matches!(g, GSpec::Product { sqrt: None, .. }));
        assert_eq!(gspec("plus:1").unwrap(), GSpec::Plus(1));
        assert!(gspec("E4*E6/Delta").is_err());
        assert!(gspec("theta*E8/Delta").is_err());
    }

    #[test]
    fn forms_and_coeffs() {
        assert_eq!(form("1,1,-1").unwrap(), QForm::new(1, 1, -1));
        assert_eq!(form("[2, 2, 3]").unwrap(), QForm::new(2, 2, 3));
        assert!(form("1,2").is_err());
        let c = coeffs("-3:2,-4:1").unwrap();
        assert_eq!(c[&-3], 2);
        assert_eq!(c[&-4], 1);
        assert!(coeffs("").is_err());
    }
}
