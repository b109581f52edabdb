//! Exact rationals: text form and reconstruction from approximations.

use rug::{Float, Integer, Rational};

/// "p/q" text, always with an explicit denominator.
pub fn rat_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Integer = p.trim().parse().ok()?;
            let q: Integer = q.trim().parse().ok()?;
            if q == 0 {
                return None;
            }
            Some(Rational::from((p, q)))
        }
        None => Some(Rational::from(s.parse::<Integer>().ok()?)),
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::from((p, q))
}

/// Outcome of a reconstruction attempt.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub value: Rational,
    /// Another fraction with admissible denominator also lies within tolerance.
    pub ambiguous: bool,
}

fn floor_rat(x: &Rational) -> Integer {
    x.clone().floor().into_numer_denom().0
}

fn ceil_rat(x: &Rational) -> Integer {
    x.clone().ceil().into_numer_denom().0
}

/// Fraction of smallest denominator in the closed interval `[lo, hi]`.
pub fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if *lo <= 0 && *hi >= 0 {
        return Rational::new();
    }
    if *hi < 0 {
        let r = simplest_in(&Rational::from(-hi), &Rational::from(-lo));
        return -r;
    }
    let c = ceil_rat(lo);
    if Rational::from(c.clone()) <= *hi {
        return Rational::from(c);
    }
    let f = floor_rat(lo);
    let fr = Rational::from(f.clone());
    let a = Rational::from(hi - &fr).recip();
    let b = Rational::from(lo - &fr).recip();
    let inner = simplest_in(&a, &b);
    fr + inner.recip()
}

/// Farey neighbours of `p/q` among fractions with denominator at most `bound`.
fn farey_neighbours(r: &Rational, bound: &Integer) -> (Rational, Rational) {
    let p = r.numer().clone();
    let q = r.denom().clone();
    let (_, inv, _) = p.clone().gcd_cofactors(q.clone(), Integer::new());
    let lift = |mut s: Integer| {
        s %= &q;
        if s <= 0 {
            s += &q;
        }
        let k = Integer::from(bound - &s) / &q;
        s + k * &q
    };
    // right: u q - p s = 1, left: p s - u q = 1
    let s = lift(Integer::from(-&inv));
    let u = (Integer::from(&p * &s) + 1u32) / &q;
    let s2 = lift(inv);
    let u2 = (Integer::from(&p * &s2) - 1u32) / &q;
    (Rational::from((u2, s2)), Rational::from((u, s)))
}

/// Smallest-denominator `p/q` with `q <= den_bound` and `|x - p/q| <= tol`.
pub fn rational_reconstruct(x: &Float, den_bound: u64, tol: &Float) -> Option<Reconstruction> {
    if !x.is_finite() || !tol.is_finite() || *tol <= 0 || den_bound == 0 {
        return None;
    }
    let xr = x.to_rational()?;
    let tr = tol.to_rational()?;
    let lo = Rational::from(&xr - &tr);
    let hi = Rational::from(&xr + &tr);
    let best = simplest_in(&lo, &hi);
    let bound = Integer::from(den_bound);
    if *best.denom() > bound {
        return None;
    }
    let (left, right) = farey_neighbours(&best, &bound);
    let ambiguous = left >= lo || right <= hi;
    Some(Reconstruction { value: best, ambiguous })
}

/// Generalized binomial coefficient with rational top.
pub fn binom(top: &Rational, k: u32) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..k {
        acc *= Rational::from(top - i);
        acc /= i + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(prec: u32, s: &str) -> Float {
        Float::with_val(prec, Float::parse(s).unwrap())
    }

    #[test]
    fn examples() {
        let r = rational_reconstruct(&f(128, "0.5"), 10, &f(128, "1e-10")).unwrap();
        assert_eq!(r.value, rat(1, 2));
        assert!(rational_reconstruct(&f(128, "3.14159265358979"), 10, &f(128, "1e-10")).is_none());
        let r = rational_reconstruct(&f(128, "3.14159292"), 200, &f(128, "1e-7")).unwrap();
        assert_eq!(r.value, rat(355, 113));
        assert!(!r.ambiguous);
    }

    #[test]
    fn ambiguity_flag() {
        let r = rational_reconstruct(&f(64, "0.5"), 10, &f(64, "0.06")).unwrap();
        assert_eq!(r.value, rat(1, 2));
        assert!(r.ambiguous);
    }

    #[test]
    fn negative_values() {
        let r = rational_reconstruct(&f(128, "-2.3333333333333333333"), 100, &f(128, "1e-12")).unwrap();
        assert_eq!(r.value, rat(-7, 3));
    }

    #[test]
    fn farey_neighbours_are_adjacent() {
        let (l, r) = farey_neighbours(&rat(3, 7), &Integer::from(10));
        assert_eq!(l, rat(2, 5));
        assert_eq!(r, rat(4, 9));
    }

    #[test]
    fn text_roundtrip() {
        let r = rat(-6, 4);
        assert_eq!(rat_to_string(&r), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), r);
        assert_eq!(parse_rational("5").unwrap(), rat(5, 1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(&rat(1, 2), 1), rat(1, 2));
        assert_eq!(binom(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binom(&rat(5, 1), 2), rat(10, 1));
    }
}
