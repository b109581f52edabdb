//! Special functions and quadrature rules at working precision.

use rug::Float;
use rug::float::Constant;

/// `Gamma(1/2, x) = sqrt(pi) erfc(sqrt x)` for `x >= 0`.
pub fn upper_incomplete_gamma_half(x: &Float) -> Float {
    let p = x.prec();
    assert!(*x >= 0, "upper_incomplete_gamma_half needs x >= 0");
    let sp = Float::with_val(p, Constant::Pi).sqrt();
    let e = Float::with_val(p, x.sqrt_ref()).erfc();
    sp * e
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let p = x.prec();
    let mut p0 = Float::with_val(p, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(p, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(p, &p0 * (k - 1) as u32);
        let p2 = (a - b) / k as u32;
        p0 = p1;
        p1 = p2;
    }
    let x2m1 = Float::with_val(p, x.square_ref()) - 1u32;
    let num = Float::with_val(p, x * &p1) - &p0;
    let dp = num * n as u32 / x2m1;
    (p1, dp)
}

impl GaussLegendre {
    pub fn new(n: usize, prec: u32) -> Self {
        assert!(n >= 2);
        let work = prec + 32;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let m = n.div_ceil(2);
        let mut half_nodes = Vec::new();
        let mut half_weights = Vec::new();
        for i in 0..m {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut x = Float::with_val(work, guess);
            let tol = Float::with_val(work, Float::i_exp(1, -(work as i32) + 8));
            for _ in 0..100 {
                let (pn, dp) = legendre(n, &x);
                let dx = pn / &dp;
                x -= &dx;
                if dx.abs() < tol {
                    break;
                }
            }
            let (_, dp) = legendre(n, &x);
            let one_m = Float::with_val(work, 1) - Float::with_val(work, x.square_ref());
            let w = Float::with_val(work, 2) / (one_m * Float::with_val(work, dp.square_ref()));
            half_nodes.push(Float::with_val(prec, &x));
            half_weights.push(Float::with_val(prec, &w));
        }
        for i in 0..m {
            nodes.push(Float::with_val(prec, -&half_nodes[i]));
            weights.push(half_weights[i].clone());
        }
        let start = if n % 2 == 1 { m - 1 } else { m };
        for i in (0..start).rev() {
            nodes.push(half_nodes[i].clone());
            weights.push(half_weights[i].clone());
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: &Float, b: &Float) -> Vec<(Float, Float)> {
        let p = a.prec();
        let half = Float::with_val(p, b - a) / 2u32;
        let mid = Float::with_val(p, a + b) / 2u32;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| {
                let t = Float::with_val(p, &half * x) + &mid;
                (t, Float::with_val(p, &half * w))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn gamma_half_values() {
        let g0 = upper_incomplete_gamma_half(&Float::with_val(128, 0));
        assert!((g0.to_f64() - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        let g1 = upper_incomplete_gamma_half(&Float::with_val(128, 1));
        assert!((g1.to_f64() - 0.2788055852806619).abs() < 1e-14);
    }

    #[test]
    fn gamma_half_quadrature_oracle() {
        // integral of t^{-1/2} e^{-t} over [x, inf) by substitution t = x + s^2
        let x = 1.0f64;
        let gl = GaussLegendre::new(60, 128);
        let a = Float::with_val(128, 0);
        let b = Float::with_val(128, 8);
        let mut acc = 0.0;
        for (s, w) in gl.mapped(&a, &b) {
            let s = s.to_f64();
            acc += w.to_f64() * 2.0 * s * (-(x + s * s)).exp() / (x + s * s).sqrt();
        }
        let g1 = upper_incomplete_gamma_half(&Float::with_val(128, x));
        assert!((acc - g1.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn gamma_half_asymptotic() {
        let x = Float::with_val(200, 400);
        let g = upper_incomplete_gamma_half(&x);
        let lead = Float::with_val(200, -&x).exp() / Float::with_val(200, x.sqrt_ref());
        let ratio = (g / lead).to_f64();
        assert!((ratio - 1.0).abs() < 2e-3);
    }

    #[test]
    fn gauss_legendre_exact_on_polynomials() {
        let gl = GaussLegendre::new(16, 256);
        let mut s = Float::with_val(256, 0);
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            s += Float::with_val(256, Float::with_val(256, x.square_ref()).pow(15u32)) * w;
        }
        let exact = Float::with_val(256, 2) / 31u32;
        assert!(Float::with_val(256, s - exact).abs() < Float::with_val(256, 1e-70));
        assert_eq!(gl.len(), 16);
    }
}
