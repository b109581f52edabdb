//! Dense real least squares at working precision.

use rug::Assign;
use rug::Float;

/// Row-major dense real matrix.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Float>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        Matrix { rows, cols, data: vec![Float::new(prec); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &Float {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Float {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Float) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, x: &[Float]) -> Vec<Float> {
        let p = self.data.first().map(|f| f.prec()).unwrap_or(64);
        (0..self.rows)
            .map(|i| {
                let mut s = Float::new(p);
                for j in 0..self.cols {
                    s += Float::with_val(p, self.get(i, j) * &x[j]);
                }
                s
            })
            .collect()
    }
}

pub fn norm2(v: &[Float]) -> Float {
    let p = v.first().map(|f| f.prec()).unwrap_or(64);
    let mut s = Float::new(p);
    for x in v {
        s += Float::with_val(p, x.square_ref());
    }
    s.sqrt()
}

/// Solution of `min |Ax - b|` and the residual norm.
#[derive(Clone, Debug)]
pub struct LstsqResult {
    pub x: Vec<Float>,
    pub residual: Float,
    /// Smallest |R_ii| relative to the largest, after column scaling.
    pub conditioning: Float,
}

/// Householder QR least squares with column equilibration.
pub fn lstsq(a: &Matrix, b: &[Float]) -> LstsqResult {
    let (m, n) = (a.rows, a.cols);
    assert!(m >= n && b.len() == m, "lstsq needs a tall system");
    let p = b.first().map(|f| f.prec()).unwrap_or(64);
    let mut r = a.clone();
    let mut scale = Vec::with_capacity(n);
    for j in 0..n {
        let col: Vec<Float> = (0..m).map(|i| r.get(i, j).clone()).collect();
        let mut s = norm2(&col);
        if s.is_zero() {
            s = Float::with_val(p, 1);
        }
        for i in 0..m {
            let v = Float::with_val(p, r.get(i, j) / &s);
            r.set(i, j, v);
        }
        scale.push(s);
    }
    let mut y: Vec<Float> = b.to_vec();
    // column-major working copy
    let mut cols: Vec<Vec<Float>> = (0..n).map(|c| (0..m).map(|i| r.get(i, c).clone()).collect()).collect();
    let mut tmp = Float::new(p);
    let mut d = Float::new(p);
    for k in 0..n {
        let alpha_abs = norm2(&cols[k][k..]);
        if alpha_abs.is_zero() {
            continue;
        }
        let alpha = if cols[k][k].is_sign_negative() { alpha_abs } else { -alpha_abs };
        let mut v: Vec<Float> = cols[k][k..].to_vec();
        v[0] -= &alpha;
        let mut vn2 = Float::new(p);
        for x in &v {
            tmp.assign(x.square_ref());
            vn2 += &tmp;
        }
        if vn2.is_zero() {
            continue;
        }
        let apply = |col: &mut [Float], d: &mut Float, tmp: &mut Float| {
            d.assign(0);
            for (vi, c) in v.iter().zip(col.iter()) {
                tmp.assign(vi * c);
                *d += &*tmp;
            }
            *d *= 2u32;
            *d /= &vn2;
            for (vi, c) in v.iter().zip(col.iter_mut()) {
                tmp.assign(vi * &*d);
                *c -= &*tmp;
            }
        };
        for col in cols.iter_mut().skip(k) {
            apply(&mut col[k..], &mut d, &mut tmp);
        }
        apply(&mut y[k..], &mut d, &mut tmp);
    }
    for (c, col) in cols.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            r.set(i, c, v);
        }
    }
    let mut x = vec![Float::new(p); n];
    for k in (0..n).rev() {
        let mut s = y[k].clone();
        for j in k + 1..n {
            s -= Float::with_val(p, r.get(k, j) * &x[j]);
        }
        x[k] = if r.get(k, k).is_zero() { Float::new(p) } else { s / r.get(k, k) };
    }
    let mut dmax = Float::new(p);
    let mut dmin = Float::with_val(p, f64::INFINITY);
    for k in 0..n {
        let d = Float::with_val(p, r.get(k, k).abs_ref());
        if d > dmax {
            dmax = d.clone();
        }
        if d < dmin {
            dmin = d;
        }
    }
    let conditioning = if n == 0 || dmax.is_zero() { Float::new(p) } else { dmin / dmax };
    for j in 0..n {
        x[j] /= &scale[j];
    }
    let residual = norm2(&y[n..]);
    LstsqResult { x, residual, conditioning }
}
