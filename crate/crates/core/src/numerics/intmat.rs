//! Small integer matrices: Smith normal form, kernels, determinants.

/// Row-major integer matrix.
pub type IMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

pub fn matmul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

pub fn matvec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Determinant by fraction-free elimination.
pub fn det(a: &IMat) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// `(g, x, y)` with `g = gcd(a, b) >= 0` and `a x + b y = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

/// Smith form `U A V = diag(s)` with unimodular `U`, `V` and `s_i | s_{i+1}`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IMat,
    pub v: IMat,
    pub diag: Vec<i64>,
}

pub fn smith(a: &IMat) -> Smith {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let r = m.min(n);
    for t in 0..r {
        loop {
            // pivot: smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut done = true;
            for i in t + 1..m {
                let q = d[i][t].div_euclid(d[t][t]);
                if q != 0 {
                    for j in 0..n {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..m {
                        u[i][j] -= q * u[t][j];
                    }
                }
                if d[i][t] != 0 {
                    done = false;
                }
            }
            for j in t + 1..n {
                let q = d[t][j].div_euclid(d[t][t]);
                if q != 0 {
                    for i in 0..m {
                        d[i][j] -= q * d[i][t];
                    }
                    for i in 0..n {
                        v[i][j] -= q * v[i][t];
                    }
                }
                if d[t][j] != 0 {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            // divisibility of the remaining block
            let mut fix = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if d[i][j] % d[t][t] != 0 {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in 0..n {
                        d[t][j] += d[i][j];
                    }
                    for j in 0..m {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for j in 0..n {
                d[t][j] = -d[t][j];
            }
            for j in 0..m {
                u[t][j] = -u[t][j];
            }
        }
    }
    let diag = (0..r).map(|i| d[i][i]).collect();
    Smith { u, v, diag }
}

/// Basis of the integer kernel `{x : A x = 0}` (saturated).
pub fn kernel(a: &IMat) -> IMat {
    let s = smith(a);
    let n = if a.is_empty() { 0 } else { a[0].len() };
    let rank = s.diag.iter().filter(|&&x| x != 0).count();
    (rank..n).map(|j| (0..n).map(|i| s.v[i][j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_gram() {
        let g = vec![vec![2, 1], vec![1, -2]];
        let s = smith(&g);
        assert_eq!(s.diag, vec![1, 5]);
        let prod = matmul(&matmul(&s.u, &g), &s.v);
        assert_eq!(prod, vec![vec![1, 0], vec![0, 5]]);
        assert_eq!(det(&s.u).abs(), 1);
        assert_eq!(det(&s.v).abs(), 1);
    }

    #[test]
    fn smith_three_by_three() {
        let g = vec![vec![0, 0, 1], vec![0, -2, 0], vec![1, 0, 0]];
        let s = smith(&g);
        assert_eq!(s.diag, vec![1, 1, 2]);
        let prod = matmul(&matmul(&s.u, &g), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], if i == j { s.diag[i] } else { 0 });
            }
        }
    }

    #[test]
    fn kernel_of_functional() {
        let f = vec![vec![2, -1, 4]];
        let k = kernel(&f);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(matvec(&f, v), vec![0]);
        }
        // saturated: the 2x2 minors of the kernel basis have gcd 1
        let minors = [
            k[0][0] * k[1][1] - k[0][1] * k[1][0],
            k[0][0] * k[1][2] - k[0][2] * k[1][0],
            k[0][1] * k[1][2] - k[0][2] * k[1][1],
        ];
        assert_eq!(minors.iter().fold(0, |g, &x| gcd(g, x)), 1);
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&vec![vec![0, 0, 1], vec![0, -2, 0], vec![1, 0, 0]]), 2);
        assert_eq!(det(&vec![vec![2, 1], vec![1, -2]]), -5);
        assert_eq!(ext_gcd(12, -18).0, 6);
    }
}
