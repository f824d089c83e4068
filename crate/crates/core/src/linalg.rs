//! Small dense LU factorization with partial pivoting.

/// Row-major square matrix factorized in place.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn new(n: usize, mut a: Vec<f64>) -> Self {
        assert_eq!(a.len(), n * n, "matrix must be {n}x{n}");
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap_or(k);
            if a[p * n + k] == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let m = a[i * n + k] / pivot;
                a[i * n + k] = m;
                for c in k + 1..n {
                    a[i * n + c] -= m * a[k * n + c];
                }
            }
        }
        Lu { n, lu: a, perm, sign, singular }
    }

    pub fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        (0..self.n).fold(self.sign, |d, i| d * self.lu[i * self.n + i])
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        if self.singular {
            return None;
        }
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        Some(x)
    }
}

/// 1-norm condition number, computed from the explicit inverse (sizes here are tiny).
pub fn condition_1(n: usize, a: &[f64]) -> f64 {
    let lu = Lu::new(n, a.to_vec());
    if lu.is_singular() {
        return f64::INFINITY;
    }
    let norm = |m: &dyn Fn(usize, usize) -> f64| {
        (0..n).map(|j| (0..n).map(|i| m(i, j).abs()).sum::<f64>()).fold(0.0, f64::max)
    };
    let mut inv = vec![0.0; n * n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = lu.solve(&e).expect("nonsingular");
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    norm(&|i, j| a[i * n + j]) * norm(&|i, j| inv[i * n + j])
}
