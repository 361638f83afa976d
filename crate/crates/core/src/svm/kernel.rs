//! Gaussian RBF kernel with MATLAB-style "kernel scale": `exp(-||u - v||^2 / s^2)`.

use alloc::vec::Vec;

pub fn squared_distance(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub fn rbf_kernel(u: &[f64], v: &[f64], scale: f64) -> f64 {
    libm::exp(-squared_distance(u, v) / (scale * scale))
}

/// Above this many points the Gram matrix is evaluated on demand instead of stored.
pub(crate) const DENSE_LIMIT: usize = 4000;

pub(crate) enum Gram<'a> {
    Dense { n: usize, values: Vec<f64> },
    Lazy { rows: &'a [f64], dim: usize, scale: f64 },
}

impl<'a> Gram<'a> {
    pub(crate) fn new(rows: &'a [f64], dim: usize, scale: f64) -> Self {
        let n = if dim == 0 { 0 } else { rows.len() / dim };
        if n > DENSE_LIMIT {
            return Gram::Lazy { rows, dim, scale };
        }
        let mut values = alloc::vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
            for j in 0..i {
                let k = rbf_kernel(&rows[i * dim..(i + 1) * dim], &rows[j * dim..(j + 1) * dim], scale);
                values[i * n + j] = k;
                values[j * n + i] = k;
            }
        }
        Gram::Dense { n, values }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            Gram::Dense { n, values } => values[i * n + j],
            Gram::Lazy { rows, dim, scale } => {
                if i == j {
                    1.0
                } else {
                    rbf_kernel(&rows[i * dim..(i + 1) * dim], &rows[j * dim..(j + 1) * dim], *scale)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_points() {
        assert_eq!(rbf_kernel(&[0.3, 0.7], &[0.3, 0.7], 3.0), 1.0);
    }

    #[test]
    fn distance_equal_to_scale() {
        let k = rbf_kernel(&[0.0, 0.0], &[3.0, 0.0], 3.0);
        assert!((k - libm::exp(-1.0)).abs() < 1e-15);
        assert!((k - 0.3679).abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn symmetric(u in proptest::collection::vec(-5.0f64..5.0, 4), v in proptest::collection::vec(-5.0f64..5.0, 4)) {
            prop_assert_eq!(rbf_kernel(&u, &v, 3.0), rbf_kernel(&v, &u, 3.0));
        }
    }
}
