//! Compensated (Neumaier) summation and series convolutions built on it.

/// Running sum with a Neumaier correction term.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompSum {
    sum: f64,
    comp: f64,
}

impl CompSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of a slice.
pub fn sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<CompSum>().value()
}

/// Coefficient `n` of the Cauchy product of two series, `sum a_k b_{n-k}`.
/// Missing coefficients count as zero.
pub fn cauchy(a: &[f64], b: &[f64], n: usize) -> f64 {
    let mut s = CompSum::new();
    let lo = n.saturating_sub(b.len().saturating_sub(1));
    for k in lo..=n.min(a.len().saturating_sub(1)) {
        if n - k < b.len() {
            s.add(a[k] * b[n - k]);
        }
    }
    s.value()
}

/// First `len` coefficients of the product series.
pub fn product(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    (0..len).map(|n| cauchy(a, b, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum(&xs), 2.0);
    }

    #[test]
    fn cauchy_of_constant_series() {
        let a = [3.0, 0.0, 0.0];
        assert_eq!(cauchy(&a, &a, 0), 9.0);
        assert_eq!(cauchy(&a, &a, 1), 0.0);
        assert_eq!(cauchy(&a, &a, 4), 0.0);
    }

    #[test]
    fn cauchy_uneven_lengths() {
        // (1 + x)(1 + 2x + 3x^2) = 1 + 3x + 5x^2 + 3x^3
        let a = [1.0, 1.0];
        let b = [1.0, 2.0, 3.0];
        assert_eq!(product(&a, &b, 5), vec![1.0, 3.0, 5.0, 3.0, 0.0]);
    }
}
