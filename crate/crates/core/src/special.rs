//! Small combinatorial helpers shared by the moment formulas and size guards.

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).map(|i| a + i as f64).product()
}

/// Binomial coefficient in `u128`; saturates instead of overflowing.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is always an integer at this point
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of monomials of total degree `degree` in `d` variables.
pub fn monomial_count(d: usize, degree: usize) -> u128 {
    if d == 0 {
        return u128::from(degree == 0);
    }
    binomial((d + degree - 1) as u64, degree as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(0.5, 0), 1.0);
        assert_eq!(pochhammer(0.5, 2), 0.75);
        assert_eq!(pochhammer(1.0, 4), 24.0);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomial_count(2, 4), 5);
    }
}
