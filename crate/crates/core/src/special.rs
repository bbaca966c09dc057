//! Small special-function kit: factorials, binomials, the modified Bessel
//! function `I0`, the principal branch of Lambert `W`, and Poisson tails.

use statrs::function::gamma::ln_gamma;

/// Largest `n` whose factorial is computed by exact integer products.
const EXACT_FACTORIAL_MAX: u32 = 20;

pub fn factorial(n: u32) -> f64 {
    if n <= EXACT_FACTORIAL_MAX {
        (1..=u64::from(n)).product::<u64>() as f64
    } else {
        ln_factorial(n).exp()
    }
}

pub fn ln_factorial(n: u32) -> f64 {
    if n <= EXACT_FACTORIAL_MAX {
        factorial(n).ln()
    } else {
        ln_gamma(f64::from(n) + 1.0)
    }
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_FACTORIAL_MAX {
        let k = k.min(n - k);
        let mut acc: u64 = 1;
        for i in 0..u64::from(k) {
            // exact at every step: acc * (n - i) is divisible by (i + 1)
            acc = acc * (u64::from(n) - i) / (i + 1);
        }
        acc as f64
    } else {
        (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
            .exp()
            .round()
    }
}

/// Modified Bessel function of the first kind, order zero, by its power
/// series `Σ (x/2)^{2m} / (m!)²`.
pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * m);
        sum += term;
        if term < 1e-18 * sum {
            return sum;
        }
    }
}

/// Principal branch `W0(z)` for `z >= 0`, by Newton iteration on `w e^w = z`.
pub fn lambert_w0(z: f64) -> f64 {
    assert!(z >= 0.0 && z.is_finite(), "lambert_w0 defined here for finite z >= 0");
    if z == 0.0 {
        return 0.0;
    }
    let mut w = if z > std::f64::consts::E {
        let lz = z.ln();
        lz - lz.ln()
    } else {
        z / (1.0 + z)
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - z;
        let step = f / (ew * (w + 1.0));
        w -= step;
        if step.abs() <= 1e-15 * w.abs().max(1.0) {
            break;
        }
    }
    w
}

/// `P(X > n)` for `X ~ Poisson(mean)`, summed upward from `n + 1` so small
/// tails keep full relative precision.
pub fn poisson_tail(mean: f64, n: u32) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let mut j = n + 1;
    let mut term = (-mean + f64::from(j) * mean.ln() - ln_factorial(j)).exp();
    let mut sum = 0.0;
    while term > 0.0 {
        sum += term;
        j += 1;
        term *= mean / f64::from(j);
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_match_exact_and_gamma_paths() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(20), 2_432_902_008_176_640_000.0);
        let f21 = factorial(21);
        assert!((f21 / (21.0 * factorial(20)) - 1.0).abs() < 1e-12);
        assert!((ln_factorial(30) - (1..=30).map(|k| f64::from(k).ln()).sum::<f64>()).abs() < 1e-10);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(20, 10), 184_756.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial(30, 15), 155_117_520.0);
    }

    #[test]
    fn i0_values() {
        assert_eq!(bessel_i0(0.0), 1.0);
        // reference values from the integral representation
        let quad = |x: f64| {
            let n = 20_000;
            let h = std::f64::consts::PI / n as f64;
            (0..n)
                .map(|i| (x * ((i as f64 + 0.5) * h).cos()).exp())
                .sum::<f64>()
                * h
                / std::f64::consts::PI
        };
        for x in [0.3, 0.87, 1.5, 4.0] {
            assert!((bessel_i0(x) - quad(x)).abs() < 1e-9 * quad(x));
        }
    }

    #[test]
    fn lambert_w_inverts() {
        for z in [1e-6, 0.1, 1.0, std::f64::consts::E, 12.24, 1e3] {
            let w = lambert_w0(z);
            assert!((w * w.exp() - z).abs() < 1e-12 * z.max(1.0), "z = {z}");
        }
        assert!((lambert_w0(std::f64::consts::E) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn poisson_tail_against_complement() {
        let mean: f64 = 1.2;
        let head: f64 = (0..=4)
            .map(|j| (-mean).exp() * mean.powi(j as i32) / factorial(j))
            .sum();
        assert!((poisson_tail(mean, 4) - (1.0 - head)).abs() < 1e-14);
        assert_eq!(poisson_tail(0.0, 3), 0.0);
    }
}
