//! Special functions not covered by `libm`: exponentially scaled modified
//! Bessel functions of the second kind (polynomial approximations from
//! Abramowitz & Stegun 9.8, relative accuracy ~2e-7).

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn bessel_i0(x: f64) -> f64 {
    let t = (x / 3.75).powi(2);
    poly(&[1.0, 3.5156229, 3.0899424, 1.2067492, 0.2659732, 0.0360768, 0.0045813], t)
}

fn bessel_i1(x: f64) -> f64 {
    let t = (x / 3.75).powi(2);
    x * poly(&[0.5, 0.87890594, 0.51498869, 0.15084934, 0.02658733, 0.00301532, 0.00032411], t)
}

/// `e^x K0(x)` for `x > 0`.
pub fn bessel_k0_scaled(x: f64) -> f64 {
    assert!(x > 0.0, "K0 needs x > 0");
    if x <= 2.0 {
        let t = (x / 2.0).powi(2);
        let k0 = -(x / 2.0).ln() * bessel_i0(x)
            + poly(
                &[-0.57721566, 0.42278420, 0.23069756, 0.03488590, 0.00262698, 0.00010750, 0.0000074],
                t,
            );
        k0 * x.exp()
    } else {
        let t = 2.0 / x;
        poly(
            &[1.25331414, -0.07832358, 0.02189568, -0.01062446, 0.00587872, -0.00251540, 0.00053208],
            t,
        ) / x.sqrt()
    }
}

/// `e^x K1(x)` for `x > 0`.
pub fn bessel_k1_scaled(x: f64) -> f64 {
    assert!(x > 0.0, "K1 needs x > 0");
    if x <= 2.0 {
        let t = (x / 2.0).powi(2);
        let xk1 = x * (x / 2.0).ln() * bessel_i1(x)
            + poly(
                &[1.0, 0.15443144, -0.67278579, -0.18156897, -0.01919402, -0.00110404, -0.00004686],
                t,
            );
        xk1 / x * x.exp()
    } else {
        let t = 2.0 / x;
        poly(
            &[1.25331414, 0.23498619, -0.03655620, 0.01504268, -0.00780353, 0.00325614, -0.00068245],
            t,
        ) / x.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values from the integral K_n(x) = int_0^inf e^{-x cosh s} cosh(n s) ds
    fn k_by_quadrature(n: f64, x: f64) -> f64 {
        let h = 1e-3;
        let mut sum = 0.0;
        let mut s: f64 = 0.5 * h;
        while s < 30.0 {
            sum += (-x * s.cosh() + x).exp() * (n * s).cosh();
            s += h;
        }
        sum * h
    }

    #[test]
    fn bessel_against_integral_representation() {
        for &x in &[0.05, 0.3, 1.0, 1.99, 2.01, 5.0, 25.0, 200.0] {
            let k0 = k_by_quadrature(0.0, x);
            let k1 = k_by_quadrature(1.0, x);
            assert!((bessel_k0_scaled(x) / k0 - 1.0).abs() < 1e-6, "K0({x})");
            assert!((bessel_k1_scaled(x) / k1 - 1.0).abs() < 1e-6, "K1({x})");
        }
    }

    #[test]
    fn erfc_known_values() {
        assert!((erfc(0.0) - 1.0).abs() < 1e-16);
        assert!((erfc(1.0) - 0.157_299_207_050_285_13).abs() < 1e-15);
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
    }
}
