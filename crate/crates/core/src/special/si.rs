use num_complex::Complex;

use crate::scalar::Real;

/// Sine integral `Si(x) = ∫_0^x sin(u)/u du`.
///
/// Power series up to |x| = 4, continued fraction for `E1(ix)` beyond.
/// Oddness is exact: the value is computed for |x| and the sign reapplied.
pub fn si<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let v = if ax.is_infinite() {
        T::FRAC_PI_2()
    } else if ax <= T::of(4.0) {
        si_series(ax)
    } else {
        si_continued_fraction(ax)
    };
    if x < T::zero() {
        -v
    } else {
        v
    }
}

fn si_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut sum = x;
    let mut fact_term = x;
    let mut n = 1usize;
    loop {
        let k = T::of_usize(2 * n);
        fact_term = -fact_term * x2 / (k * (k + T::one()));
        let term = fact_term / (k + T::one());
        sum += term;
        if term.abs() <= T::epsilon() * sum.abs() || n > 200 {
            return sum;
        }
        n += 1;
    }
}

fn si_continued_fraction<T: Real>(x: T) -> T {
    let one = Complex::new(T::one(), T::zero());
    let tiny = T::min_positive_value() / T::epsilon();
    let mut b = Complex::new(T::one(), x);
    let mut c = Complex::new(T::one() / tiny, T::zero());
    let mut d = one / b;
    let mut h = d;
    for i in 2..1000usize {
        let a = -T::of_usize((i - 1) * (i - 1));
        b = b + T::of(2.0);
        d = one / (d * a + b);
        c = b + Complex::new(a, T::zero()) / c;
        let del = c * d;
        h = h * del;
        if (del.re - T::one()).abs() + del.im.abs() < T::epsilon() {
            break;
        }
    }
    h = Complex::new(x.cos(), -x.sin()) * h;
    T::FRAC_PI_2() + h.im
}

/// `Si(π)`, the global maximum of the sine integral.
pub fn si_max<T: Real>() -> T {
    si(T::PI())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // Abramowitz & Stegun table 5.1
        let cases = [
            (0.5_f64, 0.493_107_418_043_066_7),
            (1.0, 0.946_083_070_367_183_0),
            (2.0, 1.605_412_976_802_694_8),
            (5.0, 1.549_931_244_944_674_1),
            (10.0, 1.658_347_594_218_874_0),
            (20.0, 1.548_241_701_043_439_8),
            (16.0, 1.631_302_268_270_032_9),
            (30.0, 1.566_756_540_030_351_1),
        ];
        for (x, want) in cases {
            let got = si(x);
            assert!((got - want).abs() < 1e-14, "Si({x}) = {got}, want {want}");
        }
        assert!((si_max::<f64>() - 1.851_937_051_982_466_2).abs() < 1e-14);
    }

    #[test]
    fn continuity_across_method_switch() {
        let h = 1e-9_f64;
        let slope = (si(4.0 + h) - si(4.0 - h)) / (2.0 * h);
        assert!((slope - 4f64.sin() / 4.0).abs() < 1e-6);
    }

    #[test]
    fn limits() {
        assert_eq!(si(0.0_f64), 0.0);
        assert_eq!(si(f64::INFINITY), std::f64::consts::FRAC_PI_2);
        assert!((si(1e6_f64) - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    }
}
