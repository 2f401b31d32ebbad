//! Truncated one-variable power series with exact rational coefficients.

use std::fmt;

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_coefficient, Rational};

/// `a_0 + a_1 x + ... + a_N x^N`, with all arithmetic truncated at `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Series from `a_0..=a_N`; the truncation order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least a constant term"
        );
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> Rational) -> Self {
        PowerSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Truncates, or pads with zeros, to the given order.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_fn(order, |i| self.coeff(i))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |i| &self.coeffs[i] + &other.coeffs[i])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |i| &self.coeffs[i] - &other.coeffs[i])
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::from_fn(self.order(), |i| &self.coeffs[i] * factor)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::SeriesNotInvertible);
        }
        let n = self.order();
        let mut inv = vec![Rational::zero(); n + 1];
        inv[0] = a0.recip();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &inv[k - i];
            }
            inv[k] = -acc / a0;
        }
        Ok(PowerSeries { coeffs: inv })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        Self::from_fn(n - 1, |i| {
            &self.coeffs[i + 1] * Rational::from_integer(BigInt::from(i + 1))
        })
    }

    /// Antiderivative with zero constant term, one order higher.
    pub fn integral(&self) -> Self {
        Self::from_fn(self.order() + 1, |i| {
            if i == 0 {
                Rational::zero()
            } else {
                &self.coeffs[i - 1] / Rational::from_integer(BigInt::from(i))
            }
        })
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// For an even series `Σ a_{2m} x^{2m}`, the series `Σ a_{2m} y^m`.
    pub fn even_part_in_square(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::SeriesNotEven);
        }
        Ok(Self::from_fn(self.order() / 2, |m| {
            self.coeffs[2 * m].clone()
        }))
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if a < &Rational::zero() { "-" } else { "+" };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = if sign == "-" { -a.clone() } else { a.clone() };
            match i {
                0 => write!(f, "{}", fmt_coefficient(&abs))?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{} ", fmt_coefficient(&abs))?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Formal logarithm `∫ s'/s` of a series with constant term 1.
pub fn series_log(s: &PowerSeries) -> Result<PowerSeries> {
    if !s.coeff(0).is_one() {
        return Err(Error::SeriesNotUnital);
    }
    let n = s.order();
    if n == 0 {
        return Ok(PowerSeries::zero(0));
    }
    let quotient = s.derivative().div(&s.with_order(n - 1))?;
    Ok(quotient.integral())
}

/// Formal exponential of a series with zero constant term.
pub fn series_exp(s: &PowerSeries) -> Result<PowerSeries> {
    if !s.coeff(0).is_zero() {
        return Err(Error::SeriesNotNilpotent);
    }
    // e' = s' e gives n e_n = Σ_{k=1}^n k s_k e_{n-k}.
    let n = s.order();
    let mut e = vec![Rational::zero(); n + 1];
    e[0] = Rational::one();
    for m in 1..=n {
        let mut acc = Rational::zero();
        for k in 1..=m {
            if s.coeffs[k].is_zero() {
                continue;
            }
            acc += Rational::from_integer(BigInt::from(k)) * &s.coeffs[k] * &e[m - k];
        }
        e[m] = acc / Rational::from_integer(BigInt::from(m));
    }
    Ok(PowerSeries { coeffs: e })
}

fn inverse_factorial(n: usize) -> Rational {
    let f: BigInt = (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
    Rational::new(BigInt::one(), f)
}

/// `x / (1 - e^{-x})`, by dividing 1 by `(1 - e^{-x})/x`.
pub fn todd_series(order: usize) -> PowerSeries {
    let denom = PowerSeries::from_fn(order, |k| {
        let c = inverse_factorial(k + 1);
        if k % 2 == 0 {
            c
        } else {
            -c
        }
    });
    denom.inverse().expect("constant term is 1")
}

/// `x / tanh(x) = cosh(x) / (sinh(x)/x)`.
pub fn l_series(order: usize) -> PowerSeries {
    let cosh = PowerSeries::from_fn(order, |k| {
        if k % 2 == 0 {
            inverse_factorial(k)
        } else {
            Rational::zero()
        }
    });
    let sinhc = PowerSeries::from_fn(order, |k| {
        if k % 2 == 0 {
            inverse_factorial(k + 1)
        } else {
            Rational::zero()
        }
    });
    cosh.div(&sinhc).expect("constant term is 1")
}

/// `(x/2) / sinh(x/2)`.
pub fn ahat_series(order: usize) -> PowerSeries {
    let sinhc = PowerSeries::from_fn(order, |k| {
        if k % 2 == 0 {
            inverse_factorial(k + 1) / Rational::from_integer(BigInt::from(2).pow(k as u32))
        } else {
            Rational::zero()
        }
    });
    sinhc.inverse().expect("constant term is 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use proptest::prelude::*;

    #[test]
    fn log_and_exp_of_simple_series() {
        let one_plus_x = PowerSeries::new(vec![int(1), int(1), int(0), int(0), int(0)]);
        let log = series_log(&one_plus_x).unwrap();
        assert_eq!(
            log.coefficients(),
            &[int(0), int(1), q(-1, 2), q(1, 3), q(-1, 4)]
        );
        assert_eq!(
            series_log(&PowerSeries::one(5)).unwrap(),
            PowerSeries::zero(5)
        );
        assert_eq!(
            series_exp(&PowerSeries::zero(3)).unwrap(),
            PowerSeries::one(3)
        );
        let x = PowerSeries::new(vec![int(0), int(1), int(0), int(0)]);
        assert_eq!(
            series_exp(&x).unwrap().coefficients(),
            &[int(1), int(1), q(1, 2), q(1, 6)]
        );
    }

    #[test]
    fn precondition_errors() {
        let s = PowerSeries::new(vec![int(2), int(1)]);
        assert_eq!(series_log(&s).unwrap_err(), Error::SeriesNotUnital);
        assert_eq!(series_exp(&s).unwrap_err(), Error::SeriesNotNilpotent);
        assert_eq!(
            PowerSeries::zero(2).inverse().unwrap_err(),
            Error::SeriesNotInvertible
        );
        let odd = PowerSeries::new(vec![int(1), int(1)]);
        assert_eq!(odd.even_part_in_square().unwrap_err(), Error::SeriesNotEven);
    }

    #[test]
    fn todd_coefficients() {
        assert_eq!(todd_series(0).coefficients(), &[int(1)]);
        assert_eq!(todd_series(2).coefficients(), &[int(1), q(1, 2), q(1, 12)]);
        let t = todd_series(4);
        assert_eq!(t.coeff(3), int(0));
        assert_eq!(t.coeff(4), q(-1, 720));
    }

    #[test]
    fn todd_times_inverse_is_one() {
        // (1 - e^{-x})/x built independently from e^{-x}.
        let n = 8;
        let exp_neg = series_exp(&PowerSeries::from_fn(n + 1, |k| {
            if k == 1 {
                int(-1)
            } else {
                int(0)
            }
        }))
        .unwrap();
        let numerator = PowerSeries::one(n + 1).sub(&exp_neg);
        let shifted = PowerSeries::from_fn(n, |k| numerator.coeff(k + 1));
        assert_eq!(todd_series(n).mul(&shifted), PowerSeries::one(n));
    }

    #[test]
    fn l_and_ahat_coefficients() {
        let l = l_series(6);
        assert_eq!(
            l.coefficients(),
            &[
                int(1),
                int(0),
                q(1, 3),
                int(0),
                q(-1, 45),
                int(0),
                q(2, 945)
            ]
        );
        assert!(l.is_even());
        let a = ahat_series(4);
        assert_eq!(
            a.coefficients(),
            &[int(1), int(0), q(-1, 24), int(0), q(7, 5760)]
        );
    }

    #[test]
    fn log_of_todd_series() {
        // Frozen from the round trip below: log(x/(1-e^{-x})) = x/2 - x^2/24 + x^4/2880 + O(x^6).
        let log = series_log(&todd_series(5)).unwrap();
        assert_eq!(
            log.coefficients(),
            &[int(0), q(1, 2), q(-1, 24), int(0), q(1, 2880), int(0)]
        );
        assert_eq!(series_exp(&log).unwrap(), todd_series(5));
    }

    fn unital_series() -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec((-20i64..20, 1i64..9), 12).prop_map(|v| {
            let mut coeffs = vec![int(1)];
            coeffs.extend(v.into_iter().map(|(n, d)| q(n, d)));
            PowerSeries::new(coeffs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn exp_log_round_trip(s in unital_series()) {
            prop_assert_eq!(series_exp(&series_log(&s).unwrap()).unwrap(), s);
        }

        #[test]
        fn log_is_additive(a in unital_series(), b in unital_series()) {
            let lhs = series_log(&a.mul(&b)).unwrap();
            let rhs = series_log(&a).unwrap().add(&series_log(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
