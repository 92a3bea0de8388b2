use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial in `k` with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DPolynomial {
    coeffs: Vec<BigRational>,
}

impl DPolynomial {
    /// The unique polynomial of degree below `values.len()` through `(i, values[i])`.
    pub fn interpolate(values: &[BigUint]) -> Self {
        let mut diffs: Vec<BigInt> = values.iter().map(|v| BigInt::from(v.clone())).collect();
        let mut coeffs = vec![BigRational::zero(); values.len()];
        // falling factorial k(k-1)...(k-j+1), lowest degree first
        let mut falling: Vec<BigInt> = vec![BigInt::one()];
        let mut factorial = BigInt::one();
        for j in 0..values.len() {
            let lead = BigRational::new(diffs[0].clone(), factorial.clone());
            for (c, f) in coeffs.iter_mut().zip(&falling) {
                *c += &lead * BigRational::from_integer(f.clone());
            }
            for i in 0..diffs.len() - 1 {
                diffs[i] = &diffs[i + 1] - &diffs[i];
            }
            diffs.pop();
            let mut next = vec![BigInt::zero(); falling.len() + 1];
            for (i, f) in falling.iter().enumerate() {
                next[i + 1] += f;
                next[i] -= f * BigInt::from(j);
            }
            falling = next;
            factorial *= BigInt::from(j + 1);
        }
        let mut p = DPolynomial { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, k: &BigInt) -> BigRational {
        let k = BigRational::from_integer(k.clone());
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &k + c)
    }

    pub fn coefficient_sum(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    /// Coefficients as `p/q` strings, or `p` when integral.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for DPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                _ if a.is_integer() => write!(f, "{a}")?,
                _ => write!(f, "({a})")?,
            }
            match i {
                0 => {}
                1 => write!(f, "k")?,
                _ => write!(f, "k^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_cubic() {
        // k^3 - 2k + 1 at 0..4
        let values: Vec<BigUint> = [1u32, 0, 5, 22, 57].iter().map(|&v| BigUint::from(v)).collect();
        let p = DPolynomial::interpolate(&values);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.to_strings(), ["1", "-2", "0", "1"]);
        assert_eq!(p.eval(&BigInt::from(5)), BigRational::from_integer(BigInt::from(116)));
        assert_eq!(p.to_string(), "k^3 - 2k + 1");
    }

    #[test]
    fn rational_coefficients() {
        // (k^2 - k)/2
        let values: Vec<BigUint> = [0u32, 0, 1].iter().map(|&v| BigUint::from(v)).collect();
        let p = DPolynomial::interpolate(&values);
        assert_eq!(p.to_strings(), ["0", "-1/2", "1/2"]);
        assert!(p.coefficient_sum().is_zero());
    }
}
