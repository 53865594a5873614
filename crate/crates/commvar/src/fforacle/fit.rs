//! Exact polynomial degree fitting over the rationals.
//!
//! Counts sampled at several field sizes are interpolated exactly (Newton
//! divided differences over arbitrary-precision rationals, never floating
//! point). The interpolant through the first `max_degree + 1` samples is
//! checked against every remaining sample: a mismatch refutes the
//! polynomial hypothesis, agreement beyond `degree + 1` points confirms the
//! degree, and bare interpolation is reported as consistent-with only.

use super::OracleError;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitStatus {
    /// At least one sample beyond `degree + 1` points validated the fit.
    Confirmed,
    /// Every sample was needed to pin the interpolant down.
    ConsistentWith,
    /// A validation sample disagreed with the interpolant.
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitMismatch {
    pub at: u64,
    pub predicted: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitReport {
    pub degree: usize,
    /// Monomial coefficients as exact rationals, constant term first.
    pub coefficients: Vec<String>,
    pub polynomial: String,
    pub status: FitStatus,
    pub samples_used: usize,
    pub validation_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<FitMismatch>,
}

fn rational(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

fn evaluate(poly: &[BigRational], x: u64) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(x));
    let mut acc = BigRational::zero();
    for coeff in poly.iter().rev() {
        acc = acc * &x + coeff;
    }
    acc
}

fn render(poly: &[BigRational]) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (power, coeff) in poly.iter().enumerate().rev() {
        if coeff.is_zero() {
            continue;
        }
        let mag = coeff.abs();
        let body = match power {
            0 => format!("{mag}"),
            1 if mag.is_one() => "q".to_string(),
            1 => format!("{mag}*q"),
            _ if mag.is_one() => format!("q^{power}"),
            _ => format!("{mag}*q^{power}"),
        };
        if terms.is_empty() {
            terms.push(if coeff.is_negative() {
                format!("-{body}")
            } else {
                body
            });
        } else {
            terms.push(format!(
                "{} {body}",
                if coeff.is_negative() { "-" } else { "+" }
            ));
        }
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    terms.join(" ")
}

/// Exact interpolation through the samples with degree capped at
/// `max_degree`; extra samples validate or refute the interpolant.
pub fn fit_degree(
    samples: &[(u64, BigUint)],
    max_degree: usize,
) -> Result<FitReport, OracleError> {
    if samples.is_empty() {
        return Err(OracleError::NotEnoughSamples { need: 1, got: 0 });
    }
    let mut seen = std::collections::HashSet::new();
    for &(x, _) in samples {
        if !seen.insert(x) {
            return Err(OracleError::NotEnoughSamples {
                need: samples.len(),
                got: seen.len(),
            });
        }
    }

    let k = samples.len().min(max_degree + 1);
    let xs: Vec<BigRational> = samples[..k]
        .iter()
        .map(|&(x, _)| BigRational::from_integer(BigInt::from(x)))
        .collect();
    // divided differences in place
    let mut table: Vec<BigRational> = samples[..k].iter().map(|(_, y)| rational(y)).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            let dx = &xs[i] - &xs[i - level];
            table[i] = (&table[i] - &table[i - 1]) / dx;
        }
    }
    // expand the Newton form to monomial coefficients
    let mut poly: Vec<BigRational> = vec![table[k - 1].clone()];
    for i in (0..k - 1).rev() {
        // poly = poly * (x - x_i) + c_i
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (p, coeff) in poly.iter().enumerate() {
            next[p + 1] += coeff;
            next[p] -= coeff * &xs[i];
        }
        next[0] += &table[i];
        poly = next;
    }
    while poly.len() > 1 && poly.last().map(|c| c.is_zero()) == Some(true) {
        poly.pop();
    }
    let degree = poly.len() - 1;

    let mut mismatch = None;
    for &(x, ref y) in &samples[k..] {
        let predicted = evaluate(&poly, x);
        let actual = rational(y);
        if predicted != actual {
            mismatch = Some(FitMismatch {
                at: x,
                predicted: predicted.to_string(),
                actual: actual.to_string(),
            });
            break;
        }
    }

    let (status, validation_points) = match mismatch {
        Some(_) => (FitStatus::Refuted, samples.len() - k),
        None => {
            let extra = samples.len().saturating_sub(degree + 1);
            if extra >= 1 {
                (FitStatus::Confirmed, extra)
            } else {
                (FitStatus::ConsistentWith, 0)
            }
        }
    };

    Ok(FitReport {
        degree,
        coefficients: poly.iter().map(|c| c.to_string()).collect(),
        polynomial: render(&poly),
        status,
        samples_used: k,
        validation_points,
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(vals: &[(u64, u64)]) -> Vec<(u64, BigUint)> {
        vals.iter().map(|&(x, y)| (x, BigUint::from(y))).collect()
    }

    #[test]
    fn degree_five_from_the_gl2_counts() {
        // q^5 + q^4 - q^3 at the six supported primes
        let samples = pts(&[
            (2, 40),
            (3, 297),
            (5, 3625),
            (7, 18865),
            (11, 174361),
            (13, 397657),
        ]);
        let fit = fit_degree(&samples, 5).unwrap();
        assert_eq!(fit.degree, 5);
        assert_eq!(fit.polynomial, "q^5 + q^4 - q^3");
        assert_eq!(fit.status, FitStatus::ConsistentWith);

        // the degree-4 hypothesis is refuted by the sixth sample
        let fit4 = fit_degree(&samples, 4).unwrap();
        assert_eq!(fit4.status, FitStatus::Refuted);
        assert!(fit4.mismatch.is_some());
    }

    #[test]
    fn constant_samples_have_degree_zero() {
        let fit = fit_degree(&pts(&[(2, 5), (3, 5), (5, 5)]), 4).unwrap();
        assert_eq!(fit.degree, 0);
        assert_eq!(fit.polynomial, "5");
        assert_eq!(fit.status, FitStatus::Confirmed);
        assert_eq!(fit.validation_points, 2);
    }

    #[test]
    fn u3_orbit_polynomial() {
        let fit = fit_degree(&pts(&[(2, 5), (3, 11), (5, 29)]), 3).unwrap();
        assert_eq!(fit.degree, 2);
        assert_eq!(fit.polynomial, "q^2 + q - 1");
        // a held-out q = 7 sample confirms it
        let fit = fit_degree(&pts(&[(2, 5), (3, 11), (5, 29), (7, 55)]), 2).unwrap();
        assert_eq!(fit.status, FitStatus::Confirmed);
        assert_eq!(fit.validation_points, 1);
    }

    #[test]
    fn refuted_fit_reports_the_witness() {
        let fit = fit_degree(&pts(&[(2, 4), (3, 9), (5, 25), (7, 50)]), 2).unwrap();
        assert_eq!(fit.status, FitStatus::Refuted);
        let mm = fit.mismatch.unwrap();
        assert_eq!(mm.at, 7);
        assert_eq!(mm.predicted, "49");
        assert_eq!(mm.actual, "50");
    }

    #[test]
    fn duplicate_sample_points_are_rejected() {
        assert!(fit_degree(&pts(&[(2, 4), (2, 4)]), 3).is_err());
        assert!(fit_degree(&[], 3).is_err());
    }

    #[test]
    fn rational_coefficients_render_exactly() {
        // through (2,1),(3,2),(5,1): a parabola with fractional coefficients
        let fit = fit_degree(&pts(&[(2, 1), (3, 2), (5, 1)]), 2).unwrap();
        assert_eq!(fit.degree, 2);
        // p(q) = -1/2 q^2 + 7/2 q - 4 fits: p(2)=1, p(3)=2, p(5)=1
        assert_eq!(fit.coefficients, vec!["-4", "7/2", "-1/2"]);
    }
}
