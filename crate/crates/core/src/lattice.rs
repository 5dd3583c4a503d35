//! Small helpers for integer and rational coordinate vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An element of `Z^n`.
pub type Vector = Vec<BigInt>;
/// An element of `Q^n`.
pub type QVector = Vec<BigRational>;

pub fn vector(entries: &[i64]) -> Vector {
    entries.iter().map(|&e| BigInt::from(e)).collect()
}

pub fn zero(n: usize) -> Vector {
    vec![BigInt::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zero(n);
    v[i] = BigInt::one();
    v
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn qdot(a: &[BigRational], b: &[BigInt]) -> BigRational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * BigRational::from_integer(y.clone()))
        .fold(BigRational::zero(), |acc, t| acc + t)
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[BigInt]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn scale(c: &BigInt, a: &[BigInt]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn to_q(a: &[BigInt]) -> QVector {
    a.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

pub fn qadd(a: &[BigRational], b: &[BigRational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn qsub(a: &[BigRational], b: &[BigRational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn qscale(c: &BigRational, a: &[BigRational]) -> QVector {
    a.iter().map(|x| c * x).collect()
}

/// Returns the integer vector when every coordinate is integral.
pub fn to_integral(a: &[BigRational]) -> Option<Vector> {
    a.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

/// `p/q` or `p` when integral; the textual form used in every report.
pub fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_vector(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn fmt_qvector(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(","))
}
