//! Exact integer arithmetic behind Hirzebruch–Jung strings.
//!
//! Everything here works on nonnegative machine integers with overflow
//! checks; intermediate products are taken in `i128`. The only rational
//! arithmetic is [`eval_ncf`], which uses big rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("non-coprime input: gcd({a},{b},{c}) = {g}")]
    NonCoprime { a: i64, b: i64, c: i64, g: i64 },
    #[error("delta not integral: gcd(a,b)*gcd(a,c) = {denom} does not divide a = {a}")]
    DeltaNotIntegral { a: i64, denom: i64 },
    #[error("string parameter a must be at least 1")]
    ZeroA,
    #[error("negative argument {0}")]
    Negative(i64),
    #[error("multiplicity recursion does not close: expected mu_(l+1) = {expected}, got {got}")]
    RecursionMismatch { expected: i64, got: i64 },
    #[error("mu_1 = ({numer})/{delta} is not an integer")]
    NonIntegralMu { numer: i64, delta: i64 },
    #[error("integer overflow")]
    Overflow,
}

/// `gcd(x, 0) = x`, `gcd(0, 0) = 0`; always nonnegative.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

/// gcd of a whole sequence; the empty gcd is 0.
pub fn gcd_all<I: IntoIterator<Item = i64>>(values: I) -> i64 {
    values.into_iter().fold(0, gcd)
}

/// lcm under the same zero convention (`lcm(x, 0) = 0`).
pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn narrow(v: i128) -> Result<i64, NumError> {
    i64::try_from(v).map_err(|_| NumError::Overflow)
}

/// Negative continued fraction `p/q = k_1 - 1/(k_2 - 1/(... - 1/k_l))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegContFrac {
    pub numerator: i64,
    pub denominator: i64,
    pub coefficients: Vec<i64>,
}

impl NegContFrac {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Expands `p/q` with `0 <= q < p`. `q = 0` gives the empty expansion.
///
/// Panics if `p < 1`, `q` is out of range, or `gcd(p, q) != 1` for `q > 0`.
pub fn neg_cont_frac(p: i64, q: i64) -> NegContFrac {
    assert!(
        p >= 1 && (0..p.max(1)).contains(&q),
        "neg_cont_frac needs 0 <= q < p"
    );
    assert!(
        q == 0 || gcd(p, q) == 1,
        "neg_cont_frac needs gcd(p, q) = 1"
    );
    let (mut num, mut den) = (p, q);
    let mut coefficients = Vec::new();
    while den > 0 {
        // ceil(num / den); each step keeps 0 <= den' < den.
        let k = (num + den - 1) / den;
        coefficients.push(k);
        let next = k * den - num;
        num = den;
        den = next;
    }
    NegContFrac {
        numerator: p,
        denominator: q,
        coefficients,
    }
}

/// Evaluates a negative continued fraction exactly. `None` stands for the
/// empty expansion, read as `1/0`.
pub fn eval_ncf(coefficients: &[i64]) -> Option<BigRational> {
    let (last, rest) = coefficients.split_last()?;
    let mut acc = BigRational::from_integer(BigInt::from(*last));
    for &k in rest.iter().rev() {
        if acc.is_zero() {
            // only reachable with coefficients < 2
            return None;
        }
        acc = BigRational::from_integer(BigInt::from(k)) - BigRational::one() / acc;
    }
    Some(acc)
}

/// Data of the string `Str(a; b, c | n1; n2, n3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HJString {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub n1: i64,
    pub n2: i64,
    pub n3: i64,
    pub delta: i64,
    pub alpha: i64,
    /// `k_1..k_l`
    pub coeffs: Vec<i64>,
    /// `mu_0, mu_1, ..., mu_l, mu_(l+1)`
    pub mus: Vec<i64>,
}

impl HJString {
    /// Number of interior curves `l`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplicity at the `mu_0` end.
    pub fn first_mult(&self) -> i64 {
        self.mus[0]
    }

    /// Multiplicity at the `mu_(l+1)` end.
    pub fn last_mult(&self) -> i64 {
        *self.mus.last().expect("mus always has both ends")
    }

    /// Interior multiplicities `mu_1..mu_l`.
    pub fn interior_mults(&self) -> &[i64] {
        &self.mus[1..self.mus.len() - 1]
    }
}

/// The unique `alpha` in `[0, delta-1]` with `a | alpha*c*gcd(a,b) + b*gcd(a,c)`.
///
/// Writing `a = delta*gb*gc`, the condition reduces to
/// `alpha*(c/gc) = -(b/gb) mod delta`, and `c/gc` is a unit mod `delta`.
fn hj_alpha(a: i64, b: i64, c: i64, delta: i64) -> Result<i64, NumError> {
    if delta == 1 {
        return Ok(0);
    }
    let gb = gcd(a, b);
    let gc = gcd(a, c);
    let (c_red, b_red, d) = ((c / gc) as i128, (b / gb) as i128, delta as i128);
    let (g, inv, _) = ext_gcd(c_red.rem_euclid(d), d);
    debug_assert_eq!(g, 1);
    let alpha = (-b_red * inv).rem_euclid(d);
    narrow(alpha)
}

/// Builds `Str(a; b, c | n1; n2, n3)`: the resolution string of
/// `{x^a = y^b z^c}` with the multiplicities of `x^n1 y^n2 z^n3` on it.
pub fn hj_string(a: i64, b: i64, c: i64, n1: i64, n2: i64, n3: i64) -> Result<HJString, NumError> {
    for v in [a, b, c, n1, n2, n3] {
        if v < 0 {
            return Err(NumError::Negative(v));
        }
    }
    if a < 1 {
        return Err(NumError::ZeroA);
    }
    let g = gcd_all([a, b, c]);
    if g != 1 {
        return Err(NumError::NonCoprime { a, b, c, g });
    }
    let gb = gcd(a, b);
    let gc = gcd(a, c);
    let denom = (gb as i128) * (gc as i128);
    if (a as i128) % denom != 0 {
        return Err(NumError::DeltaNotIntegral {
            a,
            denom: narrow(denom)?,
        });
    }
    let delta = narrow(a as i128 / denom)?;
    let alpha = hj_alpha(a, b, c, delta)?;
    let expansion = neg_cont_frac(delta, alpha);

    let (a1, b1, c1) = (a as i128, b as i128, c as i128);
    let mu_last = narrow((b1 * n1 as i128 + a1 * n2 as i128) / gb as i128)?;
    let mu_first = narrow((c1 * n1 as i128 + a1 * n3 as i128) / gc as i128)?;

    let mut mus = Vec::with_capacity(expansion.len() + 2);
    mus.push(mu_first);
    if !expansion.is_empty() {
        let numer = alpha as i128 * mu_first as i128 + mu_last as i128;
        if numer % delta as i128 != 0 {
            return Err(NumError::NonIntegralMu {
                numer: narrow(numer)?,
                delta,
            });
        }
        mus.push(narrow(numer / delta as i128)?);
        for (i, &k) in expansion.coefficients.iter().enumerate() {
            let next = k as i128 * mus[i + 1] as i128 - mus[i] as i128;
            mus.push(narrow(next)?);
        }
        let got = *mus.last().unwrap();
        if got != mu_last {
            return Err(NumError::RecursionMismatch {
                expected: mu_last,
                got,
            });
        }
    } else {
        mus.push(mu_last);
    }

    Ok(HJString {
        a,
        b,
        c,
        n1,
        n2,
        n3,
        delta,
        alpha,
        coeffs: expansion.coefficients,
        mus,
    })
}
