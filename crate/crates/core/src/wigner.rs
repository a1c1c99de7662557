//! Exact Wigner 3j symbols over arbitrary-precision rationals and the
//! three-harmonic (Gaunt) integral built from them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact number of the form `sign · √(numerator / denominator)`.
///
/// Stored as the signed square `sign · numerator / denominator` in lowest
/// terms, so equality is exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    signed_square: BigRational,
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        Self {
            signed_square: BigRational::zero(),
        }
    }

    /// `sign · √square`; `square` must be non-negative.
    pub fn from_square(sign: i8, square: BigRational) -> Self {
        debug_assert!(!square.is_negative());
        let signed_square = match sign.signum() {
            0 => BigRational::zero(),
            1 => square,
            _ => -square,
        };
        Self { signed_square }
    }

    pub fn sign(&self) -> i8 {
        if self.signed_square.is_zero() {
            0
        } else if self.signed_square.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signed_square.is_zero()
    }

    /// `numerator / denominator` as an exact rational.
    pub fn square(&self) -> BigRational {
        self.signed_square.abs()
    }

    pub fn numerator(&self) -> BigUint {
        self.signed_square.numer().magnitude().clone()
    }

    pub fn denominator(&self) -> BigUint {
        self.signed_square.denom().magnitude().clone()
    }

    pub fn negate(&self) -> Self {
        Self {
            signed_square: -self.signed_square.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let magnitude = rational_to_f64(&self.square()).sqrt();
        f64::from(self.sign()) * magnitude
    }
}

impl fmt::Display for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            0 => write!(f, "0"),
            s => write!(
                f,
                "{}√({}/{})",
                if s < 0 { "-" } else { "" },
                self.numerator(),
                self.denominator()
            ),
        }
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a log-domain quotient for extreme magnitudes
        let num = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let den = r.denom().to_f64().unwrap_or(f64::INFINITY);
        num / den
    })
}

fn factorial(n: u32) -> BigUint {
    static TABLE: OnceLock<RwLock<Vec<BigUint>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| RwLock::new(vec![BigUint::one()]));
    {
        let t = table.read().expect("factorial table poisoned");
        if let Some(v) = t.get(n as usize) {
            return v.clone();
        }
    }
    let mut t = table.write().expect("factorial table poisoned");
    while t.len() <= n as usize {
        let next = t.last().expect("non-empty") * BigUint::from(t.len());
        t.push(next);
    }
    t[n as usize].clone()
}

fn fact(n: i64) -> BigUint {
    factorial(u32::try_from(n).expect("factorial argument is non-negative"))
}

fn triangle(l1: i64, l2: i64, l3: i64) -> bool {
    l3 >= (l1 - l2).abs() && l3 <= l1 + l2
}

fn check_args(ls: [i32; 3], ms: [i32; 3]) -> Result<()> {
    for (l, m) in ls.iter().zip(ms.iter()) {
        if *l < 0 {
            return Err(Error::domain(format!("angular momentum l = {l} must be non-negative")));
        }
        if m.abs() > *l {
            return Err(Error::domain(format!("projection m = {m} out of range |m| ≤ {l}")));
        }
    }
    Ok(())
}

/// Racah single-sum formula, assuming arguments already pass every
/// selection rule.
fn racah(l1: i64, l2: i64, l3: i64, m1: i64, m2: i64, m3: i64) -> SignedSqrtRational {
    let delta = BigRational::new(
        BigInt::from(fact(l1 + l2 - l3) * fact(l1 - l2 + l3) * fact(-l1 + l2 + l3)),
        BigInt::from(fact(l1 + l2 + l3 + 1)),
    );
    let projections = fact(l1 + m1) * fact(l1 - m1) * fact(l2 + m2) * fact(l2 - m2) * fact(l3 + m3) * fact(l3 - m3);

    let k_min = 0.max(l2 - l3 - m1).max(l1 - l3 + m2);
    let k_max = (l1 + l2 - l3).min(l1 - m1).min(l2 + m2);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let denom = fact(k)
            * fact(l3 - l2 + k + m1)
            * fact(l3 - l1 + k - m2)
            * fact(l1 + l2 - l3 - k)
            * fact(l1 - k - m1)
            * fact(l2 - k + m2);
        let term = BigRational::new(BigInt::one(), BigInt::from(denom));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return SignedSqrtRational::zero();
    }
    let phase_odd = (l1 - l2 - m3).rem_euclid(2) == 1;
    let sign = if sum.is_negative() != phase_odd { -1 } else { 1 };
    let square = delta * BigRational::from_integer(BigInt::from(projections)) * &sum * &sum;
    SignedSqrtRational::from_square(sign, square)
}

type Key = [i32; 6];

/// Picks the lexicographically smallest of the twelve symmetry images and
/// returns it with the phase that maps the canonical value back.
fn canonicalize(ls: [i32; 3], ms: [i32; 3]) -> (Key, bool) {
    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], false),
        ([1, 2, 0], false),
        ([2, 0, 1], false),
        ([1, 0, 2], true),
        ([0, 2, 1], true),
        ([2, 1, 0], true),
    ];
    let odd_sum = (ls[0] + ls[1] + ls[2]) % 2 == 1;
    let mut best: Option<(Key, bool)> = None;
    for (perm, odd_perm) in PERMS {
        for flip in [false, true] {
            let s = if flip { -1 } else { 1 };
            let key = [
                ls[perm[0]],
                ls[perm[1]],
                ls[perm[2]],
                s * ms[perm[0]],
                s * ms[perm[1]],
                s * ms[perm[2]],
            ];
            let negate = odd_sum && (odd_perm != flip);
            if best.is_none_or(|(b, _)| key < b) {
                best = Some((key, negate));
            }
        }
    }
    best.expect("twelve candidates")
}

fn cache() -> &'static RwLock<HashMap<Key, Arc<SignedSqrtRational>>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<SignedSqrtRational>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Exact Wigner 3j symbol `(l1 l2 l3; m1 m2 m3)`.
///
/// Symbols violating a selection rule are an exact zero. Results are
/// memoized under a symmetry-canonical key.
pub fn three_j(l1: i32, l2: i32, l3: i32, m1: i32, m2: i32, m3: i32) -> Result<SignedSqrtRational> {
    let ls = [l1, l2, l3];
    let ms = [m1, m2, m3];
    check_args(ls, ms)?;
    if m1 + m2 + m3 != 0 || !triangle(l1.into(), l2.into(), l3.into()) {
        return Ok(SignedSqrtRational::zero());
    }
    if ms == [0, 0, 0] && (l1 + l2 + l3) % 2 == 1 {
        return Ok(SignedSqrtRational::zero());
    }

    let (key, negate) = canonicalize(ls, ms);
    let cached = cache().read().expect("3j cache poisoned").get(&key).cloned();
    let canonical = match cached {
        Some(v) => v,
        None => {
            let k = key.map(i64::from);
            let value = Arc::new(racah(k[0], k[1], k[2], k[3], k[4], k[5]));
            cache()
                .write()
                .expect("3j cache poisoned")
                .entry(key)
                .or_insert(value)
                .clone()
        }
    };
    Ok(if negate {
        canonical.negate()
    } else {
        (*canonical).clone()
    })
}

/// Direct evaluation without the memo cache.
pub fn three_j_uncached(l1: i32, l2: i32, l3: i32, m1: i32, m2: i32, m3: i32) -> Result<SignedSqrtRational> {
    check_args([l1, l2, l3], [m1, m2, m3])?;
    if m1 + m2 + m3 != 0 || !triangle(l1.into(), l2.into(), l3.into()) {
        return Ok(SignedSqrtRational::zero());
    }
    Ok(racah(l1.into(), l2.into(), l3.into(), m1.into(), m2.into(), m3.into()))
}

/// Square of the 3j symbol as an exact rational.
pub fn three_j_squared(l1: i32, l2: i32, l3: i32, m1: i32, m2: i32, m3: i32) -> Result<BigRational> {
    Ok(three_j(l1, l2, l3, m1, m2, m3)?.square())
}

/// `â = √(2a+1)`.
pub fn hat(a: u32) -> f64 {
    f64::from(2 * a + 1).sqrt()
}

/// Gaunt integral
/// `(l̂₁ l̂₂ l̂₃/√4π) (l₁ l₂ l₃; 0 0 0)(l₁ l₂ l₃; m₁ m₂ m₃)`.
///
/// This equals `∫ Y_{l₁m₁} Y_{l₂m₂} Y_{l₃m₃} dΩ` for Condon–Shortley
/// harmonics; with the third factor conjugated, pass `-m₃` and multiply by
/// `(-1)^{m₃}`.
pub fn triple_harmonic_integral(l1: i32, l2: i32, l3: i32, m1: i32, m2: i32, m3: i32) -> Result<f64> {
    let parity = three_j(l1, l2, l3, 0, 0, 0)?;
    let projection = three_j(l1, l2, l3, m1, m2, m3)?;
    let sign = parity.sign() * projection.sign();
    if sign == 0 {
        return Ok(0.0);
    }
    let dims = BigInt::from((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1));
    let square = BigRational::from_integer(dims) * parity.square() * projection.square();
    let exact = SignedSqrtRational::from_square(sign, square);
    Ok(exact.to_f64() / (4.0 * std::f64::consts::PI).sqrt())
}
