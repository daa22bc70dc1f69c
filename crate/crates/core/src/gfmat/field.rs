use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

/// `2^31 - 1`. Products of two reduced elements fit in a `u64`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// A validated odd prime modulus below `2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self> {
        if !(3..1 << 32).contains(&modulus) || !is_prime(modulus) {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn from_i64(&self, value: i64) -> FieldElement {
        let value = value.rem_euclid(self.modulus as i64) as u64;
        FieldElement {
            value,
            modulus: self.modulus,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self {
            modulus: DEFAULT_PRIME,
        }
    }
}

/// An element of GF(p), always fully reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn with(&self, value: u64) -> Self {
        Self {
            value,
            modulus: self.modulus,
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = *self;
        let mut acc = self.with(1 % self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inverse(&self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero(self.modulus));
        }
        Ok(self.pow(self.modulus - 2))
    }

    /// Euler's criterion. Zero counts as a square.
    pub fn is_square(&self) -> bool {
        self.value == 0 || self.pow((self.modulus - 1) / 2).value == 1
    }

    /// Tonelli–Shanks. Returns `None` for non-residues; otherwise the root
    /// `r` with `r <= p - r`.
    pub fn sqrt(&self) -> Option<Self> {
        if self.value == 0 {
            return Some(*self);
        }
        if !self.is_square() {
            return None;
        }
        let p = self.modulus;
        // p - 1 = q * 2^s with q odd
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;

        // any non-residue works; scan from 2
        let mut z = self.with(2);
        while z.is_square() {
            z = z.with(z.value + 1);
        }

        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow(q.div_ceil(2));
        while t.value != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2.value != 1 {
                t2 = t2 * t2;
                i += 1;
            }
            let b = c.pow(1 << (m - i - 1));
            m = i;
            c = b * b;
            t = t * c;
            r = r * b;
        }
        if r.value > p - r.value {
            r = -r;
        }
        Some(r)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value + rhs.value;
        self.with(if s >= self.modulus {
            s - self.modulus
        } else {
            s
        })
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.with(if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        })
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.with(self.value * rhs.value % self.modulus)
    }
}

pub fn field_inverse(a: FieldElement) -> Result<FieldElement> {
    a.inverse()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
