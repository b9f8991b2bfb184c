//! Exact arithmetic in Z[ζ_p] using the length-p group-ring representation.
//!
//! A value is `Σ_a c[a] ζ^a`. Since `1 + ζ + … + ζ^{p-1} = 0`, two coordinate
//! vectors denote the same element exactly when they differ by a constant.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::galois::{eta0, inv_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("operands live in Z[ζ_{0}] and Z[ζ_{1}]")]
    RejectMixedP(u32, u32),
    #[error("automorphism index must be a unit mod p")]
    RejectZeroIndex,
    #[error("Gauss sum needs an odd prime")]
    RejectCharTwo,
}

#[derive(Clone, Debug, Eq)]
pub struct CycInt {
    p: u32,
    c: Vec<i64>,
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        let d0 = self.c[0] - other.c[0];
        self.c.iter().zip(&other.c).all(|(a, b)| a - b == d0)
    }
}

impl CycInt {
    pub fn new(p: u32, coords: Vec<i64>) -> CycInt {
        assert_eq!(coords.len(), p as usize, "need exactly p coordinates");
        CycInt { p, c: coords }
    }

    pub fn zero(p: u32) -> CycInt {
        CycInt {
            p,
            c: vec![0; p as usize],
        }
    }

    pub fn int(p: u32, k: i64) -> CycInt {
        let mut c = vec![0; p as usize];
        c[0] = k;
        CycInt { p, c }
    }

    pub fn one(p: u32) -> CycInt {
        CycInt::int(p, 1)
    }

    /// ζ^j.
    pub fn zeta(p: u32, j: i64) -> CycInt {
        let mut c = vec![0; p as usize];
        c[j.rem_euclid(p as i64) as usize] = 1;
        CycInt { p, c }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[i64] {
        &self.c
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.c
    }

    /// Representative with the last coordinate zero.
    pub fn normalized(&self) -> CycInt {
        let last = self.c[self.p as usize - 1];
        CycInt {
            p: self.p,
            c: self.c.iter().map(|&x| x - last).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == self.c[0])
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<i64> {
        if self.p == 2 {
            return Some(self.c[0] - self.c[1]);
        }
        let r = self.c[1];
        if self.c[1..].iter().all(|&x| x == r) {
            Some(self.c[0] - r)
        } else {
            None
        }
    }

    fn same_p(&self, o: &CycInt) -> Result<(), CycError> {
        if self.p != o.p {
            Err(CycError::RejectMixedP(self.p, o.p))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, o: &CycInt) -> Result<CycInt, CycError> {
        self.same_p(o)?;
        Ok(CycInt {
            p: self.p,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, o: &CycInt) -> Result<CycInt, CycError> {
        self.same_p(o)?;
        Ok(CycInt {
            p: self.p,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        })
    }

    /// Cyclic convolution of coordinates.
    pub fn try_mul(&self, o: &CycInt) -> Result<CycInt, CycError> {
        self.same_p(o)?;
        let p = self.p as usize;
        let mut c = vec![0i64; p];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[(i + j) % p] += a * b;
            }
        }
        Ok(CycInt { p: self.p, c })
    }

    pub fn scale(&self, k: i64) -> CycInt {
        CycInt {
            p: self.p,
            c: self.c.iter().map(|&x| x * k).collect(),
        }
    }

    /// Multiplication by ζ^j.
    pub fn rotate(&self, j: i64) -> CycInt {
        let p = self.p as usize;
        let j = j.rem_euclid(p as i64) as usize;
        let mut c = vec![0i64; p];
        for (i, &x) in self.c.iter().enumerate() {
            c[(i + j) % p] = x;
        }
        CycInt { p: self.p, c }
    }

    pub fn pow(&self, e: u32) -> CycInt {
        let mut r = CycInt::one(self.p);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        r
    }

    /// σ_a : ζ ↦ ζ^a.
    pub fn sigma(&self, a: i64) -> Result<CycInt, CycError> {
        let p = self.p as i64;
        let a = a.rem_euclid(p);
        if a == 0 {
            return Err(CycError::RejectZeroIndex);
        }
        let mut c = vec![0i64; p as usize];
        for (j, &x) in self.c.iter().enumerate() {
            c[(j as i64 * a % p) as usize] += x;
        }
        Ok(CycInt { p: self.p, c })
    }

    /// u · σ_{-1}(u), which is |u|² for any u.
    pub fn norm_sq(&self) -> CycInt {
        self * &self.sigma(-1).expect("-1 is a unit")
    }

    /// Exact quotient by a rational integer k, if it exists in Z[ζ_p].
    pub fn div_exact(&self, k: i64) -> Option<CycInt> {
        assert!(k != 0);
        let base = self.c[self.p as usize - 1];
        let shifted: Vec<i64> = self.c.iter().map(|&x| x - base).collect();
        if shifted.iter().all(|&x| x % k == 0) {
            Some(CycInt {
                p: self.p,
                c: shifted.into_iter().map(|x| x / k).collect(),
            })
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let p = self.p as f64;
        self.c
            .iter()
            .enumerate()
            .map(|(a, &x)| {
                Complex64::from_polar(x as f64, 2.0 * std::f64::consts::PI * a as f64 / p)
            })
            .sum()
    }

    /// (Σ c_a a², Σ c_a a, Σ c_a) mod p from the raw coordinates.
    pub fn criterion_sums(&self) -> CriterionSums {
        let p = self.p as i64;
        let (mut s2, mut s1, mut s0) = (0i64, 0i64, 0i64);
        for (a, &x) in self.c.iter().enumerate() {
            let a = a as i64;
            let x = x.rem_euclid(p);
            s2 = (s2 + x * (a * a % p)) % p;
            s1 = (s1 + x * a) % p;
            s0 = (s0 + x) % p;
        }
        CriterionSums {
            s2,
            s1,
            s0,
            representation_dependent: self.p <= 3,
        }
    }
}

/// Sums used by the odd-characteristic self-orthogonality test. For p ≤ 3 the
/// first two depend on the chosen coordinate representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriterionSums {
    pub s2: i64,
    pub s1: i64,
    pub s0: i64,
    pub representation_dependent: bool,
}

/// √(p*) = Σ_{x ≠ 0} η_0(x) ζ^x.
pub fn gauss_sum(p: u32) -> Result<CycInt, CycError> {
    if p == 2 {
        return Err(CycError::RejectCharTwo);
    }
    let c = (0..p as i64).map(|x| eta0(p, x)).collect();
    Ok(CycInt { p, c })
}

/// p* = (-1)^{(p-1)/2} p.
pub fn p_star(p: u32) -> i64 {
    if p % 4 == 1 {
        p as i64
    } else {
        -(p as i64)
    }
}

/// ζ^{a/b} exponent helper: a · b^{-1} mod p.
pub fn div_exp(a: i64, b: i64, p: u32) -> i64 {
    let b = b.rem_euclid(p as i64) as u32;
    (a.rem_euclid(p as i64) * inv_mod(b, p) as i64) % p as i64
}

/// A Walsh coefficient together with the point it was evaluated at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshValue {
    pub beta: u32,
    pub value: CycInt,
}

impl WalshValue {
    pub fn criterion_sums(&self) -> CriterionSums {
        self.value.criterion_sums()
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, &x) in self.c.iter().enumerate() {
            if a > 0 {
                write!(f, " + ")?;
            }
            match a {
                0 => write!(f, "{x}")?,
                1 => write!(f, "{x}·z")?,
                _ => write!(f, "{x}·z^{a}")?,
            }
        }
        Ok(())
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, o: &CycInt) -> CycInt {
        self.try_add(o).expect("mixed p")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, o: &CycInt) -> CycInt {
        self.try_sub(o).expect("mixed p")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, o: &CycInt) -> CycInt {
        self.try_mul(o).expect("mixed p")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}
