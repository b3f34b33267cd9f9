//! Arithmetic in `Z_k` and subset representation over `Z_p`.
//!
//! Moduli are small (desk scale), so residues are stored as `u32` and all
//! products are carried out in `u64` before reduction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus must be at least 3, got {0}")]
    ModulusTooSmall(u32),
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u32),
    #[error("modulus {0} is not odd")]
    EvenModulus(u32),
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u32, modulus: u32 },
    #[error("element at position {0} is zero")]
    ZeroElement(usize),
    #[error("mixed moduli {0} and {1}")]
    ModulusMismatch(u32, u32),
}

/// Deterministic trial division.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A modulus `k >= 3`, with its primality cached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    value: u32,
    is_prime: bool,
}

impl Modulus {
    pub fn new(value: u32) -> Result<Self, FieldError> {
        if value < 3 {
            return Err(FieldError::ModulusTooSmall(value));
        }
        Ok(Self {
            value,
            is_prime: is_prime(value),
        })
    }

    /// A prime modulus; composite values are rejected.
    pub fn prime(value: u32) -> Result<Self, FieldError> {
        let m = Self::new(value)?;
        m.require_prime()?;
        Ok(m)
    }

    /// An odd modulus `2k+1`, possibly composite.
    pub fn odd(value: u32) -> Result<Self, FieldError> {
        let m = Self::new(value)?;
        m.require_odd()?;
        Ok(m)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn is_prime(self) -> bool {
        self.is_prime
    }

    pub fn is_odd(self) -> bool {
        self.value % 2 == 1
    }

    pub fn require_prime(self) -> Result<(), FieldError> {
        if self.is_prime {
            Ok(())
        } else {
            Err(FieldError::NonPrimeModulus(self.value))
        }
    }

    pub fn require_odd(self) -> Result<(), FieldError> {
        if self.is_odd() {
            Ok(())
        } else {
            Err(FieldError::EvenModulus(self.value))
        }
    }

    /// Canonical representative of `x` in `[0, k)`.
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.value as i64) as u32
    }

    pub fn residue(self, x: i64) -> Residue {
        Residue {
            value: self.reduce(x),
            modulus: self,
        }
    }

    pub fn zero(self) -> Residue {
        self.residue(0)
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.value as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.value as u64 - (b % self.value) as u64) % self.value as u64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.value as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        self.sub(0, a)
    }

    /// Multiplicative inverse of `a`, if `gcd(a, k) = 1`.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.value;
        if a == 0 {
            return None;
        }
        let (mut old_r, mut r) = (a as i64, self.value as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        if old_r != 1 {
            return None;
        }
        Some(self.reduce(old_s))
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.value)
    }
}

/// An element of `Z_k`, always stored in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u32,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: i64, modulus: Modulus) -> Self {
        modulus.residue(value)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Result<Residue, FieldError> {
        mod_inverse(self)
    }

    fn check(self, other: Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residue arithmetic across different moduli"
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.modulus.add(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.modulus.sub(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(rhs);
        Residue {
            value: self.modulus.mul(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

pub fn mod_inverse(x: Residue) -> Result<Residue, FieldError> {
    let m = x.modulus;
    m.inv(x.value)
        .map(|v| Residue { value: v, modulus: m })
        .ok_or(FieldError::NotInvertible {
            value: x.value,
            modulus: m.value,
        })
}

/// Finds a sub-multiset of `elems` summing to `target` modulo a prime `p`.
///
/// Returns indices into `elems` (ascending), or `None` when no subset works.
/// A solution always exists once `elems.len() >= p - 1`. Reachable residues
/// are recorded the first time they are hit while scanning elements in
/// order, so the witness uses the earliest elements possible.
pub fn cd_represent(elems: &[Residue], target: Residue) -> Result<Option<Vec<usize>>, FieldError> {
    let m = target.modulus;
    m.require_prime()?;
    for (i, e) in elems.iter().enumerate() {
        if e.modulus != m {
            return Err(FieldError::ModulusMismatch(m.value, e.modulus.value));
        }
        if e.is_zero() {
            return Err(FieldError::ZeroElement(i));
        }
    }
    let p = m.value as usize;
    // back[s] = (element index, predecessor) for the first way s was reached.
    let mut back: Vec<Option<(usize, usize)>> = vec![None; p];
    let mut reached = vec![false; p];
    reached[0] = true;
    let mut frontier = vec![0usize];
    for (i, e) in elems.iter().enumerate() {
        if reached[target.value as usize] {
            break;
        }
        let step = e.value as usize;
        let before = frontier.len();
        for j in 0..before {
            let s = frontier[j];
            let ns = (s + step) % p;
            if !reached[ns] {
                reached[ns] = true;
                back[ns] = Some((i, s));
                frontier.push(ns);
            }
        }
    }
    let mut s = target.value as usize;
    if !reached[s] {
        return Ok(None);
    }
    let mut picked = Vec::new();
    while let Some((i, prev)) = back[s] {
        picked.push(i);
        s = prev;
    }
    picked.sort_unstable();
    Ok(Some(picked))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(v: i64, p: u32) -> Residue {
        Modulus::new(p).unwrap().residue(v)
    }

    fn subsets_sum_to(elems: &[Residue], target: Residue) -> bool {
        (0u32..1 << elems.len()).any(|mask| {
            let s: i64 = elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e.value() as i64)
                .sum();
            target.modulus().reduce(s) == target.value()
        })
    }

    #[test]
    fn primality() {
        let primes: Vec<u32> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    }

    #[test]
    fn modulus_validation() {
        assert_eq!(Modulus::new(2), Err(FieldError::ModulusTooSmall(2)));
        assert!(Modulus::new(9).unwrap().is_odd());
        assert!(!Modulus::new(9).unwrap().is_prime());
        assert_eq!(Modulus::prime(9), Err(FieldError::NonPrimeModulus(9)));
        assert_eq!(Modulus::odd(8), Err(FieldError::EvenModulus(8)));
        assert_eq!(res(-1, 5).value(), 4);
        assert_eq!(res(12, 5).value(), 2);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(res(2, 5)).unwrap().value(), 3);
        assert_eq!(mod_inverse(res(1, 7)).unwrap().value(), 1);
        assert_eq!(
            mod_inverse(res(3, 9)),
            Err(FieldError::NotInvertible { value: 3, modulus: 9 })
        );
        assert!(mod_inverse(res(0, 7)).is_err());
    }

    #[test]
    fn inverse_is_involution() {
        for k in 3..=101u32 {
            let m = Modulus::new(k).unwrap();
            for x in 1..k {
                let r = m.residue(x as i64);
                if let Ok(y) = mod_inverse(r) {
                    assert_eq!((r * y).value(), 1);
                    assert_eq!(mod_inverse(y).unwrap(), r);
                }
            }
        }
    }

    #[test]
    fn represent_examples() {
        let p3 = |v| res(v, 3);
        assert_eq!(cd_represent(&[p3(1), p3(1)], p3(2)).unwrap(), Some(vec![0, 1]));
        let e5: Vec<_> = [1, 2, 3, 4].iter().map(|&v| res(v, 5)).collect();
        assert_eq!(cd_represent(&e5, res(0, 5)).unwrap(), Some(vec![]));
        let twos: Vec<_> = (0..4).map(|_| res(2, 5)).collect();
        // brute force: only the full multiset sums to 8 = 3 (mod 5)
        assert!(subsets_sum_to(&twos, res(3, 5)));
        assert_eq!(cd_represent(&twos, res(3, 5)).unwrap(), Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn represent_errors_and_infeasible() {
        assert_eq!(
            cd_represent(&[res(1, 5), res(0, 5)], res(1, 5)),
            Err(FieldError::ZeroElement(1))
        );
        assert_eq!(
            cd_represent(&[res(1, 9)], res(1, 9)),
            Err(FieldError::NonPrimeModulus(9))
        );
        assert_eq!(cd_represent(&[res(1, 3)], res(2, 3)).unwrap(), None);
    }

    fn multisets(len: usize, lo: u32, hi: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in lo..=hi {
            prefix.push(v);
            multisets(len, v, hi, prefix, out);
            prefix.pop();
        }
    }

    #[test]
    fn every_p_minus_one_multiset_is_an_additive_basis() {
        for p in [3u32, 5, 7, 11] {
            let m = Modulus::prime(p).unwrap();
            let mut all = Vec::new();
            multisets((p - 1) as usize, 1, p - 1, &mut Vec::new(), &mut all);
            for seq in all {
                let elems: Vec<_> = seq.iter().map(|&v| m.residue(v as i64)).collect();
                for t in 0..p {
                    let picked = cd_represent(&elems, m.residue(t as i64))
                        .unwrap()
                        .expect("p - 1 non-zero residues cover Z_p");
                    let sum: i64 = picked.iter().map(|&i| elems[i].value() as i64).sum();
                    assert_eq!(m.reduce(sum), t);
                }
            }
        }
    }
}
