//! Exact integer number theory: gcd/lcm over lists, extended gcd, modular
//! inverses and the Chinese remainder theorem.
//!
//! A modulus of zero is admitted everywhere and means exact equality:
//! `x ≡ a mod 0` holds iff `x = a`. With the conventions `gcd(a, 0) = |a|`
//! and `lcm(a, 0) = 0` every formula below degrades to the right thing.

use std::fmt;

use crate::{Error, Result, Scalar};

/// Non-negative gcd of two integers; `gcd(0, 0) = 0`.
pub fn gcd<T: Scalar>(a: &T, b: &T) -> T {
    a.abs().gcd(&b.abs())
}

/// Non-negative lcm of two integers; zero if either argument is zero.
pub fn lcm<T: Scalar>(a: &T, b: &T) -> T {
    if a.is_zero() || b.is_zero() {
        return T::zero();
    }
    a.abs().lcm(&b.abs())
}

/// gcd of every element; the empty gcd is 0.
pub fn gcd_list<'a, T: Scalar>(xs: impl IntoIterator<Item = &'a T>) -> T {
    xs.into_iter().fold(T::zero(), |acc, x| gcd(&acc, x))
}

/// lcm of every element; the empty lcm is 1.
pub fn lcm_list<'a, T: Scalar>(xs: impl IntoIterator<Item = &'a T>) -> T {
    xs.into_iter().fold(T::one(), |acc, x| lcm(&acc, x))
}

/// Extended Euclid: returns `(g, x, y)` with `g = gcd(a, b) ≥ 0` and `a·x + b·y = g`.
pub fn ext_gcd<T: Scalar>(a: &T, b: &T) -> (T, T, T) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (T::one(), T::zero());
    let (mut old_t, mut t) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = old_r - q.clone() * r.clone();
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = old_s - q.clone() * s.clone();
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = old_t - q * t.clone();
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// The inverse `u ∈ [0, m)` of `a` modulo a positive `m`. Modulo 1 the inverse is 0.
pub fn mod_inverse<T: Scalar>(a: &T, m: &T) -> Result<T> {
    if !m.is_positive() {
        return Err(Error::InvalidArgument(format!("modulus {m} must be positive")));
    }
    let (g, x, _) = ext_gcd(&a.mod_floor(m), m);
    if !g.is_one() {
        return Err(Error::NotInvertible { value: a.to_string(), modulus: m.to_string() });
    }
    Ok(x.mod_floor(m))
}

/// Reduces `a` to its least non-negative residue modulo `m`; modulo 0 it is unchanged.
pub fn reduce<T: Scalar>(a: &T, m: &T) -> T {
    if m.is_zero() {
        a.clone()
    } else {
        a.mod_floor(&m.abs())
    }
}

/// `a ≡ b (mod m)`, with modulus 0 meaning equality.
pub fn congruent<T: Scalar>(a: &T, b: &T, m: &T) -> bool {
    if m.is_zero() {
        a == b
    } else {
        (a.clone() - b.clone()).mod_floor(&m.abs()).is_zero()
    }
}

/// `x ≡ residue (mod modulus)`. The residue is canonical: when the modulus is
/// positive it lies in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Congruence<T> {
    residue: T,
    modulus: T,
}

impl<T: Scalar> Congruence<T> {
    pub fn new(residue: T, modulus: T) -> Self {
        let modulus = modulus.abs();
        let residue = reduce(&residue, &modulus);
        Congruence { residue, modulus }
    }

    /// `x = value` exactly.
    pub fn exact(value: T) -> Self {
        Congruence { residue: value, modulus: T::zero() }
    }

    pub fn residue(&self) -> &T {
        &self.residue
    }

    pub fn modulus(&self) -> &T {
        &self.modulus
    }

    pub fn contains(&self, x: &T) -> bool {
        congruent(x, &self.residue, &self.modulus)
    }
}

impl<T: Scalar> fmt::Display for Congruence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// Combines two congruences into one whose solution set is the intersection.
///
/// Solvable iff `a1 ≡ a2 (mod gcd(b1, b2))`; the combined modulus is
/// `lcm(b1, b2)`, which is 0 as soon as either side fixes `x` exactly.
pub fn crt_pair<T: Scalar>(c1: &Congruence<T>, c2: &Congruence<T>) -> Result<Congruence<T>> {
    let incompatible = Error::Incompatible { first: 0, second: 1 };
    let (a1, b1) = (&c1.residue, &c1.modulus);
    let (a2, b2) = (&c2.residue, &c2.modulus);
    if b1.is_zero() || b2.is_zero() {
        // At least one side pins x; it must satisfy the other side.
        let (pinned, other) = if b1.is_zero() { (c1, c2) } else { (c2, c1) };
        return if other.contains(&pinned.residue) {
            Ok(Congruence::exact(pinned.residue.clone()))
        } else {
            Err(incompatible)
        };
    }
    let g = gcd(b1, b2);
    let diff = a2.clone() - a1.clone();
    if !diff.mod_floor(&g).is_zero() {
        return Err(incompatible);
    }
    let l = lcm(b1, b2);
    let b2g = b2.clone() / g.clone();
    // x = a1 + b1·k with b1·k ≡ a2 − a1 (mod b2)  ⇔  (b1/g)·k ≡ diff/g (mod b2/g)
    let k = if b2g.is_one() {
        T::zero()
    } else {
        let inv = mod_inverse(&(b1.clone() / g.clone()), &b2g)?;
        ((diff / g) * inv).mod_floor(&b2g)
    };
    Ok(Congruence::new(a1.clone() + b1.clone() * k, l))
}

/// Left fold of [`crt_pair`]. The empty system is `x ≡ 0 mod 1`.
///
/// On failure reports the first pair `(i, j)`, `i < j`, of input positions
/// that are pairwise incompatible; pairwise compatibility is sufficient over
/// the integers, so such a pair always exists.
pub fn crt_system<T: Scalar>(cs: &[Congruence<T>]) -> Result<Congruence<T>> {
    let mut acc = Congruence::new(T::zero(), T::one());
    for (j, c) in cs.iter().enumerate() {
        match crt_pair(&acc, c) {
            Ok(next) => acc = next,
            Err(_) => {
                let i = (0..j)
                    .find(|&i| crt_pair(&cs[i], c).is_err())
                    .unwrap_or(j);
                return Err(Error::Incompatible { first: i, second: j });
            }
        }
    }
    Ok(acc)
}

/// Solves `x ≡ y (mod a)`, `x ≡ 0 (mod b)` for positive `a`, `b` with the
/// Closed form for the two-congruence system.
///
/// With `g = gcd(a, b)`: if `a/g = 1` the answer is `b`; otherwise
/// `x = y·(b/g)·((b/g)⁻¹ mod a/g)`. The result is returned as the least
/// positive representative modulo `lcm(a, b)`.
pub fn solve_zero_pair<T: Scalar>(y: &T, a: &T, b: &T) -> Result<T> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::InvalidArgument(format!("moduli {a} and {b} must be positive")));
    }
    let g = gcd(a, b);
    if !y.mod_floor(&g).is_zero() {
        return Err(Error::Incompatible { first: 0, second: 1 });
    }
    let a_red = a.clone() / g.clone();
    if a_red.is_one() {
        return Ok(b.clone());
    }
    let b_red = b.clone() / g;
    let inv = mod_inverse(&b_red, &a_red)?;
    let x = y.clone() * b_red * inv;
    let l = lcm(a, b);
    let x = x.mod_floor(&l);
    Ok(if x.is_zero() { l } else { x })
}
