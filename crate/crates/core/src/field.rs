//! Finite fields GF(p) and GF(2^m) with log/antilog tables.
//!
//! Elements are integers in `0..q`. For GF(p) this is the residue; for
//! GF(2^m) bit `i` is the coefficient of `x^i` in the polynomial basis modulo
//! a fixed primitive polynomial.

use std::fmt;

use thiserror::Error;

pub type Elem = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field order {0} is neither prime nor a power of two")]
    UnsupportedOrder(u32),
    #[error("field order {0} exceeds the supported maximum 65536")]
    TooLarge(u32),
}

/// Primitive polynomials for GF(2^m), bit `i` = coefficient of `x^i`.
const PRIMITIVE_POLYS: [u32; 17] = [
    0, 0b11, 0b111, 0b1011, 0b1_0011, 0b10_0101, 0b100_0011, 0b1000_1001, 0x11D, 0x211, 0x409,
    0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

const MAX_ORDER: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Prime,
    Binary { modulus: u32 },
}

/// A finite field of order `q`.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    q: u32,
    kind: Kind,
    /// `exp[i] = g^i` for `i` in `0..2(q-1)`, so products of logs need no reduction.
    exp: Vec<Elem>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Prime => write!(f, "GF({})", self.q),
            Kind::Binary { modulus } => write!(f, "GF({}; modulus {:#x})", self.q, modulus),
        }
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

impl Field {
    /// GF(q) for prime `q` or `q = 2^m` with `1 ≤ m ≤ 16`.
    pub fn new(q: u32) -> Result<Self, FieldError> {
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        if is_prime(q) {
            Ok(Self::prime(q))
        } else if q.is_power_of_two() && q >= 2 {
            Ok(Self::binary(q.trailing_zeros()))
        } else {
            Err(FieldError::UnsupportedOrder(q))
        }
    }

    fn prime(p: u32) -> Self {
        let order = p - 1;
        let factors: Vec<u32> = (2..=order).filter(|&k| order % k == 0 && is_prime(k)).collect();
        let pow = |mut b: u64, mut e: u32| {
            let mut r = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    r = r * b % p as u64;
                }
                b = b * b % p as u64;
                e >>= 1;
            }
            r
        };
        let g = (1..p)
            .find(|&g| p == 2 || factors.iter().all(|&f| pow(g as u64, order / f) != 1))
            .expect("every prime field has a primitive element");
        Self::with_generator(p, Kind::Prime, |a| (a as u64 * g as u64 % p as u64) as Elem)
    }

    fn binary(m: u32) -> Self {
        let modulus = PRIMITIVE_POLYS[m as usize];
        let q = 1u32 << m;
        Self::with_generator(q, Kind::Binary { modulus }, |a| {
            let b = a << 1;
            if b & q != 0 {
                b ^ modulus
            } else {
                b
            }
        })
    }

    fn with_generator(q: u32, kind: Kind, times_g: impl Fn(Elem) -> Elem) -> Self {
        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n.max(1));
        let mut log = vec![0u32; q as usize];
        let mut a: Elem = 1;
        for i in 0..n {
            exp.push(a);
            log[a as usize] = i as u32;
            a = times_g(a);
        }
        assert_eq!(a, 1, "generator of GF({q}) has the wrong order");
        exp.extend_from_within(..);
        Field { q, kind, exp, log }
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Characteristic of the field.
    pub fn characteristic(&self) -> u32 {
        match self.kind {
            Kind::Prime => self.q,
            Kind::Binary { .. } => 2,
        }
    }

    pub fn is_binary(&self) -> bool {
        self.characteristic() == 2
    }

    /// Reduction polynomial of GF(2^m), `None` for prime fields.
    pub fn modulus(&self) -> Option<u32> {
        match self.kind {
            Kind::Prime => None,
            Kind::Binary { modulus } => Some(modulus),
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.q
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.contains(a) && self.contains(b));
        match self.kind {
            Kind::Prime => {
                let s = a + b;
                if s >= self.q {
                    s - self.q
                } else {
                    s
                }
            }
            Kind::Binary { .. } => a ^ b,
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match self.kind {
            Kind::Prime if a != 0 => self.q - a,
            _ => a,
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "zero has no inverse");
        let n = self.q - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[(self.log[a as usize] as u64 * (e % n) % n) as usize]
    }

    /// `g^i` for the fixed primitive element `g`.
    pub fn alpha_pow(&self, i: i64) -> Elem {
        let n = (self.q - 1) as i64;
        self.exp[i.rem_euclid(n) as usize]
    }

    /// Discrete log base the primitive element; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Field elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_known_products() {
        let f = Field::new(8).unwrap();
        assert_eq!(f.modulus(), Some(0b1011));
        assert_eq!(f.mul(2, 4), 3);
        assert_eq!(f.inv(2), 5);
        assert_eq!(f.add(5, 3), 6);
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::new(31).unwrap();
        assert_eq!(f.mul(7, 9), 63 % 31);
        assert_eq!(f.sub(3, 10), 24);
        assert_eq!(f.mul(f.inv(17), 17), 1);
        assert_eq!(f.characteristic(), 31);
    }

    #[test]
    fn unsupported_orders() {
        assert_eq!(Field::new(6), Err(FieldError::UnsupportedOrder(6)));
        assert_eq!(Field::new(9), Err(FieldError::UnsupportedOrder(9)));
        assert!(Field::new(1).is_err());
        assert_eq!(Field::new(1 << 17), Err(FieldError::TooLarge(1 << 17)));
    }

    #[test]
    fn every_table_polynomial_is_primitive() {
        for m in 1..=16 {
            let f = Field::new(1 << m).unwrap();
            assert_eq!(f.log.iter().skip(1).filter(|&&l| l == 0).count(), 1, "m = {m}");
        }
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        let orders = [2, 3, 4, 5, 7, 8, 11, 13, 16, 17, 31, 32, 37, 41, 61, 64];
        for &q in &orders {
            let f = Field::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.pow(a, q as u64), a, "Frobenius in GF({q})");
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    }
                }
            }
        }
    }
}
