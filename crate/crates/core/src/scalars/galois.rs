//! Table-driven arithmetic for the small Galois fields GF(p^k), p^k <= 81.
//!
//! An element is stored as the index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` of its
//! coefficient vector over GF(p), where `c_0` is the constant term.

use std::fmt;

use super::FieldError;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 81;

/// A finite field GF(p^k) given by a monic irreducible modulus over GF(p).
pub struct GaloisField {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    order: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.p, self.k, self.modulus)
    }
}

impl GaloisField {
    /// Builds GF(p^k) with the given modulus (coefficients low degree first, monic).
    pub fn new(p: u32, k: u32, modulus: &[u32]) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::InvalidSpec(format!("{p} is not prime")));
        }
        if k == 0 || k > 6 {
            return Err(FieldError::InvalidSpec(format!(
                "extension degree {k} outside 1..=6"
            )));
        }
        let order = p.pow(k);
        if order > MAX_ORDER {
            return Err(FieldError::InvalidSpec(format!(
                "field order {order} exceeds {MAX_ORDER}"
            )));
        }
        if modulus.len() != k as usize + 1 {
            return Err(FieldError::InvalidSpec(format!(
                "modulus must have {} coefficients, got {}",
                k + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::InvalidSpec(format!(
                "modulus coefficients must lie in [0,{p})"
            )));
        }
        if modulus[k as usize] != 1 {
            return Err(FieldError::InvalidSpec("modulus must be monic".into()));
        }
        if !is_irreducible(p, modulus) {
            return Err(FieldError::InvalidSpec(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }

        let n = order as usize;
        let decode = |idx: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(k as usize);
            let mut r = idx as u32;
            for _ in 0..k {
                v.push(r % p);
                r /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u8 {
            v.iter().rev().fold(0u32, |acc, &c| acc * p + c) as u8
        };

        let digits: Vec<Vec<u32>> = (0..n).map(decode).collect();
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                let s: Vec<u32> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * n + b] = encode(&s);
                mul[a * n + b] = encode(&poly_mul_mod(p, &digits[a], &digits[b], modulus));
            }
        }
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..n)
                    .find(|&b| mul[a * n + b] == 1)
                    .expect("irreducible modulus gives a field") as u8;
            }
        }

        Ok(Self {
            p,
            k,
            modulus: modulus.to_vec(),
            order,
            add,
            mul,
            neg,
            inv,
        })
    }

    /// Lexicographically first monic irreducible polynomial of degree `k` over GF(p).
    pub fn default_modulus(p: u32, k: u32) -> Result<Vec<u32>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::InvalidSpec(format!("{p} is not prime")));
        }
        if k == 1 {
            return Ok(vec![0, 1]);
        }
        let count = p.checked_pow(k).unwrap_or(u32::MAX);
        for idx in 0..count {
            let mut m: Vec<u32> = (0..k).map(|i| (idx / p.pow(i)) % p).collect();
            m.push(1);
            if is_irreducible(p, &m) {
                return Ok(m);
            }
        }
        Err(FieldError::InvalidSpec(format!(
            "no irreducible polynomial of degree {k} over GF({p})"
        )))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub(crate) fn same_field(&self, other: &GaloisField) -> bool {
        std::ptr::eq(self, other) || (self.p == other.p && self.modulus == other.modulus)
    }

    #[inline]
    pub(crate) fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.order as usize + b as usize]
    }

    #[inline]
    pub(crate) fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.order as usize + b as usize]
    }

    #[inline]
    pub(crate) fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Inverse of a nonzero element; `None` for zero.
    #[inline]
    pub(crate) fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// Coefficient vector (constant term first) of the element with this index.
    pub fn coefficients(&self, index: u8) -> Vec<u32> {
        let mut r = index as u32;
        (0..self.k)
            .map(|_| {
                let c = r % self.p;
                r /= self.p;
                c
            })
            .collect()
    }

    /// Index of the element with the given coefficient vector.
    pub fn index_of(&self, coeffs: &[u32]) -> Result<u8, FieldError> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::Parse(format!(
                "{coeffs:?} is not a coefficient vector of length {} over GF({})",
                self.k, self.p
            )));
        }
        Ok(coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c) as u8)
    }

    /// Image of the integer `n` under the prime-subfield embedding.
    pub fn index_of_int(&self, n: i64) -> u8 {
        n.rem_euclid(self.p as i64) as u8
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn poly_mul_mod(p: u32, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(p, &prod, modulus);
    r.resize(k, 0);
    r
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - lead) * c % p) % p;
            }
        }
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(p: u32, m: &[u32]) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut f: Vec<u32> = (0..d as u32).map(|i| (idx / p.pow(i)) % p).collect();
            f.push(1);
            if poly_rem(p, m, &f).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}
