//! Finite fields `F_{p^k}` for odd `p`.
//!
//! Elements are `u32` indices in `0..q`. The index of an element is the
//! integer whose base-`p` digits (least significant first) are the
//! coefficients of its representative in `F_p[y]/(modulus)`, so `0` is zero,
//! `1` is one and the prime subfield occupies `0..p`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_prime::nt_funcs::{factorize64, is_prime64};

use crate::error::{Error, Result};

/// Largest field order accepted at API boundaries.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 256;

/// Handle to a finite field of odd order. Cheap to clone; two handles
/// compare equal iff they describe the same `(p, k)`.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    digit_pow: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static FIELDS: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    FIELDS.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// Builds `F_{p^k}` subject to the default order bound.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        Self::with_bound(p, k, MAX_FIELD_ORDER)
    }

    pub fn with_bound(p: u64, k: u32, bound: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if p < 2 || !is_prime64(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidInput("field exponent must be positive".into()));
        }
        let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if q > bound as u128 {
            return Err(Error::bound("field order", q, bound));
        }
        let key = (p as u32, k);
        if let Some(f) = cache().lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let field = Self::build(p as u32, k)?;
        cache().lock().unwrap().entry(key).or_insert(field.clone());
        Ok(field)
    }

    /// Field of order `q` (which must be an odd prime power).
    pub fn of_order(q: u64) -> Result<Field> {
        if q < 3 {
            return Err(Error::InvalidInput(format!("{q} is not an odd prime power")));
        }
        let fac = factorize64(q);
        if fac.len() != 1 {
            return Err(Error::InvalidInput(format!("{q} is not a prime power")));
        }
        let (&p, &k) = fac.iter().next().unwrap();
        Self::new(p, k as u32)
    }

    /// Parses `"p^k"` or a plain order `"q"`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid field '{s}'"));
        match s.split_once('^') {
            Some((p, k)) => {
                let p: u64 = p.trim().parse().map_err(|_| bad())?;
                let k: u32 = k.trim().parse().map_err(|_| bad())?;
                Self::new(p, k)
            }
            None => Self::of_order(s.parse().map_err(|_| bad())?),
        }
    }

    fn build(p: u32, k: u32) -> Result<Field> {
        let q = p.pow(k);
        let digit_pow: Vec<u32> = (0..k).map(|i| p.pow(i)).collect();
        let modulus = if k > 1 {
            Some(lex_smallest_irreducible(p, k)?)
        } else {
            None
        };
        let slow = SlowArith {
            p,
            k,
            modulus: modulus.as_deref(),
        };
        let order_factors: Vec<u64> = factorize64((q - 1) as u64).into_keys().collect();
        let generator = (1..q)
            .find(|&g| {
                order_factors
                    .iter()
                    .all(|&r| slow.pow(g, (q as u64 - 1) / r) != 1)
            })
            .ok_or_else(|| Error::Invariant(format!("no primitive element in F_{q}")))?;
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..q - 1 {
            exp.push(cur);
            log[cur as usize] = i;
            cur = slow.mul(cur, generator);
        }
        if cur != 1 {
            return Err(Error::Invariant("generator order mismatch".into()));
        }
        let mut inner = Inner {
            p,
            k,
            q,
            modulus,
            digit_pow,
            exp,
            log,
            add_table: None,
        };
        if k > 1 && q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = inner.digit_add(a, b);
                }
            }
            inner.add_table = Some(table);
        }
        Ok(Field(Arc::new(inner)))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Defining polynomial over `F_p`, constant term first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.0.modulus.as_deref()
    }

    /// `sqrt(q)` when the order is a square, i.e. the `q` of `F_{q^2}`.
    pub fn base_order(&self) -> Option<u32> {
        (self.0.k % 2 == 0).then(|| self.0.p.pow(self.0.k / 2))
    }

    pub fn label(&self) -> String {
        if self.0.k == 1 {
            self.0.p.to_string()
        } else {
            format!("{}^{}", self.0.p, self.0.k)
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.k == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if let Some(t) = &f.add_table {
            t[(a * f.q + b) as usize]
        } else {
            f.digit_add(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let f = &*self.0;
        if f.k == 1 {
            if a == 0 {
                0
            } else {
                f.p - a
            }
        } else {
            let mut r = 0;
            let mut a = a;
            for i in 0..f.k as usize {
                let d = a % f.p;
                a /= f.p;
                if d != 0 {
                    r += (f.p - d) * f.digit_pow[i];
                }
            }
            r
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        let n = f.q - 1;
        let s = f.log[a as usize] + f.log[b as usize];
        f.exp[(if s >= n { s - n } else { s }) as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.0.q);
        let f = &*self.0;
        let l = f.log[a as usize];
        f.exp[if l == 0 { 0 } else { (f.q - 1 - l) as usize }]
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, e: u128) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.0;
        let n = (f.q - 1) as u128;
        let l = (f.log[a as usize] as u128 * (e % n)) % n;
        f.exp[l as usize]
    }

    /// Discrete logarithm base the field's fixed primitive element.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    /// The fixed primitive element (generator of the multiplicative group).
    pub fn primitive_element(&self) -> u32 {
        self.0.exp.get(1).copied().unwrap_or(1)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> u64 {
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a as usize] as u64;
        n / num_integer::gcd(n, l)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.0.p as i64) as u32
    }

    /// The involution `a ↦ a^{sqrt q}` of `F_{q^2}`.
    pub fn conj(&self, a: u32) -> Result<u32> {
        let b = self
            .base_order()
            .ok_or(Error::NotSquareOrder(self.0.q as u64))?;
        Ok(self.pow(a, b as u128))
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.0.log[a as usize] % 2 == 0
    }

    /// Smallest-index nonsquare.
    pub fn first_nonsquare(&self) -> u32 {
        (1..self.0.q).find(|&a| !self.is_square(a)).unwrap()
    }

    pub fn is_element(&self, a: u32) -> bool {
        a < self.0.q
    }
}

impl Inner {
    fn digit_add(&self, mut a: u32, mut b: u32) -> u32 {
        let mut r = 0;
        for i in 0..self.k as usize {
            let mut s = a % self.p + b % self.p;
            if s >= self.p {
                s -= self.p;
            }
            r += s * self.digit_pow[i];
            a /= self.p;
            b /= self.p;
        }
        r
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.k.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

/// Arithmetic on digit-encoded elements straight from the modulus, used only
/// while the log tables are being built.
struct SlowArith<'a> {
    p: u32,
    k: u32,
    modulus: Option<&'a [u32]>,
}

impl SlowArith<'_> {
    fn digits(&self, mut a: u32) -> Vec<u64> {
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d as u64
            })
            .collect()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let Some(m) = self.modulus else {
            return ((a as u64 * b as u64) % p) as u32;
        };
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c != 0 {
                for (i, &mi) in m.iter().enumerate().take(k) {
                    let idx = top - k + i;
                    prod[idx] = (prod[idx] + (p - c) * mi as u64) % p;
                }
                prod[top] = 0;
            }
        }
        prod[..k]
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + d) as u32
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Lex-smallest (constant term compared first) monic irreducible of degree
/// `k` over `F_p`.
fn lex_smallest_irreducible(p: u32, k: u32) -> Result<Vec<u32>> {
    use super::poly::Poly;
    let prime = Field::new(p as u64, 1)?;
    let total = (p as u64).pow(k);
    for idx in 0..total {
        // c_0 is the most significant digit of `idx`
        let mut coeffs = vec![0u32; k as usize + 1];
        let mut rest = idx;
        for i in (0..k as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[k as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        let f = Poly::new(prime.clone(), coeffs.clone())?;
        if f.is_irreducible()? {
            return Ok(coeffs);
        }
    }
    Err(Error::Invariant(format!(
        "no irreducible polynomial of degree {k} over F_{p}"
    )))
}
