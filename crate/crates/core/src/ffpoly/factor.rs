//! Irreducibility testing, factorization and root data for polynomials over
//! finite fields of odd characteristic.
//!
//! Factorization runs the usual three stages: square-free decomposition,
//! distinct-degree splitting, then Cantor–Zassenhaus equal-degree splitting.
//! The random choices in the last stage come from a fixed-seed generator, and
//! the output is sorted, so results are fully deterministic.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::numtheory::factorize as factorize_int;
use super::poly::{Poly, MAX_DEGREE};
use crate::error::{Error, Result};

/// Most candidates `monic_irreducibles` will scan.
pub const MAX_IRREDUCIBLE_SCAN: u128 = 20_000_000;

impl Poly {
    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> Result<bool> {
        self.require_monic()?;
        let n = self.deg();
        if n == 1 {
            return Ok(true);
        }
        let q = BigUint::from(self.field().order());
        let x = Poly::x(self.field());
        // frob[j] = x^{q^j} mod f
        let mut frob = vec![x.rem(self)];
        for _ in 0..n {
            let next = frob.last().unwrap().pow_mod(&q, self);
            frob.push(next);
        }
        if frob[n] != x.rem(self) {
            return Ok(false);
        }
        for (r, _) in factorize_int(n as u128) {
            let j = n / r as usize;
            if !frob[j].sub(&x).gcd(self).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by degree then constant-first lex order.
    pub fn factorize(&self) -> Result<Vec<(Poly, u32)>> {
        self.require_monic()?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5155_4631);
        let mut out = Vec::new();
        for (sqf, mult) in squarefree_decomposition(self) {
            for (block, d) in distinct_degree(&sqf) {
                for g in equal_degree(&block, d, &mut rng) {
                    out.push((g, mult));
                }
            }
        }
        out.sort();
        // square-free parts are coprime, but merge defensively against duplicates
        out.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        Ok(out)
    }

    /// Multiplicative order of a root of this irreducible polynomial.
    pub fn root_order(&self) -> Result<u128> {
        self.require_irreducible_nonx()?;
        let q = self.field().order() as u128;
        let group_order = q
            .checked_pow(self.deg() as u32)
            .map(|v| v - 1)
            .ok_or_else(|| Error::bound("q^deg for root order", format!("{q}^{}", self.deg()), "2^128"))?;
        let x = Poly::x(self.field());
        let mut t = group_order;
        for (r, e) in factorize_int(group_order) {
            for _ in 0..e {
                if x.pow_mod_u128(t / r, self).is_one() {
                    t /= r;
                } else {
                    break;
                }
            }
        }
        Ok(t)
    }

    /// Whether the roots of this irreducible satisfy `β^m = 1`.
    pub fn root_order_divides(&self, m: u128) -> bool {
        Poly::x(self.field()).pow_mod_u128(m, self).is_one()
    }

    pub fn require_irreducible_nonx(&self) -> Result<()> {
        self.require_monic()?;
        if self.is_x() {
            return Err(Error::PolynomialIsX);
        }
        if !self.is_irreducible()? {
            return Err(Error::Reducible);
        }
        Ok(())
    }

    /// Minimal polynomial over the base field of `β^m`, where `β` is a root
    /// of this irreducible polynomial.
    pub fn min_poly_of_root_power(&self, m: u128) -> Result<Poly> {
        self.require_monic()?;
        let field = self.field();
        let q = BigUint::from(field.order());
        let y0 = Poly::x(field).pow_mod_u128(m, self);
        let mut conjugates = vec![y0.clone()];
        loop {
            let next = conjugates.last().unwrap().pow_mod(&q, self);
            if next == y0 {
                break;
            }
            if conjugates.len() > self.deg() {
                return Err(Error::Invariant(format!(
                    "Frobenius orbit longer than degree for {self:?}"
                )));
            }
            conjugates.push(next);
        }
        // ∏ (Y - y_i) with coefficients in F_q[x]/(self)
        let mut prod: Vec<Poly> = vec![Poly::one(field)];
        for y in &conjugates {
            let mut next = vec![Poly::zero(field); prod.len() + 1];
            for (i, c) in prod.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul_mod(y, self));
            }
            prod = next;
        }
        let coeffs = prod
            .iter()
            .map(|c| match c.degree() {
                None => Ok(0),
                Some(0) => Ok(c.constant_term()),
                Some(_) => Err(Error::Invariant(
                    "minimal polynomial coefficient outside the base field".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_raw(field.clone(), coeffs))
    }
}


/// Square-free decomposition `f = ∏ g_i^{i}` for monic `f`.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field().clone();
    let p = field.characteristic();
    let mut out = Vec::new();
    let mut stack = vec![(f.clone(), 1u32)];
    while let Some((f, scale)) = stack.pop() {
        if f.deg() == 0 {
            continue;
        }
        let mut c = f.gcd(&f.derivative());
        let mut w = f.div_rem(&c).0;
        let mut i = 1u32;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_rem(&y).0;
            if !fac.is_one() {
                out.push((fac.monic(), i * scale));
            }
            w = y;
            c = c.div_rem(&w).0;
            i += 1;
        }
        if !c.is_one() && c.deg() > 0 {
            stack.push((pth_root(&c), scale * p));
        }
    }
    out
}

/// `g` with `g(x)^p = f(x)` for `f` whose exponents are multiples of `p`.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let inv_frob = (field.order() / field.characteristic()) as u128;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| field.pow(c, inv_frob))
        .collect();
    Poly::from_raw(field.clone(), coeffs)
}

/// Splits a monic square-free polynomial into products of same-degree factors.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = BigUint::from(field.order());
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(&q, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct degree-`d` irreducibles.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    if f.deg() == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = BigUint::from(field.order());
    let exponent = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let coeffs: Vec<u32> = (0..f.deg()).map(|_| rng.gen_range(0..field.order())).collect();
        let a = Poly::from_raw(field.clone(), coeffs);
        if a.deg() == 0 {
            continue;
        }
        let g = a.gcd(f);
        if !g.is_one() && g.deg() < f.deg() {
            let other = f.div_rem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&other, d, rng));
            return out;
        }
        let b = a.pow_mod(&exponent, f).sub(&Poly::one(field));
        let h = b.gcd(f);
        if h.deg() > 0 && h.deg() < f.deg() {
            let other = f.div_rem(&h).0;
            let mut out = equal_degree(&h, d, rng);
            out.extend(equal_degree(&other, d, rng));
            return out;
        }
    }
}

/// All monic irreducibles of degree `d`, sorted.
pub fn monic_irreducibles(field: &Field, d: usize) -> Result<Vec<Poly>> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    if d > MAX_DEGREE {
        return Err(Error::bound("polynomial degree", d, MAX_DEGREE));
    }
    let q = field.order() as u128;
    let total = q
        .checked_pow(d as u32)
        .filter(|&t| t <= MAX_IRREDUCIBLE_SCAN)
        .ok_or_else(|| Error::bound("monic polynomials to scan", format!("{q}^{d}"), MAX_IRREDUCIBLE_SCAN))?;
    if d == 1 {
        let mut out: Vec<Poly> = (0..field.order()).map(|a| Poly::linear(field, a)).collect();
        out.sort();
        return Ok(out);
    }
    let mut out = Vec::new();
    let mut coeffs = vec![0u32; d + 1];
    coeffs[d] = 1;
    for idx in 0..total {
        let mut rest = idx;
        for c in coeffs.iter_mut().take(d) {
            *c = (rest % q) as u32;
            rest /= q;
        }
        if coeffs[0] == 0 {
            continue;
        }
        let f = Poly::from_raw(field.clone(), coeffs.clone());
        if f.is_irreducible()? {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}
