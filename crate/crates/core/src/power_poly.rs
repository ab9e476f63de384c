//! Factorization shape of `f(x^m)` and the 2-power families of irreducibles.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ffpoly::numtheory::{divisors, euler_phi, factorize, mult_order};
use crate::ffpoly::Poly;

/// One row of Butler's factorization: `count` irreducible factors of
/// `f(x^m)` of degree `degree`, each with roots of order `root_order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ButlerEntry {
    pub degree: u128,
    pub count: u128,
    pub root_order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ButlerProfile {
    pub m: u64,
    pub m1: u64,
    pub m2: u64,
    /// Order of the roots of `f`.
    pub t: u128,
    /// One entry per divisor `e` of `m1`, in increasing `e`.
    pub entries: Vec<ButlerEntry>,
}

impl ButlerProfile {
    /// `(degree, root_order) -> count`, merging equal rows.
    pub fn shape(&self) -> BTreeMap<(u128, u128), u128> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry((e.degree, e.root_order)).or_insert(0) += e.count;
        }
        out
    }
}

/// Predicted factorization of `f(x^m)` from the root order of `f`.
pub fn butler_profile(f: &Poly, m: u64) -> Result<ButlerProfile> {
    f.require_irreducible_nonx()?;
    let q = f.field().order() as u64;
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if m.gcd(&q) != 1 {
        return Err(Error::NotCoprime {
            what: "power map exponent",
            a: m as u128,
            b: q as u128,
        });
    }
    let t = f.root_order()?;
    let mut m2 = 1u64;
    for (r, e) in factorize(m as u128) {
        if t % r == 0 {
            m2 *= (r as u64).pow(e as u32);
        }
    }
    let m1 = m / m2;
    let d = f.deg() as u128;
    let overflow = || Error::bound("root order e·m2·t", "overflow", u128::MAX);
    let mut entries = Vec::new();
    for e in divisors(m1 as u128) {
        let order = e
            .checked_mul(m2 as u128)
            .and_then(|v| v.checked_mul(t))
            .ok_or_else(overflow)?;
        let degree = mult_order(order, q as u128)?;
        let total = d * m2 as u128 * euler_phi(e);
        if total % degree != 0 {
            return Err(Error::Invariant(format!(
                "factor count {total}/{degree} is not integral for {} and m = {m}",
                f.pretty()
            )));
        }
        if total > 0 {
            entries.push(ButlerEntry {
                degree,
                count: total / degree,
                root_order: order,
            });
        }
    }
    Ok(ButlerProfile { m, m1, m2, t, entries })
}

/// `(degree, root_order) -> count` obtained by factoring `f(x^m)` directly.
pub fn factored_shape(f: &Poly, m: u64) -> Result<BTreeMap<(u128, u128), u128>> {
    let mut out = BTreeMap::new();
    for (g, mult) in f.substitute_power(m as usize).factorize()? {
        let key = (g.deg() as u128, g.root_order()?);
        *out.entry(key).or_insert(0) += mult as u128;
    }
    Ok(out)
}

/// Whether the predicted and factored shapes coincide.
pub fn butler_agrees(f: &Poly, m: u64) -> Result<bool> {
    Ok(butler_profile(f, m)?.shape() == factored_shape(f, m)?)
}

/// Shape of `f(x²)` for an irreducible `f ≠ x` over a field of odd order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TwoPowerClass {
    /// `f(x²) = F1·F2` with `F1 < F2` irreducible of degree `deg f`.
    TwoPower { f1: Poly, f2: Poly },
    /// `f(x²)` is irreducible.
    SkewTwoPower { f: Poly },
}

impl TwoPowerClass {
    pub fn label(&self) -> &'static str {
        match self {
            TwoPowerClass::TwoPower { .. } => "2-power",
            TwoPowerClass::SkewTwoPower { .. } => "skew-2-power",
        }
    }

    pub fn is_skew(&self) -> bool {
        matches!(self, TwoPowerClass::SkewTwoPower { .. })
    }

    /// The irreducible factors of `f(x²)`, sorted.
    pub fn factors(&self) -> Vec<&Poly> {
        match self {
            TwoPowerClass::TwoPower { f1, f2 } => vec![f1, f2],
            TwoPowerClass::SkewTwoPower { f } => vec![f],
        }
    }
}

pub fn classify2(f: &Poly) -> Result<TwoPowerClass> {
    f.require_irreducible_nonx()?;
    let d = f.deg();
    let factors = f.substitute_power(2).factorize()?;
    match factors.as_slice() {
        [(g, 1)] if g.deg() == 2 * d => Ok(TwoPowerClass::SkewTwoPower { f: g.clone() }),
        [(g1, 1), (g2, 1)] if g1.deg() == d && g2.deg() == d => Ok(TwoPowerClass::TwoPower {
            f1: g1.clone(),
            f2: g2.clone(),
        }),
        _ => Err(Error::Invariant(format!(
            "f(x^2) for f = {} factors as {:?}, neither irreducible nor two factors of degree {d}",
            f.pretty(),
            factors.iter().map(|(g, e)| (g.pretty(), *e)).collect::<Vec<_>>()
        ))),
    }
}

/// Skewness as predicted by the Butler profile for `m = 2`.
pub fn is_skew_by_butler(f: &Poly) -> Result<bool> {
    let profile = butler_profile(f, 2)?;
    Ok(profile.entries.len() == 1
        && profile.entries[0].count == 1
        && profile.entries[0].degree == 2 * f.deg() as u128)
}

pub fn is_self_reciprocal(f: &Poly) -> Result<bool> {
    Ok(&f.reciprocal()? == f)
}

/// `f = f̃` over a field of square order.
pub fn is_self_conjugate(f: &Poly) -> Result<bool> {
    Ok(&f.conj_reciprocal()? == f)
}

/// Trichotomy for the `2*` and `2̃` families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StarClass {
    Power,
    SkewPower,
    Neither,
}

impl StarClass {
    pub fn star_label(self) -> &'static str {
        match self {
            StarClass::Power => "2*-power",
            StarClass::SkewPower => "skew-2*-power",
            StarClass::Neither => "neither",
        }
    }

    pub fn tilde_label(self) -> &'static str {
        match self {
            StarClass::Power => "2~-power",
            StarClass::SkewPower => "skew-2~-power",
            StarClass::Neither => "neither",
        }
    }
}

fn classify_with(f: &Poly, fixed: impl Fn(&Poly) -> Result<bool>) -> Result<StarClass> {
    Ok(match classify2(f)? {
        TwoPowerClass::SkewTwoPower { .. } => StarClass::SkewPower,
        TwoPowerClass::TwoPower { f1, f2 } => {
            if fixed(&f1)? || fixed(&f2)? {
                StarClass::Power
            } else {
                StarClass::Neither
            }
        }
    })
}

/// Classification of a self-reciprocal irreducible.
pub fn classify2_star(f: &Poly) -> Result<StarClass> {
    f.require_irreducible_nonx()?;
    if !is_self_reciprocal(f)? {
        return Err(Error::InvalidInput(format!("{} is not self-reciprocal", f.pretty())));
    }
    classify_with(f, is_self_reciprocal)
}

/// Classification of a self-conjugate irreducible over `F_{q²}`.
pub fn classify2_tilde(f: &Poly) -> Result<StarClass> {
    f.require_irreducible_nonx()?;
    if !is_self_conjugate(f)? {
        return Err(Error::InvalidInput(format!("{} is not self-conjugate", f.pretty())));
    }
    classify_with(f, is_self_conjugate)
}
