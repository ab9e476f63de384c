//! Element counts by order, the `|s(2)|` cardinality and real class counts
//! of `GL_n(q)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::brute_oracle::{self, GroupKind, GroupSpec};
use crate::error::{Error, Result};
use crate::ffpoly::numtheory::{divisors, euler_phi, mobius, mult_order};
use crate::ffpoly::Field;
use crate::gl_classes::{
    class_size, element_order_of_class, enumerate_classes, gl_order, gl_order_big, is_real_class, Count,
    GLClassData,
};
use crate::square_fibers::{count_square_roots, AuditRecord, AuditReport, AuditScope};

/// Power series in `z` with exact rational coefficients, truncated at `z^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCoeffs {
    coeffs: Vec<BigRational>,
}

impl SeriesCoeffs {
    pub fn one(top: usize) -> SeriesCoeffs {
        let mut coeffs = vec![BigRational::zero(); top + 1];
        coeffs[0] = BigRational::one();
        SeriesCoeffs { coeffs }
    }

    /// From coefficients, padded or truncated to degree `top`.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, top: usize) -> SeriesCoeffs {
        coeffs.resize(top + 1, BigRational::zero());
        SeriesCoeffs { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn mul(&self, other: &SeriesCoeffs) -> SeriesCoeffs {
        let top = self.truncation().min(other.truncation());
        let mut out = vec![BigRational::zero(); top + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(top + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(top + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        SeriesCoeffs { coeffs: out }
    }

    pub fn pow(&self, mut e: u128) -> SeriesCoeffs {
        let mut acc = SeriesCoeffs::one(self.truncation());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// One enumerated class with everything the counts below need.
#[derive(Clone, Debug)]
pub struct ClassRow {
    pub data: GLClassData,
    pub size: Count,
    pub square_roots: Count,
    pub order: u128,
    pub real: bool,
}

/// All classes of `GL_n(q)` with sizes, fiber sizes, orders and reality.
#[derive(Clone, Debug)]
pub struct ClassTable {
    pub n: u32,
    pub field: Field,
    pub rows: Vec<ClassRow>,
}

impl ClassTable {
    pub fn build(n: u32, field: &Field) -> Result<ClassTable> {
        let rows = enumerate_classes(n, field)?
            .into_par_iter()
            .map(|data| {
                Ok(ClassRow {
                    size: class_size(&data)?,
                    square_roots: count_square_roots(&data)?,
                    order: element_order_of_class(&data)?,
                    real: is_real_class(&data),
                    data,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassTable {
            n,
            field: field.clone(),
            rows,
        })
    }

    pub fn group_order(&self) -> Count {
        gl_order(self.n, self.field.order() as u64)
    }

    /// `#{g : g^M = 1}`.
    pub fn order_dividing(&self, m: u128) -> Count {
        self.rows.iter().filter(|r| m % r.order == 0).map(|r| &r.size).sum()
    }

    /// `#{g : o(g) = M}` by Möbius inversion over divisors of `M`.
    pub fn order_exactly(&self, m: u128) -> Result<Count> {
        let mut acc = BigInt::zero();
        for d in divisors(m) {
            let mu = mobius(m / d);
            if mu != 0 {
                acc += BigInt::from(mu) * BigInt::from(self.order_dividing(d));
            }
        }
        acc.to_biguint()
            .ok_or_else(|| Error::Invariant(format!("negative element count for order {m}")))
    }

    pub fn real_count(&self) -> Count {
        BigUint::from(self.rows.iter().filter(|r| r.real).count())
    }

    /// `Σ_c |c|·R(c)`, which must equal `|GL_n(q)|`.
    pub fn square_mass(&self) -> Count {
        self.rows.iter().map(|r| &r.size * &r.square_roots).sum()
    }

    /// `|s(2)| = Σ_c |c|·R(c)²`.
    pub fn s2(&self) -> Result<Count> {
        let mass = self.square_mass();
        if mass != self.group_order() {
            return Err(Error::Invariant(format!(
                "Σ |c|·R(c) = {mass} differs from |GL_{}({})| = {}",
                self.n,
                self.field.order(),
                self.group_order()
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|r| &r.size * &r.square_roots * &r.square_roots)
            .sum())
    }
}

pub fn count_order_dividing(n: u32, field: &Field, m: u128) -> Result<Count> {
    Ok(ClassTable::build(n, field)?.order_dividing(m))
}

pub fn count_order_exactly(n: u32, field: &Field, m: u128) -> Result<Count> {
    ClassTable::build(n, field)?.order_exactly(m)
}

/// `#{g ∈ GL_n(q) : g^M = 1}` from the product over `d | M` of
/// `(Σ_m z^{m·e(d)} / |GL_m(q^{e(d)})|)^{φ(d)/e(d)}`.
pub fn count_unity_roots_gf(n: u32, q: u64, m: u128) -> Result<Count> {
    if m == 0 {
        return Err(Error::InvalidInput("M must be positive".into()));
    }
    if m.gcd(&(q as u128)) != 1 {
        return Err(Error::NotCoprime {
            what: "generating function",
            a: m,
            b: q as u128,
        });
    }
    let top = n as usize;
    let mut product = SeriesCoeffs::one(top);
    for d in divisors(m) {
        let e = mult_order(d, q as u128)?;
        let phi = euler_phi(d);
        if phi % e != 0 {
            return Err(Error::Invariant(format!("e({d}) = {e} does not divide φ({d}) = {phi}")));
        }
        let big_q = BigUint::from(q).pow(e as u32);
        let mut coeffs = vec![BigRational::zero(); top + 1];
        let mut k = 0usize;
        while k * (e as usize) <= top {
            let denom = BigInt::from(gl_order_big(k as u32, &big_q));
            coeffs[k * e as usize] = BigRational::new(BigInt::one(), denom);
            k += 1;
        }
        product = product.mul(&SeriesCoeffs::from_coeffs(coeffs, top).pow(phi / e));
    }
    let a_n = product.coeff(top) * BigRational::from_integer(BigInt::from(gl_order(n, q)));
    if !a_n.is_integer() {
        return Err(Error::Invariant(format!("a_{n} = {a_n} is not an integer")));
    }
    a_n.to_integer()
        .to_biguint()
        .ok_or_else(|| Error::Invariant("negative coefficient".into()))
}

pub fn real_class_count_direct(n: u32, field: &Field) -> Result<Count> {
    Ok(BigUint::from(
        enumerate_classes(n, field)?.iter().filter(|c| is_real_class(c)).count(),
    ))
}

pub fn s2_cardinality(n: u32, field: &Field) -> Result<Count> {
    ClassTable::build(n, field)?.s2()
}

fn ms_from_table(table: &ClassTable) -> Result<Count> {
    let s2 = table.s2()?;
    let order = table.group_order();
    let (quot, rem) = s2.div_rem(&order);
    if !rem.is_zero() {
        return Err(Error::Invariant(format!("|s(2)| = {s2} is not divisible by |G| = {order}")));
    }
    Ok(quot)
}

/// `|s(2)| / |GL_n(q)|`.
pub fn real_class_count_ms(n: u32, field: &Field) -> Result<Count> {
    ms_from_table(&ClassTable::build(n, field)?)
}

/// Reading of `c_2` in the four-set decomposition of `s(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `c_2` and `c_4` count elements of order exactly 2 and 4.
    ExactOrder,
    /// `c_2 = #{g : g² = 1}`, `c_4` counts elements of order exactly 4.
    OrderDividing,
}

impl Convention {
    pub fn label(self) -> &'static str {
        match self {
            Convention::ExactOrder => "exact-order",
            Convention::OrderDividing => "order-dividing",
        }
    }
}

fn theorem_from_table(table: &ClassTable, convention: Convention) -> Result<BigRational> {
    let c2 = match convention {
        Convention::ExactOrder => table.order_exactly(2)?,
        Convention::OrderDividing => table.order_dividing(2),
    };
    let c4 = table.order_exactly(4)?;
    let mut sum = BigUint::zero();
    for r in &table.rows {
        if !r.square_roots.is_zero() && !r.data.is_identity() {
            sum += &r.size * &r.square_roots * (&r.square_roots - 1u32);
        }
    }
    let c2_term = if c2.is_zero() { BigUint::zero() } else { &c2 * (&c2 - 1u32) };
    let numer = BigInt::from(c4 + c2_term + sum);
    Ok(BigRational::one() + BigRational::new(numer, BigInt::from(table.group_order())))
}

/// `1 + (c_4 + c_2(c_2 − 1) + Σ_{α square, α ≠ 1} R(α)(R(α) − 1)) / |GL_n(q)|`.
pub fn real_class_count_theorem(n: u32, field: &Field, convention: Convention) -> Result<BigRational> {
    theorem_from_table(&ClassTable::build(n, field)?, convention)
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub const CMP_DIRECT_VS_MS: &str = "direct=ms";
pub const CMP_DIRECT_VS_ORACLE: &str = "direct=oracle";
pub const CMP_S2_VS_ORACLE: &str = "s2=oracle_s2";
pub const CMP_GF_M2: &str = "gf(M=2)=order_dividing(2)";
pub const CMP_GF_M4: &str = "gf(M=4)=order_dividing(4)";
pub const CMP_THEOREM_EXACT: &str = "theorem[exact-order]=direct";
pub const CMP_THEOREM_DIVIDING: &str = "theorem[order-dividing]=direct";

/// Every real-class route for `GL_n(q)` in one record.
pub fn audit_real_counts(n: u32, field: &Field, oracle: bool) -> Result<AuditReport> {
    let table = ClassTable::build(n, field)?;
    let q = field.order() as u64;
    let direct = table.real_count();
    let s2 = table.s2()?;
    let ms = ms_from_table(&table)?;
    let mut values = BTreeMap::new();
    let mut agreement = BTreeMap::new();
    values.insert("group_order".to_string(), table.group_order().to_string());
    values.insert("classes".to_string(), table.rows.len().to_string());
    values.insert("direct".to_string(), direct.to_string());
    values.insert("s2".to_string(), s2.to_string());
    values.insert("ms".to_string(), ms.to_string());
    agreement.insert(CMP_DIRECT_VS_MS.to_string(), direct == ms);

    let div2 = table.order_dividing(2);
    let div4 = table.order_dividing(4);
    values.insert("order_dividing_2".to_string(), div2.to_string());
    values.insert("order_dividing_4".to_string(), div4.to_string());
    values.insert("c2_exact".to_string(), table.order_exactly(2)?.to_string());
    values.insert("c4_exact".to_string(), table.order_exactly(4)?.to_string());
    let gf2 = count_unity_roots_gf(n, q, 2)?;
    let gf4 = count_unity_roots_gf(n, q, 4)?;
    values.insert("gf_M2".to_string(), gf2.to_string());
    values.insert("gf_M4".to_string(), gf4.to_string());
    agreement.insert(CMP_GF_M2.to_string(), gf2 == div2);
    agreement.insert(CMP_GF_M4.to_string(), gf4 == div4);

    let direct_q = BigRational::from_integer(BigInt::from(direct.clone()));
    for (conv, key) in [
        (Convention::ExactOrder, CMP_THEOREM_EXACT),
        (Convention::OrderDividing, CMP_THEOREM_DIVIDING),
    ] {
        let v = theorem_from_table(&table, conv)?;
        values.insert(format!("theorem_{}", conv.label()), render_rational(&v));
        agreement.insert(key.to_string(), v == direct_q);
    }

    if oracle {
        let spec = GroupSpec::new(GroupKind::GL, n, q)?;
        let (elements, fibers, classes) = brute_oracle::group_summary(&spec)?;
        let real = BigUint::from(brute_oracle::real_classes_oracle(&elements, &classes));
        let os2 = brute_oracle::s2_oracle(&elements, &fibers);
        values.insert("oracle_real".to_string(), real.to_string());
        values.insert("oracle_s2".to_string(), os2.to_string());
        agreement.insert(CMP_DIRECT_VS_ORACLE.to_string(), direct == real);
        agreement.insert(CMP_S2_VS_ORACLE.to_string(), s2 == os2);
    }
    let record = AuditRecord {
        class: crate::gl_classes::ClassDataJson {
            q: Some(q.to_string()),
            n: Some(n),
            entries: Vec::new(),
        },
        values,
        agreement,
    };
    Ok(AuditReport::new(
        AuditScope {
            group: "GL".into(),
            n,
            q: q.to_string(),
        },
        vec![record],
    ))
}
