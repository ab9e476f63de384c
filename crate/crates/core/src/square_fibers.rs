//! The square map on conjugacy classes: images, square-root classes, exact
//! fiber sizes, existence predicates for GL/U/Sp and audits against the
//! brute-force oracle.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::brute_oracle::{self, GroupKind, GroupSpec};
use crate::error::{Error, Result};
use crate::ffpoly::{Field, Poly};
use crate::gl_classes::{
    centralizer_order, class_size, enumerate_classes, gl_order_big, representative_matrix, ClassDataJson,
    Count, GLClassData,
};
use crate::partitions::Partition;
use crate::power_poly::{classify2, classify2_star, classify2_tilde, StarClass, TwoPowerClass};

/// Class of `g²` for `g` in the given class.
pub fn square_class(data: &GLClassData) -> Result<GLClassData> {
    let mut out = Vec::with_capacity(data.entries().len());
    for e in data.entries() {
        let d = e.poly.deg();
        let image = e.poly.min_poly_of_root_power(2)?;
        let shape = classify2(&image)?;
        if image.deg() == d {
            if shape.is_skew() || !shape.factors().contains(&&e.poly) {
                return Err(Error::Invariant(format!(
                    "{} squares onto {} of equal degree but is not one of its square-root factors",
                    e.poly.pretty(),
                    image.pretty()
                )));
            }
            out.push((image, e.partition.clone()));
        } else if 2 * image.deg() == d {
            if shape != (TwoPowerClass::SkewTwoPower { f: e.poly.clone() }) {
                return Err(Error::Invariant(format!(
                    "{} squares onto {} of half degree but {} is not skew",
                    e.poly.pretty(),
                    image.pretty(),
                    image.pretty()
                )));
            }
            out.push((image, e.partition.double_multiplicities()));
        } else {
            return Err(Error::Invariant(format!(
                "squared root of {} has minimal polynomial {} of unexpected degree",
                e.poly.pretty(),
                image.pretty()
            )));
        }
    }
    Ok(GLClassData::from_trusted(data.field(), out))
}

pub fn has_square_root_gl(data: &GLClassData) -> Result<bool> {
    for e in data.entries() {
        let ok = match classify2(&e.poly)? {
            TwoPowerClass::TwoPower { .. } => true,
            TwoPowerClass::SkewTwoPower { .. } => e.partition.all_multiplicities_even(),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every split of the multiplicities of `lambda` into two partitions, in lex
/// order of the first partition's multiplicity vector.
fn multiplicity_splits(lambda: &Partition) -> Vec<(Partition, Partition)> {
    let pairs = lambda.pairs();
    let mut out = Vec::new();
    let mut first = vec![0u32; pairs.len()];
    loop {
        let left = pairs.iter().zip(&first).map(|(&(a, _), &k)| (a, k));
        let right = pairs.iter().zip(&first).map(|(&(a, m), &k)| (a, m - k));
        out.push((
            Partition::from_pairs(left).expect("positive parts"),
            Partition::from_pairs(right).expect("positive parts"),
        ));
        // odometer, last position fastest
        let mut i = pairs.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if first[i] < pairs[i].1 {
                first[i] += 1;
                for later in &mut first[i + 1..] {
                    *later = 0;
                }
                break;
            }
        }
    }
}

/// Classes `g` with `g²` in the given class, in a deterministic order.
pub fn square_root_classes(data: &GLClassData) -> Result<Vec<GLClassData>> {
    let mut local: Vec<Vec<Vec<(Poly, Partition)>>> = Vec::new();
    for e in data.entries() {
        let choices = match classify2(&e.poly)? {
            TwoPowerClass::TwoPower { f1, f2 } => multiplicity_splits(&e.partition)
                .into_iter()
                .map(|(l1, l2)| {
                    let mut c = Vec::new();
                    if !l1.is_empty() {
                        c.push((f1.clone(), l1));
                    }
                    if !l2.is_empty() {
                        c.push((f2.clone(), l2));
                    }
                    c
                })
                .collect(),
            TwoPowerClass::SkewTwoPower { f } => match e.partition.halve_multiplicities() {
                Ok(half) => vec![vec![(f, half)]],
                Err(_) => return Ok(Vec::new()),
            },
        };
        local.push(choices);
    }
    let mut roots: Vec<Vec<(Poly, Partition)>> = vec![Vec::new()];
    for choices in &local {
        let mut next = Vec::with_capacity(roots.len() * choices.len());
        for prefix in &roots {
            for c in choices {
                let mut v = prefix.clone();
                v.extend(c.iter().cloned());
                next.push(v);
            }
        }
        roots = next;
    }
    let field = data.field();
    let roots: Vec<GLClassData> = roots
        .into_iter()
        .map(|entries| GLClassData::from_trusted(field, entries))
        .collect();
    for r in &roots {
        if &square_class(r)? != data {
            return Err(Error::Invariant(format!("candidate root {r} does not square to {data}")));
        }
    }
    Ok(roots)
}

/// `|{g : g² = α}|` for `α` in the class: the sum of centralizer indices
/// over the square-root classes.
pub fn count_square_roots(data: &GLClassData) -> Result<Count> {
    let z_alpha = centralizer_order(data);
    let mut total = BigUint::zero();
    for root in square_root_classes(data)? {
        let z_g = centralizer_order(&root);
        let (index, rem) = z_alpha.div_rem(&z_g);
        if !rem.is_zero() {
            return Err(Error::Invariant(format!(
                "|Z({root})| = {z_g} does not divide |Z({data})| = {z_alpha}"
            )));
        }
        total += index;
    }
    Ok(total)
}

/// Outcome of evaluating the printed closed form for the number of square
/// roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PaperFormula {
    Value(Count),
    /// The exponent `Σ 3u·m_u·m_v/4 + Σ 3(u−1)m_u²/4` is not an integer.
    NonIntegralExponent { poly: String, quarters: u64 },
    /// `|GL_{m/2}(·)|` with `m` odd.
    UndefinedHalfGL { poly: String, part: u32, multiplicity: u32 },
    /// The centralizer-style ratio is not an integer.
    NonIntegralRatio { poly: String },
}

impl PaperFormula {
    pub fn value(&self) -> Option<&Count> {
        match self {
            PaperFormula::Value(v) => Some(v),
            _ => None,
        }
    }

    /// Decimal string, or a short marker for the undefined cases.
    pub fn render(&self) -> String {
        match self {
            PaperFormula::Value(v) => v.to_string(),
            PaperFormula::NonIntegralExponent { poly, quarters } => {
                format!("undefined: exponent {quarters}/4 for {poly}")
            }
            PaperFormula::UndefinedHalfGL { poly, part, multiplicity } => {
                format!("undefined: odd multiplicity {multiplicity} of part {part} for {poly}")
            }
            PaperFormula::NonIntegralRatio { poly } => format!("undefined: non-integral ratio for {poly}"),
        }
    }
}

/// Four times the printed exponent: `Σ_{u<v} 3u·m_u·m_v + Σ_{u≥2} 3(u−1)m_u²`
/// with `u, v` running over part sizes.
fn printed_gamma_quarters(lambda: &Partition) -> u64 {
    let pairs = lambda.pairs();
    let mut acc = 0u64;
    for (i, &(u, m_u)) in pairs.iter().enumerate() {
        for &(_, m_v) in &pairs[i + 1..] {
            acc += 3 * u as u64 * m_u as u64 * m_v as u64;
        }
        acc += 3 * (u as u64 - 1) * (m_u as u64).pow(2);
    }
    acc
}

/// The printed product formula, evaluated verbatim: entries in `Φ_2` take
/// `q^γ ∏|GL_{m_j}(q^d)| / ∏|GL_{m_j/2}(q^{2d})|`, entries in `Φ_2'` take
/// `2^ℓ − 1`.
pub fn paper_count_formula(data: &GLClassData) -> Result<PaperFormula> {
    if !has_square_root_gl(data)? {
        return Err(Error::InvalidInput(format!("{data} has no square root")));
    }
    let q = BigUint::from(data.field().order());
    let mut acc = BigUint::one();
    for e in data.entries() {
        let name = e.poly.pretty();
        match classify2(&e.poly)? {
            TwoPowerClass::TwoPower { .. } => {
                let quarters = printed_gamma_quarters(&e.partition);
                if quarters % 4 != 0 {
                    return Ok(PaperFormula::NonIntegralExponent { poly: name, quarters });
                }
                let d = e.poly.deg() as u32;
                let qd = (&q).pow(d);
                let q2d = (&q).pow(2 * d);
                let mut num = (&q).pow((quarters / 4) as u32);
                let mut den = BigUint::one();
                for &(part, m) in e.partition.pairs() {
                    if m % 2 == 1 {
                        return Ok(PaperFormula::UndefinedHalfGL { poly: name, part, multiplicity: m });
                    }
                    num *= gl_order_big(m, &qd);
                    den *= gl_order_big(m / 2, &q2d);
                }
                let (ratio, rem) = num.div_rem(&den);
                if !rem.is_zero() {
                    return Ok(PaperFormula::NonIntegralRatio { poly: name });
                }
                acc *= ratio;
            }
            TwoPowerClass::SkewTwoPower { .. } => {
                let ell = e.partition.distinct_part_count() as u32;
                acc *= (BigUint::one() << ell) - 1u32;
            }
        }
    }
    Ok(PaperFormula::Value(acc))
}

/// Pairs each entry not fixed by `partner` with its partner entry, which
/// must carry the same partition.
fn check_closed(
    data: &GLClassData,
    partner: impl Fn(&Poly) -> Result<Poly>,
    skip: impl Fn(&Poly) -> bool,
    what: &str,
) -> Result<()> {
    for e in data.entries() {
        if skip(&e.poly) {
            continue;
        }
        let g = partner(&e.poly)?;
        if g != e.poly && data.partition_of(&g) != Some(&e.partition) {
            return Err(Error::InvalidClassData(format!(
                "{data} is not closed under {what}: {} has partner {} with a different partition",
                e.poly.pretty(),
                g.pretty()
            )));
        }
    }
    Ok(())
}

/// Existence of a square root in `U_n(q²)`, for data over `F_{q²}`.
pub fn has_square_root_unitary(data: &GLClassData) -> Result<bool> {
    if data.field().base_order().is_none() {
        return Err(Error::NotSquareOrder(data.field().order() as u64));
    }
    check_closed(data, |f| f.conj_reciprocal(), |_| false, "f -> f~")?;
    for e in data.entries() {
        let even = e.partition.all_multiplicities_even();
        let ok = if e.poly.conj_reciprocal()? == e.poly {
            match classify2_tilde(&e.poly)? {
                StarClass::Power => true,
                StarClass::SkewPower => even,
                StarClass::Neither => false,
            }
        } else {
            match classify2(&e.poly)? {
                TwoPowerClass::TwoPower { .. } => true,
                TwoPowerClass::SkewTwoPower { .. } => even,
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The printed symplectic criterion: unipotent entries pass, any `x+1`
/// entry fails, other entries follow the `Φ*_2`/`Φ_2` conditions.
pub fn has_square_root_symplectic(data: &GLClassData) -> Result<bool> {
    let field = data.field();
    let minus_one = Poly::linear(field, 1);
    let plus_one = Poly::linear(field, field.neg(1));
    let is_pm1 = |f: &Poly| f == &minus_one || f == &plus_one;
    check_closed(data, |f| f.reciprocal(), is_pm1, "f -> f*")?;
    for e in data.entries() {
        if e.poly == minus_one {
            continue;
        }
        if e.poly == plus_one {
            return Ok(false);
        }
        let even = e.partition.all_multiplicities_even();
        let ok = if e.poly.reciprocal()? == e.poly {
            match classify2_star(&e.poly)? {
                StarClass::Power => true,
                StarClass::SkewPower => even,
                StarClass::Neither => false,
            }
        } else {
            match classify2(&e.poly)? {
                TwoPowerClass::TwoPower { .. } => true,
                TwoPowerClass::SkewTwoPower { .. } => even,
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn decimal<S: serde::Serializer>(v: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditScope {
    pub group: String,
    pub n: u32,
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    pub class: ClassDataJson,
    pub values: BTreeMap<String, String>,
    /// Comparison name to whether the two sides agree; comparisons that are
    /// not defined for this class are absent.
    pub agreement: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AgreementTally {
    #[serde(serialize_with = "decimal")]
    pub matches: u64,
    #[serde(serialize_with = "decimal")]
    pub mismatches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    #[serde(serialize_with = "decimal")]
    pub records: u64,
    pub comparisons: BTreeMap<String, AgreementTally>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub scope: AuditScope,
    pub records: Vec<AuditRecord>,
    pub summary: AuditSummary,
}

impl AuditReport {
    pub fn new(scope: AuditScope, records: Vec<AuditRecord>) -> AuditReport {
        let mut comparisons: BTreeMap<String, AgreementTally> = BTreeMap::new();
        for r in &records {
            for (name, &ok) in &r.agreement {
                let t = comparisons.entry(name.clone()).or_default();
                if ok {
                    t.matches += 1;
                } else {
                    t.mismatches += 1;
                }
            }
        }
        AuditReport {
            scope,
            summary: AuditSummary {
                records: records.len() as u64,
                comparisons,
            },
            records,
        }
    }

    pub fn mismatches(&self, comparison: &str) -> u64 {
        self.summary.comparisons.get(comparison).map_or(0, |t| t.mismatches)
    }

    /// Records whose named comparison failed.
    pub fn mismatching(&self, comparison: &str) -> Vec<&AuditRecord> {
        self.records
            .iter()
            .filter(|r| r.agreement.get(comparison) == Some(&false))
            .collect()
    }

    /// Human-readable lines for each failed comparison.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.records {
            for (name, &ok) in &r.agreement {
                if !ok {
                    let entries: Vec<String> = r
                        .class
                        .entries
                        .iter()
                        .map(|e| format!("({}, {})", e.poly, e.partition))
                        .collect();
                    out.push(format!("{name} mismatch at class {{{}}}", entries.join(", ")));
                }
            }
        }
        out
    }
}

pub const CMP_COUNT_VS_ORACLE: &str = "count_square_roots=oracle_fiber";
pub const CMP_PAPER_VS_COUNT: &str = "paper_count_formula=count_square_roots";
pub const CMP_EXISTENCE_VS_COUNT: &str = "has_square_root_gl=(count_square_roots>0)";
pub const CMP_PREDICATE_VS_ORACLE: &str = "predicate=(oracle_fiber>0)";

/// Per-class comparison of every square-root count available for
/// `GL_n(q)`. With `oracle`, fiber sizes at representatives are counted by
/// brute force.
pub fn audit_square_counts(n: u32, field: &Field, oracle: bool) -> Result<AuditReport> {
    let classes = enumerate_classes(n, field)?;
    let fibers = if oracle {
        let spec = GroupSpec::new(GroupKind::GL, n, field.order() as u64)?;
        let table = brute_oracle::ElementTable::enumerate(&spec)?;
        let fib = brute_oracle::square_fiber_counts(&table);
        let values = classes
            .iter()
            .map(|c| {
                let rep = representative_matrix(c)?;
                let idx = table
                    .index_of(&rep)
                    .ok_or_else(|| Error::Invariant(format!("representative of {c} not in table")))?;
                Ok(fib[idx])
            })
            .collect::<Result<Vec<u64>>>()?;
        Some(values)
    } else {
        None
    };
    let records = classes
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let count = count_square_roots(c)?;
            let exists = has_square_root_gl(c)?;
            let mut values = BTreeMap::new();
            let mut agreement = BTreeMap::new();
            values.insert("class_size".to_string(), class_size(c)?.to_string());
            values.insert("count_square_roots".to_string(), count.to_string());
            values.insert("has_square_root_gl".to_string(), exists.to_string());
            agreement.insert(CMP_EXISTENCE_VS_COUNT.to_string(), exists == !count.is_zero());
            if exists {
                let paper = paper_count_formula(c)?;
                values.insert("paper_count_formula".to_string(), paper.render());
                agreement.insert(CMP_PAPER_VS_COUNT.to_string(), paper.value() == Some(&count));
            } else {
                values.insert("paper_count_formula".to_string(), "not applicable: no square root".into());
            }
            if let Some(f) = &fibers {
                values.insert("oracle_fiber".to_string(), f[i].to_string());
                agreement.insert(CMP_COUNT_VS_ORACLE.to_string(), count == BigUint::from(f[i]));
            }
            Ok(AuditRecord {
                class: c.to_json(),
                values,
                agreement,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditReport::new(
        AuditScope {
            group: "GL".into(),
            n,
            q: field.order().to_string(),
        },
        records,
    ))
}

/// Audits the unitary or symplectic existence predicate on every conjugacy
/// class of the explicit group against brute-force fibers.
pub fn audit_square_existence(spec: &GroupSpec) -> Result<AuditReport> {
    let predicate: fn(&GLClassData) -> Result<bool> = match spec.kind() {
        GroupKind::U => has_square_root_unitary,
        GroupKind::Sp => has_square_root_symplectic,
        GroupKind::GL => has_square_root_gl,
        other => {
            return Err(Error::InvalidInput(format!(
                "no square-root predicate for {}",
                other.label()
            )))
        }
    };
    let table = brute_oracle::ElementTable::enumerate(spec)?;
    let fib = brute_oracle::square_fiber_counts(&table);
    let classes = brute_oracle::conjugacy_classes(&table)?;
    let records = classes
        .representatives
        .par_iter()
        .zip(classes.sizes.par_iter())
        .map(|(&rep, &size)| {
            let g = table.element(rep as usize);
            let data = brute_oracle::class_data_of_element(&g)?;
            let predicted = predicate(&data)?;
            let fiber = fib[rep as usize];
            let mut values = BTreeMap::new();
            values.insert("class_size".to_string(), size.to_string());
            values.insert("oracle_fiber".to_string(), fiber.to_string());
            values.insert("predicate".to_string(), predicted.to_string());
            let mut agreement = BTreeMap::new();
            agreement.insert(CMP_PREDICATE_VS_ORACLE.to_string(), predicted == (fiber > 0));
            Ok(AuditRecord {
                class: data.to_json(),
                values,
                agreement,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditReport::new(
        AuditScope {
            group: spec.kind().label().to_string(),
            n: spec.n(),
            q: spec.q().to_string(),
        },
        records,
    ))
}
