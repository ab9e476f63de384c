//! Conjugacy classes of `GL_n(q)` as combinatorial data: a partition
//! `λ_f` attached to each monic irreducible `f ≠ x`, with
//! `Σ deg(f)·|λ_f| = n`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::numtheory::{divisors, lcm, mobius};
use crate::ffpoly::{monic_irreducibles, Field, Matrix, Poly};
use crate::partitions::{partitions_of, Partition};

/// Exact nonnegative integer used for every count.
pub type Count = BigUint;

/// Default cap on the number of classes `enumerate_classes` will produce.
pub const MAX_CLASSES: u64 = 1_000_000;

/// Largest dimension for explicit representative matrices.
pub const MAX_REPRESENTATIVE_DIM: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassEntry {
    pub poly: Poly,
    pub partition: Partition,
}

/// Combinatorial data of a conjugacy class. Entries are kept sorted by
/// polynomial, which makes structural equality the class identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GLClassData {
    field: Field,
    entries: Vec<ClassEntry>,
}

impl GLClassData {
    /// Validating constructor.
    pub fn new(field: &Field, entries: Vec<(Poly, Partition)>) -> Result<GLClassData> {
        if entries.is_empty() {
            return Err(Error::InvalidClassData("no entries".into()));
        }
        for (f, lambda) in &entries {
            if f.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), f.field().to_string()));
            }
            if !f.is_monic() || f.deg() == 0 {
                return Err(Error::InvalidClassData(format!("{} is not monic of positive degree", f.pretty())));
            }
            if f.constant_term() == 0 {
                return Err(Error::InvalidClassData(format!("{} is divisible by x", f.pretty())));
            }
            if !f.is_irreducible()? {
                return Err(Error::InvalidClassData(format!("{} is reducible", f.pretty())));
            }
            if lambda.is_empty() {
                return Err(Error::InvalidClassData(format!("empty partition for {}", f.pretty())));
            }
        }
        let data = Self::from_trusted(field, entries);
        for w in data.entries.windows(2) {
            if w[0].poly == w[1].poly {
                return Err(Error::InvalidClassData(format!(
                    "duplicate polynomial {}",
                    w[0].poly.pretty()
                )));
            }
        }
        Ok(data)
    }

    /// Builds from entries already known to be valid; merges repeated
    /// polynomials by adding multiplicities.
    pub(crate) fn from_trusted(field: &Field, entries: Vec<(Poly, Partition)>) -> GLClassData {
        let mut entries: Vec<ClassEntry> = entries
            .into_iter()
            .map(|(poly, partition)| ClassEntry { poly, partition })
            .collect();
        entries.sort();
        let mut merged: Vec<ClassEntry> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(last) if last.poly == e.poly => {
                    last.partition = last.partition.merge(&e.partition);
                }
                _ => merged.push(e),
            }
        }
        GLClassData {
            field: field.clone(),
            entries: merged,
        }
    }

    /// Class of the identity of `GL_n(q)`.
    pub fn identity(field: &Field, n: u32) -> GLClassData {
        let lambda = Partition::from_pairs([(1, n)]).unwrap();
        Self::from_trusted(field, vec![(Poly::linear(field, 1), lambda)])
    }

    /// Class of the scalar matrix `c·I_n`.
    pub fn scalar(field: &Field, c: u32, n: u32) -> GLClassData {
        let lambda = Partition::from_pairs([(1, n)]).unwrap();
        Self::from_trusted(field, vec![(Poly::linear(field, c), lambda)])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entries(&self) -> &[ClassEntry] {
        &self.entries
    }

    pub fn partition_of(&self, f: &Poly) -> Option<&Partition> {
        self.entries.iter().find(|e| &e.poly == f).map(|e| &e.partition)
    }

    /// Matrix size `Σ deg(f)·|λ_f|`.
    pub fn dim(&self) -> u32 {
        self.entries
            .iter()
            .map(|e| e.poly.deg() as u32 * e.partition.weight())
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.len() == 1
            && self.entries[0].poly == Poly::linear(&self.field, 1)
            && self.entries[0].partition.max_part() == 1
    }

    pub fn to_json(&self) -> ClassDataJson {
        ClassDataJson {
            q: Some(self.field.order().to_string()),
            n: Some(self.dim()),
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    poly: e.poly.to_string(),
                    partition: e.partition.to_string(),
                })
                .collect(),
        }
    }

    /// Parses the JSON encoding. `q` and `n`, when present, must agree with
    /// the given field and the entries.
    pub fn from_json(field: &Field, json: &ClassDataJson) -> Result<GLClassData> {
        if let Some(q) = &json.q {
            let given = Field::parse(q)?;
            if &given != field {
                return Err(Error::FieldMismatch(field.to_string(), given.to_string()));
            }
        }
        let entries = json
            .entries
            .iter()
            .map(|e| Ok((Poly::parse(field, &e.poly)?, e.partition.parse::<Partition>()?)))
            .collect::<Result<Vec<_>>>()?;
        let data = GLClassData::new(field, entries)?;
        if let Some(n) = json.n {
            if n != data.dim() {
                return Err(Error::InvalidClassData(format!(
                    "declared n = {n} but entries have total degree {}",
                    data.dim()
                )));
            }
        }
        Ok(data)
    }

    pub fn parse_json(field: &Field, text: &str) -> Result<GLClassData> {
        let json: ClassDataJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("class JSON: {e}")))?;
        Self::from_json(field, &json)
    }
}

impl fmt::Display for GLClassData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| format!("({}, {})", e.poly.pretty(), e.partition))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub poly: String,
    pub partition: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDataJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub entries: Vec<EntryJson>,
}

/// `|GL_n(q)| = ∏_{i<n} (q^n − q^i)`.
pub fn gl_order(n: u32, q: u64) -> Count {
    gl_order_big(n, &BigUint::from(q))
}

/// `|GL_m(Q)|` for an arbitrary-precision `Q`, memoized.
pub fn gl_order_big(m: u32, q: &BigUint) -> Count {
    static MEMO: OnceLock<Mutex<HashMap<(u32, BigUint), BigUint>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (m, q.clone());
    if let Some(v) = memo.lock().unwrap().get(&key) {
        return v.clone();
    }
    let qn = q.pow(m);
    let mut acc = BigUint::one();
    let mut qi = BigUint::one();
    for _ in 0..m {
        acc *= &qn - &qi;
        qi *= q;
    }
    memo.lock().unwrap().insert(key, acc.clone());
    acc
}

/// Number of monic irreducibles of degree `d` over `F_q`, excluding `x`.
pub fn irreducible_count_nonx(q: u64, d: u32) -> Count {
    let mut total = BigInt::zero();
    for e in divisors(d as u128) {
        let mu = mobius(e);
        if mu != 0 {
            total += BigInt::from(mu) * BigInt::from(q).pow((d as u128 / e) as u32);
        }
    }
    let mut n = (total / BigInt::from(d)).to_biguint().expect("nonnegative");
    if d == 1 {
        n -= 1u32;
    }
    n
}

/// Number of conjugacy classes of `GL_n(q)`, from the class generating
/// function `∏_d P(z^d)^{N_d}`.
pub fn count_classes(n: u32, q: u64) -> Count {
    let n = n as usize;
    let pcount: Vec<BigUint> = (0..=n as u32)
        .map(|k| BigUint::from(partitions_of(k).map(|v| v.len()).unwrap_or(0)))
        .collect();
    let mut series = vec![BigUint::zero(); n + 1];
    series[0] = BigUint::one();
    for d in 1..=n {
        // P(y)^{N_d} truncated at y^{n/d}, then y -> z^d
        let k = n / d;
        let power = series_pow(&pcount[..=k], irreducible_count_nonx(q, d as u32));
        let mut spread = vec![BigUint::zero(); n + 1];
        for (i, c) in power.into_iter().enumerate() {
            spread[i * d] = c;
        }
        series = series_mul(&series, &spread, n);
    }
    series[n].clone()
}

fn series_mul(a: &[BigUint], b: &[BigUint], top: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); top + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(top + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn series_pow(base: &[BigUint], mut e: BigUint) -> Vec<BigUint> {
    let top = base.len() - 1;
    let mut acc = vec![BigUint::zero(); top + 1];
    acc[0] = BigUint::one();
    let mut b = base.to_vec();
    while !e.is_zero() {
        if e.bit(0) {
            acc = series_mul(&acc, &b, top);
        }
        e >>= 1u32;
        if !e.is_zero() {
            b = series_mul(&b, &b, top);
        }
    }
    acc
}

/// Every class of `GL_n(q)`, in a deterministic order: polynomials by
/// (degree, lex), then weights, then partitions in [`partitions_of`] order.
pub fn enumerate_classes(n: u32, field: &Field) -> Result<Vec<GLClassData>> {
    enumerate_classes_bounded(n, field, MAX_CLASSES)
}

pub fn enumerate_classes_bounded(n: u32, field: &Field, max_classes: u64) -> Result<Vec<GLClassData>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let total = count_classes(n, field.order() as u64);
    if total > BigUint::from(max_classes) {
        return Err(Error::bound("number of classes", total, max_classes));
    }
    let mut polys = Vec::new();
    for d in 1..=n as usize {
        polys.extend(
            monic_irreducibles(field, d)?
                .into_iter()
                .filter(|f| !f.is_x()),
        );
    }
    let partitions: Vec<Vec<Partition>> = (0..=n).map(partitions_of).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    assign(&polys, 0, n as usize, &partitions, &mut chosen, field, &mut out);
    if BigUint::from(out.len()) != total {
        return Err(Error::Invariant(format!(
            "enumerated {} classes, generating function predicts {total}",
            out.len()
        )));
    }
    Ok(out)
}

fn assign(
    polys: &[Poly],
    start: usize,
    budget: usize,
    partitions: &[Vec<Partition>],
    chosen: &mut Vec<(Poly, Partition)>,
    field: &Field,
    out: &mut Vec<GLClassData>,
) {
    if budget == 0 {
        out.push(GLClassData::from_trusted(field, chosen.clone()));
        return;
    }
    for (j, f) in polys.iter().enumerate().skip(start) {
        let d = f.deg();
        if d > budget {
            break;
        }
        for w in 1..=budget / d {
            for lambda in &partitions[w] {
                chosen.push((f.clone(), lambda.clone()));
                assign(polys, j + 1, budget - w * d, partitions, chosen, field, out);
                chosen.pop();
            }
        }
    }
}

/// `|Z_{GL_n(q)}(x)| = q^γ ∏_f ∏_j |GL_{m_j(λ_f)}(q^{deg f})|`.
pub fn centralizer_order(data: &GLClassData) -> Count {
    let q = BigUint::from(data.field.order());
    let mut acc = BigUint::one();
    for e in &data.entries {
        let d = e.poly.deg() as u64;
        let gamma = e.partition.gamma_exponent(d).expect("nonempty partition");
        acc *= (&q).pow(gamma as u32);
        let qd = (&q).pow(d as u32);
        for &(_, m) in e.partition.pairs() {
            acc *= gl_order_big(m, &qd);
        }
    }
    acc
}

pub fn class_size(data: &GLClassData) -> Result<Count> {
    let order = gl_order(data.dim(), data.field.order() as u64);
    let cent = centralizer_order(data);
    let (size, rem) = order.div_rem(&cent);
    if !rem.is_zero() {
        return Err(Error::Invariant(format!(
            "centralizer order {cent} does not divide |GL| = {order} for {data}"
        )));
    }
    Ok(size)
}

/// Block-diagonal matrix of generalized Jordan blocks `J_{f,k}`, one per
/// part `k` of each `λ_f` (with multiplicity).
pub fn representative_matrix(data: &GLClassData) -> Result<Matrix> {
    let n = data.dim() as usize;
    if n > MAX_REPRESENTATIVE_DIM {
        return Err(Error::bound("representative dimension", n, MAX_REPRESENTATIVE_DIM));
    }
    let mut blocks = Vec::new();
    for e in &data.entries {
        for &(k, m) in e.partition.pairs() {
            for _ in 0..m {
                blocks.push(Matrix::jordan_block(&e.poly, k as usize));
            }
        }
    }
    Ok(Matrix::block_diag(&data.field, &blocks))
}

/// Class of the inverses: each `f` is replaced by its reciprocal.
pub fn inverse_class(data: &GLClassData) -> GLClassData {
    let entries = data
        .entries
        .iter()
        .map(|e| {
            (
                e.poly.reciprocal().expect("class polynomials have nonzero constant term"),
                e.partition.clone(),
            )
        })
        .collect();
    GLClassData::from_trusted(&data.field, entries)
}

pub fn is_real_class(data: &GLClassData) -> bool {
    &inverse_class(data) == data
}

/// Order of any element of the class: lcm of root orders times the
/// `p`-power needed to kill the largest unipotent block.
pub fn element_order_of_class(data: &GLClassData) -> Result<u128> {
    let mut ord = 1u128;
    let mut max_part = 1u32;
    for e in &data.entries {
        ord = lcm(ord, e.poly.root_order()?);
        max_part = max_part.max(e.partition.max_part());
    }
    let p = data.field.characteristic() as u128;
    let mut pk = 1u128;
    while pk < max_part as u128 {
        pk *= p;
    }
    Ok(ord * pk)
}
