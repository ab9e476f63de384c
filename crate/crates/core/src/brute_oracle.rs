//! Exhaustive enumeration of small classical matrix groups. Everything here
//! is computed element by element and serves as ground truth for the
//! class-level formulas.

use std::collections::{HashMap, VecDeque};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffpoly::{Field, Matrix};
use crate::gl_classes::{gl_order, GLClassData};
use crate::partitions::Partition;

/// Default cap on the order of an enumerated group.
pub const DEFAULT_ORDER_LIMIT: u64 = 1_000_000;
/// Largest order accepted even with an explicit override.
pub const HARD_ORDER_LIMIT: u64 = 10_000_000;
/// Largest number of column vectors scanned during enumeration.
pub const MAX_VECTORS: u64 = 1 << 22;
/// Largest matrix handled by [`class_data_of_element`].
pub const MAX_EXTRACT_DIM: usize = 12;

const CACHE_MAGIC: &[u8; 4] = b"SQF1";
const GENERATOR_SEED: u64 = 0x5155_4631;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    GL,
    U,
    Sp,
    Oplus,
    Ominus,
    Oodd,
}

impl GroupKind {
    pub fn parse(s: &str) -> Result<GroupKind> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "gl" => GroupKind::GL,
            "u" => GroupKind::U,
            "sp" => GroupKind::Sp,
            "o+" | "oplus" => GroupKind::Oplus,
            "o-" | "ominus" => GroupKind::Ominus,
            "o0" | "oodd" => GroupKind::Oodd,
            _ => return Err(Error::Parse(format!("unknown group kind '{s}'"))),
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            GroupKind::GL => "GL",
            GroupKind::U => "U",
            GroupKind::Sp => "Sp",
            GroupKind::Oplus => "O+",
            GroupKind::Ominus => "O-",
            GroupKind::Oodd => "O0",
        }
    }

    fn code(self) -> u8 {
        self as u8
    }
}

/// An explicit matrix group `{g : gᵀ B σ(g) = B}` (or all of `GL_n`).
#[derive(Clone, Debug)]
pub struct GroupSpec {
    kind: GroupKind,
    n: u32,
    q: u64,
    field: Field,
    form: Option<Matrix>,
    order: BigUint,
}

impl GroupSpec {
    pub fn new(kind: GroupKind, n: u32, q: u64) -> Result<GroupSpec> {
        Self::with_order_limit(kind, n, q, DEFAULT_ORDER_LIMIT)
    }

    pub fn with_order_limit(kind: GroupKind, n: u32, q: u64, limit: u64) -> Result<GroupSpec> {
        if limit > HARD_ORDER_LIMIT {
            return Err(Error::bound("order limit", limit, HARD_ORDER_LIMIT));
        }
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let base = Field::of_order(q)?;
        let field = match kind {
            GroupKind::U => {
                let q2 = q.checked_mul(q).ok_or_else(|| Error::bound("q^2", "overflow", u64::MAX))?;
                Field::of_order(q2)?
            }
            _ => base,
        };
        let parity_ok = match kind {
            GroupKind::GL | GroupKind::U => true,
            GroupKind::Sp | GroupKind::Oplus | GroupKind::Ominus => n % 2 == 0,
            GroupKind::Oodd => n % 2 == 1,
        };
        if !parity_ok {
            return Err(Error::InvalidInput(format!(
                "{} needs {} dimension, got {n}",
                kind.label(),
                if kind == GroupKind::Oodd { "odd" } else { "even" }
            )));
        }
        let order = classical_order(kind, n, q);
        if order > BigUint::from(limit) {
            return Err(Error::bound("group order", order, limit));
        }
        let bits = bits_per_entry(field.order());
        if (n * n) as u64 * bits as u64 > 128 {
            return Err(Error::bound("packed matrix bits", (n * n) * bits, 128));
        }
        let vectors = BigUint::from(field.order()).pow(n);
        if vectors > BigUint::from(MAX_VECTORS) {
            return Err(Error::bound("column vectors", vectors, MAX_VECTORS));
        }
        let form = standard_form(kind, n as usize, &field);
        Ok(GroupSpec {
            kind,
            n,
            q,
            field,
            form,
            order,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Field the matrix entries live in (`F_{q²}` for the unitary kind).
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn form(&self) -> Option<&Matrix> {
        self.form.as_ref()
    }

    /// Order from the classical formula.
    pub fn expected_order(&self) -> &BigUint {
        &self.order
    }

    /// Whether the entry map of the defining condition is `a ↦ a^q`.
    fn twisted(&self) -> bool {
        self.kind == GroupKind::U
    }
}

fn bits_per_entry(q: u32) -> u32 {
    32 - (q - 1).leading_zeros()
}

/// Orthogonal forms are chosen by discriminant so that the plus type is the
/// one with a maximal totally singular subspace: the identity when
/// `(−1)^{n/2}` is a square, `diag(1, …, 1, ν)` otherwise.
fn standard_form(kind: GroupKind, n: usize, field: &Field) -> Option<Matrix> {
    let identity = Matrix::identity(field, n);
    let twisted = || {
        let mut m = Matrix::identity(field, n);
        m.set(n - 1, n - 1, field.first_nonsquare());
        m
    };
    match kind {
        GroupKind::GL => None,
        GroupKind::U | GroupKind::Oodd => Some(identity),
        GroupKind::Sp => {
            let h = n / 2;
            let mut m = Matrix::zeros(field, n, n);
            for i in 0..h {
                m.set(i, h + i, 1);
                m.set(h + i, i, field.neg(1));
            }
            Some(m)
        }
        GroupKind::Oplus | GroupKind::Ominus => {
            let sign = if (n / 2) % 2 == 0 { 1 } else { field.neg(1) };
            let identity_is_plus = field.is_square(sign);
            if (kind == GroupKind::Oplus) == identity_is_plus {
                Some(identity)
            } else {
                Some(twisted())
            }
        }
    }
}

/// `|G|` from the classical order formulas; `q` is the base field order.
pub fn classical_order(kind: GroupKind, n: u32, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let qp = |e: u32| q.pow(e);
    let prod_even = |m: u32| -> BigUint { (1..=m).map(|i| qp(2 * i) - 1u32).product() };
    match kind {
        GroupKind::GL => {
            let q64 = q.to_u64().expect("small q");
            gl_order(n, q64)
        }
        GroupKind::U => {
            let mut acc = qp(n * (n - 1) / 2);
            for i in 1..=n {
                acc *= if i % 2 == 0 { qp(i) - 1u32 } else { qp(i) + 1u32 };
            }
            acc
        }
        GroupKind::Sp => {
            let m = n / 2;
            qp(m * m) * prod_even(m)
        }
        GroupKind::Oplus | GroupKind::Ominus => {
            let m = n / 2;
            let middle = if kind == GroupKind::Oplus { qp(m) - 1u32 } else { qp(m) + 1u32 };
            BigUint::from(2u32) * qp(m * (m - 1)) * middle * prod_even(m - 1)
        }
        GroupKind::Oodd => {
            let m = (n - 1) / 2;
            BigUint::from(2u32) * qp(m * m) * prod_even(m)
        }
    }
}

/// Field arithmetic with dense tables for small fields.
struct Ops {
    field: Field,
    q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
}

const TABLE_LIMIT: u32 = 256;

impl Ops {
    fn new(field: &Field) -> Ops {
        let q = field.order();
        let (add, mul) = if q <= TABLE_LIMIT {
            let mut add = vec![0; (q * q) as usize];
            let mut mul = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = field.add(a, b);
                    mul[(a * q + b) as usize] = field.mul(a, b);
                }
            }
            (add, mul)
        } else {
            (Vec::new(), Vec::new())
        };
        Ops {
            field: field.clone(),
            q: q as usize,
            add,
            mul,
        }
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.add.is_empty() {
            self.field.add(a, b)
        } else {
            self.add[a as usize * self.q + b as usize]
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.mul.is_empty() {
            self.field.mul(a, b)
        } else {
            self.mul[a as usize * self.q + b as usize]
        }
    }

    fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Row-major `n×n` product.
    fn matmul(&self, n: usize, a: &[u32], b: &[u32], out: &mut [u32]) {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = self.add(acc, self.mul(a[i * n + k], b[k * n + j]));
                }
                out[i * n + j] = acc;
            }
        }
    }
}

/// Every element of a group, sorted by packed encoding, with an index.
pub struct ElementTable {
    spec: GroupSpec,
    ops: Ops,
    bits: u32,
    codes: Vec<u128>,
    index: HashMap<u128, u32>,
    squares: OnceLock<Vec<u32>>,
    inverses: OnceLock<Vec<u32>>,
}

impl ElementTable {
    pub fn enumerate(spec: &GroupSpec) -> Result<ElementTable> {
        let ops = Ops::new(spec.field());
        let mut codes = enumerate_codes(spec, &ops);
        codes.sort_unstable();
        Self::from_codes(spec, ops, codes)
    }

    fn from_codes(spec: &GroupSpec, ops: Ops, codes: Vec<u128>) -> Result<ElementTable> {
        if BigUint::from(codes.len()) != spec.order {
            return Err(Error::Invariant(format!(
                "{}({}, {}) has {} elements, the order formula gives {}",
                spec.kind.label(),
                spec.n,
                spec.q,
                codes.len(),
                spec.order
            )));
        }
        let index = codes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        Ok(ElementTable {
            spec: spec.clone(),
            bits: bits_per_entry(spec.field.order()),
            ops,
            codes,
            index,
            squares: OnceLock::new(),
            inverses: OnceLock::new(),
        })
    }

    /// Loads the table from `path` when it holds a cache for this spec,
    /// otherwise enumerates and writes the cache.
    pub fn load_or_enumerate(spec: &GroupSpec, path: &Path) -> Result<ElementTable> {
        if path.exists() {
            return Self::read_cache(spec, path);
        }
        let table = Self::enumerate(spec)?;
        table.write_cache(path)?;
        Ok(table)
    }

    /// Binary cache: `SQF1`, kind (u8), n (u32), q (u32), count (u64), then
    /// one little-endian u128 per element.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&[self.spec.kind.code()])?;
        w.write_all(&self.spec.n.to_le_bytes())?;
        w.write_all(&(self.spec.q as u32).to_le_bytes())?;
        w.write_all(&(self.codes.len() as u64).to_le_bytes())?;
        for c in &self.codes {
            w.write_all(&c.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_cache(spec: &GroupSpec, path: &Path) -> Result<ElementTable> {
        let mut r = BufReader::new(File::open(path)?);
        let bad = |what: &str| Error::Parse(format!("cache {}: {what}", path.display()));
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(bad("bad magic"));
        }
        let mut kind = [0u8; 1];
        let mut n = [0u8; 4];
        let mut q = [0u8; 4];
        let mut count = [0u8; 8];
        r.read_exact(&mut kind)?;
        r.read_exact(&mut n)?;
        r.read_exact(&mut q)?;
        r.read_exact(&mut count)?;
        if kind[0] != spec.kind.code() || u32::from_le_bytes(n) != spec.n || u32::from_le_bytes(q) as u64 != spec.q {
            return Err(bad("header does not match the requested group"));
        }
        let count = u64::from_le_bytes(count);
        if BigUint::from(count) != spec.order {
            return Err(bad("element count does not match the group order"));
        }
        let mut codes = Vec::with_capacity(count as usize);
        let mut buf = [0u8; 16];
        for _ in 0..count {
            r.read_exact(&mut buf)?;
            codes.push(u128::from_le_bytes(buf));
        }
        if codes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("encodings not strictly increasing"));
        }
        let table = Self::from_codes(spec, Ops::new(spec.field()), codes)?;
        let id = table.encode(&identity_entries(spec.n as usize));
        if !table.index.contains_key(&id) {
            return Err(bad("identity missing"));
        }
        Ok(table)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    fn dim(&self) -> usize {
        self.spec.n as usize
    }

    fn encode(&self, entries: &[u32]) -> u128 {
        entries
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &v)| acc | ((v as u128) << (self.bits as usize * i)))
    }

    fn decode(&self, code: u128) -> Vec<u32> {
        let mask = (1u128 << self.bits) - 1;
        (0..self.dim() * self.dim())
            .map(|i| ((code >> (self.bits as usize * i)) & mask) as u32)
            .collect()
    }

    fn entries(&self, i: usize) -> Vec<u32> {
        self.decode(self.codes[i])
    }

    pub fn element(&self, i: usize) -> Matrix {
        let n = self.dim();
        Matrix::from_vec(self.spec.field(), n, n, self.entries(i))
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        if m.field() != self.spec.field() || m.rows() != self.dim() || m.cols() != self.dim() {
            return None;
        }
        self.lookup(m.data())
    }

    fn lookup(&self, entries: &[u32]) -> Option<usize> {
        self.index.get(&self.encode(entries)).map(|&i| i as usize)
    }

    fn product_index(&self, a: &[u32], b: &[u32], scratch: &mut [u32]) -> usize {
        self.ops.matmul(self.dim(), a, b, scratch);
        self.lookup(scratch).expect("group is closed under multiplication")
    }

    pub fn identity_index(&self) -> usize {
        self.lookup(&identity_entries(self.dim())).expect("identity present")
    }

    /// Index of `g²` for every `g`.
    pub fn squares(&self) -> &[u32] {
        self.squares.get_or_init(|| {
            let n = self.dim();
            (0..self.len())
                .into_par_iter()
                .map_init(
                    || vec![0u32; n * n],
                    |scratch, i| {
                        let g = self.entries(i);
                        self.product_index(&g, &g, scratch) as u32
                    },
                )
                .collect()
        })
    }

    /// Index of `g⁻¹` for every `g`.
    pub fn inverses(&self) -> &[u32] {
        self.inverses.get_or_init(|| {
            (0..self.len())
                .into_par_iter()
                .map(|i| {
                    let inv = self.element(i).inverse().expect("group elements are invertible");
                    self.lookup(inv.data()).expect("group is closed under inversion") as u32
                })
                .collect()
        })
    }
}

fn identity_entries(n: usize) -> Vec<u32> {
    let mut v = vec![0u32; n * n];
    for i in 0..n {
        v[i * n + i] = 1;
    }
    v
}

fn all_vectors(q: u32, n: usize) -> Vec<Vec<u32>> {
    let total = (q as usize).pow(n as u32);
    (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = (idx % q as usize) as u32;
                    idx /= q as usize;
                    d
                })
                .collect()
        })
        .collect()
}

/// Packs columns (given as vector indices) into a row-major encoding.
fn pack_columns(cols: &[usize], vectors: &[Vec<u32>], n: usize, bits: u32) -> u128 {
    let mut code = 0u128;
    for (j, &c) in cols.iter().enumerate() {
        for (i, &v) in vectors[c].iter().enumerate() {
            code |= (v as u128) << (bits as usize * (i * n + j));
        }
    }
    code
}

fn enumerate_codes(spec: &GroupSpec, ops: &Ops) -> Vec<u128> {
    let n = spec.n as usize;
    let field = spec.field();
    let vectors = all_vectors(field.order(), n);
    let bits = bits_per_entry(field.order());
    match spec.form() {
        None => enumerate_gl(&vectors, n, bits, ops),
        Some(b) => enumerate_form(&vectors, n, bits, ops, b, spec.twisted()),
    }
}

/// Reduces `v` against an echelon basis; returns the reduced vector if it is
/// outside the span.
fn reduce(basis: &[(usize, Vec<u32>)], v: &[u32], ops: &Ops) -> Option<(usize, Vec<u32>)> {
    let field = &ops.field;
    let mut w = v.to_vec();
    for (pivot, b) in basis {
        let c = w[*pivot];
        if c != 0 {
            let neg = field.neg(c);
            for (x, &y) in w.iter_mut().zip(b) {
                *x = ops.add(*x, ops.mul(neg, y));
            }
        }
    }
    let pivot = w.iter().position(|&x| x != 0)?;
    let inv = field.inv(w[pivot]);
    for x in &mut w {
        *x = ops.mul(*x, inv);
    }
    Some((pivot, w))
}

fn enumerate_gl(vectors: &[Vec<u32>], n: usize, bits: u32, ops: &Ops) -> Vec<u128> {
    fn dfs(
        vectors: &[Vec<u32>],
        n: usize,
        bits: u32,
        ops: &Ops,
        cols: &mut Vec<usize>,
        basis: &mut Vec<(usize, Vec<u32>)>,
        out: &mut Vec<u128>,
    ) {
        if cols.len() == n {
            out.push(pack_columns(cols, vectors, n, bits));
            return;
        }
        for (i, v) in vectors.iter().enumerate().skip(1) {
            if let Some(reduced) = reduce(basis, v, ops) {
                cols.push(i);
                basis.push(reduced);
                dfs(vectors, n, bits, ops, cols, basis, out);
                basis.pop();
                cols.pop();
            }
        }
    }
    (1..vectors.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut cols = vec![first];
            let mut basis = vec![reduce(&[], &vectors[first], ops).expect("nonzero")];
            dfs(vectors, n, bits, ops, &mut cols, &mut basis, &mut out);
            out
        })
        .collect()
}

/// Column-by-column search for `gᵀ B σ(g) = B`: column `j` must satisfy
/// `c_iᵀ B σ(c_j) = B_ij` and `c_jᵀ B σ(c_i) = B_ji` for `i ≤ j`.
fn enumerate_form(vectors: &[Vec<u32>], n: usize, bits: u32, ops: &Ops, b: &Matrix, twisted: bool) -> Vec<u128> {
    let field = &ops.field;
    let sigma = |a: u32| if twisted { field.conj(a).expect("square order") } else { a };
    // w_v = B σ(v)
    let images: Vec<Vec<u32>> = vectors
        .iter()
        .map(|v| {
            (0..n)
                .map(|r| (0..n).fold(0, |acc, k| ops.add(acc, ops.mul(b.get(r, k), sigma(v[k])))))
                .collect()
        })
        .collect();
    let mut by_norm: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, v) in vectors.iter().enumerate() {
        by_norm.entry(ops.dot(v, &images[i])).or_default().push(i);
    }
    let empty = Vec::new();
    let candidates: Vec<&Vec<usize>> = (0..n).map(|j| by_norm.get(&b.get(j, j)).unwrap_or(&empty)).collect();

    let fits = |cols: &[usize], j: usize, v: usize| {
        cols.iter().enumerate().all(|(i, &c)| {
            ops.dot(&vectors[c], &images[v]) == b.get(i, j) && ops.dot(&vectors[v], &images[c]) == b.get(j, i)
        })
    };

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        cols: &mut Vec<usize>,
        candidates: &[&Vec<usize>],
        fits: &dyn Fn(&[usize], usize, usize) -> bool,
        vectors: &[Vec<u32>],
        n: usize,
        bits: u32,
        out: &mut Vec<u128>,
    ) {
        let j = cols.len();
        if j == n {
            out.push(pack_columns(cols, vectors, n, bits));
            return;
        }
        for &v in candidates[j].iter() {
            if fits(cols, j, v) {
                cols.push(v);
                dfs(cols, candidates, fits, vectors, n, bits, out);
                cols.pop();
            }
        }
    }

    candidates[0]
        .par_iter()
        .flat_map_iter(|&first| {
            let mut out = Vec::new();
            let mut cols = vec![first];
            dfs(&mut cols, &candidates, &fits, vectors, n, bits, &mut out);
            out
        })
        .collect()
}

/// `|{g : g² = β}|` for every element `β`, indexed like the table.
pub fn square_fiber_counts(table: &ElementTable) -> Vec<u64> {
    let mut counts = vec![0u64; table.len()];
    for &s in table.squares() {
        counts[s as usize] += 1;
    }
    counts
}

/// Conjugacy classes, numbered by their smallest element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    pub class_of: Vec<u32>,
    pub representatives: Vec<u32>,
    pub sizes: Vec<u64>,
}

impl ClassPartition {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Subgroup generated by `gens`, as a visited mask; returns its size.
fn closure_size(table: &ElementTable, gens: &[usize]) -> usize {
    let n = table.dim();
    let gen_entries: Vec<Vec<u32>> = gens.iter().map(|&g| table.entries(g)).collect();
    let mut seen = vec![false; table.len()];
    let start = table.identity_index();
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut scratch = vec![0u32; n * n];
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        let xe = table.entries(x);
        for s in &gen_entries {
            let y = table.product_index(&xe, s, &mut scratch);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count
}

/// A generating set chosen by a fixed-seed generator and verified by
/// closure; falls back to the whole group.
fn generating_set(table: &ElementTable) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(GENERATOR_SEED);
    let mut gens = Vec::new();
    for _ in 0..32 {
        gens.push(rng.gen_range(0..table.len()));
        if gens.len() >= 2 && closure_size(table, &gens) == table.len() {
            return gens;
        }
    }
    (0..table.len()).collect()
}

pub fn conjugacy_classes(table: &ElementTable) -> Result<ClassPartition> {
    let n = table.dim();
    let gens = generating_set(table);
    let inverses = table.inverses();
    let pairs: Vec<(Vec<u32>, Vec<u32>)> = gens
        .iter()
        .map(|&g| (table.entries(g), table.entries(inverses[g] as usize)))
        .collect();
    let mut class_of = vec![u32::MAX; table.len()];
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    let mut scratch = vec![0u32; n * n];
    let mut tmp = vec![0u32; n * n];
    for start in 0..table.len() {
        if class_of[start] != u32::MAX {
            continue;
        }
        let id = representatives.len() as u32;
        class_of[start] = id;
        let mut size = 1u64;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let xe = table.entries(x);
            for (s, s_inv) in &pairs {
                table.ops.matmul(n, s, &xe, &mut tmp);
                let y = table.product_index(&tmp, s_inv, &mut scratch);
                if class_of[y] == u32::MAX {
                    class_of[y] = id;
                    size += 1;
                    queue.push_back(y);
                }
            }
        }
        representatives.push(start as u32);
        sizes.push(size);
    }
    let order = table.len() as u64;
    if let Some(s) = sizes.iter().find(|&&s| order % s != 0) {
        return Err(Error::Invariant(format!("class size {s} does not divide |G| = {order}")));
    }
    Ok(ClassPartition {
        class_of,
        representatives,
        sizes,
    })
}

/// Number of classes `C` with `C = C⁻¹`.
pub fn real_classes_oracle(table: &ElementTable, classes: &ClassPartition) -> u64 {
    let inverses = table.inverses();
    classes
        .representatives
        .iter()
        .enumerate()
        .filter(|&(c, &rep)| classes.class_of[inverses[rep as usize] as usize] == c as u32)
        .count() as u64
}

/// `|{(g, h) : g²h² = 1}| = Σ_β fiber(β)·fiber(β⁻¹)`.
pub fn s2_oracle(table: &ElementTable, fibers: &[u64]) -> BigUint {
    let inverses = table.inverses();
    fibers
        .iter()
        .enumerate()
        .map(|(b, &f)| BigUint::from(f) * fibers[inverses[b] as usize])
        .sum()
}

/// Combinatorial data of an invertible matrix, with multiplicities recovered
/// from the ranks of powers of `f(g)`.
pub fn class_data_of_element(g: &Matrix) -> Result<GLClassData> {
    let n = g.rows();
    if n != g.cols() {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    if n > MAX_EXTRACT_DIM {
        return Err(Error::bound("matrix dimension", n, MAX_EXTRACT_DIM));
    }
    if !g.is_invertible() {
        return Err(Error::InvalidInput("matrix is singular".into()));
    }
    let mut entries = Vec::new();
    for (f, e) in g.char_poly().factorize()? {
        let a = g.eval_poly(&f);
        let e = e as usize;
        let mut ranks = vec![n];
        let mut power = Matrix::identity(g.field(), n);
        for _ in 0..=e {
            power = power.mul(&a);
            ranks.push(power.rank());
        }
        let d = f.deg();
        let mut pairs = Vec::new();
        for j in 1..=e {
            let m = ranks[j - 1] + ranks[j + 1] - 2 * ranks[j];
            if m % d != 0 {
                return Err(Error::Invariant(format!(
                    "rank drop {m} for {} is not a multiple of its degree",
                    f.pretty()
                )));
            }
            pairs.push((j as u32, (m / d) as u32));
        }
        entries.push((f, Partition::from_pairs(pairs)?));
    }
    let data = GLClassData::new(g.field(), entries)?;
    if data.dim() as usize != n {
        return Err(Error::Invariant(format!("extracted data {data} has the wrong dimension")));
    }
    Ok(data)
}

/// Summary of one explicit group: order, classes, real classes and `|s(2)|`.
pub fn group_summary(spec: &GroupSpec) -> Result<(ElementTable, Vec<u64>, ClassPartition)> {
    let table = ElementTable::enumerate(spec)?;
    let fibers = square_fiber_counts(&table);
    let classes = conjugacy_classes(&table)?;
    Ok((table, fibers, classes))
}
