//! Dense matrices over a [`Field`], row-major.

use std::fmt;

use super::field::Field;
use super::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row-major data. Panics on a length mismatch.
    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Matrix::from_vec(field, r, c, rows.concat())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix::from_vec(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = &self.field;
        Matrix::from_vec(
            f,
            self.rows,
            self.cols,
            self.data.iter().map(|&a| f.mul(a, c)).collect(),
        )
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Applies `g` entrywise.
    pub fn map(&self, g: impl Fn(u32) -> u32) -> Matrix {
        Matrix::from_vec(
            &self.field,
            self.rows,
            self.cols,
            self.data.iter().map(|&a| g(a)).collect(),
        )
    }

    pub fn pow(&self, mut e: u128) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `f(self)` by Horner's rule.
    pub fn eval_poly(&self, f: &Poly) -> Matrix {
        let n = self.rows;
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &c in f.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Row-reduces a copy and returns `(echelon form, rank)`.
    fn echelon(&self) -> (Matrix, usize) {
        let f = &self.field;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(piv) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(piv, rank);
            let inv = f.inv(m.get(rank, col));
            for j in col..m.cols {
                let v = f.mul(m.get(rank, j), inv);
                m.set(rank, j, v);
            }
            for r in 0..m.rows {
                if r == rank {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (red, _) = aug.echelon();
        let mut out = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            if red.get(i, i) != 1 {
                return None;
            }
            for j in 0..n {
                out.set(i, j, red.get(i, n + j));
            }
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Characteristic polynomial `det(xI - self)` via reduction to upper
    /// Hessenberg form.
    pub fn char_poly(&self) -> Poly {
        assert!(self.is_square(), "char_poly of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let c = m - 1;
            let Some(piv) = (m..n).find(|&i| h.get(i, c) != 0) else {
                continue;
            };
            h.swap_rows(piv, m);
            h.swap_cols(piv, m);
            let inv = f.inv(h.get(m, c));
            for j in m + 1..n {
                let u = f.mul(h.get(j, c), inv);
                if u == 0 {
                    continue;
                }
                for k in 0..n {
                    let v = f.sub(h.get(j, k), f.mul(u, h.get(m, k)));
                    h.set(j, k, v);
                }
                for k in 0..n {
                    let v = f.add(h.get(k, m), f.mul(u, h.get(k, j)));
                    h.set(k, m, v);
                }
            }
        }
        // p[m] is the characteristic polynomial of the leading m×m block
        let x = Poly::x(f);
        let mut p: Vec<Poly> = vec![Poly::one(f)];
        for m in 1..=n {
            let diag = Poly::constant(f, h.get(m - 1, m - 1));
            let mut pm = x.sub(&diag).mul(&p[m - 1]);
            let mut sub_prod = 1u32;
            for i in (1..m).rev() {
                sub_prod = f.mul(sub_prod, h.get(i, i - 1));
                let coef = f.mul(h.get(i - 1, m - 1), sub_prod);
                if coef != 0 {
                    pm = pm.sub(&p[i - 1].scale(coef));
                }
            }
            p.push(pm);
        }
        p.pop().unwrap()
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal and
    /// the negated coefficients in the last column.
    pub fn companion(f: &Poly) -> Matrix {
        let field = f.field();
        let d = f.deg();
        let mut m = Matrix::zeros(field, d, d);
        for i in 1..d {
            m.set(i, i - 1, 1);
        }
        for i in 0..d {
            m.set(i, d - 1, field.neg(f.coeff(i)));
        }
        m
    }

    /// Generalized Jordan block `J_{f,k}`: `k` companion blocks of `f` on the
    /// diagonal linked by identity blocks on the block superdiagonal.
    pub fn jordan_block(f: &Poly, k: usize) -> Matrix {
        let d = f.deg();
        let c = Matrix::companion(f);
        let mut m = Matrix::zeros(f.field(), d * k, d * k);
        for b in 0..k {
            for i in 0..d {
                for j in 0..d {
                    m.set(b * d + i, b * d + j, c.get(i, j));
                }
                if b + 1 < k {
                    m.set(b * d + i, (b + 1) * d + i, 1);
                }
            }
        }
        m
    }

    pub fn block_diag(field: &Field, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(field, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        m
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}] over {:?}", rows.join(","), self.field)
    }
}
