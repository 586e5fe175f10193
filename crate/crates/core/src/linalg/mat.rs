use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Field, LinalgError, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Data {
    Fp(Vec<u32>),
    Q(Vec<BigRational>),
}

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    pub(crate) data: Data,
}

impl Mat {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Mat {
        let data = match field {
            Field::Fp(_) => Data::Fp(vec![0; rows * cols]),
            Field::Q => Data::Q(vec![BigRational::zero(); rows * cols]),
        };
        Mat { field, rows, cols, data }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set_one(i, i);
        }
        m
    }

    pub(crate) fn from_fp(p: u32, rows: usize, cols: usize, v: Vec<u32>) -> Mat {
        debug_assert_eq!(v.len(), rows * cols);
        Mat { field: Field::Fp(p), rows, cols, data: Data::Fp(v) }
    }

    pub(crate) fn from_q(rows: usize, cols: usize, v: Vec<BigRational>) -> Mat {
        debug_assert_eq!(v.len(), rows * cols);
        Mat { field: Field::Q, rows, cols, data: Data::Q(v) }
    }

    /// Build from a row-major list of scalars.
    pub fn from_scalars(field: Field, rows: usize, cols: usize, entries: &[Scalar]) -> Result<Mat, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut m = Mat::zero(field, rows, cols);
        for (k, e) in entries.iter().enumerate() {
            if e.field() != field {
                return Err(LinalgError::FieldMismatch(field, e.field()));
            }
            m.set(k / cols.max(1), k % cols.max(1), e);
        }
        Ok(m)
    }

    /// Build from small integers, row-major.
    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Mat {
        assert_eq!(entries.len(), rows * cols, "entry count");
        let mut m = Mat::zero(field, rows, cols);
        for (k, &e) in entries.iter().enumerate() {
            if e != 0 {
                m.set(k / cols, k % cols, &field.from_i64(e));
            }
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let flat: Vec<i64> = rows.iter().flat_map(|x| x.iter().copied()).collect();
        Mat::from_i64(field, r, c, &flat)
    }

    /// Column vector from scalars.
    pub fn column(field: Field, v: &[Scalar]) -> Mat {
        Mat::from_scalars(field, v.len(), 1, v).expect("column")
    }

    /// Unit column vector `e_i` of length `n`.
    pub fn unit(field: Field, n: usize, i: usize) -> Mat {
        let mut m = Mat::zero(field, n, 1);
        m.set_one(i, 0);
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let k = i * self.cols + j;
        match (&self.data, self.field) {
            (Data::Fp(v), Field::Fp(p)) => Scalar::Fp { v: v[k], p },
            (Data::Q(v), _) => Scalar::Q(v[k].clone()),
            _ => unreachable!(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, s: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        assert_eq!(s.field(), self.field, "field mismatch");
        let k = i * self.cols + j;
        match (&mut self.data, s) {
            (Data::Fp(v), Scalar::Fp { v: x, .. }) => v[k] = *x,
            (Data::Q(v), Scalar::Q(x)) => v[k] = x.clone(),
            _ => unreachable!(),
        }
    }

    fn set_one(&mut self, i: usize, j: usize) {
        let k = i * self.cols + j;
        match &mut self.data {
            Data::Fp(v) => v[k] = 1,
            Data::Q(v) => v[k] = BigRational::one(),
        }
    }

    pub fn entry_is_zero(&self, i: usize, j: usize) -> bool {
        let k = i * self.cols + j;
        match &self.data {
            Data::Fp(v) => v[k] == 0,
            Data::Q(v) => v[k].is_zero(),
        }
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.push(self.get(i, j));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Fp(v) => v.iter().all(|x| *x == 0),
            Data::Q(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(self.field, self.rows)
    }

    fn check_field(&self, o: &Mat) -> Result<(), LinalgError> {
        if self.field != o.field {
            Err(LinalgError::FieldMismatch(self.field, o.field))
        } else {
            Ok(())
        }
    }

    pub fn try_matmul(&self, o: &Mat) -> Result<Mat, LinalgError> {
        self.check_field(o)?;
        if self.cols != o.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let (n, m, k) = (self.rows, o.cols, self.cols);
        Ok(match (&self.data, &o.data, self.field) {
            (Data::Fp(a), Data::Fp(b), Field::Fp(p)) => {
                let p64 = p as u64;
                let mut out = vec![0u32; n * m];
                let mut acc = vec![0u64; m];
                for i in 0..n {
                    acc.iter_mut().for_each(|x| *x = 0);
                    for t in 0..k {
                        let av = a[i * k + t] as u64;
                        if av == 0 {
                            continue;
                        }
                        let row = &b[t * m..(t + 1) * m];
                        for j in 0..m {
                            acc[j] = (acc[j] + av * row[j] as u64) % p64;
                        }
                    }
                    for j in 0..m {
                        out[i * m + j] = acc[j] as u32;
                    }
                }
                Mat::from_fp(p, n, m, out)
            }
            (Data::Q(a), Data::Q(b), _) => {
                let mut out = vec![BigRational::zero(); n * m];
                for i in 0..n {
                    for t in 0..k {
                        let av = &a[i * k + t];
                        if av.is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            let bv = &b[t * m + j];
                            if !bv.is_zero() {
                                out[i * m + j] += av * bv;
                            }
                        }
                    }
                }
                Mat::from_q(n, m, out)
            }
            _ => unreachable!(),
        })
    }

    /// Matrix product `self * o`; panics on shape or field mismatch.
    pub fn matmul(&self, o: &Mat) -> Mat {
        self.try_matmul(o).unwrap_or_else(|e| panic!("{e}"))
    }

    fn zip(&self, o: &Mat, sign: bool) -> Result<Mat, LinalgError> {
        self.check_field(o)?;
        if self.rows != o.rows || self.cols != o.cols {
            return Err(LinalgError::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(match (&self.data, &o.data, self.field) {
            (Data::Fp(a), Data::Fp(b), Field::Fp(p)) => {
                let v = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| {
                        let y = if sign { *y as u64 } else { (p as u64 - *y as u64) % p as u64 };
                        ((*x as u64 + y) % p as u64) as u32
                    })
                    .collect();
                Mat::from_fp(p, self.rows, self.cols, v)
            }
            (Data::Q(a), Data::Q(b), _) => {
                let v = a.iter().zip(b).map(|(x, y)| if sign { x + y } else { x - y }).collect();
                Mat::from_q(self.rows, self.cols, v)
            }
            _ => unreachable!(),
        })
    }

    pub fn try_add(&self, o: &Mat) -> Result<Mat, LinalgError> {
        self.zip(o, true)
    }
    pub fn add(&self, o: &Mat) -> Mat {
        self.zip(o, true).unwrap_or_else(|e| panic!("{e}"))
    }
    pub fn sub(&self, o: &Mat) -> Mat {
        self.zip(o, false).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn neg(&self) -> Mat {
        self.scale(&-&self.field.one())
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        assert_eq!(s.field(), self.field, "field mismatch");
        match (&self.data, s) {
            (Data::Fp(a), Scalar::Fp { v, p }) => {
                let v = a.iter().map(|x| ((*x as u64 * *v as u64) % *p as u64) as u32).collect();
                Mat::from_fp(*p, self.rows, self.cols, v)
            }
            (Data::Q(a), Scalar::Q(r)) => Mat::from_q(self.rows, self.cols, a.iter().map(|x| x * r).collect()),
            _ => unreachable!(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let (r, c) = (self.rows, self.cols);
        match &self.data {
            Data::Fp(a) => {
                let mut v = vec![0u32; r * c];
                for i in 0..r {
                    for j in 0..c {
                        v[j * r + i] = a[i * c + j];
                    }
                }
                Mat::from_fp(self.fp_modulus(), c, r, v)
            }
            Data::Q(a) => {
                let mut v = vec![BigRational::zero(); r * c];
                for i in 0..r {
                    for j in 0..c {
                        v[j * r + i] = a[i * c + j].clone();
                    }
                }
                Mat::from_q(c, r, v)
            }
        }
    }

    pub(crate) fn fp_modulus(&self) -> u32 {
        match self.field {
            Field::Fp(p) => p,
            Field::Q => 0,
        }
    }

    /// Sub-block `rows r0..r1`, `cols c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        let rows: Vec<usize> = (r0..r1).collect();
        let cols: Vec<usize> = (c0..c1).collect();
        self.select(&rows, &cols)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut m = Mat::zero(self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if !self.entry_is_zero(i, j) {
                    m.set(a, b, &self.get(i, j));
                }
            }
        }
        m
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn col(&self, j: usize) -> Mat {
        self.select_cols(&[j])
    }

    /// Write `b` into `self` with top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, b: &Mat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, &b.get(i, j));
            }
        }
    }

    pub fn hstack(parts: &[&Mat]) -> Mat {
        assert!(!parts.is_empty());
        let r = parts[0].rows;
        let c: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zero(parts[0].field, r, c);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, r, "hstack row mismatch");
            out.put(0, off, m);
            off += m.cols;
        }
        out
    }

    /// `hstack` that accepts an empty list.
    pub fn from_cols(field: Field, rows: usize, parts: &[Mat]) -> Mat {
        if parts.is_empty() {
            return Mat::zero(field, rows, 0);
        }
        Mat::hstack(&parts.iter().collect::<Vec<_>>())
    }

    /// `vstack` that accepts an empty list.
    pub fn from_rows_of(field: Field, cols: usize, parts: &[Mat]) -> Mat {
        if parts.is_empty() {
            return Mat::zero(field, 0, cols);
        }
        Mat::vstack(&parts.iter().collect::<Vec<_>>())
    }

    pub fn vstack(parts: &[&Mat]) -> Mat {
        assert!(!parts.is_empty());
        let c = parts[0].cols;
        let r: usize = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zero(parts[0].field, r, c);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.cols, c, "vstack column mismatch");
            out.put(off, 0, m);
            off += m.rows;
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Mat) -> Mat {
        Mat::block_diag(&[self, o])
    }

    pub fn block_diag(parts: &[&Mat]) -> Mat {
        let field = parts[0].field;
        let r: usize = parts.iter().map(|m| m.rows).sum();
        let c: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zero(field, r, c);
        let (mut ro, mut co) = (0, 0);
        for m in parts {
            out.put(ro, co, m);
            ro += m.rows;
            co += m.cols;
        }
        out
    }

    /// Kronecker product: `(a ⊗ b)[(i,k),(j,l)] = a[i,j] b[k,l]`, pairs ordered lexicographically.
    pub fn tensor_k(&self, o: &Mat) -> Mat {
        assert_eq!(self.field, o.field, "field mismatch");
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut out = Mat::zero(self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.entry_is_zero(i, j) {
                    continue;
                }
                let a = self.get(i, j);
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        if !o.entry_is_zero(k, l) {
                            out.set(i * o.rows + k, j * o.cols + l, &(&a * &o.get(k, l)));
                        }
                    }
                }
            }
        }
        out
    }

    /// Flatten row-major into a column vector.
    pub fn vectorize(&self) -> Mat {
        let mut m = self.clone();
        m.rows = self.rows * self.cols;
        m.cols = 1;
        m
    }

    /// Inverse of `vectorize`.
    pub fn reshape(&self, rows: usize, cols: usize) -> Mat {
        assert_eq!(rows * cols, self.rows * self.cols, "reshape size");
        let mut m = self.clone();
        m.rows = rows;
        m.cols = cols;
        m
    }

    pub fn pow(&self, e: u32) -> Mat {
        let mut r = Mat::identity(self.field, self.rows);
        for _ in 0..e {
            r = r.matmul(self);
        }
        r
    }

    pub fn trace(&self) -> Scalar {
        let mut t = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            t = &t + &self.get(i, i);
        }
        t
    }

    /// Linear combination `Σ c_i m_i` of equally-shaped matrices.
    pub fn lin_comb(field: Field, rows: usize, cols: usize, terms: &[(Scalar, &Mat)]) -> Mat {
        let mut out = Mat::zero(field, rows, cols);
        for (c, m) in terms {
            if !c.is_zero() {
                out = out.add(&m.scale(c));
            }
        }
        out
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
