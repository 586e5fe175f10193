//! Univariate polynomials over the base field, minimal polynomials of
//! matrices and roots in the base field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Field, Mat, Scalar};

/// Coefficients low degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub field: Field,
    pub coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// `x + a`
    pub fn linear(a: Scalar) -> Poly {
        let f = a.field();
        Poly::new(f, vec![a, f.one()])
    }

    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        Poly::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
            .collect();
        Poly::new(self.field, v)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut v = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, v)
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lead().inv().expect("nonzero lead");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * dc);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(self.field, q), Poly::new(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::constant(self.field.one()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Evaluate at a square matrix.
    pub fn eval_mat(&self, m: &Mat) -> Mat {
        let n = m.rows();
        let mut acc = Mat::zero(self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.matmul(m).add(&Mat::identity(self.field, n).scale(c));
        }
        acc
    }

    /// Roots in the base field, without multiplicity, sorted by their
    /// canonical representative.
    pub fn roots(&self) -> Vec<Scalar> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        match self.field {
            Field::Fp(p) => roots_fp(self, p),
            Field::Q => roots_q(self),
        }
    }
}

/// Minimal polynomial of a square matrix, found by detecting the first
/// linear dependency among `I, M, M^2, ...`.
pub fn min_poly(m: &Mat) -> Poly {
    let f = m.field();
    let n = m.rows();
    assert!(m.is_square());
    let mut powers: Vec<Mat> = vec![Mat::identity(f, n).vectorize()];
    let mut cur = Mat::identity(f, n);
    loop {
        cur = cur.matmul(m);
        let v = cur.vectorize();
        let basis: Vec<&Mat> = powers.iter().collect();
        let b = Mat::hstack(&basis);
        if let Some(x) = b.solve(&v).expect("same field") {
            let mut coeffs: Vec<Scalar> = (0..x.rows()).map(|i| -&x.get(i, 0)).collect();
            coeffs.push(f.one());
            return Poly::new(f, coeffs);
        }
        powers.push(v);
    }
}

fn roots_fp(p: &Poly, q: u32) -> Vec<Scalar> {
    let f = p.field;
    if q <= 10_000 {
        return (0..q as u64).map(|i| f.element(i)).filter(|x| p.eval(x).is_zero()).collect();
    }
    // split off the product of distinct linear factors: gcd(p, x^q - x)
    let x = Poly::x(f);
    let g = p.gcd(&x.pow_mod(q as u64, p).sub(&x));
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    split_linear(&g, q, &mut rng, &mut out);
    out.sort_by_key(|s| s.residue());
    out
}

fn split_linear(g: &Poly, q: u32, rng: &mut ChaCha8Rng, out: &mut Vec<Scalar>) {
    let f = g.field;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic();
            out.push(-&m.coeffs[0]);
        }
        Some(_) => loop {
            let a = f.element(rng.gen_range(0..q as u64));
            let h = Poly::linear(a)
                .pow_mod((q as u64 - 1) / 2, g)
                .sub(&Poly::constant(f.one()));
            let d = g.gcd(&h);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && dd < g.degree().unwrap() {
                let other = g.div_rem(&d).0;
                split_linear(&d, q, rng, out);
                split_linear(&other, q, rng, out);
                return;
            }
        },
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

fn roots_q(p: &Poly) -> Vec<Scalar> {
    // clear denominators
    let rats: Vec<BigRational> = p.coeffs.iter().map(|c| c.as_rational().unwrap().clone()).collect();
    let l = rats.iter().fold(BigInt::one(), |a, r| a.lcm(r.denom()));
    let mut ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    let mut out = Vec::new();
    if ints[0].is_zero() {
        out.push(Scalar::Q(BigRational::zero()));
        while ints[0].is_zero() {
            ints.remove(0);
        }
    }
    if ints.len() > 1 {
        let (Some(num), Some(den)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
            return out;
        };
        let mut cands: Vec<BigRational> = Vec::new();
        for a in &num {
            for b in &den {
                let r = BigRational::new(a.clone(), b.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            let s = Scalar::Q(c);
            if p.eval(&s).is_zero() {
                out.push(s);
            }
        }
    }
    out.sort_by(|a, b| a.as_rational().cmp(&b.as_rational()));
    out
}
