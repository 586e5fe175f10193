use std::sync::Arc;

use crate::algebra::{hom_space, Algebra, FDModule, ModuleHom};
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;

/// Finite slice `X^lo -> ... -> X^hi` of a cochain complex of modules.
#[derive(Clone, Debug)]
pub struct ComplexWindow {
    pub lo: i64,
    /// `terms[t]` sits in degree `lo + t`.
    pub terms: Vec<FDModule>,
    /// `diffs[t] : terms[t] -> terms[t + 1]`.
    pub diffs: Vec<ModuleHom>,
}

impl ComplexWindow {
    pub fn new(lo: i64, terms: Vec<FDModule>, diffs: Vec<ModuleHom>) -> Result<ComplexWindow> {
        let c = ComplexWindow::new_unchecked(lo, terms, diffs);
        c.validate()?;
        Ok(c)
    }

    pub fn new_unchecked(lo: i64, terms: Vec<FDModule>, diffs: Vec<ModuleHom>) -> ComplexWindow {
        ComplexWindow { lo, terms, diffs }
    }

    /// A single module in degree `deg`.
    pub fn concentrated(x: FDModule, deg: i64) -> ComplexWindow {
        ComplexWindow { lo: deg, terms: vec![x], diffs: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return invalid("empty complex window");
        }
        if self.diffs.len() + 1 != self.terms.len() {
            return invalid("complex window needs one differential per adjacent pair of terms");
        }
        for (t, d) in self.diffs.iter().enumerate() {
            if d.source != self.terms[t] || d.target != self.terms[t + 1] {
                return invalid(format!("differential at degree {} has the wrong ends", self.lo + t as i64));
            }
            if !d.intertwines() {
                return invalid(format!("differential at degree {} is not a module map", self.lo + t as i64));
            }
        }
        for t in 1..self.diffs.len() {
            if !self.diffs[t].mat.matmul(&self.diffs[t - 1].mat).is_zero() {
                return invalid(format!("d^2 != 0 at degree {}", self.lo + t as i64 - 1));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.terms[0].algebra()
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn contains(&self, i: i64) -> bool {
        i >= self.lo && i <= self.hi()
    }

    pub fn term(&self, i: i64) -> &FDModule {
        &self.terms[(i - self.lo) as usize]
    }

    /// `d^i : X^i -> X^{i+1}` for `lo <= i < hi`.
    pub fn diff(&self, i: i64) -> &ModuleHom {
        &self.diffs[(i - self.lo) as usize]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.dim()).collect()
    }

    fn check_interior(&self, i: i64) -> Result<()> {
        if i <= self.lo || i >= self.hi() {
            return Err(Error::Precondition(format!(
                "degree {i} is not interior to the window [{}, {}]",
                self.lo,
                self.hi()
            )));
        }
        Ok(())
    }

    /// `dim ker d^i - rank d^{i-1}` at an interior degree.
    pub fn homology_dim(&self, i: i64) -> Result<usize> {
        self.check_interior(i)?;
        let out = self.diff(i).rank();
        let inc = self.diff(i - 1).rank();
        Ok(self.term(i).dim() - out - inc)
    }

    /// Exact at every interior degree of `[from, to]`.
    pub fn is_exact(&self, from: i64, to: i64) -> Result<bool> {
        for i in from..=to {
            if self.homology_dim(i)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_exact_interior(&self) -> bool {
        (self.lo + 1..self.hi()).all(|i| self.homology_dim(i).map(|h| h == 0).unwrap_or(false))
    }

    /// Ranks of `Hom(d^i, Y)` for all differentials: the dual complex
    /// `Hom(X^{i+1}, Y) -> Hom(X^i, Y)`.
    fn hom_ranks(&self, y: &FDModule) -> Result<(Vec<usize>, Vec<usize>)> {
        let spaces: Vec<_> = self.terms.iter().map(|t| hom_space(t, y)).collect::<Result<_>>()?;
        let dims = spaces.iter().map(|s| s.dim()).collect();
        let ranks = self
            .diffs
            .iter()
            .enumerate()
            .map(|(t, d)| {
                let hs = &spaces[t + 1];
                let cols: Vec<Mat> = hs.basis.iter().map(|h| h.matmul(&d.mat).vectorize()).collect();
                Mat::from_cols(y.field(), y.dim() * d.source.dim(), &cols).rank()
            })
            .collect();
        Ok((dims, ranks))
    }

    /// Cohomology dimensions of `Hom(X, Y)` at interior degrees of the
    /// window, indexed by the degree `i` of the term `X^i`.
    pub fn hom_homology(&self, y: &FDModule) -> Result<Vec<(i64, usize)>> {
        let (dims, ranks) = self.hom_ranks(y)?;
        let mut out = Vec::new();
        for t in 1..self.terms.len().saturating_sub(1) {
            // Hom(X^{t+1},Y) -> Hom(X^t,Y) -> Hom(X^{t-1},Y)
            out.push((self.lo + t as i64, dims[t] - ranks[t] - ranks[t - 1]));
        }
        Ok(out)
    }

    /// Whether `Hom(-, A)` of the window is exact at every interior degree.
    /// All terms must be projective.
    pub fn total_exactness(&self) -> Result<bool> {
        for (t, x) in self.terms.iter().enumerate() {
            if !crate::algebra::is_projective(x)? {
                return Err(Error::Precondition(format!(
                    "term in degree {} is not projective",
                    self.lo + t as i64
                )));
            }
        }
        let reg = FDModule::regular(self.algebra());
        Ok(self.hom_homology(&reg)?.iter().all(|&(_, h)| h == 0))
    }

    /// Sub-window on `[from, to]`.
    pub fn slice(&self, from: i64, to: i64) -> ComplexWindow {
        let a = (from - self.lo) as usize;
        let b = (to - self.lo) as usize;
        ComplexWindow { lo: from, terms: self.terms[a..=b].to_vec(), diffs: self.diffs[a..b].to_vec() }
    }
}

pub fn homology_dim(c: &ComplexWindow, i: i64) -> Result<usize> {
    c.homology_dim(i)
}

pub fn is_exact(c: &ComplexWindow, from: i64, to: i64) -> Result<bool> {
    c.is_exact(from, to)
}

pub fn total_exactness(c: &ComplexWindow) -> Result<bool> {
    c.total_exactness()
}
