// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::state::CoherentSuperposition;
use super::{amps_close, product_overlap};
use crate::error::{Error, Result};

/// Gram eigenvalues below this are treated as zero when taking square roots.
pub const GRAM_CLIP: f64 = 1e-12;

/// Pairwise overlaps `<k_i|k_j>` of a list of product coherent kets.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(DMatrix<Complex64>);

impl GramMatrix {
    pub fn of(kets: &[Vec<Complex64>]) -> Self {
        let n = kets.len();
        Self(DMatrix::from_fn(n, n, |i, j| product_overlap(&kets[i], &kets[j])))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 0 {
            return Vec::new();
        }
        SymmetricEigen::new(self.0.clone()).eigenvalues.iter().copied().collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Hermitian square root with eigenvalues clipped at [`GRAM_CLIP`].
    pub fn sqrt(&self) -> DMatrix<Complex64> {
        if self.dim() == 0 {
            return self.0.clone();
        }
        let eig = SymmetricEigen::new(self.0.clone());
        let roots = eig
            .eigenvalues
            .map(|l| if l > GRAM_CLIP { Complex64::new(l.sqrt(), 0.0) } else { Complex64::new(0.0, 0.0) });
        let v = &eig.eigenvectors;
        v * DMatrix::from_diagonal(&roots) * v.adjoint()
    }
}

/// `rho = sum_ij coeffs[i, j] |k_i><k_j|` over product coherent kets `k_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonorthogonalDensity {
    kets: Vec<Vec<Complex64>>,
    coeffs: DMatrix<Complex64>,
    gram: GramMatrix,
}

impl NonorthogonalDensity {
    pub fn new(kets: Vec<Vec<Complex64>>, coeffs: DMatrix<Complex64>) -> Result<Self> {
        let n = kets.len();
        if coeffs.nrows() != n || coeffs.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "{} kets but a {}x{} coefficient matrix",
                n,
                coeffs.nrows(),
                coeffs.ncols()
            )));
        }
        if let Some(first) = kets.first() {
            if kets.iter().any(|k| k.len() != first.len()) {
                return Err(Error::ShapeMismatch("kets with different mode counts".into()));
            }
        }
        let gram = GramMatrix::of(&kets);
        Ok(Self { kets, coeffs, gram })
    }

    /// `|s><s|`.
    pub fn pure(s: &CoherentSuperposition) -> Self {
        let all: Vec<usize> = (0..s.n_modes()).collect();
        reduce(s, &all)
    }

    pub fn kets(&self) -> &[Vec<Complex64>] {
        &self.kets
    }

    pub fn coeffs(&self) -> &DMatrix<Complex64> {
        &self.coeffs
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn n_modes(&self) -> usize {
        self.kets.first().map_or(0, Vec::len)
    }

    /// `Tr(rho) = Tr(C G)`.
    pub fn trace(&self) -> f64 {
        self.coeffs.component_mul(&self.gram.0.transpose()).sum().re
    }

    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if !(tr > super::NORM_SQ_FLOOR) {
            return Err(Error::NormTooSmall { norm_sq: tr });
        }
        Ok(Self { kets: self.kets.clone(), coeffs: self.coeffs.map(|x| x / tr), gram: self.gram.clone() })
    }

    /// Nonzero spectrum of `rho`, from the Hermitian matrix
    /// `G^{1/2} C G^{1/2}` (same nonzero eigenvalues as `rho`). Descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.kets.is_empty() {
            return Vec::new();
        }
        let root = self.gram.sqrt();
        let m = &root * &self.coeffs * &root;
        let herm = (&m + m.adjoint()).map(|x| x * 0.5);
        let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `<s|rho|s>` for a state over the same modes.
    pub fn sandwich(&self, s: &CoherentSuperposition) -> Result<f64> {
        if s.n_modes() != self.n_modes() && !self.kets.is_empty() {
            return Err(Error::ModeMismatch { left: self.n_modes(), right: s.n_modes() });
        }
        // v_i = <k_i|s>
        let v: Vec<Complex64> = self
            .kets
            .iter()
            .map(|k| s.terms().iter().map(|t| t.coeff * product_overlap(k, &t.amps)).sum())
            .collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                sum += vi.conj() * self.coeffs[(i, j)] * vj;
            }
        }
        Ok(sum.re)
    }
}

pub(crate) fn reduce(s: &CoherentSuperposition, keep: &[usize]) -> NonorthogonalDensity {
    let traced: Vec<usize> = (0..s.n_modes()).filter(|m| !keep.contains(m)).collect();
    let mut kets: Vec<Vec<Complex64>> = Vec::new();
    let mut index = Vec::with_capacity(s.terms().len());
    for t in s.terms() {
        let k: Vec<Complex64> = keep.iter().map(|&m| t.amps[m]).collect();
        let pos = match kets.iter().position(|e| amps_close(e, &k)) {
            Some(p) => p,
            None => {
                kets.push(k);
                kets.len() - 1
            }
        };
        index.push(pos);
    }
    let n = kets.len();
    let mut coeffs = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (ti, t) in s.terms().iter().enumerate() {
        for (ui, u) in s.terms().iter().enumerate() {
            let env: Complex64 = traced
                .iter()
                .map(|&m| super::overlap(u.amps[m], t.amps[m]))
                .product();
            coeffs[(index[ti], index[ui])] += t.coeff * u.coeff.conj() * env;
        }
    }
    let gram = GramMatrix::of(&kets);
    NonorthogonalDensity { kets, coeffs, gram }
}

impl CoherentSuperposition {
    /// Partial trace over every mode not in `keep`. Kept modes appear in the
    /// order given.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<NonorthogonalDensity> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        for (i, &m) in keep.iter().enumerate() {
            self.check_mode(m)?;
            if keep[..i].contains(&m) {
                return Err(Error::InvalidParameter(format!("mode {m} listed twice")));
            }
        }
        Ok(reduce(self, keep))
    }
}
