//! The catalogue of non-degenerate quadratic forms over GF(q), with
//! evaluation, the associated bilinear form, Gram matrices and sphere counts.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{FieldCtx, FieldElem};

/// Largest `q^n` that [`QuadraticForm::sphere_table`] will enumerate.
pub const SPHERE_ENUMERATION_LIMIT: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("{kind} needs {expected} dimension, got n = {dim}")]
    DimensionParity { kind: FormKind, dim: usize, expected: &'static str },
    #[error("{kind} is only defined for {expected} q, got q = {q}")]
    CharacteristicMismatch { kind: FormKind, q: u32, expected: &'static str },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("vector has length {got}, form has dimension {dim}")]
    LengthMismatch { dim: usize, got: usize },
    #[error("no admissible parameter exists for {0}")]
    NoParameter(FormKind),
    #[error("q^n = {size} exceeds the enumeration limit {limit}")]
    TooLarge { size: u64, limit: u64 },
    #[error("Gram matrices are only defined here for odd q")]
    EvenCharacteristic,
    #[error("coefficient index out of range for dimension {0}")]
    BadTerm(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    /// `2x₁x₂ + … + 2x_{2m−1}x_{2m}` (q odd)
    PlusEven,
    /// `2x₁x₂ + … + 2x_{2m−3}x_{2m−2} + x_{2m−1}² − αx_{2m}²` (q odd)
    MinusEven,
    /// `2x₁x₂ + … + 2x_{2m−1}x_{2m} + x_{2m+1}²` (q odd)
    OddStd,
    /// `2x₁x₂ + … + 2x_{2m−1}x_{2m} + αx_{2m+1}²` (q odd)
    OddPrime,
    /// `x₁x₂ + … + x_{2m−1}x_{2m}` (q even)
    EvenCharPlus,
    /// `x₁x₂ + … + x_{2m−1}² + x_{2m−1}x_{2m} + βx_{2m}²` (q even)
    EvenCharMinus,
    /// `x₁x₂ + … + x_{2m−1}x_{2m} + x_{2m+1}²` (q even)
    EvenCharOddDim,
}

impl FormKind {
    pub const ALL: [FormKind; 7] = [
        FormKind::PlusEven,
        FormKind::MinusEven,
        FormKind::OddStd,
        FormKind::OddPrime,
        FormKind::EvenCharPlus,
        FormKind::EvenCharMinus,
        FormKind::EvenCharOddDim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormKind::PlusEven => "plus_even",
            FormKind::MinusEven => "minus_even",
            FormKind::OddStd => "odd_std",
            FormKind::OddPrime => "odd_prime",
            FormKind::EvenCharPlus => "even_char_plus",
            FormKind::EvenCharMinus => "even_char_minus",
            FormKind::EvenCharOddDim => "even_char_odd_dim",
        }
    }

    pub fn needs_even_dim(self) -> bool {
        matches!(
            self,
            FormKind::PlusEven | FormKind::MinusEven | FormKind::EvenCharPlus | FormKind::EvenCharMinus
        )
    }

    pub fn needs_odd_q(self) -> bool {
        matches!(self, FormKind::PlusEven | FormKind::MinusEven | FormKind::OddStd | FormKind::OddPrime)
    }

    /// The classified kinds that exist for a given `(q parity, dimension)`.
    pub fn classified(odd_q: bool, dim: usize) -> Vec<FormKind> {
        match (odd_q, dim % 2 == 0) {
            (true, true) => vec![FormKind::PlusEven, FormKind::MinusEven],
            (true, false) => vec![FormKind::OddStd, FormKind::OddPrime],
            (false, true) => vec![FormKind::EvenCharPlus, FormKind::EvenCharMinus],
            (false, false) => vec![FormKind::EvenCharOddDim],
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown form kind `{s}`"))
    }
}

/// A quadratic form `Σ c_ij x_i x_j` (i ≤ j), stored as its monomial coefficients.
#[derive(Clone)]
pub struct QuadraticForm {
    ctx: Arc<FieldCtx>,
    dim: usize,
    kind: Option<FormKind>,
    param: Option<FieldElem>,
    /// `(i, j, c)` with `i <= j`; `i == j` is a square term.
    terms: Vec<(usize, usize, FieldElem)>,
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadraticForm")
            .field("q", &self.ctx.q())
            .field("dim", &self.dim)
            .field("kind", &self.kind)
            .field("param", &self.param)
            .field("text", &self.text())
            .finish()
    }
}

pub fn make_form(ctx: Arc<FieldCtx>, kind: FormKind, dim: usize) -> Result<QuadraticForm, FormError> {
    QuadraticForm::new(ctx, kind, dim)
}

impl QuadraticForm {
    pub fn new(ctx: Arc<FieldCtx>, kind: FormKind, dim: usize) -> Result<Self, FormError> {
        if dim < 2 {
            return Err(FormError::DimensionTooSmall(dim));
        }
        if kind.needs_even_dim() != (dim % 2 == 0) {
            let expected = if kind.needs_even_dim() { "an even" } else { "an odd" };
            return Err(FormError::DimensionParity { kind, dim, expected });
        }
        if kind.needs_odd_q() != ctx.is_odd() {
            let expected = if kind.needs_odd_q() { "odd" } else { "even" };
            return Err(FormError::CharacteristicMismatch { kind, q: ctx.q(), expected });
        }
        let one = FieldElem::ONE;
        let two = ctx.from_int(2);
        let pairs = dim / 2;
        let mut terms = Vec::new();
        let mut param = None;
        match kind {
            FormKind::PlusEven | FormKind::OddStd | FormKind::OddPrime => {
                for j in 0..pairs {
                    terms.push((2 * j, 2 * j + 1, two));
                }
                if kind != FormKind::PlusEven {
                    let c = if kind == FormKind::OddPrime {
                        let alpha = ctx.smallest_nonsquare().ok_or(FormError::NoParameter(kind))?;
                        param = Some(alpha);
                        alpha
                    } else {
                        one
                    };
                    terms.push((dim - 1, dim - 1, c));
                }
            }
            FormKind::MinusEven => {
                let alpha = ctx.smallest_nonsquare().ok_or(FormError::NoParameter(kind))?;
                param = Some(alpha);
                for j in 0..pairs - 1 {
                    terms.push((2 * j, 2 * j + 1, two));
                }
                terms.push((dim - 2, dim - 2, one));
                terms.push((dim - 1, dim - 1, ctx.neg(alpha)));
            }
            FormKind::EvenCharPlus | FormKind::EvenCharOddDim => {
                for j in 0..pairs {
                    terms.push((2 * j, 2 * j + 1, one));
                }
                if kind == FormKind::EvenCharOddDim {
                    terms.push((dim - 1, dim - 1, one));
                }
            }
            FormKind::EvenCharMinus => {
                let beta = smallest_artin_schreier_param(&ctx).ok_or(FormError::NoParameter(kind))?;
                param = Some(beta);
                for j in 0..pairs - 1 {
                    terms.push((2 * j, 2 * j + 1, one));
                }
                terms.push((dim - 2, dim - 2, one));
                terms.push((dim - 2, dim - 1, one));
                terms.push((dim - 1, dim - 1, beta));
            }
        }
        Ok(QuadraticForm { ctx, dim, kind: Some(kind), param, terms })
    }

    /// A form from raw monomial coefficients `(i, j, c)`, i ≤ j. Used for
    /// degenerate test forms and anything outside the catalogue.
    pub fn from_terms(
        ctx: Arc<FieldCtx>,
        dim: usize,
        terms: Vec<(usize, usize, FieldElem)>,
    ) -> Result<Self, FormError> {
        if terms.iter().any(|&(i, j, _)| i > j || j >= dim) {
            return Err(FormError::BadTerm(dim));
        }
        Ok(QuadraticForm { ctx, dim, kind: None, param: None, terms })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn kind(&self) -> Option<FormKind> {
        self.kind
    }
    /// α (odd q) or β (even q) where the kind has one.
    pub fn param(&self) -> Option<FieldElem> {
        self.param
    }
    pub fn terms(&self) -> &[(usize, usize, FieldElem)] {
        &self.terms
    }

    /// Evaluation without the length check, for hot loops.
    #[inline]
    pub fn eval_unchecked(&self, x: &[FieldElem]) -> FieldElem {
        let f = &self.ctx;
        self.terms
            .iter()
            .fold(FieldElem::ZERO, |acc, &(i, j, c)| f.add(acc, f.mul(c, f.mul(x[i], x[j]))))
    }

    pub fn eval(&self, x: &[FieldElem]) -> Result<FieldElem, FormError> {
        self.check_len(x)?;
        Ok(self.eval_unchecked(x))
    }

    fn check_len(&self, x: &[FieldElem]) -> Result<(), FormError> {
        if x.len() != self.dim {
            return Err(FormError::LengthMismatch { dim: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// `⟨x, y⟩ = Q(x + y) − Q(x) − Q(y)`, evaluated literally.
    pub fn bilinear(&self, x: &[FieldElem], y: &[FieldElem]) -> Result<FieldElem, FormError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bilinear_unchecked(x, y))
    }

    #[inline]
    pub fn bilinear_unchecked(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        let f = &self.ctx;
        let s: Vec<FieldElem> = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
        f.sub(f.sub(self.eval_unchecked(&s), self.eval_unchecked(x)), self.eval_unchecked(y))
    }

    /// Symmetric `S` with `x S xᵗ = Q(x)`; off-diagonal entries are half the
    /// bilinear values, so this needs odd q.
    pub fn gram_matrix(&self) -> Result<GramMatrix, FormError> {
        if !self.ctx.is_odd() {
            return Err(FormError::EvenCharacteristic);
        }
        let f = &self.ctx;
        let half = f.inv(f.from_int(2)).expect("2 is invertible for odd q");
        let mut s = vec![vec![FieldElem::ZERO; self.dim]; self.dim];
        for &(i, j, c) in &self.terms {
            if i == j {
                s[i][i] = f.add(s[i][i], c);
            } else {
                let h = f.mul(c, half);
                s[i][j] = f.add(s[i][j], h);
                s[j][i] = f.add(s[j][i], h);
            }
        }
        Ok(GramMatrix { ctx: self.ctx.clone(), entries: s })
    }

    /// `rank(S) = dim`, for odd q.
    pub fn is_nondegenerate(&self) -> Result<bool, FormError> {
        Ok(self.gram_matrix()?.rank() == self.dim)
    }

    /// Counts `|{x : Q(x) = a}|` for every `a` by enumerating `GF(q)^n`.
    pub fn sphere_table(&self) -> Result<Vec<u64>, FormError> {
        let q = self.ctx.q() as u64;
        let size = q.checked_pow(self.dim as u32).unwrap_or(u64::MAX);
        if size > SPHERE_ENUMERATION_LIMIT {
            return Err(FormError::TooLarge { size, limit: SPHERE_ENUMERATION_LIMIT });
        }
        let mut counts = vec![0u64; q as usize];
        let mut x = vec![FieldElem::ZERO; self.dim];
        loop {
            counts[self.eval_unchecked(&x).index()] += 1;
            if !next_vector(&mut x, self.ctx.q()) {
                break;
            }
        }
        Ok(counts)
    }

    pub fn sphere_size(&self, a: FieldElem) -> Result<u64, FormError> {
        Ok(self.sphere_table()?[a.index()])
    }

    /// The pair `{q^{n−1} − q^{⌊(n−1)/2⌋}, q^{n−1} + q^{⌊(n−1)/2⌋}}` that the
    /// valency theorem allows for `a ≠ 0`.
    pub fn predicted_nonzero_sizes(&self) -> (u64, u64) {
        let q = self.ctx.q() as u64;
        let n = self.dim as u32;
        let big = q.pow(n - 1);
        let small = q.pow((n - 1) / 2);
        (big - small, big + small)
    }

    /// Human-readable polynomial, e.g. `2x1x2 + x3^2`.
    pub fn text(&self) -> String {
        let mut parts = Vec::new();
        for &(i, j, c) in &self.terms {
            let coef = if c == FieldElem::ONE { String::new() } else { c.to_string() };
            if i == j {
                parts.push(format!("{coef}x{}^2", i + 1));
            } else {
                parts.push(format!("{coef}x{}x{}", i + 1, j + 1));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn summary(&self) -> Result<FormSummary, FormError> {
        let table = self.sphere_table()?;
        let gram = if self.ctx.is_odd() { Some(self.gram_matrix()?) } else { None };
        let (lo, hi) = self.predicted_nonzero_sizes();
        let sphere_table = table
            .iter()
            .enumerate()
            .map(|(a, &count)| {
                let a = FieldElem(a as u32);
                let sign = if a.is_zero() {
                    None
                } else if count == hi {
                    Some(1)
                } else if count == lo {
                    Some(-1)
                } else {
                    Some(0)
                };
                SphereRow {
                    a,
                    a_is_square: self.ctx.is_square(a),
                    count,
                    predicted_sign: sign,
                }
            })
            .collect();
        Ok(FormSummary {
            q: self.ctx.q(),
            dim: self.dim,
            kind: self.kind,
            param: self.param,
            text: self.text(),
            gram: gram.as_ref().map(|g| g.entries.iter().map(|r| r.iter().map(|e| e.0).collect()).collect()),
            gram_rank: gram.as_ref().map(|g| g.rank()),
            predicted_nonzero_sizes: [lo, hi],
            sphere_table,
        })
    }
}

/// Advances `x` to the next vector in lexicographic order (last coordinate
/// fastest). Returns `false` after wrapping back to zero.
pub fn next_vector(x: &mut [FieldElem], q: u32) -> bool {
    for c in x.iter_mut().rev() {
        if c.0 + 1 < q {
            c.0 += 1;
            return true;
        }
        c.0 = 0;
    }
    false
}

/// Smallest β with `t² + t + β` irreducible over GF(q), q even: a quadratic
/// without a root.
fn smallest_artin_schreier_param(ctx: &FieldCtx) -> Option<FieldElem> {
    ctx.elements().find(|&beta| {
        !ctx.elements().any(|t| ctx.add(ctx.add(ctx.mul(t, t), t), beta).is_zero())
    })
}

#[derive(Clone, Debug)]
pub struct GramMatrix {
    ctx: Arc<FieldCtx>,
    entries: Vec<Vec<FieldElem>>,
}

impl GramMatrix {
    pub fn entries(&self) -> &[Vec<FieldElem>] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `x S yᵗ`.
    pub fn apply(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        let f = &self.ctx;
        let mut acc = FieldElem::ZERO;
        for (i, row) in self.entries.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            for (j, &s) in row.iter().enumerate() {
                acc = f.add(acc, f.mul(x[i], f.mul(s, y[j])));
            }
        }
        acc
    }

    /// Rank over GF(q) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        rank_over(&self.ctx, self.entries.clone())
    }
}

pub fn rank_over(f: &FieldCtx, mut m: Vec<Vec<FieldElem>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = f.inv(m[rank][col]).expect("pivot is non-zero");
        for c in 0..cols {
            m[rank][c] = f.mul(m[rank][c], inv);
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col];
                for c in 0..cols {
                    let sub = f.mul(factor, m[rank][c]);
                    m[r][c] = f.sub(m[r][c], sub);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SphereRow {
    pub a: FieldElem,
    pub a_is_square: bool,
    pub count: u64,
    /// +1 / −1 when the count is the upper / lower predicted value, 0 if neither.
    pub predicted_sign: Option<i8>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FormSummary {
    pub q: u32,
    pub dim: usize,
    pub kind: Option<FormKind>,
    pub param: Option<FieldElem>,
    pub text: String,
    pub gram: Option<Vec<Vec<u32>>>,
    pub gram_rank: Option<usize>,
    pub predicted_nonzero_sizes: [u64; 2],
    pub sphere_table: Vec<SphereRow>,
}
