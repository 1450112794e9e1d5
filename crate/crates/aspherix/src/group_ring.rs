//! Exact arithmetic in R[G] and in matrices over R[G].
//!
//! Supported group models are exactly those with canonical normal forms
//! that need no word-problem solver: free groups (reduced words) and
//! finitely generated abelian groups (exponent vectors with eager torsion
//! reduction). Two elements are equal iff their normal forms are identical,
//! which is what the trace and the idempotency test rely on.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{Scalar, ScalarKind, ScalarParts};
use crate::smith::IntMat;
use crate::words::{render_word, Letter, Word, WordParser};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupRingError {
    #[error("operands live over different group models")]
    ModelMismatch,
    #[error("matrix shapes {0}x{1} and {2}x{3} are incompatible")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("operation requires a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("torsion orders must be positive and form a divisibility chain")]
    BadTorsion,
    #[error("element is not a valid normal form for the model: {0}")]
    BadElement(String),
}

/// A group with a canonical normal form for its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupModel {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    Abelian { rank: usize, torsion: Vec<u64> },
}

impl GroupModel {
    pub fn free(rank: usize) -> Self {
        GroupModel::Free { rank }
    }

    pub fn free_abelian(rank: usize) -> Self {
        GroupModel::FreeAbelian { rank }
    }

    /// Abelian model Z^rank + Z/d1 + ... with d1 | d2 | ... required.
    /// An empty torsion list normalizes to the free-abelian model.
    pub fn abelian(rank: usize, torsion: Vec<u64>) -> Result<Self, GroupRingError> {
        if torsion.is_empty() {
            return Ok(GroupModel::FreeAbelian { rank });
        }
        for w in torsion.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(GroupRingError::BadTorsion);
            }
        }
        if torsion.contains(&0) {
            return Err(GroupRingError::BadTorsion);
        }
        Ok(GroupModel::Abelian { rank, torsion })
    }

    /// Number of generating coordinates an element of this model carries.
    pub fn arity(&self) -> usize {
        match self {
            GroupModel::Free { rank } | GroupModel::FreeAbelian { rank } => *rank,
            GroupModel::Abelian { rank, torsion } => rank + torsion.len(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self, GroupModel::Free { rank } if *rank > 1)
    }

    pub fn identity(&self) -> GroupElem {
        match self {
            GroupModel::Free { .. } => GroupElem::Word(Word::empty()),
            _ => GroupElem::Exps(vec![0; self.arity()]),
        }
    }

    fn reduce_exps(&self, mut exps: Vec<i64>) -> GroupElem {
        if let GroupModel::Abelian { rank, torsion } = self {
            for (i, d) in torsion.iter().enumerate() {
                let d = *d as i64;
                exps[rank + i] = exps[rank + i].rem_euclid(d);
            }
        }
        GroupElem::Exps(exps)
    }

    pub fn mul(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        match (self, a, b) {
            (GroupModel::Free { .. }, GroupElem::Word(x), GroupElem::Word(y)) => {
                GroupElem::Word(x.concat(y))
            }
            (_, GroupElem::Exps(x), GroupElem::Exps(y)) => {
                self.reduce_exps(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            _ => panic!("element representation does not match the model"),
        }
    }

    pub fn inverse(&self, a: &GroupElem) -> GroupElem {
        match (self, a) {
            (GroupModel::Free { .. }, GroupElem::Word(x)) => GroupElem::Word(x.inverse()),
            (_, GroupElem::Exps(x)) => self.reduce_exps(x.iter().map(|p| -p).collect()),
            _ => panic!("element representation does not match the model"),
        }
    }

    pub fn generator(&self, i: usize) -> GroupElem {
        assert!(i < self.arity(), "generator index out of range");
        match self {
            GroupModel::Free { .. } => GroupElem::Word(Word::generator(i)),
            _ => {
                let mut exps = vec![0; self.arity()];
                exps[i] = 1;
                self.reduce_exps(exps)
            }
        }
    }

    /// Image of a free word under the coordinatewise map that sends the
    /// i-th free generator to the i-th generator of this model.
    pub fn elem_from_word(&self, w: &Word) -> GroupElem {
        match self {
            GroupModel::Free { .. } => GroupElem::Word(w.clone()),
            _ => {
                let mut exps = vec![0i64; self.arity()];
                for l in w.letters() {
                    exps[l.gen] += l.sign();
                }
                self.reduce_exps(exps)
            }
        }
    }

    pub fn validate_elem(&self, e: &GroupElem) -> Result<(), GroupRingError> {
        match (self, e) {
            (GroupModel::Free { rank }, GroupElem::Word(w)) => {
                let reduced = Word::reduce(w.letters().iter().copied());
                if &reduced != w {
                    return Err(GroupRingError::BadElement("word not freely reduced".into()));
                }
                if let Some(g) = w.max_gen() {
                    if g >= *rank {
                        return Err(GroupRingError::BadElement(format!(
                            "generator index {g} exceeds rank {rank}"
                        )));
                    }
                }
                Ok(())
            }
            (GroupModel::FreeAbelian { rank }, GroupElem::Exps(x)) => {
                if x.len() != *rank {
                    return Err(GroupRingError::BadElement("exponent arity mismatch".into()));
                }
                Ok(())
            }
            (GroupModel::Abelian { rank, torsion }, GroupElem::Exps(x)) => {
                if x.len() != rank + torsion.len() {
                    return Err(GroupRingError::BadElement("exponent arity mismatch".into()));
                }
                for (i, d) in torsion.iter().enumerate() {
                    let v = x[rank + i];
                    if v < 0 || v >= *d as i64 {
                        return Err(GroupRingError::BadElement(format!(
                            "torsion exponent {v} outside [0, {d})"
                        )));
                    }
                }
                Ok(())
            }
            _ => Err(GroupRingError::BadElement(
                "element representation does not match the model".into(),
            )),
        }
    }
}

/// Canonical normal form of a group element: a reduced word for free
/// models, an exponent vector for abelian ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElem {
    Word(Word),
    Exps(Vec<i64>),
}

impl GroupElem {
    pub fn is_identity(&self) -> bool {
        match self {
            GroupElem::Word(w) => w.is_empty(),
            GroupElem::Exps(x) => x.iter().all(|&e| e == 0),
        }
    }
}

/// A finite formal sum of group elements with nonzero exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement<S: Scalar> {
    model: GroupModel,
    terms: BTreeMap<GroupElem, S>,
}

impl<S: Scalar> GroupRingElement<S> {
    pub fn zero(model: GroupModel) -> Self {
        GroupRingElement {
            model,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(model: GroupModel) -> Self {
        let id = model.identity();
        Self::monomial(model, id, S::one())
    }

    pub fn monomial(model: GroupModel, elem: GroupElem, coeff: S) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(elem, coeff);
        }
        GroupRingElement { model, terms }
    }

    /// The group element g as a ring element with coefficient 1.
    pub fn group_elem(model: GroupModel, elem: GroupElem) -> Self {
        Self::monomial(model, elem, S::one())
    }

    pub fn from_terms(
        model: GroupModel,
        terms: impl IntoIterator<Item = (GroupElem, S)>,
    ) -> Result<Self, GroupRingError> {
        let mut out = Self::zero(model);
        for (elem, coeff) in terms {
            out.model.validate_elem(&elem)?;
            out.insert(elem, coeff);
        }
        Ok(out)
    }

    fn insert(&mut self, elem: GroupElem, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&elem) {
            Some(existing) => {
                let sum = existing + coeff;
                if !sum.is_zero() {
                    self.terms.insert(elem, sum);
                }
            }
            None => {
                self.terms.insert(elem, coeff);
            }
        }
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElem, &S)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, elem: &GroupElem) -> S {
        self.terms.get(elem).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of the group identity.
    pub fn identity_coeff(&self) -> S {
        self.coeff(&self.model.identity())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GroupRingError> {
        if self.model != other.model {
            return Err(GroupRingError::ModelMismatch);
        }
        let mut out = self.clone();
        for (elem, coeff) in &other.terms {
            out.insert(elem.clone(), coeff.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.checked_add(&other.clone().negate())
    }

    /// Convolution product through the model's normal form.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, GroupRingError> {
        if self.model != other.model {
            return Err(GroupRingError::ModelMismatch);
        }
        let mut out = Self::zero(self.model.clone());
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.insert(self.model.mul(g, h), a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    pub fn negate(mut self) -> Self {
        for coeff in self.terms.values_mut() {
            *coeff = -coeff.clone();
        }
        self
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.model.clone());
        for (elem, coeff) in &self.terms {
            out.insert(elem.clone(), coeff.clone() * s.clone());
        }
        out
    }

    /// x* = sum of conj(coeff) g^-1 over the terms of x.
    pub fn involute(&self) -> Self {
        let mut out = Self::zero(self.model.clone());
        for (elem, coeff) in &self.terms {
            out.insert(self.model.inverse(elem), coeff.conjugate());
        }
        out
    }

    /// Augmentation: the sum of all coefficients.
    pub fn augment(&self) -> S {
        self.terms
            .values()
            .fold(S::zero(), |acc, c| acc + c.clone())
    }

    /// Pushes a free-model element through the coordinatewise map onto
    /// another model (the i-th generator goes to the i-th generator). The
    /// target may have larger arity, which embeds a free model into a
    /// bigger one.
    pub fn project_to(&self, target: &GroupModel) -> Result<Self, GroupRingError> {
        if self.model.arity() > target.arity() {
            return Err(GroupRingError::ModelMismatch);
        }
        let mut out = Self::zero(target.clone());
        for (elem, coeff) in &self.terms {
            let image = match elem {
                GroupElem::Word(w) => target.elem_from_word(w),
                GroupElem::Exps(_) => {
                    if &self.model == target {
                        elem.clone()
                    } else {
                        return Err(GroupRingError::ModelMismatch);
                    }
                }
            };
            out.insert(image, coeff.clone());
        }
        Ok(out)
    }
}

macro_rules! impl_elem_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<S: Scalar> std::ops::$trait for &GroupRingElement<S> {
            type Output = GroupRingElement<S>;
            fn $method(self, rhs: &GroupRingElement<S>) -> GroupRingElement<S> {
                self.$checked(rhs).expect("group model mismatch")
            }
        }
        impl<S: Scalar> std::ops::$trait for GroupRingElement<S> {
            type Output = GroupRingElement<S>;
            fn $method(self, rhs: GroupRingElement<S>) -> GroupRingElement<S> {
                (&self).$method(&rhs)
            }
        }
        impl<S: Scalar> std::ops::$trait<&GroupRingElement<S>> for GroupRingElement<S> {
            type Output = GroupRingElement<S>;
            fn $method(self, rhs: &GroupRingElement<S>) -> GroupRingElement<S> {
                (&self).$method(rhs)
            }
        }
        impl<S: Scalar> std::ops::$trait<GroupRingElement<S>> for &GroupRingElement<S> {
            type Output = GroupRingElement<S>;
            fn $method(self, rhs: GroupRingElement<S>) -> GroupRingElement<S> {
                self.$method(&rhs)
            }
        }
    };
}

impl_elem_binop!(Add, add, checked_add);
impl_elem_binop!(Sub, sub, checked_sub);
impl_elem_binop!(Mul, mul, checked_mul);

impl<S: Scalar> std::ops::Neg for GroupRingElement<S> {
    type Output = GroupRingElement<S>;
    fn neg(self) -> GroupRingElement<S> {
        self.negate()
    }
}

/// Dense rectangular matrix over a group ring; all entries share one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingMatrix<S: Scalar> {
    model: GroupModel,
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement<S>>,
}

impl<S: Scalar> GroupRingMatrix<S> {
    pub fn zero(model: GroupModel, rows: usize, cols: usize) -> Self {
        let entries = (0..rows * cols)
            .map(|_| GroupRingElement::zero(model.clone()))
            .collect();
        GroupRingMatrix {
            model,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(model: GroupModel, n: usize) -> Self {
        let mut m = Self::zero(model.clone(), n, n);
        for i in 0..n {
            m.set(i, i, GroupRingElement::one(model.clone()));
        }
        m
    }

    pub fn from_entries(
        model: GroupModel,
        rows: usize,
        cols: usize,
        entries: Vec<GroupRingElement<S>>,
    ) -> Result<Self, GroupRingError> {
        if entries.len() != rows * cols {
            return Err(GroupRingError::ShapeMismatch(rows, cols, entries.len(), 1));
        }
        if entries.iter().any(|e| e.model() != &model) {
            return Err(GroupRingError::ModelMismatch);
        }
        Ok(GroupRingMatrix {
            model,
            rows,
            cols,
            entries,
        })
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
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

    pub fn get(&self, r: usize, c: usize) -> &GroupRingElement<S> {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: GroupRingElement<S>) {
        assert!(value.model() == &self.model, "group model mismatch");
        self.entries[r * self.cols + c] = value;
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GroupRingError> {
        if self.model != other.model {
            return Err(GroupRingError::ModelMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(GroupRingError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_, _>>()?;
        Ok(GroupRingMatrix {
            model: self.model.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.checked_add(&other.clone().negate())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, GroupRingError> {
        if self.model != other.model {
            return Err(GroupRingError::ModelMismatch);
        }
        if self.cols != other.rows {
            return Err(GroupRingError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = Self::zero(self.model.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GroupRingElement::zero(self.model.clone());
                for k in 0..self.cols {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn negate(mut self) -> Self {
        for e in &mut self.entries {
            *e = e.clone().negate();
        }
        self
    }

    pub fn scale(&self, s: &S) -> Self {
        let entries = self.entries.iter().map(|e| e.scale(s)).collect();
        GroupRingMatrix {
            model: self.model.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Matrix involution: transpose, conjugate coefficients, invert group
    /// elements.
    pub fn involute(&self) -> Self {
        let mut out = Self::zero(self.model.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).involute());
            }
        }
        out
    }

    /// Entrywise augmentation, as a dense row-major grid of scalars.
    pub fn augment_entries(&self) -> Vec<S> {
        self.entries.iter().map(|e| e.augment()).collect()
    }

    /// t(M): the sum along the diagonal of the coefficients of the group
    /// identity.
    pub fn trace_t(&self) -> Result<S, GroupRingError> {
        if !self.is_square() {
            return Err(GroupRingError::NotSquare(self.rows, self.cols));
        }
        let mut acc = S::zero();
        for i in 0..self.rows {
            acc = acc + self.get(i, i).identity_coeff();
        }
        Ok(acc)
    }

    /// Full augmented trace: the sum over every diagonal coefficient of
    /// every group element.
    pub fn trace_augmented(&self) -> Result<S, GroupRingError> {
        if !self.is_square() {
            return Err(GroupRingError::NotSquare(self.rows, self.cols));
        }
        let mut acc = S::zero();
        for i in 0..self.rows {
            acc = acc + self.get(i, i).augment();
        }
        Ok(acc)
    }

    /// Hermitian pairing <x, y> = t(x y*).
    pub fn hermitian_pair(&self, other: &Self) -> Result<S, GroupRingError> {
        if self.model != other.model {
            return Err(GroupRingError::ModelMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(GroupRingError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        self.checked_mul(&other.involute())?.trace_t()
    }

    /// Exact test for E * E = E.
    pub fn is_idempotent(&self) -> Result<bool, GroupRingError> {
        if !self.is_square() {
            return Err(GroupRingError::NotSquare(self.rows, self.cols));
        }
        Ok(self.checked_mul(self)? == *self)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, GroupRingError> {
        if self.model != other.model {
            return Err(GroupRingError::ModelMismatch);
        }
        let mut out = Self::zero(
            self.model.clone(),
            self.rows + other.rows,
            self.cols + other.cols,
        );
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn project_to(&self, target: &GroupModel) -> Result<Self, GroupRingError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.project_to(target))
            .collect::<Result<_, _>>()?;
        Ok(GroupRingMatrix {
            model: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }
}

impl GroupRingMatrix<BigInt> {
    /// Entrywise augmentation into an integer matrix.
    pub fn augmented(&self) -> IntMat {
        IntMat::from_fn(self.rows, self.cols, |r, c| self.get(r, c).augment())
    }
}

// ---------------------------------------------------------------------------
// JSON wire format
//
// {"model": {"kind": ..., "rank": ..., ...}, "scalar": "int"|"gaussian",
//  "rows": r, "cols": c, "entries": [[ [ [nf, num, den?, imag?], ... ], ... ]]}
//
// Free-group normal forms are words in the presentation word syntax;
// abelian normal forms are exponent vectors. Numbers are emitted as JSON
// numbers when they fit in i64 and as decimal strings otherwise; both are
// accepted on input.
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum MatrixJsonError {
    #[error("invalid matrix JSON: {0}")]
    Malformed(String),
    #[error("invalid scalar value: {0}")]
    Scalar(#[from] crate::scalar::ScalarError),
    #[error(transparent)]
    Ring(#[from] GroupRingError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn bigint_to_value(n: &BigInt) -> serde_json::Value {
    crate::jsonnum::bigint_to_value(n)
}

fn value_to_bigint(v: &serde_json::Value) -> Result<BigInt, MatrixJsonError> {
    crate::jsonnum::value_to_bigint(v).map_err(MatrixJsonError::Malformed)
}

/// Default generator names for standalone matrices: a..z, then x26, x27, ...
pub fn default_names(arity: usize) -> Vec<String> {
    (0..arity)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

pub fn model_to_json(model: &GroupModel, names: &[String]) -> serde_json::Value {
    match model {
        GroupModel::Free { rank } => serde_json::json!({
            "kind": "free",
            "rank": rank,
            "names": names,
        }),
        GroupModel::FreeAbelian { rank } => serde_json::json!({
            "kind": "free_abelian",
            "rank": rank,
        }),
        GroupModel::Abelian { rank, torsion } => serde_json::json!({
            "kind": "abelian",
            "rank": rank,
            "torsion": torsion,
        }),
    }
}

/// Parses a model object; returns the model and the generator names to use
/// for word syntax (file-provided or defaults).
pub fn model_from_json(
    v: &serde_json::Value,
) -> Result<(GroupModel, Vec<String>), MatrixJsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| MatrixJsonError::Malformed("model must be an object".into()))?;
    let kind = obj
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| MatrixJsonError::Malformed("model.kind missing".into()))?;
    let rank = obj
        .get("rank")
        .and_then(|r| r.as_u64())
        .ok_or_else(|| MatrixJsonError::Malformed("model.rank missing".into()))?
        as usize;
    let model = match kind {
        "free" => GroupModel::free(rank),
        "free_abelian" => GroupModel::free_abelian(rank),
        "abelian" => {
            let torsion = match obj.get("torsion") {
                Some(t) => t
                    .as_array()
                    .ok_or_else(|| {
                        MatrixJsonError::Malformed("model.torsion must be an array".into())
                    })?
                    .iter()
                    .map(|d| {
                        d.as_u64().ok_or_else(|| {
                            MatrixJsonError::Malformed("torsion orders must be integers".into())
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => Vec::new(),
            };
            GroupModel::abelian(rank, torsion)?
        }
        other => {
            return Err(MatrixJsonError::Malformed(format!(
                "unknown model kind `{other}`"
            )))
        }
    };
    let names = match obj.get("names") {
        Some(ns) => {
            let names: Vec<String> = ns
                .as_array()
                .ok_or_else(|| MatrixJsonError::Malformed("model.names must be an array".into()))?
                .iter()
                .map(|n| {
                    n.as_str().map(|s| s.to_string()).ok_or_else(|| {
                        MatrixJsonError::Malformed("generator names must be strings".into())
                    })
                })
                .collect::<Result<_, _>>()?;
            if names.len() != model.arity() {
                return Err(MatrixJsonError::Malformed(
                    "model.names length does not match the model arity".into(),
                ));
            }
            names
        }
        None => default_names(model.arity()),
    };
    Ok((model, names))
}

fn elem_to_json(elem: &GroupElem, names: &[String]) -> serde_json::Value {
    match elem {
        GroupElem::Word(w) => serde_json::Value::from(render_word(w, names)),
        GroupElem::Exps(x) => serde_json::Value::from(x.clone()),
    }
}

fn elem_from_json(
    v: &serde_json::Value,
    model: &GroupModel,
    names: &[String],
) -> Result<GroupElem, MatrixJsonError> {
    match (model, v) {
        (GroupModel::Free { .. }, serde_json::Value::String(s)) => {
            let parser = WordParser::new(names);
            let w = parser
                .parse_word(s)
                .map_err(|e| MatrixJsonError::Malformed(format!("bad word `{s}`: {e}")))?;
            Ok(GroupElem::Word(w))
        }
        (GroupModel::Free { .. }, _) => Err(MatrixJsonError::Malformed(
            "free-model normal forms must be word strings".into(),
        )),
        (_, serde_json::Value::Array(xs)) => {
            let exps = xs
                .iter()
                .map(|x| {
                    x.as_i64().ok_or_else(|| {
                        MatrixJsonError::Malformed("exponents must be integers".into())
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let elem = GroupElem::Exps(exps);
            model.validate_elem(&elem)?;
            Ok(elem)
        }
        _ => Err(MatrixJsonError::Malformed(
            "abelian normal forms must be exponent arrays".into(),
        )),
    }
}

fn term_to_json<S: Scalar>(elem: &GroupElem, coeff: &S, names: &[String]) -> serde_json::Value {
    let parts = coeff.to_parts();
    let mut arr = vec![elem_to_json(elem, names), bigint_to_value(&parts.num)];
    if !parts.den.is_one() || !parts.im.is_zero() {
        arr.push(bigint_to_value(&parts.den));
    }
    if !parts.im.is_zero() {
        arr.push(bigint_to_value(&parts.im));
    }
    serde_json::Value::Array(arr)
}

fn term_from_json<S: Scalar>(
    v: &serde_json::Value,
    model: &GroupModel,
    names: &[String],
) -> Result<(GroupElem, S), MatrixJsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| MatrixJsonError::Malformed("term must be an array".into()))?;
    if arr.len() < 2 || arr.len() > 4 {
        return Err(MatrixJsonError::Malformed(
            "term must be [normal-form, num, den?, imag?]".into(),
        ));
    }
    let elem = elem_from_json(&arr[0], model, names)?;
    let num = value_to_bigint(&arr[1])?;
    let den = if arr.len() >= 3 {
        value_to_bigint(&arr[2])?
    } else {
        BigInt::one()
    };
    let im = if arr.len() == 4 {
        value_to_bigint(&arr[3])?
    } else {
        BigInt::zero()
    };
    let coeff = S::from_parts(ScalarParts { num, den, im })?;
    Ok((elem, coeff))
}

pub fn matrix_to_json<S: Scalar>(
    m: &GroupRingMatrix<S>,
    names: &[String],
) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let cell: Vec<serde_json::Value> = m
                        .get(r, c)
                        .terms()
                        .map(|(elem, coeff)| term_to_json(elem, coeff, names))
                        .collect();
                    serde_json::Value::Array(cell)
                })
                .collect::<Vec<_>>()
                .into()
        })
        .collect();
    serde_json::json!({
        "model": model_to_json(m.model(), names),
        "scalar": S::KIND.as_str(),
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": entries,
    })
}

pub fn matrix_from_json<S: Scalar>(
    v: &serde_json::Value,
) -> Result<(GroupRingMatrix<S>, Vec<String>), MatrixJsonError> {
    matrix_from_json_impl(v, None)
}

/// Like `matrix_from_json`, but word syntax is parsed against the given
/// generator names; names embedded in the file must agree with them.
pub fn matrix_from_json_named<S: Scalar>(
    v: &serde_json::Value,
    names: &[String],
) -> Result<GroupRingMatrix<S>, MatrixJsonError> {
    matrix_from_json_impl(v, Some(names)).map(|(m, _)| m)
}

fn matrix_from_json_impl<S: Scalar>(
    v: &serde_json::Value,
    override_names: Option<&[String]>,
) -> Result<(GroupRingMatrix<S>, Vec<String>), MatrixJsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| MatrixJsonError::Malformed("matrix must be an object".into()))?;
    if let Some(kind) = obj.get("scalar").and_then(|s| s.as_str()) {
        if kind != S::KIND.as_str() {
            return Err(MatrixJsonError::Malformed(format!(
                "scalar kind `{kind}` does not match expected `{}`",
                S::KIND.as_str()
            )));
        }
    }
    let (model, names) = model_from_json(
        obj.get("model")
            .ok_or_else(|| MatrixJsonError::Malformed("model missing".into()))?,
    )?;
    let names = match override_names {
        Some(ns) => {
            if ns.len() != model.arity() {
                return Err(MatrixJsonError::Malformed(format!(
                    "matrix model has {} generators but {} names were supplied",
                    model.arity(),
                    ns.len()
                )));
            }
            if v["model"].get("names").is_some() && ns != names.as_slice() {
                return Err(MatrixJsonError::Malformed(
                    "generator names in the matrix file do not match the presentation".into(),
                ));
            }
            ns.to_vec()
        }
        None => names,
    };
    let rows = obj
        .get("rows")
        .and_then(|r| r.as_u64())
        .ok_or_else(|| MatrixJsonError::Malformed("rows missing".into()))? as usize;
    let cols = obj
        .get("cols")
        .and_then(|c| c.as_u64())
        .ok_or_else(|| MatrixJsonError::Malformed("cols missing".into()))? as usize;
    let grid = obj
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or_else(|| MatrixJsonError::Malformed("entries missing".into()))?;
    if grid.len() != rows {
        return Err(MatrixJsonError::Malformed(format!(
            "expected {rows} entry rows, found {}",
            grid.len()
        )));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in grid {
        let row = row
            .as_array()
            .ok_or_else(|| MatrixJsonError::Malformed("entry row must be an array".into()))?;
        if row.len() != cols {
            return Err(MatrixJsonError::Malformed(format!(
                "expected {cols} entries per row, found {}",
                row.len()
            )));
        }
        for cell in row {
            let terms = cell
                .as_array()
                .ok_or_else(|| MatrixJsonError::Malformed("cell must be a term array".into()))?
                .iter()
                .map(|t| term_from_json::<S>(t, &model, &names))
                .collect::<Result<Vec<_>, _>>()?;
            entries.push(GroupRingElement::from_terms(model.clone(), terms)?);
        }
    }
    let m = GroupRingMatrix::from_entries(model, rows, cols, entries)?;
    Ok((m, names))
}

/// The scalar kind declared by a matrix JSON document.
pub fn peek_scalar_kind(v: &serde_json::Value) -> ScalarKind {
    match v.get("scalar").and_then(|s| s.as_str()) {
        Some("gaussian") => ScalarKind::Gaussian,
        _ => ScalarKind::Int,
    }
}

/// Shorthand used throughout the tests: a word in a free model as a ring
/// element with coefficient 1.
pub fn free_word_elem<S: Scalar>(model: &GroupModel, letters: &[(usize, i64)]) -> GroupRingElement<S> {
    let w = Word::reduce(
        letters
            .iter()
            .map(|&(g, s)| Letter::new(g, s < 0)),
    );
    GroupRingElement::group_elem(model.clone(), GroupElem::Word(w))
}
