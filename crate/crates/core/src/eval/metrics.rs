use serde::Serialize;

use crate::error::EvalError;
use crate::scalar::Scalar;

/// Document-level confusion counts for one binary label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn from_labels(gold: &[bool], pred: &[bool]) -> Result<Self, EvalError> {
        if gold.len() != pred.len() {
            return Err(EvalError::LengthMismatch {
                left: gold.len(),
                right: pred.len(),
            });
        }
        let mut c = Confusion::default();
        for (&g, &p) in gold.iter().zip(pred) {
            c.add(g, p);
        }
        Ok(c)
    }

    pub fn add(&mut self, gold: bool, pred: bool) {
        match (gold, pred) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (true, false) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn gold_positives(&self) -> usize {
        self.tp + self.fn_
    }

    /// Precision, recall and F1, each `0` when its denominator is `0`.
    pub fn scores<T: Scalar>(&self) -> Prf<T> {
        let precision = T::ratio(self.tp, self.tp + self.fp);
        let recall = T::ratio(self.tp, self.tp + self.fn_);
        let two = T::one() + T::one();
        let f = if precision + recall > T::zero() {
            two * precision * recall / (precision + recall)
        } else {
            T::zero()
        };
        Prf { precision, recall, f }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Prf<T> {
    pub precision: T,
    pub recall: T,
    pub f: T,
}

impl<T: Scalar> Prf<T> {
    /// Unweighted mean; zeros for an empty input.
    pub fn mean<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Prf<T>>,
    {
        let mut n = 0;
        let mut sum = Prf::<T>::default();
        for p in items {
            sum.precision = sum.precision + p.precision;
            sum.recall = sum.recall + p.recall;
            sum.f = sum.f + p.f;
            n += 1;
        }
        if n == 0 {
            return sum;
        }
        let n = T::from_count(n);
        Prf {
            precision: sum.precision / n,
            recall: sum.recall / n,
            f: sum.f / n,
        }
    }
}

/// Precision, recall and F1 of one binary label.
pub fn score_binary<T: Scalar>(gold: &[bool], pred: &[bool]) -> Result<Prf<T>, EvalError> {
    Ok(Confusion::from_labels(gold, pred)?.scores())
}
