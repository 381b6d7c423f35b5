use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::path::Path;

use crate::error::{read_to_string, LexiconError};
use crate::scalar::Scalar;

/// Word vectors in a flat row-major buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable<T> {
    dim: usize,
    tokens: Vec<String>,
    data: Vec<T>,
    index: HashMap<String, usize>,
}

impl<T: Scalar> EmbeddingTable<T> {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        Self {
            dim,
            tokens: Vec::new(),
            data: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Adds a vector; fails on a duplicate or empty token, a length other
    /// than `dim`, or a non-finite component.
    pub fn insert(&mut self, token: impl Into<String>, vector: &[T]) -> Result<(), String> {
        let token = token.into();
        if token.is_empty() {
            return Err("empty token".into());
        }
        if vector.len() != self.dim {
            return Err(format!("token {token:?} has {} components, expected {}", vector.len(), self.dim));
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(format!("token {token:?} has a non-finite component"));
        }
        if self.index.contains_key(&token) {
            return Err(format!("duplicate token {token:?}"));
        }
        self.index.insert(token.clone(), self.tokens.len());
        self.tokens.push(token);
        self.data.extend_from_slice(vector);
        Ok(())
    }

    pub fn get(&self, token: &str) -> Option<&[T]> {
        self.index.get(token).map(|&i| self.row(i))
    }

    fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[T])> + '_ {
        self.tokens.iter().enumerate().map(|(i, t)| (t.as_str(), self.row(i)))
    }

    /// Parses the plain-text word-vector format: a `count dim` header, then
    /// `token v1 ... vdim` per line.
    pub fn parse(content: &str) -> Result<Self, LexiconError> {
        let bad = |line: usize, reason: String| LexiconError::EmbeddingFormat { line, reason };
        let mut lines = content.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| bad(1, "missing `count dim` header".into()))?;
        let mut fields = header.split_whitespace();
        let count: usize = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| bad(1, "header count is not an integer".into()))?;
        let dim: usize = fields
            .next()
            .and_then(|f| f.parse().ok())
            .filter(|d| *d > 0)
            .ok_or_else(|| bad(1, "header dimension is not a positive integer".into()))?;
        let mut table = Self::new(dim);
        for (i, line) in lines {
            let mut fields = line.split_whitespace();
            let token = fields.next().unwrap_or_default();
            let vector = fields
                .map(|f| f.parse::<T>().map_err(|_| bad(i + 1, format!("bad component {f:?}"))))
                .collect::<Result<Vec<T>, _>>()?;
            table.insert(token, &vector).map_err(|r| bad(i + 1, r))?;
        }
        if table.len() != count {
            return Err(bad(1, format!("header declares {count} vectors, file has {}", table.len())));
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        Self::parse(&read_to_string(path)?)
    }
}

/// Mean vector of the covered tokens of one phrase.
#[derive(Debug, Clone, PartialEq)]
pub struct LexiconVector<T> {
    pub vector: Vec<T>,
    pub covered_tokens: usize,
    pub missing_tokens: Vec<String>,
}

/// Averages the vectors of the phrase tokens present in `emb`.
///
/// Out-of-vocabulary tokens are skipped and reported; the divisor counts
/// covered tokens only.
pub fn lexicon_vector<T: Scalar, S: AsRef<str>>(tokens: &[S], emb: &EmbeddingTable<T>) -> Result<LexiconVector<T>, LexiconError> {
    let mut sum = vec![T::zero(); emb.dim()];
    let mut covered = 0;
    let mut missing = Vec::new();
    for token in tokens {
        match emb.get(token.as_ref()) {
            Some(v) => {
                for (s, x) in sum.iter_mut().zip(v) {
                    *s = *s + *x;
                }
                covered += 1;
            }
            None => missing.push(token.as_ref().to_string()),
        }
    }
    if covered == 0 {
        let phrase: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
        return Err(LexiconError::NoEmbeddingCoverage(format!("{:?}", phrase.join(" "))));
    }
    let n = T::from_count(covered);
    Ok(LexiconVector {
        vector: sum.into_iter().map(|s| s / n).collect(),
        covered_tokens: covered,
        missing_tokens: missing,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor<T> {
    pub token: String,
    pub cosine: T,
}

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt()
}

/// Heap entry ordered so that the worst candidate is the maximum.
struct Ranked<'a, T> {
    cosine: T,
    token: &'a str,
}

impl<T: Scalar> Ord for Ranked<'_, T> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cosine
            .partial_cmp(&self.cosine)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.token.cmp(other.token))
    }
}

impl<T: Scalar> PartialOrd for Ranked<'_, T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> PartialEq for Ranked<'_, T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Ranked<'_, T> {}

/// The `k` tokens outside `exclude` closest to `query` by cosine
/// similarity, best first; equal cosines are ordered by token. Zero vectors
/// have cosine 0 with everything.
pub fn most_similar<T: Scalar>(query: &LexiconVector<T>, emb: &EmbeddingTable<T>, k: usize, exclude: &HashSet<String>) -> Vec<Neighbor<T>> {
    if k == 0 {
        return Vec::new();
    }
    let qnorm = norm(&query.vector);
    let unit: Vec<T> = if qnorm > T::zero() {
        query.vector.iter().map(|x| *x / qnorm).collect()
    } else {
        vec![T::zero(); query.vector.len()]
    };
    let mut heap: BinaryHeap<Ranked<'_, T>> = BinaryHeap::with_capacity(k + 1);
    for (token, v) in emb.iter() {
        if exclude.contains(token) {
            continue;
        }
        let vnorm = norm(v);
        let cosine = if vnorm > T::zero() {
            unit.iter().zip(v).fold(T::zero(), |acc, (q, x)| acc + *q * (*x / vnorm))
        } else {
            T::zero()
        };
        heap.push(Ranked { cosine, token });
        if heap.len() > k {
            heap.pop();
        }
    }
    heap.into_sorted_vec()
        .into_iter()
        .map(|r| Neighbor {
            token: r.token.to_string(),
            cosine: r.cosine,
        })
        .collect()
}
