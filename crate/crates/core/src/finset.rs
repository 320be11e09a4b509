use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite set of distinct string labels in a fixed order.
///
/// Elements are addressed by their position; the construction order is the
/// canonical order for iteration and serialization. Cloning is cheap.
#[derive(Clone)]
pub struct FinSet {
    inner: Arc<Inner>,
}

struct Inner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl FinSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(FinSet {
            inner: Arc::new(Inner { labels, index }),
        })
    }

    /// The one-element set `{*}`, unit of the cartesian product.
    pub fn unit() -> Self {
        FinSet::new(["*"]).expect("singleton")
    }

    /// `{0, 1, ..., n-1}` labelled by decimal strings.
    pub fn range(n: usize) -> Self {
        FinSet::new((0..n).map(|i| i.to_string())).expect("distinct")
    }

    pub fn len(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.inner.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.inner.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
            set: self.to_string(),
        })
    }

    pub fn contains(&self, label: &str) -> bool {
        self.inner.index.contains_key(label)
    }

    /// Cartesian product; the pair `(i, j)` sits at index `i * other.len() + j`
    /// and is labelled `(x,y)`.
    pub fn product(&self, other: &FinSet) -> FinSet {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for a in self.labels() {
            for b in other.labels() {
                labels.push(format!("({a},{b})"));
            }
        }
        // Parenthesised pairs of distinct labels are distinct.
        FinSet::new(labels).expect("product labels are distinct")
    }

    /// Same size and same labels in the same order.
    pub fn same_as(&self, other: &FinSet) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.labels() == other.labels()
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FinSet {}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(", "))
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<String>::deserialize(deserializer)?;
        FinSet::new(labels).map_err(serde::de::Error::custom)
    }
}
