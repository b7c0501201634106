use serde::{Deserialize, Serialize};

use super::EvidenceError;

/// Upper bound on frame size so that power sets stay enumerable.
pub const MAX_FRAME_SIZE: usize = 20;

/// An ordered set of distinct event labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    labels: Vec<String>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Frame, EvidenceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_FRAME_SIZE {
            return Err(EvidenceError::BadFrame(format!(
                "got {} labels",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(EvidenceError::BadFrame("empty label".into()));
            }
            if labels[..i].contains(l) {
                return Err(EvidenceError::BadFrame(format!("duplicate label {l:?}")));
            }
        }
        Ok(Frame { labels })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The hypothesis containing every event of the frame.
    pub fn full(&self) -> Hypothesis {
        Hypothesis((1u32 << self.labels.len()) - 1)
    }

    /// Look up a hypothesis by its member labels.
    pub fn hypothesis<S: AsRef<str>>(&self, members: &[S]) -> Result<Hypothesis, EvidenceError> {
        let mut bits = 0u32;
        for m in members {
            let idx = self
                .labels
                .iter()
                .position(|l| l == m.as_ref())
                .ok_or_else(|| EvidenceError::UnknownLabel(m.as_ref().to_owned()))?;
            bits |= 1 << idx;
        }
        Ok(Hypothesis(bits))
    }

    pub fn singleton(&self, index: usize) -> Hypothesis {
        debug_assert!(index < self.labels.len());
        Hypothesis(1 << index)
    }

    /// Member labels of a hypothesis, in frame order.
    pub fn members(&self, h: Hypothesis) -> Vec<&str> {
        (0..self.labels.len())
            .filter(|&i| h.contains(i))
            .map(|i| self.labels[i].as_str())
            .collect()
    }

    /// All subsets of the frame in ascending canonical index order,
    /// starting with the empty set.
    pub fn subsets(&self) -> impl Iterator<Item = Hypothesis> {
        (0..(1u32 << self.labels.len())).map(Hypothesis)
    }

    pub fn singletons(&self) -> impl Iterator<Item = Hypothesis> {
        (0..self.labels.len()).map(|i| Hypothesis(1 << i))
    }
}

/// A subset of a [`Frame`], canonically encoded: bit `i` set means the
/// frame's `i`-th event is a member. Index 0 is the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hypothesis(u32);

impl Hypothesis {
    pub const EMPTY: Hypothesis = Hypothesis(0);

    pub fn from_index(index: u32) -> Hypothesis {
        Hypothesis(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, element: usize) -> bool {
        self.0 & (1 << element) != 0
    }

    pub fn intersection(self, other: Hypothesis) -> Hypothesis {
        Hypothesis(self.0 & other.0)
    }

    pub fn union(self, other: Hypothesis) -> Hypothesis {
        Hypothesis(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Hypothesis) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Hypothesis) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement within the given frame.
    pub fn complement_in(self, frame: &Frame) -> Hypothesis {
        Hypothesis(!self.0 & frame.full().0)
    }
}
