//! Verdicts and witnesses shared by every checker.

use serde::Serialize;

/// A concrete failing configuration. `points` and `sets` are point indices
/// of the geometry the check ran on; `kind` says how to read them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<Vec<usize>>,
}

impl Witness {
    pub fn new(kind: &str, points: Vec<usize>, sets: Vec<Vec<usize>>) -> Witness {
        Witness {
            kind: kind.to_string(),
            points,
            sets,
        }
    }

    pub fn points(kind: &str, points: Vec<usize>) -> Witness {
        Witness::new(kind, points, Vec::new())
    }

    pub fn sets(kind: &str, sets: Vec<Vec<usize>>) -> Witness {
        Witness::new(kind, Vec::new(), sets)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// False when the check sampled instead of enumerating.
    pub exhaustive: bool,
    /// Number of configurations examined.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass(checked: u64) -> Verdict {
        Verdict {
            holds: true,
            exhaustive: true,
            checked,
            seed: None,
            witness: None,
        }
    }

    pub fn fail(checked: u64, witness: Witness) -> Verdict {
        Verdict {
            holds: false,
            exhaustive: true,
            checked,
            seed: None,
            witness: Some(witness),
        }
    }

    pub fn from_result(checked: u64, witness: Option<Witness>) -> Verdict {
        match witness {
            Some(w) => Verdict::fail(checked, w),
            None => Verdict::pass(checked),
        }
    }

    pub fn sampled(mut self, seed: u64) -> Verdict {
        self.exhaustive = false;
        self.seed = Some(seed);
        self
    }
}
