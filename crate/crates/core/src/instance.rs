use crate::error::{Error, Result};

/// A multiset of positive integers: sorted distinct values with multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiset {
    entries: Vec<(u64, u64)>,
}

impl Multiset {
    pub fn new() -> Self {
        Multiset { entries: Vec::new() }
    }

    pub fn from_entries(mut entries: Vec<(u64, u64)>) -> Self {
        entries.retain(|&(_, c)| c > 0);
        entries.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(entries.len());
        for (v, c) in entries {
            match merged.last_mut() {
                Some((lv, lc)) if *lv == v => *lc += c,
                _ => merged.push((v, c)),
            }
        }
        Multiset { entries: merged }
    }

    pub fn from_values(values: &[u64]) -> Self {
        Self::from_entries(values.iter().map(|&v| (v, 1)).collect())
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    /// Total number of occurrences.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_value(&self) -> Option<u64> {
        self.entries.last().map(|&(v, _)| v)
    }

    pub fn sum(&self) -> u64 {
        self.entries.iter().map(|&(v, c)| v * c).sum()
    }

    /// Expand to one value per occurrence, ascending.
    pub fn expand(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &(v, c) in &self.entries {
            for _ in 0..c {
                out.push(v);
            }
        }
        out
    }
}

/// An explicit sub-multiset certifying membership of a value in a sumset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Witness {
    /// (value, count) pairs, sorted by value.
    pub occurrences: Vec<(u64, u64)>,
}

impl Witness {
    pub fn empty() -> Self {
        Witness { occurrences: Vec::new() }
    }

    pub fn single(value: u64, count: u64) -> Self {
        if count == 0 {
            Self::empty()
        } else {
            Witness { occurrences: vec![(value, count)] }
        }
    }

    pub fn merge(mut self, other: Witness) -> Witness {
        self.occurrences.extend(other.occurrences);
        self.occurrences.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(self.occurrences.len());
        for (v, c) in self.occurrences {
            match merged.last_mut() {
                Some((lv, lc)) if *lv == v => *lc += c,
                _ => merged.push((v, c)),
            }
        }
        Witness { occurrences: merged }
    }

    pub fn sum(&self) -> u64 {
        self.occurrences.iter().map(|&(v, c)| v * c).sum()
    }

    pub fn cardinality(&self) -> u64 {
        self.occurrences.iter().map(|&(_, c)| c).sum()
    }

    /// True when this witness uses no value more often than `x` provides it.
    pub fn respects(&self, x: &Multiset) -> bool {
        self.occurrences.iter().all(|&(v, c)| {
            x.entries()
                .binary_search_by_key(&v, |&(ev, _)| ev)
                .map(|idx| x.entries()[idx].1 >= c)
                .unwrap_or(false)
        })
    }
}

/// A subset-sum instance: multiset of positive integers plus a target cap.
#[derive(Debug, Clone)]
pub struct Instance {
    pub x: Multiset,
    pub t: u64,
    /// Occurrences discarded at ingest because their value exceeded t.
    pub discarded_over_target: u64,
}

impl Instance {
    /// Values above t are discarded (they cannot participate in any sum <= t);
    /// the count is reported. Zero or negative values are rejected.
    pub fn ingest(values: &[u64], t: u64) -> Result<Instance> {
        for &v in values {
            if v == 0 {
                return Err(Error::ElementOutOfRange { value: 0, max: t });
            }
        }
        let discarded = values.iter().filter(|&&v| v > t).count() as u64;
        let kept: Vec<u64> = values.iter().copied().filter(|&v| v <= t).collect();
        Ok(Instance {
            x: Multiset::from_values(&kept),
            t,
            discarded_over_target: discarded,
        })
    }

    pub fn from_multiset(x: Multiset, t: u64) -> Instance {
        let mut kept = Vec::new();
        let mut discarded = 0;
        for &(v, c) in x.entries() {
            if v <= t {
                kept.push((v, c));
            } else {
                discarded += c;
            }
        }
        Instance {
            x: Multiset::from_entries(kept),
            t,
            discarded_over_target: discarded,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_merges_duplicates() {
        let m = Multiset::from_values(&[5, 3, 5]);
        assert_eq!(m.entries(), &[(3, 1), (5, 2)]);
        assert_eq!(m.total(), 3);
        assert_eq!(m.sum(), 13);
    }

    #[test]
    fn ingest_discards_over_target() {
        let inst = Instance::ingest(&[3, 5, 6, 12], 10).unwrap();
        assert_eq!(inst.discarded_over_target, 1);
        assert_eq!(inst.x.total(), 3);
    }

    #[test]
    fn ingest_rejects_zero() {
        assert!(Instance::ingest(&[0, 1], 5).is_err());
    }

    #[test]
    fn witness_respects_multiplicity() {
        let x = Multiset::from_values(&[5, 5, 3]);
        assert!(Witness { occurrences: vec![(5, 2)] }.respects(&x));
        assert!(!Witness { occurrences: vec![(5, 3)] }.respects(&x));
        assert!(!Witness { occurrences: vec![(4, 1)] }.respects(&x));
    }
}
