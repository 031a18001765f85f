//! Voice leadings as generalised partial permutations of the ordered union
//! multiset of their source and target pitches.
//!
//! A leading `(x_1, ..., x_n) -> (y_1, ..., y_n)` is encoded as a square
//! matrix indexed by the sorted union multiset `U = M ∪ L`. Voice `i`
//! contributes one entry at `(row_i, col_i)`, where `row_i` is a slot of
//! `x_i` in `U` and `col_i` a slot of `y_i`. Entries are `+1`, or `-1` when
//! either endpoint is a rest.
//!
//! Repeated values need a slot convention to make the matrix unique:
//!
//! * target occurrences of a value take its column slots in increasing
//!   voice order;
//! * voices that stay on the same value sit on the diagonal;
//! * the remaining source occurrences take the free row slots, again in
//!   increasing voice order.

mod complexity;
mod matrix;

pub use complexity::{
    classify_motion, complexity, ComplexityVector, Direction, MotionClass, COMPONENT_NAMES,
};
pub use matrix::{Crossings, Entry, LeadingMatrix, Sign};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::pitch::PitchOrRest;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeadingError {
    #[error("source has {source_len} voices but target has {target_len}")]
    LengthMismatch {
        source_len: usize,
        target_len: usize,
    },
    #[error("a voice leading needs at least one voice")]
    NoVoices,
    #[error("expected a vector of dimension {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("slot {slot} holds {found} but the union multiset has {expected} there")]
    SlotValue {
        slot: usize,
        expected: PitchOrRest,
        found: PitchOrRest,
    },
    #[error("slot assignment puts two entries in row {row} or column {col}")]
    NotPartialPermutation { row: usize, col: usize },
    #[error("voice {voice} is assigned slot ({row}, {col}) which does not hold its pitches")]
    BadSlot { voice: usize, row: usize, col: usize },
    #[error("motion classes are defined for two voices, got {0}")]
    NotTwoVoices(usize),
}

/// `n >= 1` voices moving from `source[i]` to `target[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VoiceLeading {
    source: Vec<PitchOrRest>,
    target: Vec<PitchOrRest>,
}

impl VoiceLeading {
    pub fn new(source: Vec<PitchOrRest>, target: Vec<PitchOrRest>) -> Result<Self, LeadingError> {
        if source.len() != target.len() {
            return Err(LeadingError::LengthMismatch {
                source_len: source.len(),
                target_len: target.len(),
            });
        }
        if source.is_empty() {
            return Err(LeadingError::NoVoices);
        }
        Ok(VoiceLeading { source, target })
    }

    pub fn source(&self) -> &[PitchOrRest] {
        &self.source
    }

    pub fn target(&self) -> &[PitchOrRest] {
        &self.target
    }

    pub fn voices(&self) -> usize {
        self.source.len()
    }

    /// The leading `L -> M`.
    pub fn reversed(&self) -> VoiceLeading {
        VoiceLeading {
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    pub fn union_multiset(&self) -> OrderedUnionMultiset {
        OrderedUnionMultiset::of(self)
    }

    pub fn matrix(&self) -> LeadingMatrix {
        LeadingMatrix::from_leading(self)
    }
}

/// `M ∪ L` with multiplicity `max(μ_M, μ_L)`, sorted ascending (rests last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedUnionMultiset {
    elements: Vec<PitchOrRest>,
    // value -> (first slot, multiplicity)
    runs: BTreeMap<PitchOrRest, (usize, usize)>,
}

impl OrderedUnionMultiset {
    pub fn of(vl: &VoiceLeading) -> Self {
        let mut counts: BTreeMap<PitchOrRest, (usize, usize)> = BTreeMap::new();
        for &x in vl.source() {
            counts.entry(x).or_default().0 += 1;
        }
        for &y in vl.target() {
            counts.entry(y).or_default().1 += 1;
        }
        let mut elements = Vec::new();
        let mut runs = BTreeMap::new();
        for (value, (in_source, in_target)) in counts {
            let mult = in_source.max(in_target);
            runs.insert(value, (elements.len(), mult));
            elements.extend(std::iter::repeat_n(value, mult));
        }
        OrderedUnionMultiset { elements, runs }
    }

    pub fn elements(&self) -> &[PitchOrRest] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn multiplicity(&self, value: PitchOrRest) -> usize {
        self.runs.get(&value).map_or(0, |&(_, m)| m)
    }

    /// Zero-based positions of every occurrence of `value`.
    pub fn slots(&self, value: PitchOrRest) -> std::ops::Range<usize> {
        self.runs
            .get(&value)
            .map_or(0..0, |&(start, m)| start..start + m)
    }
}

/// Zero-based `(row, col)` for every voice under the slot convention.
pub fn assign_slots(vl: &VoiceLeading, union: &OrderedUnionMultiset) -> Vec<(usize, usize)> {
    let n = vl.voices();
    let mut cols = vec![0; n];
    let mut rows = vec![usize::MAX; n];

    let mut next_col: BTreeMap<PitchOrRest, usize> = BTreeMap::new();
    for (i, &y) in vl.target().iter().enumerate() {
        let k = next_col.entry(y).or_default();
        cols[i] = union.slots(y).start + *k;
        *k += 1;
    }

    let mut taken = vec![false; union.len()];
    for i in 0..n {
        if vl.source()[i] == vl.target()[i] {
            rows[i] = cols[i];
            taken[cols[i]] = true;
        }
    }
    for i in 0..n {
        if rows[i] == usize::MAX {
            let slot = union
                .slots(vl.source()[i])
                .find(|&s| !taken[s])
                .expect("max multiplicity leaves a free row slot");
            rows[i] = slot;
            taken[slot] = true;
        }
    }
    rows.into_iter().zip(cols).collect()
}

#[cfg(test)]
pub(crate) mod test_support {
    use crate::pitch::{parse_pitch, PitchOrRest};

    use super::VoiceLeading;

    pub fn tuple(s: &str) -> Vec<PitchOrRest> {
        s.split_whitespace().map(|t| parse_pitch(t).unwrap()).collect()
    }

    pub fn vl(src: &str, tgt: &str) -> VoiceLeading {
        VoiceLeading::new(tuple(src), tuple(tgt)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::{tuple, vl};
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            VoiceLeading::new(tuple("C4 D4"), tuple("C4")),
            Err(LeadingError::LengthMismatch { .. })
        ));
        assert_eq!(VoiceLeading::new(vec![], vec![]), Err(LeadingError::NoVoices));
    }

    #[test]
    fn union_examples() {
        let u = vl("G2 G3 B3 D4 F4", "C3 G3 C4 C4 E4").union_multiset();
        assert_eq!(u.elements(), &tuple("G2 C3 G3 B3 C4 C4 D4 E4 F4")[..]);
        assert_eq!(u.len(), 9);

        let u = vl("G2 G2 C3", "C3 C3 C3").union_multiset();
        assert_eq!(u.elements(), &tuple("G2 G2 C3 C3 C3")[..]);

        let u = vl("p D4 D5", "D4 C3 C3").union_multiset();
        assert_eq!(u.elements(), &tuple("C3 C3 D4 D5 p")[..]);
        assert_eq!(u.multiplicity(PitchOrRest::Rest), 1);
        assert_eq!(u.slots(PitchOrRest::Rest), 4..5);
    }

    fn one_based(v: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
        v.into_iter().map(|(r, c)| (r + 1, c + 1)).collect()
    }

    #[test]
    fn slot_examples() {
        let l = vl("G2 G2 C3", "C3 C3 C3");
        assert_eq!(one_based(assign_slots(&l, &l.union_multiset())), [(1, 3), (2, 4), (5, 5)]);

        let l = vl("C1 E1 G1", "G1 C1 E1");
        assert_eq!(one_based(assign_slots(&l, &l.union_multiset())), [(1, 3), (2, 1), (3, 2)]);

        let l = vl("C4", "C4");
        assert_eq!(one_based(assign_slots(&l, &l.union_multiset())), [(1, 1)]);
    }

    #[test]
    fn rest_to_rest_sits_on_diagonal() {
        let l = vl("p C4", "p D4");
        let slots = assign_slots(&l, &l.union_multiset());
        assert_eq!(slots[0].0, slots[0].1);
    }
}
