use std::fmt;

use serde::{Deserialize, Serialize};

use super::{assign_slots, LeadingError, OrderedUnionMultiset, VoiceLeading};
use crate::pitch::PitchOrRest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Non-zero entry, zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub sign: Sign,
}

/// Sparse square matrix over `{0, +1, -1}` with at most one non-zero per row
/// and per column. `entries[i]` belongs to voice `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingMatrix {
    elements: Vec<PitchOrRest>,
    entries: Vec<Entry>,
}

/// Crossing counts read off the matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossings {
    /// Number of crossing voice pairs.
    pub total: usize,
    /// For every voice, how many other voices cross it (0 for rest voices).
    pub per_voice: Vec<usize>,
}

impl LeadingMatrix {
    pub fn from_leading(vl: &VoiceLeading) -> Self {
        let union = OrderedUnionMultiset::of(vl);
        let slots = assign_slots(vl, &union);
        Self::from_slots(vl, &union, &slots).expect("convention slots are always valid")
    }

    /// Builds a matrix from an explicit per-voice slot assignment. Rejects
    /// assignments that point at the wrong values or reuse a row or column.
    pub fn from_slots(
        vl: &VoiceLeading,
        union: &OrderedUnionMultiset,
        slots: &[(usize, usize)],
    ) -> Result<Self, LeadingError> {
        if slots.len() != vl.voices() {
            return Err(LeadingError::Dimension {
                expected: vl.voices(),
                actual: slots.len(),
            });
        }
        let m = union.len();
        let mut row_used = vec![false; m];
        let mut col_used = vec![false; m];
        let mut entries = Vec::with_capacity(slots.len());
        for (voice, (&(row, col), (&x, &y))) in slots
            .iter()
            .zip(vl.source().iter().zip(vl.target()))
            .enumerate()
        {
            if row >= m || col >= m || union.elements()[row] != x || union.elements()[col] != y {
                return Err(LeadingError::BadSlot { voice, row, col });
            }
            if row_used[row] || col_used[col] {
                return Err(LeadingError::NotPartialPermutation { row, col });
            }
            row_used[row] = true;
            col_used[col] = true;
            let sign = if x.is_rest() || y.is_rest() {
                Sign::Minus
            } else {
                Sign::Plus
            };
            entries.push(Entry { row, col, sign });
        }
        Ok(LeadingMatrix {
            elements: union.elements().to_vec(),
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// The ordered union multiset indexing rows and columns.
    pub fn elements(&self) -> &[PitchOrRest] {
        &self.elements
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries
            .iter()
            .find(|e| e.row == row && e.col == col)
            .map_or(0, |e| e.sign.value())
    }

    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        let m = self.dim();
        let mut dense = vec![vec![0; m]; m];
        for e in &self.entries {
            dense[e.row][e.col] = e.sign.value();
        }
        dense
    }

    /// Matrix of the reversed leading.
    pub fn transpose(&self) -> LeadingMatrix {
        LeadingMatrix {
            elements: self.elements.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| Entry {
                    row: e.col,
                    col: e.row,
                    sign: e.sign,
                })
                .collect(),
        }
    }

    /// Occupancy of the rows: `Some(U[r])` where a voice starts.
    pub fn source_occupancy(&self) -> Vec<Option<PitchOrRest>> {
        let mut v = vec![None; self.dim()];
        for e in &self.entries {
            v[e.row] = Some(self.elements[e.row]);
        }
        v
    }

    /// Occupancy of the columns: `Some(U[c])` where a voice ends.
    pub fn target_occupancy(&self) -> Vec<Option<PitchOrRest>> {
        self.transpose().source_occupancy()
    }

    /// Moves every occupied row slot along its entry. An occupied slot
    /// without an entry is a hole of the partial permutation and vanishes.
    pub fn apply(
        &self,
        source: &[Option<PitchOrRest>],
    ) -> Result<Vec<Option<PitchOrRest>>, LeadingError> {
        if source.len() != self.dim() {
            return Err(LeadingError::Dimension {
                expected: self.dim(),
                actual: source.len(),
            });
        }
        for (slot, (&given, &expected)) in source.iter().zip(&self.elements).enumerate() {
            if let Some(found) = given {
                if found != expected {
                    return Err(LeadingError::SlotValue {
                        slot,
                        expected,
                        found,
                    });
                }
            }
        }
        let mut out = vec![None; self.dim()];
        for e in &self.entries {
            if source[e.row].is_some() {
                out[e.col] = Some(self.elements[e.col]);
            }
        }
        Ok(out)
    }

    /// For each `+1` entry `(i, j)`, counts `+1` entries with `r > i, s < j`
    /// or `r < i, s > j`. `-1` entries take no part.
    pub fn count_crossings(&self) -> Crossings {
        let per_voice: Vec<usize> = self
            .entries
            .iter()
            .map(|a| {
                if a.sign == Sign::Minus {
                    return 0;
                }
                self.entries
                    .iter()
                    .filter(|b| b.sign == Sign::Plus)
                    .filter(|b| (b.row > a.row && b.col < a.col) || (b.row < a.row && b.col > a.col))
                    .count()
            })
            .collect();
        Crossings {
            total: per_voice.iter().sum::<usize>() / 2,
            per_voice,
        }
    }
}

impl fmt::Display for LeadingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
