//! Complexity clouds: the multiset of complexity vectors of a piece with
//! normalised multiplicities, and their 3-D projections for plotting.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::leading::{ComplexityVector, COMPONENT_NAMES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CloudError {
    #[error("expected {expected} complexity vectors for {slices} slices, got {actual}")]
    LengthMismatch {
        slices: usize,
        expected: usize,
        actual: usize,
    },
    #[error("a piece needs at least one slice")]
    NoSlices,
    #[error("unknown axis `{0}` (expected one of up, down, constant, crossings, rests)")]
    UnknownAxis(String),
    #[error("a projection needs exactly 3 distinct axes, got `{0}`")]
    BadAxes(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Up,
    Down,
    Constant,
    Crossings,
    Rests,
}

impl Axis {
    pub const ALL: [Axis; 5] = [Axis::Up, Axis::Down, Axis::Constant, Axis::Crossings, Axis::Rests];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        COMPONENT_NAMES[self.index()]
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = CloudError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "up" => Ok(Axis::Up),
            "down" => Ok(Axis::Down),
            "constant" => Ok(Axis::Constant),
            "crossing" | "crossings" => Ok(Axis::Crossings),
            "rest" | "rests" => Ok(Axis::Rests),
            other => Err(CloudError::UnknownAxis(other.to_string())),
        }
    }
}

/// Three distinct axes, kept in the order given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axes([Axis; 3]);

impl Axes {
    pub fn new(axes: [Axis; 3]) -> Result<Self, CloudError> {
        let [a, b, c] = axes;
        if a == b || b == c || a == c {
            return Err(CloudError::BadAxes(format!("{a},{b},{c}")));
        }
        Ok(Axes(axes))
    }

    /// Everything except the two dropped axes.
    pub fn dropping(x: Axis, y: Axis) -> Result<Self, CloudError> {
        let kept: Vec<Axis> = Axis::ALL.into_iter().filter(|a| *a != x && *a != y).collect();
        let kept: [Axis; 3] = kept
            .try_into()
            .map_err(|_| CloudError::BadAxes(format!("drop {x},{y}")))?;
        Axes::new(kept)
    }

    pub fn get(&self) -> [Axis; 3] {
        self.0
    }
}

impl FromStr for Axes {
    type Err = CloudError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parsed: Vec<Axis> = s.split(',').map(str::parse).collect::<Result<_, _>>()?;
        let arr: [Axis; 3] = parsed
            .try_into()
            .map_err(|_| CloudError::BadAxes(s.to_string()))?;
        Axes::new(arr)
    }
}

impl fmt::Display for Axes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a},{b},{c}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloudEntry {
    pub vector: ComplexityVector,
    pub multiplicity: usize,
}

/// Multiset of the complexity vectors of a piece with `slices` notes per
/// voice after homogenisation. Entries are sorted by vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityCloud {
    pub piece: String,
    pub slices: usize,
    pub entries: Vec<CloudEntry>,
}

impl ComplexityCloud {
    pub fn multiplicity(&self, v: &ComplexityVector) -> usize {
        self.entries
            .iter()
            .find(|e| &e.vector == v)
            .map_or(0, |e| e.multiplicity)
    }

    /// `μ(c) / T`.
    pub fn normalised_multiplicity(&self, v: &ComplexityVector) -> f64 {
        self.multiplicity(v) as f64 / self.slices as f64
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

/// Counts each vector of a piece with `slices` slices (and so `slices - 1`
/// transitions).
pub fn build_cloud(
    piece: impl Into<String>,
    vectors: &[ComplexityVector],
    slices: usize,
) -> Result<ComplexityCloud, CloudError> {
    if slices == 0 {
        return Err(CloudError::NoSlices);
    }
    if vectors.len() != slices - 1 {
        return Err(CloudError::LengthMismatch {
            slices,
            expected: slices - 1,
            actual: vectors.len(),
        });
    }
    let mut counts: BTreeMap<ComplexityVector, usize> = BTreeMap::new();
    for v in vectors {
        *counts.entry(*v).or_default() += 1;
    }
    Ok(ComplexityCloud {
        piece: piece.into(),
        slices,
        entries: counts
            .into_iter()
            .map(|(vector, multiplicity)| CloudEntry {
                vector,
                multiplicity,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectedPoint {
    pub coords: [usize; 3],
    pub multiplicity: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudProjection {
    pub piece: String,
    pub axes: Axes,
    pub points: Vec<ProjectedPoint>,
}

impl CloudProjection {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let [a, b, c] = self.axes.get();
        w.write_record([a.name(), b.name(), c.name(), "multiplicity", "radius"])?;
        for p in &self.points {
            w.write_record([
                p.coords[0].to_string(),
                p.coords[1].to_string(),
                p.coords[2].to_string(),
                p.multiplicity.to_string(),
                p.radius.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Projects onto three axes, merging points that coincide. Points come out
/// sorted lexicographically by coordinates.
pub fn project(cloud: &ComplexityCloud, axes: Axes) -> CloudProjection {
    let idx = axes.get().map(Axis::index);
    let mut merged: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    for e in &cloud.entries {
        let coords = idx.map(|i| e.vector.component(i));
        *merged.entry(coords).or_default() += e.multiplicity;
    }
    CloudProjection {
        piece: cloud.piece.clone(),
        axes,
        points: merged
            .into_iter()
            .map(|(coords, multiplicity)| ProjectedPoint {
                coords,
                multiplicity,
                radius: multiplicity as f64 / cloud.slices as f64,
            })
            .collect(),
    }
}

/// Projection dropping the crossing component of rest-free vectors
/// (up, down, constant) and the one dropping constant voices
/// (up, down, crossings).
pub fn default_projections() -> [Axes; 2] {
    [
        Axes::new([Axis::Up, Axis::Down, Axis::Constant]).expect("distinct"),
        Axes::new([Axis::Up, Axis::Down, Axis::Crossings]).expect("distinct"),
    ]
}
