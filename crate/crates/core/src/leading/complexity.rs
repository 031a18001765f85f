use std::fmt;

use serde::{Deserialize, Serialize};

use super::{LeadingError, LeadingMatrix, Sign, VoiceLeading};

/// Component names in vector order.
pub const COMPONENT_NAMES: [&str; 5] = ["up", "down", "constant", "crossings", "rests"];

/// `(up, down, constant, crossings, rests)` for one voice leading.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct ComplexityVector {
    pub up: usize,
    pub down: usize,
    pub constant: usize,
    pub crossings: usize,
    pub rests: usize,
}

impl ComplexityVector {
    pub const fn new(up: usize, down: usize, constant: usize, crossings: usize, rests: usize) -> Self {
        ComplexityVector {
            up,
            down,
            constant,
            crossings,
            rests,
        }
    }

    pub fn components(&self) -> [usize; 5] {
        [self.up, self.down, self.constant, self.crossings, self.rests]
    }

    pub fn component(&self, index: usize) -> usize {
        self.components()[index]
    }

    pub fn as_features(&self) -> [f64; 5] {
        self.components().map(|c| c as f64)
    }

    /// Voices accounted for; equals the voice count of the leading.
    pub fn voices(&self) -> usize {
        self.up + self.down + self.constant + self.rests
    }

    /// `[u, d, k, x]` or `[u, d, k, x, r]`.
    pub fn render(&self, five: bool) -> String {
        let c = self.components();
        let shown = if five { &c[..] } else { &c[..4] };
        let parts: Vec<String> = shown.iter().map(usize::to_string).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl std::ops::Add for ComplexityVector {
    type Output = ComplexityVector;

    fn add(self, o: ComplexityVector) -> ComplexityVector {
        ComplexityVector::new(
            self.up + o.up,
            self.down + o.down,
            self.constant + o.constant,
            self.crossings + o.crossings,
            self.rests + o.rests,
        )
    }
}

impl std::iter::Sum for ComplexityVector {
    fn sum<I: Iterator<Item = ComplexityVector>>(iter: I) -> Self {
        iter.fold(ComplexityVector::default(), |a, b| a + b)
    }
}

impl fmt::Display for ComplexityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

/// Reads the complexity vector off the leading matrix: `+1` above the
/// diagonal ascends, below descends, on it stays; `-1` entries are rests.
pub fn complexity(vl: &VoiceLeading) -> ComplexityVector {
    complexity_of_matrix(&vl.matrix())
}

pub(crate) fn complexity_of_matrix(p: &LeadingMatrix) -> ComplexityVector {
    let mut c = ComplexityVector::default();
    for e in p.entries() {
        match e.sign {
            Sign::Minus => c.rests += 1,
            Sign::Plus if e.row < e.col => c.up += 1,
            Sign::Plus if e.row > e.col => c.down += 1,
            Sign::Plus => c.constant += 1,
        }
    }
    c.crossings = p.count_crossings().total;
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

/// Contrapuntal motion class of a two-voice leading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MotionClass {
    /// Same direction, different intervals.
    Similar(Direction),
    /// Same direction and same interval.
    Parallel(Direction),
    Contrary,
    Oblique,
    Static,
    RestInvolved,
}

impl MotionClass {
    /// Label used in text listings. Parallel motion is listed as similar
    /// motion in its direction.
    pub fn label(self) -> &'static str {
        match self {
            MotionClass::Similar(Direction::Up) | MotionClass::Parallel(Direction::Up) => {
                "similar motion up"
            }
            MotionClass::Similar(Direction::Down) | MotionClass::Parallel(Direction::Down) => {
                "similar motion down"
            }
            MotionClass::Contrary => "contrary motion",
            MotionClass::Oblique => "oblique motion",
            MotionClass::Static => "no motion",
            MotionClass::RestInvolved => "rest",
        }
    }
}

pub fn classify_motion(vl: &VoiceLeading) -> Result<MotionClass, LeadingError> {
    if vl.voices() != 2 {
        return Err(LeadingError::NotTwoVoices(vl.voices()));
    }
    let pitches: Option<Vec<i32>> = vl
        .source()
        .iter()
        .chain(vl.target())
        .map(|s| s.pitch().map(|p| p.value()))
        .collect();
    let Some(v) = pitches else {
        return Ok(MotionClass::RestInvolved);
    };
    let (x1, x2, y1, y2) = (v[0], v[1], v[2], v[3]);
    let (d1, d2) = ((y1 - x1).signum(), (y2 - x2).signum());
    let class = match (d1, d2) {
        (0, 0) => MotionClass::Static,
        (0, _) | (_, 0) => MotionClass::Oblique,
        (a, b) if a != b => MotionClass::Contrary,
        (a, _) => {
            let dir = if a > 0 { Direction::Up } else { Direction::Down };
            if y2 - y1 == x2 - x1 {
                MotionClass::Parallel(dir)
            } else {
                MotionClass::Similar(dir)
            }
        }
    };
    Ok(class)
}
