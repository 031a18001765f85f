//! Pitches on the 12-tone equal-tempered scale, the rest symbol, and
//! scientific pitch notation.
//!
//! A pitch is an integer semitone index with A4 = 69 and C4 = 60. The rest
//! symbol `p` is ordered strictly above every pitch so that rests always
//! come last in a sorted union multiset.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Lowest pitch accepted by the text parser.
pub const MIN_PARSED: i32 = 0;
/// Highest pitch accepted by the text parser.
pub const MAX_PARSED: i32 = 127;

/// Token used for rests in every text format.
pub const REST_TOKEN: &str = "p";

const SHARP_NAMES: [&str; 12] = [
    "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PitchError {
    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("malformed pitch token `{0}`")]
    Malformed(String),
    #[error("pitch token `{token}` maps to {value}, outside [{MIN_PARSED}, {MAX_PARSED}]")]
    OutOfRange { token: String, value: i32 },
    #[error("rests have no voice range")]
    RestHasNoRange,
}

/// Semitone index; `Pitch(69)` is A4 = 440 Hz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pitch(pub i32);

impl Pitch {
    pub const fn new(value: i32) -> Self {
        Pitch(value)
    }

    pub const fn value(self) -> i32 {
        self.0
    }

    /// Fundamental frequency in Hz under A4 = 440 Hz.
    pub fn frequency(self) -> f64 {
        440.0 * 2f64.powf((self.0 as f64 - 69.0) / 12.0)
    }

    /// Octave number in scientific pitch notation (C4 = 60).
    pub fn octave(self) -> i32 {
        self.0.div_euclid(12) - 1
    }
}

impl fmt::Display for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = self.0.rem_euclid(12) as usize;
        write!(f, "{}{}", SHARP_NAMES[class], self.octave())
    }
}

impl FromStr for Pitch {
    type Err = PitchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_pitch(s)? {
            PitchOrRest::Pitch(p) => Ok(p),
            PitchOrRest::Rest => Err(PitchError::Malformed(s.to_string())),
        }
    }
}

/// A sounding pitch or a rest. The derived order puts `Rest` after every pitch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PitchOrRest {
    Pitch(Pitch),
    Rest,
}

impl PitchOrRest {
    pub fn is_rest(self) -> bool {
        matches!(self, PitchOrRest::Rest)
    }

    pub fn pitch(self) -> Option<Pitch> {
        match self {
            PitchOrRest::Pitch(p) => Some(p),
            PitchOrRest::Rest => None,
        }
    }
}

impl From<Pitch> for PitchOrRest {
    fn from(p: Pitch) -> Self {
        PitchOrRest::Pitch(p)
    }
}

impl fmt::Display for PitchOrRest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PitchOrRest::Pitch(p) => p.fmt(f),
            PitchOrRest::Rest => f.write_str(REST_TOKEN),
        }
    }
}

impl FromStr for PitchOrRest {
    type Err = PitchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pitch(s)
    }
}

impl Serialize for PitchOrRest {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PitchOrRest {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_pitch(&s).map_err(serde::de::Error::custom)
    }
}

/// Pitch value of a frequency: `69 + 12 log2(freq / 440)`, unrounded.
pub fn freq_to_pitch(freq: f64) -> Result<f64, PitchError> {
    if freq.is_nan() || freq <= 0.0 {
        return Err(PitchError::NonPositiveFrequency(freq));
    }
    Ok(69.0 + 12.0 * (freq / 440.0).log2())
}

/// Parses `[A-G](#|b)*(-?\d+)` or the rest token `p`.
pub fn parse_pitch(text: &str) -> Result<PitchOrRest, PitchError> {
    if text == REST_TOKEN {
        return Ok(PitchOrRest::Rest);
    }
    let malformed = || PitchError::Malformed(text.to_string());
    let mut chars = text.char_indices().peekable();
    let base = match chars.next() {
        Some((_, 'C')) => 0,
        Some((_, 'D')) => 2,
        Some((_, 'E')) => 4,
        Some((_, 'F')) => 5,
        Some((_, 'G')) => 7,
        Some((_, 'A')) => 9,
        Some((_, 'B')) => 11,
        _ => return Err(malformed()),
    };
    let mut accidental = 0;
    let mut octave_start = text.len();
    while let Some(&(idx, c)) = chars.peek() {
        match c {
            '#' => accidental += 1,
            'b' => accidental -= 1,
            _ => {
                octave_start = idx;
                break;
            }
        }
        chars.next();
    }
    let octave_text = &text[octave_start..];
    let digits = octave_text.strip_prefix('-').unwrap_or(octave_text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let octave: i32 = octave_text.parse().map_err(|_| malformed())?;
    let value = octave
        .checked_add(1)
        .and_then(|o| o.checked_mul(12))
        .and_then(|v| v.checked_add(base + accidental))
        .ok_or_else(malformed)?;
    if !(MIN_PARSED..=MAX_PARSED).contains(&value) {
        return Err(PitchError::OutOfRange {
            token: text.to_string(),
            value,
        });
    }
    Ok(PitchOrRest::Pitch(Pitch(value)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VoiceRangeLabel {
    Soprano,
    Alto,
    Tenor,
    Bass,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VoiceRange {
    pub label: VoiceRangeLabel,
    pub low: Pitch,
    pub high: Pitch,
}

impl VoiceRange {
    pub fn contains(&self, p: Pitch) -> bool {
        self.low <= p && p <= self.high
    }
}

/// Soprano C4–G6, Alto G3–C5, Tenor C3–G4, Bass E2–C4.
pub const VOICE_RANGES: [VoiceRange; 4] = [
    VoiceRange {
        label: VoiceRangeLabel::Soprano,
        low: Pitch(60),
        high: Pitch(91),
    },
    VoiceRange {
        label: VoiceRangeLabel::Alto,
        low: Pitch(55),
        high: Pitch(72),
    },
    VoiceRange {
        label: VoiceRangeLabel::Tenor,
        low: Pitch(48),
        high: Pitch(67),
    },
    VoiceRange {
        label: VoiceRangeLabel::Bass,
        low: Pitch(40),
        high: Pitch(60),
    },
];

/// Every range containing the pitch; `{Unclassified}` when none does.
pub fn classify_range(p: PitchOrRest) -> Result<BTreeSet<VoiceRangeLabel>, PitchError> {
    let p = p.pitch().ok_or(PitchError::RestHasNoRange)?;
    let mut labels: BTreeSet<_> = VOICE_RANGES
        .iter()
        .filter(|r| r.contains(p))
        .map(|r| r.label)
        .collect();
    if labels.is_empty() {
        labels.insert(VoiceRangeLabel::Unclassified);
    }
    Ok(labels)
}
