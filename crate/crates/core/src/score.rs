//! Score model, the native text/JSON score formats, rhythm homogenisation
//! and extraction of consecutive voice-leading pairs.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::leading::VoiceLeading;
use crate::pitch::{parse_pitch, PitchError, PitchOrRest};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: bad pitch in `{token}`: {source}")]
    Pitch {
        line: usize,
        token: String,
        source: PitchError,
    },
    #[error("line {line}: bad duration in `{token}`: {reason}")]
    Duration {
        line: usize,
        token: String,
        reason: String,
    },
    #[error("invalid score document: {0}")]
    Document(String),
    #[error("score has no voices")]
    NoVoices,
    #[error("voice `{0}` has no events")]
    EmptyVoice(String),
    #[error("voices have unequal total durations: {}", format_totals(.0))]
    UnequalDurations(Vec<(String, Duration)>),
    #[error("need at least two slices to form a voice leading, got {0}")]
    TooFewSlices(usize),
    #[error("refinement factor must be positive")]
    ZeroFactor,
}

fn format_totals(totals: &[(String, Duration)]) -> String {
    totals
        .iter()
        .map(|(name, d)| format!("{name}={d}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Positive exact duration as a fraction of a whole note.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Duration(Ratio<i64>);

impl Duration {
    pub fn new(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        let r = Ratio::new(numer, denom);
        (r > Ratio::from_integer(0)).then_some(Duration(r))
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    /// Largest duration of which both are integer multiples.
    pub fn gcd(self, other: Duration) -> Duration {
        let numer = self.numer().gcd(&other.numer());
        let denom = self.denom().lcm(&other.denom());
        Duration(Ratio::new(numer, denom))
    }

    /// `Some(k)` when `self = k * unit` for a positive integer `k`.
    pub fn multiple_of(self, unit: Duration) -> Option<usize> {
        let k = self.0 / unit.0;
        k.is_integer().then(|| k.to_integer() as usize)
    }

    pub fn scale(self, factor: i64) -> Duration {
        Duration(self.0 * factor)
    }

    pub fn divide(self, factor: i64) -> Duration {
        Duration(self.0 / factor)
    }
}

impl std::ops::Add for Duration {
    type Output = Duration;

    fn add(self, rhs: Duration) -> Duration {
        Duration(self.0 + rhs.0)
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.numer(), self.denom())
    }
}

impl FromStr for Duration {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = s
            .split_once(':')
            .ok_or_else(|| "expected `num:den`".to_string())?;
        let n: i64 = n.parse().map_err(|_| format!("bad numerator `{n}`"))?;
        let d: i64 = d.parse().map_err(|_| format!("bad denominator `{d}`"))?;
        Duration::new(n, d).ok_or_else(|| "duration must be positive".to_string())
    }
}

impl Serialize for Duration {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Duration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of complexity-vector components to print in listings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum VectorWidth {
    Four,
    Five,
}

impl TryFrom<u8> for VectorWidth {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            4 => Ok(VectorWidth::Four),
            5 => Ok(VectorWidth::Five),
            other => Err(format!("components must be 4 or 5, got {other}")),
        }
    }
}

impl From<VectorWidth> for u8 {
    fn from(w: VectorWidth) -> u8 {
        match w {
            VectorWidth::Four => 4,
            VectorWidth::Five => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoteEvent {
    pub sound: PitchOrRest,
    pub duration: Duration,
}

impl NoteEvent {
    pub fn new(sound: PitchOrRest, duration: Duration) -> Self {
        NoteEvent { sound, duration }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Voice {
    pub name: String,
    pub events: Vec<NoteEvent>,
}

impl Voice {
    pub fn total_duration(&self) -> Duration {
        self.events
            .iter()
            .map(|e| e.duration)
            .reduce(|a, b| a + b)
            .expect("validated voices are non-empty")
    }
}

/// A validated score: at least one voice, no empty voice, equal voice totals.
/// Voice 0 is the topmost notated voice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Score {
    title: String,
    voices: Vec<Voice>,
    components: Option<VectorWidth>,
}

impl Score {
    pub fn new(title: impl Into<String>, voices: Vec<Voice>) -> Result<Self, ScoreError> {
        if voices.is_empty() {
            return Err(ScoreError::NoVoices);
        }
        if let Some(v) = voices.iter().find(|v| v.events.is_empty()) {
            return Err(ScoreError::EmptyVoice(v.name.clone()));
        }
        let totals: Vec<_> = voices
            .iter()
            .map(|v| (v.name.clone(), v.total_duration()))
            .collect();
        if totals.iter().any(|(_, t)| *t != totals[0].1) {
            return Err(ScoreError::UnequalDurations(totals));
        }
        Ok(Score {
            title: title.into(),
            voices,
            components: None,
        })
    }

    pub fn with_components(mut self, width: Option<VectorWidth>) -> Self {
        self.components = width;
        self
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn voices(&self) -> &[Voice] {
        &self.voices
    }

    pub fn components(&self) -> Option<VectorWidth> {
        self.components
    }

    pub fn total_duration(&self) -> Duration {
        self.voices[0].total_duration()
    }

    pub fn has_rests(&self) -> bool {
        self.voices
            .iter()
            .flat_map(|v| &v.events)
            .any(|e| e.sound.is_rest())
    }

    /// Serialises into the structured (JSON) document form.
    pub fn to_json(&self) -> String {
        let doc = JsonDocument {
            title: self.title.clone(),
            components: self.components,
            voices: self
                .voices
                .iter()
                .map(|v| JsonVoice {
                    name: v.name.clone(),
                    events: v.events.iter().map(|e| (e.sound, e.duration)).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("score documents always serialise")
    }

    /// Renders the native text form.
    pub fn to_text(&self) -> String {
        let mut out = format!("title: {}\n", self.title);
        if let Some(w) = self.components {
            out.push_str(&format!("components: {}\n", u8::from(w)));
        }
        for v in &self.voices {
            out.push_str(&format!("voice {}:\n ", v.name));
            for e in &v.events {
                out.push_str(&format!(" {}/{}", e.sound, e.duration));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDocument {
    title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    components: Option<VectorWidth>,
    voices: Vec<JsonVoice>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonVoice {
    name: String,
    events: Vec<(PitchOrRest, Duration)>,
}

/// Parses either the line-oriented native format or the JSON document form
/// (detected by a leading `{`).
pub fn parse_score(text: &str) -> Result<Score, ScoreError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_native(text)
    }
}

fn parse_json(text: &str) -> Result<Score, ScoreError> {
    let doc: JsonDocument =
        serde_json::from_str(text).map_err(|e| ScoreError::Document(e.to_string()))?;
    let voices = doc
        .voices
        .into_iter()
        .map(|v| Voice {
            name: v.name,
            events: v
                .events
                .into_iter()
                .map(|(s, d)| NoteEvent::new(s, d))
                .collect(),
        })
        .collect();
    Ok(Score::new(doc.title, voices)?.with_components(doc.components))
}

fn parse_native(text: &str) -> Result<Score, ScoreError> {
    let mut title = None;
    let mut components = None;
    let mut voices: Vec<Voice> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("title:") {
            if title.is_some() {
                return Err(syntax(line_no, "duplicate title"));
            }
            title = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("components:") {
            let width = rest
                .trim()
                .parse::<u8>()
                .map_err(|e| e.to_string())
                .and_then(VectorWidth::try_from)
                .map_err(|e| syntax(line_no, &e))?;
            components = Some(width);
        } else if let Some(rest) = line.strip_prefix("voice") {
            let name = rest
                .trim()
                .strip_suffix(':')
                .ok_or_else(|| syntax(line_no, "voice header must end with `:`"))?
                .trim();
            if name.is_empty() {
                return Err(syntax(line_no, "voice needs a name"));
            }
            voices.push(Voice {
                name: name.to_string(),
                events: Vec::new(),
            });
        } else {
            let voice = voices
                .last_mut()
                .ok_or_else(|| syntax(line_no, "events before the first voice header"))?;
            for token in line.split_whitespace() {
                voice.events.push(parse_event(line_no, token)?);
            }
        }
    }

    let title = title.ok_or_else(|| syntax(1, "missing `title:` line"))?;
    Ok(Score::new(title, voices)?.with_components(components))
}

/// A comment starts at a `#` that begins a token; `#` inside `C#4` is a sharp.
fn strip_comment(line: &str) -> &str {
    let mut prev_blank = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_blank {
            return &line[..i];
        }
        prev_blank = c.is_whitespace();
    }
    line
}

fn syntax(line: usize, message: &str) -> ScoreError {
    ScoreError::Syntax {
        line,
        message: message.to_string(),
    }
}

fn parse_event(line: usize, token: &str) -> Result<NoteEvent, ScoreError> {
    let (sound, duration) = token.split_once('/').ok_or_else(|| ScoreError::Syntax {
        line,
        message: format!("event `{token}` must look like `<pitch>/<num>:<den>`"),
    })?;
    let sound = parse_pitch(sound).map_err(|source| ScoreError::Pitch {
        line,
        token: token.to_string(),
        source,
    })?;
    let duration = duration.parse().map_err(|reason| ScoreError::Duration {
        line,
        token: token.to_string(),
        reason,
    })?;
    Ok(NoteEvent::new(sound, duration))
}

/// Rectangular grid of unit-duration slices, one row per voice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogenisedScore {
    title: String,
    voice_names: Vec<String>,
    unit: Duration,
    grid: Vec<Vec<PitchOrRest>>,
    components: Option<VectorWidth>,
}

impl HomogenisedScore {
    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn voice_names(&self) -> &[String] {
        &self.voice_names
    }

    pub fn unit(&self) -> Duration {
        self.unit
    }

    pub fn voice_count(&self) -> usize {
        self.grid.len()
    }

    /// Number of slices per voice.
    pub fn slices(&self) -> usize {
        self.grid[0].len()
    }

    pub fn voice(&self, index: usize) -> &[PitchOrRest] {
        &self.grid[index]
    }

    pub fn column(&self, t: usize) -> Vec<PitchOrRest> {
        self.grid.iter().map(|v| v[t]).collect()
    }

    pub fn components(&self) -> Option<VectorWidth> {
        self.components
    }

    pub fn has_rests(&self) -> bool {
        self.grid.iter().flatten().any(|s| s.is_rest())
    }

    /// Splits every slice into `factor` slices of duration `unit / factor`.
    pub fn refine(&self, factor: usize) -> Result<HomogenisedScore, ScoreError> {
        if factor == 0 {
            return Err(ScoreError::ZeroFactor);
        }
        let grid = self
            .grid
            .iter()
            .map(|v| {
                v.iter()
                    .flat_map(|&s| std::iter::repeat_n(s, factor))
                    .collect()
            })
            .collect();
        Ok(HomogenisedScore {
            unit: self.unit.divide(factor as i64),
            grid,
            ..self.clone()
        })
    }

    /// Merges runs of equal consecutive slices back into events.
    pub fn merge_back(&self) -> Score {
        let voices = self
            .voice_names
            .iter()
            .zip(&self.grid)
            .map(|(name, slices)| {
                let mut events: Vec<NoteEvent> = Vec::new();
                for &s in slices {
                    match events.last_mut() {
                        Some(last) if last.sound == s => last.duration = last.duration + self.unit,
                        _ => events.push(NoteEvent::new(s, self.unit)),
                    }
                }
                Voice {
                    name: name.clone(),
                    events,
                }
            })
            .collect();
        Score::new(self.title.clone(), voices)
            .expect("grid is rectangular")
            .with_components(self.components)
    }
}

/// Rational GCD of every event duration across all voices.
pub fn minimal_unit(score: &Score) -> Duration {
    score
        .voices()
        .iter()
        .flat_map(|v| &v.events)
        .map(|e| e.duration)
        .reduce(Duration::gcd)
        .expect("validated scores have events")
}

/// Rewrites every event of duration `k * u` as `k` slices of its sound.
pub fn homogenise(score: &Score) -> HomogenisedScore {
    let unit = minimal_unit(score);
    let grid = score
        .voices()
        .iter()
        .map(|v| {
            v.events
                .iter()
                .flat_map(|e| {
                    let k = e
                        .duration
                        .multiple_of(unit)
                        .expect("gcd divides every duration");
                    std::iter::repeat_n(e.sound, k)
                })
                .collect()
        })
        .collect();
    HomogenisedScore {
        title: score.title().to_string(),
        voice_names: score.voices().iter().map(|v| v.name.clone()).collect(),
        unit,
        grid,
        components: score.components(),
    }
}

/// Consecutive column pairs `(t, t + 1)` of the grid.
pub fn leading_pairs(h: &HomogenisedScore) -> Result<Vec<VoiceLeading>, ScoreError> {
    let t = h.slices();
    if t < 2 {
        return Err(ScoreError::TooFewSlices(t));
    }
    Ok((0..t - 1)
        .map(|i| {
            VoiceLeading::new(h.column(i), h.column(i + 1))
                .expect("columns share the voice count")
        })
        .collect())
}
