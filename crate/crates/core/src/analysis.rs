//! Whole-piece analysis: homogenise, walk the transitions, collect the
//! complexity series and cloud, and render the text listing.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cloud::{build_cloud, ComplexityCloud};
use crate::dtw::FeatureSeries;
use crate::leading::{classify_motion, complexity, ComplexityVector, MotionClass};
use crate::pitch::PitchOrRest;
use crate::score::{homogenise, leading_pairs, Duration, HomogenisedScore, Score, VectorWidth};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub source: Vec<PitchOrRest>,
    pub target: Vec<PitchOrRest>,
    pub complexity: ComplexityVector,
    /// Only for two-voice pieces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motion: Option<MotionClass>,
}

impl TransitionRecord {
    fn quoted(tuple: &[PitchOrRest]) -> String {
        let parts: Vec<String> = tuple.iter().map(|s| format!("'{s}'")).collect();
        format!("[{}]", parts.join(", "))
    }

    /// Two lines: the leading and its vector with motion label.
    pub fn render(&self, width: VectorWidth) -> String {
        let mut out = format!(
            "Voice Leading: {} {}\n",
            Self::quoted(&self.source),
            Self::quoted(&self.target)
        );
        if width == VectorWidth::Five {
            out.push_str("c = ");
        }
        out.push_str(&self.complexity.render(width == VectorWidth::Five));
        if let Some(m) = self.motion {
            write!(out, " - {}", m.label()).expect("writing to a String");
        }
        match self.complexity.crossings {
            0 => {}
            1 => out.push_str(" - 1 crossing"),
            k => write!(out, " - {k} crossings").expect("writing to a String"),
        }
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub piece: String,
    pub voices: Vec<String>,
    pub unit: Duration,
    /// Notes per voice after homogenisation.
    pub slices: usize,
    pub width: VectorWidth,
    pub transitions: Vec<TransitionRecord>,
    pub cloud: ComplexityCloud,
    pub series: FeatureSeries,
}

impl AnalysisReport {
    pub fn vectors(&self) -> Vec<ComplexityVector> {
        self.transitions.iter().map(|t| t.complexity).collect()
    }

    /// The listing: one record per transition, in order.
    pub fn listing(&self) -> String {
        self.transitions.iter().map(|t| t.render(self.width)).collect()
    }
}

pub fn analyze(score: &Score) -> Result<AnalysisReport, Error> {
    analyze_homogenised(&homogenise(score))
}

pub fn analyze_homogenised(h: &HomogenisedScore) -> Result<AnalysisReport, Error> {
    let pairs = leading_pairs(h)?;
    let two_voices = h.voice_count() == 2;
    let transitions: Vec<TransitionRecord> = pairs
        .iter()
        .map(|vl| TransitionRecord {
            source: vl.source().to_vec(),
            target: vl.target().to_vec(),
            complexity: complexity(vl),
            motion: two_voices.then(|| classify_motion(vl).expect("two voices")),
        })
        .collect();
    let vectors: Vec<ComplexityVector> = transitions.iter().map(|t| t.complexity).collect();
    let width = h.components().unwrap_or(if h.has_rests() {
        VectorWidth::Five
    } else {
        VectorWidth::Four
    });
    Ok(AnalysisReport {
        piece: h.title().to_string(),
        voices: h.voice_names().to_vec(),
        unit: h.unit(),
        slices: h.slices(),
        width,
        cloud: build_cloud(h.title(), &vectors, h.slices())?,
        series: FeatureSeries::from_vectors(h.title(), &vectors)?,
        transitions,
    })
}
