//! Voice leading as generalised partial permutation matrices.
//!
//! A piece is homogenised to a grid of equal-duration slices, every pair of
//! consecutive slices becomes a [`leading::VoiceLeading`], and each leading
//! is summarised by a [`leading::ComplexityVector`] of upward, downward and
//! constant voices, crossings and rests. The sequence of vectors is the
//! piece's time series (compared with [`dtw`]); their multiset is its
//! point cloud ([`cloud`]).

pub mod analysis;
pub mod cli;
pub mod cloud;
pub mod dtw;
pub mod fixtures;
pub mod leading;
pub mod pitch;
pub mod score;

use std::path::Path;

use thiserror::Error;

pub use analysis::{analyze, AnalysisReport, TransitionRecord};
pub use leading::{complexity, ComplexityVector, LeadingMatrix, VoiceLeading};
pub use pitch::{parse_pitch, Pitch, PitchOrRest};
pub use score::{homogenise, parse_score, Score};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Pitch(#[from] pitch::PitchError),
    #[error(transparent)]
    Score(#[from] score::ScoreError),
    #[error(transparent)]
    Leading(#[from] leading::LeadingError),
    #[error(transparent)]
    Cloud(#[from] cloud::CloudError),
    #[error(transparent)]
    Dtw(#[from] dtw::DtwError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
