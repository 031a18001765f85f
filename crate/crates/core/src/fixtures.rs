//! Bundled example scores. Setting `VOICELEAD_FIXTURE_DIR` replaces the
//! bundled set with the `*.score` files of that directory.

use std::path::PathBuf;

use crate::score::{parse_score, Score};
use crate::Error;

pub const FIXTURE_DIR_ENV: &str = "VOICELEAD_FIXTURE_DIR";

const BUNDLED: [(&str, &str); 3] = [
    ("angelus", include_str!("../fixtures/angelus.score")),
    ("dicant", include_str!("../fixtures/dicant.score")),
    ("canon", include_str!("../fixtures/canon.score")),
];

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(FIXTURE_DIR_ENV).map(PathBuf::from)
}

/// Fixture names, sorted.
pub fn names() -> Result<Vec<String>, Error> {
    let mut names: Vec<String> = match override_dir() {
        Some(dir) => std::fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .filter_map(|entry| {
                let path = entry.ok()?.path();
                if path.extension()? != "score" {
                    return None;
                }
                path.file_stem()?.to_str().map(String::from)
            })
            .collect(),
        None => BUNDLED.iter().map(|(n, _)| n.to_string()).collect(),
    };
    names.sort();
    Ok(names)
}

/// Raw text of a fixture.
pub fn source(name: &str) -> Result<String, Error> {
    match override_dir() {
        Some(dir) => {
            let path = dir.join(format!("{name}.score"));
            std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
        }
        None => BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| text.to_string())
            .ok_or_else(|| Error::UnknownFixture(name.to_string())),
    }
}

pub fn load(name: &str) -> Result<Score, Error> {
    Ok(parse_score(&source(name)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fixtures_parse() {
        for (name, text) in BUNDLED {
            let score = parse_score(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(score.voices().len(), 2);
        }
    }
}
