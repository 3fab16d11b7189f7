//! `--config` TOML file. Command-line flags override it.
//!
//! ```toml
//! epsilon = "1/10"
//! delta = "0"
//! search_depth = 8
//!
//! [[constants]]
//! name = "v"
//! epsilon = "1/10"
//! value = "1/1000"
//! provenance = "lower bound from a separate volume computation"
//! ```

use std::path::Path;

use folmmp::exact::parse_rational;
use folmmp::mmp::{ConstantEntry, ConstantsTable};
use folmmp::restree::{AdjointParams, DEFAULT_SEARCH_DEPTH};
use folmmp::{Error, Rational};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    epsilon: Option<String>,
    delta: Option<String>,
    search_depth: Option<usize>,
    #[serde(default)]
    constants: Vec<ConstantEntry>,
}

#[derive(Debug, Default)]
pub struct Config {
    pub epsilon: Option<Rational>,
    pub delta: Option<Rational>,
    pub search_depth: Option<usize>,
    pub constants: ConstantsTable,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map(|s| line_column(text, s.start)).unwrap_or((1, 1));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        let constants = ConstantsTable {
            entries: raw.constants,
        };
        constants.validate()?;
        Ok(Self {
            epsilon: raw.epsilon.as_deref().map(parse_rational).transpose()?,
            delta: raw.delta.as_deref().map(parse_rational).transpose()?,
            search_depth: raw.search_depth,
            constants,
        })
    }

    /// Flags win over the file.
    pub fn params(
        &self,
        epsilon: Option<Rational>,
        delta: Option<Rational>,
        default_delta: Rational,
    ) -> Result<AdjointParams, Error> {
        let epsilon = epsilon
            .or_else(|| self.epsilon.clone())
            .ok_or_else(|| Error::InvalidInput("--epsilon is required (flag or config)".into()))?;
        let delta = delta.or_else(|| self.delta.clone()).unwrap_or(default_delta);
        let depth = self.search_depth.unwrap_or(DEFAULT_SEARCH_DEPTH);
        Ok(AdjointParams::new(epsilon, delta).with_depth(depth))
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;
    use folmmp::exact::rat;

    #[test]
    fn flags_win() {
        let c = Config::parse("epsilon = \"1/10\"\ndelta = \"1\"\nsearch_depth = 6\n").unwrap();
        let p = c.params(Some(rat(1, 20)), None, rat(0, 1)).unwrap();
        assert_eq!(p.epsilon, rat(1, 20));
        assert_eq!(p.delta, rat(1, 1));
        assert_eq!(p.search_depth, 6);
    }

    #[test]
    fn constants_need_provenance() {
        let text = "[[constants]]\nname = \"v\"\nvalue = \"1/100\"\nprovenance = \"\"\n";
        assert!(Config::parse(text).is_err());
    }

    #[test]
    fn bad_toml_reports_position() {
        match Config::parse("epsilon = \n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }
}
