//! Runtime configuration: series window, approximate precision, output
//! placement and format. Values come from an optional flat key-value file;
//! command-line flags override file values.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::render::RenderFormat;
use crate::series::SeriesCtx;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Svg,
    Csv,
    Json,
    Text,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<OutputFormat> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "svg" => OutputFormat::Svg,
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            "text" => OutputFormat::Text,
            other => return Err(Error::Config(format!("unknown format `{other}`"))),
        })
    }

    pub fn render_format(self) -> Option<RenderFormat> {
        match self {
            OutputFormat::Svg => Some(RenderFormat::Svg),
            OutputFormat::Csv => Some(RenderFormat::Csv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub series_window: u32,
    pub approx_digits: u32,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            series_window: 16,
            approx_digits: 50,
            output_dir: PathBuf::from("."),
            format: OutputFormat::Text,
        }
    }
}

impl Config {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_str(text: &str) -> Result<Config> {
        let mut config = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "series_window" => {
                self.series_window = value
                    .parse()
                    .map_err(|_| Error::Config(format!("bad series_window `{value}`")))?;
            }
            "approx_digits" => {
                self.approx_digits = value
                    .parse()
                    .map_err(|_| Error::Config(format!("bad approx_digits `{value}`")))?;
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            "format" => self.format = OutputFormat::parse(value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.series_window < 4 {
            return Err(Error::Config(format!(
                "series_window must be at least 4, got {}",
                self.series_window
            )));
        }
        if self.approx_digits < 20 {
            return Err(Error::Config(format!(
                "approx_digits must be at least 20, got {}",
                self.approx_digits
            )));
        }
        Ok(())
    }

    pub fn series_ctx(&self) -> Result<SeriesCtx> {
        SeriesCtx::new(self.series_window, self.approx_digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = Config::default();
        assert_eq!(c.series_window, 16);
        assert_eq!(c.approx_digits, 50);
        let parsed = Config::parse_str(
            "# comment\nseries_window = 24\napprox_digits=30\nformat = csv\n",
        )
        .unwrap();
        assert_eq!(parsed.series_window, 24);
        assert_eq!(parsed.approx_digits, 30);
        assert_eq!(parsed.format, OutputFormat::Csv);
    }

    #[test]
    fn invariants_enforced() {
        assert!(Config::parse_str("series_window = 2").is_err());
        assert!(Config::parse_str("approx_digits = 5").is_err());
        assert!(Config::parse_str("nonsense = 1").is_err());
        assert!(Config::parse_str("series_window").is_err());
    }
}
