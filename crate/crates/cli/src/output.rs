use std::fs;
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fixed-point formatting; negative zero prints without a sign.
pub fn num(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.precision$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Scientific formatting for quantities that may be tiny.
pub fn sci(x: f64, precision: usize) -> String {
    if x.is_finite() {
        format!("{x:.precision$e}")
    } else {
        num(x, precision)
    }
}

pub fn nums(xs: &[f64], precision: usize, sep: &str) -> String {
    xs.iter().map(|&x| num(x, precision)).collect::<Vec<_>>().join(sep)
}

/// Comment header naming the tool version and the run configuration.
pub fn header(prefix: &str, config: &str) -> String {
    format!("{prefix} anosov {VERSION}\n{prefix} config: {config}\n")
}

pub struct Artifacts {
    dir: Option<PathBuf>,
    config: String,
}

impl Artifacts {
    pub fn new(dir: Option<PathBuf>, config: String) -> std::io::Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(Self { dir, config })
    }

    /// Writes `body` under the output directory, prefixed by the header in
    /// the file's comment syntax. Without a directory nothing is written.
    pub fn write(&self, name: &str, body: &str) -> std::io::Result<Option<PathBuf>> {
        let Some(dir) = &self.dir else { return Ok(None) };
        let path = dir.join(name);
        let text = if name.ends_with(".svg") {
            let escaped = self.config.replace("--", "- -");
            format!("<!-- anosov {VERSION} -->\n<!-- config: {escaped} -->\n{body}")
        } else {
            format!("{}{body}", header("#", &self.config))
        };
        fs::write(&path, text)?;
        Ok(Some(path))
    }
}

pub fn ensure_exists(path: &Path, flag: &str) -> Result<(), String> {
    if path.is_file() {
        Ok(())
    } else {
        Err(format!("{flag}: cannot read `{}`", path.display()))
    }
}
