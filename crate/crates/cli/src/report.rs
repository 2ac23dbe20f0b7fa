//! Output files. Every file starts with (or, for JSON, wraps its data in) a
//! meta block naming the tool version, command, seed and the resolved
//! config, and every float is printed with six decimals, so re-running the
//! echoed config reproduces the file byte for byte.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::value::RawValue;

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Six-decimal text of `x`, without a sign on zero.
pub fn f6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Pretty JSON whose floats are printed like [`f6`].
struct Fixed6<'a>(PrettyFormatter<'a>);

impl Formatter for Fixed6<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(f6(v).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<S: Serialize + ?Sized>(value: &S) -> CliResult<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed6(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Domain(format!("serializing output: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes utf-8"))
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    /// Plain JSON rather than six-decimal, so the config round-trips exactly.
    config: &'a RawValue,
}

#[derive(Serialize)]
struct Document<'a, D: Serialize + ?Sized> {
    meta: Meta<'a>,
    data: &'a D,
}

/// Writes a command's files into the output directory.
pub struct Reporter {
    cfg: RunConfig,
    config_json: Box<RawValue>,
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Reporter {
    pub fn new(cfg: &RunConfig) -> CliResult<Self> {
        let config_json = serde_json::to_string(cfg)
            .and_then(RawValue::from_string)
            .map_err(|e| CliError::Config(format!("config: {e}")))?;
        Ok(Self { cfg: cfg.clone(), config_json, dir: cfg.out_dir(), written: Vec::new() })
    }

    fn meta(&self) -> Meta<'_> {
        Meta {
            tool: "weldq",
            version: VERSION,
            command: &self.cfg.command,
            seed: self.cfg.seed,
            config: &self.config_json,
        }
    }

    /// `#`-prefixed meta lines for delimited and text outputs.
    fn comment_header(&self) -> String {
        format!(
            "# weldq {VERSION}\n# command: {}\n# seed: {}\n# config: {}\n",
            self.cfg.command,
            self.cfg.seed,
            self.config_json.get()
        )
    }

    fn path(&self, name: &str, f: Format) -> PathBuf {
        self.dir.join(format!("{}_{name}.{}", self.cfg.command, f.ext()))
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn emit(&mut self, path: PathBuf, contents: &str) -> CliResult<()> {
        write_atomic(&path, contents.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    /// A delimited table; cells are preformatted text.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
        if !self.cfg.wants(Format::Csv) {
            return Ok(());
        }
        let mut w = csv::Writer::from_writer(self.comment_header().into_bytes());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
        let text = String::from_utf8(bytes).expect("csv of utf-8 cells");
        self.emit(self.path(name, Format::Csv), &text)
    }

    pub fn json<D: Serialize + ?Sized>(&mut self, name: &str, data: &D) -> CliResult<()> {
        if !self.cfg.wants(Format::Json) {
            return Ok(());
        }
        let text = self.json_text(data)?;
        self.emit(self.path(name, Format::Json), &text)
    }

    /// The JSON document as it would be written, meta included.
    pub fn json_text<D: Serialize + ?Sized>(&self, data: &D) -> CliResult<String> {
        to_json(&Document { meta: self.meta(), data })
    }

    pub fn svg(&mut self, name: &str, body: &str) -> CliResult<()> {
        if !self.cfg.wants(Format::Svg) {
            return Ok(());
        }
        let meta = to_json(&self.meta())?.replace("--", "- -");
        let text = body.replacen("<svg ", &format!("<!-- weldq meta\n{meta}-->\n<svg "), 1);
        self.emit(self.path(name, Format::Svg), &text)
    }

    pub fn text(&mut self, name: &str, body: &str) -> CliResult<()> {
        if !self.cfg.wants(Format::Txt) {
            return Ok(());
        }
        let text = format!("{}{body}", self.comment_header());
        self.emit(self.path(name, Format::Txt), &text)
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_decimals() {
        assert_eq!(f6(0.5), "0.500000");
        assert_eq!(f6(-1e-9), "0.000000");
        assert_eq!(f6(-0.25), "-0.250000");
        assert_eq!(f6(1234.0), "1234.000000");
    }

    #[test]
    fn json_floats_are_fixed() {
        #[derive(Serialize)]
        struct S {
            x: f64,
            n: u64,
            v: Vec<f64>,
        }
        let t = to_json(&S { x: 0.1, n: 3, v: vec![1.0, 2.5] }).unwrap();
        assert!(t.contains("\"x\": 0.100000"));
        assert!(t.contains("\"n\": 3"));
        assert!(t.contains("2.500000"));
        let back: serde_json::Value = serde_json::from_str(&t).unwrap();
        assert_eq!(back["v"][1], 2.5);
    }

    #[test]
    fn meta_config_round_trips() {
        let cfg = RunConfig { command: "interval".into(), alpha: 0.0123456789, ..Default::default() };
        let r = Reporter::new(&cfg).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&r.json_text(&1u8).unwrap()).unwrap();
        let back: RunConfig = serde_json::from_value(doc["meta"]["config"].clone()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
