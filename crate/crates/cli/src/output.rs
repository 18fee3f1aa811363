use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};

/// 17 significant digits, fixed notation for moderate magnitudes.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..17).contains(&exp) {
        format!("{x:.*}", (16 - exp) as usize)
    } else {
        sci
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

/// Six decimals with trailing zeros removed.
pub fn short(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers()?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn get<'a>(&self, row: &'a [String], name: &str) -> Option<&'a str> {
        self.column(name).map(|i| row[i].as_str())
    }
}

/// `sha256("blob <len>\0" + content)`, the object hash git uses in sha256
/// repositories.
pub fn git_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    hex::encode(h.finalize())
}

/// What a subcommand produced, before it is written anywhere.
pub struct RunRecord {
    pub subcommand: &'static str,
    pub config: Vec<(String, String)>,
    pub inputs: Vec<PathBuf>,
    pub table: Table,
    pub svg: Option<String>,
    /// Printed instead of the CSV when there is no `--out`.
    pub stdout: Option<String>,
    pub gates_ok: bool,
}

impl RunRecord {
    pub fn new(subcommand: &'static str, table: Table) -> Self {
        Self {
            subcommand,
            config: Vec::new(),
            inputs: Vec::new(),
            table,
            svg: None,
            stdout: None,
            gates_ok: true,
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.into(), value.to_string()));
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    pub entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        match self.get(key) {
            Some(v) => Ok(v),
            None => bail!("manifest has no `{key}` entry"),
        }
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .with_context(|| format!("manifest line {}: expected key=value", i + 1))?;
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(Self { entries })
    }
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    out.with_file_name(name)
}

pub fn manifest_path(out: &Path) -> PathBuf {
    sibling(out, ".manifest")
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes the CSV (and SVG) plus the manifest, or prints to stdout when
/// there is no output path.
pub fn emit(record: &RunRecord, out: Option<&Path>, id: Option<&str>) -> Result<()> {
    let csv = record.table.to_csv()?;
    let Some(out) = out else {
        if record.svg.is_some() {
            bail!("csv+svg output needs --out");
        }
        let text = record.stdout.as_deref().unwrap_or(&csv);
        std::io::stdout().write_all(text.as_bytes())?;
        return Ok(());
    };
    if let Some(text) = &record.stdout {
        std::io::stdout().write_all(text.as_bytes())?;
    }

    let mut echo = format!("subcommand={}\n", record.subcommand);
    let mut inputs = Vec::new();
    for (k, path) in record.inputs.iter().enumerate() {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        let hash = git_hash(&bytes);
        echo.push_str(&format!("input_hash={hash}\n"));
        inputs.push((k + 1, path.display().to_string(), hash));
    }
    for (k, v) in &record.config {
        echo.push_str(&format!("{k}={v}\n"));
    }
    let id = match id {
        Some(id) => id.to_string(),
        None => format!("{}-{}", record.subcommand, &git_hash(echo.as_bytes())[..12]),
    };

    write_file(out, csv.as_bytes())?;
    let mut m = Manifest::default();
    let mut put = |k: String, v: String| m.entries.push((k, v));
    put("id".into(), id);
    put("subcommand".into(), record.subcommand.into());
    put("output".into(), file_name(out));
    put("output_hash".into(), git_hash(csv.as_bytes()));
    if let Some(svg) = &record.svg {
        let path = sibling(out, ".svg");
        write_file(&path, svg.as_bytes())?;
        put("svg".into(), file_name(&path));
        put("svg_hash".into(), git_hash(svg.as_bytes()));
    }
    for (k, path, hash) in inputs {
        put(format!("input.{k}"), path);
        put(format!("input_hash.{k}"), hash);
    }
    for (k, v) in &record.config {
        put(format!("config.{k}"), v.clone());
    }
    put("gates_ok".into(), record.gates_ok.to_string());
    write_file(&manifest_path(out), m.render().as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let v = num(std::f64::consts::LN_2 / std::f64::consts::PI);
        assert!(v.starts_with("0.220635600152651"), "{v}");
        assert_eq!(v.len(), "0.".len() + 17);
        assert_eq!(num(1.0), "1.0000000000000000");
        assert!(num(-2.5e-9).ends_with("e-9"));
        assert_eq!(num(0.0), "0");
        for x in [1.0 / 3.0, -7.25e20, 1e-300, 123456.789] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn short_trims() {
        assert_eq!(short(4.0), "4");
        assert_eq!(short(1.0 + 2f64.sqrt()), "2.414214");
        assert_eq!(short(3.5), "3.5");
    }

    #[test]
    fn git_style_hash() {
        // `git hash-object --object-format=sha256` of an empty blob
        assert_eq!(
            git_hash(b""),
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }

    #[test]
    fn table_round_trip() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x/y".into()]);
        t.push(vec!["".into(), "2".into()]);
        assert_eq!(Table::from_csv(&t.to_csv().unwrap()).unwrap(), t);
    }

    #[test]
    fn manifest_round_trip() {
        let m = Manifest {
            entries: vec![("id".into(), "a=b".into()), ("output".into(), "o.csv".into())],
        };
        assert_eq!(Manifest::parse(&m.render()).unwrap(), m);
        assert_eq!(m.get("id"), Some("a=b"));
    }
}
