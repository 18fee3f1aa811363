use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::args::{Format, ReportArgs};
use crate::output::{git_hash, num, short, Manifest, RunRecord, Table};
use crate::svg::{convergence_plot, Ceiling, Series};

pub const HEADER: [&str; 6] = ["id", "experiment", "target", "estimate", "gap", "pass"];

fn gap(target: &str, estimate: &str) -> String {
    match (target.parse::<f64>(), estimate.parse::<f64>()) {
        (Ok(t), Ok(e)) => num(t - e),
        _ => String::new(),
    }
}

/// `false` if any gate failed, `true` if all present gates passed, empty
/// when there are none.
fn combine<'a>(passes: impl Iterator<Item = &'a str>) -> String {
    let mut seen = false;
    for p in passes.filter(|p| !p.is_empty()) {
        if p != "true" {
            return "false".into();
        }
        seen = true;
    }
    if seen {
        "true".into()
    } else {
        String::new()
    }
}

fn field<'a>(t: &Table, row: &'a [String], name: &str) -> Result<&'a str> {
    t.get(row, name).with_context(|| format!("CSV has no `{name}` column"))
}

struct Summary {
    rows: Vec<Vec<String>>,
    series: Option<(Series, Option<Ceiling>)>,
}

fn summarize(id: &str, m: &Manifest, t: &Table) -> Result<Summary> {
    let sub = m.require("subcommand")?;
    let mut rows = Vec::new();
    let mut series = None;
    let mut row = |experiment: String, target: &str, estimate: &str, pass: String| {
        rows.push(vec![id.to_string(), experiment, target.to_string(), estimate.to_string(), gap(target, estimate), pass]);
    };
    match sub {
        "norm-estimate" => {
            let Some(last) = t.rows.last() else {
                bail!("manifest `{id}`: output has no rows");
            };
            let op = field(t, last, "operator")?;
            let p = field(t, last, "p")?;
            let gauges = field(t, last, "gauges")?;
            let target = field(t, last, "ceiling")?;
            let pass = combine(t.rows.iter().map(|r| field(t, r, "pass").unwrap_or("")));
            row(
                format!("norm-estimate {op} p={} {gauges} {}", short(p.parse().unwrap_or(f64::NAN)), field(t, last, "constraint")?),
                target,
                field(t, last, "estimate")?,
                pass,
            );
            let points = t
                .rows
                .iter()
                .map(|r| Ok((field(t, r, "size")?.parse::<f64>()?, field(t, r, "estimate")?.parse::<f64>()?)))
                .collect::<Result<Vec<_>>>()?;
            let ceiling = target.parse::<f64>().ok().map(|c| Ceiling {
                label: if gauges == "norm" {
                    format!("cot(π/2p*) = {}", short(c))
                } else {
                    format!("cot(π/2p*)^q = {}", short(c))
                },
                value: c,
            });
            series = Some((
                Series {
                    label: id.to_string(),
                    points,
                },
                ceiling,
            ));
        }
        "simulate" => {
            let mut any = false;
            for r in &t.rows {
                let target = field(t, r, "target")?;
                if target.is_empty() {
                    continue;
                }
                any = true;
                let name = format!("simulate {}:{}", field(t, r, "experiment")?, field(t, r, "quantity")?);
                row(name, target, field(t, r, "estimate")?, field(t, r, "pass")?.to_string());
            }
            if !any {
                if let Some(r) = t.rows.first() {
                    let name = format!("simulate {}:{}", field(t, r, "experiment")?, field(t, r, "quantity")?);
                    row(name, "", field(t, r, "estimate")?, String::new());
                }
            }
        }
        "constants" => {
            for r in &t.rows {
                let c = field(t, r, "pichorides")?;
                row(format!("constants p={}", field(t, r, "p")?), c, c, String::new());
            }
        }
        "transform" => {
            let op = m.get("config.op").unwrap_or("?");
            if let Some(r) = t.rows.first() {
                row(format!("transform {op}"), "", field(t, r, "v1")?, String::new());
            }
        }
        "report" => {
            for r in &t.rows {
                if r.len() != HEADER.len() {
                    bail!("manifest `{id}`: report CSV has {} columns", r.len());
                }
                rows.push(r.clone());
            }
        }
        other => bail!("manifest `{id}`: unknown subcommand `{other}`"),
    }
    Ok(Summary { rows, series })
}

pub fn run(a: &ReportArgs) -> Result<RunRecord> {
    let mut table = Table::new(&HEADER);
    let mut seen: BTreeMap<String, (String, String)> = BTreeMap::new();
    let mut series = Vec::new();
    let mut ceilings: Vec<Ceiling> = Vec::new();
    for path in &a.manifests {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read manifest {}", path.display()))?;
        let m = Manifest::parse(&text).with_context(|| format!("in {}", path.display()))?;
        let id = m.require("id")?.to_string();
        let hash = m.require("output_hash")?.to_string();
        if let Some((prev, prev_hash)) = seen.get(&id) {
            if *prev_hash != hash {
                bail!(
                    "conflicting manifests for id `{id}`: {} and {} record different output hashes",
                    prev,
                    path.display()
                );
            }
            continue;
        }
        seen.insert(id.clone(), (path.display().to_string(), hash.clone()));

        let dir = path.parent().unwrap_or(Path::new("."));
        let out = dir.join(m.require("output")?);
        let bytes = match fs::read(&out) {
            Ok(b) => b,
            Err(_) => bail!("manifest `{id}`: output file {} is missing", out.display()),
        };
        if git_hash(&bytes) != hash {
            bail!("manifest `{id}`: output file {} does not match its recorded hash", out.display());
        }
        let t = Table::from_csv(std::str::from_utf8(&bytes)?).with_context(|| format!("manifest `{id}`"))?;
        let s = summarize(&id, &m, &t)?;
        for r in s.rows {
            table.push(r);
        }
        if let Some((ser, ceiling)) = s.series {
            series.push(ser);
            if let Some(c) = ceiling {
                if !ceilings.iter().any(|e| e.label == c.label) {
                    ceilings.push(c);
                }
            }
        }
    }

    let pass_col = HEADER.len() - 1;
    let ok = table.rows.iter().all(|r| r[pass_col] != "false");
    let mut rec = RunRecord::new("report", table);
    rec.gates_ok = ok;
    rec.inputs = a.manifests.clone();
    if a.format == Format::CsvSvg {
        rec.svg = Some(convergence_plot("norm estimates by truncation size", &series, &ceilings));
    }
    rec.set("manifests", a.manifests.len());
    Ok(rec)
}
