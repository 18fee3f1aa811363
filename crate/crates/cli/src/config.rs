use std::ffi::OsString;
use std::fs;

use anyhow::{bail, Context, Result};

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`", i + 1);
        };
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() {
            bail!("config line {}: empty key", i + 1);
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Result<Option<OsString>> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return match it.next() {
                Some(v) => Ok(Some(v.clone())),
                None => bail!("--config needs a file"),
            };
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Ok(Some(v.into()));
        }
    }
    Ok(None)
}

fn on_command_line(argv: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    argv.iter().skip(1).any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&prefix)
    })
}

/// Appends `--key value` for every config entry whose flag is not already
/// given, so explicit flags win over the file and the file wins over
/// environment defaults.
pub fn inject(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).with_context(|| format!("cannot read config {}", path.to_string_lossy()))?;
    let mut out = argv.clone();
    for (k, v) in parse_config(&text)? {
        if k == "config" || on_command_line(&argv, &k) {
            continue;
        }
        out.push(format!("--{k}").into());
        out.push(v.into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_pairs_and_comments() {
        let c = parse_config("# runs\np = 3\n--seed=7 # fixed\n\n").unwrap();
        assert_eq!(c, vec![("p".into(), "3".into()), ("seed".into(), "7".into())]);
        assert!(parse_config("p 3").is_err());
    }

    #[test]
    fn explicit_flags_win() {
        let dir = std::env::temp_dir().join(format!("hilbertlab-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let file = dir.join("run.cfg");
        fs::write(&file, "p = 3\nseed = 9\n").unwrap();
        let argv = args(&["hilbertlab", "constants", "--config", file.to_str().unwrap(), "--p=4"]);
        let out = inject(argv).unwrap();
        let tail: Vec<_> = out[5..].iter().map(|s| s.to_string_lossy().into_owned()).collect();
        assert_eq!(tail, vec!["--seed", "9"]);
        assert_eq!(inject(args(&["hilbertlab", "constants"])).unwrap().len(), 2);
    }
}
