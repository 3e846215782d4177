//! Run context shared by all subcommands: seed, caps, input file, errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Mutex;

use soficlab::metric::Permutation;
use soficlab::Ratio;

#[derive(Debug)]
pub enum CliError {
    Core(soficlab::Error),
    Usage(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<soficlab::Error> for CliError {
    fn from(e: soficlab::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub struct Ctx {
    pub seed: u64,
    input: Option<PathBuf>,
    cap_enum: Option<u128>,
    cap_work: Option<u128>,
    cap_degree: Option<usize>,
    used: Mutex<BTreeMap<&'static str, String>>,
}

impl Ctx {
    pub fn new(
        seed: u64,
        input: Option<PathBuf>,
        cap_enum: Option<u128>,
        cap_work: Option<u128>,
        cap_degree: Option<usize>,
    ) -> Self {
        Ctx { seed, input, cap_enum, cap_work, cap_degree, used: Mutex::new(BTreeMap::new()) }
    }

    fn note(&self, key: &'static str, v: String) {
        self.used.lock().expect("cap log").insert(key, v);
    }

    pub fn cap_enum(&self, default: u128) -> u128 {
        let v = self.cap_enum.unwrap_or(default);
        self.note("cap_enum", v.to_string());
        v
    }

    pub fn cap_work(&self, default: u128) -> u128 {
        let v = self.cap_work.unwrap_or(default);
        self.note("cap_work", v.to_string());
        v
    }

    pub fn cap_degree(&self, default: usize) -> usize {
        let v = self.cap_degree.unwrap_or(default);
        self.note("cap_degree", v.to_string());
        v
    }

    /// Effective caps, `unused` for the ones the command never consulted.
    pub fn caps_echo(&self) -> Vec<(&'static str, String)> {
        let used = self.used.lock().expect("cap log");
        ["cap_enum", "cap_work", "cap_degree"]
            .into_iter()
            .map(|k| (k, used.get(k).cloned().unwrap_or_else(|| "unused".into())))
            .collect()
    }

    pub fn has_input(&self) -> bool {
        self.input.is_some()
    }

    pub fn input(&self) -> CliResult<String> {
        let path = self.input.as_ref().ok_or_else(|| usage("this command needs --in <path>"))?;
        read_file(path)
    }

    pub fn input_path(&self) -> Option<&std::path::Path> {
        self.input.as_deref()
    }
}

pub fn read_file(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &std::path::Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn perm(text: &str) -> CliResult<Permutation> {
    Ok(text.parse::<Permutation>()?)
}

/// Permutations separated by `;`.
pub fn perms(text: &str) -> CliResult<Vec<Permutation>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(perm).collect()
}

pub fn ratio(text: &str) -> CliResult<Ratio> {
    let t = text.trim();
    let r: Ratio = t.parse().map_err(|_| usage(format!("expected a fraction like 1/10, got `{t}`")))?;
    Ok(r)
}

pub fn list<T: FromStr>(text: &str) -> CliResult<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| usage(format!("bad list entry `{s}`"))))
        .collect()
}

/// Integer vectors `1,0;0,1`.
pub fn vectors(text: &str) -> CliResult<Vec<Vec<i64>>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(list::<i64>).collect()
}

/// `a..b` (exclusive) or a comma list.
pub fn range_or_list(text: &str) -> CliResult<Vec<usize>> {
    if let Some((a, b)) = text.split_once("..") {
        let (inclusive, b) = match b.strip_prefix('=') {
            Some(rest) => (true, rest),
            None => (false, b),
        };
        let a: usize = a.trim().parse().map_err(|_| usage(format!("bad range `{text}`")))?;
        let b: usize = b.trim().parse().map_err(|_| usage(format!("bad range `{text}`")))?;
        return Ok(if inclusive { (a..=b).collect() } else { (a..b).collect() });
    }
    list(text)
}
