//! Coded ethnographic trait tables, additive indices and pairwise correlations.

use std::collections::{HashMap, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EthnoError {
    #[error("trait table has no header row")]
    MissingHeader,

    #[error("row {row}, column `{column}`: code `{value}` is not one of 0, 1, 2, 3")]
    InvalidCode {
        row: usize,
        column: String,
        value: String,
    },

    #[error("duplicate society id `{0}`")]
    DuplicateSociety(String),

    #[error("duplicate trait column `{0}`")]
    DuplicateTrait(String),

    #[error("row {row} has {found} fields, header has {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("index `{index}` refers to unknown column `{column}`")]
    UnknownColumn { index: String, column: String },

    #[error("index `{index}` lists column `{column}` as both positive and negative")]
    OverlappingTraits { index: String, column: String },

    #[error("index `{index}` includes unknown index `{include}`")]
    UnknownInclude { index: String, include: String },

    #[error("no index named `{0}`")]
    UnknownIndex(String),

    #[error("correlation undefined: series has zero variance")]
    ZeroVariance,

    #[error("correlation needs at least 2 observations, got {0}")]
    TooFewObservations(usize),

    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("index specification: {0}")]
    Spec(#[from] toml::de::Error),
}

pub type EthnoResult<T> = std::result::Result<T, EthnoError>;

/// Societies by coded traits; `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraitTable {
    pub societies: Vec<String>,
    pub traits: Vec<String>,
    pub cells: Vec<Vec<Option<u8>>>,
}

impl TraitTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.traits.iter().position(|t| t == name)
    }

    pub fn len(&self) -> usize {
        self.societies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.societies.is_empty()
    }
}

/// Reads comma-separated text: a header of trait names after the society
/// id column, then one row per society.
pub fn load_trait_table<R: Read>(source: R) -> EthnoResult<TraitTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut records = rdr.records();
    let header = records.next().ok_or(EthnoError::MissingHeader)??;
    if header.is_empty() {
        return Err(EthnoError::MissingHeader);
    }
    let traits: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut seen = HashSet::new();
    for t in &traits {
        if !seen.insert(t.as_str()) {
            return Err(EthnoError::DuplicateTrait(t.clone()));
        }
    }
    let expected = traits.len() + 1;
    let mut societies = Vec::new();
    let mut cells = Vec::new();
    let mut ids = HashSet::new();
    for (i, rec) in records.enumerate() {
        let rec = rec?;
        let row = i + 2;
        if rec.len() != expected {
            return Err(EthnoError::Ragged {
                row,
                expected,
                found: rec.len(),
            });
        }
        let id = rec[0].to_string();
        if !ids.insert(id.clone()) {
            return Err(EthnoError::DuplicateSociety(id));
        }
        let parsed = rec
            .iter()
            .skip(1)
            .zip(&traits)
            .map(|(v, column)| match v {
                "" => Ok(None),
                "0" => Ok(Some(0)),
                "1" => Ok(Some(1)),
                "2" => Ok(Some(2)),
                "3" => Ok(Some(3)),
                _ => Err(EthnoError::InvalidCode {
                    row,
                    column: column.clone(),
                    value: v.to_string(),
                }),
            })
            .collect::<EthnoResult<Vec<_>>>()?;
        societies.push(id);
        cells.push(parsed);
    }
    Ok(TraitTable {
        societies,
        traits,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingPolicy {
    #[default]
    AsZero,
}

/// Additive index: positive codes minus negative codes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSpec {
    pub name: String,
    #[serde(default)]
    pub positive_traits: Vec<String>,
    #[serde(default)]
    pub negative_traits: Vec<String>,
    #[serde(default)]
    pub missing_policy: MissingPolicy,
}

impl IndexSpec {
    pub fn validate(&self) -> EthnoResult<()> {
        let pos: HashSet<&str> = self.positive_traits.iter().map(String::as_str).collect();
        match self
            .negative_traits
            .iter()
            .find(|c| pos.contains(c.as_str()))
        {
            Some(c) => Err(EthnoError::OverlappingTraits {
                index: self.name.clone(),
                column: c.clone(),
            }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    index: Vec<SpecEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecEntry {
    name: String,
    #[serde(default)]
    positive: Vec<String>,
    #[serde(default)]
    negative: Vec<String>,
    #[serde(default)]
    includes: Vec<String>,
    #[serde(default)]
    missing: MissingPolicy,
}

const BUILTIN_SPECS: &str = include_str!("../data/indices.toml");

/// Parses index definitions; `includes` entries are expanded in file order.
pub fn parse_index_specs(text: &str) -> EthnoResult<Vec<IndexSpec>> {
    let file: SpecFile = toml::from_str(text)?;
    let mut out: Vec<IndexSpec> = Vec::with_capacity(file.index.len());
    for e in file.index {
        let mut spec = IndexSpec {
            name: e.name,
            positive_traits: e.positive,
            negative_traits: e.negative,
            missing_policy: e.missing,
        };
        for inc in &e.includes {
            let base =
                out.iter()
                    .find(|s| &s.name == inc)
                    .ok_or_else(|| EthnoError::UnknownInclude {
                        index: spec.name.clone(),
                        include: inc.clone(),
                    })?;
            spec.positive_traits
                .extend(base.positive_traits.iter().cloned());
            spec.negative_traits
                .extend(base.negative_traits.iter().cloned());
        }
        spec.validate()?;
        out.push(spec);
    }
    Ok(out)
}

/// The eight shipped indices.
pub fn builtin_index_specs() -> Vec<IndexSpec> {
    parse_index_specs(BUILTIN_SPECS).expect("bundled index definitions parse")
}

pub fn find_spec<'a>(specs: &'a [IndexSpec], name: &str) -> EthnoResult<&'a IndexSpec> {
    specs
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| EthnoError::UnknownIndex(name.to_string()))
}

/// Per-society scores, in table row order.
pub fn build_index(table: &TraitTable, spec: &IndexSpec) -> EthnoResult<Vec<f64>> {
    spec.validate()?;
    let resolve = |cols: &[String]| -> EthnoResult<Vec<usize>> {
        cols.iter()
            .map(|c| {
                table.column(c).ok_or_else(|| EthnoError::UnknownColumn {
                    index: spec.name.clone(),
                    column: c.clone(),
                })
            })
            .collect()
    };
    let pos = resolve(&spec.positive_traits)?;
    let neg = resolve(&spec.negative_traits)?;
    let code = |row: &[Option<u8>], j: usize| match spec.missing_policy {
        MissingPolicy::AsZero => row[j].unwrap_or(0) as i64,
    };
    Ok(table
        .cells
        .iter()
        .map(|row| {
            let p: i64 = pos.iter().map(|&j| code(row, j)).sum();
            let n: i64 = neg.iter().map(|&j| code(row, j)).sum();
            (p - n) as f64
        })
        .collect())
}

/// Pearson correlation with a two-tailed Student t test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlation {
    pub r: f64,
    pub n: usize,
    /// `None` below 3 observations.
    pub t: Option<f64>,
    pub p_value: Option<f64>,
    pub significant_95: bool,
}

pub fn correlate(x: &[f64], y: &[f64]) -> EthnoResult<Correlation> {
    if x.len() != y.len() {
        return Err(EthnoError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return Err(EthnoError::TooFewObservations(n));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(EthnoError::ZeroVariance);
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    if n < 3 {
        return Ok(Correlation {
            r,
            n,
            t: None,
            p_value: None,
            significant_95: false,
        });
    }
    let df = (n - 2) as f64;
    let (t, p) = if r.abs() == 1.0 {
        (r.signum() * f64::INFINITY, 0.0)
    } else {
        let t = r * (df / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
        (t, 2.0 * (1.0 - dist.cdf(t.abs())))
    };
    Ok(Correlation {
        r,
        n,
        t: Some(t),
        p_value: Some(p),
        significant_95: p < 0.05,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub pair: (String, String),
    #[serde(flatten)]
    pub stats: Correlation,
}

/// Rows and columns of the published correlation table.
pub fn default_pairs() -> Vec<(String, String)> {
    let rows = [
        "direct_production",
        "social_production",
        "knowledge_provision",
        "combined_production",
        "titular_duties",
        "openness",
        "positive_treatment",
    ];
    let cols = ["positive_treatment", "positive_inculcation"];
    rows.iter()
        .flat_map(|r| cols.iter().map(move |c| (r.to_string(), c.to_string())))
        .filter(|(r, c)| r != c)
        .collect()
}

/// Scores every index once, then correlates the requested pairs.
pub fn correlate_pairs(
    table: &TraitTable,
    specs: &[IndexSpec],
    pairs: &[(String, String)],
) -> EthnoResult<Vec<CorrelationResult>> {
    let mut scores: HashMap<&str, Vec<f64>> = HashMap::new();
    for (a, b) in pairs {
        for name in [a, b] {
            if !scores.contains_key(name.as_str()) {
                let spec = find_spec(specs, name)?;
                scores.insert(spec.name.as_str(), build_index(table, spec)?);
            }
        }
    }
    pairs
        .iter()
        .map(|(a, b)| {
            Ok(CorrelationResult {
                pair: (a.clone(), b.clone()),
                stats: correlate(&scores[a.as_str()], &scores[b.as_str()])?,
            })
        })
        .collect()
}
