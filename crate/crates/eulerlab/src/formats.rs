//! JSON file formats and command-line shorthands.

use std::collections::BTreeMap;
use std::path::Path;

use eulerlab_core::extensions::{BaseGroup, FiniteGroupTable, TwoCocycle};
use eulerlab_core::ivanovturaev::VectorTuple;
use eulerlab_core::lifts::{Lift, Matrix2};
use eulerlab_core::quasimorphism::OddSequence;
use eulerlab_core::surfacereps::{relator_translation, LiftedRep, SurfacePresentation};
use eulerlab_core::words::reduce_word;
use eulerlab_core::Word;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Largest relator residual accepted when loading a closed-surface file.
pub const RELATOR_TOLERANCE: f64 = 1e-6;

/// A lift as stored in JSON, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LiftSpec {
    /// `x -> x + alpha`.
    Rotation {
        /// Translation amount.
        alpha: f64,
    },
    /// Piecewise-linear lift through the breakpoints of one period.
    Pl {
        /// `[x, y]` pairs, increasing in both coordinates.
        breakpoints: Vec<[f64; 2]>,
        /// Integer added after the map.
        #[serde(default)]
        shift: i64,
    },
    /// Boundary action of a determinant-one matrix.
    Mobius {
        /// `[[a, b], [c, d]]`.
        matrix: Matrix2,
        /// Integer fixing the lift.
        #[serde(default)]
        branch: i64,
    },
    /// `factors[0] o factors[1] o ...`.
    Compose {
        /// The factors, outermost first.
        factors: Vec<LiftSpec>,
    },
    /// Inverse of a lift.
    Inverse {
        /// The lift to invert.
        of: Box<LiftSpec>,
    },
    /// `x -> lift(x) + by`.
    Translate {
        /// Integer translation.
        by: i64,
        /// The lift.
        lift: Box<LiftSpec>,
    },
}

impl LiftSpec {
    /// Builds the lift.
    pub fn to_lift(&self) -> Result<Lift, CliError> {
        Ok(match self {
            LiftSpec::Rotation { alpha } => Lift::rotation(*alpha),
            LiftSpec::Pl { breakpoints, shift } => {
                Lift::pl(breakpoints.iter().map(|&[x, y]| (x, y)).collect(), *shift)?
            }
            LiftSpec::Mobius { matrix, branch } => Lift::mobius(*matrix, *branch)?,
            LiftSpec::Compose { factors } => {
                let mut acc = Lift::identity();
                for f in factors.iter().rev() {
                    acc = f.to_lift()?.compose(&acc);
                }
                acc
            }
            LiftSpec::Inverse { of } => of.to_lift()?.inverse(),
            LiftSpec::Translate { by, lift } => lift.to_lift()?.translate(*by),
        })
    }
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema {
        location: location.into(),
        message: message.into(),
    }
}

fn numbers(location: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| schema(location, format!("`{t}` is not a number")))
        })
        .collect()
}

/// Reads a JSON document from a file.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_json(&path.display().to_string(), &text)
}

/// Parses a JSON document, reporting the position of any error.
pub fn parse_json<T: for<'de> Deserialize<'de>>(origin: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        schema(
            format!("{origin}:{}:{}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

/// Parses a lift argument: `rotation:A`, `mobius:a,b,c,d[:branch]`,
/// `pl:x,y;x,y;...[:shift]`, `identity`, inline JSON, or a JSON file.
pub fn parse_lift_arg(arg: &str) -> Result<Lift, CliError> {
    let arg = arg.trim();
    if arg.starts_with('{') {
        return parse_json::<LiftSpec>("--lift", arg)?.to_lift();
    }
    let (kind, rest) = arg.split_once(':').unwrap_or((arg, ""));
    let mut parts = rest.split(':');
    let body = parts.next().unwrap_or("");
    let extra = parts.next();
    let int_extra = |what: &str| -> Result<i64, CliError> {
        extra.map_or(Ok(0), |e| {
            e.trim()
                .parse()
                .map_err(|_| schema("--lift", format!("{what} `{e}` is not an integer")))
        })
    };
    match kind {
        "identity" => Ok(Lift::identity()),
        "rotation" => {
            let v = numbers("--lift", body)?;
            match v.as_slice() {
                [a] => Ok(Lift::rotation(*a)),
                _ => Err(schema("--lift", "rotation takes one number")),
            }
        }
        "mobius" => {
            let v = numbers("--lift", body)?;
            let [a, b, c, d] = v.as_slice() else {
                return Err(schema("--lift", "mobius takes four entries a,b,c,d"));
            };
            Ok(Lift::mobius([[*a, *b], [*c, *d]], int_extra("branch")?)?)
        }
        "pl" => {
            let mut pts = Vec::new();
            for pair in body.split(';') {
                match numbers("--lift", pair)?.as_slice() {
                    [x, y] => pts.push((*x, *y)),
                    _ => return Err(schema("--lift", format!("breakpoint `{pair}` is not x,y"))),
                }
            }
            Ok(Lift::pl(pts, int_extra("shift")?)?)
        }
        _ if Path::new(arg).exists() => read_json::<LiftSpec>(Path::new(arg))?.to_lift(),
        _ => Err(schema("--lift", format!("unrecognised lift `{arg}`"))),
    }
}

/// A representation file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    /// Genus of the surface.
    pub genus: u32,
    /// Number of punctures.
    #[serde(default)]
    pub punctures: u32,
    /// Lifts of the free generators, keyed `a1, b1, ..., c1, ...`.
    pub generators: BTreeMap<String, LiftSpec>,
}

impl RepFile {
    /// Validates the generator names and builds the representation.
    pub fn to_rep(&self) -> Result<LiftedRep, CliError> {
        let pres = SurfacePresentation::new(self.genus, self.punctures);
        let names = pres.free_generator_names();
        if let Some(extra) = self.generators.keys().find(|k| !names.contains(k)) {
            return Err(schema(
                format!("generators.{extra}"),
                format!("unexpected generator; expected exactly {}", names.join(", ")),
            ));
        }
        let mut lifts = Vec::with_capacity(names.len());
        for name in &names {
            let spec = self
                .generators
                .get(name)
                .ok_or_else(|| schema(format!("generators.{name}"), "missing generator"))?;
            lifts.push(spec.to_lift().map_err(|e| match e {
                CliError::Lift(inner) => schema(format!("generators.{name}"), inner.to_string()),
                other => other,
            })?);
        }
        let rep = LiftedRep::new(pres, lifts)?;
        if self.punctures == 0 {
            relator_translation(&rep, RELATOR_TOLERANCE)?;
        }
        Ok(rep)
    }
}

/// Loads and validates a representation file.
pub fn parse_rep(path: &Path) -> Result<LiftedRep, CliError> {
    read_json::<RepFile>(path)?.to_rep()
}

/// Parses `1,2,-1` (or an empty string) as a word of the given rank.
pub fn parse_word(rank: u32, s: &str) -> Result<Word, CliError> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    let letters: Vec<i32> = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| schema("word", format!("`{t}` is not a signed generator index")))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(reduce_word(rank, &letters)?)
}

/// Pairs of words for `tau`, as `[[[1, 2], [-1]], ...]`.
pub fn parse_pairs(rank: u32, path: &Path) -> Result<Vec<(Word, Word)>, CliError> {
    let raw: Vec<(Vec<i32>, Vec<i32>)> = read_json(path)?;
    raw.iter()
        .map(|(u, v)| Ok((reduce_word(rank, u)?, reduce_word(rank, v)?)))
        .collect()
}

/// An odd sequence: `sign`, inline JSON `{"n": value}`, or a JSON file.
pub fn parse_alpha(arg: &str) -> Result<OddSequence, CliError> {
    let arg = arg.trim();
    if arg == "sign" {
        return Ok(OddSequence::unit_sign());
    }
    let map: BTreeMap<String, f64> = if arg.starts_with('{') {
        parse_json("--alpha", arg)?
    } else {
        read_json(Path::new(arg))?
    };
    let mut values = Vec::with_capacity(map.len());
    for (k, v) in map {
        let n: u64 = k
            .parse()
            .map_err(|_| schema(format!("alpha.{k}"), "keys must be positive integers"))?;
        values.push((n, v));
    }
    Ok(OddSequence::new(values)?)
}

/// Matrices for the Euler cocycle estimator: a bare array of square
/// matrices given as rows, or `{"matrices": [...]}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum MatricesFile {
    /// `[[[..], ..], ..]`.
    Bare(Vec<Vec<Vec<f64>>>),
    /// `{"matrices": [...]}`.
    Wrapped {
        /// The matrices.
        matrices: Vec<Vec<Vec<f64>>>,
    },
}

fn square(location: String, rows: &[Vec<f64>]) -> Result<DMatrix<f64>, CliError> {
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(schema(location, "matrix must be square and nonempty"));
    }
    Ok(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

/// Loads matrices from a file.
pub fn parse_matrices(path: &Path) -> Result<Vec<DMatrix<f64>>, CliError> {
    let raw = match read_json::<MatricesFile>(path)? {
        MatricesFile::Bare(m) | MatricesFile::Wrapped { matrices: m } => m,
    };
    raw.iter()
        .enumerate()
        .map(|(i, rows)| square(format!("matrices[{i}]"), rows))
        .collect()
}

/// Loads vectors (an array of coordinate arrays) from a file.
pub fn parse_vectors(path: &Path) -> Result<VectorTuple, CliError> {
    let raw: Vec<Vec<f64>> = read_json(path)?;
    let d = raw.first().map_or(0, Vec::len);
    if d == 0 || raw.iter().any(|v| v.len() != d) {
        return Err(schema("vectors", "vectors must share a positive dimension"));
    }
    Ok(VectorTuple::from_vectors(
        raw.iter().map(|v| DVector::from_column_slice(v)).collect(),
    ))
}

/// The base group of an extension file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    /// `Z / m`.
    Cyclic(usize),
    /// A multiplication table with identity `0`.
    Table(Vec<Vec<usize>>),
    /// `{-r, ..., r}` inside `Z`.
    IntWindow(i64),
}

/// An extension file: a base group and a cocycle table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtFile {
    /// The base group.
    pub group: GroupSpec,
    /// `cocycle[i][j] = phi(g_i, g_j)`, elements in the group's order.
    pub cocycle: Vec<Vec<i64>>,
}

impl ExtFile {
    /// Builds the base group and cochain.
    pub fn to_cocycle(&self) -> Result<TwoCocycle, CliError> {
        let base = match &self.group {
            GroupSpec::Cyclic(m) => BaseGroup::Finite(FiniteGroupTable::cyclic(*m)?),
            GroupSpec::Table(t) => BaseGroup::Finite(FiniteGroupTable::new(t.clone())?),
            GroupSpec::IntWindow(r) => BaseGroup::IntWindow { radius: *r },
        };
        if self.cocycle.len() != base.size() || self.cocycle.iter().any(|r| r.len() != base.size()) {
            return Err(schema(
                "cocycle",
                format!("expected a {0} x {0} table", base.size()),
            ));
        }
        Ok(TwoCocycle::from_table(base, self.cocycle.concat())?)
    }
}
