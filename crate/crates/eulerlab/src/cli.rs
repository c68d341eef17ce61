//! Command-line definitions and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use eulerlab_core::extensions::{build_extension, cocycle_from_section};
use eulerlab_core::ivanovturaev::{
    chunk_layout, finish_estimate, smillie_sign_patterns, t_value, validate_matrices, eul_chunk,
    ChunkTally, DEFAULT_GENERICITY_EPS, MIN_SAMPLES,
};
use eulerlab_core::lifts::{translation_number, Estimate};
use eulerlab_core::quasimorphism::{defect_lower_bound, homogenize, Quasimorphism};
use eulerlab_core::simplicialvolume::{
    boundary_residual, l1_norm, polygon_triangulation, surface_bounds,
};
use eulerlab_core::surfacereps::{
    euler_number, fingerprint, maximality_check, milnor_wood_check, relator_translation,
    semi_conjugacy_map, word_tau, LiftedRep, MaximalityVerdict, SemiConjWarning,
};
use eulerlab_core::eulercocycle::tau;
use eulerlab_core::Word;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::formats::{
    parse_alpha, parse_lift_arg, parse_matrices, parse_pairs, parse_rep, parse_vectors,
    parse_word, read_json, ExtFile,
};

/// Exit code for malformed input.
pub const EXIT_INPUT: i32 = 1;
/// Exit code for a failed mathematical check.
pub const EXIT_CHECK: i32 = 2;

/// Rotation numbers, bounded Euler classes and related invariants.
#[derive(Debug, Parser)]
#[command(name = "eulerlab", version, about)]
pub struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed; required by stochastic commands and echoed by all.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// The command.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified translation number of a lift.
    Rot {
        /// Lift: rotation:A, mobius:a,b,c,d[:branch], pl:x,y;...[:shift], JSON or a file.
        #[arg(long)]
        lift: String,
        /// Enclosure width.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// The cocycle rott(fg) - rott(f) - rott(g).
    Tau {
        /// Representation file; used with --pairs.
        #[arg(long, requires = "pairs")]
        rep: Option<PathBuf>,
        /// Word pairs `[[[1],[2]], ...]`.
        #[arg(long, requires = "rep")]
        pairs: Option<PathBuf>,
        /// First lift, when no representation is given.
        #[arg(long, conflicts_with = "rep", requires = "g")]
        f: Option<String>,
        /// Second lift.
        #[arg(long, conflicts_with = "rep", requires = "f")]
        g: Option<String>,
        /// Enclosure width per translation number.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Euler number of a surface-group representation.
    Euler {
        /// Representation file.
        #[arg(long)]
        rep: PathBuf,
        /// Enclosure width.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Milnor-Wood inequality |e| <= |chi|.
    Mw {
        /// Representation file.
        #[arg(long)]
        rep: PathBuf,
        /// Enclosure width.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Maximality of the Euler number and elliptic words in a ball.
    Survey {
        /// Representation file.
        #[arg(long)]
        rep: PathBuf,
        /// Ball radius.
        #[arg(long, default_value_t = 4)]
        ball: usize,
        /// Enclosure width.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Tau on short words and rotation numbers of the generators.
    Fingerprint {
        /// Representation file.
        #[arg(long)]
        rep: PathBuf,
        /// Ball radius.
        #[arg(long, default_value_t = 1)]
        ball: usize,
        /// Enclosure width.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Truncated semi-conjugacy between two representations.
    Semiconj {
        /// Representation acting on the target.
        #[arg(long)]
        rep: PathBuf,
        /// Representation acting on the source.
        #[arg(long)]
        target: PathBuf,
        /// Ball radius of the supremum.
        #[arg(long, default_value_t = 3)]
        ball: usize,
        /// Number of grid cells on [0, 1].
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Rolli quasimorphisms on the free group of rank 2.
    Qm {
        /// Operation.
        #[command(subcommand)]
        op: QmCommand,
    },
    /// Central extensions by Z.
    Ext {
        /// Operation.
        #[command(subcommand)]
        op: ExtCommand,
    },
    /// The Ivanov-Turaev cocycle.
    It {
        /// Operation.
        #[command(subcommand)]
        op: ItCommand,
    },
    /// Simplicial volume of a surface.
    Simpvol {
        /// Genus.
        #[arg(long)]
        genus: u64,
        /// Punctures.
        #[arg(long, default_value_t = 0)]
        punctures: u64,
        /// Degree of the cover used for the upper bound.
        #[arg(long, default_value_t = 1)]
        cover: u64,
    },
}

/// Quasimorphism operations.
#[derive(Debug, Subcommand)]
pub enum QmCommand {
    /// Evaluate on a word.
    Eval {
        /// `sign`, inline `{"n": value}` or a JSON file.
        #[arg(long)]
        alpha: String,
        /// Word as signed generator indices, `1,2,-1`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Lower bound for the defect over a ball.
    Defect {
        /// Odd sequence.
        #[arg(long)]
        alpha: String,
        /// Ball radius.
        #[arg(long, default_value_t = 2)]
        ball: usize,
    },
    /// Approximate the homogenization.
    Homogenize {
        /// Odd sequence.
        #[arg(long)]
        alpha: String,
        /// Word.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Defect bound used for the error.
        #[arg(long)]
        defect: f64,
        /// Target error.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

/// Extension operations.
#[derive(Debug, Subcommand)]
pub enum ExtCommand {
    /// Build the extension and check it.
    Build {
        /// File `{"group": ..., "cocycle": [[..]]}`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Check the cocycle identity and normalization.
    Check {
        /// File `{"group": ..., "cocycle": [[..]]}`.
        #[arg(long)]
        input: PathBuf,
    },
}

/// Ivanov-Turaev operations.
#[derive(Debug, Subcommand)]
pub enum ItCommand {
    /// Monte Carlo estimate of eul(g_0, ..., g_{n+1}).
    Eul {
        /// Expected n (matrices are (n+1) x (n+1)).
        #[arg(long)]
        dim: Option<usize>,
        /// JSON file of n+2 matrices.
        #[arg(long)]
        matrices: PathBuf,
        /// Number of samples.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Confidence parameter.
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
    },
    /// t-value and sign patterns of n+2 vectors.
    Tvalue {
        /// JSON file of n+2 vectors of R^{n+1}.
        #[arg(long)]
        vectors: PathBuf,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Process exit code.
    pub code: i32,
    /// JSON document for stdout.
    pub json: Value,
    /// One-line summary for stderr.
    pub summary: String,
}

fn est(e: Estimate) -> Value {
    json!({ "value": e.value, "err": e.err })
}

fn word_json(w: &Word) -> Value {
    json!(w.letters())
}

struct Success {
    json: Value,
    summary: String,
    check_ok: bool,
}

fn ok(json: Value, summary: String) -> Result<Success, CliError> {
    Ok(Success {
        json,
        summary,
        check_ok: true,
    })
}

fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::InvalidArgument(format!("{name} must be positive")))
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Report {
    match dispatch(cli) {
        Ok(s) => {
            let mut json = s.json;
            if let Value::Object(map) = &mut json {
                map.insert("seed".into(), json!(cli.seed));
            }
            Report {
                code: if s.check_ok { 0 } else { EXIT_CHECK },
                json,
                summary: s.summary,
            }
        }
        Err(e) => Report {
            code: EXIT_INPUT,
            json: json!({ "error": e.kind(), "message": e.to_string() }),
            summary: format!("error: {e}"),
        },
    }
}

fn dispatch(cli: &Cli) -> Result<Success, CliError> {
    match &cli.command {
        Command::Rot { lift, tol } => rot(lift, *tol),
        Command::Tau {
            rep,
            pairs,
            f,
            g,
            tol,
        } => match (rep, pairs, f, g) {
            (Some(rep), Some(pairs), _, _) => tau_rep(rep, pairs, *tol),
            (_, _, Some(f), Some(g)) => tau_lifts(f, g, *tol),
            _ => Err(CliError::InvalidArgument(
                "give --rep with --pairs, or --f with --g".into(),
            )),
        },
        Command::Euler { rep, tol } => euler(&parse_rep(rep)?, *tol),
        Command::Mw { rep, tol } => mw(&parse_rep(rep)?, *tol),
        Command::Survey { rep, ball, tol } => survey(&parse_rep(rep)?, *ball, *tol),
        Command::Fingerprint { rep, ball, tol } => {
            positive("tol", *tol)?;
            let fp = fingerprint(&parse_rep(rep)?, *ball, *tol)?;
            let n = fp.words.len();
            let table: Vec<Vec<Value>> = (0..n)
                .map(|i| (0..n).map(|j| est(fp.tau(i, j))).collect())
                .collect();
            let rots: serde_json::Map<String, Value> =
                fp.rot_gens.iter().map(|(k, e)| (k.clone(), est(*e))).collect();
            ok(
                json!({
                    "command": "fingerprint",
                    "ball": ball,
                    "tol": tol,
                    "words": fp.words.iter().map(word_json).collect::<Vec<_>>(),
                    "tau": table,
                    "rot_gens": rots,
                    "method": "tau from certified translation numbers of word lifts; rot mod 1",
                }),
                format!("fingerprint over {n} words"),
            )
        }
        Command::Semiconj {
            rep,
            target,
            ball,
            grid,
        } => semiconj(&parse_rep(rep)?, &parse_rep(target)?, *ball, *grid),
        Command::Qm { op } => qm(op),
        Command::Ext { op } => ext(op),
        Command::It { op } => it(op, cli.seed),
        Command::Simpvol {
            genus,
            punctures,
            cover,
        } => simpvol(*genus, *punctures, *cover),
    }
}

fn rot(lift: &str, tol: f64) -> Result<Success, CliError> {
    positive("tol", tol)?;
    let f = parse_lift_arg(lift)?;
    let e = translation_number(&f, tol)?;
    let mid = e.mid();
    ok(
        json!({
            "command": "rot",
            "lo": e.lo,
            "hi": e.hi,
            "iterations": e.iterations,
            "rott": mid,
            "rot": mid - mid.floor(),
            "tol": tol,
            "method": "displacement bracket over a grid; exact for integer crossings and projective matrices",
        }),
        format!("rott in [{}, {}]", e.lo, e.hi),
    )
}

fn tau_lifts(f: &str, g: &str, tol: f64) -> Result<Success, CliError> {
    positive("tol", tol)?;
    let t = tau(&parse_lift_arg(f)?, &parse_lift_arg(g)?, tol)?;
    ok(
        json!({
            "command": "tau",
            "records": [{ "value": t.value, "err": t.err }],
            "tol": tol,
            "method": "rott(fg) - rott(f) - rott(g) with summed enclosure widths",
        }),
        format!("tau = {} +- {}", t.value, t.err),
    )
}

fn tau_rep(rep: &std::path::Path, pairs: &std::path::Path, tol: f64) -> Result<Success, CliError> {
    positive("tol", tol)?;
    let r = parse_rep(rep)?;
    let pairs = parse_pairs(r.presentation().rank(), pairs)?;
    let mut records = Vec::with_capacity(pairs.len());
    for (u, v) in &pairs {
        let t = word_tau(&r, u, v, tol)?;
        records.push(json!({ "u": word_json(u), "v": word_json(v), "value": t.value, "err": t.err }));
    }
    ok(
        json!({
            "command": "tau",
            "records": records,
            "tol": tol,
            "method": "rott(fg) - rott(f) - rott(g) with summed enclosure widths",
        }),
        format!("tau on {} pairs", pairs.len()),
    )
}

fn euler(r: &LiftedRep, tol: f64) -> Result<Success, CliError> {
    positive("tol", tol)?;
    let p = r.presentation();
    let (e, residual, method) = if p.punctures == 0 {
        let t = relator_translation(r, tol)?;
        (Estimate::exact(t.e as f64), Some(t.residual), "translation of the relator lift")
    } else {
        (euler_number(r, tol)?, None, "minus the sum of translation numbers of the boundary lifts")
    };
    ok(
        json!({
            "command": "euler",
            "genus": p.genus,
            "punctures": p.punctures,
            "chi": p.euler_characteristic(),
            "e": e.value,
            "err": e.err,
            "relator_residual": residual,
            "tol": tol,
            "method": method,
        }),
        format!("e = {} +- {}", e.value, e.err),
    )
}

fn mw(r: &LiftedRep, tol: f64) -> Result<Success, CliError> {
    positive("tol", tol)?;
    let m = milnor_wood_check(r, tol)?;
    Ok(Success {
        json: json!({
            "command": "mw",
            "e": m.e.value,
            "err": m.e.err,
            "chi": m.chi,
            "bound": m.bound,
            "ok": m.ok,
            "equality": m.equality,
            "tol": tol,
            "method": "|e| <= |min(chi, 0)| up to the enclosure width",
        }),
        summary: format!(
            "|e| = {} vs bound {}: {}",
            m.e.value.abs(),
            m.bound,
            if m.ok { "ok" } else { "VIOLATED" }
        ),
        check_ok: m.ok,
    })
}

fn survey(r: &LiftedRep, ball: usize, tol: f64) -> Result<Success, CliError> {
    positive("tol", tol)?;
    let m = maximality_check(r, ball, tol)?;
    let verdict = match m.verdict {
        MaximalityVerdict::Consistent => "consistent",
        MaximalityVerdict::NotMaximal => "not_maximal",
        MaximalityVerdict::EllipticWitness => "elliptic_witness",
    };
    let witnesses: Vec<Value> = m
        .elliptic_witnesses
        .iter()
        .map(|(w, tr)| json!({ "word": word_json(w), "trace": tr }))
        .collect();
    ok(
        json!({
            "command": "survey",
            "e": m.e.value,
            "err": m.e.err,
            "chi": m.chi,
            "maximal": m.maximal,
            "ball": ball,
            "elliptic_witnesses": witnesses,
            "verdict": verdict,
            "method": "maximal Euler number plus traces of all words in the ball",
        }),
        format!("{verdict}: {} elliptic words up to length {ball}", witnesses.len()),
    )
}

fn semiconj(r1: &LiftedRep, r2: &LiftedRep, ball: usize, grid: usize) -> Result<Success, CliError> {
    let s = semi_conjugacy_map(r1, r2, ball, grid)?;
    let warnings: Vec<String> = s
        .warnings
        .iter()
        .map(|w| match w {
            SemiConjWarning::FingerprintMismatch => "fingerprint_mismatch".to_string(),
            SemiConjWarning::FingerprintUnavailable(m) => format!("fingerprint_unavailable: {m}"),
            SemiConjWarning::FixedPointHazard => "fixed_point_hazard".to_string(),
        })
        .collect();
    ok(
        json!({
            "command": "semiconj",
            "ball": ball,
            "xs": s.xs,
            "values": s.values,
            "monotonicity_violations": s.monotonicity_violations,
            "translation_defect": s.translation_defect,
            "equivariance_residual": s.equivariance_residual,
            "warnings": warnings,
            "method": "supremum of rho1(w)^-1 rho2(w) over the ball",
        }),
        format!(
            "equivariance residual {} with {} warnings",
            s.equivariance_residual,
            warnings.len()
        ),
    )
}

fn qm(op: &QmCommand) -> Result<Success, CliError> {
    match op {
        QmCommand::Eval { alpha, word } => {
            let f = Quasimorphism::rolli(parse_alpha(alpha)?);
            let w = parse_word(2, word)?;
            let v = f.eval(&w);
            ok(
                json!({
                    "command": "qm eval",
                    "word": word_json(&w),
                    "value": v,
                    "method": "sum of alpha over syllable exponents",
                }),
                format!("f(w) = {v}"),
            )
        }
        QmCommand::Defect { alpha, ball } => {
            let f = Quasimorphism::rolli(parse_alpha(alpha)?);
            let d = defect_lower_bound(&f, *ball)?;
            let witness = d
                .witness
                .as_ref()
                .map(|(a, b)| json!([word_json(a), word_json(b)]));
            ok(
                json!({
                    "command": "qm defect",
                    "ball": ball,
                    "lower_bound": d.value,
                    "witness": witness,
                    "method": "max |f(g) + f(h) - f(gh)| over pairs in the ball",
                }),
                format!("defect >= {}", d.value),
            )
        }
        QmCommand::Homogenize {
            alpha,
            word,
            defect,
            tol,
        } => {
            let f = Quasimorphism::rolli(parse_alpha(alpha)?);
            let w = parse_word(2, word)?;
            let h = homogenize(&f, &w, *defect, *tol)?;
            ok(
                json!({
                    "command": "qm homogenize",
                    "word": word_json(&w),
                    "value": h.value,
                    "err": h.err,
                    "power": h.n,
                    "defect": defect,
                    "method": "f(g^n)/n with error D/n, certified when D bounds the defect",
                }),
                format!("fbar(w) = {} +- {}", h.value, h.err),
            )
        }
    }
}

fn ext(op: &ExtCommand) -> Result<Success, CliError> {
    match op {
        ExtCommand::Build { input } => {
            let phi = read_json::<ExtFile>(input)?.to_cocycle()?;
            let ext = build_extension(&phi)?;
            let central = ext.centrality_failure(2).is_none();
            let roundtrip = cocycle_from_section(&ext, |g| (0, g))? == phi;
            Ok(Success {
                json: json!({
                    "command": "ext build",
                    "order": phi.base().size(),
                    "associative": true,
                    "central": central,
                    "section_roundtrip": roundtrip,
                    "method": "(a, g)(b, h) = (a + b + phi(g, h), gh), checked on all base triples",
                }),
                summary: format!("extension of a group with {} elements", phi.base().size()),
                check_ok: central && roundtrip,
            })
        }
        ExtCommand::Check { input } => {
            let phi = read_json::<ExtFile>(input)?.to_cocycle()?;
            let failure = phi.cocycle_failure();
            let norm = phi.normalization_failure();
            ok(
                json!({
                    "command": "ext check",
                    "residual": phi.residual(),
                    "is_cocycle": failure.is_none(),
                    "cocycle_failure": failure.map(|(a, b, c)| json!([a, b, c])),
                    "normalized": norm.is_none(),
                    "normalization_failure": norm.map(|(a, b)| json!([a, b])),
                    "method": "bar differential on every triple of base elements",
                }),
                format!("residual {}", phi.residual()),
            )
        }
    }
}

fn it(op: &ItCommand, seed: Option<u64>) -> Result<Success, CliError> {
    match op {
        ItCommand::Eul {
            dim,
            matrices,
            samples,
            delta,
        } => {
            let seed = seed.ok_or_else(|| {
                CliError::InvalidArgument("--seed is required for sampling".into())
            })?;
            let gs = parse_matrices(matrices)?;
            let d = validate_matrices(&gs)?;
            if let Some(n) = dim {
                if n + 1 != d {
                    return Err(CliError::InvalidArgument(format!(
                        "--dim {n} expects {}x{} matrices, got {d}x{d}",
                        n + 1,
                        n + 1
                    )));
                }
            }
            if *samples < MIN_SAMPLES {
                return Err(CliError::InvalidArgument("at least 1000 samples are required".into()));
            }
            if !(*delta > 0.0 && *delta < 1.0) {
                return Err(CliError::InvalidArgument("--delta must lie in (0, 1)".into()));
            }
            let chunks: Vec<(u64, u64)> = chunk_layout(*samples).collect();
            let tallies: Vec<ChunkTally> = chunks
                .par_iter()
                .map(|&(c, count)| eul_chunk(&gs, seed, c, count, DEFAULT_GENERICITY_EPS))
                .collect::<Result<_, _>>()?;
            let tally = tallies.into_iter().fold(ChunkTally::default(), |a, b| a + b);
            let e = finish_estimate(tally, *delta, seed);
            let n = d - 1;
            let bound = 0.5f64.powi(n as i32 + 1);
            let within = e.mean.abs() <= bound + e.half_width;
            Ok(Success {
                json: json!({
                    "command": "it eul",
                    "n": n,
                    "mean": e.mean,
                    "half_width": e.half_width,
                    "delta": e.delta,
                    "samples": e.samples,
                    "discarded": e.discarded,
                    "bound": bound,
                    "within_bound": within,
                    "method": "mean of t over uniform points of the unit ball, symmetrized in v0, v1; Hoeffding interval for values in [-1, 1]",
                }),
                summary: format!("eul = {} +- {} ({} samples)", e.mean, e.half_width, e.samples),
                check_ok: within,
            })
        }
        ItCommand::Tvalue { vectors } => {
            let v = parse_vectors(vectors)?;
            let generic = v.is_generic();
            let patterns = smillie_sign_patterns(&v).ok();
            let t = t_value(&v);
            ok(
                json!({
                    "command": "it tvalue",
                    "t": t,
                    "generic": generic,
                    "smillie": patterns.map(|(a, b)| json!([a, b])),
                    "method": "barycentric solve and orientation determinant",
                }),
                format!("t = {t}"),
            )
        }
    }
}

fn simpvol(genus: u64, punctures: u64, cover: u64) -> Result<Success, CliError> {
    if cover == 0 {
        return Err(CliError::InvalidArgument("--cover must be at least 1".into()));
    }
    let b = surface_bounds(genus, punctures, cover);
    let mut check_ok = b.lower.is_none_or(|l| l <= b.exact)
        && b.upper.is_none_or(|u| b.exact <= u);
    let triangulation = if punctures == 0 && genus >= 1 {
        let k = polygon_triangulation(genus as usize);
        let c = k.canonical_cycle();
        let residual = boundary_residual(&c, &k);
        check_ok &= residual == 0.0;
        Some(json!({
            "triangles": k.triangles().len(),
            "vertices": k.vertex_count(),
            "edges": k.edges().len(),
            "chi": k.euler_characteristic(),
            "cycle_l1": l1_norm(&c),
            "boundary_residual": residual,
        }))
    } else {
        None
    };
    Ok(Success {
        json: json!({
            "command": "simpvol",
            "genus": genus,
            "punctures": punctures,
            "cover": cover,
            "chi": b.chi,
            "exact": b.exact,
            "lower": b.lower,
            "upper": b.upper,
            "cover_genus": b.cover_genus,
            "provenance": b.provenance,
            "triangulation": triangulation,
        }),
        summary: format!("simplicial volume {}", b.exact),
        check_ok,
    })
}
