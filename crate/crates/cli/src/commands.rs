//! One function per subcommand. Each returns the input records for the
//! report plus an `Outcome`; anything that stops a command outright
//! surfaces as a `CliError` and exits 2, while a clean "no" from a
//! checker becomes a `Fail` verdict with its witness in the results.

use std::path::{Path, PathBuf};

use alphacut::allowable::{AllowableSequence, LineArrangement2D, StretchError};
use alphacut::arrangement::{x_alpha_bruteforce, ArrangementError, ColoredLineArrangement};
use alphacut::bicolored::{
    crossing_lower_bound, describe, orientation_from_description, reduce_to_bicolored,
    BicoloredDescription,
};
use alphacut::cut::{
    all_alpha_cuts, find_alpha_cut, find_semi_cuts, probe_lemma_a1, AlphaVector, Cut, CutError,
    ExclusionReason, PreconditionPolicy, SemiCutQuery,
};
use alphacut::extract::{extract_allowable_at, realize_straight};
use alphacut::generate::{
    allowable_walk, beta_gamma_analog, dualizable_ws_2d, generic_lines, rainbow_ws_lines_2d,
    well_separated_points, GenerateError,
};
use alphacut::geometry::dualize;
use alphacut::grid::{
    build_sigma, GridError, GridOrientation, PreconditionFailure, UsoMode, UsoReport,
};
use alphacut::level::k_level;
use alphacut::miranda::{miranda_solve, problem_for_arrangement};
use alphacut::pseudoline::{
    realize_pseudolines, verify_description, verify_straight_description, PolylineArrangement,
};
use alphacut::rational::{format_rational, parse_rational, Rational};
use alphacut::separation::{
    check_beta_gamma, check_well_separated, check_weak_general_position, BetaGamma,
    ColoredPointSet, PointId, SeparationReport, WeakPositionReport, WeakPositionViolation,
};
use num_traits::Signed;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{command_error, CliError};
use crate::files::{self, InstanceFile, LinesFile};
use crate::report::{input_entry, Outcome, Verdict};
use crate::svg;

/// Tracks which files a command read, for the report's input records.
pub struct Inputs {
    entries: Vec<Value>,
}

impl Inputs {
    pub fn new() -> Inputs {
        Inputs {
            entries: Vec::new(),
        }
    }

    fn load<T: serde::de::DeserializeOwned>(
        &mut self,
        path: &Path,
        nested: &[&[&str]],
    ) -> Result<T, CliError> {
        let loaded = files::load(path, nested)?;
        self.entries.push(input_entry(path, &loaded.digest));
        Ok(loaded.value)
    }

    fn instance(&mut self, path: &Path) -> Result<ColoredPointSet, CliError> {
        self.load::<InstanceFile>(path, &[&["instance"]])?.to_points()
    }

    fn lines(&mut self, path: &Path) -> Result<ColoredLineArrangement, CliError> {
        self.load::<LinesFile>(path, &[&["lines"]])?.to_arrangement()
    }

    fn straight(&mut self, path: &Path) -> Result<LineArrangement2D, CliError> {
        self.load(
            path,
            &[
                &["arrangement"],
                &["realization"],
                &["extraction", "arrangement"],
            ],
        )
    }

    fn description(&mut self, path: &Path) -> Result<BicoloredDescription, CliError> {
        self.load(path, &[&["description"]])
    }

    fn sequence(&mut self, path: &Path) -> Result<AllowableSequence, CliError> {
        self.load(path, &[&["sequence"], &["extraction", "sequence"]])
    }

    pub fn into_entries(self) -> Vec<Value> {
        self.entries
    }
}

type CommandResult = Result<(Inputs, Outcome), CliError>;

pub fn parse_usize_list(flag: &str, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim().parse::<usize>().map_err(|_| {
                CliError::InvalidFlag(format!(
                    "{flag} wants comma-separated nonnegative integers, got {text:?}"
                ))
            })
        })
        .collect()
}

fn parse_rational_flag(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text)
        .map_err(|e| CliError::InvalidFlag(format!("{flag} wants a rational like 3/4: {e}")))
}

fn point_id_json(id: &PointId) -> Value {
    json!({"class": id.class, "index": id.index})
}

fn sep_json(r: &SeparationReport) -> Value {
    json!({
        "satisfied": r.satisfied,
        "witness": r.witness,
        "violating_subset": r.violating_subset,
        "touching": r.touching,
    })
}

fn wgp_json(r: &WeakPositionReport) -> Value {
    let violation = r.violation.as_ref().map(|v| match v {
        WeakPositionViolation::DegenerateTuple { tuple } => json!({
            "kind": "degenerate_tuple",
            "tuple": tuple.iter().map(point_id_json).collect::<Vec<_>>(),
        }),
        WeakPositionViolation::ExtraIncidence { tuple, extra } => json!({
            "kind": "extra_incidence",
            "tuple": tuple.iter().map(point_id_json).collect::<Vec<_>>(),
            "extra": point_id_json(extra),
        }),
    });
    json!({"satisfied": r.satisfied, "violation": violation})
}

fn counts_json(counts: &[(usize, usize, usize)]) -> Value {
    Value::Array(
        counts
            .iter()
            .map(|&(below, on, above)| json!({"below": below, "on": on, "above": above}))
            .collect(),
    )
}

fn cut_json(c: &Cut) -> Value {
    json!({
        "tuple": c.tuple,
        "hyperplane": c.hyperplane,
        "counts": counts_json(&c.counts),
        "alpha": c.alpha().alpha,
    })
}

fn precondition_json(f: &PreconditionFailure) -> Value {
    match f {
        PreconditionFailure::WeakPosition(r) => json!({
            "kind": "weak_position_failed",
            "report": wgp_json(r),
        }),
        PreconditionFailure::Separation(r) => json!({
            "kind": "separation_failed",
            "report": sep_json(r),
        }),
    }
}

/// Witness JSON for cut errors that are honest negative answers rather
/// than input errors; None sends the error down the exit-2 path.
fn cut_failure_json(e: &CutError) -> Option<Value> {
    match e {
        CutError::NoCut { alpha } => Some(json!({"kind": "no_cut", "alpha": alpha})),
        CutError::MultipleCuts { alpha, tuples } => Some(json!({
            "kind": "multiple_cuts",
            "alpha": alpha,
            "tuples": tuples,
        })),
        CutError::NotBijective {
            defects,
            degenerate_tuples,
        } => Some(json!({
            "kind": "not_bijective",
            "defects": defects
                .iter()
                .map(|(alpha, tuples)| json!({"alpha": alpha, "tuples": tuples}))
                .collect::<Vec<_>>(),
            "degenerate_tuples": degenerate_tuples,
        })),
        CutError::PreconditionFailed(f) => Some(precondition_json(f)),
        _ => None,
    }
}

fn uso_json(r: &UsoReport) -> Value {
    json!({
        "uso": r.uso,
        "violation": r.violation.as_ref().map(|v| json!({
            "subgrid": v.subgrid,
            "sinks": v.sinks,
        })),
    })
}

fn policy(trust: bool) -> PreconditionPolicy {
    if trust {
        PreconditionPolicy::Assert
    } else {
        PreconditionPolicy::Verify
    }
}

/// The informational unique-sink bit attached to orientation reports;
/// null when the grid is too large for the default work budget.
fn informational_uso(o: &GridOrientation) -> Result<(Value, String), CliError> {
    match o.is_uso(UsoMode::Full) {
        Ok(r) => Ok((
            json!(r.uso),
            format!("unique sinks everywhere: {}", r.uso),
        )),
        Err(GridError::TooLarge { required, budget }) => Ok((
            Value::Null,
            format!("unique-sink check skipped, {required} subgrid checks exceed the {budget} budget"),
        )),
        Err(e) => Err(command_error(e)),
    }
}

pub fn check_sep(
    instance: &Path,
    beta: Option<&str>,
    gamma: Option<&str>,
) -> CommandResult {
    let mut inputs = Inputs::new();
    let p = inputs.instance(instance)?;
    let wgp = check_weak_general_position(&p);
    let ws = check_well_separated(&p);
    let mut results = json!({
        "weak_general_position": wgp_json(&wgp),
        "well_separated": sep_json(&ws),
    });
    let mut summary = vec![
        format!(
            "weak general position: {}",
            if wgp.satisfied { "yes" } else { "no" }
        ),
        format!("well separated: {}", if ws.satisfied { "yes" } else { "no" }),
    ];
    let mut separated = ws.satisfied;
    match (beta, gamma) {
        (None, None) => {}
        (Some(beta), Some(gamma)) => {
            let bg = BetaGamma::new(
                parse_usize_list("--beta", beta)?,
                parse_usize_list("--gamma", gamma)?,
            );
            let report = check_beta_gamma(&p, &bg).map_err(command_error)?;
            summary.push(format!(
                "(beta, gamma)-separated for beta={:?}, gamma={:?}: {}",
                bg.beta,
                bg.gamma,
                if report.satisfied { "yes" } else { "no" }
            ));
            separated = report.satisfied;
            results["beta_gamma"] = json!({
                "beta": bg.beta,
                "gamma": bg.gamma,
                "report": sep_json(&report),
            });
        }
        _ => {
            return Err(CliError::InvalidFlag(
                "--beta and --gamma come together or not at all".into(),
            ))
        }
    }
    let outcome = Outcome {
        verdict: Verdict::of(wgp.satisfied && separated),
        results,
        summary,
    };
    Ok((inputs, outcome))
}

pub fn build_uso(instance: &Path) -> CommandResult {
    let mut inputs = Inputs::new();
    let p = inputs.instance(instance)?;
    let shape: Vec<usize> = p.class_sizes();
    match build_sigma(&p) {
        Ok(orientation) => {
            let (uso, note) = informational_uso(&orientation)?;
            let outcome = Outcome {
                verdict: Verdict::Pass,
                results: json!({
                    "orientation": orientation,
                    "uso_full": uso,
                }),
                summary: vec![format!(
                    "built the induced orientation of the {shape:?} grid ({note})"
                )],
            };
            Ok((inputs, outcome))
        }
        Err(GridError::PreconditionFailed(f)) => {
            let outcome = Outcome {
                verdict: Verdict::Fail,
                results: json!({"error": precondition_json(&f)}),
                summary: vec!["the point set fails the orientation preconditions".into()],
            };
            Ok((inputs, outcome))
        }
        Err(e) => Err(command_error(e)),
    }
}

pub fn check_uso(orientation: &Path, mode: &str) -> CommandResult {
    let mut inputs = Inputs::new();
    let o: GridOrientation = inputs.load(orientation, &[&["orientation"]])?;
    let modes: Vec<(&str, UsoMode)> = match mode {
        "full" => vec![("full", UsoMode::Full)],
        "lemma21" => vec![("lemma21", UsoMode::Lemma21)],
        "both" => vec![("full", UsoMode::Full), ("lemma21", UsoMode::Lemma21)],
        other => {
            return Err(CliError::InvalidFlag(format!(
                "--mode wants full, lemma21, or both, got {other:?}"
            )))
        }
    };
    let mut results = json!({});
    let mut summary = Vec::new();
    let mut all = true;
    let mut verdicts = Vec::new();
    for (name, m) in &modes {
        let report = o.is_uso(*m).map_err(command_error)?;
        summary.push(format!(
            "{name}: {}",
            if report.uso {
                "unique sink orientation".to_string()
            } else {
                "violated".to_string()
            }
        ));
        all &= report.uso;
        verdicts.push(report.uso);
        results[*name] = uso_json(&report);
    }
    if modes.len() == 2 {
        results["agree"] = json!(verdicts[0] == verdicts[1]);
    }
    let outcome = Outcome {
        verdict: Verdict::of(all),
        results,
        summary,
    };
    Ok((inputs, outcome))
}

pub fn find_cut(instance: &Path, alpha: &str, trust: bool) -> CommandResult {
    let mut inputs = Inputs::new();
    let p = inputs.instance(instance)?;
    let vector = AlphaVector::new(parse_usize_list("--alpha", alpha)?);
    let outcome = match find_alpha_cut(&p, &vector, policy(trust)) {
        Ok(cut) => Outcome {
            verdict: Verdict::Pass,
            results: json!({"cut": cut_json(&cut)}),
            summary: vec![format!(
                "unique cut for alpha {:?} through tuple {:?}",
                vector.alpha, cut.tuple
            )],
        },
        Err(e) => match cut_failure_json(&e) {
            Some(witness) => Outcome {
                verdict: Verdict::Fail,
                results: json!({"error": witness}),
                summary: vec![format!("no clean cut: {e}")],
            },
            None => return Err(command_error(e)),
        },
    };
    Ok((inputs, outcome))
}

pub fn all_cuts(instance: &Path, trust: bool) -> CommandResult {
    let mut inputs = Inputs::new();
    let p = inputs.instance(instance)?;
    let expected: usize = p.class_sizes().iter().product();
    let outcome = match all_alpha_cuts(&p, policy(trust)) {
        Ok(cuts) => Outcome {
            verdict: Verdict::Pass,
            results: json!({
                "count": cuts.len(),
                "expected": expected,
                "cuts": cuts
                    .iter()
                    .map(|(alpha, cut)| json!({"alpha": alpha.alpha, "cut": cut_json(cut)}))
                    .collect::<Vec<_>>(),
            }),
            summary: vec![format!(
                "{} cuts, one per alpha vector (expected {expected})",
                cuts.len()
            )],
        },
        Err(e) => match cut_failure_json(&e) {
            Some(witness) => Outcome {
                verdict: Verdict::Fail,
                results: json!({"error": witness}),
                summary: vec![format!("cut enumeration failed: {e}")],
            },
            None => return Err(command_error(e)),
        },
    };
    Ok((inputs, outcome))
}

pub fn semi_cuts(
    instance: &Path,
    base: Option<usize>,
    targets: Option<&str>,
    probe: bool,
) -> CommandResult {
    let mut inputs = Inputs::new();
    let p = inputs.instance(instance)?;
    if probe {
        if base.is_some() || targets.is_some() {
            return Err(CliError::InvalidFlag(
                "--probe replaces --base/--targets".into(),
            ));
        }
        let report = probe_lemma_a1(&p).map_err(command_error)?;
        let violations: Vec<Value> = report
            .violations
            .iter()
            .map(|v| {
                json!({
                    "base_point": v.base_point,
                    "targets": v.targets,
                    "semi_cut_count": v.semi_cut_count,
                })
            })
            .collect();
        let ok = report.violations.is_empty();
        let outcome = Outcome {
            verdict: Verdict::of(ok),
            results: json!({
                "probe": {
                    "base_points": report.base_points,
                    "target_vectors": report.target_vectors,
                    "violations": violations,
                }
            }),
            summary: vec![format!(
                "{} base points x {} target vectors probed, {} with two or more semi-cuts",
                report.base_points,
                report.target_vectors,
                report.violations.len()
            )],
        };
        return Ok((inputs, outcome));
    }
    let (base, targets) = match (base, targets) {
        (Some(b), Some(t)) => (b, parse_usize_list("--targets", t)?),
        _ => {
            return Err(CliError::InvalidFlag(
                "semi-cuts wants --base and --targets together, or --probe".into(),
            ))
        }
    };
    let query = SemiCutQuery {
        base_point: base,
        targets,
    };
    let report = find_semi_cuts(&p, &query).map_err(command_error)?;
    let excluded: Vec<Value> = report
        .excluded
        .iter()
        .map(|x| {
            let reason = match &x.reason {
                ExclusionReason::DegenerateSpan => json!({"kind": "degenerate_span"}),
                ExclusionReason::ExtraIncidence { extra } => json!({
                    "kind": "extra_incidence",
                    "extra": point_id_json(extra),
                }),
            };
            json!({"tuple": x.tuple, "reason": reason})
        })
        .collect();
    let outcome = Outcome {
        verdict: Verdict::Done,
        results: json!({
            "base_point": query.base_point,
            "targets": query.targets,
            "cuts": report.cuts.iter().map(cut_json).collect::<Vec<_>>(),
            "excluded": excluded,
        }),
        summary: vec![format!(
            "{} semi-cuts through base point {} ({} tuples excluded)",
            report.cuts.len(),
            query.base_point,
            report.excluded.len()
        )],
    };
    Ok((inputs, outcome))
}

pub fn dualize_cmd(instance: &Path) -> CommandResult {
    let mut inputs = Inputs::new();
    let p = inputs.instance(instance)?;
    if p.dimension() != 2 {
        return Err(CliError::Command(format!(
            "dualize feeds the planar pipeline; the instance lives in dimension {}",
            p.dimension()
        )));
    }
    let dual_class = |i: usize| -> Result<Vec<_>, CliError> {
        p.class(i).iter().map(|q| dualize(q).map_err(command_error)).collect()
    };
    let reds = dual_class(0)?;
    let blues = dual_class(1)?;
    let lines = LinesFile {
        dimension: 2,
        classes: vec![reds.clone(), blues.clone()],
    };
    let arrangement = LineArrangement2D::new(reds, blues).map_err(command_error)?;
    let mut summary = vec![format!(
        "dualized {} + {} points to a red/blue line arrangement",
        p.class(0).len(),
        p.class(1).len()
    )];
    let mut results = json!({
        "arrangement": arrangement,
        "lines": lines,
    });
    // The description feeds the bridge command; a dual that is not
    // cleanly describable (shared slopes, coincident crossings) simply
    // omits it.
    match describe(&arrangement) {
        Ok(desc) => {
            results["description"] = json!(desc);
            summary.push("the dual arrangement is describable".into());
        }
        Err(e) => summary.push(format!("no bicolored description: {e}")),
    }
    let outcome = Outcome {
        verdict: Verdict::Done,
        results,
        summary,
    };
    Ok((inputs, outcome))
}

pub fn levels(lines: &Path, alpha: &str) -> CommandResult {
    let mut inputs = Inputs::new();
    let a = inputs.lines(lines)?;
    if a.dimension() != 2 {
        return Err(CliError::Command(format!(
            "level curves are planar; the arrangement lives in dimension {}",
            a.dimension()
        )));
    }
    let ks = parse_usize_list("--alpha", alpha)?;
    let sizes = a.class_sizes();
    if ks.len() != sizes.len() {
        return Err(CliError::InvalidFlag(format!(
            "--alpha has {} entries but the arrangement has {} classes",
            ks.len(),
            sizes.len()
        )));
    }
    let mut levels = Vec::new();
    for (i, (&k, &n)) in ks.iter().zip(&sizes).enumerate() {
        if k < 1 || k > n {
            return Err(CliError::InvalidFlag(format!(
                "--alpha entry {k} out of range 1..={n} for class {i}"
            )));
        }
        let level = k_level(a.class(i), k).map_err(command_error)?;
        levels.push(json!({
            "class": i,
            "k": k,
            "polyline": level,
        }));
    }
    let outcome = Outcome {
        verdict: Verdict::Done,
        results: json!({"levels": levels}),
        summary: vec![format!("computed {} level polylines", ks.len())],
    };
    Ok((inputs, outcome))
}

pub fn x_alpha(lines: &Path, alpha: &str, tol: Option<&str>) -> CommandResult {
    let mut inputs = Inputs::new();
    let a = inputs.lines(lines)?;
    let vector = AlphaVector::new(parse_usize_list("--alpha", alpha)?);
    let colorful = match x_alpha_bruteforce(&a, &vector) {
        Ok(cp) => cp,
        Err(ArrangementError::NoPoint { alpha }) => {
            let outcome = Outcome {
                verdict: Verdict::Fail,
                results: json!({"error": {"kind": "no_point", "alpha": alpha}}),
                summary: vec!["no colorful point attains these levels".into()],
            };
            return Ok((inputs, outcome));
        }
        Err(ArrangementError::MultiplePoints { alpha, tuples }) => {
            let outcome = Outcome {
                verdict: Verdict::Fail,
                results: json!({
                    "error": {"kind": "multiple_points", "alpha": alpha, "tuples": tuples}
                }),
                summary: vec![format!(
                    "{} colorful points attain these levels",
                    tuples.len()
                )],
            };
            return Ok((inputs, outcome));
        }
        Err(e) => return Err(command_error(e)),
    };
    let mut results = json!({
        "point": {
            "tuple": colorful.tuple,
            "coords": colorful.point,
            "counts": counts_json(&colorful.counts),
        }
    });
    let mut summary = vec![format!(
        "unique colorful point at tuple {:?}",
        colorful.tuple
    )];
    if let Some(tol) = tol {
        let tol = parse_rational_flag("--tol", tol)?;
        if !tol.is_positive() {
            return Err(CliError::InvalidFlag("--tol wants a positive rational".into()));
        }
        let problem = problem_for_arrangement(&a, &vector).map_err(command_error)?;
        let approx = miranda_solve(&problem, &tol).map_err(command_error)?;
        let error = (0..2)
            .map(|i| (&approx.coords[i] - &colorful.point.coords[i]).abs())
            .max()
            .expect("two coordinates");
        summary.push(format!(
            "bisection landed within {} of the exact point (tolerance {})",
            svg::decimal(&error, 3),
            format_rational(&tol)
        ));
        results["bisection"] = json!({
            "point": approx,
            "tolerance": format_rational(&tol),
            "error": format_rational(&error),
        });
    }
    let outcome = Outcome {
        verdict: Verdict::Pass,
        results,
        summary,
    };
    Ok((inputs, outcome))
}

pub fn reduce(sequence: &Path) -> CommandResult {
    let mut inputs = Inputs::new();
    let seq = inputs.sequence(sequence)?;
    let desc = reduce_to_bicolored(&seq);
    let outcome = Outcome {
        verdict: Verdict::Done,
        results: json!({"description": desc}),
        summary: vec![format!(
            "reduced a sequence over {} lines with {} swaps to {} red and {} blue pseudolines",
            seq.n(),
            seq.k(),
            desc.reds().len(),
            desc.blues().len()
        )],
    };
    Ok((inputs, outcome))
}

pub fn realize(input: &Path, straight: Option<&Path>) -> CommandResult {
    let mut inputs = Inputs::new();
    match straight {
        None => {
            let desc = inputs.description(input)?;
            let poly = realize_pseudolines(&desc).map_err(command_error)?;
            let check = verify_description(&poly, &desc).map_err(command_error)?;
            if !check.ok {
                return Err(CliError::Command(format!(
                    "internal: the realization failed its own re-verification: {:?}",
                    check.diff
                )));
            }
            let outcome = Outcome {
                verdict: Verdict::Pass,
                results: json!({"realization": poly, "verified": true}),
                summary: vec![format!(
                    "realized the description as {} polylines and re-verified it",
                    poly.lines().len()
                )],
            };
            Ok((inputs, outcome))
        }
        Some(arrangement) => {
            let seq = inputs.sequence(input)?;
            let arr = inputs.straight(arrangement)?;
            match realize_straight(&seq, &arr) {
                Ok(realized) => {
                    let outcome = Outcome {
                        verdict: Verdict::Pass,
                        results: json!({"realization": realized}),
                        summary: vec![format!(
                            "extended {} red lines with {} blue cross-sections",
                            realized.reds().len(),
                            realized.blues().len()
                        )],
                    };
                    Ok((inputs, outcome))
                }
                Err(StretchError::NotARealization(msg)) => {
                    let outcome = Outcome {
                        verdict: Verdict::Fail,
                        results: json!({
                            "error": {"kind": "not_a_realization", "detail": msg}
                        }),
                        summary: vec!["the arrangement does not realize the sequence".into()],
                    };
                    Ok((inputs, outcome))
                }
                Err(e) => Err(command_error(e)),
            }
        }
    }
}

pub fn extract(
    arrangement: &Path,
    description: &Path,
    anchor: Option<&str>,
) -> CommandResult {
    let mut inputs = Inputs::new();
    let arr = inputs.straight(arrangement)?;
    let desc = inputs.description(description)?;
    let lambda = match anchor {
        Some(text) => parse_rational_flag("--anchor", text)?,
        None => Rational::new(1.into(), 2.into()),
    };
    match extract_allowable_at(&arr, &desc, &lambda) {
        Ok(ext) => {
            let outcome = Outcome {
                verdict: Verdict::Pass,
                results: json!({"extraction": ext}),
                summary: vec![format!(
                    "recovered a sequence over {} lines with {} swaps",
                    ext.sequence.n(),
                    ext.sequence.k()
                )],
            };
            Ok((inputs, outcome))
        }
        Err(StretchError::VerificationFailed(msg)) => {
            let outcome = Outcome {
                verdict: Verdict::Fail,
                results: json!({
                    "error": {"kind": "verification_failed", "detail": msg}
                }),
                summary: vec!["the arrangement disagrees with the description".into()],
            };
            Ok((inputs, outcome))
        }
        Err(StretchError::NotARealization(msg)) => {
            let outcome = Outcome {
                verdict: Verdict::Fail,
                results: json!({
                    "error": {"kind": "not_a_realization", "detail": msg}
                }),
                summary: vec!["the arrangement does not realize its own reduction".into()],
            };
            Ok((inputs, outcome))
        }
        Err(e) => Err(command_error(e)),
    }
}

pub fn verify(arrangement: &Path, description: &Path, straight: bool) -> CommandResult {
    let mut inputs = Inputs::new();
    let report = if straight {
        let arr: LineArrangement2D = inputs.straight(arrangement)?;
        let desc = inputs.description(description)?;
        verify_straight_description(&arr, &desc).map_err(command_error)?
    } else {
        let poly: PolylineArrangement = inputs.load(arrangement, &[&["realization"]])?;
        let desc = inputs.description(description)?;
        verify_description(&poly, &desc).map_err(command_error)?
    };
    let summary = match (report.ok, &report.diff) {
        (true, _) => "the arrangement matches the description".to_string(),
        (false, Some(diff)) => format!(
            "mismatch at {}: expected {:?}, found {:?} ({})",
            diff.line, diff.expected, diff.found, diff.note
        ),
        (false, None) => "the arrangement does not match the description".to_string(),
    };
    let outcome = Outcome {
        verdict: Verdict::of(report.ok),
        results: json!({"report": report}),
        summary: vec![summary],
    };
    Ok((inputs, outcome))
}

pub fn lower_bound(description: &Path, pair: Option<&str>) -> CommandResult {
    let mut inputs = Inputs::new();
    let desc = inputs.description(description)?;
    let pairs: Vec<(String, String)> = match pair {
        Some(text) => {
            let parts: Vec<&str> = text.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(CliError::InvalidFlag(format!(
                    "--pair wants two ids like r1,r2, got {text:?}"
                )));
            }
            vec![(parts[0].to_string(), parts[1].to_string())]
        }
        None => {
            let mut pairs = Vec::new();
            for class in [desc.reds(), desc.blues()] {
                for i in 0..class.len() {
                    for j in i + 1..class.len() {
                        pairs.push((class[i].id().to_string(), class[j].id().to_string()));
                    }
                }
            }
            pairs
        }
    };
    let mut bounds = Vec::new();
    let mut max = 0usize;
    for (a, b) in &pairs {
        let bound = crossing_lower_bound(&desc, a, b).map_err(command_error)?;
        max = max.max(bound);
        bounds.push(json!({"a": a, "b": b, "bound": bound}));
    }
    let stretchable_maybe = max <= 1;
    let outcome = Outcome {
        verdict: Verdict::of(stretchable_maybe),
        results: json!({"bounds": bounds, "max": max}),
        summary: vec![if stretchable_maybe {
            format!(
                "no obstruction: every same-color pair is forced to cross at most once \
                 ({} pairs)",
                pairs.len()
            )
        } else {
            format!(
                "certificate found: a same-color pair is forced to cross {max} times, \
                 no straight realization exists"
            )
        }],
    };
    Ok((inputs, outcome))
}

pub fn bridge(description: &Path) -> CommandResult {
    let mut inputs = Inputs::new();
    let desc = inputs.description(description)?;
    let orientation = orientation_from_description(&desc).map_err(command_error)?;
    let (uso, note) = informational_uso(&orientation)?;
    let outcome = Outcome {
        verdict: Verdict::Done,
        results: json!({
            "orientation": orientation,
            "uso_full": uso,
        }),
        summary: vec![format!(
            "read the grid orientation off the description ({note})"
        )],
    };
    Ok((inputs, outcome))
}

/// Parameters of one `generate` invocation, already split by clap.
pub struct GenerateParams<'a> {
    pub kind: &'a str,
    pub seed: u64,
    pub dim: Option<usize>,
    pub sizes: Option<&'a str>,
    pub lines: Option<usize>,
    pub steps: Option<usize>,
    pub full_sweep: bool,
}

fn generate_error(e: GenerateError) -> CliError {
    match e {
        GenerateError::InvalidParams(msg) => CliError::InvalidFlag(msg),
        GenerateError::GenerationBudgetExceeded(msg) => {
            CliError::Command(format!("generation budget exceeded: {msg}"))
        }
    }
}

fn reject_flags(kind: &str, offending: &[(&str, bool)]) -> Result<(), CliError> {
    for (name, present) in offending {
        if *present {
            return Err(CliError::InvalidFlag(format!(
                "{name} does not apply to generate {kind}"
            )));
        }
    }
    Ok(())
}

pub fn generate(params: &GenerateParams) -> CommandResult {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let kind = params.kind;
    let outcome = match kind {
        "well-separated" => {
            reject_flags(
                kind,
                &[
                    ("--lines", params.lines.is_some()),
                    ("--steps", params.steps.is_some()),
                    ("--full-sweep", params.full_sweep),
                ],
            )?;
            let sizes = parse_usize_list(
                "--sizes",
                params.sizes.ok_or_else(|| {
                    CliError::InvalidFlag("generate well-separated wants --sizes".into())
                })?,
            )?;
            let d = params.dim.unwrap_or(sizes.len());
            let p = if d == 2 {
                dualizable_ws_2d(&sizes, &mut rng).map_err(generate_error)?
            } else {
                well_separated_points(d, &sizes, &mut rng).map_err(generate_error)?
            };
            confirm(
                check_weak_general_position(&p).satisfied && check_well_separated(&p).satisfied,
                "generated instance failed re-verification",
            )?;
            Outcome {
                verdict: Verdict::Done,
                results: json!({"instance": InstanceFile::from_points(&p)}),
                summary: vec![format!(
                    "well-separated instance in dimension {d} with class sizes {sizes:?}"
                )],
            }
        }
        "beta-gamma" => {
            reject_flags(
                kind,
                &[
                    ("--dim", params.dim.is_some()),
                    ("--sizes", params.sizes.is_some()),
                    ("--lines", params.lines.is_some()),
                    ("--steps", params.steps.is_some()),
                    ("--full-sweep", params.full_sweep),
                ],
            )?;
            let p = beta_gamma_analog(&mut rng).map_err(generate_error)?;
            let bg = BetaGamma::new(vec![2, 2], vec![2, 2]);
            let report = check_beta_gamma(&p, &bg).map_err(command_error)?;
            confirm(
                report.satisfied && !check_well_separated(&p).satisfied,
                "generated instance failed re-verification",
            )?;
            Outcome {
                verdict: Verdict::Done,
                results: json!({
                    "instance": InstanceFile::from_points(&p),
                    "beta": bg.beta,
                    "gamma": bg.gamma,
                }),
                summary: vec![
                    "planar 3+3 instance, (2,2)-(2,2)-separated but not well separated".into(),
                ],
            }
        }
        "arrangement" => {
            reject_flags(
                kind,
                &[
                    ("--dim", params.dim.is_some()),
                    ("--lines", params.lines.is_some()),
                    ("--steps", params.steps.is_some()),
                    ("--full-sweep", params.full_sweep),
                ],
            )?;
            let sizes = parse_usize_list(
                "--sizes",
                params.sizes.ok_or_else(|| {
                    CliError::InvalidFlag("generate arrangement wants --sizes".into())
                })?,
            )?;
            let a = rainbow_ws_lines_2d(&sizes, &mut rng).map_err(generate_error)?;
            Outcome {
                verdict: Verdict::Done,
                results: json!({"lines": LinesFile::from_arrangement(&a)}),
                summary: vec![format!(
                    "planar two-class line arrangement with class sizes {sizes:?}"
                )],
            }
        }
        "allowable" => {
            reject_flags(
                kind,
                &[
                    ("--dim", params.dim.is_some()),
                    ("--sizes", params.sizes.is_some()),
                ],
            )?;
            let n = params.lines.ok_or_else(|| {
                CliError::InvalidFlag("generate allowable wants --lines".into())
            })?;
            match (params.steps, params.full_sweep) {
                (Some(steps), false) => {
                    let seq = allowable_walk(n, steps, &mut rng).map_err(generate_error)?;
                    Outcome {
                        verdict: Verdict::Done,
                        results: json!({"sequence": seq}),
                        summary: vec![format!(
                            "random swap walk over {n} lines with {steps} steps"
                        )],
                    }
                }
                (None, true) => {
                    let (arr, seq) = generic_lines(n, &mut rng).map_err(generate_error)?;
                    Outcome {
                        verdict: Verdict::Done,
                        results: json!({"sequence": seq, "arrangement": arr}),
                        summary: vec![format!(
                            "generic {n}-line arrangement and its full sweep sequence \
                             ({} swaps)",
                            seq.k()
                        )],
                    }
                }
                _ => {
                    return Err(CliError::InvalidFlag(
                        "generate allowable wants exactly one of --steps or --full-sweep".into(),
                    ))
                }
            }
        }
        other => {
            return Err(CliError::InvalidFlag(format!(
                "unknown generate kind {other:?} (well-separated, beta-gamma, arrangement, \
                 allowable)"
            )))
        }
    };
    Ok((Inputs::new(), outcome))
}

fn confirm(ok: bool, message: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Command(message.into()))
    }
}

/// The plot command: renders to SVG instead of a JSON report, so there
/// is no verdict, only the drawing and its stderr summary.
pub fn plot(
    input: &Path,
    alpha: Option<&str>,
    trust: bool,
    out: &Option<PathBuf>,
) -> Result<Vec<String>, CliError> {
    let alpha = match alpha {
        Some(text) => Some(parse_usize_list("--alpha", text)?),
        None => None,
    };
    let (svg, summary, _) = svg::plot_file(input, alpha.as_deref(), trust)?;
    match out {
        Some(path) => files::write_text(path, &svg)?,
        None => print!("{svg}"),
    }
    Ok(summary)
}
