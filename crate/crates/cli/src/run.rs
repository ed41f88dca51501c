use std::fs;
use std::path::{Path, PathBuf};

use arith_quandle::arith::{prime_label, rational_prime_below, tower, QuandleTower};
use arith_quandle::padic::LocalElement;
use arith_quandle::quandle::{AutSearch, Sampling};
use arith_quandle::reconstruct::{
    aut_structure_report, classify_case, detect_w, evaluate_sigma, match_quandles,
    norm_sum_coordinates, reciprocity_coordinates, recover_group, recover_orbits, recover_p,
    recover_p_unlabeled, recover_residue_chars, Case, Observation,
};
use arith_quandle::Error;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, MatchSpec};

/// Run outcome: the exit status and the report written.
pub struct Outcome {
    pub ok: bool,
    pub summary: String,
    pub report: Value,
}

/// Input errors (exit 2) versus failed invariants (exit 1).
pub enum Failure {
    Input(Error),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. }
            | Error::RamifiedPrime(_)
            | Error::NotPrime(_)
            | Error::InvalidField(_)
            | Error::UnsupportedField(_)
            | Error::GroupTooLarge { .. }
            | Error::LevelMismatch(_) => Failure::Input(e),
            other => Failure::Runtime(other),
        }
    }
}

pub struct Context {
    pub config: ExperimentConfig,
    /// The config document as read, echoed into every report.
    pub raw: Value,
    pub seed: u64,
}

fn build(c: &ExperimentConfig) -> Result<QuandleTower, Failure> {
    Ok(tower(&c.ideal()?, &c.prime_set()?, c.level)?)
}

fn envelope(ctx: &Context, command: &str, body: Value) -> Value {
    json!({ "command": command, "config": ctx.raw, "seed": ctx.seed, "result": body })
}

pub fn run(command: &str, ctx: &Context) -> Result<Outcome, Failure> {
    let (ok, summary, body) = match command {
        "build" => cmd_build(ctx)?,
        "verify" => cmd_verify(ctx)?,
        "reconstruct" => cmd_reconstruct(ctx)?,
        "aut" => cmd_aut(ctx)?,
        "match" => cmd_match(ctx)?,
        other => {
            return Err(Failure::Input(Error::Config {
                field: "command".into(),
                message: format!("unknown command {other}"),
            }))
        }
    };
    Ok(Outcome {
        ok,
        summary,
        report: envelope(ctx, command, body),
    })
}

pub fn write_report(dir: &Path, command: &str, report: &Value) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{command}.json"));
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

type Step = Result<(bool, String, Value), Failure>;

fn cmd_build(ctx: &Context) -> Step {
    let t = build(&ctx.config)?;
    let sizes: Vec<usize> = t.levels().iter().map(|l| l.quandle().len()).collect();
    let body = serde_json::to_value(t.to_json_value()).expect("tower serializes");
    Ok((
        true,
        format!("built {} levels, sizes {sizes:?}", t.max_level()),
        body,
    ))
}

fn cmd_verify(ctx: &Context) -> Step {
    let t = build(&ctx.config)?;
    let sampling = Sampling {
        seed: ctx.seed,
        ..Sampling::default()
    };
    let reports = t.verify(sampling);
    let ok = reports.iter().all(|r| r.axioms.pass && r.fiber_size_law);
    let levels: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "size": r.size,
                "groupOrder": r.group_order,
                "pass": r.axioms.pass,
                "exhaustive": r.axioms.exhaustive,
                "triplesChecked": r.axioms.triples_checked,
                "counterexample": r.axioms.counterexample.as_ref().map(|c| json!({"axiom": c.axiom, "witness": c.witness})),
                "fiberSizeLaw": r.fiber_size_law,
            })
        })
        .collect();
    let summary = format!(
        "{} levels verified: {}",
        reports.len(),
        if ok { "pass" } else { "FAIL" }
    );
    Ok((ok, summary, json!({ "levels": levels, "pass": ok })))
}

fn cmd_reconstruct(ctx: &Context) -> Step {
    let c = &ctx.config;
    let t = build(c)?;
    let top = t.level(t.max_level());
    let group = recover_group(top.quandle());
    let orbits = recover_orbits(top.quandle());
    let case = classify_case(t.field(), t.prime())?;
    let true_p = rational_prime_below(t.prime());
    let mut ok = orbits.matches_fibers != Some(false);
    let p_labeled = recover_p(&t);
    let levels: Vec<_> = t
        .levels()
        .iter()
        .map(|l| l.quandle().clone().without_labels())
        .collect();
    let p_unlabeled = recover_p_unlabeled(&levels);
    let p_json = |r: &arith_quandle::Result<arith_quandle::reconstruct::PRecovery>| match r {
        Ok(r) => json!({ "p": r.p, "growthTable": r.growth, "saturation": r.saturation }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    if case != Case::FiniteG {
        ok &= matches!(&p_labeled, Ok(r) if r.p == true_p);
    }
    let mut chars_json = Vec::new();
    let mut pairing_json = Value::Null;
    let mut correct = 0usize;
    if case != Case::FiniteG {
        let data = reciprocity_coordinates(top, c.precision)?;
        let params = c.params();
        let scalars: Vec<Option<LocalElement>> = if case.dim() == 2 {
            match detect_w(&data.values, &params) {
                Ok(w) => {
                    let pairing: Vec<Value> = w
                        .partner
                        .iter()
                        .enumerate()
                        .map(|(i, j)| {
                            json!([
                                prime_label(&data.primes[i]),
                                j.map(|j| prime_label(&data.primes[j]))
                            ])
                        })
                        .collect();
                    let conj =
                        w.partner.iter().enumerate().all(|(i, j)| {
                            j.is_some_and(|j| data.primes[j] == data.primes[i].conj())
                        });
                    ok &= conj;
                    pairing_json = json!({ "pairs": pairing, "isConjugation": conj });
                    norm_sum_coordinates(&data.values, &w)?
                }
                Err(e) => {
                    pairing_json = json!({ "error": e.to_string() });
                    vec![None; data.values.len()]
                }
            }
        } else {
            data.values.iter().cloned().map(Some).collect()
        };
        for (l, r) in data
            .primes
            .iter()
            .zip(recover_residue_chars(&scalars, &params))
        {
            let truth = rational_prime_below(l);
            chars_json.push(match r {
                Ok(r) => {
                    // a wrong answer is a failed invariant; inconclusive is not
                    ok &= r.l == truth;
                    correct += usize::from(r.l == truth);
                    json!({ "prime": prime_label(l), "recovered": r.l, "true": truth })
                }
                Err(e) => json!({ "prime": prime_label(l), "recovered": null, "true": truth, "message": e.to_string() }),
            });
        }
    }
    let body = json!({
        "case": case,
        "p": true_p,
        "recoverP": p_json(&p_labeled),
        "recoverPUnlabeled": p_json(&p_unlabeled),
        "group": {
            "innOrder": group.order(),
            "augmentedOrder": group.augmented.as_ref().map(|a| a.order()),
            "kernelOrder": group.augmented.as_ref().map(|a| a.kernel_order),
            "transitive": group.transitive,
            "dense": group.is_dense(),
        },
        "orbits": orbits.orbits.len(),
        "orbitsMatchFibers": orbits.matches_fibers,
        "residueChars": chars_json,
        "residueCharsCorrect": correct,
        "pairing": pairing_json,
    });
    let summary = format!(
        "case {case}, p = {}, residue characteristics {correct}/{} recovered",
        p_labeled
            .as_ref()
            .map_or("?".to_string(), |r| r.p.to_string()),
        chars_json.len()
    );
    Ok((ok, summary, body))
}

fn cmd_aut(ctx: &Context) -> Step {
    let t = build(&ctx.config)?;
    let q = t.level(t.max_level()).quandle();
    let r = aut_structure_report(q, AutSearch::default())?;
    let ok = r.holds();
    let summary = format!(
        "|Q| = {}, predicted order {}, exhaustive {}: {}",
        r.size,
        r.predicted_order,
        r.exhaustive
            .as_ref()
            .map_or("skipped".to_string(), |e| e.order.to_string()),
        if ok { "pass" } else { "FAIL" }
    );
    Ok((
        ok,
        summary,
        serde_json::to_value(&r).expect("report serializes"),
    ))
}

fn cmd_match(ctx: &Context) -> Step {
    let c = &ctx.config;
    let t = build(c)?;
    let (obs, truth) = Observation::from_tower(&t, c.precision)?;
    let spec = c
        .match_with
        .clone()
        .unwrap_or(MatchSpec::Copy("shuffled".into()));
    let (other, other_truth) = match &spec {
        MatchSpec::Copy(kind) => {
            let relabel = if kind == "conjugated" {
                truth.conjugated()
            } else {
                truth.clone()
            };
            let sh = obs.shuffled(&relabel, ctx.seed);
            (sh.observation, sh.truth)
        }
        MatchSpec::Other(oc) => {
            let ot = build(oc)?;
            let (o, tr) = Observation::from_tower(&ot, c.precision)?;
            let sh = o.shuffled(&tr, ctx.seed);
            (sh.observation, sh.truth)
        }
    };
    let report = match_quandles(&obs, &other, &c.params());
    let eval = if report.matching.is_empty() {
        None
    } else {
        Some(evaluate_sigma(&report, &truth, &other_truth))
    };
    let ok = report.is_ok() && eval.as_ref().is_some_and(|e| e.residue_chars_preserved);
    let fatal: Vec<&str> = report
        .diagnostics
        .iter()
        .filter(|d| d.fatal)
        .map(|d| d.kind.as_str())
        .collect();
    let summary = format!(
        "{} fibers matched, sigma {}{}",
        report.matching.len(),
        eval.as_ref()
            .and_then(|e| e.sigma)
            .or(report.sigma)
            .map_or("none".to_string(), |s| s.to_string()),
        if fatal.is_empty() {
            String::new()
        } else {
            format!(", diagnostics: {}", fatal.join(", "))
        }
    );
    let mut body = serde_json::to_value(&report).expect("report serializes");
    body["evaluation"] = serde_json::to_value(&eval).expect("evaluation serializes");
    if let Some(e) = &eval {
        // the report's sigma is the one read against labels
        body["sigma"] = serde_json::to_value(e.sigma).expect("sigma serializes");
    }
    Ok((ok, summary, body))
}
