//! One function per subcommand.
//!
//! Each returns an exit code, a report value and a list of artifact
//! files.  The code is 0 for a positive answer, 1 for a definite
//! mathematical no, 3 when the routines could not decide.  Input
//! problems are ordinary errors and become exit 2 in the driver.
//! Reports contain only exact strings and integers (floats go through
//! a fixed 15 digit format), so identical inputs and flags produce
//! identical bytes.

use crate::instance::Instance;
use anyhow::{anyhow, bail, Result};
use hodge_core::cones::Cone;
use hodge_core::fans::{fan_axioms, fan_from_roots, plus_part_test, RootSet};
use hodge_core::filtration::IncFiltration;
use hodge_core::mat::Mat;
use hodge_core::mhs::{delta_splitting, deligne_bigrading, validate_mhs, verify_bigrading};
use hodge_core::monodromy::{rel_monodromy, RelMonodromy};
use hodge_core::monoid::dual_monoid;
use hodge_core::nilporb::{generates_nilpotent_orbit, Verdict};
use hodge_core::polarized::FormFamily;
use hodge_core::scalar::{fmt_rat, parse_rat, Rat};
use hodge_core::sl2::{associate_sl2, variance_profile, WeightChain};
use hodge_degenlab::degen::{
    classify_limit, monomial_path_class, ratio_label, run_example, trace_path, val_label,
    Monotone, PathSpec, TraceColumn,
};
use serde_json::{json, Value};

pub struct Flags {
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
}

pub struct Outcome {
    pub exit: i32,
    pub report: Value,
    /// file name and contents, written next to the report
    pub artifacts: Vec<(String, String)>,
}

fn ok(report: Value) -> Outcome {
    Outcome {
        exit: 0,
        report,
        artifacts: Vec::new(),
    }
}

fn rats_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_rat(x))).collect())
}

fn mat_json(m: &Mat<Rat>) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|i| {
                Value::Array(
                    (0..m.cols)
                        .map(|j| Value::String(fmt_rat(&m[(i, j)])))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn inc_json(w: &IncFiltration<Rat>) -> Value {
    let jumps = w.jumps();
    let dims: Vec<Value> = jumps
        .iter()
        .map(|&j| json!({"weight": j, "graded_dim": w.graded_dim(j)}))
        .collect();
    json!({"jumps": jumps, "graded": dims})
}

fn forms_of(inst: &Instance) -> Result<&FormFamily> {
    inst.forms
        .as_ref()
        .ok_or_else(|| anyhow!("this command needs a forms section"))
}

fn paths_of(inst: &Instance) -> Result<Vec<PathSpec>> {
    let cone = inst
        .cone
        .as_ref()
        .ok_or_else(|| anyhow!("this command needs a cone section"))?;
    if inst.paths.is_empty() {
        bail!("this command needs a nonempty paths section");
    }
    let mut out = Vec::new();
    for (j, p) in inst.paths.iter().enumerate() {
        out.push(
            PathSpec::new(
                inst.x.clone(),
                cone.clone(),
                p.exponents.clone(),
                p.coefficients.clone(),
            )
            .map_err(|e| anyhow!("paths[{}]: {}", j, e))?,
        );
    }
    Ok(out)
}

pub fn mhs_check(inst: &Instance) -> Result<Outcome> {
    let rep = validate_mhs(&inst.x);
    let report = json!({
        "verdict": if rep.ok { "valid" } else { "invalid" },
        "failures": rep.failures,
        "dim": inst.x.dim,
        "weights": inst.x.weights(),
        "weight_filtration": inc_json(&inst.x.w),
    });
    Ok(Outcome {
        exit: if rep.ok { 0 } else { 1 },
        report,
        artifacts: Vec::new(),
    })
}

pub fn bigrading(inst: &Instance) -> Result<Outcome> {
    match deligne_bigrading(&inst.x) {
        Ok(bg) => {
            verify_bigrading(&inst.x, &bg)
                .map_err(|e| anyhow!("computed bigrading failed its own checks: {}", e))?;
            let pieces: Vec<Value> = bg
                .pieces
                .iter()
                .filter(|(_, s)| s.dim() > 0)
                .map(|((p, q), s)| json!({"p": p, "q": q, "dim": s.dim()}))
                .collect();
            Ok(ok(json!({
                "verdict": "ok",
                "r_split": bg.r_split,
                "pieces": pieces,
            })))
        }
        Err(e) => Ok(Outcome {
            exit: 1,
            report: json!({"verdict": "no", "reason": e}),
            artifacts: Vec::new(),
        }),
    }
}

pub fn delta(inst: &Instance) -> Result<Outcome> {
    match delta_splitting(&inst.x) {
        Ok(d) => {
            let round_trip = {
                let e = d.delta.lift().scale(&hodge_core::scalar::gi(0, 1)).exp_nilpotent();
                d.f_split.apply(&e).normalized() == inst.x.f.normalized()
            };
            Ok(ok(json!({
                "verdict": "ok",
                "delta": mat_json(&d.delta),
                "delta_zero": d.delta.is_zero(),
                "round_trip_exact": round_trip,
                "split_r_split": d.split_bigrading.r_split,
            })))
        }
        Err(e) => Ok(Outcome {
            exit: 1,
            report: json!({"verdict": "no", "reason": e}),
            artifacts: Vec::new(),
        }),
    }
}

pub fn monodromy(inst: &Instance) -> Result<Outcome> {
    let cone = inst
        .cone
        .as_ref()
        .ok_or_else(|| anyhow!("this command needs a cone section"))?;
    let mut entries = Vec::new();
    let mut saw_nonexistent = false;
    let mut saw_undecided = false;
    let mut targets: Vec<(String, Mat<Rat>)> = cone
        .generators
        .iter()
        .enumerate()
        .map(|(j, g)| (format!("generator {}", j), g.clone()))
        .collect();
    if cone.generators.len() > 1 {
        let ones = vec![Rat::from_integer(1.into()); cone.generators.len()];
        targets.push(("interior sum".to_string(), cone.element(&ones)));
    }
    for (label, n) in &targets {
        let entry = match rel_monodromy(n, &inst.x.w).map_err(|e| anyhow!("{}: {}", label, e))? {
            RelMonodromy::Exists(m) => {
                json!({"target": label, "result": "exists", "filtration": inc_json(&m)})
            }
            RelMonodromy::NonExistent { witness } => {
                saw_nonexistent = true;
                json!({"target": label, "result": "nonexistent", "witness": witness})
            }
            RelMonodromy::Undecided { note } => {
                saw_undecided = true;
                json!({"target": label, "result": "undecided", "note": note})
            }
        };
        entries.push(entry);
    }
    let exit = if saw_nonexistent {
        1
    } else if saw_undecided {
        3
    } else {
        0
    };
    Ok(Outcome {
        exit,
        report: json!({
            "verdict": if exit == 0 { "exists" } else if exit == 1 { "nonexistent" } else { "undecided" },
            "relative_filtrations": entries,
        }),
        artifacts: Vec::new(),
    })
}

pub fn nilporbit(inst: &Instance, flags: &Flags) -> Result<Outcome> {
    let cone = inst
        .cone
        .as_ref()
        .ok_or_else(|| anyhow!("this command needs a cone section"))?;
    let forms = forms_of(inst)?;
    let d = generates_nilpotent_orbit(cone, &inst.x, forms, flags.seed)
        .map_err(|e| anyhow!("{}", e))?;
    let exit = match d.verdict {
        Verdict::Yes => 0,
        Verdict::No => 1,
        Verdict::Undecided => 3,
    };
    Ok(Outcome {
        exit,
        report: json!({
            "verdict": d.verdict.to_string(),
            "evidence": d.evidence,
        }),
        artifacts: Vec::new(),
    })
}

pub fn sl2(inst: &Instance, flags: &Flags) -> Result<Outcome> {
    let cone = inst
        .cone
        .as_ref()
        .ok_or_else(|| anyhow!("this command needs a cone section"))?;
    let forms = forms_of(inst)?;
    match associate_sl2(
        &cone.generators,
        &inst.x,
        forms,
        flags.tol,
        flags.max_iter,
        flags.seed,
    ) {
        Ok(data) => {
            let chain = WeightChain {
                filtrations: data.w_chain.clone(),
                rank: data.rank,
                s_indices: data.s_indices.clone(),
            };
            let vp = variance_profile(&chain, true);
            let moments: Vec<Value> = vp
                .moments
                .iter()
                .map(|(m, v)| json!({"mean": fmt_rat(m), "variance": fmt_rat(v)}))
                .collect();
            let gradings: Vec<Value> = data
                .tau_gradings
                .iter()
                .enumerate()
                .map(|(j, spl)| {
                    let dims: Vec<Value> = spl
                        .grading
                        .iter()
                        .map(|(w, s)| json!({"weight": w, "dim": s.dim()}))
                        .collect();
                    json!({"step": j, "pieces": dims, "approx": spl.approx})
                })
                .collect();
            let chain_json: Vec<Value> = data.w_chain.iter().map(inc_json).collect();
            Ok(ok(json!({
                "verdict": "ok",
                "rank": data.rank,
                "s_indices": data.s_indices,
                "b_orbit": data.b_orbit,
                "weight_chain": chain_json,
                "gradings": gradings,
                "modified_generators_zero": data.n_hat.iter().map(|m| m.is_zero()).collect::<Vec<_>>(),
                "r_point_approx": data.r_approx,
                "variance": {
                    "moments": moments,
                    "mean_constant": vp.mean_constant,
                    "monotone": vp.monotone,
                    "strict_at_jumps": vp.strict_at_jumps,
                },
                "notes": data.notes,
            })))
        }
        Err(e) => Ok(Outcome {
            exit: 1,
            report: json!({"verdict": "no", "reason": e}),
            artifacts: Vec::new(),
        }),
    }
}

fn meta_vectors(inst: &Instance, key: &str) -> Result<Option<Vec<Vec<Rat>>>> {
    let raw = match inst.meta.get(key) {
        None => return Ok(None),
        Some(v) => v,
    };
    let arr = raw
        .as_array()
        .ok_or_else(|| anyhow!("meta.{} must be an array of rational vectors", key))?;
    let mut out = Vec::new();
    for (i, row) in arr.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| anyhow!("meta.{}[{}] must be an array", key, i))?;
        let mut v = Vec::new();
        for s in row {
            let s = s
                .as_str()
                .ok_or_else(|| anyhow!("meta.{}[{}] entries must be \"p/q\" strings", key, i))?;
            v.push(parse_rat(s).map_err(|e| anyhow!("meta.{}[{}]: {}", key, i, e))?);
        }
        out.push(v);
    }
    Ok(Some(out))
}

pub fn fan(inst: &Instance) -> Result<Outcome> {
    let vecs = meta_vectors(inst, "roots")?
        .ok_or_else(|| anyhow!("this command needs meta.roots, a list of rational vectors"))?;
    if vecs.is_empty() {
        bail!("meta.roots is empty");
    }
    let rank = vecs[0].len();
    let roots = RootSet::new(rank, vecs).map_err(|e| anyhow!("meta.roots: {}", e))?;
    let fan = fan_from_roots(&roots);
    let axioms = fan_axioms(&roots, &fan);
    let plus = plus_part_test(&roots);
    let members: Vec<Value> = fan
        .members
        .iter()
        .map(|m| {
            json!({
                "part_size": m.part.len(),
                "cone_dim": m.cone.span().dim(),
                "rays": m.cone.rays.len(),
            })
        })
        .collect();
    let ok_axioms = axioms.is_ok();
    Ok(Outcome {
        exit: if ok_axioms { 0 } else { 1 },
        report: json!({
            "verdict": if ok_axioms { "ok" } else { "axioms violated" },
            "rank": rank,
            "roots": roots.roots.len(),
            "cones": fan.members.len(),
            "members": members,
            "axioms": axioms.err().unwrap_or_default(),
            "plus_part": {
                "size": plus.plus_part.len(),
                "parabolic": plus.parabolic,
                "matches_faces": plus.sigma_plus_matches_faces,
                "consistent": plus.consistent,
            },
        }),
        artifacts: Vec::new(),
    })
}

pub fn monoid(inst: &Instance) -> Result<Outcome> {
    let cone = match meta_vectors(inst, "monoid_gens")? {
        Some(vecs) => {
            if vecs.is_empty() {
                bail!("meta.monoid_gens is empty");
            }
            Cone::from_gens(vecs[0].len(), vecs)
        }
        None => {
            let c = inst.cone.as_ref().ok_or_else(|| {
                anyhow!("this command needs meta.monoid_gens or a cone section")
            })?;
            let n = c.generators.len();
            let mut gens = Vec::new();
            for j in 0..n {
                let mut e = vec![Rat::from_integer(0.into()); n];
                e[j] = Rat::from_integer(1.into());
                gens.push(e);
            }
            Cone::from_gens(n, gens)
        }
    };
    let tag = inst
        .meta
        .get("lattice")
        .and_then(|v| v.as_str())
        .unwrap_or("std");
    match dual_monoid(&cone, tag) {
        Ok(m) => {
            let pairing = m.pairing_table();
            Ok(ok(json!({
                "verdict": "ok",
                "lattice": m.lattice_tag,
                "monoid_gens": m.gens.iter().map(|v| rats_json(v)).collect::<Vec<_>>(),
                "dual_gens": m.dual_gens.iter().map(|v| rats_json(v)).collect::<Vec<_>>(),
                "pairing": mat_json(&pairing),
            })))
        }
        Err(e) => Ok(Outcome {
            exit: 1,
            report: json!({"verdict": "no", "reason": e}),
            artifacts: Vec::new(),
        }),
    }
}

pub fn ratio(inst: &Instance) -> Result<Outcome> {
    let paths = paths_of(inst)?;
    let mut chains = Vec::new();
    let mut entries = Vec::new();
    for (j, p) in paths.iter().enumerate() {
        let pc = monomial_path_class(p).map_err(|e| anyhow!("paths[{}]: {}", j, e))?;
        entries.push(json!({
            "path": j,
            "classes": pc.classes,
            "class_exponents": rats_json(&pc.class_exponents),
            "residual": pc.residual,
            "rates": rats_json(&pc.rates()),
            "depth": pc.chain.depth(),
            "ratio_label": ratio_label(&pc.chain),
            "val_label": rats_json(&val_label(&p.exponents)),
        }));
        chains.push(pc.chain);
    }
    let mut same = Vec::new();
    for a in &chains {
        let row: Vec<bool> = chains.iter().map(|b| a.same_class(b)).collect();
        same.push(Value::Array(row.into_iter().map(Value::Bool).collect()));
    }
    Ok(ok(json!({
        "verdict": "ok",
        "paths": entries,
        "same_ratio_class": same,
    })))
}

pub fn classify(inst: &Instance, flags: &Flags) -> Result<Outcome> {
    let forms = forms_of(inst)?;
    let paths = paths_of(inst)?;
    let mut entries = Vec::new();
    let mut saw_no = false;
    let mut saw_undecided = false;
    for (j, p) in paths.iter().enumerate() {
        match classify_limit(p, forms, flags.tol, flags.max_iter, flags.seed) {
            Ok(rep) => {
                let fps: Vec<Value> = rep
                    .fingerprints
                    .iter()
                    .enumerate()
                    .map(|(g, fp)| {
                        json!({
                            "generator": g,
                            "per_grading": fp.per_grading,
                            "totals": rats_json(&fp.totals),
                        })
                    })
                    .collect();
                let chain_json: Vec<Value> =
                    rep.weight_filtrations.filtrations.iter().map(inc_json).collect();
                entries.push(json!({
                    "path": j,
                    "result": "classified",
                    "sharp_face": rep.sharp_face,
                    "classes": rep.classes,
                    "rates": rats_json(&rep.rates),
                    "ratio_label": rep.ratio_label,
                    "val_label": rats_json(&rep.val_label),
                    "weight_chain": chain_json,
                    "fingerprints": fps,
                    "gate": rep.gate_evidence,
                }));
            }
            Err(e) => {
                // the gate saying no is a verdict, not a malfunction
                if e.contains("does not generate") {
                    saw_no = true;
                    entries.push(json!({"path": j, "result": "no", "reason": e}));
                } else if e.contains("undecided") {
                    saw_undecided = true;
                    entries.push(json!({"path": j, "result": "undecided", "reason": e}));
                } else {
                    return Err(anyhow!("paths[{}]: {}", j, e));
                }
            }
        }
    }
    let exit = if saw_no {
        1
    } else if saw_undecided {
        3
    } else {
        0
    };
    Ok(Outcome {
        exit,
        report: json!({
            "verdict": if exit == 0 { "classified" } else if exit == 1 { "no" } else { "undecided" },
            "paths": entries,
        }),
        artifacts: Vec::new(),
    })
}

fn monotone_json(m: &Option<Monotone>) -> Value {
    match m {
        Some(Monotone::Increasing) => Value::String("increasing".to_string()),
        Some(Monotone::Decreasing) => Value::String("decreasing".to_string()),
        None => Value::Null,
    }
}

pub fn trace(inst: &Instance) -> Result<Outcome> {
    let paths = paths_of(inst)?;
    let mut artifacts = Vec::new();
    let mut entries = Vec::new();
    for (j, p) in paths.iter().enumerate() {
        let mut cols = vec![TraceColumn::Param];
        for g in 0..p.exponents.len() {
            cols.push(TraceColumn::YMag(g));
        }
        if inst.x.dim == 2 {
            cols.push(TraceColumn::XCoord);
            cols.push(TraceColumn::BsCoord);
            if inst.forms.is_some() {
                cols.push(TraceColumn::Sl2Coord);
                cols.push(TraceColumn::Sl2CoordSq);
            }
        }
        cols.push(TraceColumn::DeltaNorm);
        let table = trace_path(p, inst.forms.as_ref(), &cols)
            .map_err(|e| anyhow!("paths[{}]: {}", j, e))?;
        let name = format!("trace-{}.csv", j);
        artifacts.push((name.clone(), table.to_csv()));
        let monotone: Vec<Value> = table.monotone.iter().map(monotone_json).collect();
        entries.push(json!({
            "path": j,
            "file": name,
            "columns": table.header,
            "monotone": monotone,
            "rows": table.rows.len(),
        }));
    }
    Ok(Outcome {
        exit: 0,
        report: json!({"verdict": "ok", "traces": entries}),
        artifacts,
    })
}

pub fn example(name: &str, flags: &Flags) -> Result<Outcome> {
    let rep = run_example(name, flags.seed).map_err(|e| anyhow!("{}", e))?;
    let claims: Vec<Value> = rep
        .claims
        .iter()
        .map(|(text, okay)| json!({"claim": text, "ok": okay}))
        .collect();
    let mut artifacts = Vec::new();
    if let Some(csv) = &rep.csv {
        artifacts.push((format!("example-{}.csv", rep.name), csv.clone()));
    }
    let pass = rep.pass();
    Ok(Outcome {
        exit: if pass { 0 } else { 1 },
        report: json!({
            "verdict": if pass { "pass" } else { "fail" },
            "example": rep.name,
            "claims": claims,
            "details": rep.details,
        }),
        artifacts,
    })
}
