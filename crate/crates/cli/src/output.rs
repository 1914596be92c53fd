//! JSON documents printed by each subcommand. Every document carries a
//! `schema` field of the form `polyspace.<name>/<version>`.

use std::io::Write;
use std::path::{Path, PathBuf};

use polyspace::cohomology::{self, balanced_presentation, case_table_row, defect_basis};
use polyspace::combinatorics::{is_normal, is_normal_by_triples, signature_of};
use polyspace::enumeration::{
    count_normal, db_path, enumerate_with, estimate_nonnormal_volume, read_records, EnumerationOptions,
};
use polyspace::gf2::{self, GradedPresentation, Space};
use polyspace::ideals::audit_balanced_keys;
use polyspace::rational::format_rational;
use polyspace::{Error, LengthVector, Result, Subset};
use serde_json::{json, Value};

fn schema(name: &str) -> String {
    format!("polyspace.{name}/1")
}

fn rationals(lv: &LengthVector) -> Vec<String> {
    lv.entries().iter().map(format_rational).collect()
}

fn hex(sets: &[Subset]) -> Vec<String> {
    sets.iter().map(|s| s.to_hex()).collect()
}

pub fn print(value: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"));
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => 2,
        e if e.is_precondition() => 3,
        _ => 1,
    }
}

pub fn error_object(e: &Error, code: u8) -> Value {
    json!({
        "schema": schema("error"),
        "error": { "kind": e.kind(), "message": e.to_string() },
        "exit_code": code,
    })
}

pub fn usage_error(message: &str) -> Value {
    json!({
        "schema": schema("error"),
        "error": { "kind": "usage", "message": message.trim_end() },
        "exit_code": 1,
    })
}

pub fn default_db(dir: Option<&Path>, n: usize) -> PathBuf {
    db_path(dir.unwrap_or(Path::new(".")), n)
}

pub fn classify(lv: &LengthVector, subset: Option<Subset>) -> Result<Value> {
    let (family, perm) = signature_of(lv);
    let (ordered, _) = lv.ordered();
    let mut doc = json!({
        "schema": schema("classify"),
        "n": lv.n(),
        "lengths": rationals(lv),
        "ordered": rationals(&ordered.into_inner()),
        "permutation": perm.image(),
        "generic": family.generic,
        "short_with_n": hex(&family.short_with_n),
        "median_with_n": hex(&family.median_with_n),
        "normal": is_normal(lv),
        "normal_by_triples": is_normal_by_triples(lv),
    });
    if let Some(s) = subset {
        doc["subset"] = json!({
            "subset": s.to_hex(),
            "indices": s.iter().collect::<Vec<_>>(),
            "class": lv.classify(s)?.as_str(),
        });
    }
    Ok(doc)
}

pub fn betti(lv: &LengthVector) -> Result<Value> {
    let table = cohomology::betti(lv)?;
    let case = if lv.n() > 4 { Some(case_table_row(lv)?) } else { None };
    Ok(json!({
        "schema": schema("betti"),
        "n": lv.n(),
        "b": table.b,
        "a": table.a,
        "a_tilde": table.a_tilde,
        "euler_characteristic": table.euler_characteristic(),
        "case": case,
    }))
}

pub fn present(lv: &LengthVector) -> Result<Value> {
    let b = balanced_presentation(lv)?;
    let defect = match defect_basis(lv) {
        Ok(d) => Some(d.by_degree.iter().map(|g| hex(g)).collect::<Vec<_>>()),
        Err(e) if e.is_precondition() => None,
        Err(e) => return Err(e),
    };
    Ok(json!({
        "schema": schema("present"),
        "n": b.n,
        "ordered": rationals(&lv.ordered().0.into_inner()),
        "generators": (1..b.n).map(|i| format!("X{i}")).collect::<Vec<_>>(),
        "minimal_monomials": hex(&b.generators),
        "i_of_ell": b.i_of_ell,
        "ranks": b.ranks,
        "defect_basis": defect,
    }))
}

pub fn gf2dims(lv: &LengthVector, space: Space) -> Result<Value> {
    let p = GradedPresentation::new(lv, space)?;
    let dims = gf2::graded_dims(&p);
    Ok(json!({
        "schema": schema("gf2dims"),
        "n": lv.n(),
        "space": dims.space,
        "dims": dims.dims,
    }))
}

pub fn w1(lv: &LengthVector) -> Result<Value> {
    let p = GradedPresentation::new(lv, Space::Mbar)?;
    let sol = gf2::extract_w1(&p)?;
    let quotient = gf2::quotient_by_w1(&p)?;
    Ok(json!({
        "schema": schema("w1"),
        "n": lv.n(),
        "unique": sol.is_unique(),
        "solution_dim": sol.solution_dim,
        "class": sol.class,
        "quotient_dims": quotient.dims,
    }))
}

pub fn compare(a: &LengthVector, b: &LengthVector) -> Result<Value> {
    let c = gf2::compare(a, b)?;
    let verdict = match (c.generic, c.same) {
        (true, true) => "same chamber",
        (true, false) => "different chamber",
        (false, true) => "same stratum",
        (false, false) => "different stratum",
    };
    Ok(json!({
        "schema": schema("compare"),
        "n": a.n(),
        "verdict": verdict,
        "same": c.same,
        "generic": c.generic,
        "stage": c.distinguished_by,
        "stages": c.stages,
    }))
}

pub fn enumerate(n: usize, opts: &EnumerationOptions) -> Result<Value> {
    let report = enumerate_with(n, opts)?;
    let (chambers, normal) = count_normal(&report.records);
    Ok(json!({
        "schema": schema("enumerate"),
        "n": n,
        "chambers": chambers,
        "normal": normal,
        "db": opts.db.as_ref().map(|p| p.display().to_string()),
        "tasks": report.tasks,
        "resumed_tasks": report.resumed_tasks,
        "candidates": report.candidates,
        "lp_calls": report.lp_calls,
    }))
}

pub fn audit(db: &Path, with_gf2: bool) -> Result<Value> {
    let records = read_records(db)?;
    let n = records.first().map(|r| r.signature.n).ok_or_else(|| Error::Malformed("empty database".into()))?;
    for r in &records {
        r.verify()?;
    }
    let report = audit_balanced_keys(n, &records)?;
    let witness = |k: usize| rationals(&records[k].witness);
    let pairs = |ps: &[(usize, usize)]| ps.iter().map(|&(i, j)| json!([witness(i), witness(j)])).collect::<Vec<_>>();
    let mut doc = json!({
        "schema": schema("audit"),
        "n": n,
        "chambers": report.chambers,
        "distinct_keys": report.distinct_keys,
        "collisions": pairs(&report.collisions),
        "roundtrip_failures": report.roundtrip_failures.iter().map(|&k| witness(k)).collect::<Vec<_>>(),
        "pass": report.collisions.is_empty() && report.roundtrip_failures.is_empty(),
    });
    if with_gf2 {
        let q = gf2::quotient_audit(n, &records)?;
        doc["gf2"] = json!({
            "nonempty": q.nonempty,
            "w1_unique": q.w1_unique,
            "mbar_collisions": pairs(&q.mbar_collisions),
            "spatial_collisions": q.spatial_collisions.len(),
            "quotient_mismatches": q.quotient_mismatches.iter().map(|&k| witness(k)).collect::<Vec<_>>(),
        });
    }
    Ok(doc)
}

/// `24 n^6 / 2^n` in lowest terms.
fn bound_fraction(n: usize) -> String {
    let num = 24 * (n as u128).pow(6);
    let shift = (num.trailing_zeros() as usize).min(n);
    format!("{}/{}", num >> shift, 1u128 << (n - shift))
}

pub fn sample_normal(n: usize, samples: u64, seed: u64) -> Result<Value> {
    let est = estimate_nonnormal_volume(n, samples, seed)?;
    let bound = 24.0 * (n as f64).powi(6) / 2f64.powi(n as i32);
    Ok(json!({
        "schema": schema("sample-normal"),
        "n": n,
        "seed": seed,
        "samples": est.samples,
        "non_normal": est.non_normal,
        "fraction": format!("{}/{}", est.non_normal, est.samples),
        "half_width_99": est.half_width,
        "upper_99": est.upper_99(),
        "bound": bound_fraction(n),
        "below_bound": est.upper_99() < bound,
    }))
}

pub fn table(from: usize, to: usize, dir: Option<&Path>, threads: usize) -> Result<Value> {
    if from < 3 || from > to {
        return Err(Error::Precondition(format!("need 3 <= from <= to, got {from}..{to}")));
    }
    let mut rows = Vec::new();
    for n in from..=to {
        let opts = EnumerationOptions {
            threads,
            db: dir.map(|d| db_path(d, n)),
            resume: true,
            ..EnumerationOptions::default()
        };
        let report = enumerate_with(n, &opts)?;
        let (c, c_normal) = count_normal(&report.records);
        rows.push(json!({ "n": n, "chambers": c, "normal": c_normal }));
    }
    Ok(json!({ "schema": schema("table"), "rows": rows }))
}
