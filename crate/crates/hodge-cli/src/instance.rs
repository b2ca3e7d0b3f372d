//! Instance files.
//!
//! JSON, with every rational written as an exact "p/q" string and
//! every Gaussian rational as an [re, im] pair of such strings.  On
//! input a plain "n" is accepted; canonical files always spell the
//! denominator.  Floats are never accepted, so nothing gets
//! rounded on the way in.  Parsing is eager: filtration laws, form
//! sizes and cone structure are all checked here, while the deeper
//! mathematical questions (is this an MHS, does the orbit exist) are
//! left to the commands so their verdicts can be reported as results
//! rather than parse failures.

use anyhow::{anyhow, bail, Context, Result};
use hodge_core::filtration::{DecFiltration, IncFiltration};
use hodge_core::mat::Mat;
use hodge_core::mhs::MHSInstance;
use hodge_core::monodromy::NilpotentConeInstance;
use hodge_core::polarized::FormFamily;
use hodge_core::scalar::{gauss, parse_rat, Gauss, Rat};
use hodge_core::subspace::Subspace;
use num::traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    pub dim: usize,
    /// weight, as a decimal string key, to basis rows of W_weight
    pub weight_filtration: BTreeMap<String, Vec<Vec<String>>>,
    /// Hodge level to basis rows of F^level, entries as [re, im]
    pub hodge_filtration: BTreeMap<String, Vec<Vec<[String; 2]>>>,
    /// weight to the polarizing form on gr_weight, sized accordingly
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub forms: BTreeMap<String, Vec<Vec<String>>>,
    /// nilpotent generators, full ambient size
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cone: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<RawPath>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPath {
    pub exponents: Vec<String>,
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct PathData {
    pub exponents: Vec<Rat>,
    pub coefficients: Vec<Rat>,
}

/// A parsed and structurally validated instance.
#[derive(Debug)]
pub struct Instance {
    pub x: MHSInstance,
    pub forms: Option<FormFamily>,
    pub cone: Option<NilpotentConeInstance>,
    pub paths: Vec<PathData>,
    pub meta: BTreeMap<String, serde_json::Value>,
}

fn parse_rat_at(s: &str, what: &str) -> Result<Rat> {
    parse_rat(s).map_err(|e| anyhow!("{}: {}", what, e))
}

fn parse_rat_rows(rows: &[Vec<String>], dim: usize, what: &str) -> Result<Vec<Vec<Rat>>> {
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            bail!("{}: row {} has length {}, expected {}", what, i, row.len(), dim);
        }
        let mut r = Vec::new();
        for s in row {
            r.push(parse_rat_at(s, what)?);
        }
        out.push(r);
    }
    Ok(out)
}

fn parse_gauss_rows(rows: &[Vec<[String; 2]>], dim: usize, what: &str) -> Result<Vec<Vec<Gauss>>> {
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            bail!("{}: row {} has length {}, expected {}", what, i, row.len(), dim);
        }
        let mut r = Vec::new();
        for [re, im] in row {
            r.push(gauss(parse_rat_at(re, what)?, parse_rat_at(im, what)?));
        }
        out.push(r);
    }
    Ok(out)
}

fn parse_key(k: &str, what: &str) -> Result<i64> {
    k.parse::<i64>()
        .map_err(|_| anyhow!("{} key {:?} is not an integer", what, k))
}

fn build(raw: RawInstance) -> Result<Instance> {
    let dim = raw.dim;
    if dim == 0 {
        bail!("dim must be positive");
    }

    let mut wsteps = BTreeMap::new();
    for (k, rows) in &raw.weight_filtration {
        let w = parse_key(k, "weight_filtration")?;
        let vecs = parse_rat_rows(rows, dim, &format!("weight_filtration[{}]", k))?;
        wsteps.insert(w, Subspace::from_vecs(dim, vecs));
    }
    if wsteps.is_empty() {
        bail!("weight_filtration is empty");
    }
    let w = IncFiltration::new(dim, wsteps);
    w.validate().map_err(|e| anyhow!("weight_filtration: {}", e))?;
    if !w.at(w.max_recorded().unwrap()).is_full() {
        bail!(
            "weight_filtration: W_{} does not exhaust the space",
            w.max_recorded().unwrap()
        );
    }

    let mut fsteps = BTreeMap::new();
    for (k, rows) in &raw.hodge_filtration {
        let p = parse_key(k, "hodge_filtration")?;
        let vecs = parse_gauss_rows(rows, dim, &format!("hodge_filtration[{}]", k))?;
        fsteps.insert(p, Subspace::from_vecs(dim, vecs));
    }
    if fsteps.is_empty() {
        bail!("hodge_filtration is empty");
    }
    let f = DecFiltration::new(dim, fsteps);
    f.validate().map_err(|e| anyhow!("hodge_filtration: {}", e))?;

    let x = MHSInstance::new(dim, w, f);

    let forms = if raw.forms.is_empty() {
        None
    } else {
        let mut fm = BTreeMap::new();
        for (k, rows) in &raw.forms {
            let wt = parse_key(k, "forms")?;
            let d = x.w.graded_dim(wt);
            let vecs = parse_rat_rows(rows, d, &format!("forms[{}]", k))?;
            if vecs.len() != d {
                bail!("forms[{}]: {} rows, expected the graded dimension {}", k, vecs.len(), d);
            }
            fm.insert(wt, Mat::from_rows(vecs));
        }
        let family = FormFamily::new(fm);
        family.validate(&x.w).map_err(|e| anyhow!("forms: {}", e))?;
        Some(family)
    };

    let cone = if raw.cone.is_empty() {
        None
    } else {
        let mut gens = Vec::new();
        for (j, rows) in raw.cone.iter().enumerate() {
            let vecs = parse_rat_rows(rows, dim, &format!("cone[{}]", j))?;
            if vecs.len() != dim {
                bail!("cone[{}]: {} rows, expected {}", j, vecs.len(), dim);
            }
            gens.push(Mat::from_rows(vecs));
        }
        let tag = raw
            .meta
            .get("lattice")
            .and_then(|v| v.as_str())
            .unwrap_or("std");
        let c = NilpotentConeInstance::new(dim, gens, tag);
        c.validate(Some(&x.w)).map_err(|e| anyhow!("cone: {}", e))?;
        Some(c)
    };

    let mut paths = Vec::new();
    for (j, p) in raw.paths.iter().enumerate() {
        let what = format!("paths[{}]", j);
        let n = match &cone {
            Some(c) => c.generators.len(),
            None => bail!("{}: paths require a cone", what),
        };
        if p.exponents.len() != n || p.coefficients.len() != n {
            bail!("{}: expected {} exponents and coefficients", what, n);
        }
        let mut exps = Vec::new();
        for s in &p.exponents {
            let e = parse_rat_at(s, &what)?;
            if e.is_negative() {
                bail!("{}: exponents must be nonnegative", what);
            }
            exps.push(e);
        }
        let mut coefs = Vec::new();
        for s in &p.coefficients {
            let c = parse_rat_at(s, &what)?;
            if !c.is_positive() {
                bail!("{}: coefficients must be positive", what);
            }
            coefs.push(c);
        }
        paths.push(PathData {
            exponents: exps,
            coefficients: coefs,
        });
    }

    Ok(Instance {
        x,
        forms,
        cone,
        paths,
        meta: raw.meta,
    })
}

pub fn parse_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let raw: RawInstance =
        serde_json::from_str(&text).map_err(|e| anyhow!("schema: {}", e))?;
    build(raw)
}

/// Canonical serialization: sorted keys, two space indent, trailing
/// newline.  Files written this way parse and reserialize to the same
/// bytes.
#[cfg(test)]
pub fn canonical_string(raw: &RawInstance) -> String {
    serde_json::to_string_pretty(raw).expect("instance serialization cannot fail") + "\n"
}

#[cfg(test)]
use hodge_core::scalar::fmt_rat;
#[cfg(test)]
use num::Zero;

#[cfg(test)]
fn fmt_rows(m: &Mat<Rat>) -> Vec<Vec<String>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| fmt_rat(&m[(i, j)])).collect())
        .collect()
}

#[cfg(test)]
fn fmt_sub(s: &Subspace<Rat>) -> Vec<Vec<String>> {
    s.basis_vecs()
        .iter()
        .map(|v| v.iter().map(fmt_rat).collect())
        .collect()
}

#[cfg(test)]
fn fmt_sub_gauss(s: &Subspace<Gauss>) -> Vec<Vec<[String; 2]>> {
    s.basis_vecs()
        .iter()
        .map(|v| {
            v.iter()
                .map(|z| [fmt_rat(&z.re), fmt_rat(&z.im)])
                .collect()
        })
        .collect()
}

/// The standard elliptic curve degeneration, period i, polarized by
/// the symplectic plane form, with the unipotent direction and the
/// classical disc path.  The shipped data file is this value in
/// canonical form; a test pins the bytes.
#[cfg(test)]
pub fn elliptic_fixture() -> RawInstance {
    let w = IncFiltration::<Rat>::pure(2, 1);
    let tau = gauss(Rat::zero(), Rat::from_integer(1.into()));
    let x = hodge_core::mhs::elliptic(tau);
    let mut weight_filtration = BTreeMap::new();
    for k in w.recorded() {
        weight_filtration.insert(k.to_string(), fmt_sub(&w.at(k)));
    }
    let mut hodge_filtration = BTreeMap::new();
    for p in x.f.recorded() {
        hodge_filtration.insert(p.to_string(), fmt_sub_gauss(&x.f.at(p)));
    }
    let mut sym = Mat::zero(2, 2);
    sym[(0, 1)] = -Rat::from_integer(1.into());
    sym[(1, 0)] = Rat::from_integer(1.into());
    let mut forms = BTreeMap::new();
    forms.insert("1".to_string(), fmt_rows(&sym));
    let mut nmat = Mat::zero(2, 2);
    nmat[(0, 1)] = Rat::from_integer(1.into());
    let cone = vec![fmt_rows(&nmat)];
    let one = fmt_rat(&Rat::from_integer(1.into()));
    let paths = vec![RawPath {
        exponents: vec![one.clone()],
        coefficients: vec![one],
    }];
    let mut meta = BTreeMap::new();
    meta.insert("lattice".to_string(), serde_json::Value::String("std".to_string()));
    meta.insert(
        "name".to_string(),
        serde_json::Value::String("elliptic".to_string()),
    );
    RawInstance {
        dim: 2,
        weight_filtration,
        hodge_filtration,
        forms,
        cone,
        paths,
        meta,
    }
}
