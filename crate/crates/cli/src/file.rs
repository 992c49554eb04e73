//! Presentation-file loader. The format is TOML:
//!
//! ```toml
//! [algebra]
//! name = "kt"
//! generators = [["a", 1, 0], ["b", 1, 0], ["abar", 0, 1], ["bbar", 0, 1]]
//! conjugation = [["a", "abar"], ["b", "bbar"]]
//! complex_dimension = 2
//!
//! [differential.del]
//! bbar = "-i * a ^ abar"
//!
//! [differential.dbar]
//! b = "i * a ^ abar"
//!
//! [bv]
//! d = "dbar"
//! delta = "del"
//! ```
//!
//! Omitted generators map to zero; the `[bv]` section is optional and names
//! the operators (as expressions) used by default for d and Delta.

use crate::expr::{parse_element, parse_operator};
use bvhycom::cdga::{Derivation, Element, Generator, Presentation};
use bvhycom::matrix::Matrix;
use bvhycom::models::{nilmanifold_from_structure, ModelBundle};
use std::sync::Arc;
use toml::Value;

pub struct PresentationFile {
    pub bundle: ModelBundle,
    pub bv: Option<(String, String)>,
    pub warnings: Vec<String>,
}

fn bad(msg: impl Into<String>) -> String {
    msg.into()
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str, String> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

pub fn parse_presentation(text: &str) -> Result<PresentationFile, String> {
    let root: toml::Table = text.parse().map_err(|e| format!("TOML parse error: {e}"))?;
    let algebra = root
        .get("algebra")
        .and_then(Value::as_table)
        .ok_or_else(|| bad("missing [algebra] section"))?;
    let name = algebra
        .get("name")
        .map(|v| as_str(v, "algebra.name"))
        .transpose()?
        .unwrap_or("unnamed")
        .to_string();

    let gens_val = algebra
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("algebra.generators must be an array of [name, p, q]"))?;
    let mut gens = Vec::new();
    for g in gens_val {
        let arr = g
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| bad("each generator must be [name, p, q]"))?;
        let gname = as_str(&arr[0], "generator name")?.to_string();
        let p = arr[1].as_integer().ok_or_else(|| bad("generator p must be an integer"))?;
        let q = arr[2].as_integer().ok_or_else(|| bad("generator q must be an integer"))?;
        gens.push(Generator { name: gname, p, q });
    }

    let pres: Arc<Presentation> = match algebra.get("conjugation") {
        Some(v) => {
            let pairs_raw = v
                .as_array()
                .ok_or_else(|| bad("algebra.conjugation must be an array of [x, xbar]"))?;
            let idx = |n: &str| {
                gens.iter()
                    .position(|g| g.name == n)
                    .ok_or_else(|| bad(format!("conjugation names undeclared generator `{n}`")))
            };
            let mut pairs: Vec<usize> = (0..gens.len()).collect();
            for pair in pairs_raw {
                let arr = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad("each conjugation entry must be [x, xbar]"))?;
                let a = idx(as_str(&arr[0], "conjugation entry")?)?;
                let b = idx(as_str(&arr[1], "conjugation entry")?)?;
                pairs[a] = b;
                pairs[b] = a;
            }
            let m = algebra
                .get("complex_dimension")
                .and_then(Value::as_integer)
                .unwrap_or((gens.len() / 2) as i64) as usize;
            Presentation::with_conjugation(gens, pairs, m).map_err(|e| e.to_string())?
        }
        None => Presentation::new(gens).map_err(|e| e.to_string())?,
    };

    let mut warnings = Vec::new();
    if let Some(v) = algebra.get("volume") {
        let parsed = parse_element(&pres, as_str(v, "algebra.volume")?)
            .map_err(|e| format!("algebra.volume: {e}"))?;
        let full = Element::monomial(&pres, pres.volume_mask());
        if parsed.element != full {
            return Err(bad("algebra.volume must be the product of all generators"));
        }
        warnings.extend(parsed.warnings);
    }

    let mut derivations = Vec::new();
    if let Some(diffs) = root.get("differential") {
        let table = diffs
            .as_table()
            .ok_or_else(|| bad("[differential.<name>] sections expected"))?;
        for (dname, body) in table {
            let body = body
                .as_table()
                .ok_or_else(|| bad(format!("[differential.{dname}] must be a table")))?;
            let mut images = vec![Element::zero(&pres); pres.n_gens()];
            let mut bidegree: Option<(i64, i64)> = None;
            for (gname, expr) in body {
                let k = pres
                    .gens()
                    .iter()
                    .position(|g| &g.name == gname)
                    .ok_or_else(|| {
                        bad(format!("differential.{dname}: undeclared generator `{gname}`"))
                    })?;
                let parsed = parse_element(&pres, as_str(expr, "differential image")?)
                    .map_err(|e| format!("differential.{dname}.{gname}: {e}"))?;
                warnings.extend(
                    parsed.warnings.iter().map(|w| format!("differential.{dname}.{gname}: {w}")),
                );
                if let Some((ip, iq)) = parsed.element.homogeneous_bidegree() {
                    let g = &pres.gens()[k];
                    let this = (ip - g.p, iq - g.q);
                    if *bidegree.get_or_insert(this) != this {
                        return Err(bad(format!(
                            "differential.{dname}: images of mixed bidegree"
                        )));
                    }
                }
                images[k] = parsed.element;
            }
            let der = Derivation::new(&pres, bidegree.unwrap_or((0, 1)), images)
                .map_err(|e| format!("differential.{dname}: {e}"))?;
            derivations.push((dname.clone(), der));
        }
    }

    let bundle =
        nilmanifold_from_structure(&name, &pres, derivations).map_err(|e| e.to_string())?;

    let bv = match root.get("bv") {
        Some(v) => {
            let t = v.as_table().ok_or_else(|| bad("[bv] must be a table"))?;
            let d = as_str(
                t.get("d").ok_or_else(|| bad("[bv] needs `d`"))?,
                "bv.d",
            )?
            .to_string();
            let delta = as_str(
                t.get("delta").ok_or_else(|| bad("[bv] needs `delta`"))?,
                "bv.delta",
            )?
            .to_string();
            // validate now so errors surface at parse time
            parse_operator(&bundle.ops, &d).map_err(|e| format!("bv.d: {e}"))?;
            parse_operator(&bundle.ops, &delta).map_err(|e| format!("bv.delta: {e}"))?;
            Some((d, delta))
        }
        None => None,
    };

    Ok(PresentationFile { bundle, bv, warnings })
}

/// Evaluate an operator expression against a bundle's operator table.
pub fn operator_of(bundle: &ModelBundle, expr: &str) -> Result<Matrix, String> {
    parse_operator(&bundle.ops, expr).map_err(|e| format!("operator `{expr}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    /// Serialize a bundle back to the file format (used by the round-trip test).
    pub fn serialize_presentation(f: &PresentationFile) -> String {
        let pres = f.bundle.model.presentation();
        let mut out = String::new();
        out.push_str("[algebra]\n");
        out.push_str(&format!("name = {:?}\n", f.bundle.name));
        let gens: Vec<String> = pres
            .gens()
            .iter()
            .map(|g| format!("[{:?}, {}, {}]", g.name, g.p, g.q))
            .collect();
        out.push_str(&format!("generators = [{}]\n", gens.join(", ")));
        if let Some(pairs) = pres.conj_pairs() {
            let mut seen = vec![false; pairs.len()];
            let mut entries = Vec::new();
            for (k, &kb) in pairs.iter().enumerate() {
                if !seen[k] && !seen[kb] && k != kb {
                    entries.push(format!(
                        "[{:?}, {:?}]",
                        pres.gens()[k].name,
                        pres.gens()[kb].name
                    ));
                    seen[k] = true;
                    seen[kb] = true;
                }
            }
            out.push_str(&format!("conjugation = [{}]\n", entries.join(", ")));
            if let Some(m) = pres.complex_dim() {
                out.push_str(&format!("complex_dimension = {m}\n"));
            }
        }
        let mut op_names: Vec<&String> = f.bundle.ops.keys().collect();
        op_names.sort();
        for dname in op_names {
            let mat = &f.bundle.ops[dname];
            out.push_str(&format!("\n[differential.{dname}]\n"));
            for (k, g) in pres.gens().iter().enumerate() {
                let img = f
                    .bundle
                    .model
                    .index_of(1 << k)
                    .map(|j| f.bundle.model.from_coords(&mat.column(j)));
                if let Some(img) = img {
                    if !img.is_zero() {
                        out.push_str(&format!("{} = {:?}\n", g.name, img.to_string()));
                    }
                }
            }
        }
        if let Some((d, delta)) = &f.bv {
            out.push_str(&format!("\n[bv]\nd = {d:?}\ndelta = {delta:?}\n"));
        }
        out
    }
    
    /// A canonical signature of the parsed data, independent of formatting.
    pub fn fingerprint(f: &PresentationFile) -> String {
        let pres = f.bundle.model.presentation();
        let mut s = String::new();
        for g in pres.gens() {
            s.push_str(&format!("g {} {} {};", g.name, g.p, g.q));
        }
        if let Some(p) = pres.conj_pairs() {
            s.push_str(&format!("conj {p:?};"));
        }
        let ops: BTreeMap<&String, &Matrix> = f.bundle.ops.iter().collect();
        for (n, m) in ops {
            s.push_str(&format!("op {n} "));
            for j in 0..m.cols {
                let col = f.bundle.model.from_coords(&m.column(j));
                if !col.is_zero() {
                    s.push_str(&format!("{j}:{col};"));
                }
            }
        }
        s
    }

    const KT_FILE: &str = r#"
[algebra]
name = "kodaira-thurston"
generators = [["a", 1, 0], ["b", 1, 0], ["abar", 0, 1], ["bbar", 0, 1]]
conjugation = [["a", "abar"], ["b", "bbar"]]
complex_dimension = 2

[differential.del]
bbar = "-i * a ^ abar"

[differential.dbar]
b = "i * a ^ abar"

[bv]
d = "dbar"
delta = "del"
"#;

    #[test]
    fn kt_file_matches_builtin() {
        let f = parse_presentation(KT_FILE).unwrap();
        let builtin = bvhycom::models::kodaira_thurston().unwrap();
        assert_eq!(f.bundle.model.basis_masks(), builtin.model.basis_masks());
        assert_eq!(f.bundle.ops, builtin.ops);
        assert!(f.warnings.is_empty());
    }

    #[test]
    fn round_trip() {
        let f = parse_presentation(KT_FILE).unwrap();
        let text = serialize_presentation(&f);
        let g = parse_presentation(&text).unwrap();
        assert_eq!(fingerprint(&f), fingerprint(&g));
        assert_eq!(f.bv, g.bv);
    }

    #[test]
    fn diagnostics() {
        assert!(match parse_presentation("nonsense = [") { Err(e) => e, Ok(_) => panic!("expected error") }.contains("TOML"));
        let missing = KT_FILE.replace("abar\", 0, 1", "zz\", 0, 1");
        assert!(match parse_presentation(&missing) { Err(e) => e, Ok(_) => panic!("expected error") }.contains("undeclared"));
    }
}
