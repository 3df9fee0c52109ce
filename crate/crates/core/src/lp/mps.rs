//! Fixed-format MPS export and import, plus the JSON sidecar that carries
//! what MPS cannot: dimensions, mode flags and the orbit of every column.
//!
//! Fields start at columns 2, 5, 15, 25, 40 and 50. Names longer than the
//! eight characters of strict fixed format push later fields right but stay
//! separated by whitespace, so free-format readers accept every file.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::model::{
    CrossVariant, Family, LpProblem, LpVariable, Objective, Relation, Row, RowKind, Sense,
};
use crate::error::{Error, Result};
use crate::gamma::{canonicalize, ExponentVector};

const OBJ_ROW: &str = "OBJ";
const FIELD_COLS: [usize; 6] = [1, 4, 14, 24, 39, 49];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub d: usize,
    pub l: u32,
    pub karlsson_mode: bool,
    pub cross_variant: CrossVariant,
    /// Column name → orbit representative.
    pub orbits: BTreeMap<String, Vec<i32>>,
}

impl ModelMeta {
    pub fn of(p: &LpProblem) -> Self {
        Self {
            d: p.d,
            l: p.l,
            karlsson_mode: p.karlsson_mode,
            cross_variant: p.cross_variant,
            orbits: p
                .variables
                .iter()
                .map(|v| (v.name.clone(), v.orbit.rep.components().to_vec()))
                .collect(),
        }
    }
}

/// `model.mps` → `model.meta.json`.
pub fn sidecar_path(mps: &Path) -> PathBuf {
    mps.with_extension("meta.json")
}

fn line(fields: &[&str]) -> String {
    let mut s = String::new();
    for (f, &col) in fields.iter().zip(FIELD_COLS.iter()) {
        if f.is_empty() {
            continue;
        }
        let target = if s.is_empty() {
            col
        } else {
            col.max(s.len() + 1)
        };
        while s.len() < target {
            s.push(' ');
        }
        s.push_str(f);
    }
    s
}

fn relation_code(r: Relation) -> &'static str {
    match r {
        Relation::Eq => "E",
        Relation::Le => "L",
        Relation::Ge => "G",
    }
}

/// Renders the problem; the objective must be set.
pub fn to_mps(p: &LpProblem) -> Result<String> {
    p.validate()?;
    let obj = p.objective.expect("validated");
    let mut out = String::new();
    writeln!(
        out,
        "* mublp d={} l={} karlsson_mode={} cross_variant={}",
        p.d, p.l, p.karlsson_mode, p.cross_variant
    )
    .unwrap();
    let target = &p.variables[obj.column];
    writeln!(
        out,
        "* objective {:?} {}{} column {}",
        obj.sense,
        target.family.prefix(),
        target.orbit.rep,
        target.name
    )
    .unwrap();
    writeln!(out, "NAME          MUBLP_D{}_L{}", p.d, p.l).unwrap();
    if obj.sense == Sense::Max {
        writeln!(out, "OBJSENSE\n    MAX").unwrap();
    }
    writeln!(out, "ROWS").unwrap();
    writeln!(out, "{}", line(&["N", OBJ_ROW])).unwrap();
    for r in &p.rows {
        writeln!(out, "{}", line(&[relation_code(r.relation), &r.name])).unwrap();
    }

    // column-major view of the rows
    let mut by_col: Vec<Vec<(usize, i64)>> = vec![Vec::new(); p.variables.len()];
    for (i, r) in p.rows.iter().enumerate() {
        for &(c, a) in &r.coeffs {
            by_col[c].push((i, a));
        }
    }
    writeln!(out, "COLUMNS").unwrap();
    for (j, v) in p.variables.iter().enumerate() {
        let mut entries: Vec<(String, String)> = Vec::new();
        if j == obj.column || by_col[j].is_empty() {
            let c = if j == obj.column { 1 } else { 0 };
            entries.push((OBJ_ROW.to_string(), c.to_string()));
        }
        entries.extend(
            by_col[j]
                .iter()
                .map(|&(i, a)| (p.rows[i].name.clone(), a.to_string())),
        );
        for pair in entries.chunks(2) {
            let mut f = vec!["", v.name.as_str(), pair[0].0.as_str(), pair[0].1.as_str()];
            if let Some(second) = pair.get(1) {
                f.push(&second.0);
                f.push(&second.1);
            }
            writeln!(out, "{}", line(&f)).unwrap();
        }
    }

    writeln!(out, "RHS").unwrap();
    let rhs: Vec<(&str, String)> = p
        .rows
        .iter()
        .filter(|r| r.rhs != 0)
        .map(|r| (r.name.as_str(), r.rhs.to_string()))
        .collect();
    for pair in rhs.chunks(2) {
        let mut f = vec!["", "RHS", pair[0].0, pair[0].1.as_str()];
        if let Some(second) = pair.get(1) {
            f.push(second.0);
            f.push(&second.1);
        }
        writeln!(out, "{}", line(&f)).unwrap();
    }

    writeln!(out, "BOUNDS").unwrap();
    for v in &p.variables {
        match v.upper {
            Some(u) if u == v.lower => {
                writeln!(out, "{}", line(&["FX", "BND", &v.name, &u.to_string()])).unwrap()
            }
            _ => {
                if v.lower != 0 {
                    writeln!(
                        out,
                        "{}",
                        line(&["LO", "BND", &v.name, &v.lower.to_string()])
                    )
                    .unwrap();
                }
                if let Some(u) = v.upper {
                    writeln!(out, "{}", line(&["UP", "BND", &v.name, &u.to_string()])).unwrap();
                }
            }
        }
    }
    writeln!(out, "ENDATA").unwrap();
    Ok(out)
}

/// Writes `path` and its sidecar next to it.
pub fn export_mps(p: &LpProblem, path: impl AsRef<Path>) -> Result<PathBuf> {
    let path = path.as_ref();
    let text = to_mps(p)?;
    std::fs::write(path, text)?;
    let meta = sidecar_path(path);
    std::fs::write(&meta, serde_json::to_string_pretty(&ModelMeta::of(p))?)?;
    Ok(meta)
}

pub fn import_mps(path: impl AsRef<Path>) -> Result<LpProblem> {
    let path = path.as_ref();
    let meta: ModelMeta = serde_json::from_str(&std::fs::read_to_string(sidecar_path(path))?)?;
    from_mps(&std::fs::read_to_string(path)?, &meta)
}

#[derive(PartialEq)]
enum Section {
    None,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Bounds,
}

fn parse_int(tok: &str, line: usize) -> Result<i64> {
    if let Ok(v) = tok.parse::<i64>() {
        return Ok(v);
    }
    // accept integral reals such as `6.0` or `1e3` written by other tools
    match tok.parse::<f64>() {
        Ok(x) if x.fract() == 0.0 && x.abs() < 9.0e15 => Ok(x as i64),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected an integer, found `{tok}`"),
        }),
    }
}

/// Parses MPS text back into a problem; orbits come from `meta`.
pub fn from_mps(text: &str, meta: &ModelMeta) -> Result<LpProblem> {
    let mut p = LpProblem::empty(meta.d, meta.l);
    p.karlsson_mode = meta.karlsson_mode;
    p.cross_variant = meta.cross_variant;
    let mut section = Section::None;
    let mut sense = Sense::Min;
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut obj_column: Option<usize> = None;
    let mut obj_name: Option<String> = None;
    let mut seen_end = false;

    for (n, raw) in text.lines().enumerate() {
        let ln = n + 1;
        if raw.starts_with('*') || raw.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = match toks[0] {
                "NAME" => Section::None,
                "OBJSENSE" => Section::ObjSense,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => {
                    seen_end = true;
                    break;
                }
                other => {
                    return Err(Error::Parse {
                        line: ln,
                        msg: format!("unknown section `{other}`"),
                    })
                }
            };
            continue;
        }
        match section {
            Section::ObjSense => {
                sense = match toks[0] {
                    "MAX" | "MAXIMIZE" => Sense::Max,
                    "MIN" | "MINIMIZE" => Sense::Min,
                    o => {
                        return Err(Error::Parse {
                            line: ln,
                            msg: format!("bad OBJSENSE `{o}`"),
                        })
                    }
                }
            }
            Section::Rows => {
                let [code, name] = toks[..] else {
                    return Err(Error::Parse {
                        line: ln,
                        msg: "ROWS entry needs two fields".into(),
                    });
                };
                let relation = match code {
                    "N" => {
                        obj_name = Some(name.to_string());
                        continue;
                    }
                    "E" => Relation::Eq,
                    "L" => Relation::Le,
                    "G" => Relation::Ge,
                    o => {
                        return Err(Error::Parse {
                            line: ln,
                            msg: format!("bad row type `{o}`"),
                        })
                    }
                };
                let kind = RowKind::from_tag(name.split('_').next().unwrap_or(""));
                row_index.insert(name.to_string(), p.rows.len());
                p.rows.push(Row {
                    kind,
                    name: name.to_string(),
                    coeffs: Vec::new(),
                    relation,
                    rhs: 0,
                });
            }
            Section::Columns => {
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(Error::Parse {
                        line: ln,
                        msg: "COLUMNS entry needs 3 or 5 fields".into(),
                    });
                }
                let name = toks[0];
                let col = match col_index.get(name) {
                    Some(&c) => c,
                    None => {
                        let rep = meta.orbits.get(name).ok_or_else(|| Error::Parse {
                            line: ln,
                            msg: format!("column `{name}` missing from the sidecar"),
                        })?;
                        let family: Family = name.split('_').next().unwrap_or("").parse()?;
                        p.variables.push(LpVariable {
                            family,
                            orbit: canonicalize(&ExponentVector::new(rep.clone())),
                            name: name.to_string(),
                            lower: 0,
                            upper: None,
                        });
                        col_index.insert(name.to_string(), p.variables.len() - 1);
                        p.variables.len() - 1
                    }
                };
                for pair in toks[1..].chunks(2) {
                    let a = parse_int(pair[1], ln)?;
                    if Some(pair[0]) == obj_name.as_deref() {
                        if a != 0 {
                            if a != 1 || obj_column.is_some() {
                                return Err(Error::Parse {
                                    line: ln,
                                    msg: "objective must be a single unit column".into(),
                                });
                            }
                            obj_column = Some(col);
                        }
                        continue;
                    }
                    let &r = row_index.get(pair[0]).ok_or_else(|| Error::Parse {
                        line: ln,
                        msg: format!("unknown row `{}`", pair[0]),
                    })?;
                    p.rows[r].coeffs.push((col, a));
                }
            }
            Section::Rhs => {
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(Error::Parse {
                        line: ln,
                        msg: "RHS entry needs 3 or 5 fields".into(),
                    });
                }
                for pair in toks[1..].chunks(2) {
                    let &r = row_index.get(pair[0]).ok_or_else(|| Error::Parse {
                        line: ln,
                        msg: format!("unknown row `{}`", pair[0]),
                    })?;
                    p.rows[r].rhs = parse_int(pair[1], ln)?;
                }
            }
            Section::Bounds => {
                if toks.len() != 4 {
                    return Err(Error::Parse {
                        line: ln,
                        msg: "BOUNDS entry needs 4 fields".into(),
                    });
                }
                let &c = col_index.get(toks[2]).ok_or_else(|| Error::Parse {
                    line: ln,
                    msg: format!("unknown column `{}`", toks[2]),
                })?;
                let v = parse_int(toks[3], ln)?;
                let var = &mut p.variables[c];
                match toks[0] {
                    "UP" => var.upper = Some(v),
                    "LO" => var.lower = v,
                    "FX" => {
                        var.lower = v;
                        var.upper = Some(v);
                    }
                    o => {
                        return Err(Error::Parse {
                            line: ln,
                            msg: format!("unsupported bound type `{o}`"),
                        })
                    }
                }
            }
            Section::None => {
                return Err(Error::Parse {
                    line: ln,
                    msg: "data outside a section".into(),
                })
            }
        }
    }
    if !seen_end {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: "missing ENDATA".into(),
        });
    }
    for r in &mut p.rows {
        r.coeffs.sort_unstable();
    }
    let column = obj_column.ok_or(Error::Model("file has no objective column".into()))?;
    p.objective = Some(Objective { sense, column });
    Ok(p)
}
