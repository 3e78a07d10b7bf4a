//! A small reader and brute-force solver for the subset of the LP text
//! format the main crate emits, so exported models can be solved in-tree
//! without an external solver.
//!
//! The grammar covered: a `Minimize` section (objective ignored — the
//! models are pure feasibility questions), one-line rows under
//! `Subject To`, `lo <= var <= hi` lines under `Bounds`, whitespace-
//! separated names under `General` and `Binary`, comments starting with
//! `\`, and `End`. All coefficients, bounds and right-hand sides must be
//! integers, which is true of every emitted model.

use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpOp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(i64, String)>,
    pub op: LpOp,
    pub rhs: i64,
}

#[derive(Clone, Debug, Default)]
pub struct LpModel {
    pub rows: Vec<LpRow>,
    /// Declared variable ranges, in declaration order.
    pub bounds: Vec<(String, i64, i64)>,
    pub generals: Vec<String>,
    pub binaries: Vec<String>,
}

impl LpModel {
    /// All variables with their enumeration ranges: bounded ones first in
    /// declaration order, then binaries without explicit bounds.
    pub fn variables(&self) -> Vec<(String, i64, i64)> {
        let mut vars = self.bounds.clone();
        for b in &self.binaries {
            if !vars.iter().any(|(v, _, _)| v == b) {
                vars.push((b.clone(), 0, 1));
            }
        }
        vars
    }
}

fn parse_row(line: &str) -> Result<LpRow, String> {
    let (name, rest) = line
        .split_once(':')
        .ok_or_else(|| format!("row without a name: {line:?}"))?;
    let (op, op_str) = if rest.contains("<=") {
        (LpOp::Le, "<=")
    } else if rest.contains(">=") {
        (LpOp::Ge, ">=")
    } else if rest.contains('=') {
        (LpOp::Eq, "=")
    } else {
        return Err(format!("row without an operator: {line:?}"));
    };
    let (lhs, rhs_str) = rest.split_once(op_str).expect("operator was found");
    let rhs: i64 = rhs_str
        .trim()
        .parse()
        .map_err(|_| format!("non-integer right-hand side: {line:?}"))?;
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut coef: Option<i64> = None;
    for token in lhs.split_whitespace() {
        match token {
            "+" => sign = 1,
            "-" => sign = -1,
            t => {
                if let Ok(c) = t.parse::<i64>() {
                    if coef.is_some() {
                        return Err(format!("two coefficients in a row: {line:?}"));
                    }
                    coef = Some(c);
                } else {
                    terms.push((sign * coef.take().unwrap_or(1), t.to_string()));
                    sign = 1;
                }
            }
        }
    }
    if coef.is_some() {
        return Err(format!("dangling coefficient: {line:?}"));
    }
    Ok(LpRow {
        name: name.trim().to_string(),
        terms,
        op,
        rhs,
    })
}

pub fn parse_lp(text: &str) -> Result<LpModel, String> {
    #[derive(PartialEq)]
    enum Section {
        Preamble,
        Objective,
        Rows,
        Bounds,
        General,
        Binary,
        Done,
    }
    let mut section = Section::Preamble;
    let mut model = LpModel::default();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        match line {
            "Minimize" | "Maximize" => {
                section = Section::Objective;
                continue;
            }
            "Subject To" => {
                section = Section::Rows;
                continue;
            }
            "Bounds" => {
                section = Section::Bounds;
                continue;
            }
            "General" => {
                section = Section::General;
                continue;
            }
            "Binary" => {
                section = Section::Binary;
                continue;
            }
            "End" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Preamble => return Err(format!("content before any section: {line:?}")),
            Section::Objective => {} // pure feasibility; objective ignored
            Section::Rows => model.rows.push(parse_row(line)?),
            Section::Bounds => {
                let parts: Vec<&str> = line.split("<=").map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(format!("unsupported bound form: {line:?}"));
                }
                let lo: i64 = parts[0]
                    .parse()
                    .map_err(|_| format!("non-integer lower bound: {line:?}"))?;
                let hi: i64 = parts[2]
                    .parse()
                    .map_err(|_| format!("non-integer upper bound: {line:?}"))?;
                model.bounds.push((parts[1].to_string(), lo, hi));
            }
            Section::General => model
                .generals
                .extend(line.split_whitespace().map(str::to_string)),
            Section::Binary => model
                .binaries
                .extend(line.split_whitespace().map(str::to_string)),
            Section::Done => return Err(format!("content after End: {line:?}")),
        }
    }
    if section == Section::Done {
        Ok(model)
    } else {
        Err("missing End".to_string())
    }
}

fn row_holds(row: &LpRow, values: &BTreeMap<String, i64>) -> Result<bool, String> {
    let mut sum = 0i64;
    for (c, v) in &row.terms {
        let x = values
            .get(v)
            .ok_or_else(|| format!("row {} uses unbounded variable {v}", row.name))?;
        sum += c * x;
    }
    Ok(match row.op {
        LpOp::Le => sum <= row.rhs,
        LpOp::Ge => sum >= row.rhs,
        LpOp::Eq => sum == row.rhs,
    })
}

/// Enumerate every integer point in the declared variable boxes and return
/// the first satisfying all rows, or `None` when the model is infeasible.
/// Refuses (with `Err`) when the box holds more than `limit` points.
pub fn brute_force_solve(
    model: &LpModel,
    limit: u64,
) -> Result<Option<BTreeMap<String, i64>>, String> {
    let vars = model.variables();
    let mut space = 1u64;
    for &(ref v, lo, hi) in &vars {
        if lo > hi {
            return Err(format!("empty range for {v}"));
        }
        let width = (hi - lo + 1) as u64;
        space = space
            .checked_mul(width)
            .filter(|&s| s <= limit)
            .ok_or_else(|| format!("search space exceeds {limit} points"))?;
    }
    let mut values: BTreeMap<String, i64> = vars.iter().map(|(v, lo, _)| (v.clone(), *lo)).collect();
    loop {
        let feasible = model
            .rows
            .iter()
            .try_fold(true, |acc, row| Ok::<_, String>(acc && row_holds(row, &values)?))?;
        if feasible {
            return Ok(Some(values));
        }
        // odometer over the variable boxes
        let mut pos = 0;
        loop {
            if pos == vars.len() {
                return Ok(None);
            }
            let (ref name, lo, hi) = vars[pos];
            let slot = values.get_mut(name).expect("all vars present");
            if *slot < hi {
                *slot += 1;
                break;
            }
            *slot = lo;
            pos += 1;
        }
    }
}
