//! Serializable form of a finished run and the checks that reload it.

use std::collections::BTreeMap;

use freeloop_core::{Lattice, QuotientShape};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::engine::{init_e2, AdvanceChecks, Bidegree, FinalPage, TorsionSummary};
use crate::error::SsError;

pub const SCHEMA: u32 = 1;

/// Sparse integer vector: `(index, value)` pairs with nonzero values.
pub type SparseVec = Vec<(usize, String)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub p: u32,
    pub q: u32,
    pub labels: Vec<String>,
    pub cycles: Vec<SparseVec>,
    pub boundaries: Vec<SparseVec>,
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub page: u32,
    /// Rank of the page in each total degree `0..=cap`.
    pub ranks: Vec<i64>,
}

/// Everything a run produces, in a deterministic layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagloopResult {
    pub schema: u32,
    pub n: usize,
    pub cap: u32,
    pub order: String,
    pub base_relations: Vec<String>,
    pub differentials: Vec<String>,
    pub divided_power_relations: Vec<String>,
    pub pages: Vec<PageRecord>,
    pub checks: Vec<AdvanceChecks>,
    pub cells: Vec<CellRecord>,
    pub torsion: TorsionSummary,
}

fn sparse(v: &[BigInt]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| c.sign() != num_bigint::Sign::NoSign).map(|(i, c)| (i, c.to_string())).collect()
}

fn dense(v: &SparseVec, dim: usize) -> Result<Vec<BigInt>, SsError> {
    let mut out = vec![BigInt::default(); dim];
    for (i, c) in v {
        let slot = out.get_mut(*i).ok_or_else(|| SsError::OutOfRange(format!("coordinate {i} outside dimension {dim}")))?;
        *slot = c.parse().map_err(|_| SsError::OutOfRange(format!("`{c}` is not an integer")))?;
    }
    Ok(out)
}

impl FlagloopResult {
    pub fn from_final(fp: &FinalPage) -> Self {
        let e2 = &fp.e2;
        let base = &e2.base;
        let cells = fp
            .reported()
            .map(|((p, q), c)| {
                let cell = &e2.cells()[&(*p, *q)];
                let shape = c.shape();
                CellRecord {
                    p: *p,
                    q: *q,
                    labels: cell.labels(base),
                    cycles: c.cycles.basis().iter().map(|v| sparse(v)).collect(),
                    boundaries: c.boundaries.basis().iter().map(|v| sparse(v)).collect(),
                    free_rank: shape.free_rank,
                    torsion: shape.torsion.iter().map(|t| t.to_string()).collect(),
                }
            })
            .collect();
        let differentials =
            e2.differentials.iter().enumerate().map(|(k, d)| format!("d{}(x{}) = {}", 2 * k + 2, 2 * k + 2, d)).collect();
        let divided_power_relations = (1..=e2.n).map(|k| format!("(x{0})_1^m - m!*(x{0})_m", 2 * k)).collect();
        FlagloopResult {
            schema: SCHEMA,
            n: e2.n,
            cap: e2.cap,
            order: base.ring.order().describe(base.ring.ctx()),
            base_relations: base.basis.to_strings(),
            differentials,
            divided_power_relations,
            pages: fp.pages.iter().map(|s| PageRecord { page: s.page, ranks: s.ranks_by_total(e2.cap) }).collect(),
            checks: fp.checks.clone(),
            cells,
            torsion: fp.torsion(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SsError> {
        let r: FlagloopResult = serde_json::from_str(text).map_err(|e| SsError::OutOfRange(format!("bad result file: {e}")))?;
        if r.schema != SCHEMA {
            return Err(SsError::OutOfRange(format!("unsupported schema {}", r.schema)));
        }
        Ok(r)
    }

    /// Cycle and boundary lattices as stored, keyed by bidegree.
    pub fn lattices(&self) -> Result<BTreeMap<Bidegree, (Lattice, Lattice)>, SsError> {
        self.cells
            .iter()
            .map(|c| {
                let dim = c.labels.len();
                let z = c.cycles.iter().map(|v| dense(v, dim)).collect::<Result<Vec<_>, _>>()?;
                let b = c.boundaries.iter().map(|v| dense(v, dim)).collect::<Result<Vec<_>, _>>()?;
                Ok(((c.p, c.q), (Lattice::span(dim, &z), Lattice::span(dim, &b))))
            })
            .collect()
    }
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckLine { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub lines: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn push(&mut self, line: CheckLine) {
        self.lines.push(line);
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.passed)
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.lines {
            writeln!(f, "{} {}: {}", if l.passed { "ok  " } else { "FAIL" }, l.name, l.detail)?;
        }
        Ok(())
    }
}

/// Checks a stored result against a fresh enumeration of the second page
/// and a fresh run of the page recurrence.
pub fn verify_result(r: &FlagloopResult) -> Result<(VerifyReport, FinalPage), SsError> {
    let mut report = VerifyReport::default();
    let e2 = init_e2(r.n, r.cap)?;
    let mut label_bad = Vec::new();
    let expected: Vec<Bidegree> = e2.cells().keys().filter(|(p, q)| p + q <= r.cap).copied().collect();
    let stored: Vec<Bidegree> = r.cells.iter().map(|c| (c.p, c.q)).collect();
    if expected != stored {
        label_bad.push("bidegree list differs".to_string());
    }
    for c in &r.cells {
        match e2.cell((c.p, c.q)) {
            Some(cell) if cell.labels(&e2.base) == c.labels => {}
            _ => label_bad.push(format!("({},{})", c.p, c.q)),
        }
    }
    report.push(CheckLine::new("bases", label_bad.is_empty(), detail_list(&label_bad, "cell bases match the second page")));

    let stored_lattices = r.lattices()?;
    let fp = crate::engine::assemble_final_page(r.n, r.cap)?;
    let mut lattice_bad = Vec::new();
    let mut shape_bad = Vec::new();
    for c in &r.cells {
        let key = (c.p, c.q);
        let (z, b) = &stored_lattices[&key];
        match fp.last().cells.get(&key) {
            Some(s) if &s.cycles == z && &s.boundaries == b => {}
            _ => lattice_bad.push(format!("({},{})", c.p, c.q)),
        }
        let ok = z.contains_lattice(b) && {
            let QuotientShape { free_rank, torsion } = z.quotient(b);
            free_rank == c.free_rank && torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>() == c.torsion
        };
        if !ok {
            shape_bad.push(format!("({},{})", c.p, c.q));
        }
    }
    report.push(CheckLine::new(
        "lattices",
        lattice_bad.is_empty(),
        detail_list(&lattice_bad, "stored cycles and boundaries equal a fresh recomputation"),
    ));
    report.push(CheckLine::new("groups", shape_bad.is_empty(), detail_list(&shape_bad, "stored groups are Z/B")));

    let mut table = TorsionSummary::default();
    for c in &r.cells {
        for t in &c.torsion {
            let order: u64 = t.parse().map_err(|_| SsError::OutOfRange(format!("bad torsion entry `{t}`")))?;
            table.add(order, c.p + c.q);
        }
    }
    report.push(CheckLine::new(
        "torsion table",
        table == r.torsion,
        if table == r.torsion { "matches the cell groups".to_string() } else { format!("cells give {:?}", table.orders) },
    ));
    report.push(CheckLine::new("page bookkeeping", r.checks.iter().all(AdvanceChecks::ok), "stored page checks are clean"));
    Ok((report, fp))
}

pub(crate) fn detail_list(bad: &[String], ok: &str) -> String {
    if bad.is_empty() {
        ok.to_string()
    } else {
        let shown: Vec<&str> = bad.iter().take(8).map(String::as_str).collect();
        let more = if bad.len() > 8 { format!(" and {} more", bad.len() - 8) } else { String::new() };
        format!("{}{}", shown.join(", "), more)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::assemble_final_page;

    fn record(n: usize, cap: u32) -> FlagloopResult {
        FlagloopResult::from_final(&assemble_final_page(n, cap).unwrap())
    }

    #[test]
    fn json_round_trip_is_exact_and_deterministic() {
        let r = record(2, 8);
        let text = r.to_json();
        assert_eq!(FlagloopResult::from_json(&text).unwrap(), r);
        assert_eq!(record(2, 8).to_json(), text);
    }

    #[test]
    fn unknown_schema_is_rejected() {
        let mut r = record(1, 4);
        r.schema = SCHEMA + 1;
        assert!(FlagloopResult::from_json(&r.to_json()).is_err());
    }

    #[test]
    fn clean_result_verifies() {
        let (report, _) = verify_result(&record(2, 8)).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn tampered_boundaries_are_caught() {
        let mut r = record(2, 8);
        let cell = r.cells.iter_mut().find(|c| !c.boundaries.is_empty()).unwrap();
        cell.boundaries.pop();
        let (report, _) = verify_result(&r).unwrap();
        let failed: Vec<&str> = report.failures().map(|l| l.name.as_str()).collect();
        assert!(failed.contains(&"lattices"), "{report}");
    }

    #[test]
    fn tampered_torsion_is_caught() {
        let mut r = record(2, 8);
        r.torsion.add(5, 3);
        let (report, _) = verify_result(&r).unwrap();
        assert!(report.failures().any(|l| l.name == "torsion table"), "{report}");
    }

    #[test]
    fn larger_cap_does_not_change_low_degrees() {
        let small = record(2, 6);
        let large = record(2, 8);
        for c in &small.cells {
            let twin = large.cells.iter().find(|d| (d.p, d.q) == (c.p, c.q)).unwrap();
            assert_eq!(c, twin);
        }
        assert_eq!(small.pages.last().unwrap().ranks[..], large.pages.last().unwrap().ranks[..=6]);
    }
}
