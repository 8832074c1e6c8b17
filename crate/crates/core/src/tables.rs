//! Reference-table presets.
//!
//! Each preset pins a group, class, and `(m, s)` grid, so the emitted CSV is
//! byte-stable and can be diffed against checked-in golden files. Layout:
//! header `s/m,<m values>`, then one row per target `s` ascending, columns
//! `m` ascending, counts as decimal strings.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::restriction::{build_carlitz, build_mullen, build_window_sum, RestrictionDigraph};
use crate::transfer;
use crate::Count;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TablePreset {
    /// Z_4, windows of 3 parts sum nonzero, nonzero parts; m = 2..=21, s in {0, 1}.
    Table1,
    /// Z_5, all windows of 1..=2 parts sum nonzero; m = 1..=10, s in {0, 1}.
    Table2,
    /// Z_6, weak, no repeat among 3 consecutive; m = 2..=10, all s.
    Table3,
    /// Z_6, nonzero parts, no repeat among 3 consecutive; m = 2..=10, all s.
    Table4,
}

impl std::str::FromStr for TablePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(TablePreset::Table1),
            "table2" => Ok(TablePreset::Table2),
            "table3" => Ok(TablePreset::Table3),
            "table4" => Ok(TablePreset::Table4),
            other => Err(Error::Parse(format!("unknown table preset {other:?}"))),
        }
    }
}

pub struct TableData {
    pub preset: &'static str,
    pub moduli: Vec<u64>,
    pub m_values: Vec<usize>,
    /// `(target label, counts per m)` with targets ascending.
    pub rows: Vec<(usize, Vec<Count>)>,
}

fn digraph_of(preset: TablePreset) -> Result<(Group, RestrictionDigraph)> {
    match preset {
        TablePreset::Table1 => {
            let g = Group::new(&[4])?;
            let d = build_window_sum(&g, 3, false)?;
            Ok((g, d))
        }
        TablePreset::Table2 => {
            let g = Group::new(&[5])?;
            let d = build_mullen(&g, 2)?;
            Ok((g, d))
        }
        TablePreset::Table3 => {
            let g = Group::new(&[6])?;
            let d = build_carlitz(&g, 2, true, false)?;
            Ok((g, d))
        }
        TablePreset::Table4 => {
            let g = Group::new(&[6])?;
            let d = build_carlitz(&g, 2, false, false)?;
            Ok((g, d))
        }
    }
}

pub fn compute(preset: TablePreset) -> Result<TableData> {
    let (name, m_lo, m_hi, s_rows): (&'static str, usize, usize, Vec<usize>) = match preset {
        TablePreset::Table1 => ("table1", 2, 21, vec![0, 1]),
        TablePreset::Table2 => ("table2", 1, 10, vec![0, 1]),
        TablePreset::Table3 => ("table3", 2, 10, (0..6).collect()),
        TablePreset::Table4 => ("table4", 2, 10, (0..6).collect()),
    };
    let (group, digraph) = digraph_of(preset)?;
    let per_m = transfer::counts_up_to(&digraph, m_hi)?;
    let rows = s_rows
        .into_iter()
        .map(|s| {
            let counts = (m_lo..=m_hi)
                .map(|m| per_m[m].coeff_at(s).clone())
                .collect();
            (s, counts)
        })
        .collect();
    Ok(TableData {
        preset: name,
        moduli: group.moduli().to_vec(),
        m_values: (m_lo..=m_hi).collect(),
        rows,
    })
}

pub fn render_csv(preset: TablePreset) -> Result<String> {
    let data = compute(preset)?;
    let mut out = String::from("s/m");
    for m in &data.m_values {
        out.push(',');
        out.push_str(&m.to_string());
    }
    out.push('\n');
    for (s, counts) in &data.rows {
        out.push_str(&s.to_string());
        for c in counts {
            out.push(',');
            out.push_str(&c.to_string());
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn render_json(preset: TablePreset) -> Result<Value> {
    let data = compute(preset)?;
    let rows: serde_json::Map<String, Value> = data
        .rows
        .iter()
        .map(|(s, counts)| {
            (
                s.to_string(),
                json!(counts.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            )
        })
        .collect();
    Ok(json!({
        "preset": data.preset,
        "moduli": data.moduli,
        "m": data.m_values,
        "rows": rows,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table2_spot_cells() {
        let data = compute(TablePreset::Table2).unwrap();
        assert_eq!(data.m_values, (1..=10).collect::<Vec<_>>());
        let (s, row0) = &data.rows[0];
        assert_eq!(*s, 0);
        assert_eq!(row0[9], Count::from(16008)); // m = 10
        let (_, row1) = &data.rows[1];
        assert_eq!(row1[0], Count::from(1)); // m = 1
    }

    #[test]
    fn csv_shape() {
        let csv = render_csv(TablePreset::Table4).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 7);
        assert!(lines[0].starts_with("s/m,2,3,"));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn json_shape() {
        let js = render_json(TablePreset::Table1).unwrap();
        assert_eq!(js["preset"], "table1");
        assert_eq!(js["rows"]["0"][19], "40234356"); // m = 21
        assert_eq!(js["rows"]["1"][19], "41196941");
    }
}
