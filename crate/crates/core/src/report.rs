//! The five reference tables, regenerated from embedded defaults.

use crate::bom::render_bom_table;
use crate::config::{
    bandwidth_presets, bandwidth_table, compare_configs, transaction_width_presets, transaction_width_table,
};
use crate::platform::controller_table;
use crate::roofline::workload_table;
use crate::table::Table;

pub const TABLE_COUNT: u8 = 5;

/// Table `n` (1-based): transaction widths, bandwidths, workload impact,
/// controller comparison, BOM breakdown.
pub fn report_table(n: u8) -> Option<Table> {
    let t = match n {
        1 => transaction_width_table(&compare_configs(&transaction_width_presets()).expect("preset configs are valid")),
        2 => bandwidth_table(&compare_configs(&bandwidth_presets()).expect("preset configs are valid")),
        3 => workload_table(),
        4 => controller_table(),
        5 => render_bom_table(),
        _ => return None,
    };
    Some(t)
}

pub fn all_tables() -> Vec<Table> {
    (1..=TABLE_COUNT).filter_map(report_table).collect()
}

/// Plain-text tables separated by blank lines.
pub fn render_text(tables: &[Table]) -> String {
    tables.iter().map(Table::to_text).collect::<Vec<_>>().join("\n")
}

/// CSV blocks, each preceded by a `# <title>` line.
pub fn render_csv(tables: &[Table]) -> String {
    tables.iter().map(|t| format!("# {}\n{}", t.title, t.to_csv())).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_tables_in_order() {
        let all = all_tables();
        assert_eq!(all.len(), 5);
        for (i, t) in all.iter().enumerate() {
            assert!(t.title.starts_with(&format!("Table {}.", i + 1)), "{}", t.title);
        }
        assert!(report_table(0).is_none());
        assert!(report_table(6).is_none());
        assert_eq!(render_text(&all), render_text(&all_tables()));
    }
}
