//! Text rendering of the gate-resource comparison.

use advqe_core::transpile::{GateCounts, ReferenceColumn};

fn deviation_pct(computed: usize, reference: usize) -> f64 {
    if reference == 0 {
        if computed == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (computed as f64 - reference as f64) / reference as f64
    }
}

fn flag(dev: f64) -> &'static str {
    if dev.abs() > 25.0 {
        "  <-- outside +/-25%"
    } else {
        ""
    }
}

/// Renders the aligned comparison table: the published method columns, the
/// published VQE column, and our computed column with its deviation.
///
/// Deviations outside the 25 percent band are flagged; the closing line
/// reports the total-gate ratio between Trotterization and the computed
/// circuit.
pub fn emit_comparison_report(computed: &GateCounts, reference: &[ReferenceColumn]) -> String {
    let vqe_ref = reference
        .iter()
        .find(|c| c.method == "VQE")
        .expect("reference table carries a VQE column")
        .counts;

    type Row = (&'static str, fn(&GateCounts) -> usize);
    let rows: [Row; 6] = [
        ("X", |c| c.x),
        ("sqrt(X)", |c| c.sx),
        ("RZ", |c| c.rz),
        ("CZ", |c| c.cz),
        ("Total", |c| c.total),
        ("Depth", |c| c.depth),
    ];

    let mut out = String::new();
    out.push_str("Gate resources for one time step (transpiled to {X, sqrt(X), RZ, CZ}):\n");
    out.push_str(&format!(
        "{:<8} {:>9} {:>9} {:>9} {:>10} {:>10} {:>9}\n",
        "Gate", "Trotter", "VarQTE", "AVQDS", "VQE(ref)", "VQE(comp)", "dev"
    ));
    for (label, get) in rows {
        let mut line = format!("{label:<8}");
        for column in reference {
            line.push_str(&format!(" {:>9}", get(&column.counts)));
        }
        let dev = deviation_pct(get(computed), get(&vqe_ref));
        line.push_str(&format!(
            " {:>10} {:>+8.1}%{}\n",
            get(computed),
            dev,
            flag(dev)
        ));
        out.push_str(&line);
    }

    let trotter_total = reference
        .iter()
        .find(|c| c.method == "Trotter")
        .expect("reference table carries a Trotter column")
        .counts
        .total;
    let ratio = trotter_total as f64 / computed.total.max(1) as f64;
    out.push_str(&format!(
        "Total-gate ratio, Trotter / VQE(computed): {:.0}x (~10^{:.0})\n",
        ratio,
        ratio.log10().round()
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use advqe_core::transpile;

    #[test]
    fn report_carries_reference_column_verbatim() {
        let computed = transpile::vqe_reference_counts();
        let text = emit_comparison_report(&computed, &transpile::reference_table());
        // Spot-check the published values appear verbatim.
        for value in ["122636", "76021", "247", "192", "186", "55", "93", "78", "15"] {
            assert!(text.contains(value), "missing {value} in:\n{text}");
        }
        // Computed equals reference here, so nothing is flagged.
        assert!(!text.contains("outside"));
    }

    #[test]
    fn large_deviations_are_flagged() {
        let mut computed = transpile::vqe_reference_counts();
        computed.rz *= 2;
        computed.total = computed.x + computed.sx + computed.rz + computed.cz;
        let text = emit_comparison_report(&computed, &transpile::reference_table());
        assert!(text.contains("outside"), "no flag in:\n{text}");
    }

    #[test]
    fn ratio_line_reports_three_orders_of_magnitude() {
        let computed = transpile::vqe_reference_counts();
        let text = emit_comparison_report(&computed, &transpile::reference_table());
        assert!(text.contains("~10^3"), "ratio line wrong in:\n{text}");
    }
}
