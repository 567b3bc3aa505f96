use selfaffine_core::extremal::{extremes_report, ExtremeSymbol};

#[test]
fn closed_forms_sit_inside_depth_twelve_enclosures() {
    for p in [4i64, 5, 6] {
        for q in [-4i64, -3, 3, 4, 5] {
            for m in (p as u32 + 2)..(2 * p as u32 - 1) {
                let rep = extremes_report(p, q, m, 12).unwrap();
                for s in ExtremeSymbol::ALL {
                    assert!(rep.contained(s), "p={p} q={q} m={m} {}", s.name());
                }
                assert!(rep.widths_within_tail(), "p={p} q={q} m={m}");
            }
        }
    }
}

#[test]
fn inadmissible_m_has_no_closed_form() {
    assert!(extremes_report(4, 3, 5, 8).is_err());
    assert!(extremes_report(4, 3, 7, 8).is_err());
}
