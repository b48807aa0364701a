use isoembed::jointbinary::correlation;
use isoembed::strategy::{
    behavioural_correlation, behavioural_joint, behavioural_probs, mixed_correlation, mixed_joint,
    mixed_probs, table1, table1_with, BehaviouralPoint, Case, Column, MixedPoint, Pattern,
};
use proptest::prelude::*;

fn mixed() -> impl Strategy<Value = MixedPoint> {
    (0.05f64..0.95, 1u32..50, 1u32..50, 1u32..50, 1u32..50).prop_map(|(a, w, x, y, z)| {
        let n = (w + x + y + z) as f64;
        MixedPoint::new(a, x as f64 / n, y as f64 / n, z as f64 / n).unwrap()
    })
}

proptest! {
    #[test]
    fn mixed_and_behavioural_agree(m in mixed()) {
        let b = m.to_behavioural();
        let pm = mixed_probs(&m.coords());
        let pb = behavioural_probs(&b.coords());
        for (x, y) in pm.iter().zip(pb) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_correlations(m in mixed(), p in 0.05f64..0.95, q in 0.05f64..0.95, r in 0.05f64..0.95) {
        let rm = mixed_correlation(&m).unwrap();
        prop_assert!((rm - correlation(&mixed_joint(&m)).unwrap()).abs() < 1e-9);
        let b = BehaviouralPoint::new(p, q, r).unwrap();
        let rb = behavioural_correlation(&b).unwrap();
        prop_assert!((rb - correlation(&behavioural_joint(&b)).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn invalid_points() {
    assert!(MixedPoint::new(0.5, 0.6, 0.3, 0.3).is_err());
    assert!(BehaviouralPoint::new(1.2, 0.5, 0.5).is_err());
}

#[test]
fn table_shapes() {
    let corr = table1(Case::PerfectlyCorrelated).unwrap();
    assert_eq!(corr.rows.len(), 10);
    let ind = table1(Case::Independent).unwrap();
    assert_eq!(ind.rows.len(), 9);
    for row in corr.rows.iter().chain(&ind.rows) {
        assert_eq!(row.entries.len(), Column::ALL.len());
    }
    assert_eq!(
        table1_with(Case::Independent, 3, 5).unwrap(),
        table1_with(Case::Independent, 3, 5).unwrap()
    );
}

#[test]
fn constrained_columns_zero_on_identities() {
    let t = table1(Case::PerfectlyCorrelated).unwrap();
    for label in ["P(0,0)+P(1,1)", "P(0,1)+P(1,0)", "E_xy-E_x"] {
        let row = t.rows.iter().find(|r| r.label == label).unwrap();
        for e in &row.entries {
            if e.column.is_constrained() {
                assert_eq!(e.pattern(), Pattern::Zero, "{label} in {:?}", e.column);
            }
        }
    }
}
