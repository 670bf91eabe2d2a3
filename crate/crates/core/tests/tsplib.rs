use atsp_core::generate::gen_random;
use atsp_core::oracle::{dp_circuit, dp_oracle};
use atsp_core::tsplib::{circuit_to_path, coord_distance, parse_tsplib, path_to_circuit, write_full_matrix, WeightType};
use atsp_core::{Error, InstanceKind, FORBIDDEN};
use proptest::prelude::*;

fn header(kind: &str, d: usize, rest: &str) -> String {
    format!("NAME: t\nTYPE: {kind}\nDIMENSION: {d}\n{rest}")
}

#[test]
fn upper_row_is_symmetric() {
    let text = header("TSP", 4, "EDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: UPPER_ROW\nEDGE_WEIGHT_SECTION\n1 2 3\n4 5\n6\nEOF\n");
    let raw = parse_tsplib(&text).unwrap();
    assert_eq!(raw.kind, InstanceKind::Symmetric);
    assert_eq!((raw.cost(0, 3), raw.cost(3, 0)), (3, 3));
    assert_eq!((raw.cost(1, 2), raw.cost(2, 1)), (4, 4));
    assert_eq!(raw.cost(2, 3), 6);
}

#[test]
fn lower_diag_row_skips_the_diagonal_values() {
    let text = header("TSP", 3, "EDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: LOWER_DIAG_ROW\nEDGE_WEIGHT_SECTION\n0\n7 0\n8 9 0\nEOF\n");
    let raw = parse_tsplib(&text).unwrap();
    assert_eq!(raw.cost(1, 0), 7);
    assert_eq!(raw.cost(0, 2), 8);
    assert_eq!(raw.cost(2, 1), 9);
    assert_eq!(raw.cost(1, 1), FORBIDDEN);
}

#[test]
fn euclidean_coordinates() {
    let text = header("TSP", 3, "EDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 0 4\nEOF\n");
    let raw = parse_tsplib(&text).unwrap();
    assert_eq!(raw.cost(0, 1), 5);
    assert_eq!(raw.cost(1, 2), 3);
    assert_eq!(coord_distance(WeightType::Euc2d, (0.0, 0.0), (1.0, 1.0)), 1);
    assert_eq!(coord_distance(WeightType::Ceil2d, (0.0, 0.0), (1.0, 1.0)), 2);
}

#[test]
fn errors_carry_line_numbers() {
    let text = header("ATSP", 2, "EDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 x\n1 0\nEOF\n");
    match parse_tsplib(&text) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let short = header("ATSP", 3, "EDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1 2\nEOF\n");
    assert!(matches!(parse_tsplib(&short), Err(Error::Parse { .. })));
    assert!(parse_tsplib("NAME: t\nTYPE: ATSP\nEOF\n").is_err());
}

#[test]
fn split_adds_an_end_node() {
    let text = header("ATSP", 3, "EDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1 2\n3 0 4\n5 6 0\nEOF\n");
    let raw = parse_tsplib(&text).unwrap();
    let inst = circuit_to_path(&raw, 1);
    assert_eq!((inst.n, inst.s, inst.e), (4, 1, 3));
    assert_eq!(inst.cost(1, 0), Some(3));
    assert_eq!(inst.cost(0, 3), Some(1));
    assert_eq!(inst.cost(2, 3), Some(6));
    assert_eq!(inst.cost(0, 1), None);
    assert_eq!(inst.cost(3, 0), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn circuit_optimum_equals_split_path_optimum(seed in 0u64..10_000, n in 4usize..9) {
        let inst = gen_random(n, seed, (1, 40), 1.0, 1);
        let raw = path_to_circuit(&inst);
        let circuit = dp_circuit(raw.dimension, |u, v| raw.cost(u, v)).unwrap();
        for home in 0..raw.dimension {
            let p = circuit_to_path(&raw, home);
            prop_assert_eq!(dp_oracle(&p).unwrap(), circuit, "home {}", home);
        }
    }

    #[test]
    fn full_matrix_round_trips(seed in 0u64..10_000, n in 3usize..9, density in 0.3f64..1.0) {
        let inst = gen_random(n, seed, (1, 40), density, 1);
        let raw = path_to_circuit(&inst);
        let back = parse_tsplib(&write_full_matrix(&raw)).unwrap();
        prop_assert_eq!(&back.matrix, &raw.matrix);
        let again = circuit_to_path(&back, inst.s);
        // s->e becomes a loop on the merged city and is dropped.
        let mut want = inst.matrix().to_vec();
        want[inst.s * n + inst.e] = FORBIDDEN;
        prop_assert_eq!(again.matrix(), &want[..]);
        prop_assert_eq!((again.s, again.e), (inst.s, inst.e));
    }
}
