use num_bigint::BigUint;
use squaremap::ffpoly::Field;
use squaremap::real_classes::{count_order_dividing, count_unity_roots_gf};

#[test]
fn generating_function_matches_class_counts() {
    for q in [3u64, 5] {
        let field = Field::of_order(q).unwrap();
        for n in 1..=3 {
            for m in [2u128, 4] {
                assert_eq!(
                    count_unity_roots_gf(n, q, m).unwrap(),
                    count_order_dividing(n, &field, m).unwrap(),
                    "n={n} q={q} M={m}"
                );
            }
        }
    }
}

#[test]
fn hand_value() {
    // 48·(2/48 + (1/2)²)
    assert_eq!(count_unity_roots_gf(2, 3, 2).unwrap(), BigUint::from(14u32));
}

#[test]
fn other_exponents_and_fields() {
    for (n, q, m) in [(2u32, 7u64, 3u128), (3, 7, 8), (2, 9, 4), (2, 5, 6), (4, 3, 2)] {
        let field = Field::of_order(q).unwrap();
        assert_eq!(
            count_unity_roots_gf(n, q, m).unwrap(),
            count_order_dividing(n, &field, m).unwrap(),
            "n={n} q={q} M={m}"
        );
    }
}
