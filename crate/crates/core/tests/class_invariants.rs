use num_bigint::BigUint;
use squaremap::ffpoly::Field;
use squaremap::gl_classes::{class_size, enumerate_classes, gl_order, inverse_class, GLClassData};
use squaremap::square_fibers::{
    count_square_roots, has_square_root_gl, square_class, square_root_classes,
};

fn field(q: u64) -> Field {
    Field::of_order(q).unwrap()
}

#[test]
fn class_mass_is_group_order() {
    for (n, q) in [(1u32, 3u64), (2, 3), (3, 3), (1, 5), (2, 5), (2, 7)] {
        let total: BigUint = enumerate_classes(n, &field(q))
            .unwrap()
            .iter()
            .map(|c| class_size(c).unwrap())
            .sum();
        assert_eq!(total, gl_order(n, q), "GL_{n}({q})");
    }
}

#[test]
fn every_element_has_exactly_one_square() {
    for (n, q) in [(1u32, 3u64), (2, 3), (3, 3), (2, 5), (1, 5), (2, 7), (3, 5)] {
        let mass: BigUint = enumerate_classes(n, &field(q))
            .unwrap()
            .iter()
            .map(|c| class_size(c).unwrap() * count_square_roots(c).unwrap())
            .sum();
        assert_eq!(mass, gl_order(n, q), "GL_{n}({q})");
    }
}

#[test]
fn roots_square_back_and_existence_is_consistent() {
    for (n, q) in [(1u32, 3u64), (2, 3), (3, 3), (1, 5), (2, 5), (3, 5)] {
        for c in enumerate_classes(n, &field(q)).unwrap() {
            let roots = square_root_classes(&c).unwrap();
            for r in &roots {
                assert_eq!(&square_class(r).unwrap(), &c);
            }
            let count = count_square_roots(&c).unwrap();
            let exists = has_square_root_gl(&c).unwrap();
            assert_eq!(exists, !roots.is_empty(), "{c}");
            assert_eq!(exists, count > BigUint::from(0u32), "{c}");
        }
    }
}

#[test]
fn square_roots_are_distinct_classes() {
    for c in enumerate_classes(3, &field(5)).unwrap() {
        let mut roots = square_root_classes(&c).unwrap();
        let before = roots.len();
        roots.sort_by_key(|r| r.to_string());
        roots.dedup();
        assert_eq!(roots.len(), before, "{c}");
    }
}

#[test]
fn inversion_preserves_fiber_sizes() {
    for (n, q) in [(2u32, 5u64), (3, 3), (2, 9)] {
        for c in enumerate_classes(n, &field(q)).unwrap() {
            assert_eq!(
                count_square_roots(&inverse_class(&c)).unwrap(),
                count_square_roots(&c).unwrap(),
                "{c}"
            );
        }
    }
}

#[test]
fn square_class_of_every_class_is_a_class() {
    for c in enumerate_classes(3, &field(3)).unwrap() {
        let s = square_class(&c).unwrap();
        assert_eq!(s.dim(), c.dim());
        let json = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(GLClassData::parse_json(&field(3), &json).unwrap(), s);
    }
}
