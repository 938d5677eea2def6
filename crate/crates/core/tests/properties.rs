use mobidesc_core::codec::{parse, serialize};
use mobidesc_core::model::NodeValue;
use mobidesc_core::testing::random_document;
use mobidesc_core::{DescriptionDocument, DocumentKind, ElementNode, ElementPath};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn generated(seed: u64, kind_index: usize) -> DescriptionDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_document(&mut rng, DocumentKind::ALL[kind_index % DocumentKind::ALL.len()])
}

/// Removes the `n`-th non-root node in pre-order; false when there is none.
fn remove_nth(node: &mut ElementNode, n: &mut usize) -> bool {
    let Some(children) = node.children_mut() else {
        return false;
    };
    for i in 0..children.len() {
        if *n == 0 {
            children.remove(i);
            return true;
        }
        *n -= 1;
        if remove_nth(&mut children[i], n) {
            return true;
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_documents_are_valid(seed in any::<u64>(), k in 0usize..8) {
        let doc = generated(seed, k);
        let report = doc.validate();
        prop_assert!(report.is_valid(), "{}", report);
    }

    #[test]
    fn round_trip_is_identity(seed in any::<u64>(), k in 0usize..8) {
        let doc = generated(seed, k);
        let wire = serialize(&doc).unwrap();
        let back = parse(&wire).unwrap();
        prop_assert_eq!(&back, &doc);
        let again = serialize(&back).unwrap();
        prop_assert_eq!(again.as_bytes(), wire.as_bytes());
    }

    #[test]
    fn paths_resolve_and_reparse(seed in any::<u64>(), k in 0usize..8) {
        let doc = generated(seed, k);
        for (path, node) in doc.root().paths() {
            prop_assert_eq!(doc.element(&path), Some(node));
            let text = path.to_string();
            prop_assert_eq!(text.parse::<ElementPath>().unwrap(), path);
        }
    }

    #[test]
    fn removing_an_element_shrinks_the_wire_form(seed in any::<u64>(), k in 0usize..8, pick in any::<usize>()) {
        let doc = generated(seed, k);
        let total = doc.root().paths().len();
        prop_assume!(total > 0);
        let full = serialize(&doc).unwrap().len();
        let mut checked = 0;
        for offset in 0..total {
            let mut root = doc.root().clone();
            let mut n = (pick % total + offset) % total;
            prop_assert!(remove_nth(&mut root, &mut n));
            let smaller = DescriptionDocument::from_parts(
                doc.kind(), doc.service().clone(), doc.timestamp(), root, doc.imports().to_vec());
            // Dropping a required element is not a legal subset.
            if let Ok(wire) = serialize(&smaller) {
                prop_assert!(wire.len() < full);
                checked += 1;
                if checked == 3 {
                    break;
                }
            }
        }
    }

    #[test]
    fn split_halves_are_pure_and_cover_every_leaf(seed in any::<u64>(), hw in any::<bool>()) {
        let doc = generated(seed, if hw { 6 } else { 4 });
        let (s, d) = doc.split().unwrap();
        prop_assert!(s.is_pure_half(false));
        prop_assert!(d.is_pure_half(true));
        let (ls, ld) = doc.leaf_partition();
        prop_assert_eq!(s.leaf_partition(), (ls, 0));
        prop_assert_eq!(d.leaf_partition(), (0, ld));
        prop_assert!(s.validate().is_valid());
        prop_assert!(d.validate().is_valid());
    }
}

#[test]
fn imports_keep_their_order() {
    for seed in 0..200 {
        let doc = generated(seed, 0);
        let wire = serialize(&doc).unwrap();
        let xml = String::from_utf8(wire.as_bytes().to_vec()).unwrap();
        let mut at = 0;
        for link in doc.imports() {
            let needle = format!("location=\"{}\"", link.location);
            let pos = xml[at..].find(&needle).expect("import present") + at;
            at = pos + needle.len();
        }
        let parsed = mobidesc_core::codec::extract_imports(&wire).unwrap();
        assert_eq!(parsed, doc.imports());
    }
}

#[test]
fn generator_covers_leaf_kinds() {
    let mut texts = 0;
    for seed in 0..50 {
        let doc = generated(seed, 1);
        texts += doc.root().leaves().len();
        assert!(matches!(doc.root().value, NodeValue::Children(_)));
    }
    assert!(texts > 0);
}
