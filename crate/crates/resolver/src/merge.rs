use mobidesc_core::model::schema;
use mobidesc_core::model::NodeValue;
use mobidesc_core::{DescriptionDocument, DocumentKind, ElementNode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MergeError {
    #[error("halves are of different kinds ({0} and {1})")]
    KindMismatch(DocumentKind, DocumentKind),
    #[error("halves describe different services")]
    ServiceMismatch,
    #[error("{0} descriptions are not split")]
    NotSplit(DocumentKind),
    #[error("merged document is invalid: {0}")]
    Invalid(String),
}

fn schema_rank(fields: &'static [schema::Field], name: &str) -> usize {
    schema::find_field(fields, name).map_or(usize::MAX, |(i, _)| i)
}

/// Union of two entry lists keyed by (name, occurrence); `winner` entries
/// replace colliding `loser` entries. Known names keep schema order, extras
/// follow in arrival order.
fn union(loser: &[ElementNode], winner: &[ElementNode], fields: &'static [schema::Field]) -> Vec<ElementNode> {
    let occurrence = |list: &[ElementNode], i: usize| list[..i].iter().filter(|n| n.name == list[i].name).count();
    let mut out: Vec<ElementNode> = loser
        .iter()
        .enumerate()
        .filter(|(i, n)| {
            let k = occurrence(loser, *i);
            winner.iter().filter(|w| w.name == n.name).count() <= k
        })
        .map(|(_, n)| n.clone())
        .collect();
    out.extend(winner.iter().cloned());
    out.sort_by_key(|n| schema_rank(fields, &n.name));
    out
}

/// Joins the registry-held static half and the provider-held dynamic half of
/// a split description. On a key collision the dynamic entry wins; the merged
/// document carries the dynamic half's timestamp.
pub fn merge_split(
    static_half: &DescriptionDocument,
    dynamic_half: &DescriptionDocument,
) -> Result<DescriptionDocument, MergeError> {
    let kind = dynamic_half.kind();
    if static_half.kind() != kind {
        return Err(MergeError::KindMismatch(static_half.kind(), kind));
    }
    if !kind.is_split() {
        return Err(MergeError::NotSplit(kind));
    }
    if static_half.service() != dynamic_half.service() {
        return Err(MergeError::ServiceMismatch);
    }
    let root_fields = schema::root_fields(kind);
    let children = match kind {
        DocumentKind::Hardware => union(
            static_half.root().children(),
            dynamic_half.root().children(),
            root_fields,
        ),
        _ => {
            let mut facets: Vec<ElementNode> = Vec::new();
            for facet in static_half
                .root()
                .children()
                .iter()
                .chain(dynamic_half.root().children())
            {
                match facets.iter_mut().find(|f| f.name == facet.name) {
                    Some(existing) => {
                        let inner = match schema::find_field(root_fields, &facet.name).map(|(_, f)| f.shape) {
                            Some(schema::Shape::Group { fields, .. }) => fields,
                            _ => &[],
                        };
                        let merged = union(existing.children(), facet.children(), inner);
                        existing.value = NodeValue::Children(merged);
                    }
                    None => facets.push(facet.clone()),
                }
            }
            facets.sort_by_key(|n| schema_rank(root_fields, &n.name));
            facets
        }
    };
    let root = ElementNode {
        value: NodeValue::Children(children),
        ..dynamic_half.root().clone()
    };
    dynamic_half
        .with_root(root, dynamic_half.timestamp())
        .map_err(|e| MergeError::Invalid(format!("{e:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mobidesc_core::model::build_document;
    use mobidesc_core::{Entry, ServiceIdentity, Timestamp};

    fn id() -> ServiceIdentity {
        ServiceIdentity::new("ST", "urn:st")
    }

    fn at(ms: i64) -> Timestamp {
        Timestamp::from_millis(1_433_160_000_000 + ms)
    }

    fn hardware() -> DescriptionDocument {
        build_document(
            DocumentKind::Hardware,
            id(),
            at(0),
            [
                Entry::group("sensorList", [Entry::group("sensor", [Entry::text("name", "GPS")])]),
                Entry::group("memoryDetail", [Entry::text("primaryMb", 128)]),
                Entry::group("powerDetail", [Entry::text("batteryPercent", 50)]),
                Entry::group("manufacturerDetail", [Entry::text("manufacturer", "Acme")]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn hardware_halves_rejoin() {
        let whole = hardware();
        let (s, d) = whole.split().unwrap();
        let d = d
            .with_values(&[("powerDetail/batteryPercent", "40".to_string())], at(5))
            .unwrap();
        let merged = merge_split(&s, &d).unwrap();
        let names: Vec<_> = merged.root().children().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            ["sensorList", "memoryDetail", "powerDetail", "manufacturerDetail"]
        );
        assert_eq!(merged.timestamp(), Some(at(5)));
        assert_eq!(
            merged.element_at("powerDetail/batteryPercent").unwrap().as_text(),
            Some("40")
        );
    }

    #[test]
    fn empty_dynamic_half_keeps_static_entries() {
        let (s, _) = hardware().split().unwrap();
        let (_, empty) = build_document(DocumentKind::Hardware, id(), at(9), [])
            .unwrap()
            .split()
            .unwrap();
        assert_eq!(empty.leaf_partition(), (0, 0));
        let merged = merge_split(&s, &empty).unwrap();
        assert_eq!(merged.leaf_partition(), s.leaf_partition());
        assert_eq!(
            merged.element_at("sensorList/sensor/name").unwrap().as_text(),
            Some("GPS")
        );
        assert_eq!(merged.timestamp(), Some(at(9)));
    }

    #[test]
    fn dynamic_wins_on_collision() {
        let mk = |v: &str, dynamic: bool| {
            build_document(
                DocumentKind::DataSource,
                id(),
                at(if dynamic { 2 } else { 1 }),
                [Entry::group(
                    "contextualDetail",
                    [Entry::text("weather", v).dynamic(dynamic)],
                )],
            )
            .unwrap()
        };
        let merged = merge_split(&mk("old", false), &mk("new", true)).unwrap();
        let facet = merged.element_at("contextualDetail").unwrap();
        assert_eq!(facet.children().len(), 1);
        assert_eq!(facet.child("weather").unwrap().as_text(), Some("new"));
    }

    #[test]
    fn data_source_facets_interleave() {
        let whole = build_document(
            DocumentKind::DataSource,
            id(),
            at(0),
            [
                Entry::group(
                    "qosDetail",
                    [Entry::text("availability", 0.9), Entry::text("security", "high")],
                ),
                Entry::group(
                    "locationDetail",
                    [
                        Entry::group("gps", [Entry::text("latitude", 1), Entry::text("longitude", 2)]),
                        Entry::text("location", "phone"),
                    ],
                ),
            ],
        )
        .unwrap();
        let (s, d) = whole.split().unwrap();
        // Empty facets are dropped by the split; every leaf comes back.
        assert_eq!(merge_split(&s, &d).unwrap().root().leaves(), whole.root().leaves());
    }

    #[test]
    fn mismatches() {
        let (s, d) = hardware().split().unwrap();
        let other = build_document(DocumentKind::Hardware, ServiceIdentity::new("X", "urn:x"), at(0), []).unwrap();
        assert_eq!(merge_split(&s, &other), Err(MergeError::ServiceMismatch));
        let ds = build_document(DocumentKind::DataSource, id(), at(0), []).unwrap();
        assert!(matches!(merge_split(&ds, &d), Err(MergeError::KindMismatch(..))));
        let ctx = build_document(DocumentKind::Contextual, id(), at(0), []).unwrap();
        assert_eq!(
            merge_split(&ctx, &ctx),
            Err(MergeError::NotSplit(DocumentKind::Contextual))
        );
    }
}
