//! Seeded generator of schema-conforming documents for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::kind::DocumentKind;
use crate::model::schema::{self, Field, Flag, Range, Shape, ValueType};
use crate::model::{DescriptionDocument, ElementNode, ImportLink, NodeValue, ServiceIdentity};
use crate::time::Timestamp;

const ALPHABET: &[&str] = &[
    "a", "b", "z", "Q", "0", "9", " ", "-", "&", "<", ">", "\"", "'", "\t", "\n", "\r", "]]>", "é", "日本", "🚀",
];

fn random_text<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(0..12);
    (0..n).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

fn random_name<R: Rng>(rng: &mut R) -> String {
    let stems = ["extra", "note", "tag", "level", "x", "audit", "score"];
    format!("{}{}", stems.choose(rng).unwrap(), rng.gen_range(0..5))
}

fn random_number<R: Rng>(rng: &mut R, range: Range) -> String {
    let v: f64 = match range {
        Range::Any => rng.gen_range(-1e6..1e6),
        Range::NonNegative => rng.gen_range(0.0..1e6),
        Range::Positive => rng.gen_range(0.001..1e6),
        Range::Between(lo, hi) => rng.gen_range(lo..=hi),
    };
    if rng.gen_bool(0.5) {
        format!("{}", v.round())
    } else {
        format!("{v}")
    }
}

fn random_value<R: Rng>(rng: &mut R, ty: ValueType) -> String {
    match ty {
        ValueType::Text => random_text(rng),
        ValueType::Uri => format!(
            "http://host{}.local:{}/p/{}",
            rng.gen_range(0..9),
            rng.gen_range(1..9999),
            rng.gen_range(0..99)
        ),
        ValueType::Number { range, .. } => random_number(rng, range),
        ValueType::Integer { min } => (min + rng.gen_range(0..1000)).to_string(),
        ValueType::Bool => rng.gen_bool(0.5).to_string(),
        ValueType::Instant => Timestamp::from_millis(rng.gen_range(1_000_000_000_000..2_000_000_000_000)).to_string(),
        ValueType::Choice(options) => options.choose(rng).unwrap().to_string(),
    }
}

fn maybe_doc<R: Rng>(rng: &mut R) -> Option<String> {
    rng.gen_bool(0.15).then(|| random_text(rng))
}

struct Gen<'r, R> {
    rng: &'r mut R,
    kind: DocumentKind,
}

impl<R: Rng> Gen<'_, R> {
    fn flag(&mut self, rule: Flag, parent: bool, forced: Option<bool>) -> (bool, Option<bool>) {
        if let Some(f) = forced {
            return (f, Some(f));
        }
        match rule {
            Flag::Static => (false, Some(false)),
            Flag::Dynamic => (true, Some(true)),
            Flag::Entry(_) => {
                let f = self.rng.gen_bool(0.5);
                (f, Some(f))
            }
            Flag::Default(_) => (self.rng.gen_bool(0.5), None),
            Flag::Inherit => (if self.rng.gen_bool(0.8) { parent } else { !parent }, None),
        }
    }

    fn group(
        &mut self,
        fields: &'static [Field],
        open: Option<Flag>,
        parent: bool,
        forced: Option<bool>,
        depth: usize,
    ) -> Vec<ElementNode> {
        let mut out = Vec::new();
        for field in fields {
            let count = if field.repeat {
                self.rng.gen_range(usize::from(field.required)..3)
            } else if field.required || self.rng.gen_bool(0.6) {
                1
            } else {
                0
            };
            for _ in 0..count {
                out.push(self.field(field, parent, forced, depth));
            }
        }
        if let Some(rule) = open {
            for _ in 0..self.rng.gen_range(0..3) {
                let (flag, sub) = self.flag(rule, parent, forced);
                out.push(self.open_node(flag, sub, depth + 1));
            }
        }
        out
    }

    fn field(&mut self, field: &'static Field, parent: bool, forced: Option<bool>, depth: usize) -> ElementNode {
        let (flag, sub) = self.flag(field.flag, parent, forced);
        let value = match field.shape {
            Shape::Leaf(ty) => NodeValue::Text(random_value(self.rng, ty)),
            Shape::Group { fields, open } => NodeValue::Children(self.group(fields, open, flag, sub, depth + 1)),
        };
        ElementNode {
            name: field.name.to_string(),
            value,
            is_dynamic: flag,
            documentation: maybe_doc(self.rng),
        }
    }

    fn open_node(&mut self, flag: bool, forced: Option<bool>, depth: usize) -> ElementNode {
        let value = if depth < 4 && self.rng.gen_bool(0.3) {
            let n = self.rng.gen_range(0..3);
            NodeValue::Children(
                (0..n)
                    .map(|_| {
                        let (f, sub) = self.flag(Flag::Inherit, flag, forced);
                        self.open_node(f, sub, depth + 1)
                    })
                    .collect(),
            )
        } else {
            NodeValue::Text(random_text(self.rng))
        };
        ElementNode {
            name: random_name(self.rng),
            value,
            is_dynamic: flag,
            documentation: maybe_doc(self.rng),
        }
    }

    fn fix_up(&mut self, children: &mut [ElementNode]) {
        match self.kind {
            DocumentKind::Functional => {
                let names: Vec<String> = children
                    .iter()
                    .filter(|c| c.name == "interface")
                    .filter_map(|c| c.child("name").and_then(|n| n.as_text()).map(str::to_string))
                    .collect();
                for b in children.iter_mut().filter(|c| c.name == "binding") {
                    let target = names.choose(self.rng).cloned().unwrap_or_default();
                    if let Some(kids) = b.children_mut() {
                        if let Some(i) = kids.iter_mut().find(|k| k.name == "interface") {
                            i.value = NodeValue::Text(target);
                        }
                    }
                }
            }
            DocumentKind::ConsumerBase => {
                for (i, c) in children.iter_mut().enumerate() {
                    if let Some(kids) = c.children_mut() {
                        if let Some(id) = kids.iter_mut().find(|k| k.name == "id") {
                            id.value = NodeValue::Text(format!("consumer-{i}"));
                        }
                    }
                }
            }
            _ => {}
        }
    }
}

/// A random document of `kind` that passes validation.
pub fn random_document<R: Rng>(rng: &mut R, kind: DocumentKind) -> DescriptionDocument {
    let mut g = Gen { rng, kind };
    let mut children = g.group(schema::root_fields(kind), None, false, None, 0);
    g.fix_up(&mut children);
    let rng = g.rng;
    let service = ServiceIdentity::new(
        format!("Svc{}{}", rng.gen_range(0..100), random_text(rng)),
        format!("urn:service:s{}", rng.gen_range(0..1000)),
    );
    let timestamp = kind
        .is_timestamped()
        .then(|| Timestamp::from_millis(rng.gen_range(1_000_000_000_000..2_000_000_000_000)));
    let imports = if kind == DocumentKind::Functional {
        (0..rng.gen_range(0..7))
            .map(|_| {
                let k = *DocumentKind::ALL[1..].choose(rng).unwrap();
                ImportLink {
                    namespace: k.namespace(),
                    location: format!("http://p{}.local:8200/desc/{k}", rng.gen_range(0..9)),
                    documentation: maybe_doc(rng),
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let root = ElementNode {
        name: kind.root_element().to_string(),
        value: NodeValue::Children(children),
        is_dynamic: false,
        documentation: maybe_doc(rng),
    };
    let doc = DescriptionDocument::from_parts(kind, service, timestamp, root, imports);
    debug_assert!(doc.validate().is_valid(), "{}", doc.validate());
    doc
}
