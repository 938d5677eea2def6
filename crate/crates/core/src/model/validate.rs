use std::collections::BTreeSet;
use std::fmt;

use super::document::DescriptionDocument;
use super::node::{is_xml_name, is_xml_text, ElementNode, ElementPath, NodeValue, Segment};
use super::schema::{self, check_value, Field, Flag, Shape};
use crate::kind::DocumentKind;

/// A single schema or invariant violation, located by element path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RootMismatch { expected: String, found: String },
    UnknownElement { path: String },
    InvalidName { path: String },
    UnexpectedText { path: String },
    UnexpectedChildren { path: String },
    Repeated { path: String },
    OutOfOrder { path: String },
    MissingElement { path: String },
    InvalidValue { path: String, reason: String },
    PartitionMismatch { path: String, expected_dynamic: bool },
    DanglingBinding { path: String, interface: String },
    DuplicateConsumer { path: String, id: String },
    MissingTimestamp,
    UnexpectedTimestamp,
    EmptyServiceIdentity,
    ImportsNotAllowed,
    InvalidImport { index: usize, reason: String },
}

impl Violation {
    /// Range, unit and character violations; everything else is structural.
    pub fn is_value_error(&self) -> bool {
        matches!(self, Violation::InvalidValue { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            RootMismatch { expected, found } => write!(f, "root element {found:?}, expected {expected:?}"),
            UnknownElement { path } => write!(f, "{path}: unknown placeholder"),
            InvalidName { path } => write!(f, "{path}: invalid element name"),
            UnexpectedText { path } => write!(f, "{path}: group holds scalar text"),
            UnexpectedChildren { path } => write!(f, "{path}: scalar placeholder holds children"),
            Repeated { path } => write!(f, "{path}: placeholder may appear once"),
            OutOfOrder { path } => write!(f, "{path}: out of schema order"),
            MissingElement { path } => write!(f, "{path}: required placeholder missing"),
            InvalidValue { path, reason } => write!(f, "{path}: {reason}"),
            PartitionMismatch { path, expected_dynamic } => {
                write!(f, "{path}: isDynamic must be {expected_dynamic}")
            }
            DanglingBinding { path, interface } => {
                write!(f, "{path}: binding references unknown interface {interface:?}")
            }
            DuplicateConsumer { path, id } => write!(f, "{path}: duplicate consumer {id:?}"),
            MissingTimestamp => f.write_str("timeStamp missing"),
            UnexpectedTimestamp => f.write_str("functional descriptions carry no timeStamp"),
            EmptyServiceIdentity => f.write_str("service name and URI must be non-empty"),
            ImportsNotAllowed => f.write_str("only functional descriptions import other documents"),
            InvalidImport { index, reason } => write!(f, "import #{index}: {reason}"),
        }
    }
}

/// Every violation found in a document; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a document against its kind's schema and invariants. Pure.
pub fn validate(doc: &DescriptionDocument) -> ValidationReport {
    let mut out = Vec::new();
    let kind = doc.kind();
    let root = doc.root();

    if root.name != kind.root_element() {
        out.push(Violation::RootMismatch {
            expected: kind.root_element().to_string(),
            found: root.name.clone(),
        });
    }
    let service = doc.service();
    if service.name.is_empty() || service.uri.is_empty() {
        out.push(Violation::EmptyServiceIdentity);
    } else if let Err(reason) = check_value(schema::ValueType::Uri, &service.uri) {
        out.push(Violation::InvalidValue {
            path: "@serviceUri".into(),
            reason,
        });
    }
    for (path, text) in [
        ("@service", Some(service.name.as_str())),
        ("@documentation", root.documentation.as_deref()),
    ] {
        if let Some(t) = text {
            check_text(path, t, &mut out);
        }
    }
    match (kind.is_timestamped(), doc.timestamp()) {
        (true, None) => out.push(Violation::MissingTimestamp),
        (false, Some(_)) => out.push(Violation::UnexpectedTimestamp),
        _ => {}
    }
    if kind != DocumentKind::Functional && !doc.imports().is_empty() {
        out.push(Violation::ImportsNotAllowed);
    }
    for (index, link) in doc.imports().iter().enumerate() {
        for (what, uri) in [("namespace", &link.namespace), ("location", &link.location)] {
            if url::Url::parse(uri).is_err() {
                out.push(Violation::InvalidImport {
                    index,
                    reason: format!("{what} {uri:?} is not a URI"),
                });
            }
        }
        if link.documentation.as_deref().is_some_and(|d| !is_xml_text(d)) {
            out.push(Violation::InvalidImport {
                index,
                reason: "documentation holds characters not allowed in XML".into(),
            });
        }
    }

    match &root.value {
        NodeValue::Text(_) => out.push(Violation::UnexpectedText { path: String::new() }),
        NodeValue::Children(_) => {
            Walker { out: &mut out }.group(root, &ElementPath::root(), schema::root_fields(kind), None, None);
        }
    }

    match kind {
        DocumentKind::Functional => check_bindings(root, &mut out),
        DocumentKind::ConsumerBase => check_consumers(root, &mut out),
        _ => {}
    }
    ValidationReport { violations: out }
}

fn check_text(path: &str, text: &str, out: &mut Vec<Violation>) {
    if !is_xml_text(text) {
        out.push(Violation::InvalidValue {
            path: path.to_string(),
            reason: "characters not allowed in XML".into(),
        });
    }
}

struct Walker<'a> {
    out: &'a mut Vec<Violation>,
}

impl Walker<'_> {
    fn group(
        &mut self,
        node: &ElementNode,
        path: &ElementPath,
        fields: &'static [Field],
        open: Option<Flag>,
        forced: Option<bool>,
    ) {
        let children = node.children();
        let mut counts = vec![0usize; fields.len()];
        let mut last_index = 0;
        let mut seen_extra = false;
        for (i, child) in children.iter().enumerate() {
            let occurrences = children.iter().filter(|c| c.name == child.name).count();
            let index = (occurrences > 1).then(|| children[..i].iter().filter(|c| c.name == child.name).count());
            let mut child_path = path.clone();
            child_path.0.push(Segment {
                name: child.name.clone(),
                index,
            });
            let p = child_path.to_string();
            if !is_xml_name(&child.name) {
                self.out.push(Violation::InvalidName { path: p });
                continue;
            }
            if let Some(d) = &child.documentation {
                check_text(&p, d, self.out);
            }
            match schema::find_field(fields, &child.name) {
                Some((idx, field)) => {
                    if seen_extra || idx < last_index {
                        self.out.push(Violation::OutOfOrder { path: p.clone() });
                    }
                    last_index = idx;
                    counts[idx] += 1;
                    if !field.repeat && counts[idx] == 2 {
                        self.out.push(Violation::Repeated { path: p.clone() });
                    }
                    let child_forced = self.flag(field.flag, child, forced, &p);
                    match field.shape {
                        Shape::Leaf(ty) => match &child.value {
                            NodeValue::Text(t) => {
                                if !is_xml_text(t) {
                                    check_text(&p, t, self.out);
                                } else if let Err(reason) = check_value(ty, t) {
                                    self.out.push(Violation::InvalidValue { path: p, reason });
                                }
                            }
                            NodeValue::Children(_) => self.out.push(Violation::UnexpectedChildren { path: p }),
                        },
                        Shape::Group {
                            fields: inner,
                            open: inner_open,
                        } => match &child.value {
                            NodeValue::Children(_) => {
                                self.group(child, &child_path, inner, inner_open, child_forced);
                            }
                            NodeValue::Text(_) => self.out.push(Violation::UnexpectedText { path: p }),
                        },
                    }
                }
                None => match open {
                    Some(rule) => {
                        seen_extra = true;
                        let child_forced = self.flag(rule, child, forced, &p);
                        self.open_content(child, &child_path, child_forced);
                    }
                    None => self.out.push(Violation::UnknownElement { path: p }),
                },
            }
        }
        for (field, count) in fields.iter().zip(&counts) {
            if field.required && *count == 0 {
                self.out.push(Violation::MissingElement {
                    path: path.child(field.name).to_string(),
                });
            }
        }
    }

    fn open_content(&mut self, node: &ElementNode, path: &ElementPath, forced: Option<bool>) {
        match &node.value {
            NodeValue::Text(t) => check_text(&path.to_string(), t, self.out),
            NodeValue::Children(children) => {
                for (i, child) in children.iter().enumerate() {
                    let occurrences = children.iter().filter(|c| c.name == child.name).count();
                    let index =
                        (occurrences > 1).then(|| children[..i].iter().filter(|c| c.name == child.name).count());
                    let mut child_path = path.clone();
                    child_path.0.push(Segment {
                        name: child.name.clone(),
                        index,
                    });
                    let p = child_path.to_string();
                    if !is_xml_name(&child.name) {
                        self.out.push(Violation::InvalidName { path: p });
                        continue;
                    }
                    if let Some(d) = &child.documentation {
                        check_text(&p, d, self.out);
                    }
                    let f = self.flag(Flag::Inherit, child, forced, &p);
                    self.open_content(child, &child_path, f);
                }
            }
        }
    }

    /// Applies a flag rule, returning the flag forced on the node's subtree.
    fn flag(&mut self, rule: Flag, node: &ElementNode, forced: Option<bool>, path: &str) -> Option<bool> {
        let required = match (forced, rule) {
            (Some(f), _) => Some(f),
            (None, Flag::Static) => Some(false),
            (None, Flag::Dynamic) => Some(true),
            _ => None,
        };
        if let Some(expected) = required {
            if node.is_dynamic != expected {
                self.out.push(Violation::PartitionMismatch {
                    path: path.to_string(),
                    expected_dynamic: expected,
                });
            }
            return Some(expected);
        }
        match rule {
            Flag::Entry(_) => Some(node.is_dynamic),
            _ => None,
        }
    }
}

fn check_bindings(root: &ElementNode, out: &mut Vec<Violation>) {
    let interfaces: BTreeSet<&str> = root
        .children()
        .iter()
        .filter(|c| c.name == "interface")
        .filter_map(|c| c.child("name").and_then(ElementNode::as_text))
        .collect();
    let bindings: Vec<_> = root.children().iter().filter(|c| c.name == "binding").collect();
    let many = bindings.len() > 1;
    for (i, b) in bindings.into_iter().enumerate() {
        if let Some(iface) = b.child("interface").and_then(ElementNode::as_text) {
            if !interfaces.contains(iface) {
                let path = if many {
                    format!("binding[{i}]/interface")
                } else {
                    "binding/interface".into()
                };
                out.push(Violation::DanglingBinding {
                    path,
                    interface: iface.to_string(),
                });
            }
        }
    }
}

fn check_consumers(root: &ElementNode, out: &mut Vec<Violation>) {
    let mut seen = BTreeSet::new();
    let consumers: Vec<_> = root.children().iter().filter(|c| c.name == "consumer").collect();
    let many = consumers.len() > 1;
    for (i, c) in consumers.into_iter().enumerate() {
        if let Some(id) = c.child("id").and_then(ElementNode::as_text) {
            if !seen.insert(id) {
                let path = if many {
                    format!("consumer[{i}]/id")
                } else {
                    "consumer/id".into()
                };
                out.push(Violation::DuplicateConsumer {
                    path,
                    id: id.to_string(),
                });
            }
        }
    }
}
