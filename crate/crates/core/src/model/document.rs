use serde::{Deserialize, Serialize};

use super::node::{ElementNode, ElementPath, NodeValue, PathError};
use super::schema::{self, Field, Flag, Shape};
use super::validate::{validate, ValidationReport, Violation};
use crate::kind::DocumentKind;
use crate::time::Timestamp;

/// Service name and URI, common to every description.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ServiceIdentity {
    pub name: String,
    pub uri: String,
}

impl ServiceIdentity {
    pub fn new(name: impl Into<String>, uri: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            uri: uri.into(),
        }
    }
}

/// Link from a functional description to one of the other documents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImportLink {
    pub namespace: String,
    pub location: String,
    pub documentation: Option<String>,
}

impl ImportLink {
    /// Link to a document of `kind` served at `location`.
    pub fn to_kind(kind: DocumentKind, location: impl Into<String>) -> Self {
        Self {
            namespace: kind.namespace(),
            location: location.into(),
            documentation: None,
        }
    }

    pub fn target_kind(&self) -> Option<DocumentKind> {
        DocumentKind::from_namespace(&self.namespace)
    }
}

/// One description document. Immutable: updates build a replacement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptionDocument {
    kind: DocumentKind,
    service: ServiceIdentity,
    timestamp: Option<Timestamp>,
    root: ElementNode,
    imports: Vec<ImportLink>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("schema violation: {0}")]
    SchemaViolation(Violation),
    #[error("invalid value: {0}")]
    InvalidValue(Violation),
}

impl From<Violation> for BuildError {
    fn from(v: Violation) -> Self {
        if v.is_value_error() {
            BuildError::InvalidValue(v)
        } else {
            BuildError::SchemaViolation(v)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LookupError {
    #[error("no element at {0:?}")]
    NotFound(String),
    #[error(transparent)]
    BadPath(#[from] PathError),
}

impl DescriptionDocument {
    /// Assembles a document without checking it. Use [`validate`] or the
    /// builder when the parts are untrusted.
    pub fn from_parts(
        kind: DocumentKind,
        service: ServiceIdentity,
        timestamp: Option<Timestamp>,
        root: ElementNode,
        imports: Vec<ImportLink>,
    ) -> Self {
        Self {
            kind,
            service,
            timestamp,
            root,
            imports,
        }
    }

    pub fn kind(&self) -> DocumentKind {
        self.kind
    }

    pub fn service(&self) -> &ServiceIdentity {
        &self.service
    }

    pub fn timestamp(&self) -> Option<Timestamp> {
        self.timestamp
    }

    pub fn root(&self) -> &ElementNode {
        &self.root
    }

    pub fn imports(&self) -> &[ImportLink] {
        &self.imports
    }

    pub fn documentation(&self) -> Option<&str> {
        self.root.documentation.as_deref()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub fn element(&self, path: &ElementPath) -> Option<&ElementNode> {
        self.root.at(path)
    }

    /// Looks up a slash-separated, case-sensitive path; `""` is the root.
    pub fn element_at(&self, path: &str) -> Result<&ElementNode, LookupError> {
        let parsed: ElementPath = path.parse()?;
        self.root
            .at(&parsed)
            .ok_or_else(|| LookupError::NotFound(path.to_string()))
    }

    /// Number of text leaves, split into (static, dynamic).
    pub fn leaf_partition(&self) -> (usize, usize) {
        let leaves = self.root.leaves();
        let dynamic = leaves.iter().filter(|(_, d)| *d).count();
        (leaves.len() - dynamic, dynamic)
    }

    /// Partition entries of a split document with their flags: the facet
    /// groups of a hardware description, the facet children of a data-source
    /// description. Empty for other kinds.
    pub fn partition_entries(&self) -> Vec<(ElementPath, bool)> {
        let mut out = Vec::new();
        match self.kind {
            DocumentKind::Hardware => {
                for c in self.root.children() {
                    out.push((ElementPath::root().child(&c.name), c.is_dynamic));
                }
            }
            DocumentKind::DataSource => {
                for facet in self.root.children() {
                    let base = ElementPath::root().child(&facet.name);
                    for (p, node) in facet.paths() {
                        if p.0.len() == 1 {
                            let mut full = base.clone();
                            full.0.extend(p.0);
                            out.push((full, node.is_dynamic));
                        }
                    }
                }
            }
            _ => {}
        }
        out
    }

    /// Splits a data-source or hardware description into (static, dynamic)
    /// halves. Facets with no entries in a half are left out of it.
    pub fn split(&self) -> Option<(DescriptionDocument, DescriptionDocument)> {
        let keep = |want_dynamic: bool| -> Vec<ElementNode> {
            match self.kind {
                DocumentKind::Hardware => self
                    .root
                    .children()
                    .iter()
                    .filter(|c| c.is_dynamic == want_dynamic)
                    .cloned()
                    .collect(),
                _ => self
                    .root
                    .children()
                    .iter()
                    .filter_map(|facet| {
                        let entries: Vec<_> = facet
                            .children()
                            .iter()
                            .filter(|e| e.is_dynamic == want_dynamic)
                            .cloned()
                            .collect();
                        (!entries.is_empty()).then(|| ElementNode {
                            value: NodeValue::Children(entries),
                            ..facet.clone()
                        })
                    })
                    .collect(),
            }
        };
        if !self.kind.is_split() {
            return None;
        }
        let half = |want_dynamic| {
            let root = ElementNode {
                value: NodeValue::Children(keep(want_dynamic)),
                ..self.root.clone()
            };
            Self::from_parts(self.kind, self.service.clone(), self.timestamp, root, Vec::new())
        };
        Some((half(false), half(true)))
    }

    /// Whether every partition entry carries the given flag.
    pub fn is_pure_half(&self, dynamic: bool) -> bool {
        self.partition_entries().iter().all(|(_, d)| *d == dynamic)
            && self.root.leaves().iter().all(|(_, d)| *d == dynamic)
    }

    /// Replacement document with a new root and timestamp, validated.
    pub fn with_root(&self, root: ElementNode, timestamp: Option<Timestamp>) -> Result<Self, BuildError> {
        let doc = Self {
            root,
            timestamp,
            ..self.clone()
        };
        doc.checked()
    }

    /// Replacement document with the given leaves set (creating missing
    /// placeholders in schema order) and a new timestamp.
    pub fn with_values<S: AsRef<str>>(
        &self,
        updates: &[(S, String)],
        timestamp: Timestamp,
    ) -> Result<Self, BuildError> {
        let mut root = self.root.clone();
        for (path, value) in updates {
            let path = path.as_ref();
            let parsed: ElementPath = path
                .parse()
                .map_err(|_| BuildError::SchemaViolation(Violation::UnknownElement { path: path.to_string() }))?;
            upsert(self.kind, &mut root, &parsed, value)?;
        }
        self.with_root(root, Some(timestamp))
    }

    fn checked(self) -> Result<Self, BuildError> {
        match validate(&self).violations.into_iter().next() {
            Some(v) => Err(v.into()),
            None => Ok(self),
        }
    }
}

fn upsert(kind: DocumentKind, root: &mut ElementNode, path: &ElementPath, value: &str) -> Result<(), BuildError> {
    let unknown = || BuildError::SchemaViolation(Violation::UnknownElement { path: path.to_string() });
    let mut fields: &'static [Field] = schema::root_fields(kind);
    let mut node = root;
    let segs = path.segments();
    for (depth, seg) in segs.iter().enumerate() {
        let (idx, field) = schema::find_field(fields, &seg.name).ok_or_else(unknown)?;
        let parent_flag = node.is_dynamic;
        let children = node.children_mut().ok_or_else(unknown)?;
        let pos = children
            .iter()
            .enumerate()
            .filter(|(_, c)| c.name == seg.name)
            .nth(seg.index.unwrap_or(0))
            .map(|(i, _)| i);
        let pos = match pos {
            Some(p) => p,
            None if seg.index.unwrap_or(0) == 0 => {
                let flag = default_flag(field.flag, parent_flag, None);
                let fresh = match field.shape {
                    Shape::Leaf(_) => ElementNode::text(&seg.name, "", flag),
                    Shape::Group { .. } => ElementNode::group(&seg.name, Vec::new(), flag),
                };
                let at = children
                    .iter()
                    .position(|c| schema::find_field(fields, &c.name).is_none_or(|(i, _)| i > idx))
                    .unwrap_or(children.len());
                children.insert(at, fresh);
                at
            }
            None => return Err(unknown()),
        };
        node = &mut children[pos];
        let last = depth + 1 == segs.len();
        match field.shape {
            Shape::Leaf(_) if last => {
                node.value = NodeValue::Text(value.to_string());
                return Ok(());
            }
            Shape::Group { fields: inner, .. } if !last => fields = inner,
            _ => return Err(unknown()),
        }
    }
    Err(unknown())
}

fn default_flag(rule: Flag, parent: bool, forced: Option<bool>) -> bool {
    forced.unwrap_or(match rule {
        Flag::Static => false,
        Flag::Dynamic => true,
        Flag::Default(d) | Flag::Entry(d) => d,
        Flag::Inherit => parent,
    })
}

fn forced_for(rule: Flag, flag: bool, forced: Option<bool>) -> Option<bool> {
    forced.or(match rule {
        Flag::Static => Some(false),
        Flag::Dynamic => Some(true),
        Flag::Entry(_) => Some(flag),
        _ => None,
    })
}

/// Builder input: a placeholder whose `isDynamic` flag may be left to the schema.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub name: String,
    pub value: EntryValue,
    pub dynamic: Option<bool>,
    pub documentation: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EntryValue {
    Text(String),
    Children(Vec<Entry>),
}

impl Entry {
    pub fn text(name: impl Into<String>, value: impl ToString) -> Self {
        Self {
            name: name.into(),
            value: EntryValue::Text(value.to_string()),
            dynamic: None,
            documentation: None,
        }
    }

    pub fn group(name: impl Into<String>, children: impl IntoIterator<Item = Entry>) -> Self {
        Self {
            name: name.into(),
            value: EntryValue::Children(children.into_iter().collect()),
            dynamic: None,
            documentation: None,
        }
    }

    pub fn dynamic(mut self, flag: bool) -> Self {
        self.dynamic = Some(flag);
        self
    }

    pub fn doc(mut self, text: impl Into<String>) -> Self {
        self.documentation = Some(text.into());
        self
    }
}

/// Builds schema-conforming documents: places entries in schema order,
/// fills `isDynamic` defaults and creates the kind's top-level groups.
#[derive(Debug, Clone)]
pub struct DocumentBuilder {
    kind: DocumentKind,
    service: ServiceIdentity,
    timestamp: Option<Timestamp>,
    documentation: Option<String>,
    imports: Vec<ImportLink>,
    entries: Vec<Entry>,
}

impl DocumentBuilder {
    pub fn new(kind: DocumentKind, service: ServiceIdentity) -> Self {
        Self {
            kind,
            service,
            timestamp: None,
            documentation: None,
            imports: Vec::new(),
            entries: Vec::new(),
        }
    }

    /// Build instant; ignored for functional descriptions.
    pub fn timestamp(mut self, t: Timestamp) -> Self {
        self.timestamp = Some(t);
        self
    }

    pub fn documentation(mut self, text: impl Into<String>) -> Self {
        self.documentation = Some(text.into());
        self
    }

    pub fn import(mut self, link: ImportLink) -> Self {
        self.imports.push(link);
        self
    }

    pub fn entry(mut self, entry: Entry) -> Self {
        self.entries.push(entry);
        self
    }

    pub fn entries(mut self, entries: impl IntoIterator<Item = Entry>) -> Self {
        self.entries.extend(entries);
        self
    }

    pub fn build(self) -> Result<DescriptionDocument, BuildError> {
        let fields = schema::root_fields(self.kind);
        let mut children = resolve(self.entries, fields, None, false, None, &ElementPath::root())?;
        for (idx, field) in fields.iter().enumerate() {
            if field.is_group() && !field.repeat && !children.iter().any(|c| c.name == field.name) {
                let at = children
                    .iter()
                    .position(|c| schema::find_field(fields, &c.name).is_none_or(|(i, _)| i > idx))
                    .unwrap_or(children.len());
                let flag = default_flag(field.flag, false, None);
                children.insert(at, ElementNode::group(field.name, Vec::new(), flag));
            }
        }
        let root = ElementNode {
            name: self.kind.root_element().to_string(),
            value: NodeValue::Children(children),
            is_dynamic: false,
            documentation: self.documentation,
        };
        let timestamp = if self.kind.is_timestamped() {
            self.timestamp
        } else {
            None
        };
        DescriptionDocument::from_parts(self.kind, self.service, timestamp, root, self.imports).checked()
    }
}

/// Convenience wrapper over [`DocumentBuilder`].
pub fn build_document(
    kind: DocumentKind,
    service: ServiceIdentity,
    at: Timestamp,
    entries: impl IntoIterator<Item = Entry>,
) -> Result<DescriptionDocument, BuildError> {
    DocumentBuilder::new(kind, service)
        .timestamp(at)
        .entries(entries)
        .build()
}

fn resolve(
    entries: Vec<Entry>,
    fields: &'static [Field],
    open: Option<Flag>,
    parent_flag: bool,
    forced: Option<bool>,
    path: &ElementPath,
) -> Result<Vec<ElementNode>, BuildError> {
    // Entries naming the same single-occurrence group are merged.
    let mut merged: Vec<Entry> = Vec::new();
    for e in entries {
        let single_group = schema::find_field(fields, &e.name).is_some_and(|(_, f)| f.is_group() && !f.repeat);
        match merged.iter_mut().find(|m| single_group && m.name == e.name) {
            Some(prev) => match (&mut prev.value, e.value) {
                (EntryValue::Children(a), EntryValue::Children(b)) => a.extend(b),
                _ => {
                    return Err(BuildError::SchemaViolation(Violation::UnexpectedText {
                        path: path.child(&e.name).to_string(),
                    }))
                }
            },
            None => merged.push(e),
        }
    }

    let mut known: Vec<(usize, ElementNode)> = Vec::new();
    let mut extras = Vec::new();
    for e in merged {
        let here = path.child(&e.name);
        match schema::find_field(fields, &e.name) {
            Some((idx, field)) => {
                let flag = e
                    .dynamic
                    .unwrap_or_else(|| default_flag(field.flag, parent_flag, forced));
                let sub_forced = forced_for(field.flag, flag, forced);
                let value = match (field.shape, e.value) {
                    (Shape::Leaf(_), EntryValue::Text(t)) => NodeValue::Text(t),
                    (Shape::Leaf(_), EntryValue::Children(_)) => {
                        return Err(BuildError::SchemaViolation(Violation::UnexpectedChildren {
                            path: here.to_string(),
                        }))
                    }
                    (Shape::Group { fields: inner, open }, EntryValue::Children(c)) => {
                        NodeValue::Children(resolve(c, inner, open, flag, sub_forced, &here)?)
                    }
                    (Shape::Group { .. }, EntryValue::Text(_)) => {
                        return Err(BuildError::SchemaViolation(Violation::UnexpectedText {
                            path: here.to_string(),
                        }))
                    }
                };
                known.push((
                    idx,
                    ElementNode {
                        name: e.name,
                        value,
                        is_dynamic: flag,
                        documentation: e.documentation,
                    },
                ));
            }
            None => match open {
                Some(rule) => {
                    let flag = e.dynamic.unwrap_or_else(|| default_flag(rule, parent_flag, forced));
                    let sub_forced = forced_for(rule, flag, forced);
                    extras.push(open_node(e, flag, sub_forced));
                }
                None => {
                    return Err(BuildError::SchemaViolation(Violation::UnknownElement {
                        path: here.to_string(),
                    }))
                }
            },
        }
    }
    known.sort_by_key(|(i, _)| *i);
    Ok(known.into_iter().map(|(_, n)| n).chain(extras).collect())
}

fn open_node(e: Entry, flag: bool, forced: Option<bool>) -> ElementNode {
    let value = match e.value {
        EntryValue::Text(t) => NodeValue::Text(t),
        EntryValue::Children(c) => NodeValue::Children(
            c.into_iter()
                .map(|child| {
                    let f = child.dynamic.unwrap_or(forced.unwrap_or(flag));
                    open_node(child, f, forced)
                })
                .collect(),
        ),
    };
    ElementNode {
        name: e.name,
        value,
        is_dynamic: flag,
        documentation: e.documentation,
    }
}
