use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Scalar text or an ordered list of children, never both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeValue {
    Text(String),
    Children(Vec<ElementNode>),
}

/// A named placeholder in a description tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementNode {
    pub name: String,
    pub value: NodeValue,
    pub is_dynamic: bool,
    pub documentation: Option<String>,
}

impl ElementNode {
    pub fn text(name: impl Into<String>, value: impl Into<String>, is_dynamic: bool) -> Self {
        Self {
            name: name.into(),
            value: NodeValue::Text(value.into()),
            is_dynamic,
            documentation: None,
        }
    }

    pub fn group(name: impl Into<String>, children: Vec<ElementNode>, is_dynamic: bool) -> Self {
        Self {
            name: name.into(),
            value: NodeValue::Children(children),
            is_dynamic,
            documentation: None,
        }
    }

    pub fn with_documentation(mut self, doc: impl Into<String>) -> Self {
        self.documentation = Some(doc.into());
        self
    }

    pub fn children(&self) -> &[ElementNode] {
        match &self.value {
            NodeValue::Children(c) => c,
            NodeValue::Text(_) => &[],
        }
    }

    pub fn children_mut(&mut self) -> Option<&mut Vec<ElementNode>> {
        match &mut self.value {
            NodeValue::Children(c) => Some(c),
            NodeValue::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match &self.value {
            NodeValue::Text(t) => Some(t),
            NodeValue::Children(_) => None,
        }
    }

    pub fn child(&self, name: &str) -> Option<&ElementNode> {
        self.children().iter().find(|c| c.name == name)
    }

    /// Text nodes with a value, or groups with at least one child.
    pub fn has_content(&self) -> bool {
        match &self.value {
            NodeValue::Text(t) => !t.is_empty(),
            NodeValue::Children(c) => !c.is_empty(),
        }
    }

    /// Number of text leaves below (or at) this node.
    pub fn leaf_count(&self) -> usize {
        match &self.value {
            NodeValue::Text(_) => 1,
            NodeValue::Children(c) => c.iter().map(ElementNode::leaf_count).sum(),
        }
    }

    /// Text leaves paired with their `isDynamic` flags, depth first.
    pub fn leaves(&self) -> Vec<(&ElementNode, bool)> {
        let mut out = Vec::new();
        collect_leaves(self, &mut out);
        out
    }

    /// Resolves `path` below this node.
    pub fn at(&self, path: &ElementPath) -> Option<&ElementNode> {
        let mut node = self;
        for seg in &path.0 {
            node = seg.select(node.children())?;
        }
        Some(node)
    }

    /// Every descendant together with the path that addresses it, pre-order.
    pub fn paths(&self) -> Vec<(ElementPath, &ElementNode)> {
        let mut out = Vec::new();
        enumerate(self, &mut Vec::new(), &mut out);
        out
    }
}

fn collect_leaves<'a>(node: &'a ElementNode, out: &mut Vec<(&'a ElementNode, bool)>) {
    match &node.value {
        NodeValue::Text(_) => out.push((node, node.is_dynamic)),
        NodeValue::Children(c) => c.iter().for_each(|n| collect_leaves(n, out)),
    }
}

fn enumerate<'a>(node: &'a ElementNode, prefix: &mut Vec<Segment>, out: &mut Vec<(ElementPath, &'a ElementNode)>) {
    let children = node.children();
    for (i, child) in children.iter().enumerate() {
        let same = children.iter().filter(|c| c.name == child.name).count();
        let index = (same > 1).then(|| children[..i].iter().filter(|c| c.name == child.name).count());
        prefix.push(Segment {
            name: child.name.clone(),
            index,
        });
        out.push((ElementPath(prefix.clone()), child));
        enumerate(child, prefix, out);
        prefix.pop();
    }
}

/// One step of an [`ElementPath`]: a placeholder name and, for repeated
/// siblings, the zero-based occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub name: String,
    pub index: Option<usize>,
}

impl Segment {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            index: None,
        }
    }

    fn select<'a>(&self, siblings: &'a [ElementNode]) -> Option<&'a ElementNode> {
        siblings
            .iter()
            .filter(|c| c.name == self.name)
            .nth(self.index.unwrap_or(0))
    }
}

/// Slash-separated, case-sensitive placeholder path. The empty path is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementPath(pub Vec<Segment>);

impl ElementPath {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.0
    }

    pub fn child(&self, name: &str) -> Self {
        let mut s = self.0.clone();
        s.push(Segment::new(name));
        Self(s)
    }

    pub fn first(&self) -> Option<&str> {
        self.0.first().map(|s| s.name.as_str())
    }
}

impl fmt::Display for ElementPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            f.write_str(&seg.name)?;
            if let Some(idx) = seg.index {
                write!(f, "[{idx}]")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed element path {0:?}")]
pub struct PathError(pub String);

impl FromStr for ElementPath {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(Self::root());
        }
        let err = || PathError(s.to_string());
        let mut segs = Vec::new();
        for raw in s.split('/') {
            let (name, index) = match raw.strip_suffix(']') {
                Some(head) => {
                    let (name, idx) = head.split_once('[').ok_or_else(err)?;
                    (name, Some(idx.parse::<usize>().map_err(|_| err())?))
                }
                None => (raw, None),
            };
            if !is_xml_name(name) {
                return Err(err());
            }
            segs.push(Segment {
                name: name.to_string(),
                index,
            });
        }
        Ok(Self(segs))
    }
}

impl Serialize for ElementPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ElementPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Conservative XML name check (no namespace prefixes).
pub fn is_xml_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// Characters allowed in XML 1.0 character data.
pub fn is_xml_text(s: &str) -> bool {
    s.chars().all(|c| {
        matches!(c, '\t' | '\n' | '\r')
            || ('\u{20}'..='\u{D7FF}').contains(&c)
            || ('\u{E000}'..='\u{FFFD}').contains(&c)
            || c >= '\u{10000}'
    })
}
