//! Canonical XML form of description documents.
//!
//! Canonical output: UTF-8, LF line endings, 2-space indentation, root
//! attributes `xmlns, service, serviceUri, timeStamp, documentation`, element
//! attributes `isDynamic, documentation`, children in schema order. Functional
//! descriptions list their `import` elements first, each with a
//! `documentation` child.

use std::fmt::Write as _;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::kind::DocumentKind;
use crate::model::{DescriptionDocument, ElementNode, ImportLink, NodeValue, ServiceIdentity, ValidationReport};
use crate::time::Timestamp;

/// Serialized description bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WireDocument {
    bytes: Vec<u8>,
}

impl WireDocument {
    pub fn from_bytes(bytes: impl Into<Vec<u8>>) -> Self {
        Self { bytes: bytes.into() }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    /// Kind named by the root element, without parsing the rest.
    pub fn kind_hint(&self) -> Option<DocumentKind> {
        let text = std::str::from_utf8(&self.bytes).ok()?;
        let mut reader = Reader::from_str(text);
        loop {
            match reader.read_event().ok()? {
                Event::Start(e) | Event::Empty(e) => {
                    return DocumentKind::from_root_element(std::str::from_utf8(e.name().as_ref()).ok()?)
                }
                Event::Eof => return None,
                _ => {}
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("document is not valid: {0}")]
    InvalidDocument(ValidationReport),
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("bad timeStamp {0:?}")]
    BadTimestamp(String),
    #[error("expected a functional description, found {0}")]
    NotFunctional(DocumentKind),
}

const INDENT: &str = "  ";

/// Writes the canonical XML form. Fails when the document does not validate.
pub fn serialize(doc: &DescriptionDocument) -> Result<WireDocument, CodecError> {
    let report = doc.validate();
    if !report.is_valid() {
        return Err(CodecError::InvalidDocument(report));
    }
    let mut out = String::with_capacity(1024);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let root = doc.root();
    let _ = write!(out, "<{} xmlns=\"{}\"", root.name, doc.kind().namespace());
    attr(&mut out, "service", &doc.service().name);
    attr(&mut out, "serviceUri", &doc.service().uri);
    if let Some(t) = doc.timestamp() {
        attr(&mut out, "timeStamp", &t.to_string());
    }
    if let Some(d) = &root.documentation {
        attr(&mut out, "documentation", d);
    }
    if doc.imports().is_empty() && root.children().is_empty() {
        out.push_str("/>\n");
        return Ok(WireDocument::from_bytes(out));
    }
    out.push_str(">\n");
    for link in doc.imports() {
        out.push_str(INDENT);
        out.push_str("<import");
        attr(&mut out, "namespace", &link.namespace);
        attr(&mut out, "location", &link.location);
        out.push_str(">\n");
        out.push_str(INDENT);
        out.push_str(INDENT);
        match &link.documentation {
            Some(d) => {
                out.push_str("<documentation>");
                text(&mut out, d);
                out.push_str("</documentation>\n");
            }
            None => out.push_str("<documentation/>\n"),
        }
        out.push_str(INDENT);
        out.push_str("</import>\n");
    }
    for child in root.children() {
        element(&mut out, child, 1);
    }
    let _ = writeln!(out, "</{}>", root.name);
    Ok(WireDocument::from_bytes(out))
}

fn element(out: &mut String, node: &ElementNode, depth: usize) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
    let _ = write!(out, "<{}", node.name);
    attr(out, "isDynamic", if node.is_dynamic { "true" } else { "false" });
    if let Some(d) = &node.documentation {
        attr(out, "documentation", d);
    }
    match &node.value {
        NodeValue::Text(t) => {
            out.push('>');
            text(out, t);
            let _ = writeln!(out, "</{}>", node.name);
        }
        NodeValue::Children(c) if c.is_empty() => out.push_str("/>\n"),
        NodeValue::Children(c) => {
            out.push_str(">\n");
            for child in c {
                element(out, child, depth + 1);
            }
            for _ in 0..depth {
                out.push_str(INDENT);
            }
            let _ = writeln!(out, "</{}>", node.name);
        }
    }
}

fn attr(out: &mut String, name: &str, value: &str) {
    let _ = write!(out, " {name}=\"");
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn text(out: &mut String, value: &str) {
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
}

/// Generic element tree read from the wire before schema mapping.
#[derive(Debug)]
struct RawElement {
    name: String,
    attrs: Vec<(String, String)>,
    children: Vec<RawElement>,
    text: String,
    self_closing: bool,
}

impl RawElement {
    fn take_attr(&mut self, name: &str) -> Option<String> {
        let i = self.attrs.iter().position(|(k, _)| k == name)?;
        Some(self.attrs.remove(i).1)
    }

    fn reject_leftover_attrs(&self) -> Result<(), CodecError> {
        match self.attrs.first() {
            Some((k, _)) => Err(CodecError::SchemaViolation(format!(
                "unexpected attribute {k:?} on <{}>",
                self.name
            ))),
            None => Ok(()),
        }
    }
}

fn malformed(e: impl std::fmt::Display) -> CodecError {
    CodecError::MalformedXml(e.to_string())
}

fn open_element(e: &BytesStart<'_>, self_closing: bool) -> Result<RawElement, CodecError> {
    let name = std::str::from_utf8(e.name().as_ref()).map_err(malformed)?.to_string();
    let mut attrs = Vec::new();
    for a in e.attributes() {
        let a = a.map_err(malformed)?;
        let key = std::str::from_utf8(a.key.as_ref()).map_err(malformed)?.to_string();
        let value = a.unescape_value().map_err(malformed)?.into_owned();
        attrs.push((key, value));
    }
    Ok(RawElement {
        name,
        attrs,
        children: Vec::new(),
        text: String::new(),
        self_closing,
    })
}

fn read_tree(xml: &str) -> Result<RawElement, CodecError> {
    let mut reader = Reader::from_str(xml);
    let mut stack: Vec<RawElement> = Vec::new();
    let mut root = None;
    loop {
        let event = reader.read_event().map_err(malformed)?;
        match event {
            Event::Start(e) => {
                if root.is_some() {
                    return Err(malformed("content after the root element"));
                }
                stack.push(open_element(&e, false)?);
            }
            Event::Empty(e) => {
                if root.is_some() {
                    return Err(malformed("content after the root element"));
                }
                let el = open_element(&e, true)?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(el),
                    None => root = Some(el),
                }
            }
            Event::End(_) => {
                let el = stack.pop().ok_or_else(|| malformed("unbalanced end tag"))?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(el),
                    None => root = Some(el),
                }
            }
            Event::Text(t) => {
                let s = t.unescape().map_err(malformed)?;
                match stack.last_mut() {
                    Some(el) => el.text.push_str(&s),
                    None if s.trim().is_empty() => {}
                    None => return Err(malformed("text outside the root element")),
                }
            }
            Event::CData(c) => {
                let raw = c.into_inner();
                let s = std::str::from_utf8(&raw).map_err(malformed)?;
                match stack.last_mut() {
                    Some(el) => el.text.push_str(s),
                    None => return Err(malformed("CDATA outside the root element")),
                }
            }
            Event::Eof => break,
            Event::Decl(_) | Event::Comment(_) | Event::PI(_) | Event::DocType(_) => {}
        }
    }
    if !stack.is_empty() {
        return Err(malformed("unclosed element"));
    }
    root.ok_or_else(|| malformed("no root element"))
}

fn parse_flag(el: &mut RawElement) -> Result<bool, CodecError> {
    match el.take_attr("isDynamic").as_deref() {
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        Some(other) => Err(CodecError::SchemaViolation(format!(
            "isDynamic on <{}> must be true or false, got {other:?}",
            el.name
        ))),
        None => Err(CodecError::SchemaViolation(format!("<{}> lacks isDynamic", el.name))),
    }
}

fn to_node(mut el: RawElement) -> Result<ElementNode, CodecError> {
    let is_dynamic = parse_flag(&mut el)?;
    let documentation = el.take_attr("documentation");
    el.reject_leftover_attrs()?;
    let value = if el.children.is_empty() {
        if el.self_closing {
            NodeValue::Children(Vec::new())
        } else {
            NodeValue::Text(el.text)
        }
    } else {
        if !el.text.trim().is_empty() {
            return Err(CodecError::SchemaViolation(format!(
                "<{}> mixes text and elements",
                el.name
            )));
        }
        NodeValue::Children(el.children.into_iter().map(to_node).collect::<Result<_, _>>()?)
    };
    Ok(ElementNode {
        name: el.name,
        value,
        is_dynamic,
        documentation,
    })
}

fn to_import(mut el: RawElement) -> Result<ImportLink, CodecError> {
    let schema = |m: &str| CodecError::SchemaViolation(m.to_string());
    let namespace = el
        .take_attr("namespace")
        .ok_or_else(|| schema("import lacks namespace"))?;
    let location = el
        .take_attr("location")
        .ok_or_else(|| schema("import lacks location"))?;
    el.reject_leftover_attrs()?;
    if !el.text.trim().is_empty() {
        return Err(schema("import holds text"));
    }
    let documentation = match el.children.len() {
        0 => None,
        1 => {
            let d = el.children.pop().expect("one child");
            if d.name != "documentation" || !d.children.is_empty() || !d.attrs.is_empty() {
                return Err(schema("import may only hold a documentation element"));
            }
            (!d.self_closing).then_some(d.text)
        }
        _ => return Err(schema("import may only hold a documentation element")),
    };
    Ok(ImportLink {
        namespace,
        location,
        documentation,
    })
}

/// Reads a document from canonical (or equivalent) XML and validates it.
pub fn parse(wire: &WireDocument) -> Result<DescriptionDocument, CodecError> {
    let xml = std::str::from_utf8(wire.as_bytes()).map_err(malformed)?;
    let mut root = read_tree(xml)?;
    let kind = DocumentKind::from_root_element(&root.name)
        .ok_or_else(|| CodecError::SchemaViolation(format!("unknown root element <{}>", root.name)))?;
    if let Some(ns) = root.take_attr("xmlns") {
        if ns != kind.namespace() {
            return Err(CodecError::SchemaViolation(format!(
                "namespace {ns:?} does not match <{}>",
                root.name
            )));
        }
    }
    let name = root
        .take_attr("service")
        .ok_or_else(|| CodecError::SchemaViolation("missing service attribute".into()))?;
    let uri = root
        .take_attr("serviceUri")
        .ok_or_else(|| CodecError::SchemaViolation("missing serviceUri attribute".into()))?;
    let timestamp = match root.take_attr("timeStamp") {
        Some(t) => Some(Timestamp::parse(&t).map_err(|_| CodecError::BadTimestamp(t))?),
        None => None,
    };
    let documentation = root.take_attr("documentation");
    root.reject_leftover_attrs()?;
    if !root.text.trim().is_empty() {
        return Err(CodecError::SchemaViolation("root element holds text".into()));
    }

    let mut imports = Vec::new();
    let mut children = Vec::new();
    for child in root.children {
        if child.name == "import" {
            if !children.is_empty() {
                return Err(CodecError::SchemaViolation(
                    "imports must precede other elements".into(),
                ));
            }
            imports.push(to_import(child)?);
        } else {
            children.push(to_node(child)?);
        }
    }
    let root_node = ElementNode {
        name: root.name,
        value: NodeValue::Children(children),
        is_dynamic: false,
        documentation,
    };
    let doc = DescriptionDocument::from_parts(kind, ServiceIdentity { name, uri }, timestamp, root_node, imports);
    let report = doc.validate();
    if !report.is_valid() {
        return Err(CodecError::SchemaViolation(report.to_string()));
    }
    Ok(doc)
}

/// Import links of a functional description, in document order.
pub fn extract_imports(wire: &WireDocument) -> Result<Vec<ImportLink>, CodecError> {
    let doc = parse(wire)?;
    if doc.kind() != DocumentKind::Functional {
        return Err(CodecError::NotFunctional(doc.kind()));
    }
    Ok(doc.imports().to_vec())
}
