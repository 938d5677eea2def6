//! Typed reading of a functional description: what, how and where.

use super::document::DescriptionDocument;
use super::node::ElementNode;
use crate::kind::DocumentKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationSig {
    pub name: String,
    pub input: Option<String>,
    pub output: Option<String>,
    pub pattern: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfaceDecl {
    pub name: String,
    pub operations: Vec<OperationSig>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingDecl {
    pub name: String,
    pub interface: String,
    pub protocol: String,
    pub parameters: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalDescription {
    pub types: Vec<String>,
    pub interfaces: Vec<InterfaceDecl>,
    pub bindings: Vec<BindingDecl>,
    pub endpoint: Option<String>,
}

fn text(node: &ElementNode, name: &str) -> Option<String> {
    node.child(name).and_then(ElementNode::as_text).map(str::to_string)
}

impl FunctionalDescription {
    /// Reads the typed view; `None` when the document is not functional.
    pub fn from_document(doc: &DescriptionDocument) -> Option<Self> {
        if doc.kind() != DocumentKind::Functional {
            return None;
        }
        let root = doc.root();
        let named = |n: &'static str| root.children().iter().filter(move |c| c.name == n);
        let types = root
            .child("types")
            .map(|t| {
                t.children()
                    .iter()
                    .filter_map(|c| c.as_text().map(str::to_string))
                    .collect()
            })
            .unwrap_or_default();
        let interfaces = named("interface")
            .map(|i| InterfaceDecl {
                name: text(i, "name").unwrap_or_default(),
                operations: i
                    .children()
                    .iter()
                    .filter(|c| c.name == "operation")
                    .map(|op| OperationSig {
                        name: text(op, "name").unwrap_or_default(),
                        input: text(op, "input"),
                        output: text(op, "output"),
                        pattern: text(op, "pattern"),
                    })
                    .collect(),
            })
            .collect();
        let bindings = named("binding")
            .map(|b| BindingDecl {
                name: text(b, "name").unwrap_or_default(),
                interface: text(b, "interface").unwrap_or_default(),
                protocol: text(b, "protocol").unwrap_or_default(),
                parameters: b
                    .children()
                    .iter()
                    .filter(|c| c.name == "parameter")
                    .map(|p| {
                        (
                            text(p, "name").unwrap_or_default(),
                            text(p, "value").unwrap_or_default(),
                        )
                    })
                    .collect(),
            })
            .collect();
        let endpoint = root.child("service").and_then(|s| text(s, "endpoint"));
        Some(Self {
            types,
            interfaces,
            bindings,
            endpoint,
        })
    }

    pub fn operation_names(&self) -> impl Iterator<Item = &str> {
        self.interfaces
            .iter()
            .flat_map(|i| i.operations.iter().map(|o| o.name.as_str()))
    }
}
