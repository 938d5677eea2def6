//! Placeholder vocabulary for every description kind.
//!
//! Each kind is a tree of [`Field`]s. Units are fixed per attribute: latency
//! and delays in milliseconds, throughput in requests per second, bandwidth in
//! kbit/s, memory in MB, availability/reliability/packet loss as fractions.

use crate::kind::DocumentKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Range {
    Any,
    NonNegative,
    Positive,
    Between(f64, f64),
}

impl Range {
    pub fn contains(self, v: f64) -> bool {
        match self {
            Range::Any => v.is_finite(),
            Range::NonNegative => v.is_finite() && v >= 0.0,
            Range::Positive => v.is_finite() && v > 0.0,
            Range::Between(lo, hi) => (lo..=hi).contains(&v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueType {
    Text,
    Uri,
    Number { unit: &'static str, range: Range },
    Integer { min: i64 },
    Bool,
    Instant,
    Choice(&'static [&'static str]),
}

/// `isDynamic` rule for a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    /// Node and its whole subtree must be static.
    Static,
    /// Node and its whole subtree must be dynamic.
    Dynamic,
    /// Free, with the given default.
    Default(bool),
    /// Free, defaulting to the parent's flag.
    Inherit,
    /// A partition entry of a split document: defaults as given, and the
    /// subtree must agree with the entry's flag.
    Entry(bool),
}

#[derive(Debug, Clone, Copy)]
pub enum Shape {
    Leaf(ValueType),
    /// Known fields in schema order; `open` admits extra children (placed
    /// after the known ones) whose flags follow the given rule.
    Group {
        fields: &'static [Field],
        open: Option<Flag>,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct Field {
    pub name: &'static str,
    pub shape: Shape,
    pub repeat: bool,
    pub required: bool,
    pub flag: Flag,
}

const fn leaf(name: &'static str, ty: ValueType) -> Field {
    Field {
        name,
        shape: Shape::Leaf(ty),
        repeat: false,
        required: false,
        flag: Flag::Inherit,
    }
}

const fn group(name: &'static str, fields: &'static [Field]) -> Field {
    Field {
        name,
        shape: Shape::Group { fields, open: None },
        repeat: false,
        required: false,
        flag: Flag::Inherit,
    }
}

const fn open(name: &'static str, fields: &'static [Field], extra: Flag) -> Field {
    Field {
        name,
        shape: Shape::Group {
            fields,
            open: Some(extra),
        },
        repeat: false,
        required: false,
        flag: Flag::Inherit,
    }
}

impl Field {
    const fn many(mut self) -> Self {
        self.repeat = true;
        self
    }

    const fn required(mut self) -> Self {
        self.required = true;
        self
    }

    const fn flag(mut self, flag: Flag) -> Self {
        self.flag = flag;
        self
    }

    pub fn is_group(&self) -> bool {
        matches!(self.shape, Shape::Group { .. })
    }
}

const TEXT: ValueType = ValueType::Text;
const URI: ValueType = ValueType::Uri;
const BOOL: ValueType = ValueType::Bool;
const INSTANT: ValueType = ValueType::Instant;
const FRACTION: ValueType = ValueType::Number {
    unit: "fraction",
    range: Range::Between(0.0, 1.0),
};
const PERCENT: ValueType = ValueType::Number {
    unit: "percent",
    range: Range::Between(0.0, 100.0),
};
const MILLIS: ValueType = ValueType::Number {
    unit: "ms",
    range: Range::NonNegative,
};
const REQ_PER_SEC: ValueType = ValueType::Number {
    unit: "req/s",
    range: Range::NonNegative,
};
const MEGABYTES: ValueType = ValueType::Number {
    unit: "MB",
    range: Range::NonNegative,
};
const LATITUDE: ValueType = ValueType::Number {
    unit: "deg",
    range: Range::Between(-90.0, 90.0),
};
const LONGITUDE: ValueType = ValueType::Number {
    unit: "deg",
    range: Range::Between(-180.0, 180.0),
};
const LEVEL: ValueType = ValueType::Choice(&["low", "medium", "high"]);

pub const NETWORK_TYPES: &[&str] = &["WiFi", "GSM", "WiMAX", "None"];
pub const PRESENCE: &[&str] = &["available", "busy", "away"];
pub const EXCHANGE_PATTERNS: &[&str] = &["in-out", "in-only", "robust-in-only", "out-only", "out-in"];

const GPS: &[Field] = &[
    leaf("latitude", LATITUDE).required(),
    leaf("longitude", LONGITUDE).required(),
];

// Functional

const OPERATION: &[Field] = &[
    leaf("name", TEXT).required(),
    leaf("input", TEXT),
    leaf("output", TEXT),
    leaf("pattern", ValueType::Choice(EXCHANGE_PATTERNS)),
];
const INTERFACE: &[Field] = &[leaf("name", TEXT).required(), group("operation", OPERATION).many()];
const PARAMETER: &[Field] = &[leaf("name", TEXT).required(), leaf("value", TEXT)];
const BINDING: &[Field] = &[
    leaf("name", TEXT).required(),
    leaf("interface", TEXT).required(),
    leaf("protocol", TEXT).required(),
    group("parameter", PARAMETER).many(),
];
const SERVICE: &[Field] = &[leaf("name", TEXT), leaf("endpoint", URI).required()];
const FUNCTIONAL: &[Field] = &[
    group("types", &[leaf("type", TEXT).many()]).flag(Flag::Static),
    group("interface", INTERFACE).many().required().flag(Flag::Static),
    group("binding", BINDING).many().required().flag(Flag::Static),
    group("service", SERVICE).required().flag(Flag::Static),
];

// Non-functional

const SERVICE_QOS: &[Field] = &[
    leaf("availability", FRACTION),
    leaf(
        "capacity",
        ValueType::Number {
            unit: "requests",
            range: Range::NonNegative,
        },
    ),
    leaf("latency", MILLIS),
    leaf("throughput", REQ_PER_SEC),
    leaf(
        "performance",
        ValueType::Number {
            unit: "score",
            range: Range::NonNegative,
        },
    ),
    leaf("reliability", FRACTION),
];
const NETWORK_QOS: &[Field] = &[
    leaf("packetLoss", FRACTION),
    leaf("networkDelay", MILLIS),
    leaf("delayVariation", MILLIS),
    leaf(
        "bandwidthCapability",
        ValueType::Number {
            unit: "kbps",
            range: Range::NonNegative,
        },
    ),
];
const SYSTEM_QOS: &[Field] = &[
    leaf("accessibility", FRACTION),
    leaf("security", LEVEL),
    leaf("usability", LEVEL),
    leaf("scalability", LEVEL),
    leaf("interoperability", LEVEL),
    leaf("robustness", LEVEL),
    leaf("extensibility", LEVEL),
];
const NON_FUNCTIONAL: &[Field] = &[
    group("serviceQoS", SERVICE_QOS).flag(Flag::Default(true)),
    group("networkQoS", NETWORK_QOS).flag(Flag::Default(true)),
    group("systemQoS", SYSTEM_QOS).flag(Flag::Default(false)),
    open("otherQoS", &[], Flag::Inherit).flag(Flag::Default(false)),
];

// Business

const CONDITION: &[Field] = &[leaf("jurisdiction", TEXT).required(), leaf("text", TEXT)];
const CERTIFICATE: &[Field] = &[
    leaf("name", TEXT).required(),
    leaf("issuer", TEXT),
    leaf("expiry", INSTANT),
];
const PRECONDITION: &[Field] = &[
    leaf("key", TEXT).required(),
    leaf(
        "minimum",
        ValueType::Number {
            unit: "",
            range: Range::Any,
        },
    ),
];
const PRICE: &[Field] = &[
    leaf(
        "amount",
        ValueType::Number {
            unit: "currency",
            range: Range::NonNegative,
        },
    )
    .required(),
    leaf("currency", TEXT),
    leaf(
        "chargingModel",
        ValueType::Choice(&["perCall", "perMinute", "subscription", "free"]),
    ),
];
const LEGALITY: Field = group("legality", &[group("condition", CONDITION).many()]);
const CERTIFICATION: Field = group("certification", &[group("certificate", CERTIFICATE).many()]);
const USAGE_REQUIREMENT: Field = group("usageRequirement", &[group("precondition", PRECONDITION).many()]);
const COST: Field = group("cost", &[group("price", PRICE).many()]);
const BUSINESS: &[Field] = &[
    LEGALITY.flag(Flag::Default(false)),
    CERTIFICATION.flag(Flag::Default(false)),
    USAGE_REQUIREMENT.flag(Flag::Default(false)),
    COST.flag(Flag::Default(false)),
];

// Contextual

const LOCATION: &[Field] = &[leaf("address", TEXT), group("gps", GPS), leaf("timeZone", TEXT)];
const DEVICE_CONTEXT: &[Field] = &[
    leaf("sensor", TEXT).many().flag(Flag::Default(false)),
    leaf("batteryStatus", PERCENT),
    leaf("charging", BOOL),
    leaf("dataPlan", TEXT).flag(Flag::Default(false)),
    leaf("networkType", ValueType::Choice(NETWORK_TYPES)),
];
const USER_CONTEXT: &[Field] = &[
    leaf("availability", TEXT),
    leaf("routine", TEXT),
    leaf("background", TEXT).flag(Flag::Default(false)),
    leaf("situation", TEXT),
    group("location", LOCATION),
    leaf("presence", ValueType::Choice(PRESENCE)),
];
const SERVICE_CONTEXT: &[Field] = &[
    leaf("domain", TEXT),
    leaf("connectionPreference", TEXT),
    leaf("specialisation", TEXT).many(),
];
const BUSINESS_CONTEXT: &[Field] = &[
    leaf("preferredScenario", TEXT),
    leaf("preferredPartner", TEXT).many(),
    leaf("composition", TEXT).many(),
];
const CONTEXTUAL: &[Field] = &[
    group("deviceContext", DEVICE_CONTEXT).flag(Flag::Default(true)),
    group("userContext", USER_CONTEXT).flag(Flag::Default(true)),
    group("serviceContext", SERVICE_CONTEXT).flag(Flag::Default(false)),
    open("businessContext", BUSINESS_CONTEXT, Flag::Inherit).flag(Flag::Default(false)),
];

// Data source

const LOCATION_DETAIL: &[Field] = &[
    group("gps", GPS).flag(Flag::Entry(true)),
    leaf("location", TEXT).flag(Flag::Entry(false)),
];
const CAPACITY_DETAIL: &[Field] = &[
    leaf("physicalCapacity", TEXT).flag(Flag::Entry(false)),
    leaf("battery", PERCENT).flag(Flag::Entry(true)),
    leaf(
        "computation",
        ValueType::Number {
            unit: "MIPS",
            range: Range::NonNegative,
        },
    )
    .flag(Flag::Entry(false)),
];
const QOS_DETAIL: &[Field] = &[
    leaf("availability", FRACTION).flag(Flag::Entry(true)),
    leaf("throughput", REQ_PER_SEC).flag(Flag::Entry(true)),
    leaf("reliability", FRACTION).flag(Flag::Entry(true)),
    leaf("networkDelay", MILLIS).flag(Flag::Entry(true)),
    leaf("security", LEVEL).flag(Flag::Entry(false)),
];
const DATA_SOURCE: &[Field] = &[
    group("locationDetail", LOCATION_DETAIL).flag(Flag::Default(false)),
    group("capacityDetail", CAPACITY_DETAIL).flag(Flag::Default(false)),
    group("qosDetail", QOS_DETAIL).flag(Flag::Default(false)),
    open("contextualDetail", &[], Flag::Entry(true)).flag(Flag::Default(false)),
];

// Collaborator

const FUNCTIONAL_DETAIL: &[Field] = &[leaf("reference", URI).many(), leaf("inline", TEXT).many()];
const BUSINESS_DETAIL: &[Field] = &[LEGALITY, CERTIFICATION, USAGE_REQUIREMENT, COST];
const REPUTATION_DETAIL: &[Field] = &[
    leaf("score", FRACTION),
    leaf("feedbackCount", ValueType::Integer { min: 0 }),
];
const COLLABORATOR: &[Field] = &[
    group("functionalDetail", FUNCTIONAL_DETAIL).flag(Flag::Default(false)),
    group("businessDetail", BUSINESS_DETAIL).flag(Flag::Default(false)),
    group("reputationDetail", REPUTATION_DETAIL).flag(Flag::Default(true)),
    leaf(
        "updateFrequency",
        ValueType::Number {
            unit: "s",
            range: Range::Positive,
        },
    )
    .flag(Flag::Default(false)),
];

// Hardware

const SENSOR: &[Field] = &[leaf("name", TEXT).required(), leaf("functionality", TEXT)];
const MANUFACTURER_DETAIL: &[Field] = &[
    leaf("manufacturer", TEXT),
    leaf("kernelVersion", TEXT),
    leaf("processor", TEXT),
    leaf("adapter", TEXT).many(),
];
const MEMORY_DETAIL: &[Field] = &[
    leaf("primaryMb", MEGABYTES),
    leaf("secondaryMb", MEGABYTES),
    leaf("externalLocation", TEXT).many(),
];
const POWER_DETAIL: &[Field] = &[
    leaf("batteryPercent", PERCENT),
    leaf("charging", BOOL),
    leaf(
        "estimatedRuntimeMinutes",
        ValueType::Number {
            unit: "min",
            range: Range::NonNegative,
        },
    ),
];
const HARDWARE: &[Field] = &[
    group("sensorList", &[group("sensor", SENSOR).many()]).flag(Flag::Static),
    group("memoryDetail", MEMORY_DETAIL).flag(Flag::Dynamic),
    group("powerDetail", POWER_DETAIL).flag(Flag::Dynamic),
    group("manufacturerDetail", MANUFACTURER_DETAIL).flag(Flag::Static),
];

// Consumer base

const CONSUMER: &[Field] = &[
    leaf("id", TEXT).required(),
    leaf("invocationCount", ValueType::Integer { min: 1 }).required(),
    leaf("lastInvocation", INSTANT).required(),
];
const CONSUMER_BASE: &[Field] = &[group("consumer", CONSUMER).many().flag(Flag::Default(true))];

/// Top-level fields of a kind, in canonical order.
pub fn root_fields(kind: DocumentKind) -> &'static [Field] {
    match kind {
        DocumentKind::Functional => FUNCTIONAL,
        DocumentKind::NonFunctional => NON_FUNCTIONAL,
        DocumentKind::Contextual => CONTEXTUAL,
        DocumentKind::Business => BUSINESS,
        DocumentKind::DataSource => DATA_SOURCE,
        DocumentKind::Collaborator => COLLABORATOR,
        DocumentKind::Hardware => HARDWARE,
        DocumentKind::ConsumerBase => CONSUMER_BASE,
    }
}

pub fn find_field(fields: &'static [Field], name: &str) -> Option<(usize, &'static Field)> {
    fields.iter().enumerate().find(|(_, f)| f.name == name)
}

/// Fields of the group addressed by walking `names` from the root.
pub fn group_fields(kind: DocumentKind, names: &[&str]) -> Option<(&'static [Field], Option<Flag>)> {
    let mut fields = root_fields(kind);
    let mut open = None;
    for name in names {
        let (_, f) = find_field(fields, name)?;
        match f.shape {
            Shape::Group { fields: inner, open: o } => {
                fields = inner;
                open = o;
            }
            Shape::Leaf(_) => return None,
        }
    }
    Some((fields, open))
}

/// Checks a leaf value against its type, returning a reason on failure.
pub fn check_value(ty: ValueType, value: &str) -> Result<(), String> {
    match ty {
        ValueType::Text => Ok(()),
        ValueType::Uri => url::Url::parse(value)
            .map(|_| ())
            .map_err(|e| format!("invalid URI {value:?}: {e}")),
        ValueType::Number { unit, range } => {
            let v: f64 = value
                .parse()
                .map_err(|_| format!("expected a number ({unit}), got {value:?}"))?;
            if range.contains(v) {
                Ok(())
            } else {
                Err(format!("{v} outside {range:?} ({unit})"))
            }
        }
        ValueType::Integer { min } => match value.parse::<i64>() {
            Ok(v) if v >= min => Ok(()),
            Ok(v) => Err(format!("{v} below minimum {min}")),
            Err(_) => Err(format!("expected an integer, got {value:?}")),
        },
        ValueType::Bool => match value {
            "true" | "false" => Ok(()),
            _ => Err(format!("expected true or false, got {value:?}")),
        },
        ValueType::Instant => crate::time::Timestamp::parse(value)
            .map(|_| ())
            .map_err(|e| e.to_string()),
        ValueType::Choice(options) => {
            if options.contains(&value) {
                Ok(())
            } else {
                Err(format!("{value:?} not one of {options:?}"))
            }
        }
    }
}
