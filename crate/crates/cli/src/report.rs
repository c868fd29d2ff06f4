//! JSON report emission with fixed floating-point formatting.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

/// Pretty-printing formatter writing every float with 17 significant digits
/// in exponent form (`1.2345678901234567e1`). Non-finite values become `null`.
pub struct FixedFormatter<'a>(PrettyFormatter<'a>);

impl Default for FixedFormatter<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::with_indent(b"  "))
    }
}

impl Formatter for FixedFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes with [`FixedFormatter`], newline-terminated.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFormatter::default());
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Converts a serializable value to a JSON tree.
pub fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Top-level report: `{meta, tables, tests, curves, figures}` in that order.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub meta: Map<String, Value>,
    pub tables: Map<String, Value>,
    pub tests: Map<String, Value>,
    pub curves: Map<String, Value>,
    pub figures: Vec<Value>,
}

impl Report {
    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("meta".into(), Value::Object(self.meta.clone()));
        root.insert("tables".into(), Value::Object(self.tables.clone()));
        root.insert("tests".into(), Value::Object(self.tests.clone()));
        root.insert("curves".into(), Value::Object(self.curves.clone()));
        root.insert("figures".into(), Value::Array(self.figures.clone()));
        Value::Object(root)
    }

    pub fn to_json(&self) -> String {
        to_json(&self.to_value())
    }
}
