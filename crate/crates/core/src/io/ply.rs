//! PLY in ASCII and binary little-endian encodings.
//!
//! Only `x`, `y`, `z` of the `vertex` element and the index list of the
//! `face` element are kept; other elements and properties are skipped. A
//! header comment `grid M N` marks the vertices as an `M x N` organized
//! cloud in row-major order.

use crate::geometry::Vec3;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PlyData {
    pub points: Vec<Vec3>,
    pub faces: Vec<Vec<usize>>,
    /// Grid dimensions from a `grid M N` comment.
    pub grid: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlyEncoding {
    Ascii,
    BinaryLittleEndian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(name: &str) -> Option<Scalar> {
        Some(match name {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }

    fn read_le(self, b: &[u8]) -> f64 {
        match self {
            Scalar::I8 => b[0] as i8 as f64,
            Scalar::U8 => b[0] as f64,
            Scalar::I16 => i16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::U16 => u16::from_le_bytes([b[0], b[1]]) as f64,
            Scalar::I32 => i32::from_le_bytes(b[..4].try_into().unwrap()) as f64,
            Scalar::U32 => u32::from_le_bytes(b[..4].try_into().unwrap()) as f64,
            Scalar::F32 => f32::from_le_bytes(b[..4].try_into().unwrap()) as f64,
            Scalar::F64 => f64::from_le_bytes(b[..8].try_into().unwrap()),
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { name: String, ty: Scalar },
    List { name: String, count: Scalar, item: Scalar },
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

struct Header {
    encoding: PlyEncoding,
    elements: Vec<Element>,
    grid: Option<(usize, usize)>,
    /// Byte offset of the body.
    body: usize,
    /// Number of header lines, for ASCII body line numbers.
    lines: usize,
}

fn header_error(line: usize, message: impl Into<String>) -> Error {
    Error::parse(format!("header line {line}"), message)
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    let mut pos = 0;
    let mut line_no = 0;
    let mut encoding = None;
    let mut elements: Vec<Element> = Vec::new();
    let mut grid = None;
    loop {
        let end = bytes[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| header_error(line_no + 1, "header is not terminated by end_header"))?;
        let line = std::str::from_utf8(&bytes[pos..pos + end])
            .map_err(|_| header_error(line_no + 1, "header is not valid text"))?
            .trim();
        pos += end + 1;
        line_no += 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if line_no == 1 {
            if line != "ply" {
                return Err(header_error(1, "missing \"ply\" magic"));
            }
            continue;
        }
        match tokens.as_slice() {
            ["format", "ascii", _] => encoding = Some(PlyEncoding::Ascii),
            ["format", "binary_little_endian", _] => encoding = Some(PlyEncoding::BinaryLittleEndian),
            ["format", other, ..] => return Err(header_error(line_no, format!("unsupported format {other:?}"))),
            ["comment", "grid", m, n] => {
                let dim = |t: &str| t.parse::<usize>().map_err(|_| header_error(line_no, format!("bad grid dimension {t:?}")));
                grid = Some((dim(m)?, dim(n)?));
            }
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["element", name, count] => elements.push(Element {
                name: name.to_string(),
                count: count.parse().map_err(|_| header_error(line_no, format!("bad element count {count:?}")))?,
                properties: Vec::new(),
            }),
            ["property", "list", count, item, name] => {
                let el = elements.last_mut().ok_or_else(|| header_error(line_no, "property before any element"))?;
                let ty = |t: &str| Scalar::parse(t).ok_or_else(|| header_error(line_no, format!("unknown type {t:?}")));
                el.properties.push(Property::List {
                    name: name.to_string(),
                    count: ty(count)?,
                    item: ty(item)?,
                });
            }
            ["property", ty, name] => {
                let el = elements.last_mut().ok_or_else(|| header_error(line_no, "property before any element"))?;
                el.properties.push(Property::Scalar {
                    name: name.to_string(),
                    ty: Scalar::parse(ty).ok_or_else(|| header_error(line_no, format!("unknown type {ty:?}")))?,
                });
            }
            ["end_header"] => break,
            _ => return Err(header_error(line_no, format!("unexpected header line {line:?}"))),
        }
    }
    Ok(Header {
        encoding: encoding.ok_or_else(|| header_error(line_no, "missing format line"))?,
        elements,
        grid,
        body: pos,
        lines: line_no,
    })
}

/// Reads values of one element record, in property order. Lists are
/// flattened behind their length.
trait Body {
    fn scalar(&mut self, ty: Scalar) -> Result<f64>;
    fn end_record(&mut self) -> Result<()>;
}

struct AsciiBody<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    first_line: usize,
    tokens: Vec<&'a str>,
    next: usize,
    line: usize,
}

impl<'a> Body for AsciiBody<'a> {
    fn scalar(&mut self, _ty: Scalar) -> Result<f64> {
        while self.next == self.tokens.len() {
            let (i, l) = self
                .lines
                .next()
                .ok_or_else(|| Error::parse("end of file", "fewer records than the header declares"))?;
            self.line = self.first_line + i;
            self.tokens = l.split_whitespace().collect();
            self.next = 0;
        }
        let t = self.tokens[self.next];
        self.next += 1;
        super::text::parse_real(t, self.line)
    }

    fn end_record(&mut self) -> Result<()> {
        if self.next != self.tokens.len() {
            return Err(Error::parse(format!("line {}", self.line), "more values than the element declares"));
        }
        Ok(())
    }
}

struct BinaryBody<'a> {
    bytes: &'a [u8],
    pos: usize,
    start: usize,
}

impl<'a> Body for BinaryBody<'a> {
    fn scalar(&mut self, ty: Scalar) -> Result<f64> {
        let end = self.pos + ty.size();
        if end > self.bytes.len() {
            return Err(Error::parse(
                format!("byte offset {}", self.start + self.pos),
                "body ends before all declared records",
            ));
        }
        let v = ty.read_le(&self.bytes[self.pos..end]);
        self.pos = end;
        Ok(v)
    }

    fn end_record(&mut self) -> Result<()> {
        Ok(())
    }
}

fn read_body(header: &Header, body: &mut dyn Body) -> Result<PlyData> {
    let mut points = Vec::new();
    let mut faces = Vec::new();
    for el in &header.elements {
        let is_vertex = el.name == "vertex";
        let is_face = el.name == "face";
        let slot = |name: &str| match name {
            "x" => Some(0),
            "y" => Some(1),
            "z" => Some(2),
            _ => None,
        };
        if is_vertex {
            let have: Vec<_> = el
                .properties
                .iter()
                .filter_map(|p| match p {
                    Property::Scalar { name, .. } => slot(name),
                    _ => None,
                })
                .collect();
            if !(0..3).all(|k| have.contains(&k)) {
                return Err(Error::parse("header", "vertex element lacks x, y or z"));
            }
        }
        for _ in 0..el.count {
            let mut xyz = [0.0; 3];
            let mut face = None;
            for p in &el.properties {
                match p {
                    Property::Scalar { name, ty } => {
                        let v = body.scalar(*ty)?;
                        if let (true, Some(k)) = (is_vertex, slot(name)) {
                            xyz[k] = v;
                        }
                    }
                    Property::List { name, count, item } => {
                        let n = body.scalar(*count)?;
                        if !(n >= 0.0 && n.fract() == 0.0) {
                            return Err(Error::parse("body", format!("bad list length {n}")));
                        }
                        let mut items = Vec::with_capacity(n as usize);
                        for _ in 0..n as usize {
                            items.push(body.scalar(*item)?);
                        }
                        if is_face && (name == "vertex_indices" || name == "vertex_index") {
                            face = Some(items);
                        }
                    }
                }
            }
            body.end_record()?;
            if is_vertex {
                points.push(Vec3::from_array(xyz));
            }
            if let Some(items) = face {
                let idx = items
                    .iter()
                    .map(|&v| {
                        if v >= 0.0 && v.fract() == 0.0 {
                            Ok(v as usize)
                        } else {
                            Err(Error::parse("face element", format!("bad vertex index {v}")))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                faces.push(idx);
            }
        }
    }
    if let Some(f) = faces.iter().flatten().find(|&&i| i >= points.len()) {
        return Err(Error::parse("face element", format!("vertex index {f} out of range")));
    }
    if let Some((m, n)) = header.grid {
        if m * n != points.len() {
            return Err(Error::parse(
                "header",
                format!("grid {m} x {n} does not match {} vertices", points.len()),
            ));
        }
    }
    Ok(PlyData {
        points,
        faces,
        grid: header.grid,
    })
}

pub fn parse_ply(bytes: &[u8]) -> Result<PlyData> {
    let header = parse_header(bytes)?;
    let rest = &bytes[header.body..];
    match header.encoding {
        PlyEncoding::Ascii => {
            let text = std::str::from_utf8(rest).map_err(|_| Error::parse("body", "ASCII body is not valid text"))?;
            let mut body = AsciiBody {
                lines: text.lines().enumerate().peekable(),
                first_line: header.lines + 1,
                tokens: Vec::new(),
                next: 0,
                line: header.lines,
            };
            read_body(&header, &mut body)
        }
        PlyEncoding::BinaryLittleEndian => {
            let mut body = BinaryBody {
                bytes: rest,
                pos: 0,
                start: header.body,
            };
            read_body(&header, &mut body)
        }
    }
}

/// Encodes points as doubles and faces as `uchar`/`int` index lists.
pub fn format_ply(data: &PlyData, encoding: PlyEncoding) -> Vec<u8> {
    let mut out = String::from("ply\n");
    out.push_str(match encoding {
        PlyEncoding::Ascii => "format ascii 1.0\n",
        PlyEncoding::BinaryLittleEndian => "format binary_little_endian 1.0\n",
    });
    if let Some((m, n)) = data.grid {
        out.push_str(&format!("comment grid {m} {n}\n"));
    }
    out.push_str(&format!(
        "element vertex {}\nproperty double x\nproperty double y\nproperty double z\n",
        data.points.len()
    ));
    if !data.faces.is_empty() {
        out.push_str(&format!("element face {}\nproperty list uchar int vertex_indices\n", data.faces.len()));
    }
    out.push_str("end_header\n");
    let mut bytes = out.into_bytes();
    match encoding {
        PlyEncoding::Ascii => {
            let mut body = String::new();
            for p in &data.points {
                body.push_str(&format!("{:.16e} {:.16e} {:.16e}\n", p.x, p.y, p.z));
            }
            for f in &data.faces {
                body.push_str(&f.len().to_string());
                for i in f {
                    body.push_str(&format!(" {i}"));
                }
                body.push('\n');
            }
            bytes.extend(body.into_bytes());
        }
        PlyEncoding::BinaryLittleEndian => {
            for p in &data.points {
                for c in p.to_array() {
                    bytes.extend(c.to_le_bytes());
                }
            }
            for f in &data.faces {
                bytes.push(f.len() as u8);
                for &i in f {
                    bytes.extend((i as i32).to_le_bytes());
                }
            }
        }
    }
    bytes
}
