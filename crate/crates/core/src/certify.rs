//! Plain-text arc certificates.
//!
//! ```text
//! q p h c0 c1 ... ch
//! # size: k
//! # complete: true
//! x0 x1 x2
//! ...
//! ```
//!
//! The first line names the field by its modulus coefficients, lowest degree
//! first. Each further non-comment line is a point given by three element
//! indices. Comment lines start with `#`; `size` and `complete` comments are
//! read back, any other comment is ignored. Without a `complete` comment the
//! arc is claimed complete.
//!
//! Reading rebuilds the field from the stated modulus, which need not be the
//! one this crate would pick, and checks the points from scratch.

use std::path::Path;

use thiserror::Error;

use crate::arc::{verify_arc, verify_complete, Arc};
use crate::gf::{is_prime, Field, FieldElement, GfError};
use crate::plane::{PlaneIndex, PointId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u32 },
    #[error("line {line}: point repeats the point on line {first}")]
    DuplicatePoint { line: usize, first: usize },
    #[error("line {line}: the zero triple is not a point")]
    ZeroTriple { line: usize },
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub q: u32,
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
    /// Element indices as written, with the file line of each point.
    pub points: Vec<([u32; 3], usize)>,
    pub claimed_complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub q: u32,
    pub size: usize,
    pub is_arc: bool,
    pub is_complete: bool,
    pub claimed_complete: bool,
    /// Number of points on no secant.
    pub uncovered: usize,
}

impl Verdict {
    /// The points form an arc and it is complete whenever that is claimed.
    pub fn holds(&self) -> bool {
        self.is_arc && (self.is_complete || !self.claimed_complete)
    }
}

impl Certificate {
    /// Certificate for `arc`, points in normalized coordinates sorted by id.
    pub fn from_arc(plane: &PlaneIndex, arc: &Arc, complete: bool) -> Self {
        let field = plane.field();
        let points = arc
            .sorted_points()
            .into_iter()
            .map(|id| (plane.coords(id).map(FieldElement::index), 0))
            .collect();
        Certificate {
            q: field.order(),
            p: field.p(),
            h: field.h(),
            modulus: field.modulus().to_vec(),
            points,
            claimed_complete: complete,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}", self.q, self.p, self.h);
        for c in &self.modulus {
            s.push_str(&format!(" {c}"));
        }
        s.push_str(&format!(
            "\n# size: {}\n# complete: {}\n",
            self.points.len(),
            self.claimed_complete
        ));
        for ([a, b, c], _) in &self.points {
            s.push_str(&format!("{a} {b} {c}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, CertError> {
        let mut raw: Vec<&str> = text.split('\n').collect();
        let terminated = raw.len() > 1 && raw.last() == Some(&"");
        if terminated {
            raw.pop();
        }
        let mut lines = raw.iter().enumerate().map(|(i, l)| (i + 1, *l));
        let (_, header) = lines.next().unwrap_or((1, ""));
        let fields = numbers(header, 1)?;
        if fields.len() < 4 {
            return Err(parse_err(
                1,
                header.len() + 1,
                "header needs q p h and the modulus",
            ));
        }
        let (q, p, h) = (fields[0].0, fields[1].0, fields[2].0);
        if !is_prime(p as u64) {
            return Err(parse_err(1, fields[1].1, "p is not prime"));
        }
        if h == 0 || (p as u64).checked_pow(h) != Some(q as u64) {
            return Err(parse_err(1, fields[0].1, "q is not p^h"));
        }
        if fields.len() != h as usize + 4 {
            return Err(parse_err(
                1,
                fields.get(h as usize + 4).map_or(header.len() + 1, |f| f.1),
                &format!("expected {} modulus coefficients", h + 1),
            ));
        }
        let modulus: Vec<u32> = fields[3..].iter().map(|f| f.0).collect();
        if let Some(bad) = fields[3..].iter().find(|f| f.0 >= p) {
            return Err(parse_err(1, bad.1, "coefficient is not below p"));
        }

        let mut size = None;
        let mut claimed_complete = true;
        let mut points = Vec::new();
        let mut last_line = 1;
        for (n, line) in lines {
            last_line = n;
            if line.is_empty() {
                return Err(parse_err(n, 1, "empty line"));
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(v) = comment.strip_prefix("size:") {
                    let v = v.trim();
                    size = Some(
                        v.parse::<usize>()
                            .map_err(|_| parse_err(n, 1, "bad size"))?,
                    );
                } else if let Some(v) = comment.strip_prefix("complete:") {
                    claimed_complete = match v.trim() {
                        "true" => true,
                        "false" => false,
                        _ => return Err(parse_err(n, 1, "complete must be true or false")),
                    };
                }
                continue;
            }
            let xs = numbers(line, n)?;
            if xs.len() != 3 {
                let col = xs.get(3).map_or(line.len() + 1, |x| x.1);
                return Err(parse_err(n, col, "a point needs exactly three coordinates"));
            }
            if let Some(bad) = xs.iter().find(|x| x.0 >= q) {
                return Err(parse_err(
                    n,
                    bad.1,
                    "coordinate is not a field element index",
                ));
            }
            points.push(([xs[0].0, xs[1].0, xs[2].0], n));
        }
        if !terminated {
            return Err(parse_err(
                last_line,
                raw[last_line - 1].len() + 1,
                "missing final newline",
            ));
        }
        if let Some(k) = size {
            if k != points.len() {
                return Err(parse_err(
                    last_line + 1,
                    1,
                    &format!("size comment says {k} points, found {}", points.len()),
                ));
            }
        }
        Ok(Certificate {
            q,
            p,
            h,
            modulus,
            points,
            claimed_complete,
        })
    }

    /// Plane over the stated modulus and the normalized point ids.
    pub fn resolve(&self) -> Result<(PlaneIndex, Vec<PointId>), CertError> {
        let field = Field::with_modulus(self.p, self.h, &self.modulus).map_err(|e| match e {
            GfError::ReducibleModulus(p) => CertError::ReducibleModulus { p },
            other => parse_err(1, 1, &other.to_string()),
        })?;
        let plane = PlaneIndex::build(field).map_err(|e| parse_err(1, 1, &e.to_string()))?;
        let mut ids = Vec::with_capacity(self.points.len());
        let mut seen = std::collections::HashMap::new();
        for &(coords, line) in &self.points {
            let triple = coords.map(FieldElement::from_raw);
            let id = plane
                .id_of(triple)
                .map_err(|_| CertError::ZeroTriple { line })?;
            if let Some(&first) = seen.get(&id) {
                return Err(CertError::DuplicatePoint { line, first });
            }
            seen.insert(id, line);
            ids.push(id);
        }
        Ok((plane, ids))
    }

    pub fn verify(&self) -> Result<Verdict, CertError> {
        let (plane, ids) = self.resolve()?;
        let is_arc = verify_arc(&plane, &ids);
        let uncovered = if is_arc {
            verify_complete(&plane, &ids)
                .expect("checked to be an arc")
                .uncovered
                .len()
        } else {
            0
        };
        Ok(Verdict {
            q: self.q,
            size: ids.len(),
            is_arc,
            is_complete: is_arc && uncovered == 0,
            claimed_complete: self.claimed_complete,
            uncovered,
        })
    }
}

fn parse_err(line: usize, col: usize, message: &str) -> CertError {
    CertError::Parse {
        line,
        col,
        message: message.to_string(),
    }
}

/// Space-separated decimal integers with their 1-based columns.
fn numbers(line: &str, n: usize) -> Result<Vec<(u32, usize)>, CertError> {
    let mut out = Vec::new();
    let mut col = 0;
    for token in line.split(' ') {
        if token.is_empty() {
            return Err(parse_err(
                n,
                col + 1,
                "expected a single space between numbers",
            ));
        }
        if !token.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err(n, col + 1, &format!("'{token}' is not a number")));
        }
        let v = token
            .parse::<u32>()
            .map_err(|_| parse_err(n, col + 1, "number too large"))?;
        out.push((v, col + 1));
        col += token.len() + 1;
    }
    Ok(out)
}

pub fn write_certificate(
    plane: &PlaneIndex,
    arc: &Arc,
    complete: bool,
    path: &Path,
) -> Result<(), CertError> {
    std::fs::write(path, Certificate::from_arc(plane, arc, complete).to_text())
        .map_err(|e| CertError::Io(format!("{}: {e}", path.display())))
}

pub fn read_certificate(path: &Path) -> Result<Certificate, CertError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CertError::Io(format!("{}: {e}", path.display())))?;
    Certificate::parse(&text)
}

pub fn read_and_verify(path: &Path) -> Result<Verdict, CertError> {
    read_certificate(path)?.verify()
}
