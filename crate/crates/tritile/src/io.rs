//! The `TILING/1` text format.
//!
//! ```text
//! TILING/1 exact eps=1e-9
//! WINDOW -10/1:0/1 10/1:0/1 -10/1:0/1 10/1:0/1
//! 0/1:0/1 0/1:0/1 3/1:0/1 0/1:0/1 3/2:0/1 0/1:3/2
//! ```
//!
//! Exact tokens are `p/q:r/s` for `p/q + (r/s)·√3` in lowest terms; float
//! tokens are decimals with 17 significant digits. Lines starting with `#`
//! are comments.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use tritile_core::model::default_margin;
use tritile_core::{Backend, Interiority, Patch, PatchError, Point, QSqrt3, Scalar, Tolerance, Triangle, Window};

const MAGIC: &str = "TILING/1";

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expected a {expected} tiling, found {found}")]
    BackendMismatch { expected: Backend, found: Backend },
    #[error("triangles on lines {first} and {second} overlap")]
    Overlap { first: usize, second: usize },
    #[error("line {line}: {source}")]
    Patch { line: usize, source: PatchError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> LoadError {
    LoadError::Parse {
        line,
        message: message.into(),
    }
}

/// Coordinate tokens of a backend.
pub trait Token: Scalar {
    fn write_token(&self, out: &mut String);
    fn parse_token(s: &str) -> Option<Self>;
}

impl Token for QSqrt3 {
    fn write_token(&self, out: &mut String) {
        write!(out, "{self}").unwrap();
    }

    fn parse_token(s: &str) -> Option<Self> {
        QSqrt3::from_str(s).ok()
    }
}

impl Token for f64 {
    fn write_token(&self, out: &mut String) {
        write!(out, "{self:.16e}").unwrap();
    }

    fn parse_token(s: &str) -> Option<Self> {
        f64::from_str(s).ok().filter(|x| x.is_finite())
    }
}

/// A patch of either backend, as read from a file.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum AnyPatch {
    Exact(Patch<QSqrt3>),
    Float(Patch<f64>),
}

impl AnyPatch {
    pub fn backend(&self) -> Backend {
        match self {
            AnyPatch::Exact(_) => Backend::Exact,
            AnyPatch::Float(_) => Backend::Float,
        }
    }
}

/// How a loaded patch decides interiority.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum InteriorRule {
    /// Margin of twice the largest side.
    #[default]
    Default,
    /// A margin given as a decimal or rational.
    Margin(String),
    /// Local completeness around each triangle.
    Local,
}

impl InteriorRule {
    fn resolve<S: Token>(&self, triangles: &[Triangle<S>], line: usize) -> Result<Interiority<S>, LoadError> {
        Ok(match self {
            InteriorRule::Default => Interiority::Margin(default_margin(triangles)),
            InteriorRule::Local => Interiority::LocallyComplete,
            InteriorRule::Margin(m) => {
                Interiority::Margin(parse_scalar::<S>(m).ok_or_else(|| parse_err(line, format!("bad margin {m:?}")))?)
            }
        })
    }
}

/// Parses a command-line scalar: a backend token, or for floats also `p/q`.
pub fn parse_scalar<S: Token>(s: &str) -> Option<S> {
    S::parse_token(s).or_else(|| {
        let r = tritile_core::scalar::parse_rational(s)?;
        let q = QSqrt3::rational(r);
        if S::is_exact() {
            S::parse_token(&q.to_string())
        } else {
            S::parse_token(&format!("{:e}", q.to_f64()))
        }
    })
}

pub fn save<S: Token>(patch: &Patch<S>) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC} {} eps={:e}", S::BACKEND, patch.tol().eps()).unwrap();
    let w = patch.window();
    out.push_str("WINDOW");
    for v in [w.xmin(), w.xmax(), w.ymin(), w.ymax()] {
        out.push(' ');
        v.write_token(&mut out);
    }
    out.push('\n');
    for t in patch.triangles() {
        for (i, p) in t.vertices().iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            p.x.write_token(&mut out);
            out.push(' ');
            p.y.write_token(&mut out);
        }
        out.push('\n');
    }
    out
}

pub fn save_to<S: Token>(patch: &Patch<S>, path: &Path) -> Result<(), std::io::Error> {
    std::fs::write(path, save(patch))
}

/// Meaningful lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header(line: usize, text: &str) -> Result<(Backend, Tolerance), LoadError> {
    let mut parts = text.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(parse_err(line, format!("expected {MAGIC} header")));
    }
    let backend = match parts.next() {
        Some("exact") => Backend::Exact,
        Some("float") => Backend::Float,
        other => return Err(parse_err(line, format!("unknown backend {other:?}"))),
    };
    let eps = parts
        .next()
        .and_then(|p| p.strip_prefix("eps="))
        .and_then(|e| f64::from_str(e).ok())
        .filter(|e| e.is_finite() && *e >= 0.0)
        .ok_or_else(|| parse_err(line, "expected eps=<decimal>"))?;
    if let Some(extra) = parts.next() {
        return Err(parse_err(line, format!("unexpected {extra:?}")));
    }
    Ok((backend, Tolerance::new(eps)))
}

/// Reads the backend named by the header without parsing the rest.
pub fn peek_backend(text: &str) -> Result<Backend, LoadError> {
    let (line, first) = lines(text).next().ok_or_else(|| parse_err(1, "empty file"))?;
    Ok(header(line, first)?.0)
}

fn tokens<S: Token>(line: usize, text: &str, count: usize) -> Result<Vec<S>, LoadError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != count {
        return Err(parse_err(
            line,
            format!("expected {count} coordinates, found {}", parts.len()),
        ));
    }
    parts
        .iter()
        .map(|p| S::parse_token(p).ok_or_else(|| parse_err(line, format!("bad coordinate {p:?}"))))
        .collect()
}

/// Parses a file of backend `S`; `BackendMismatch` if the header names the other one.
pub fn load_as<S: Token>(text: &str, rule: &InteriorRule) -> Result<Patch<S>, LoadError> {
    let mut it = lines(text);
    let (hline, first) = it.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let (backend, tol) = header(hline, first)?;
    if backend != S::BACKEND {
        return Err(LoadError::BackendMismatch {
            expected: S::BACKEND,
            found: backend,
        });
    }
    let (wline, wtext) = it.next().ok_or_else(|| parse_err(hline + 1, "missing WINDOW line"))?;
    let rest = wtext
        .strip_prefix("WINDOW")
        .ok_or_else(|| parse_err(wline, "expected WINDOW"))?;
    let [x0, x1, y0, y1]: [S; 4] = tokens(wline, rest, 4)?.try_into().unwrap();
    let window = Window::new(x0, x1, y0, y1).map_err(|source| LoadError::Patch { line: wline, source })?;

    let mut triangles = Vec::new();
    let mut line_of = Vec::new();
    for (line, text) in it {
        let c = tokens::<S>(line, text, 6)?;
        let p = |i: usize| Point::new(c[2 * i].clone(), c[2 * i + 1].clone());
        let t = Triangle::new(p(0), p(1), p(2), &tol).map_err(|e| parse_err(line, e.to_string()))?;
        triangles.push(t);
        line_of.push(line);
    }
    let interiority = rule.resolve(&triangles, wline)?;
    Patch::with_interiority(triangles, window, tol, interiority).map_err(|e| match e {
        PatchError::Overlap(i, j) => LoadError::Overlap {
            first: line_of[i],
            second: line_of[j],
        },
        PatchError::OutsideWindow(i) | PatchError::Geometry { index: i, .. } => LoadError::Patch {
            line: line_of[i],
            source: e,
        },
        other => LoadError::Patch {
            line: wline,
            source: other,
        },
    })
}

pub fn load(text: &str, rule: &InteriorRule) -> Result<AnyPatch, LoadError> {
    Ok(match peek_backend(text)? {
        Backend::Exact => AnyPatch::Exact(load_as(text, rule)?),
        Backend::Float => AnyPatch::Float(load_as(text, rule)?),
    })
}

pub fn load_from(path: &Path, rule: &InteriorRule) -> Result<AnyPatch, LoadError> {
    load(&std::fs::read_to_string(path)?, rule)
}
