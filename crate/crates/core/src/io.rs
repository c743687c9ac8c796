//! Textual file formats.
//!
//! Forms are stored as `{ "n": int, "p": int, "q": int, "terms": [ { "I": [...],
//! "J": [...], "re": float, "im": float } ] }` with terms lex-sorted on output.
//! Finite doubles round-trip bit-exactly (shortest-representation printing).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Form, MultiIndex};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermFile {
    #[serde(rename = "I")]
    pub i: Vec<u8>,
    #[serde(rename = "J")]
    pub j: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormFile {
    pub n: u32,
    pub p: i32,
    pub q: i32,
    pub terms: Vec<TermFile>,
}

impl FormFile {
    pub fn from_form(form: &Form) -> Self {
        let bd = form.bidegree();
        Self {
            n: bd.n,
            p: bd.p,
            q: bd.q,
            terms: form
                .terms()
                .map(|((i, j), c)| TermFile {
                    i: i.entries().to_vec(),
                    j: j.entries().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn into_form(self) -> Result<Form> {
        let bd = Bidegree::new(self.p, self.q, self.n);
        let mut form = Form::zero(bd);
        for (idx, term) in self.terms.iter().enumerate() {
            let loc = format!("terms[{idx}]");
            if bd.is_zero_space() {
                return Err(Error::Parse {
                    location: loc,
                    message: format!(
                        "bidegree ({},{}) denotes the zero space over n={}; no terms allowed",
                        self.p, self.q, self.n
                    ),
                });
            }
            let parse_index = |entries: &[u8], which: &str| -> Result<MultiIndex> {
                for w in entries.windows(2) {
                    if w[0] >= w[1] {
                        return Err(Error::Parse {
                            location: format!("{loc}.{which}"),
                            message: "indices not increasing".into(),
                        });
                    }
                }
                for &e in entries {
                    if e < 1 || e as u32 > self.n {
                        return Err(Error::Parse {
                            location: format!("{loc}.{which}"),
                            message: format!("index out of range: {e} not in 1..={}", self.n),
                        });
                    }
                }
                MultiIndex::new(entries, self.n)
            };
            let i = parse_index(&term.i, "I")?;
            let j = parse_index(&term.j, "J")?;
            if i.len() as i32 != self.p || j.len() as i32 != self.q {
                return Err(Error::Parse {
                    location: loc,
                    message: format!(
                        "term has sizes (|I|,|J|) = ({},{}), expected ({},{})",
                        i.len(),
                        j.len(),
                        self.p,
                        self.q
                    ),
                });
            }
            if !term.re.is_finite() || !term.im.is_finite() {
                return Err(Error::Parse {
                    location: loc,
                    message: "non-finite coefficient".into(),
                });
            }
            form.set_coefficient(i, j, Complex64::new(term.re, term.im))?;
        }
        Ok(form)
    }
}

/// Serializes a form to its canonical textual representation.
pub fn serialize_form(form: &Form) -> String {
    let mut s = serde_json::to_string_pretty(&FormFile::from_form(form)).expect("form to json");
    s.push('\n');
    s
}

/// Parses a form, reporting the JSON location or the offending term on failure.
pub fn parse_form(text: &str) -> Result<Form> {
    let file: FormFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    file.into_form()
}

pub fn read_form(path: &std::path::Path) -> Result<Form> {
    let text = std::fs::read_to_string(path)?;
    parse_form(&text)
}

pub fn write_form(path: &std::path::Path, form: &Form) -> Result<()> {
    atomic_write(path, serialize_form(form).as_bytes())
}

/// Write-temp-then-rename, so concurrent readers never observe a torn file.
pub fn atomic_write(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| std::path::Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// File schema for a square matrix of (1,1)-forms, reusing the form format
/// per entry. Hermitian symmetry is validated on load by the cones module.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GriffithsMatrixFile {
    pub n: u32,
    pub k: usize,
    pub entries: Vec<Vec<FormFile>>,
}
