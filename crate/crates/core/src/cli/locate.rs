//! Line numbers of values inside a syntactically valid JSON document.
//!
//! Paths are slash-separated member names and array indices, e.g.
//! `/users/2/capacity` or `/values/a,1`. Object keys are taken verbatim
//! (escape sequences are not decoded).

use std::collections::HashMap;

#[derive(Debug, Default)]
pub struct Positions {
    lines: HashMap<String, usize>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct DuplicateKey {
    pub path: String,
    pub line: usize,
}

impl Positions {
    /// Scans `text`, which serde_json has already accepted.
    pub fn scan(text: &str) -> Result<Positions, DuplicateKey> {
        let mut scanner = Scanner {
            bytes: text.as_bytes(),
            pos: 0,
            line: 1,
            out: Positions::default(),
        };
        scanner.value(String::new())?;
        Ok(scanner.out)
    }

    /// Line of the value at `path`, if present.
    pub fn line(&self, path: &str) -> Option<usize> {
        self.lines.get(path).copied()
    }

    /// Line of the value at `path` or of its nearest recorded ancestor.
    pub fn nearest(&self, path: &str) -> Option<usize> {
        let mut p = path;
        loop {
            if let Some(l) = self.line(p) {
                return Some(l);
            }
            p = &p[..p.rfind('/')?];
        }
    }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    out: Positions,
}

impl Scanner<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
        }
        Some(b)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    fn string(&mut self) -> String {
        self.bump();
        let start = self.pos;
        while let Some(b) = self.bump() {
            match b {
                b'\\' => {
                    self.bump();
                }
                b'"' => break,
                _ => {}
            }
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos.saturating_sub(1)]).into_owned()
    }

    fn value(&mut self, path: String) -> Result<(), DuplicateKey> {
        self.skip_ws();
        self.out.lines.entry(path.clone()).or_insert(self.line);
        match self.peek() {
            Some(b'{') => {
                self.bump();
                let mut seen = std::collections::HashSet::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b'}') => {
                            self.bump();
                            break;
                        }
                        Some(b',') => {
                            self.bump();
                            continue;
                        }
                        Some(b'"') => {}
                        _ => break,
                    }
                    let key_line = self.line;
                    let key = self.string();
                    let child = format!("{path}/{key}");
                    if !seen.insert(key) {
                        return Err(DuplicateKey { path: child, line: key_line });
                    }
                    self.out.lines.insert(child.clone(), key_line);
                    self.skip_ws();
                    self.bump();
                    self.value(child)?;
                }
            }
            Some(b'[') => {
                self.bump();
                let mut index = 0;
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b']') => {
                            self.bump();
                            break;
                        }
                        Some(b',') => {
                            self.bump();
                        }
                        None => break,
                        _ => {
                            self.value(format!("{path}/{index}"))?;
                            index += 1;
                        }
                    }
                }
            }
            Some(b'"') => {
                self.string();
            }
            Some(_) => {
                while !matches!(self.peek(), None | Some(b',' | b']' | b'}' | b' ' | b'\t' | b'\r' | b'\n')) {
                    self.bump();
                }
            }
            None => {}
        }
        Ok(())
    }
}
