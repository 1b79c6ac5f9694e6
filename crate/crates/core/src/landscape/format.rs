//! Line-oriented text format for instances.
//!
//! ```text
//! rhomnk 1 <n> <m> <k> <rho> <seed>
//! links <i> <j_1> ... <j_k>          (n lines, i ascending)
//! y <i> <row> <v_1> ... <v_m>        (n * 2^(k+1) lines, i then row ascending)
//! ```
//!
//! Reals are written with 17 significant digits, enough for an exact
//! round trip of any `f64`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{ComponentTables, EpistasisLinks, InstanceParams, RhoMnkInstance};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

impl RhoMnkInstance {
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let p = &self.params;
        writeln!(
            w,
            "rhomnk {FORMAT_VERSION} {} {} {} {} {}",
            p.n,
            p.m,
            p.k,
            real(p.rho),
            p.seed
        )?;
        for i in 0..p.n {
            write!(w, "links {i}")?;
            for j in self.links.of(i) {
                write!(w, " {j}")?;
            }
            writeln!(w)?;
        }
        for i in 0..p.n {
            for row in 0..self.tables.rows() {
                write!(w, "y {i} {row}")?;
                for v in self.tables.row(i, row) {
                    write!(w, " {}", real(*v))?;
                }
                writeln!(w)?;
            }
        }
        w.flush()
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        Parser::new(r).parse()
    }
}

pub fn save_instance(instance: &RhoMnkInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    instance
        .write_to(BufWriter::new(file))
        .map_err(|e| Error::io(path, e))
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<RhoMnkInstance> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    RhoMnkInstance::read_from(BufReader::new(file))
}

struct Parser<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> Parser<R> {
    fn new(r: R) -> Self {
        Self {
            lines: r.lines(),
            line_no: 0,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::MalformedFile {
            line: self.line_no,
            message: message.into(),
        }
    }

    fn next_line(&mut self, what: &str) -> Result<Vec<String>> {
        self.line_no += 1;
        match self.lines.next() {
            Some(Ok(line)) => Ok(line.split_whitespace().map(str::to_owned).collect()),
            Some(Err(e)) => Err(self.err(format!("read failure: {e}"))),
            None => Err(self.err(format!("unexpected end of file, expected {what}"))),
        }
    }

    fn field<T: std::str::FromStr>(&self, tokens: &[String], pos: usize, what: &str) -> Result<T> {
        let tok = tokens
            .get(pos)
            .ok_or_else(|| self.err(format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| self.err(format!("cannot parse {what} from {tok:?}")))
    }

    fn expect_tag(&self, tokens: &[String], tag: &str) -> Result<()> {
        match tokens.first() {
            Some(t) if t == tag => Ok(()),
            Some(t) => Err(self.err(format!("expected `{tag}`, found `{t}`"))),
            None => Err(self.err(format!("expected `{tag}`, found empty line"))),
        }
    }

    fn expect_len(&self, tokens: &[String], len: usize) -> Result<()> {
        if tokens.len() != len {
            return Err(self.err(format!("expected {len} fields, found {}", tokens.len())));
        }
        Ok(())
    }

    fn parse(mut self) -> Result<RhoMnkInstance> {
        let header = self.next_line("header")?;
        self.expect_tag(&header, "rhomnk")?;
        self.expect_len(&header, 7)?;
        let version: u32 = self.field(&header, 1, "version")?;
        if version != FORMAT_VERSION {
            return Err(self.err(format!("unsupported version {version}")));
        }
        let params = InstanceParams {
            n: self.field(&header, 2, "n")?,
            m: self.field(&header, 3, "m")?,
            k: self.field(&header, 4, "k")?,
            rho: self.field(&header, 5, "rho")?,
            seed: self.field(&header, 6, "seed")?,
        };
        params
            .validate()
            .map_err(|e| self.err(format!("invalid header: {e}")))?;
        let InstanceParams { n, m, k, .. } = params;

        let mut links = Vec::with_capacity(n);
        for i in 0..n {
            let t = self.next_line("links line")?;
            self.expect_tag(&t, "links")?;
            self.expect_len(&t, k + 2)?;
            let idx: usize = self.field(&t, 1, "bit index")?;
            if idx != i {
                return Err(self.err(format!("expected links for bit {i}, found {idx}")));
            }
            let mut list = Vec::with_capacity(k);
            for pos in 0..k {
                let j: usize = self.field(&t, pos + 2, "link")?;
                if j >= n {
                    return Err(self.err(format!("link {j} out of range for n = {n}")));
                }
                if j == i {
                    return Err(self.err(format!("bit {i} links to itself")));
                }
                if list.contains(&j) {
                    return Err(self.err(format!("bit {i} repeats link {j}")));
                }
                list.push(j);
            }
            links.push(list);
        }

        let rows = params.rows_per_table();
        let mut values = Vec::with_capacity(n * rows * m);
        for i in 0..n {
            for row in 0..rows {
                let t = self.next_line("y line")?;
                self.expect_tag(&t, "y")?;
                self.expect_len(&t, m + 3)?;
                let (bi, ri): (usize, usize) =
                    (self.field(&t, 1, "bit index")?, self.field(&t, 2, "row index")?);
                if (bi, ri) != (i, row) {
                    return Err(self.err(format!(
                        "expected entry for bit {i} row {row}, found bit {bi} row {ri}"
                    )));
                }
                for j in 0..m {
                    let v: f64 = self.field(&t, j + 3, "table value")?;
                    if !(0.0..1.0).contains(&v) {
                        return Err(self.err(format!("table value {v} outside [0, 1)")));
                    }
                    values.push(v);
                }
            }
        }

        loop {
            self.line_no += 1;
            match self.lines.next() {
                None => break,
                Some(Ok(line)) if line.trim().is_empty() => continue,
                Some(_) => return Err(self.err("trailing content after tables")),
            }
        }

        let links = EpistasisLinks::new(links, k).map_err(|e| self.err(e.to_string()))?;
        let tables = ComponentTables::new(n, k, m, values).map_err(|e| self.err(e.to_string()))?;
        RhoMnkInstance::from_parts(params, links, tables)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::Solution;

    fn text(inst: &RhoMnkInstance) -> String {
        let mut buf = Vec::new();
        inst.write_to(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    fn parse(s: &str) -> Result<RhoMnkInstance> {
        RhoMnkInstance::read_from(s.as_bytes())
    }

    #[test]
    fn round_trip_evaluates_identically() {
        let inst = RhoMnkInstance::generate(InstanceParams::new(8, 2, 2, -0.4, 77)).unwrap();
        let back = parse(&text(&inst)).unwrap();
        assert_eq!(back.params(), inst.params());
        assert_eq!(back.links(), inst.links());
        assert_eq!(back.tables(), inst.tables());
        for idx in 0..256 {
            let s = Solution::from_index(8, idx);
            assert_eq!(inst.evaluate(&s).unwrap(), back.evaluate(&s).unwrap());
        }
        assert_eq!(text(&back), text(&inst));
    }

    #[test]
    fn truncated_file() {
        let inst = RhoMnkInstance::generate(InstanceParams::new(4, 2, 1, 0.0, 1)).unwrap();
        let full = text(&inst);
        let cut: String = full.lines().take(7).map(|l| format!("{l}\n")).collect();
        match parse(&cut) {
            Err(Error::MalformedFile { line, message }) => {
                assert_eq!(line, 8);
                assert!(message.contains("end of file"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_link_rejected() {
        let inst = RhoMnkInstance::generate(InstanceParams::new(4, 1, 1, 0.0, 1)).unwrap();
        let bad = text(&inst)
            .lines()
            .map(|l| if l.starts_with("links 2 ") { "links 2 2".to_string() } else { l.to_string() })
            .collect::<Vec<_>>()
            .join("\n");
        match parse(&bad) {
            Err(Error::MalformedFile { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("itself"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_header_and_values() {
        assert!(matches!(parse(""), Err(Error::MalformedFile { line: 1, .. })));
        assert!(matches!(
            parse("rhomnk 2 1 1 0 0 0\n"),
            Err(Error::MalformedFile { line: 1, .. })
        ));
        assert!(matches!(
            parse("rhomnk 1 1 1 0 0 0\nlinks 0\ny 0 0 0.5\ny 0 1 1.5\n"),
            Err(Error::MalformedFile { line: 4, .. })
        ));
        assert!(parse("rhomnk 1 1 1 0 0 0\nlinks 0\ny 0 0 0.5\ny 0 1 0.25\n").is_ok());
        assert!(matches!(
            parse("rhomnk 1 1 1 0 0 0\nlinks 0\ny 0 0 0.5\ny 0 1 0.25\nextra\n"),
            Err(Error::MalformedFile { line: 5, .. })
        ));
    }
}
