//! Streaming FASTA/FASTQ reader.
//!
//! Reads are numbered by their rank in the file; headers are kept for output
//! only. The format is detected from the first non-blank byte: `>` for FASTA
//! (sequences may span lines), `@` for strict 4-line FASTQ.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadRecord {
    pub id: usize,
    pub header: String,
    pub seq: Vec<u8>,
}

impl ReadRecord {
    pub fn new(id: usize, header: impl Into<String>, seq: impl Into<Vec<u8>>) -> Self {
        ReadRecord {
            id,
            header: header.into(),
            seq: seq.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Fasta,
    Fastq,
}

pub struct ReadReader<R> {
    inner: R,
    format: Option<Format>,
    line_no: usize,
    next_id: usize,
    line: String,
    /// FASTA header already consumed while scanning the previous record.
    pending: Option<(String, usize)>,
    done: bool,
}

pub fn open_reads(path: &Path) -> Result<ReadReader<BufReader<File>>> {
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    ReadReader::new(BufReader::new(file))
}

fn header_name(line: &str) -> String {
    line[1..].split_whitespace().next().unwrap_or("").to_string()
}

impl<R: BufRead> ReadReader<R> {
    pub fn new(mut inner: R) -> Result<Self> {
        let format = loop {
            let buf = inner.fill_buf()?;
            match buf.first() {
                None => break None,
                Some(b'>') => break Some(Format::Fasta),
                Some(b'@') => break Some(Format::Fastq),
                Some(b) if b.is_ascii_whitespace() => inner.consume(1),
                Some(&b) => {
                    return Err(Error::Parse {
                        line: 1,
                        message: format!(
                            "expected '>' or '@' at start of file, found {:?}",
                            b as char
                        ),
                    })
                }
            }
        };
        Ok(ReadReader {
            inner,
            format,
            line_no: 0,
            next_id: 0,
            line: String::new(),
            pending: None,
            done: format.is_none(),
        })
    }

    pub fn format(&self) -> Option<Format> {
        self.format
    }

    /// Next line without its terminator, or `None` at EOF.
    fn read_line(&mut self) -> Result<Option<&str>> {
        self.line.clear();
        if self.inner.read_line(&mut self.line)? == 0 {
            return Ok(None);
        }
        self.line_no += 1;
        let trimmed = self.line.trim_end_matches(['\n', '\r']);
        Ok(Some(trimmed))
    }

    fn parse_err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    fn next_fasta(&mut self) -> Result<Option<ReadRecord>> {
        let (header, header_line) = match self.pending.take() {
            Some(h) => h,
            None => loop {
                match self.read_line()? {
                    None => return Ok(None),
                    Some("") => continue,
                    Some(l) if l.starts_with('>') => {
                        let h = header_name(l);
                        break (h, self.line_no);
                    }
                    Some(_) => {
                        return Err(self.parse_err(self.line_no, "sequence line before any header"))
                    }
                }
            },
        };
        let mut seq = Vec::new();
        loop {
            match self.read_line()? {
                None => break,
                Some(l) if l.starts_with('>') => {
                    let h = header_name(l);
                    self.pending = Some((h, self.line_no));
                    break;
                }
                Some(l) => seq.extend(l.trim().bytes()),
            }
        }
        if seq.is_empty() {
            return Err(self.parse_err(header_line, format!("empty sequence for '{header}'")));
        }
        Ok(Some(self.record(header, seq)))
    }

    fn next_fastq(&mut self) -> Result<Option<ReadRecord>> {
        let header = loop {
            match self.read_line()? {
                None => return Ok(None),
                Some("") => continue,
                Some(l) if l.starts_with('@') => break header_name(l),
                Some(_) => return Err(self.parse_err(self.line_no, "expected '@' header")),
            }
        };
        let header_line = self.line_no;
        let seq = match self.read_line()? {
            Some(l) if !l.is_empty() => l.as_bytes().to_vec(),
            _ => return Err(self.parse_err(header_line + 1, format!("empty sequence for '{header}'"))),
        };
        match self.read_line()? {
            Some(l) if l.starts_with('+') => {
                let name = l[1..].split_whitespace().next().unwrap_or("");
                if !name.is_empty() && name != header {
                    let msg = format!("'+' line names '{name}' but header is '{header}'");
                    return Err(self.parse_err(self.line_no, msg));
                }
            }
            _ => return Err(self.parse_err(header_line + 2, "expected '+' separator line")),
        }
        match self.read_line()? {
            Some(q) if q.len() == seq.len() => {}
            Some(q) => {
                let msg = format!("quality length {} != sequence length {}", q.len(), seq.len());
                return Err(self.parse_err(self.line_no, msg));
            }
            None => return Err(self.parse_err(header_line + 3, "missing quality line")),
        }
        Ok(Some(self.record(header, seq)))
    }

    fn record(&mut self, header: String, seq: Vec<u8>) -> ReadRecord {
        let id = self.next_id;
        self.next_id += 1;
        ReadRecord { id, header, seq }
    }
}

impl<R: BufRead> Iterator for ReadReader<R> {
    type Item = Result<ReadRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let res = match self.format {
            Some(Format::Fasta) => self.next_fasta(),
            Some(Format::Fastq) => self.next_fastq(),
            None => Ok(None),
        };
        match res {
            Ok(Some(r)) => Some(Ok(r)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// Paths listed one per line; blank lines are skipped. Relative paths are
/// resolved against the list file's directory.
pub fn read_file_of_files(path: &Path) -> Result<Vec<PathBuf>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let p = Path::new(l);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        })
        .collect())
}

/// A read set that can be scanned more than once, in batches.
pub trait ReadSource: Sync {
    fn for_each_batch(
        &self,
        batch_size: usize,
        f: &mut dyn FnMut(&[ReadRecord]) -> Result<()>,
    ) -> Result<()>;
}

impl ReadSource for Path {
    fn for_each_batch(
        &self,
        batch_size: usize,
        f: &mut dyn FnMut(&[ReadRecord]) -> Result<()>,
    ) -> Result<()> {
        let mut batch = Vec::with_capacity(batch_size);
        for rec in open_reads(self)? {
            batch.push(rec?);
            if batch.len() == batch_size {
                f(&batch)?;
                batch.clear();
            }
        }
        if !batch.is_empty() {
            f(&batch)?;
        }
        Ok(())
    }
}

impl ReadSource for PathBuf {
    fn for_each_batch(
        &self,
        batch_size: usize,
        f: &mut dyn FnMut(&[ReadRecord]) -> Result<()>,
    ) -> Result<()> {
        self.as_path().for_each_batch(batch_size, f)
    }
}

impl ReadSource for [ReadRecord] {
    fn for_each_batch(
        &self,
        batch_size: usize,
        f: &mut dyn FnMut(&[ReadRecord]) -> Result<()>,
    ) -> Result<()> {
        self.chunks(batch_size.max(1)).try_for_each(f)
    }
}

impl ReadSource for Vec<ReadRecord> {
    fn for_each_batch(
        &self,
        batch_size: usize,
        f: &mut dyn FnMut(&[ReadRecord]) -> Result<()>,
    ) -> Result<()> {
        self.as_slice().for_each_batch(batch_size, f)
    }
}

/// Builds records numbered 0.. from plain sequences.
pub fn records_from_seqs<S: AsRef<[u8]>>(seqs: &[S]) -> Vec<ReadRecord> {
    seqs.iter()
        .enumerate()
        .map(|(i, s)| ReadRecord::new(i, format!("r{i}"), s.as_ref()))
        .collect()
}
