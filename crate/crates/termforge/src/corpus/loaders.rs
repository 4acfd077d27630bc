//! Corpus loaders for the four supported on-disk formats.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

use super::{Document, LabeledCorpus, Normalizer};

/// On-disk corpus formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    /// One JSON object per line: `{"id": …, "text": …, "labels": […]}`.
    Jsonl,
    /// A root directory with one subdirectory per class; each file is one
    /// document, id `<class>/<filename>`.
    Ng20Dirs,
    /// SGML newswire files; `<TOPICS>` `<D>` entries become labels and
    /// `<BODY>` the text. Documents with an empty body are dropped.
    ReutersSgml,
    /// CSV with header `id,title,body,relevant`; text is `title + " " + body`
    /// and the label is `relevant` iff the flag is 1, `irrelevant` otherwise.
    ErntgCsv,
}

impl CorpusFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            CorpusFormat::Jsonl => "jsonl",
            CorpusFormat::Ng20Dirs => "ng20",
            CorpusFormat::ReutersSgml => "reuters",
            CorpusFormat::ErntgCsv => "erntg",
        }
    }
}

impl std::str::FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "ng20" | "ng20_dirs" => Ok(CorpusFormat::Ng20Dirs),
            "reuters" | "reuters_sgml" => Ok(CorpusFormat::ReutersSgml),
            "erntg" | "erntg_csv" => Ok(CorpusFormat::ErntgCsv),
            other => Err(Error::invalid(format!(
                "unknown corpus format {other:?} (expected jsonl, ng20, reuters, or erntg)"
            ))),
        }
    }
}

struct RawDoc {
    id: String,
    text: String,
    labels: BTreeSet<String>,
}

/// Loads a corpus from disk and normalizes every document. The result has
/// no vocabulary yet and every document starts in the Train split.
pub fn load_corpus(path: &Path, format: CorpusFormat, normalizer: &Normalizer) -> Result<LabeledCorpus> {
    let raw = match format {
        CorpusFormat::Jsonl => load_jsonl(path)?,
        CorpusFormat::Ng20Dirs => load_ng20(path)?,
        CorpusFormat::ReutersSgml => load_reuters(path)?,
        CorpusFormat::ErntgCsv => load_erntg(path)?,
    };

    let mut seen = HashSet::with_capacity(raw.len());
    for doc in &raw {
        if !seen.insert(doc.id.as_str()) {
            return Err(Error::DuplicateDocId(doc.id.clone()));
        }
    }

    let documents: Vec<Document> = par::map_vec(&raw, |r| Document {
        id: r.id.clone(),
        tokens: normalizer.normalize(&r.text),
        text: r.text.clone(),
        labels: r.labels.clone(),
    });
    Ok(LabeledCorpus::from_documents(documents))
}

/// Writes a corpus in the canonical JSONL form (id, text, sorted labels).
pub fn write_canonical_jsonl<W: Write>(corpus: &LabeledCorpus, mut w: W) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct Line<'a> {
        id: &'a str,
        text: &'a str,
        labels: Vec<&'a str>,
    }
    for doc in &corpus.documents {
        let line = Line {
            id: &doc.id,
            text: &doc.text,
            labels: doc.labels.iter().map(|s| s.as_str()).collect(),
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

fn load_jsonl(path: &Path) -> Result<Vec<RawDoc>> {
    #[derive(Deserialize)]
    struct Line {
        id: String,
        text: String,
        labels: Vec<String>,
    }

    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut docs = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Line = serde_json::from_str(line)
            .map_err(|e| Error::malformed(path, i + 1, format!("bad JSON record: {e}")))?;
        docs.push(RawDoc {
            id: parsed.id,
            text: parsed.text,
            labels: parsed.labels.into_iter().collect(),
        });
    }
    Ok(docs)
}

fn load_ng20(root: &Path) -> Result<Vec<RawDoc>> {
    let mut class_dirs: Vec<_> = fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(root, e))?
        .into_iter()
        .filter(|e| e.path().is_dir())
        .map(|e| e.path())
        .collect();
    class_dirs.sort();

    let mut docs = Vec::new();
    for dir in class_dirs {
        let class = dir.file_name().unwrap_or_default().to_string_lossy().to_string();
        let mut files: Vec<_> = fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .collect::<std::io::Result<Vec<_>>>()
            .map_err(|e| Error::io(&dir, e))?
            .into_iter()
            .filter(|e| e.path().is_file())
            .map(|e| e.path())
            .collect();
        files.sort();
        for file in files {
            // Usenet-era files are not always valid UTF-8; replace bad bytes
            // rather than fail (replacement chars vanish at tokenization).
            let bytes = fs::read(&file).map_err(|e| Error::io(&file, e))?;
            let text = String::from_utf8_lossy(&bytes).into_owned();
            let name = file.file_name().unwrap_or_default().to_string_lossy();
            docs.push(RawDoc {
                id: format!("{class}/{name}"),
                text,
                labels: BTreeSet::from([class.clone()]),
            });
        }
    }
    Ok(docs)
}

fn load_erntg(path: &Path) -> Result<Vec<RawDoc>> {
    #[derive(Deserialize)]
    struct Row {
        id: String,
        title: String,
        body: String,
        relevant: String,
    }

    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut docs = Vec::new();
    for record in reader.deserialize::<Row>() {
        let row = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::malformed(path, line, format!("bad CSV record: {e}"))
        })?;
        let label = match row.relevant.trim() {
            "1" => "relevant",
            "0" => "irrelevant",
            other => {
                return Err(Error::malformed(
                    path,
                    0,
                    format!("record {:?}: relevant flag must be 0 or 1, got {other:?}", row.id),
                ))
            }
        };
        docs.push(RawDoc {
            id: row.id,
            text: format!("{} {}", row.title, row.body),
            labels: BTreeSet::from([label.to_string()]),
        });
    }
    Ok(docs)
}

fn load_reuters(path: &Path) -> Result<Vec<RawDoc>> {
    let files: Vec<std::path::PathBuf> = if path.is_dir() {
        let mut files: Vec<_> = fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .collect::<std::io::Result<Vec<_>>>()
            .map_err(|e| Error::io(path, e))?
            .into_iter()
            .map(|e| e.path())
            .filter(|p| p.extension().map(|x| x == "sgm").unwrap_or(false))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Error::invalid(format!("no .sgm files under {}", path.display())));
        }
        files
    } else {
        vec![path.to_path_buf()]
    };

    let mut docs = Vec::new();
    for file in files {
        let bytes = fs::read(&file).map_err(|e| Error::io(&file, e))?;
        let text = String::from_utf8_lossy(&bytes).into_owned();
        scan_sgml_file(&file, &text, &mut docs)?;
    }
    Ok(docs)
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset].bytes().filter(|b| *b == b'\n').count() + 1
}

/// Hand-rolled scanner for the newswire SGML: pulls NEWID, TOPICS `<D>`
/// entries, and BODY out of each `<REUTERS …>…</REUTERS>` element.
fn scan_sgml_file(path: &Path, text: &str, docs: &mut Vec<RawDoc>) -> Result<()> {
    let mut pos = 0;
    while let Some(rel) = text[pos..].find("<REUTERS") {
        let start = pos + rel;
        let tag_end = text[start..]
            .find('>')
            .map(|i| start + i)
            .ok_or_else(|| Error::malformed(path, line_of(text, start), "unterminated <REUTERS> tag"))?;
        let attrs = &text[start..tag_end];
        let newid = attr_value(attrs, "NEWID").ok_or_else(|| {
            Error::malformed(path, line_of(text, start), "missing NEWID attribute on <REUTERS>")
        })?;
        let end = text[tag_end..]
            .find("</REUTERS>")
            .map(|i| tag_end + i)
            .ok_or_else(|| Error::malformed(path, line_of(text, start), "unterminated <REUTERS> element"))?;
        let record = &text[tag_end + 1..end];

        let mut labels = BTreeSet::new();
        if let Some(topics) = inner_element(record, "TOPICS") {
            let mut rest = topics;
            while let Some(d) = inner_element(rest, "D") {
                labels.insert(decode_entities(d).trim().to_string());
                let consumed = rest.find("</D>").expect("inner_element found it") + "</D>".len();
                rest = &rest[consumed..];
            }
        }
        labels.retain(|l| !l.is_empty());

        if let Some(body) = inner_element(record, "BODY") {
            let body = decode_entities(body);
            let body = body.trim();
            if !body.is_empty() {
                docs.push(RawDoc {
                    id: newid.to_string(),
                    text: body.to_string(),
                    labels,
                });
            }
        }
        pos = end + "</REUTERS>".len();
    }
    Ok(())
}

/// Content between `<NAME>` and `</NAME>`, first occurrence.
fn inner_element<'a>(text: &'a str, name: &str) -> Option<&'a str> {
    let open = format!("<{name}>");
    let close = format!("</{name}>");
    let start = text.find(&open)? + open.len();
    let end = text[start..].find(&close)? + start;
    Some(&text[start..end])
}

/// Value of `NAME="…"` inside a start tag.
fn attr_value<'a>(tag: &'a str, name: &str) -> Option<&'a str> {
    let needle = format!("{name}=\"");
    let start = tag.find(&needle)? + needle.len();
    let end = tag[start..].find('"')? + start;
    Some(&tag[start..end])
}

/// Decodes the five named SGML entities plus decimal character references.
/// Unknown entities are kept verbatim (they dissolve at tokenization).
fn decode_entities(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp..];
        let semi = tail.find(';').filter(|i| *i <= 8);
        match semi {
            Some(i) => {
                let entity = &tail[1..i];
                match entity {
                    "amp" => out.push('&'),
                    "lt" => out.push('<'),
                    "gt" => out.push('>'),
                    "quot" => out.push('"'),
                    "apos" => out.push('\''),
                    _ => {
                        let decoded = entity
                            .strip_prefix('#')
                            .and_then(|n| n.parse::<u32>().ok())
                            .and_then(char::from_u32);
                        match decoded {
                            Some(ch) => out.push(ch),
                            None => out.push_str(&tail[..i + 1]),
                        }
                    }
                }
                rest = &tail[i + 1..];
            }
            None => {
                out.push('&');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}
