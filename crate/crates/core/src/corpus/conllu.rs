use std::fmt::Write as _;

use chrono::NaiveDate;

use super::{Bulletin, Sentence, Token};
use crate::depgraph::validate_tree;
use crate::error::{Error, Result};

const FIELDS: usize = 10;

/// Sentences and document-level metadata read from a CoNLL-U source.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedDocument {
    pub bulletin_id: Option<String>,
    pub publication_date: Option<NaiveDate>,
    /// Token rows and the `# text = ...` comment of each sentence.
    pub sentences: Vec<(Option<String>, Vec<Token>)>,
}

/// Parses CoNLL-U text. Multiword-token ranges (`3-4`) and empty nodes
/// (`5.1`) are skipped; only the basic dependency layer is kept.
pub fn parse_conllu(source: &str) -> Result<ParsedDocument> {
    let mut doc = ParsedDocument::default();
    let mut text: Option<String> = None;
    let mut tokens: Vec<Token> = Vec::new();
    let mut first_line = 0;

    for (lineno, line) in source.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            finish(&mut text, &mut tokens, &mut doc, first_line)?;
            continue;
        }
        if tokens.is_empty() && text.is_none() {
            first_line = lineno;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let value = value.trim();
                match key.trim() {
                    "text" => text = Some(value.to_string()),
                    "bulletin_id" => doc.bulletin_id = Some(value.to_string()),
                    "publication_date" => {
                        let date = NaiveDate::parse_from_str(value, "%Y-%m-%d").map_err(|e| {
                            Error::Parse {
                                line: lineno,
                                message: format!("bad publication_date '{value}': {e}"),
                            }
                        })?;
                        doc.publication_date = Some(date);
                    }
                    _ => {}
                }
            }
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != FIELDS {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "expected {FIELDS} tab-separated columns, found {}",
                    cols.len()
                ),
            });
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let index: usize = parse_field(cols[0], "ID", lineno)?;
        if index != tokens.len() + 1 {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "token ID {index} out of sequence, expected {}",
                    tokens.len() + 1
                ),
            });
        }
        let head: usize = parse_field(cols[6], "HEAD", lineno)?;
        let lemma = if cols[2] == "_" && cols[1] != "_" {
            cols[1]
        } else {
            cols[2]
        };
        tokens.push(Token::new(index, cols[1], lemma, head, cols[7]));
    }
    finish(&mut text, &mut tokens, &mut doc, first_line)?;
    Ok(doc)
}

fn finish(
    text: &mut Option<String>,
    tokens: &mut Vec<Token>,
    doc: &mut ParsedDocument,
    first_line: usize,
) -> Result<()> {
    if tokens.is_empty() {
        if text.take().is_some() {
            return Err(Error::Parse {
                line: first_line,
                message: "sentence has no token rows".into(),
            });
        }
        return Ok(());
    }
    let sentence = doc.sentences.len();
    validate_tree(tokens).map_err(|message| Error::Structure { sentence, message })?;
    doc.sentences.push((text.take(), std::mem::take(tokens)));
    Ok(())
}

fn parse_field(value: &str, name: &str, line: usize) -> Result<usize> {
    value.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{name} column is not a non-negative integer: '{value}'"),
    })
}

/// Builds a [`Bulletin`] from a CoNLL-U parse and an optional raw text
/// source holding one sentence per non-empty line.
///
/// Explicit `id` and `publication_date` arguments take precedence over the
/// `# bulletin_id` and `# publication_date` comments in the parse.
pub fn load_bulletin(
    text_source: Option<&str>,
    conllu_source: &str,
    id: Option<&str>,
    publication_date: Option<NaiveDate>,
) -> Result<Bulletin> {
    let doc = parse_conllu(conllu_source)?;
    let id = id
        .map(str::to_string)
        .or(doc.bulletin_id)
        .ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing bulletin_id".into(),
        })?;
    let publication_date =
        publication_date
            .or(doc.publication_date)
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("bulletin '{id}' has no publication_date"),
            })?;

    let raw_lines: Option<Vec<&str>> =
        text_source.map(|t| t.lines().map(str::trim).filter(|l| !l.is_empty()).collect());
    if let Some(lines) = &raw_lines {
        if lines.len() != doc.sentences.len() {
            return Err(Error::Structure {
                sentence: lines.len().min(doc.sentences.len()),
                message: format!(
                    "text source has {} sentences, parse has {}",
                    lines.len(),
                    doc.sentences.len()
                ),
            });
        }
    }

    let mut sentences = Vec::with_capacity(doc.sentences.len());
    for (i, (comment_text, tokens)) in doc.sentences.into_iter().enumerate() {
        let text = match &raw_lines {
            Some(lines) => {
                let raw = lines[i];
                if squash(raw) != squash(&surfaces(&tokens)) {
                    return Err(Error::Structure {
                        sentence: i,
                        message: "raw text does not match the parsed tokens".into(),
                    });
                }
                raw.to_string()
            }
            None => comment_text.unwrap_or_else(|| surfaces(&tokens)),
        };
        sentences.push(Sentence::new(text, tokens, publication_date));
    }

    Ok(Bulletin {
        id,
        publication_date,
        sentences,
    })
}

fn surfaces(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Writes a bulletin as CoNLL-U with its metadata comments. Columns the
/// pipeline does not use are written as `_`.
pub fn write_conllu(bulletin: &Bulletin) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# bulletin_id = {}", bulletin.id);
    let _ = writeln!(
        out,
        "# publication_date = {}",
        bulletin.publication_date.format("%Y-%m-%d")
    );
    for sentence in &bulletin.sentences {
        let _ = writeln!(out, "# text = {}", sentence.text);
        for t in &sentence.tokens {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t_\t_\t_\t{}\t{}\t_\t_",
                t.index, t.surface, t.lemma, t.head, t.deprel
            );
        }
        out.push('\n');
    }
    out
}
