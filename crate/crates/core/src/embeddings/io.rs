use std::io::{BufRead, Write};

use super::EmbeddingModel;
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Writes input vectors in word2vec text format: a `V d` header, then one
/// line per word with `d` space-separated components.
pub fn write_word2vec<T: Real, W: Write>(model: &EmbeddingModel<T>, mut out: W) -> Result<()> {
    let vocab = model.vocabulary();
    writeln!(out, "{} {}", vocab.len(), model.dim())?;
    for (i, word) in vocab.words().iter().enumerate() {
        out.write_all(word.as_bytes())?;
        for x in model.input_vector(i) {
            write!(out, " {x}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_word2vec<T: Real, R: BufRead>(input: R) -> Result<EmbeddingModel<T>> {
    let mut lines = input.lines();
    let bad = |line: usize, message: String| Error::ModelFormat { line, message };

    let header = lines
        .next()
        .ok_or_else(|| bad(1, "missing header".into()))??;
    let mut parts = header.split_whitespace();
    let (Some(v), Some(d), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad(1, format!("expected 'V d' header, found '{header}'")));
    };
    let n: usize = v
        .parse()
        .map_err(|_| bad(1, format!("bad vocabulary size '{v}'")))?;
    let dim: usize = d
        .parse()
        .map_err(|_| bad(1, format!("bad dimensionality '{d}'")))?;

    let mut words = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n * dim);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(' ').filter(|f| !f.is_empty());
        let word = fields
            .next()
            .ok_or_else(|| bad(lineno, "empty line".into()))?;
        let before = vectors.len();
        for field in fields {
            let x: T = field
                .parse()
                .map_err(|_| bad(lineno, format!("bad component '{field}'")))?;
            vectors.push(x);
        }
        if vectors.len() - before != dim {
            return Err(bad(
                lineno,
                format!(
                    "expected {dim} components, found {}",
                    vectors.len() - before
                ),
            ));
        }
        words.push(word.to_string());
    }
    if words.len() != n {
        return Err(bad(
            0,
            format!("header declares {n} words, file has {}", words.len()),
        ));
    }
    let vocab = Vocabulary::from_words(words).map_err(|e| bad(0, e.to_string()))?;
    EmbeddingModel::from_vectors(vocab, dim, vectors)
}
