use std::ops::Range;

use serde::{Deserialize, Serialize};

/// A sentence with its position in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub text: String,
    /// Half-open character offsets.
    pub chars: Range<usize>,
    /// Half-open byte offsets.
    pub bytes: Range<usize>,
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Splits after `.`, `!` or `?` when followed by whitespace or end of text.
/// Sentences are trimmed; whitespace between them belongs to no sentence.
/// Text without a terminator is a single sentence. Abbreviations are not
/// special-cased.
pub fn segment_sentences(text: &str) -> Vec<Sentence> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |ci: usize| chars.get(ci).map_or(text.len(), |&(b, _)| b);
    let mut out = Vec::new();
    let mut push = |start: usize, end: usize| {
        let bytes = byte_at(start)..byte_at(end);
        out.push(Sentence {
            text: text[bytes.clone()].to_owned(),
            chars: start..end,
            bytes,
        });
    };

    let mut start: Option<usize> = None;
    for (ci, &(_, c)) in chars.iter().enumerate() {
        if start.is_none() {
            if c.is_whitespace() {
                continue;
            }
            start = Some(ci);
        }
        let boundary = chars.get(ci + 1).map_or(true, |&(_, n)| n.is_whitespace());
        if is_terminator(c) && boundary {
            push(start.take().unwrap(), ci + 1);
        }
    }
    if let Some(s) = start {
        let mut end = chars.len();
        while end > s && chars[end - 1].1.is_whitespace() {
            end -= 1;
        }
        push(s, end);
    }
    out
}

/// The searchable text of a document: title and body joined by a newline,
/// with the title always closing its own sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentText {
    pub text: String,
    pub sentences: Vec<Sentence>,
}

impl DocumentText {
    pub fn new(title: &str, body: &str) -> Self {
        let mut sentences = segment_sentences(title);
        if title.is_empty() {
            return DocumentText {
                text: body.to_owned(),
                sentences: segment_sentences(body),
            };
        }
        if body.is_empty() {
            return DocumentText {
                text: title.to_owned(),
                sentences,
            };
        }
        let char_offset = title.chars().count() + 1;
        let byte_offset = title.len() + 1;
        sentences.extend(segment_sentences(body).into_iter().map(|s| Sentence {
            text: s.text,
            chars: s.chars.start + char_offset..s.chars.end + char_offset,
            bytes: s.bytes.start + byte_offset..s.bytes.end + byte_offset,
        }));
        DocumentText {
            text: format!("{title}\n{body}"),
            sentences,
        }
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }

    /// Index of the sentence fully containing the character range.
    pub fn sentence_of(&self, span: &Range<usize>) -> Option<usize> {
        self.sentences
            .iter()
            .position(|s| s.chars.start <= span.start && span.end <= s.chars.end)
    }
}
