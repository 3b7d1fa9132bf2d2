//! Name and affiliation normalization.
//!
//! Both normalizers are idempotent: feeding a normalized key back in returns
//! the same key. Author keys have the shape `"surname, i.n."`; affiliation
//! keys are lower-case words separated by single spaces.

use std::collections::BTreeMap;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("author name {0:?} is empty after normalization")]
    EmptyAuthor(String),
    #[error("affiliation {0:?} is empty after normalization")]
    EmptyAffiliation(String),
}

/// Lower-case and strip diacritics.
fn fold(raw: &str) -> String {
    let lowered: String = raw.chars().flat_map(char::to_lowercase).collect();
    let stripped: String = lowered.nfd().filter(|c| !is_combining_mark(*c)).collect();
    // A second lowercase pass catches the rare characters whose decomposition
    // yields an upper-case base letter.
    stripped.chars().flat_map(char::to_lowercase).collect()
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn is_name_separator(c: char) -> bool {
    c.is_whitespace() || c == '.' || c == ',' || c == '-'
}

fn trim_surname(s: &str) -> String {
    collapse_whitespace(s.trim_matches(|c: char| c.is_whitespace() || c == '.' || c == ','))
}

fn initials<'a>(given: impl Iterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for token in given {
        if let Some(c) = token.chars().find(|c| c.is_alphanumeric()) {
            out.push(c);
            out.push('.');
        }
    }
    out
}

/// Normalize a display name to `"surname, initials"`.
///
/// Accepts both `"Given Middle Surname"` and `"Surname, Given"` orderings.
pub fn normalize_author(raw_name: &str) -> Result<String, NormalizeError> {
    let folded = fold(raw_name);
    let (surname, given) = match folded.split_once(',') {
        Some((surname, given)) => {
            let tokens: Vec<&str> = given.split(is_name_separator).filter(|t| !t.is_empty()).collect();
            (trim_surname(surname), initials(tokens.into_iter()))
        }
        None => {
            let tokens: Vec<&str> = folded.split_whitespace().collect();
            match tokens.split_last() {
                Some((last, rest)) => {
                    let given = rest
                        .iter()
                        .flat_map(|t| t.split(is_name_separator))
                        .filter(|t| !t.is_empty());
                    (trim_surname(last), initials(given))
                }
                None => (String::new(), String::new()),
            }
        }
    };
    if !surname.chars().any(char::is_alphanumeric) {
        return Err(NormalizeError::EmptyAuthor(raw_name.to_string()));
    }
    if given.is_empty() && surname.contains(' ') {
        // Keep the comma so a multi-word surname is not re-split.
        Ok(format!("{surname},"))
    } else if given.is_empty() {
        Ok(surname)
    } else {
        Ok(format!("{surname}, {given}"))
    }
}

/// Normalize an institution string: case-fold, drop punctuation, collapse
/// whitespace.
pub fn normalize_affiliation_raw(raw: &str) -> Result<String, NormalizeError> {
    let folded = fold(raw);
    let kept: String = folded
        .chars()
        .map(|c| if c.is_whitespace() { ' ' } else { c })
        .filter(|c| c.is_alphanumeric() || *c == ' ')
        .collect();
    let key = collapse_whitespace(&kept);
    if key.is_empty() {
        Err(NormalizeError::EmptyAffiliation(raw.to_string()))
    } else {
        Ok(key)
    }
}

/// Maps normalized keys to canonical keys. Both sides are normalized on
/// insertion so lookups compose with the normalizers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasTable {
    map: BTreeMap<String, String>,
}

impl AliasTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build an affiliation alias table from raw `from -> to` entries.
    pub fn for_affiliations<I, K, V>(entries: I) -> Result<Self, NormalizeError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            map.insert(
                normalize_affiliation_raw(k.as_ref())?,
                normalize_affiliation_raw(v.as_ref())?,
            );
        }
        Ok(Self { map })
    }

    /// Build an author alias table from raw `from -> to` entries.
    pub fn for_authors<I, K, V>(entries: I) -> Result<Self, NormalizeError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            map.insert(normalize_author(k.as_ref())?, normalize_author(v.as_ref())?);
        }
        Ok(Self { map })
    }

    /// Parse a JSON object of `from -> to` affiliation aliases.
    pub fn affiliations_from_json(text: &str) -> Result<Self, AliasFileError> {
        let raw: BTreeMap<String, String> = serde_json::from_str(text)?;
        Ok(Self::for_affiliations(raw)?)
    }

    /// Parse a JSON object of `from -> to` author aliases.
    pub fn authors_from_json(text: &str) -> Result<Self, AliasFileError> {
        let raw: BTreeMap<String, String> = serde_json::from_str(text)?;
        Ok(Self::for_authors(raw)?)
    }

    pub fn resolve(&self, key: String) -> String {
        match self.map.get(&key) {
            Some(canonical) => canonical.clone(),
            None => key,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AliasFileError {
    #[error("alias file is not a JSON object of strings: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

/// Normalize an affiliation and apply the alias table.
pub fn normalize_affiliation(raw: &str, aliases: &AliasTable) -> Result<String, NormalizeError> {
    normalize_affiliation_raw(raw).map(|k| aliases.resolve(k))
}
