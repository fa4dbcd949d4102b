//! Decorated types `t = (m, n; a_1, ..., a_p)` and their composition.

use crate::error::{Error, Result};
use crate::fusion::Sign;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Entry {
    /// Genus contribution; `0` is allowed and carries the unit.
    Int(usize),
    /// A marked arc colored by a simple label with a sign.
    Mark { label: String, sign: Sign },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DecoratedType {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Entry>,
}

impl DecoratedType {
    pub fn new(m: usize, n: usize, entries: Vec<Entry>) -> Self {
        DecoratedType { m, n, entries }
    }

    pub fn closed(entries: Vec<Entry>) -> Self {
        DecoratedType::new(0, 0, entries)
    }

    /// Sum of the integer entries.
    pub fn genus(&self) -> usize {
        self.entries
            .iter()
            .map(|e| match e {
                Entry::Int(a) => *a,
                Entry::Mark { .. } => 0,
            })
            .sum()
    }
}

pub fn compose_types(t: &DecoratedType, s: &DecoratedType) -> Result<DecoratedType> {
    if t.n != s.m || t.n == 0 {
        return Err(Error::NotComposable(format!("{t} then {s}")));
    }
    let mut entries = t.entries.clone();
    entries.push(Entry::Int(t.n - 1));
    entries.extend(s.entries.iter().cloned());
    Ok(DecoratedType::new(t.m, s.n, entries))
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Int(a) => write!(f, "{a}"),
            Entry::Mark { label, sign } => write!(f, "({label},{})", sign.symbol()),
        }
    }
}

impl fmt::Display for DecoratedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};", self.m, self.n)?;
        for (i, e) in self.entries.iter().enumerate() {
            write!(f, "{}{e}", if i == 0 { " " } else { ", " })?;
        }
        write!(f, ")")
    }
}

impl FromStr for DecoratedType {
    type Err = Error;

    /// Accepts `(m,n; a1, (W,+), tau-, 2)`; marks are `(label,sign)` or `label+`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::parse(format!("type '{s}': {msg}"));
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| bad("expected parentheses"))?;
        let (head, tail) = body.split_once(';').ok_or_else(|| bad("expected ';'"))?;
        let (m, n) = head.split_once(',').ok_or_else(|| bad("expected 'm,n'"))?;
        let m = m.trim().parse().map_err(|_| bad("bad m"))?;
        let n = n.trim().parse().map_err(|_| bad("bad n"))?;
        let mut entries = Vec::new();
        let mut rest = tail.trim();
        while !rest.is_empty() {
            let (item, after) = if rest.starts_with('(') {
                let close = rest.find(')').ok_or_else(|| bad("unclosed mark"))?;
                (&rest[..=close], &rest[close + 1..])
            } else {
                match rest.find(',') {
                    Some(i) => (&rest[..i], &rest[i..]),
                    None => (rest, ""),
                }
            };
            entries.push(parse_entry(item.trim()).ok_or_else(|| bad("bad entry"))?);
            rest = after.trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(bad("trailing comma"));
                }
            } else if !rest.is_empty() {
                return Err(bad("expected ','"));
            }
        }
        Ok(DecoratedType::new(m, n, entries))
    }
}

fn parse_entry(item: &str) -> Option<Entry> {
    if let Ok(a) = item.parse::<usize>() {
        return Some(Entry::Int(a));
    }
    let sign_of = |c: &str| match c {
        "+" => Some(Sign::Plus),
        "-" => Some(Sign::Minus),
        _ => None,
    };
    if let Some(inner) = item.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
        let (l, sg) = inner.split_once(',')?;
        let label = l.trim();
        if label.is_empty() {
            return None;
        }
        return Some(Entry::Mark {
            label: label.to_string(),
            sign: sign_of(sg.trim())?,
        });
    }
    let (body, last) = item.split_at(item.len().checked_sub(1)?);
    if body.is_empty() || body.contains(|c: char| c.is_whitespace() || c == ',') {
        return None;
    }
    Some(Entry::Mark {
        label: body.to_string(),
        sign: sign_of(last)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> DecoratedType {
        s.parse().unwrap()
    }

    #[test]
    fn composition_examples() {
        assert_eq!(
            compose_types(&t("(2,3;(W,+))"), &t("(3,1; 2)")).unwrap(),
            t("(2,1; (W,+), 2, 2)")
        );
        assert_eq!(compose_types(&t("(1,1;)"), &t("(1,1;)")).unwrap(), t("(1,1; 0)"));
        assert!(matches!(
            compose_types(&t("(1,2;)"), &t("(3,1;)")),
            Err(Error::NotComposable(_))
        ));
    }

    #[test]
    fn parse_and_display() {
        let ty = t("(0,0; 1, tau-, (W,+))");
        assert_eq!(ty.entries.len(), 3);
        assert_eq!(ty.genus(), 1);
        assert_eq!(t(&ty.to_string()), ty);
        assert!("(0,0; 1,)".parse::<DecoratedType>().is_err());
        assert!("0,0;".parse::<DecoratedType>().is_err());
    }
}
