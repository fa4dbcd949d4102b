use super::{step_tokens, CupColor, Generator, RibbonDiagram, Token};
use crate::error::{Error, Result};
use crate::fusion::Sign;

/// Parses the line-oriented diagram format.
///
/// ```text
/// bottom: tau+ $v1+ $v1-
/// slice braid+ @1; twist- @2
/// slice cup[?A] @1
/// top: ...
/// ```
/// Several generators on one `slice` line are applied left to right.
pub fn parse_diagram(text: &str) -> Result<RibbonDiagram> {
    let mut bottom: Option<Vec<Token>> = None;
    let mut top: Option<(usize, Vec<Token>)> = None;
    let mut slices = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let words = words(line);
        let (col0, first) = words[0];
        if top.is_some() {
            return Err(Error::parse_at(line_no, col0, "nothing may follow the top line"));
        }
        if let Some(rest) = first.strip_prefix("bottom:") {
            if bottom.is_some() || !slices.is_empty() {
                return Err(Error::parse_at(line_no, col0, "bottom must come first, once"));
            }
            let toks = boundary_tokens(line_no, rest, col0 + 7, &words[1..])?;
            tokens = toks.clone();
            bottom = Some(toks);
        } else if let Some(rest) = first.strip_prefix("top:") {
            let toks = boundary_tokens(line_no, rest, col0 + 4, &words[1..])?;
            top = Some((line_no, toks));
        } else if first == "slice" {
            if bottom.is_none() {
                bottom = Some(Vec::new());
            }
            let body_col = words.get(1).map_or(col0 + 5, |w| w.0);
            let body = &line[(body_col - 1).min(line.len())..];
            let mut off = body_col;
            for part in body.split(';') {
                let lead = part.len() - part.trim_start().len();
                if !part.trim().is_empty() {
                    let g = parse_generator(line_no, off + lead, part.trim(), &tokens)?;
                    step_tokens(&mut tokens, &g, slices.len())?;
                    slices.push(g);
                }
                off += part.len() + 1;
            }
        } else {
            return Err(Error::parse_at(
                line_no,
                col0,
                format!("expected 'bottom:', 'slice' or 'top:', found '{first}'"),
            ));
        }
    }
    let bottom = bottom.unwrap_or_default();
    let diagram = match top {
        Some((line_no, declared)) => {
            if declared != tokens {
                return Err(Error::StrandCount {
                    slice: slices.len(),
                    message: format!(
                        "line {line_no}: top is [{}] but the slices end in [{}]",
                        super::join(&declared),
                        super::join(&tokens)
                    ),
                });
            }
            RibbonDiagram {
                bottom,
                slices,
                top: declared,
            }
        }
        None => RibbonDiagram {
            bottom,
            slices,
            top: tokens,
        },
    };
    diagram.validate()?;
    Ok(diagram)
}

fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn boundary_tokens(
    line: usize,
    glued: &str,
    glued_col: usize,
    rest: &[(usize, &str)],
) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    if !glued.is_empty() {
        out.push(parse_token(line, glued_col, glued)?);
    }
    for &(col, w) in rest {
        out.push(parse_token(line, col, w)?);
    }
    Ok(out)
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '.' || c == '\'')
}

pub(crate) fn parse_token(line: usize, col: usize, w: &str) -> Result<Token> {
    let sign = match w.chars().last() {
        Some('+') => Sign::Plus,
        Some('-') => Sign::Minus,
        _ => {
            return Err(Error::parse_at(
                line,
                col,
                format!("strand token '{w}' must end in + or -"),
            ))
        }
    };
    let body = &w[..w.len() - 1];
    let (kind, name) = match body.chars().next() {
        Some('$') => ('$', &body[1..]),
        Some('?') => ('?', &body[1..]),
        _ => (' ', body),
    };
    if !valid_name(name) {
        return Err(Error::parse_at(line, col, format!("bad strand name in '{w}'")));
    }
    Ok(match kind {
        '$' => Token::var(name, sign),
        '?' => Token::surgery(name, sign),
        _ => Token::color(name, sign),
    })
}

fn parse_color(line: usize, col: usize, s: &str) -> Result<CupColor> {
    let (kind, name) = match s.chars().next() {
        Some('$') => ('$', &s[1..]),
        Some('?') => ('?', &s[1..]),
        _ => (' ', s),
    };
    if !valid_name(name) {
        return Err(Error::parse_at(line, col, format!("bad color '{s}'")));
    }
    Ok(match kind {
        '$' => CupColor::Var(name.into()),
        '?' => CupColor::Surgery(name.into()),
        _ => CupColor::Color(name.into()),
    })
}

fn parse_pos(line: usize, col: usize, s: Option<&(usize, &str)>) -> Result<usize> {
    let Some(&(c, w)) = s else {
        return Err(Error::parse_at(line, col, "missing position '@p'"));
    };
    let p = w
        .strip_prefix('@')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&p| p >= 1)
        .ok_or_else(|| Error::parse_at(line, c, format!("bad position '{w}'")))?;
    Ok(p - 1)
}

fn parse_generator(line: usize, col: usize, text: &str, current: &[Token]) -> Result<Generator> {
    let ws: Vec<(usize, &str)> = words(text)
        .into_iter()
        .map(|(c, w)| (c + col - 1, w))
        .collect();
    let (c0, head) = ws[0];
    let bracket = |prefix: &str| -> Option<Result<&str>> {
        let rest = head.strip_prefix(prefix)?;
        Some(
            rest.strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::parse_at(line, c0, format!("expected {prefix}[...]"))),
        )
    };
    let expect_len = |n: usize| -> Result<()> {
        if ws.len() != n {
            return Err(Error::parse_at(line, c0, format!("malformed generator '{text}'")));
        }
        Ok(())
    };
    let g = match head {
        "id" => {
            expect_len(1)?;
            Generator::Identity
        }
        "braid+" | "braid-" | "twist+" | "twist-" => {
            expect_len(2)?;
            let pos = parse_pos(line, c0, ws.get(1))?;
            let positive = head.ends_with('+');
            if head.starts_with("braid") {
                Generator::Braid { pos, positive }
            } else {
                Generator::Twist { pos, positive }
            }
        }
        _ => {
            if let Some(inner) = bracket("cup") {
                expect_len(2)?;
                let color = parse_color(line, c0 + 4, inner?)?;
                Generator::Cup {
                    pos: parse_pos(line, c0, ws.get(1))?,
                    color,
                }
            } else if let Some(inner) = bracket("cap") {
                expect_len(2)?;
                let color = parse_color(line, c0 + 4, inner?)?;
                Generator::Cap {
                    pos: parse_pos(line, c0, ws.get(1))?,
                    color,
                }
            } else if let Some(inner) = bracket("coupon") {
                let label = inner?.to_string();
                if !valid_name(&label) {
                    return Err(Error::parse_at(line, c0, "bad coupon label"));
                }
                let pos = parse_pos(line, c0, ws.get(1))?;
                let Some(&(ac, arity)) = ws.get(2) else {
                    return Err(Error::parse_at(line, c0, "coupon needs an arity 'n->m'"));
                };
                let (n, m) = arity
                    .split_once("->")
                    .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                    .ok_or_else(|| Error::parse_at(line, ac, format!("bad arity '{arity}'")))?;
                let outputs = match ws.get(3) {
                    Some(&(_, ":")) => ws[4..]
                        .iter()
                        .map(|&(c, w)| parse_token(line, c, w))
                        .collect::<Result<Vec<_>>>()?,
                    Some(&(c, w)) => {
                        return Err(Error::parse_at(line, c, format!("unexpected '{w}'")))
                    }
                    None if m == n && pos + n <= current.len() => current[pos..pos + n].to_vec(),
                    None if m == 0 => Vec::new(),
                    None => {
                        return Err(Error::parse_at(
                            line,
                            ac,
                            "coupon changing the strand count must list its outputs after ':'",
                        ))
                    }
                };
                if outputs.len() != m {
                    return Err(Error::parse_at(line, ac, "coupon output count differs from arity"));
                }
                Generator::Coupon {
                    pos,
                    label,
                    inputs: n,
                    outputs,
                }
            } else {
                return Err(Error::parse_at(line, c0, format!("unknown generator '{head}'")));
            }
        }
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_diagram() {
        let d = parse_diagram("bottom: tau+\ntop: tau+\n").unwrap();
        assert!(d.slices.is_empty());
        assert_eq!(d.top, vec![Token::color("tau", Sign::Plus)]);
    }

    #[test]
    fn closed_unknot() {
        let d = parse_diagram("bottom:\nslice cup[tau] @1; cap[tau] @1\ntop:\n").unwrap();
        assert_eq!(d.slices.len(), 2);
        assert!(d.top.is_empty());
    }

    #[test]
    fn surgery_escaping_top() {
        let e = parse_diagram("bottom:\nslice cup[?A] @1\n").unwrap_err();
        assert!(matches!(e, Error::UnclosedSurgeryComponent(_)), "{e:?}");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_diagram("bottom: tau+\nslice braid* @1\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 7)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_diagram("bottom: tau+\nslice braid+ @1\n"),
            Err(Error::StrandCount { .. })
        ));
        assert!(matches!(
            parse_diagram("bottom: tau+\ntop: tau-\n"),
            Err(Error::StrandCount { .. })
        ));
    }

    #[test]
    fn roundtrip_display() {
        let src = "bottom: a+ $v1+ $v1-\nslice braid+ @1\nslice cup[?A] @2\nslice cap[?A] @2\nslice twist- @3\ntop: $v1+ a+ $v1-\n";
        let d = parse_diagram(src).unwrap();
        assert_eq!(parse_diagram(&d.to_string()).unwrap(), d);
    }
}
