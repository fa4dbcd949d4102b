//! Builders for the standard diagrams and the two gluing operations.

use super::{CupColor, Generator, RibbonDiagram, Token};
use crate::error::{Error, Result};
use crate::fusion::Sign;
use crate::tqft2::types::{DecoratedType, Entry};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Variable name of the `k`-th (1-based) side band.
pub fn side_name(side: Side, k: usize) -> String {
    match side {
        Side::Left => format!("L{k}"),
        Side::Right => format!("R{k}"),
    }
}

pub fn is_side_name(name: &str) -> bool {
    let mut ch = name.chars();
    matches!(ch.next(), Some('L' | 'R'))
        && !name[1..].is_empty()
        && name[1..].chars().all(|c| c.is_ascii_digit())
}

/// Variable name of the rainbow band at nesting depth `depth` (1 = outermost)
/// of entry `entry` (1-based).
pub fn rainbow_name(prefix: &str, entry: usize, depth: usize) -> String {
    format!("{prefix}{entry}.{depth}")
}

fn entry_tokens(t: &DecoratedType, prefix: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (e, entry) in t.entries.iter().enumerate() {
        match entry {
            Entry::Int(a) => {
                for k in 1..=*a {
                    out.push(Token::var(&rainbow_name(prefix, e + 1, k), Sign::Plus));
                }
                for k in (1..=*a).rev() {
                    out.push(Token::var(&rainbow_name(prefix, e + 1, k), Sign::Minus));
                }
            }
            Entry::Mark { label, sign } => out.push(Token::color(label, *sign)),
        }
    }
    out
}

/// Boundary tokens `L1- .. Lm-, Phi(t), Rn+ .. R1+` with side bands left as variables.
pub fn type_boundary(t: &DecoratedType, prefix: &str) -> Vec<Token> {
    let mut out: Vec<Token> = (1..=t.m)
        .map(|k| Token::var(&side_name(Side::Left, k), Sign::Minus))
        .collect();
    out.extend(entry_tokens(t, prefix));
    out.extend((1..=t.n).rev().map(|k| Token::var(&side_name(Side::Right, k), Sign::Plus)));
    out
}

/// The half diagram `R_t(i, j)`: identity on `Phi(t; zeta; i, j)` with the side
/// bands colored by `i` and `j` and the rainbow bands left open.
pub fn build_rt(t: &DecoratedType, i: &[String], j: &[String]) -> Result<RibbonDiagram> {
    if i.len() != t.m {
        return Err(Error::IndexArityMismatch {
            expected: t.m,
            got: i.len(),
        });
    }
    if j.len() != t.n {
        return Err(Error::IndexArityMismatch {
            expected: t.n,
            got: j.len(),
        });
    }
    let mut tokens: Vec<Token> = i.iter().map(|l| Token::color(l, Sign::Minus)).collect();
    tokens.extend(entry_tokens(t, "z"));
    tokens.extend(j.iter().rev().map(|l| Token::color(l, Sign::Plus)));
    Ok(RibbonDiagram::identity(tokens))
}

/// Slices of a surgery ring around the strands at `p, p+1` (0-based).
pub fn ring_slices(p: usize, name: &str) -> Vec<Generator> {
    let a = CupColor::Surgery(name.to_string());
    vec![
        Generator::cup(p, a.clone()),
        Generator::braid(p + 1, true),
        Generator::braid(p + 2, true),
        Generator::braid(p, false),
        Generator::braid(p + 1, false),
        Generator::cap(p + 2, a),
    ]
}

/// A 0-framed surgery ring `?name` around two strands.
pub fn build_ring(x: Token, y: Token, name: &str) -> Result<RibbonDiagram> {
    RibbonDiagram::new(vec![x, y], ring_slices(0, name))
}

/// Slices of `omega_n` acting on `2n` strands starting at `offset`. The bottom
/// bands are named by depth in `bottom`, the top bands in `top`.
fn omega_slices(
    n: usize,
    offset: usize,
    bottom: &[String],
    top: &[String],
    ring_prefix: &str,
) -> Vec<Generator> {
    let mut out = Vec::new();
    for r in 1..=n {
        let u = &bottom[n - r];
        let w = &top[n - r];
        let p = offset + n - r;
        let q = p + 2 * r - 1;
        out.push(Generator::cup(q + 1, CupColor::Var(w.clone())));
        out.extend(ring_slices(q, &format!("{ring_prefix}{r}")));
        for s in (p + 1..q).rev() {
            out.push(Generator::braid(s, false));
        }
        out.push(Generator::cap(p, CupColor::Var(u.clone())));
        if r >= 2 {
            for s in (p..=p + 2 * r - 3).rev() {
                out.push(Generator::braid(s, false));
            }
        }
    }
    out
}

fn names(prefix: &str, entry: usize, n: usize) -> Vec<String> {
    (1..=n).map(|k| rainbow_name(prefix, entry, k)).collect()
}

/// The gluing graph `omega_n` on the type `(0,0; n)`: bottom bands `u`, top
/// bands `w`, and `n` rings `a1..an`.
pub fn build_omega(n: usize) -> RibbonDiagram {
    let t = DecoratedType::closed(if n == 0 { vec![] } else { vec![Entry::Int(n)] });
    let bottom = entry_tokens(&t, "u");
    let slices = omega_slices(n, 0, &names("u", 1, n), &names("w", 1, n), "a");
    RibbonDiagram::new(bottom, slices).expect("omega is well formed")
}

/// Surgery presentation of the cylinder over `t`: side and mark strands run
/// straight and each integer entry `a` carries `omega_a`.
pub fn build_cylinder(t: &DecoratedType) -> RibbonDiagram {
    let bottom = type_boundary(t, "u");
    let mut slices = Vec::new();
    let mut offset = t.m;
    for (e, entry) in t.entries.iter().enumerate() {
        match entry {
            Entry::Int(a) => {
                slices.extend(omega_slices(
                    *a,
                    offset,
                    &names("u", e + 1, *a),
                    &names("w", e + 1, *a),
                    &format!("c{}.", e + 1),
                ));
                offset += 2 * a;
            }
            Entry::Mark { .. } => offset += 1,
        }
    }
    let d = RibbonDiagram::new(bottom, slices).expect("cylinder is well formed");
    debug_assert_eq!(d.top, type_boundary(t, "w"));
    d
}

/// Applies `f` to every token and every cup/cap color of a diagram.
pub(crate) fn map_tokens(d: &RibbonDiagram, f: &dyn Fn(&Token) -> Token) -> RibbonDiagram {
    let col = |c: &CupColor| f(&c.token(Sign::Plus)).base();
    let slices = d
        .slices
        .iter()
        .map(|g| match g {
            Generator::Cup { pos, color } => Generator::Cup {
                pos: *pos,
                color: col(color),
            },
            Generator::Cap { pos, color } => Generator::Cap {
                pos: *pos,
                color: col(color),
            },
            Generator::Coupon {
                pos,
                label,
                inputs,
                outputs,
            } => Generator::Coupon {
                pos: *pos,
                label: label.clone(),
                inputs: *inputs,
                outputs: outputs.iter().map(f).collect(),
            },
            other => other.clone(),
        })
        .collect();
    RibbonDiagram {
        bottom: d.bottom.iter().map(f).collect(),
        slices,
        top: d.top.iter().map(f).collect(),
    }
}

/// Prefixes surgery names and non-side variable names.
fn prefix_internal(d: &RibbonDiagram, prefix: &str) -> RibbonDiagram {
    map_tokens(d, &|t| match t {
        Token::Surgery { name, sign } => Token::surgery(&format!("{prefix}{name}"), *sign),
        Token::Var { name, sign } if !is_side_name(name) => {
            Token::var(&format!("{prefix}{name}"), *sign)
        }
        other => other.clone(),
    })
}

/// Stacks `upper` on top of `lower`. Rainbow variables on the shared
/// boundary are identified by position; the ones that do not reach the outer
/// boundary close up into new surgery components.
pub fn vertical_concat(lower: &RibbonDiagram, upper: &RibbonDiagram) -> Result<RibbonDiagram> {
    if lower.top.len() != upper.bottom.len() {
        return Err(Error::BoundaryTypeMismatch(format!(
            "{} strands meet {} strands",
            lower.top.len(),
            upper.bottom.len()
        )));
    }
    let d1 = prefix_internal(lower, "a.");
    let d2 = prefix_internal(upper, "b.");
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    for (k, (t1, t2)) in d1.top.iter().zip(&d2.bottom).enumerate() {
        let ok = match (t1, t2) {
            (Token::Var { name: n1, sign: s1 }, Token::Var { name: n2, sign: s2 })
                if !is_side_name(n1) && !is_side_name(n2) =>
            {
                s1 == s2 && rename.insert(n2.clone(), n1.clone()).is_none_or(|old| old == *n1)
            }
            (a, b) => a == b,
        };
        if !ok {
            return Err(Error::BoundaryTypeMismatch(format!(
                "strand {}: {t1} meets {t2}",
                k + 1
            )));
        }
    }
    let targets: BTreeSet<&String> = rename.values().collect();
    if targets.len() != rename.len() {
        return Err(Error::BoundaryTypeMismatch("rainbow bands pair inconsistently".into()));
    }
    let d2 = map_tokens(&d2, &|t| match t {
        Token::Var { name, sign } => match rename.get(name) {
            Some(n1) => Token::var(n1, *sign),
            None => t.clone(),
        },
        other => other.clone(),
    });
    let outer: BTreeSet<String> = d1
        .bottom
        .iter()
        .chain(&d2.top)
        .filter_map(|t| t.var_name().map(str::to_string))
        .collect();
    let middle: BTreeSet<String> = d1
        .top
        .iter()
        .filter_map(|t| t.var_name())
        .filter(|n| !is_side_name(n) && !outer.contains(*n))
        .map(str::to_string)
        .collect();
    let mut slices = d1.slices.clone();
    slices.extend(d2.slices.iter().cloned());
    let joined = RibbonDiagram {
        bottom: d1.bottom.clone(),
        slices,
        top: d2.top.clone(),
    };
    let joined = map_tokens(&joined, &|t| match t {
        Token::Var { name, sign } if middle.contains(name) => Token::surgery(name, *sign),
        other => other.clone(),
    });
    joined.validate()?;
    Ok(joined)
}

/// Removes the first (`leftmost == true`) or last bottom strand, which must run
/// straight to the same end of the top without touching any generator.
fn remove_band(d: &RibbonDiagram, leftmost: bool) -> Result<RibbonDiagram> {
    let width = d.bottom.len();
    if width == 0 {
        return Err(Error::TangledBoundaryBand("no band to remove".into()));
    }
    let band_token = if leftmost { &d.bottom[0] } else { &d.bottom[width - 1] };
    let mut band = if leftmost { 0 } else { width - 1 };
    let mut len = width;
    let mut slices = Vec::with_capacity(d.slices.len());
    let tangled = |i: usize| {
        Error::TangledBoundaryBand(format!("band {band_token} meets slice {}", i + 1))
    };
    for (i, g) in d.slices.iter().enumerate() {
        let (pos, n_in, n_out) = match g {
            Generator::Identity => {
                slices.push(Generator::Identity);
                continue;
            }
            Generator::Braid { pos, .. } => (*pos, 2, 2),
            Generator::Twist { pos, .. } => (*pos, 1, 1),
            Generator::Cup { pos, .. } => (*pos, 0, 2),
            Generator::Cap { pos, .. } => (*pos, 2, 0),
            Generator::Coupon {
                pos,
                inputs,
                outputs,
                ..
            } => (*pos, *inputs, outputs.len()),
        };
        if band >= pos && band < pos + n_in {
            return Err(tangled(i));
        }
        if band < pos {
            slices.push(g.shifted(-1));
        } else {
            slices.push(g.clone());
            band = band + n_out - n_in;
        }
        len = len + n_out - n_in;
    }
    let end_ok = if leftmost { band == 0 } else { band + 1 == len };
    if !end_ok {
        return Err(Error::TangledBoundaryBand(format!(
            "band {band_token} does not end at the boundary"
        )));
    }
    let mut bottom = d.bottom.clone();
    let mut top = d.top.clone();
    if leftmost {
        bottom.remove(0);
        top.remove(0);
    } else {
        bottom.pop();
        top.pop();
    }
    Ok(RibbonDiagram {
        bottom,
        slices,
        top,
    })
}

/// Horizontal gluing along `m` shared side bands: the last right band of
/// `left` and the first left band of `right` are removed and `omega_{m-1}`
/// is inserted below the remaining `2(m-1)` middle bands.
pub fn horizontal_assemble(
    left: &RibbonDiagram,
    right: &RibbonDiagram,
    m: usize,
) -> Result<RibbonDiagram> {
    if m == 0 {
        return Err(Error::TangledBoundaryBand("gluing needs at least one band".into()));
    }
    let expect = |d: &RibbonDiagram, is_left: bool| -> Result<()> {
        let len = d.bottom.len();
        if len < m {
            return Err(Error::BoundaryTypeMismatch("too few side bands".into()));
        }
        for k in 1..=m {
            let top_len = d.top.len();
            let (idx, top_idx, want) = if is_left {
                let want = Token::var(&side_name(Side::Right, k), Sign::Plus);
                (len - k, top_len.checked_sub(k), want)
            } else {
                (k - 1, Some(k - 1), Token::var(&side_name(Side::Left, k), Sign::Minus))
            };
            if d.bottom[idx] != want || top_idx.and_then(|i| d.top.get(i)) != Some(&want) {
                return Err(Error::BoundaryTypeMismatch(format!("expected side band {want}")));
            }
        }
        Ok(())
    };
    expect(left, true)?;
    expect(right, false)?;
    let d1 = prefix_internal(&remove_band(left, false)?, "a.");
    let d2 = prefix_internal(&remove_band(right, true)?, "b.");
    let mid = m - 1;
    let bottom_names: Vec<String> = (1..=mid).map(|k| format!("h.u{k}")).collect();
    let top_names: Vec<String> = (1..=mid).map(|k| format!("h.w{k}")).collect();
    // R_k of the left piece and L_k of the right piece become the band of depth m-k+1
    let d1 = map_tokens(&d1, &|t| match t {
        Token::Var { name, sign } if name.starts_with('R') && is_side_name(name) => {
            let k: usize = name[1..].parse().unwrap_or(0);
            if (2..=m).contains(&k) {
                Token::var(&top_names[m - k], *sign)
            } else {
                t.clone()
            }
        }
        other => other.clone(),
    });
    let d2 = map_tokens(&d2, &|t| match t {
        Token::Var { name, sign } if name.starts_with('L') && is_side_name(name) => {
            let k: usize = name[1..].parse().unwrap_or(0);
            if (2..=m).contains(&k) {
                Token::var(&top_names[m - k], *sign)
            } else {
                t.clone()
            }
        }
        other => other.clone(),
    });
    let w1 = d1.bottom.len();
    let offset = w1 - mid;
    let mut bottom: Vec<Token> = d1.bottom[..offset].to_vec();
    for k in 1..=mid {
        bottom.push(Token::var(&bottom_names[k - 1], Sign::Plus));
    }
    for k in (1..=mid).rev() {
        bottom.push(Token::var(&bottom_names[k - 1], Sign::Minus));
    }
    bottom.extend(d2.bottom[mid..].iter().cloned());
    let mut slices = omega_slices(mid, offset, &bottom_names, &top_names, "h.a");
    slices.extend(d1.slices.iter().cloned());
    let shift = d1.top.len() as isize;
    slices.extend(d2.slices.iter().map(|g| g.shifted(shift)));
    let mut top = d1.top.clone();
    top.extend(d2.top.iter().cloned());
    let glued = RibbonDiagram {
        bottom,
        slices,
        top,
    };
    glued.validate()?;
    Ok(glued)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> DecoratedType {
        s.parse().unwrap()
    }

    #[test]
    fn rt_shapes() {
        assert!(build_rt(&ty("(0,0;)"), &[], &[]).unwrap().bottom.is_empty());
        let d = build_rt(&ty("(1,1;)"), &["tau".into()], &["tau".into()]).unwrap();
        assert_eq!(d.bottom, vec![Token::color("tau", Sign::Minus), Token::color("tau", Sign::Plus)]);
        let d = build_rt(&ty("(0,0;1)"), &[], &[]).unwrap();
        assert_eq!(d.bottom.len(), 2);
        assert!(matches!(
            build_rt(&ty("(1,1;)"), &[], &["tau".into()]),
            Err(Error::IndexArityMismatch { .. })
        ));
    }

    #[test]
    fn omega_shapes() {
        assert!(build_omega(0).bottom.is_empty());
        for n in 1..=3 {
            let d = build_omega(n);
            assert_eq!(d.bottom.len(), 2 * n);
            assert_eq!(d.top.len(), 2 * n);
            let rings: BTreeSet<_> = d
                .slices
                .iter()
                .filter_map(|g| match g {
                    Generator::Cup { color: CupColor::Surgery(s), .. } => Some(s.clone()),
                    _ => None,
                })
                .collect();
            assert_eq!(rings.len(), n);
        }
    }

    #[test]
    fn cylinder_top_matches_type() {
        let t = ty("(1,2; 2, tau+, 1)");
        let d = build_cylinder(&t);
        assert_eq!(d.top, type_boundary(&t, "w"));
    }

    #[test]
    fn gluing_two_plain_cylinders() {
        let c = build_cylinder(&ty("(1,1;)"));
        let g = horizontal_assemble(&c, &c, 1).unwrap();
        assert_eq!(g.bottom.len(), 2);
        assert_eq!(g.bottom, type_boundary(&ty("(1,1;0)"), "u"));
    }

    #[test]
    fn ring_on_band_is_tangled() {
        let c = build_cylinder(&ty("(1,1;)"));
        let mut ringed = c.clone();
        ringed.slices = ring_slices(0, "A");
        assert!(matches!(
            horizontal_assemble(&c, &ringed, 1),
            Err(Error::TangledBoundaryBand(_))
        ));
    }

    #[test]
    fn identity_stacking() {
        let c = build_cylinder(&ty("(1,1; 1)"));
        let id = RibbonDiagram::identity(c.top.clone());
        let s = vertical_concat(&c, &id).unwrap();
        assert_eq!(s.slices, prefix_internal(&c, "a.").slices);
        let bad = RibbonDiagram::identity(vec![Token::color("x", Sign::Plus)]);
        assert!(matches!(vertical_concat(&c, &bad), Err(Error::BoundaryTypeMismatch(_))));
    }
}
