//! Ribbon diagrams as slice lists, their text format, and strand tracing.
//!
//! Strands are oriented: sign `+` points up, `-` points down. A strand
//! token is either a colored strand, an open variable `$name` colored at
//! evaluation time, or a surgery strand `?name` colored by the surgery sum.
//! Variables named `L<k>` and `R<k>` are the left and right side bands of a
//! decorated type; every other variable is a rainbow band.

mod build;
mod eval;
mod parse;

pub use build::{
    build_cylinder, build_omega, build_ring, build_rt, horizontal_assemble, is_side_name,
    rainbow_name, ring_slices, side_name, type_boundary, vertical_concat, Side,
};
pub use eval::{evaluate_f, evaluate_f0, Coloring};
pub use parse::parse_diagram;

use crate::error::{Error, Result};
use crate::fusion::Sign;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Color { label: String, sign: Sign },
    Var { name: String, sign: Sign },
    Surgery { name: String, sign: Sign },
}

impl Token {
    pub fn color(label: &str, sign: Sign) -> Token {
        Token::Color {
            label: label.to_string(),
            sign,
        }
    }

    pub fn var(name: &str, sign: Sign) -> Token {
        Token::Var {
            name: name.to_string(),
            sign,
        }
    }

    pub fn surgery(name: &str, sign: Sign) -> Token {
        Token::Surgery {
            name: name.to_string(),
            sign,
        }
    }

    pub fn sign(&self) -> Sign {
        match self {
            Token::Color { sign, .. } | Token::Var { sign, .. } | Token::Surgery { sign, .. } => {
                *sign
            }
        }
    }

    pub fn with_sign(&self, sign: Sign) -> Token {
        let mut t = self.clone();
        match &mut t {
            Token::Color { sign: s, .. } | Token::Var { sign: s, .. } | Token::Surgery { sign: s, .. } => {
                *s = sign
            }
        }
        t
    }

    /// Same strand ignoring orientation.
    pub fn same_strand(&self, other: &Token) -> bool {
        self.with_sign(Sign::Plus) == other.with_sign(Sign::Plus)
    }

    pub fn is_surgery(&self) -> bool {
        matches!(self, Token::Surgery { .. })
    }

    pub fn var_name(&self) -> Option<&str> {
        match self {
            Token::Var { name, .. } => Some(name),
            _ => None,
        }
    }

    pub fn base(&self) -> CupColor {
        match self {
            Token::Color { label, .. } => CupColor::Color(label.clone()),
            Token::Var { name, .. } => CupColor::Var(name.clone()),
            Token::Surgery { name, .. } => CupColor::Surgery(name.clone()),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Color { label, sign } => write!(f, "{label}{}", sign.symbol()),
            Token::Var { name, sign } => write!(f, "${name}{}", sign.symbol()),
            Token::Surgery { name, sign } => write!(f, "?{name}{}", sign.symbol()),
        }
    }
}

/// What a cup or cap is colored by.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CupColor {
    Color(String),
    Var(String),
    Surgery(String),
}

impl CupColor {
    pub fn token(&self, sign: Sign) -> Token {
        match self {
            CupColor::Color(l) => Token::color(l, sign),
            CupColor::Var(n) => Token::var(n, sign),
            CupColor::Surgery(n) => Token::surgery(n, sign),
        }
    }
}

impl fmt::Display for CupColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CupColor::Color(l) => write!(f, "{l}"),
            CupColor::Var(n) => write!(f, "${n}"),
            CupColor::Surgery(n) => write!(f, "?{n}"),
        }
    }
}

/// One slice. Positions are 0-based here and 1-based in the text format.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Identity,
    Braid { pos: usize, positive: bool },
    Twist { pos: usize, positive: bool },
    /// Inserts `(c+, c-)` before strand `pos`.
    Cup { pos: usize, color: CupColor },
    /// Closes strands `pos, pos+1`, either `(c-, c+)` or `(c+, c-)`.
    Cap { pos: usize, color: CupColor },
    /// Replaces `inputs` strands starting at `pos` by `outputs`.
    Coupon {
        pos: usize,
        label: String,
        inputs: usize,
        outputs: Vec<Token>,
    },
}

impl Generator {
    pub fn braid(pos: usize, positive: bool) -> Self {
        Generator::Braid { pos, positive }
    }

    pub fn twist(pos: usize, positive: bool) -> Self {
        Generator::Twist { pos, positive }
    }

    pub fn cup(pos: usize, color: CupColor) -> Self {
        Generator::Cup { pos, color }
    }

    pub fn cap(pos: usize, color: CupColor) -> Self {
        Generator::Cap { pos, color }
    }

    pub(crate) fn shifted(&self, by: isize) -> Generator {
        let mv = |p: usize| (p as isize + by) as usize;
        match self.clone() {
            Generator::Identity => Generator::Identity,
            Generator::Braid { pos, positive } => Generator::Braid { pos: mv(pos), positive },
            Generator::Twist { pos, positive } => Generator::Twist { pos: mv(pos), positive },
            Generator::Cup { pos, color } => Generator::Cup { pos: mv(pos), color },
            Generator::Cap { pos, color } => Generator::Cap { pos: mv(pos), color },
            Generator::Coupon {
                pos,
                label,
                inputs,
                outputs,
            } => Generator::Coupon {
                pos: mv(pos),
                label,
                inputs,
                outputs,
            },
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pm = |p: bool| if p { '+' } else { '-' };
        match self {
            Generator::Identity => write!(f, "id"),
            Generator::Braid { pos, positive } => write!(f, "braid{} @{}", pm(*positive), pos + 1),
            Generator::Twist { pos, positive } => write!(f, "twist{} @{}", pm(*positive), pos + 1),
            Generator::Cup { pos, color } => write!(f, "cup[{color}] @{}", pos + 1),
            Generator::Cap { pos, color } => write!(f, "cap[{color}] @{}", pos + 1),
            Generator::Coupon {
                pos,
                label,
                inputs,
                outputs,
            } => {
                write!(f, "coupon[{label}] @{} {inputs}->{}", pos + 1, outputs.len())?;
                if !outputs.is_empty() {
                    write!(f, " :")?;
                    for t in outputs {
                        write!(f, " {t}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RibbonDiagram {
    pub bottom: Vec<Token>,
    pub slices: Vec<Generator>,
    pub top: Vec<Token>,
}

impl fmt::Display for RibbonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bottom:")?;
        for t in &self.bottom {
            write!(f, " {t}")?;
        }
        writeln!(f)?;
        for g in &self.slices {
            writeln!(f, "slice {g}")?;
        }
        write!(f, "top:")?;
        for t in &self.top {
            write!(f, " {t}")?;
        }
        writeln!(f)
    }
}

/// Applies one generator to a token list, checking positions and colors.
pub(crate) fn step_tokens(tokens: &mut Vec<Token>, g: &Generator, slice: usize) -> Result<()> {
    let bad = |msg: String| Error::StrandCount {
        slice: slice + 1,
        message: msg,
    };
    let n = tokens.len();
    match g {
        Generator::Identity => {}
        Generator::Braid { pos, .. } => {
            if pos + 1 >= n {
                return Err(bad(format!("braid at {} needs two strands, have {n}", pos + 1)));
            }
            tokens.swap(*pos, pos + 1);
        }
        Generator::Twist { pos, .. } => {
            if *pos >= n {
                return Err(bad(format!("twist at {} but only {n} strands", pos + 1)));
            }
        }
        Generator::Cup { pos, color } => {
            if *pos > n {
                return Err(bad(format!("cup at {} but only {n} strands", pos + 1)));
            }
            tokens.insert(*pos, color.token(Sign::Minus));
            tokens.insert(*pos, color.token(Sign::Plus));
        }
        Generator::Cap { pos, color } => {
            if pos + 1 >= n {
                return Err(bad(format!("cap at {} needs two strands, have {n}", pos + 1)));
            }
            let (a, b) = (&tokens[*pos], &tokens[pos + 1]);
            if !a.same_strand(b) || a.sign() == b.sign() || a.base() != *color {
                return Err(bad(format!("cap[{color}] cannot close {a} {b}")));
            }
            tokens.drain(*pos..pos + 2);
        }
        Generator::Coupon {
            pos,
            inputs,
            outputs,
            ..
        } => {
            if pos + inputs > n {
                return Err(bad(format!("coupon at {} needs {inputs} strands", pos + 1)));
            }
            tokens.splice(*pos..pos + inputs, outputs.iter().cloned());
        }
    }
    Ok(())
}

/// Result of threading strand identities through the slices.
#[derive(Clone, Debug, Default)]
pub struct StrandTrace {
    /// Component representative for every arc id.
    pub component_of: Vec<usize>,
    /// Token carried by each arc.
    pub arc_token: Vec<Token>,
    /// Arcs meeting the bottom or top boundary.
    pub open_arcs: Vec<usize>,
    /// `(arc, arc, sign)` for every crossing.
    pub crossings: Vec<(usize, usize, i64)>,
    /// `(arc, +1 | -1)` for every twist.
    pub twists: Vec<(usize, i64)>,
    /// Arc ids of the top strands, left to right.
    pub top_arcs: Vec<usize>,
    /// Arc ids of the bottom strands, left to right.
    pub bottom_arcs: Vec<usize>,
    /// For each slice, the arc ids it touches.
    pub touched: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let nx = parent[y];
        parent[y] = r;
        y = nx;
    }
    r
}

impl RibbonDiagram {
    pub fn new(bottom: Vec<Token>, slices: Vec<Generator>) -> Result<Self> {
        let mut d = RibbonDiagram {
            bottom,
            slices,
            top: Vec::new(),
        };
        d.top = d.simulate()?;
        d.check_surgery()?;
        Ok(d)
    }

    pub fn identity(tokens: Vec<Token>) -> Self {
        RibbonDiagram {
            bottom: tokens.clone(),
            slices: Vec::new(),
            top: tokens,
        }
    }

    /// Token list after all slices.
    pub fn simulate(&self) -> Result<Vec<Token>> {
        let mut tokens = self.bottom.clone();
        for (i, g) in self.slices.iter().enumerate() {
            step_tokens(&mut tokens, g, i)?;
        }
        Ok(tokens)
    }

    /// Checks strand bookkeeping, the declared top and surgery closure.
    pub fn validate(&self) -> Result<()> {
        let top = self.simulate()?;
        if top != self.top {
            return Err(Error::StrandCount {
                slice: self.slices.len(),
                message: format!(
                    "top boundary is [{}], declared [{}]",
                    join(&top),
                    join(&self.top)
                ),
            });
        }
        self.check_surgery()
    }

    fn check_surgery(&self) -> Result<()> {
        for t in self.bottom.iter().chain(&self.top) {
            if let Token::Surgery { name, .. } = t {
                return Err(Error::UnclosedSurgeryComponent(name.clone()));
            }
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.bottom.len()
    }

    /// Threads arc identities through the diagram with union-find on caps.
    pub fn trace(&self) -> Result<StrandTrace> {
        let mut tr = StrandTrace::default();
        let mut parent: Vec<usize> = Vec::new();
        let mut slots: Vec<usize> = Vec::new();
        let mut tokens = self.bottom.clone();
        for t in &self.bottom {
            let id = parent.len();
            parent.push(id);
            tr.arc_token.push(t.clone());
            slots.push(id);
            tr.open_arcs.push(id);
        }
        tr.bottom_arcs = slots.clone();
        for (i, g) in self.slices.iter().enumerate() {
            let mut touched = Vec::new();
            match g {
                Generator::Identity => {}
                Generator::Braid { pos, positive } => {
                    if pos + 1 < slots.len() {
                        let (a, b) = (slots[*pos], slots[pos + 1]);
                        let same = tokens[*pos].sign() == tokens[pos + 1].sign();
                        let s = if *positive { 1 } else { -1 } * if same { 1 } else { -1 };
                        tr.crossings.push((a, b, s));
                        slots.swap(*pos, pos + 1);
                        touched = vec![a, b];
                    }
                }
                Generator::Twist { pos, positive } => {
                    if let Some(&a) = slots.get(*pos) {
                        tr.twists.push((a, if *positive { 1 } else { -1 }));
                        touched = vec![a];
                    }
                }
                Generator::Cup { pos, color } => {
                    let id = parent.len();
                    parent.push(id);
                    tr.arc_token.push(color.token(Sign::Plus));
                    if *pos <= slots.len() {
                        slots.insert(*pos, id);
                        slots.insert(*pos, id);
                    }
                    touched = vec![id];
                }
                Generator::Cap { pos, .. } => {
                    if pos + 1 < slots.len() {
                        let (a, b) = (slots[*pos], slots[pos + 1]);
                        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                        parent[ra] = rb;
                        slots.drain(*pos..pos + 2);
                        touched = vec![a, b];
                    }
                }
                Generator::Coupon {
                    pos,
                    inputs,
                    outputs,
                    ..
                } => {
                    // a coupon joins everything attached to it into one component
                    let end = (pos + inputs).min(slots.len());
                    let ins: Vec<usize> = slots.drain(*pos..end).collect();
                    let hub = parent.len();
                    parent.push(hub);
                    tr.arc_token.push(Token::color("coupon", Sign::Plus));
                    for &a in &ins {
                        let ra = find(&mut parent, a);
                        parent[ra] = hub;
                    }
                    let mut outs = Vec::new();
                    for t in outputs {
                        let id = parent.len();
                        parent.push(hub);
                        tr.arc_token.push(t.clone());
                        outs.push(id);
                    }
                    touched = ins.iter().chain(&outs).copied().collect();
                    touched.push(hub);
                    slots.splice(*pos..*pos, outs);
                }
            }
            step_tokens(&mut tokens, g, i)?;
            tr.touched.push(touched);
        }
        tr.open_arcs.extend(slots.iter().copied());
        tr.top_arcs = slots;
        tr.component_of = (0..parent.len()).map(|a| find(&mut parent, a)).collect();
        Ok(tr)
    }
}

pub(crate) fn join(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Names of all open variables with the number of boundary occurrences.
pub fn boundary_vars(tokens: &[Token]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for t in tokens {
        if let Token::Var { name, .. } = t {
            *m.entry(name.clone()).or_insert(0) += 1;
        }
    }
    m
}
