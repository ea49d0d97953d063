//! Linear text notation for boxes, box programs and terms.
//!
//! ```text
//! Box     := "[" Universe " | " CondList "]"
//! Program := Box ( " ; " Box )*
//! ```
//!
//! Universe and condition lists are comma separated. Registers print as
//! `u_n`, `P_n` and `x_n`. A box argument of a predicate that consists of
//! a single atom and no universe prints as the bare atom, so
//! `want(u_3, kiss(u_1, u_3))` stands for `want(u_3, [ | kiss(u_1, u_3)])`.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{BoxProgram, Condition, Drs, Register, RegisterKind};
use crate::typelogic::{Term, Type};

#[derive(Debug, Clone, Default)]
pub struct RenderOptions {
    /// Registers printed with a trailing `*`.
    pub starred: BTreeSet<Register>,
}

impl RenderOptions {
    pub fn starring(regs: impl IntoIterator<Item = Register>) -> RenderOptions {
        RenderOptions {
            starred: regs.into_iter().collect(),
        }
    }
}

pub fn render_program(p: &BoxProgram, opts: &RenderOptions) -> String {
    p.boxes()
        .iter()
        .map(|d| render_box(d, opts))
        .collect::<Vec<_>>()
        .join(" ; ")
}

pub fn render_box(d: &Drs, opts: &RenderOptions) -> String {
    let universe: Vec<String> = d
        .universe
        .iter()
        .map(|r| render_register(r, opts))
        .collect();
    let conditions: Vec<String> = d
        .conditions
        .iter()
        .map(|c| render_condition(c, opts))
        .collect();
    format!("[{} | {}]", universe.join(", "), conditions.join(", "))
}

fn render_register(r: &Register, opts: &RenderOptions) -> String {
    if opts.starred.contains(r) {
        format!("{r}*")
    } else {
        r.to_string()
    }
}

/// The atom of a `[ | pred(..)]` box, if that is all the box holds.
fn bare_atom(t: &Term) -> Option<&Condition> {
    match t {
        Term::BoxLit(d) if d.universe.is_empty() && d.conditions.len() == 1 => {
            matches!(d.conditions[0], Condition::Atom(..)).then(|| &d.conditions[0])
        }
        _ => None,
    }
}

pub fn render_condition(c: &Condition, opts: &RenderOptions) -> String {
    match c {
        Condition::Atom(p, args) => {
            let args: Vec<String> = args
                .iter()
                .map(|a| match bare_atom(a) {
                    Some(inner) => render_condition(inner, opts),
                    None => render_term(a, opts),
                })
                .collect();
            format!("{p}({})", args.join(", "))
        }
        Condition::Eq(r, t) => format!("{} = {}", render_register(r, opts), render_term(t, opts)),
        Condition::Imp(a, b) => format!("{} ⇒ {}", grouped(a, opts), grouped(b, opts)),
        Condition::Not(t) => format!("NOT({})", render_term(t, opts)),
    }
}

fn grouped(t: &Term, opts: &RenderOptions) -> String {
    if t.as_seq().is_some() || matches!(t, Term::Lam(..)) {
        format!("({})", render_term(t, opts))
    } else {
        render_term(t, opts)
    }
}

pub fn render_term(t: &Term, opts: &RenderOptions) -> String {
    if t.as_seq().is_some() {
        return t
            .seq_items()
            .iter()
            .map(|i| grouped(i, opts))
            .collect::<Vec<_>>()
            .join(" ; ");
    }
    match t {
        Term::Var(n, _) | Term::Const(n, _) => n.clone(),
        Term::Reg(r) => render_register(r, opts),
        Term::BoxLit(d) => render_box(d, opts),
        Term::Lam(x, _, body) => {
            if body.as_seq().is_some() {
                format!("λ{x}.({})", render_term(body, opts))
            } else {
                format!("λ{x}.{}", render_term(body, opts))
            }
        }
        Term::App(..) => render_app(t, opts),
    }
}

fn render_app(t: &Term, opts: &RenderOptions) -> String {
    let (head, args) = t.spine();
    if let Term::Const(name, _) = head {
        match (name.as_str(), args.as_slice()) {
            ("∧" | "→" | "=", [a, b]) => {
                return format!("({} {name} {})", render_term(a, opts), render_term(b, opts));
            }
            ("¬", [a]) => return format!("¬{}", render_term(a, opts)),
            ("∃" | "∀", [Term::Lam(k, _, body)]) => {
                return format!("{name}{k}{}", parenthesized(body, opts));
            }
            (rel, [a, b]) if rel.starts_with('[') => {
                return format!("{}{rel}{}", render_term(a, opts), render_term(b, opts));
            }
            _ => {}
        }
    }
    let head = match head {
        Term::Var(..) | Term::Const(..) | Term::Reg(_) => render_term(head, opts),
        other => format!("({})", render_term(other, opts)),
    };
    let args: String = args
        .iter()
        .map(|a| format!("({})", render_term(a, opts)))
        .collect();
    format!("{head}{args}")
}

fn parenthesized(t: &Term, opts: &RenderOptions) -> String {
    let s = render_term(t, opts);
    if s.starts_with('(') && s.ends_with(')') {
        s
    } else {
        format!("({s})")
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LBracket,
    RBracket,
    Bar,
    Comma,
    Semi,
    LParen,
    RParen,
    Equals,
    Lambda,
    Dot,
    Implies,
    Star,
    Ident(String),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let simple = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '|' => Some(Tok::Bar),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            'λ' | '\\' => Some(Tok::Lambda),
            '.' => Some(Tok::Dot),
            '⇒' => Some(Tok::Implies),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((off, t));
            i += 1;
            continue;
        }
        if c == '=' {
            if chars.get(i + 1).map(|&(_, c)| c) == Some('>') {
                out.push((off, Tok::Implies));
                i += 2;
            } else {
                out.push((off, Tok::Equals));
                i += 1;
            }
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_alphanumeric() || c == '_' || c == '\'' || c == '-' {
            let start = i;
            while i < chars.len() {
                let c = chars[i].1;
                if c.is_alphanumeric() || c == '_' || c == '\'' || c == '-' {
                    i += 1;
                } else {
                    break;
                }
            }
            let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((off, Tok::Ident(word)));
            continue;
        }
        return Err(SyntaxError {
            offset: off,
            message: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

/// Recognizes `u_3`, `P_0`, `x_3`.
pub fn register_from_str(s: &str) -> Option<Register> {
    let (prefix, digits) = s.split_once('_')?;
    let kind = match prefix {
        "u" => RegisterKind::Entity,
        "P" => RegisterKind::Property,
        "x" => RegisterKind::DynamicIndividual,
        _ => return None,
    };
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some(Register::new(kind, digits.parse().ok()?))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    scope: Vec<(String, Type)>,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(src: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(SyntaxError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn lookup(&self, name: &str) -> Option<Type> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t.clone())
    }

    fn finish(&self) -> PResult<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    /// term := item (";" item)*
    fn term(&mut self, expected: Option<&Type>) -> PResult<(Term, Type)> {
        let (first, ty) = self.item(expected)?;
        if self.peek() != Some(&Tok::Semi) {
            return Ok((first, ty));
        }
        if !ty.is_box() {
            return self.err("`;` joins box terms only");
        }
        let mut items = vec![first];
        while self.eat(&Tok::Semi) {
            let (t, _) = self.item(Some(&Type::box_type()))?;
            items.push(t);
        }
        Ok((Term::seq_all(items), Type::box_type()))
    }

    /// item := atomic ("(" term ")")*
    fn item(&mut self, expected: Option<&Type>) -> PResult<(Term, Type)> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda(expected);
        }
        let (mut t, mut ty) = self.atomic(expected)?;
        while self.peek() == Some(&Tok::LParen) {
            let Some((dom, cod)) = ty.split_arrow().map(|(a, b)| (a.clone(), b.clone())) else {
                return self.err(format!("`{t}` is not a function"));
            };
            self.pos += 1;
            let (arg, _) = self.term(Some(&dom))?;
            self.expect(Tok::RParen)?;
            t = Term::app(t, arg);
            ty = cod;
        }
        Ok((t, ty))
    }

    fn lambda(&mut self, expected: Option<&Type>) -> PResult<(Term, Type)> {
        self.expect(Tok::Lambda)?;
        let Some(Tok::Ident(x)) = self.peek().cloned() else {
            return self.err("expected a bound variable");
        };
        self.pos += 1;
        self.expect(Tok::Dot)?;
        let Some((dom, cod)) = expected
            .and_then(|t| t.split_arrow())
            .map(|(a, b)| (a.clone(), b.clone()))
        else {
            return self.err(format!("cannot infer the type of `{x}`"));
        };
        self.scope.push((x.clone(), dom.clone()));
        let body = self.term(Some(&cod));
        self.scope.pop();
        let (body, _) = body?;
        Ok((Term::lam(x, dom.clone(), body), Type::arrow(dom, cod)))
    }

    fn atomic(&mut self, expected: Option<&Type>) -> PResult<(Term, Type)> {
        match self.peek().cloned() {
            Some(Tok::LBracket) => Ok((Term::BoxLit(self.drs()?), Type::box_type())),
            Some(Tok::LParen) => {
                self.pos += 1;
                let r = self.term(expected)?;
                self.expect(Tok::RParen)?;
                Ok(r)
            }
            Some(Tok::Ident(name)) => {
                if let Some(r) = register_from_str(&name) {
                    self.pos += 1;
                    self.eat(&Tok::Star);
                    return Ok((Term::Reg(r), r.value_type()));
                }
                if let Some(ty) = self.lookup(&name) {
                    self.pos += 1;
                    return Ok((Term::Var(name, ty.clone()), ty));
                }
                if self.peek_at(1) == Some(&Tok::LParen) && starts_lower(&name) {
                    let c = self.atom()?;
                    return Ok((Term::BoxLit(Drs::new(vec![], vec![c])), Type::box_type()));
                }
                self.pos += 1;
                if starts_lower(&name) {
                    match expected {
                        Some(ty) => Ok((Term::Var(name, ty.clone()), ty.clone())),
                        None => {
                            self.err(format!("cannot infer the type of free variable `{name}`"))
                        }
                    }
                } else {
                    Ok((Term::entity(name), Type::Entity))
                }
            }
            _ => self.err("expected a term"),
        }
    }

    /// box := "[" regs "|" conds "]"
    fn drs(&mut self) -> PResult<Drs> {
        self.expect(Tok::LBracket)?;
        let mut universe = Vec::new();
        while let Some(Tok::Ident(name)) = self.peek().cloned() {
            let Some(r) = register_from_str(&name) else {
                return self.err(format!("`{name}` is not a register"));
            };
            self.pos += 1;
            self.eat(&Tok::Star);
            universe.push(r);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Bar)?;
        let mut conditions = Vec::new();
        if self.peek() != Some(&Tok::RBracket) {
            loop {
                conditions.push(self.condition()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket)?;
        Ok(Drs::new(universe, conditions))
    }

    fn atom(&mut self) -> PResult<Condition> {
        let Some(Tok::Ident(pred)) = self.peek().cloned() else {
            return self.err("expected a predicate");
        };
        self.pos += 1;
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if self.peek() != Some(&Tok::RParen) {
            loop {
                let (a, _) = self.term(None)?;
                args.push(a);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(Condition::Atom(pred, args))
    }

    fn condition(&mut self) -> PResult<Condition> {
        if let Some(Tok::Ident(name)) = self.peek().cloned() {
            if name == "NOT" && self.peek_at(1) == Some(&Tok::LParen) {
                self.pos += 2;
                let (t, _) = self.term(Some(&Type::box_type()))?;
                self.expect(Tok::RParen)?;
                return Ok(Condition::Not(t));
            }
            if let Some(r) = register_from_str(&name) {
                let star = usize::from(self.peek_at(1) == Some(&Tok::Star));
                if self.peek_at(1 + star) == Some(&Tok::Equals) {
                    self.pos += 2 + star;
                    let (rhs, _) = self.term(Some(&r.value_type()))?;
                    return Ok(Condition::Eq(r, rhs));
                }
            }
            if self.lookup(&name).is_none()
                && starts_lower(&name)
                && self.peek_at(1) == Some(&Tok::LParen)
            {
                let atom = self.atom()?;
                if self.peek() != Some(&Tok::Implies) {
                    return Ok(atom);
                }
                let lhs = Term::BoxLit(Drs::new(vec![], vec![atom]));
                return self.implication(lhs);
            }
        }
        let (lhs, ty) = self.item(Some(&Type::box_type()))?;
        if !ty.is_box() {
            return self.err("expected a condition");
        }
        self.implication(lhs)
    }

    fn implication(&mut self, lhs: Term) -> PResult<Condition> {
        self.expect(Tok::Implies)?;
        let (rhs, _) = self.item(Some(&Type::box_type()))?;
        Ok(Condition::Imp(lhs, rhs))
    }
}

fn starts_lower(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_lowercase())
}

pub fn parse_box(src: &str) -> Result<Drs, SyntaxError> {
    let mut p = Parser::new(src)?;
    let d = p.drs()?;
    p.finish()?;
    Ok(d)
}

pub fn parse_program(src: &str) -> Result<BoxProgram, SyntaxError> {
    let mut p = Parser::new(src)?;
    let (t, _) = p.term(Some(&Type::box_type()))?;
    p.finish()?;
    BoxProgram::from_term(&t).map_err(|e| SyntaxError {
        offset: 0,
        message: e.to_string(),
    })
}

/// Parses a closed term of the given type.
pub fn parse_term(src: &str, ty: &Type) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(src)?;
    let (t, _) = p.term(Some(ty))?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_empty_and_farmer_boxes() {
        assert_eq!(Drs::empty().to_string(), "[ | ]");
        let u1 = Register::entity(1);
        let d = Drs::new(
            vec![u1],
            ["farmer", "walk", "laugh"]
                .iter()
                .map(|p| Condition::atom(*p, vec![Term::reg(u1)]))
                .collect(),
        );
        assert_eq!(d.to_string(), "[u_1 | farmer(u_1), walk(u_1), laugh(u_1)]");
    }

    #[test]
    fn sequences_render_with_semicolons() {
        let p = crate::drt::sequence(
            Drs::empty().into(),
            Drs::new(vec![Register::entity(2)], vec![]).into(),
        );
        assert_eq!(p.to_string(), "[ | ] ; [u_2 | ]");
    }

    #[test]
    fn stars_mark_center_linked_registers() {
        let d = Drs::new(vec![Register::entity(0), Register::entity(1)], vec![]);
        let opts = RenderOptions::starring([Register::entity(1)]);
        assert_eq!(render_box(&d, &opts), "[u_0, u_1* | ]");
        assert_eq!(parse_box("[u_0, u_1* | ]").unwrap(), d);
    }

    #[test]
    fn parses_definitions_and_bare_atom_arguments() {
        let src = "[P_0, P_5 | P_0 = P_5, P_5 = λx.[ | kiss(x, u_3)], NOT([ | want(u_3, kiss(u_1, u_3))])]";
        let d = parse_box(src).unwrap();
        assert_eq!(d.to_string(), src);
        match &d.conditions[2] {
            Condition::Not(Term::BoxLit(inner)) => match &inner.conditions[0] {
                Condition::Atom(p, args) => {
                    assert_eq!(p, "want");
                    assert!(matches!(args[1], Term::BoxLit(_)));
                }
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_dynamic_individual_definitions() {
        let src = "[u_0, u_1, x_3 | x_3 = λP.([u_3 | of(u_3, u_0), paycheck(u_3)] ; P(u_3))] ; [u_3 | spend(u_1, u_3)]";
        let p = parse_program(src).unwrap();
        assert_eq!(p.to_string(), src);
        assert_eq!(p.boxes().len(), 2);
    }

    #[test]
    fn parses_implications() {
        let src =
            "[ | [u_1 | farmer(u_1)] ⇒ ([ | walk(u_1)] ; [ | laugh(u_1)]), [ | walk(Tom)] ⇒ [ | ]]";
        let d = parse_box(src).unwrap();
        assert_eq!(d.to_string(), src);
        let short = parse_box("[ | walk(Tom) ⇒ [ | ]]").unwrap();
        assert_eq!(short.to_string(), "[ | [ | walk(Tom)] ⇒ [ | ]]");
    }

    #[test]
    fn rejects_bad_registers() {
        assert!(parse_box("[u_ | ]").is_err());
        assert!(parse_box("[Tom | ]").is_err());
        assert!(parse_program("[ | ] ;").is_err());
    }

    #[test]
    fn register_names() {
        assert_eq!(register_from_str("P_12"), Some(Register::property(12)));
        assert_eq!(register_from_str("u_x"), None);
        assert_eq!(register_from_str("y_1"), None);
    }
}
