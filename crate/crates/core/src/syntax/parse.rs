//! Text grammar.
//!
//! ```text
//! iff    := imp ("<->" imp)*
//! imp    := or ("->" imp)?
//! or     := and ("|" and)*
//! and    := until ("&" until)*
//! until  := unary ("U" until)?
//! unary  := ("!" | "X" | "F" | "G" | "A" | "E" | "<<" agents ">>") unary | atom
//! atom   := "p" N | "true" | "false" | "(" iff ")"
//! agents := "" | "*" | N ("," N)*
//! ```
//!
//! Two-letter words such as `AG` or `EX` are read as quantifier plus
//! connective.

use super::derived::*;
use super::{belongs_to, AgentSet, Coalition, Formula, LogicId, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(u32),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    All,
    Exists,
    Next,
    Until,
    Globally,
    Eventually,
    Open,
    Close,
    CoalOpen,
    CoalClose,
    Comma,
    Star,
    Num(u32),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Var(i) => format!("`p{i}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::All => "`A`".into(),
            Tok::Exists => "`E`".into(),
            Tok::Next => "`X`".into(),
            Tok::Until => "`U`".into(),
            Tok::Globally => "`G`".into(),
            Tok::Eventually => "`F`".into(),
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::CoalOpen => "`<<`".into(),
            Tok::CoalClose => "`>>`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Star => "`*`".into(),
            Tok::Num(n) => format!("`{n}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn letter_tok(c: char) -> Option<Tok> {
    Some(match c {
        'A' => Tok::All,
        'E' => Tok::Exists,
        'X' => Tok::Next,
        'U' => Tok::Until,
        'G' => Tok::Globally,
        'F' => Tok::Eventually,
        _ => return None,
    })
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, found: String| SyntaxError::Parse {
        pos,
        expected: "a formula token".into(),
        found,
    };
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("<<") {
            (Tok::CoalOpen, 2)
        } else if rest.starts_with(">>") {
            (Tok::CoalClose, 2)
        } else if rest.starts_with("->") {
            (Tok::Implies, 2)
        } else {
            match c {
                '!' => (Tok::Not, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '(' => (Tok::Open, 1),
                ')' => (Tok::Close, 1),
                ',' => (Tok::Comma, 1),
                '*' => (Tok::Star, 1),
                '0'..='9' => {
                    let len = rest.bytes().take_while(u8::is_ascii_digit).count();
                    let n = rest[..len]
                        .parse()
                        .map_err(|_| err(start, format!("`{}`", &rest[..len])))?;
                    (Tok::Num(n), len)
                }
                c if c.is_ascii_alphabetic() => {
                    let len = rest
                        .bytes()
                        .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                        .count();
                    let word = &rest[..len];
                    match word {
                        "true" => (Tok::True, len),
                        "false" => (Tok::False, len),
                        w if w.starts_with('p')
                            && w.len() > 1
                            && w[1..].bytes().all(|b| b.is_ascii_digit()) =>
                        {
                            let n: u32 = w[1..].parse().map_err(|_| err(start, format!("`{w}`")))?;
                            if n == 0 {
                                return Err(err(start, "`p0` (variables start at p1)".into()));
                            }
                            (Tok::Var(n), len)
                        }
                        w => {
                            let toks: Option<Vec<Tok>> = w.chars().map(letter_tok).collect();
                            match toks {
                                Some(toks) if w.len() <= 2 => {
                                    for t in toks {
                                        out.push((start, t));
                                    }
                                    i += len;
                                    continue;
                                }
                                _ => return Err(err(start, format!("`{w}`"))),
                            }
                        }
                    }
                }
                other => return Err(err(start, format!("`{other}`"))),
            }
        };
        out.push((start, tok));
        i += len;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

/// Surface syntax, before derived connectives are expanded.
#[derive(Debug, Clone, PartialEq)]
enum Surface {
    Var(u32),
    True,
    False,
    Not(Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Implies(Box<Surface>, Box<Surface>),
    Iff(Box<Surface>, Box<Surface>),
    All(Box<Surface>),
    Exists(Box<Surface>),
    Coalition(CoalitionSpec, Box<Surface>),
    Next(Box<Surface>),
    Until(Box<Surface>, Box<Surface>),
    Globally(Box<Surface>),
    Eventually(Box<Surface>),
}

#[derive(Debug, Clone, PartialEq)]
enum CoalitionSpec {
    Grand,
    Agents(Vec<(usize, u32)>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError::Parse {
            pos: self.offset(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn iff(&mut self) -> Result<Surface, SyntaxError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Surface::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Surface, SyntaxError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Surface::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Surface, SyntaxError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Surface::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Surface, SyntaxError> {
        let mut lhs = self.until()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.until()?;
            lhs = Surface::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Surface, SyntaxError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Until {
            self.bump();
            let rhs = self.until()?;
            return Ok(Surface::Until(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Surface, SyntaxError> {
        let wrap: fn(Box<Surface>) -> Surface = match self.peek() {
            Tok::Not => Surface::Not,
            Tok::Next => Surface::Next,
            Tok::Globally => Surface::Globally,
            Tok::Eventually => Surface::Eventually,
            Tok::All => Surface::All,
            Tok::Exists => Surface::Exists,
            Tok::CoalOpen => {
                self.bump();
                let spec = self.agents()?;
                let body = self.unary()?;
                return Ok(Surface::Coalition(spec, Box::new(body)));
            }
            _ => return self.atom(),
        };
        self.bump();
        Ok(wrap(Box::new(self.unary()?)))
    }

    fn agents(&mut self) -> Result<CoalitionSpec, SyntaxError> {
        if *self.peek() == Tok::Star {
            self.bump();
            self.expect(Tok::CoalClose, "`>>`")?;
            return Ok(CoalitionSpec::Grand);
        }
        let mut agents = Vec::new();
        if *self.peek() == Tok::CoalClose {
            self.bump();
            return Ok(CoalitionSpec::Agents(agents));
        }
        loop {
            let at = self.offset();
            match self.bump() {
                Tok::Num(n) => agents.push((at, n)),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("an agent number"));
                }
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::CoalClose => {
                    self.bump();
                    return Ok(CoalitionSpec::Agents(agents));
                }
                _ => return Err(self.error("`,` or `>>`")),
            }
        }
    }

    fn atom(&mut self) -> Result<Surface, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(i) => {
                self.bump();
                Ok(Surface::Var(i))
            }
            Tok::True => {
                self.bump();
                Ok(Surface::True)
            }
            Tok::False => {
                self.bump();
                Ok(Surface::False)
            }
            Tok::Open => {
                self.bump();
                let inner = self.iff()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error("a variable, `true`, `false`, `(` or a unary operator")),
        }
    }
}

struct Lowering {
    logic: LogicId,
    agents: AgentSet,
}

impl Lowering {
    fn coalition(&self, spec: &CoalitionSpec) -> Result<Coalition, SyntaxError> {
        match spec {
            CoalitionSpec::Grand => Ok(self.agents.all()),
            CoalitionSpec::Agents(list) => {
                for &(_, a) in list {
                    if !self.agents.contains(a) {
                        return Err(SyntaxError::AgentOutOfRange {
                            agent: a,
                            count: self.agents.count(),
                        });
                    }
                }
                Coalition::from_agents(list.iter().map(|&(_, a)| a))
            }
        }
    }

    fn no_coalitions(&self) -> SyntaxError {
        SyntaxError::Sort(format!("coalition quantifiers are not part of {}", self.logic))
    }

    fn lower(&self, s: &Surface) -> Result<Formula, SyntaxError> {
        let b = |x: &Surface| self.lower(x);
        Ok(match s {
            Surface::Var(i) => Formula::Var(*i),
            Surface::True => top(),
            Surface::False => Formula::Falsum,
            Surface::Not(a) => not(b(a)?),
            Surface::And(x, y) => and(b(x)?, b(y)?),
            Surface::Or(x, y) => or(b(x)?, b(y)?),
            Surface::Implies(x, y) => Formula::implies(b(x)?, b(y)?),
            Surface::Iff(x, y) => iff(b(x)?, b(y)?),
            Surface::Next(a) => Formula::next(b(a)?),
            Surface::Until(x, y) => Formula::until(b(x)?, b(y)?),
            Surface::Eventually(a) => eventually(b(a)?),
            Surface::Globally(a) => {
                if self.logic.is_alternating() {
                    Formula::always(b(a)?)
                } else {
                    globally_derived(b(a)?)
                }
            }
            Surface::All(a) | Surface::Exists(a) => {
                let universal = matches!(s, Surface::All(_));
                if self.logic == LogicId::Ctl {
                    if let Some(f) = self.ctl_pair(universal, a)? {
                        return Ok(f);
                    }
                }
                let body = b(a)?;
                match (self.logic.is_alternating(), universal) {
                    (false, true) => Formula::for_all(body),
                    (false, false) => exists(body),
                    (true, true) => Formula::coalition(Coalition::EMPTY, body),
                    (true, false) => Formula::coalition(self.agents.all(), body),
                }
            }
            Surface::Coalition(spec, a) => {
                if !self.logic.is_alternating() {
                    return Err(self.no_coalitions());
                }
                Formula::coalition(self.coalition(spec)?, b(a)?)
            }
        })
    }

    /// CTL's paired operators, expanded with the CTL definitions.
    fn ctl_pair(&self, universal: bool, body: &Surface) -> Result<Option<Formula>, SyntaxError> {
        let b = |x: &Surface| self.lower(x);
        Ok(Some(match (universal, body) {
            (true, Surface::Next(a)) => ax(b(a)?),
            (false, Surface::Next(a)) => ex(b(a)?),
            (true, Surface::Until(x, y)) => au(b(x)?, b(y)?),
            (false, Surface::Until(x, y)) => eu(b(x)?, b(y)?),
            (true, Surface::Eventually(a)) => af(b(a)?),
            (false, Surface::Eventually(a)) => ef(b(a)?),
            (true, Surface::Globally(a)) => ag(b(a)?),
            (false, Surface::Globally(a)) => eg(b(a)?),
            _ => return Ok(None),
        }))
    }
}

/// Parses `text` as a state formula of `logic` over `agents`.
pub fn parse(text: &str, logic: LogicId, agents: AgentSet) -> Result<Formula, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let surface = p.iff()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    let f = Lowering { logic, agents }.lower(&surface)?;
    if !f.is_state() {
        return Err(SyntaxError::Sort(format!(
            "`{f}` is a path formula; a state formula is required"
        )));
    }
    if !belongs_to(&f, logic) {
        let reason = match logic {
            LogicId::Ctl => "path quantifiers must be paired with a single temporal connective",
            LogicId::Atl => "coalition quantifiers must be paired with a single temporal connective",
            _ => "mixed quantifier kinds",
        };
        return Err(SyntaxError::Fragment {
            logic,
            formula: text.trim().to_string(),
            reason: reason.into(),
        });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u32) -> Formula {
        Formula::var(i)
    }

    fn one() -> AgentSet {
        AgentSet::new(1).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(
            parse("p1 -> p2", LogicId::CtlStar, one()).unwrap(),
            Formula::implies(p(1), p(2))
        );
        assert_eq!(
            parse("A G p1", LogicId::Ctl, one()).unwrap(),
            not(eu(top(), not(p(1))))
        );
        let two = AgentSet::new(2).unwrap();
        assert_eq!(
            parse("<<1,2>> X p1", LogicId::Atl, two).unwrap(),
            Formula::coalition(Coalition::from_agents([1, 2]).unwrap(), Formula::next(p(1)))
        );
    }

    #[test]
    fn precedence() {
        // unary > U > & > | > -> > <->
        let f = parse("!p1 U p2 & p3 | p4 -> p5", LogicId::CtlStar, one());
        assert!(f.is_err(), "top-level until is a path formula");
        let f = parse("A (!p1 U p2) & p3 | p4 -> p5", LogicId::CtlStar, one()).unwrap();
        let expected = Formula::implies(
            or(and(Formula::for_all(Formula::until(not(p(1)), p(2))), p(3)), p(4)),
            p(5),
        );
        assert_eq!(f, expected);
        let right = parse("p1 -> p2 -> p3", LogicId::Ctl, one()).unwrap();
        assert_eq!(right, Formula::implies(p(1), Formula::implies(p(2), p(3))));
        let iff_low = parse("p1 <-> p2 -> p3", LogicId::Ctl, one()).unwrap();
        assert_eq!(iff_low, iff(p(1), Formula::implies(p(2), p(3))));
    }

    #[test]
    fn glued_operators() {
        let a = parse("AG p1", LogicId::Ctl, one()).unwrap();
        let b = parse("A G p1", LogicId::Ctl, one()).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse("EX p1", LogicId::Ctl, one()).unwrap(), ex(p(1)));
        assert!(parse("AGX p1", LogicId::Ctl, one()).is_err());
    }

    #[test]
    fn errors() {
        let e = parse("p1 ->", LogicId::Ctl, one()).unwrap_err();
        assert!(matches!(e, SyntaxError::Parse { pos: 5, .. }), "{e:?}");
        let e = parse("A (X p1 -> p2)", LogicId::Ctl, one()).unwrap_err();
        assert!(matches!(e, SyntaxError::Fragment { .. }), "{e:?}");
        let e = parse("<<3>> X p1", LogicId::Atl, AgentSet::new(2).unwrap()).unwrap_err();
        assert_eq!(e, SyntaxError::AgentOutOfRange { agent: 3, count: 2 });
        assert!(parse("<<1>> X p1", LogicId::Ctl, one()).is_err());
        assert!(parse("X p1", LogicId::CtlStar, one()).is_err());
        assert!(parse("p0", LogicId::Ctl, one()).is_err());
        assert!(parse("(p1", LogicId::Ctl, one()).is_err());
        assert!(parse("<<1 X p1", LogicId::Atl, one()).is_err());
    }

    #[test]
    fn atl_sugar() {
        let two = AgentSet::new(2).unwrap();
        assert_eq!(
            parse("<<>> G p1", LogicId::Atl, two).unwrap(),
            Formula::coalition(Coalition::EMPTY, Formula::always(p(1)))
        );
        assert_eq!(
            parse("<<*>> F p1", LogicId::Atl, two).unwrap(),
            Formula::coalition(two.all(), eventually(p(1)))
        );
        assert_eq!(
            parse("E X p1", LogicId::Atl, two).unwrap(),
            parse("<<1,2>> X p1", LogicId::Atl, two).unwrap()
        );
        assert!(parse("<<1>> (X p1 -> p2)", LogicId::Atl, two).is_err());
        assert!(parse("<<1>> (X p1 -> G p2)", LogicId::AtlStar, two).is_ok());
    }

    #[test]
    fn ctl_accepts_core_negated_until() {
        let f = parse("A ((p1 U p2) -> false)", LogicId::Ctl, one()).unwrap();
        assert_eq!(f, Formula::for_all(not(Formula::until(p(1), p(2)))));
    }
}
