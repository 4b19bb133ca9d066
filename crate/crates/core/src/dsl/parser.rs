//! Recursive-descent parser producing a span-carrying syntax tree.
//!
//! On a syntax error the current declaration is abandoned and the parser
//! resynchronizes on the next top-level keyword, so one run reports every
//! independent error in the file.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use super::lexer::{Token, TokenKind};
use super::RawError;
use crate::model::{Action, AttributeKind};

pub(crate) const TOP_KEYWORDS: [&str; 5] = [
    "organization",
    "goal",
    "entity",
    "relationship",
    "privilege",
];

#[derive(Debug, Clone)]
pub(crate) struct Name {
    pub text: String,
    pub range: Range<usize>,
}

#[derive(Debug)]
pub(crate) enum Decl {
    Organization(OrgDecl),
    Goal(GoalDecl),
    Entity(EntityDecl),
    Relationship(RelDecl),
    Privilege(PrivDecl),
}

#[derive(Debug)]
pub(crate) struct OrgDecl {
    pub name: Name,
    pub agents: Vec<Name>,
}

#[derive(Debug)]
pub(crate) struct GoalDecl {
    pub name: Name,
    pub responsible: Option<Name>,
    pub entry: Option<Name>,
    /// `None` when written without braces.
    pub body: Option<Vec<GoalDecl>>,
}

#[derive(Debug)]
pub(crate) struct EntityDecl {
    pub name: Name,
    pub attributes: Vec<(Name, AttributeKind)>,
}

#[derive(Debug)]
pub(crate) struct RelDecl {
    pub name: Name,
    pub source: Name,
    pub target: Name,
}

#[derive(Debug)]
pub(crate) struct PrivDecl {
    pub goal: Name,
    pub entry: StepDecl,
    pub steps: Vec<StepDecl>,
}

#[derive(Debug)]
pub(crate) struct StepDecl {
    pub via: Option<Name>,
    pub entity: Name,
    pub actions: Vec<Action>,
    pub actions_range: Range<usize>,
    pub updates: Vec<Name>,
}

type PResult<T> = Result<T, ()>;

pub(crate) struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    pub errors: Vec<RawError>,
}

impl<'t> Parser<'t> {
    pub fn new(tokens: &'t [Token]) -> Self {
        debug_assert!(matches!(
            tokens.last().map(|t| &t.kind),
            Some(TokenKind::Eof)
        ));
        Parser {
            tokens,
            pos: 0,
            errors: Vec::new(),
        }
    }

    pub fn parse_model(&mut self) -> Vec<Decl> {
        let mut decls = Vec::new();
        while !self.at_eof() {
            let start = self.pos;
            match self.decl() {
                Ok(d) => decls.push(d),
                Err(()) => self.recover(start),
            }
        }
        decls
    }

    fn recover(&mut self, start: usize) {
        if self.pos == start {
            self.pos += 1;
        }
        let mut depth: i64 = 0;
        for tok in &self.tokens[start..self.pos] {
            match tok.kind {
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace => depth -= 1,
                _ => {}
            }
        }
        while !self.at_eof() {
            match &self.peek().kind {
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace => depth -= 1,
                // `goal` also opens nested sub-goals; the others are top-level only.
                TokenKind::Ident(word)
                    if TOP_KEYWORDS.contains(&word.as_str()) && (depth <= 0 || word != "goal") =>
                {
                    return;
                }
                _ => {}
            }
            self.pos += 1;
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek().kind, TokenKind::Eof)
    }

    fn bump(&mut self) -> &Token {
        let tok = &self.tokens[self.pos];
        if !matches!(tok.kind, TokenKind::Eof) {
            self.pos += 1;
        }
        tok
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(w) if w == word)
    }

    fn error<T>(&mut self, expected: &[&str]) -> PResult<T> {
        let tok = self.peek();
        let found = tok.kind.describe();
        let message = match expected {
            [] => format!("unexpected {found}"),
            [one] => format!("expected {one}, found {found}"),
            many => {
                let (last, init) = many.split_last().expect("non-empty");
                format!("expected {} or {last}, found {found}", init.join(", "))
            }
        };
        self.errors.push(RawError {
            range: tok.range.clone(),
            message,
            expected: expected.iter().map(|s| String::from(*s)).collect(),
            secondary: None,
        });
        Err(())
    }

    fn keyword(&mut self, word: &str) -> PResult<Range<usize>> {
        if self.is_keyword(word) {
            Ok(self.bump().range.clone())
        } else {
            let quoted = format!("`{word}`");
            self.error(&[quoted.as_str()])
        }
    }

    fn punct(&mut self, kind: TokenKind) -> PResult<Range<usize>> {
        if self.peek().kind == kind {
            Ok(self.bump().range.clone())
        } else {
            let d = kind.describe();
            self.error(&[d.as_str()])
        }
    }

    fn name(&mut self) -> PResult<Name> {
        let tok = self.peek();
        match &tok.kind {
            TokenKind::Ident(s) | TokenKind::Str(s) => {
                let name = Name {
                    text: s.clone(),
                    range: tok.range.clone(),
                };
                self.bump();
                Ok(name)
            }
            _ => self.error(&["name"]),
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let word = match &self.peek().kind {
            TokenKind::Ident(w) => w.clone(),
            _ => return self.error(&TOP_KEYWORD_DESCRIPTIONS),
        };
        match word.as_str() {
            "organization" => self.organization().map(Decl::Organization),
            "goal" => self.goal().map(Decl::Goal),
            "entity" => self.entity().map(Decl::Entity),
            "relationship" => self.relationship().map(Decl::Relationship),
            "privilege" => self.privilege().map(Decl::Privilege),
            _ => self.error(&TOP_KEYWORD_DESCRIPTIONS),
        }
    }

    fn organization(&mut self) -> PResult<OrgDecl> {
        self.keyword("organization")?;
        let name = self.name()?;
        self.punct(TokenKind::LBrace)?;
        let mut agents = Vec::new();
        while !matches!(self.peek().kind, TokenKind::RBrace) {
            if !self.is_keyword("agent") {
                return self.error(&["`agent`", "`}`"]);
            }
            self.bump();
            agents.push(self.name()?);
        }
        self.bump();
        Ok(OrgDecl { name, agents })
    }

    fn goal(&mut self) -> PResult<GoalDecl> {
        self.keyword("goal")?;
        let name = self.name()?;
        let mut goal = GoalDecl {
            name,
            responsible: None,
            entry: None,
            body: None,
        };
        if !matches!(self.peek().kind, TokenKind::LBrace) {
            return Ok(goal);
        }
        self.bump();
        let mut children = Vec::new();
        loop {
            if matches!(self.peek().kind, TokenKind::RBrace) {
                self.bump();
                break;
            }
            let prop = if self.is_keyword("responsible") {
                Some(true)
            } else if self.is_keyword("entry") {
                Some(false)
            } else {
                None
            };
            match prop {
                Some(is_responsible) => {
                    let key = self.bump().clone();
                    self.punct(TokenKind::Colon)?;
                    let value = self.name()?;
                    let slot = if is_responsible {
                        &mut goal.responsible
                    } else {
                        &mut goal.entry
                    };
                    if slot.is_some() {
                        let TokenKind::Ident(word) = &key.kind else {
                            unreachable!()
                        };
                        self.errors.push(RawError::new(
                            key.range.clone(),
                            format!("goal property `{word}` given more than once"),
                        ));
                        return Err(());
                    }
                    *slot = Some(value);
                }
                None if self.is_keyword("goal") => children.push(self.goal()?),
                None => return self.error(&["`responsible`", "`entry`", "`goal`", "`}`"]),
            }
        }
        goal.body = Some(children);
        Ok(goal)
    }

    fn entity(&mut self) -> PResult<EntityDecl> {
        self.keyword("entity")?;
        let name = self.name()?;
        self.punct(TokenKind::LBrace)?;
        let mut attributes = Vec::new();
        while !matches!(self.peek().kind, TokenKind::RBrace) {
            if !self.is_keyword("attribute") {
                return self.error(&["`attribute`", "`}`"]);
            }
            self.bump();
            let attr = self.name()?;
            self.punct(TokenKind::Colon)?;
            let kind = match &self.peek().kind {
                TokenKind::Ident(w) if w == "text" => AttributeKind::Text,
                TokenKind::Ident(w) if w == "number" => AttributeKind::Number,
                TokenKind::Ident(w) if w == "date" => AttributeKind::Date,
                TokenKind::Ident(w) if w == "boolean" => AttributeKind::Boolean,
                _ => return self.error(&["`text`", "`number`", "`date`", "`boolean`"]),
            };
            self.bump();
            attributes.push((attr, kind));
        }
        self.bump();
        Ok(EntityDecl { name, attributes })
    }

    fn relationship(&mut self) -> PResult<RelDecl> {
        self.keyword("relationship")?;
        let name = self.name()?;
        self.punct(TokenKind::Colon)?;
        let source = self.name()?;
        self.punct(TokenKind::Arrow)?;
        let target = self.name()?;
        Ok(RelDecl {
            name,
            source,
            target,
        })
    }

    fn privilege(&mut self) -> PResult<PrivDecl> {
        self.keyword("privilege")?;
        self.keyword("for")?;
        let goal = self.name()?;
        self.punct(TokenKind::LBrace)?;
        self.keyword("entry")?;
        let entity = self.name()?;
        let (actions, actions_range, updates) = self.actions()?;
        let entry = StepDecl {
            via: None,
            entity,
            actions,
            actions_range,
            updates,
        };
        let mut steps = Vec::new();
        while !matches!(self.peek().kind, TokenKind::RBrace) {
            if !self.is_keyword("step") {
                return self.error(&["`step`", "`}`"]);
            }
            self.bump();
            let via = self.name()?;
            self.punct(TokenKind::Arrow)?;
            let entity = self.name()?;
            let (actions, actions_range, updates) = self.actions()?;
            steps.push(StepDecl {
                via: Some(via),
                entity,
                actions,
                actions_range,
                updates,
            });
        }
        self.bump();
        Ok(PrivDecl { goal, entry, steps })
    }

    fn actions(&mut self) -> PResult<(Vec<Action>, Range<usize>, Vec<Name>)> {
        let open = self.punct(TokenKind::LBrace)?;
        let mut actions: Vec<Action> = Vec::new();
        let mut updates = Vec::new();
        loop {
            let tok = self.peek().clone();
            let action = match &tok.kind {
                TokenKind::Ident(w) => match w.as_str() {
                    "create" => Action::Create,
                    "read" => Action::Read,
                    "update" => Action::Update,
                    "delete" => Action::Delete,
                    _ => return self.error(&ACTION_DESCRIPTIONS),
                },
                _ => return self.error(&ACTION_DESCRIPTIONS),
            };
            self.bump();
            if actions.contains(&action) {
                self.errors.push(RawError::new(
                    tok.range.clone(),
                    format!("action `{action}` listed more than once"),
                ));
                return Err(());
            }
            actions.push(action);
            if action == Action::Update && matches!(self.peek().kind, TokenKind::LParen) {
                self.bump();
                updates.push(self.name()?);
                while matches!(self.peek().kind, TokenKind::Comma) {
                    self.bump();
                    updates.push(self.name()?);
                }
                self.punct(TokenKind::RParen)?;
            }
            match self.peek().kind {
                TokenKind::Comma => {
                    self.bump();
                }
                TokenKind::RBrace => {
                    let close = self.bump().range.clone();
                    return Ok((actions, open.start..close.end, updates));
                }
                _ => return self.error(&["`,`", "`}`"]),
            }
        }
    }
}

const TOP_KEYWORD_DESCRIPTIONS: [&str; 5] = [
    "`organization`",
    "`goal`",
    "`entity`",
    "`relationship`",
    "`privilege`",
];

const ACTION_DESCRIPTIONS: [&str; 4] = ["`create`", "`read`", "`update`", "`delete`"];
