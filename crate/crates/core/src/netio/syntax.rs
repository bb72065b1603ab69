//! The generic value syntax underneath every document:
//!
//! ```text
//! value := atom | '[' value (',' value)* ']' | '{' atom ':' value (',' atom ':' value)* '}'
//! ```
//!
//! A document is a sequence of top-level `key: value` entries. Atoms are runs
//! of any characters other than whitespace and `{}[]:,#`. `#` starts a line
//! comment. A trailing comma before a closing bracket is accepted.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Atom(String),
    List(Vec<Node>),
    Map(Vec<(Key, Node)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Key {
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub value: Value,
    pub pos: Pos,
}

pub fn error_at(pos: &Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

impl Node {
    pub fn as_atom(&self, what: &str) -> Result<&str> {
        match &self.value {
            Value::Atom(s) => Ok(s),
            _ => Err(error_at(&self.pos, format!("expected {what}"))),
        }
    }

    pub fn as_list(&self, what: &str) -> Result<&[Node]> {
        match &self.value {
            Value::List(items) => Ok(items),
            _ => Err(error_at(&self.pos, format!("expected a list for {what}"))),
        }
    }

    pub fn as_map(&self, what: &str) -> Result<&[(Key, Node)]> {
        match &self.value {
            Value::Map(entries) => Ok(entries),
            _ => Err(error_at(&self.pos, format!("expected a map for {what}"))),
        }
    }

    pub fn as_count(&self) -> Result<u64> {
        let text = self.as_atom("a count")?;
        text.parse::<u64>()
            .map_err(|_| error_at(&self.pos, format!("`{text}` is not a non-negative integer count")))
    }
}

/// Looks up fields of a map, rejecting keys outside `allowed`.
pub struct Fields<'a> {
    entries: &'a [(Key, Node)],
    pos: Pos,
}

impl<'a> Fields<'a> {
    pub fn new(node: &'a Node, what: &str, allowed: &[&str]) -> Result<Self> {
        let entries = node.as_map(what)?;
        for (k, _) in entries {
            if !allowed.contains(&k.name.as_str()) {
                return Err(error_at(&k.pos, format!("unknown field `{}` in {what}", k.name)));
            }
        }
        Ok(Fields {
            entries,
            pos: node.pos.clone(),
        })
    }

    pub fn from_entries(entries: &'a [(Key, Node)], allowed: &[&str]) -> Result<Self> {
        for (k, _) in entries {
            if !allowed.contains(&k.name.as_str()) {
                return Err(error_at(&k.pos, format!("unknown key `{}`", k.name)));
            }
        }
        Ok(Fields {
            entries,
            pos: Pos { line: 1, column: 1 },
        })
    }

    pub fn get(&self, name: &str) -> Option<&'a Node> {
        self.entries.iter().find(|(k, _)| k.name == name).map(|(_, v)| v)
    }

    pub fn require(&self, name: &str) -> Result<&'a Node> {
        self.get(name)
            .ok_or_else(|| error_at(&self.pos, format!("missing field `{name}`")))
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open(char),
    Close(char),
    Colon,
    Comma,
    Atom(String),
    End,
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '{' | '}' | '[' | ']' | ':' | ',' | '#')
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn next_token(&mut self) -> (Token, Pos) {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        let pos = self.pos();
        let token = match self.chars.peek().copied() {
            None => Token::End,
            Some(c @ ('{' | '[')) => {
                self.bump();
                Token::Open(c)
            }
            Some(c @ ('}' | ']')) => {
                self.bump();
                Token::Close(c)
            }
            Some(':') => {
                self.bump();
                Token::Colon
            }
            Some(',') => {
                self.bump();
                Token::Comma
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if is_delimiter(c) {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Token::Atom(s)
            }
        };
        (token, pos)
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<(Token, Pos)>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lexer: Lexer::new(text),
            peeked: None,
        }
    }

    fn peek(&mut self) -> &(Token, Pos) {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token());
        }
        self.peeked.as_ref().expect("just filled")
    }

    fn next(&mut self) -> (Token, Pos) {
        self.peek();
        self.peeked.take().expect("just filled")
    }

    fn expect_colon(&mut self) -> Result<()> {
        match self.next() {
            (Token::Colon, _) => Ok(()),
            (t, pos) => Err(error_at(&pos, format!("expected `:`, found {}", describe(&t)))),
        }
    }

    fn key(&mut self) -> Result<Key> {
        match self.next() {
            (Token::Atom(name), pos) => Ok(Key { name, pos }),
            (t, pos) => Err(error_at(&pos, format!("expected a key, found {}", describe(&t)))),
        }
    }

    fn value(&mut self) -> Result<Node> {
        let (token, pos) = self.next();
        let value = match token {
            Token::Atom(s) => Value::Atom(s),
            Token::Open('[') => Value::List(self.sequence(']', |p| p.value())?),
            Token::Open(_) => {
                let entries = self.sequence('}', |p| {
                    let k = p.key()?;
                    p.expect_colon()?;
                    Ok((k, p.value()?))
                })?;
                check_unique(&entries)?;
                Value::Map(entries)
            }
            t => return Err(error_at(&pos, format!("expected a value, found {}", describe(&t)))),
        };
        Ok(Node { value, pos })
    }

    fn sequence<T>(&mut self, close: char, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut items = Vec::new();
        loop {
            if let (Token::Close(c), _) = self.peek() {
                let c = *c;
                let (_, pos) = self.next();
                if c != close {
                    return Err(error_at(&pos, format!("expected `{close}`, found `{c}`")));
                }
                return Ok(items);
            }
            items.push(item(self)?);
            match self.next() {
                (Token::Comma, _) => {}
                (Token::Close(c), _) if c == close => return Ok(items),
                (t, pos) => {
                    return Err(error_at(
                        &pos,
                        format!("expected `,` or `{close}`, found {}", describe(&t)),
                    ))
                }
            }
        }
    }
}

fn describe(t: &Token) -> String {
    match t {
        Token::Open(c) | Token::Close(c) => format!("`{c}`"),
        Token::Colon => "`:`".into(),
        Token::Comma => "`,`".into(),
        Token::Atom(s) => format!("`{s}`"),
        Token::End => "end of input".into(),
    }
}

fn check_unique(entries: &[(Key, Node)]) -> Result<()> {
    for (i, (k, _)) in entries.iter().enumerate() {
        if entries[..i].iter().any(|(j, _)| j.name == k.name) {
            return Err(error_at(&k.pos, format!("duplicate key `{}`", k.name)));
        }
    }
    Ok(())
}

/// Parses a whole document into its top-level entries.
pub fn parse_entries(text: &str) -> Result<Vec<(Key, Node)>> {
    let mut p = Parser::new(text);
    let mut entries = Vec::new();
    while p.peek().0 != Token::End {
        let k = p.key()?;
        p.expect_colon()?;
        entries.push((k, p.value()?));
    }
    check_unique(&entries)?;
    Ok(entries)
}

/// Parses a single standalone value, e.g. a marking given on the command line.
pub fn parse_value(text: &str) -> Result<Node> {
    let mut p = Parser::new(text);
    let node = p.value()?;
    match p.next() {
        (Token::End, _) => Ok(node),
        (t, pos) => Err(error_at(&pos, format!("unexpected {} after value", describe(&t)))),
    }
}
