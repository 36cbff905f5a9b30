use crate::error::{Error, Result, Span};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    /// A `'quoted'` constant.
    Quoted(String),
    Number(f64),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Colon,
    Tilde,
    Slash,
    Percent,
    Arrow,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Quoted(s) => format!("'{s}'"),
            Tok::Number(x) => format!("number {x}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Percent => "`%`".into(),
            Tok::Arrow => "`<-`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' | ')' | ',' | '.' | '=' | ':' | '~' | '/' | '%' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '=' => Tok::Eq,
                    ':' => Tok::Colon,
                    '~' => Tok::Tilde,
                    '/' => Tok::Slash,
                    _ => Tok::Percent,
                };
                out.push(Token { tok, span });
                advance(1, &mut i, &mut col);
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') {
                    out.push(Token { tok: Tok::Arrow, span });
                    advance(2, &mut i, &mut col);
                } else {
                    return Err(Error::syntax(span, "expected `<-`"));
                }
            }
            '\'' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '\'' && chars[j] != '\n' {
                    j += 1;
                }
                if j >= chars.len() || chars[j] != '\'' {
                    return Err(Error::syntax(span, "unterminated quoted constant"));
                }
                let s: String = chars[start..j].iter().collect();
                if s.is_empty() {
                    return Err(Error::syntax(span, "empty quoted constant"));
                }
                out.push(Token { tok: Tok::Quoted(s), span });
                advance(j + 1 - i, &mut i, &mut col);
            }
            c if c.is_ascii_digit() => {
                let start = i;
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                let s: String = chars[start..j].iter().collect();
                let x = s
                    .parse::<f64>()
                    .map_err(|_| Error::syntax(span, format!("bad number `{s}`")))?;
                out.push(Token { tok: Tok::Number(x), span });
                advance(j - i, &mut i, &mut col);
            }
            c if is_ident_start(c) => {
                let start = i;
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let s: String = chars[start..j].iter().collect();
                out.push(Token { tok: Tok::Ident(s), span });
                advance(j - i, &mut i, &mut col);
            }
            other => {
                return Err(Error::syntax(span, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(out)
}

/// Cursor over a token stream with the usual expect/peek helpers.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    end: Span,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Self> {
        let toks = tokenize(text)?;
        let line = text.lines().count().max(1);
        let column = text.lines().last().map_or(1, |l| l.chars().count() + 1);
        Ok(Cursor {
            toks,
            pos: 0,
            end: Span { line, column },
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub(crate) fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|t| &t.tok)
    }

    pub(crate) fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |t| t.span)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, what: &str) -> Error {
        let found = self
            .peek()
            .map_or("end of input".to_string(), |t| t.describe());
        Error::syntax(self.span(), format!("expected {what}, found {found}"))
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("an identifier")),
        }
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(&format!("`{kw}`"))),
        }
    }

    pub(crate) fn number(&mut self) -> Result<f64> {
        match self.peek() {
            Some(Tok::Number(x)) => {
                let x = *x;
                self.pos += 1;
                Ok(x)
            }
            _ => Err(self.error("a number")),
        }
    }

    pub(crate) fn uint(&mut self) -> Result<usize> {
        let span = self.span();
        let x = self.number()?;
        if x.fract() != 0.0 || x < 0.0 {
            return Err(Error::syntax(span, format!("expected a whole number, found {x}")));
        }
        Ok(x as usize)
    }
}
