use super::{is_identifier, Constant, Formula, Quantifier, Signature};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at byte {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected `{0}`")]
    Unexpected(char),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` takes {expected} operands, found {found}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("invalid atom `{0}`")]
    InvalidAtom(String),
    #[error("invalid variable `{0}`")]
    InvalidVariable(String),
    #[error("unbalanced braces in indexed atom")]
    UnbalancedKey,
    #[error("placeholder `{0}` outside a template")]
    Placeholder(String),
    #[error("trailing input")]
    Trailing,
}

#[derive(Clone, Copy)]
enum Mode<'a> {
    Strict(&'a Signature),
    Lenient,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    mode: Mode<'a>,
    template: bool,
}

/// Parse formula text, validating every symbol against `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    Parser { text, pos: 0, mode: Mode::Strict(sig), template: false }.parse_all()
}

/// Parse without a signature: any symbol applied to operands is taken as a
/// connective, capitalised symbols as predicates.
pub fn parse_lenient(text: &str) -> Result<Formula, ParseError> {
    Parser { text, pos: 0, mode: Mode::Lenient, template: false }.parse_all()
}

/// Parse a template body; placeholders `#i` and the context variables
/// `$cur`, `$next`, `$bound` are allowed.
pub fn parse_template_body(text: &str, sig: Option<&Signature>) -> Result<Formula, ParseError> {
    let mode = match sig {
        Some(s) => Mode::Strict(s),
        None => Mode::Lenient,
    };
    Parser { text, pos: 0, mode, template: true }.parse_all()
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '{' | '}')
}

impl<'a> Parser<'a> {
    fn err(&self, position: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { position, kind }
    }

    fn parse_all(mut self) -> Result<Formula, ParseError> {
        let f = self.formula()?;
        self.skip_ws();
        if self.pos < self.text.len() {
            return Err(self.err(self.pos, ParseErrorKind::Trailing));
        }
        Ok(f)
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_word_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.text[start..self.pos]
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(')') => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.err(self.pos, ParseErrorKind::Unexpected(c))),
            None => Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
            Some('(') => {
                self.pos += 1;
                self.compound()
            }
            Some(c) if !is_word_char(c) => Err(self.err(self.pos, ParseErrorKind::Unexpected(c))),
            Some(_) => self.leaf(),
        }
    }

    fn compound(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let symbol = self.word();
        if symbol.is_empty() {
            return match self.peek() {
                Some(c) => Err(self.err(self.pos, ParseErrorKind::Unexpected(c))),
                None => Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
            };
        }
        if let Some(q) = Quantifier::from_symbol(symbol) {
            if let Mode::Strict(sig) = self.mode {
                if sig.first_order.is_none() {
                    return Err(self.err(start, ParseErrorKind::UnknownSymbol(symbol.to_string())));
                }
            }
            self.skip_ws();
            let vpos = self.pos;
            let var = self.word();
            if !self.valid_variable(var) {
                return Err(self.err(vpos, ParseErrorKind::InvalidVariable(var.to_string())));
            }
            let body = self.formula()?;
            self.expect_close()?;
            return Ok(Formula::Quant(q, var.to_string(), Box::new(body)));
        }
        let predicate_arity = match self.mode {
            Mode::Strict(sig) if sig.arity(symbol).is_none() => match sig.predicate_arity(symbol) {
                Some(a) => Some(a),
                None => return Err(self.err(start, ParseErrorKind::UnknownSymbol(symbol.to_string()))),
            },
            Mode::Lenient if symbol.starts_with(|c: char| c.is_ascii_uppercase()) => Some(None),
            _ => None,
        };
        if let Some(expected) = predicate_arity {
            let mut vars = Vec::new();
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    None => return Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
                    Some(_) => {
                        let vpos = self.pos;
                        let var = self.word();
                        if !self.valid_variable(var) {
                            let kind = match var.chars().next() {
                                None => ParseErrorKind::Unexpected(self.peek().unwrap_or(' ')),
                                Some(_) => ParseErrorKind::InvalidVariable(var.to_string()),
                            };
                            return Err(self.err(vpos, kind));
                        }
                        vars.push(var.to_string());
                    }
                }
            }
            let ok = match expected {
                Some(a) => a == vars.len(),
                None => !vars.is_empty(),
            };
            if !ok {
                return Err(self.err(
                    start,
                    ParseErrorKind::Arity { symbol: symbol.to_string(), expected: expected.unwrap_or(1), found: vars.len() },
                ));
            }
            return Ok(Formula::Pred(symbol.to_string(), vars));
        }
        let mut operands = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                None => return Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
                Some(_) => operands.push(self.formula()?),
            }
        }
        if let Mode::Strict(sig) = self.mode {
            let expected = sig.arity(symbol).expect("checked above");
            if expected != operands.len() {
                return Err(self.err(
                    start,
                    ParseErrorKind::Arity { symbol: symbol.to_string(), expected, found: operands.len() },
                ));
            }
        } else if operands.is_empty() {
            return Err(self.err(start, ParseErrorKind::Arity { symbol: symbol.to_string(), expected: 1, found: 0 }));
        }
        Ok(Formula::Apply(symbol.to_string(), operands))
    }

    fn valid_variable(&self, var: &str) -> bool {
        if self.template && matches!(var, "$cur" | "$next" | "$bound") {
            return true;
        }
        is_identifier(var)
    }

    fn leaf(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos;
        let word = self.word();
        if self.peek() == Some('{') {
            if !is_identifier(word) {
                return Err(self.err(start, ParseErrorKind::InvalidAtom(word.to_string())));
            }
            let key = self.key()?;
            return Ok(Formula::Indexed { base: word.to_string(), key });
        }
        if let Some(c) = Constant::from_symbol(word) {
            if let Mode::Strict(sig) = self.mode {
                if !sig.has_constant(c) {
                    return Err(self.err(start, ParseErrorKind::UnknownSymbol(word.to_string())));
                }
            }
            return Ok(Formula::Const(c));
        }
        if let Some(digits) = word.strip_prefix('#') {
            let ok = !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) && !digits.starts_with('0');
            if !ok {
                return Err(self.err(start, ParseErrorKind::InvalidAtom(word.to_string())));
            }
            if !self.template {
                return Err(self.err(start, ParseErrorKind::Placeholder(word.to_string())));
            }
            return Ok(Formula::Atom(word.to_string()));
        }
        if !is_identifier(word) {
            let kind = if super::RESERVED.contains(&word) {
                ParseErrorKind::UnknownSymbol(word.to_string())
            } else {
                ParseErrorKind::InvalidAtom(word.to_string())
            };
            return Err(self.err(start, kind));
        }
        if let Mode::Strict(sig) = self.mode {
            if !word.starts_with(&sig.atom_namespace) {
                return Err(self.err(start, ParseErrorKind::InvalidAtom(word.to_string())));
            }
        }
        Ok(Formula::Atom(word.to_string()))
    }

    /// Read a balanced `{...}` key and normalise it to canonical text.
    fn key(&mut self) -> Result<String, ParseError> {
        let open = self.pos;
        self.pos += 1;
        let start = self.pos;
        let mut depth = 1;
        while let Some(c) = self.peek() {
            self.pos += c.len_utf8();
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        let inner = &self.text[start..self.pos - 1];
                        return normalise_key(inner).map_err(|mut e| {
                            e.position += start;
                            e
                        });
                    }
                }
                _ => {}
            }
        }
        Err(self.err(open, ParseErrorKind::UnbalancedKey))
    }
}

fn normalise_key(inner: &str) -> Result<String, ParseError> {
    let mut pieces = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                pieces.push((start, &inner[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push((start, &inner[start..]));
    let mut rendered = Vec::new();
    for (offset, piece) in pieces {
        let f = parse_lenient(piece).map_err(|mut e| {
            e.position += offset;
            e
        })?;
        rendered.push(f.render());
    }
    Ok(rendered.join(","))
}
