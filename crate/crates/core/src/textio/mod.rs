//! Textual concrete syntax: model files, environment import files and the
//! canonical printer.
//!
//! ```text
//! model       := ("rlml" | "rlml_comparator") IDENT "{" env_block agent_block+ "}"
//! env_block   := "environment" "{" entry* "}" | "environment" "from" STRING
//! entry       := ("states" | "actions" | "rewards" | "terminal_states") ":" list
//! agent_block := "agent" ALGO "{" (KEY ":" NUMBER)* "}"
//! ```
//!
//! `#` starts a comment running to the end of the line. Whitespace and line
//! breaks between tokens are not significant.

mod lexer;
mod printer;

use lexer::{tokenize, Token, TokenKind};
pub use printer::{format_number, print_environment_body, print_model};

use crate::model::{
    is_identifier, AgentSpec, AlgorithmKind, ComparatorModel, EnvironmentSpec, Hyperparameters,
    InputSource, Model, RlmlModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        SourceSpan {
            line,
            column,
            length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}:{}: {message}", span.line, span.column)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Option<String>,
}

impl ParseError {
    pub fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected: None,
        }
    }

    fn expected(span: SourceSpan, expected: impl Into<String>, found: &TokenKind) -> Self {
        let expected = expected.into();
        ParseError {
            span,
            message: format!("expected {expected}, found {}", found.describe()),
            expected: Some(expected),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnvFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("missing section `{0}`")]
    MissingSection(String),
}

/// Parse a `rlml` or `rlml_comparator` document.
pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    let mut p = Parser::new(text)?;
    let model = p.model()?;
    p.expect_eof()?;
    Ok(model)
}

/// Parse an environment import file: the four environment entries, in any
/// order, without the surrounding block.
pub fn parse_env_file(text: &str) -> Result<EnvironmentSpec, EnvFileError> {
    let mut p = Parser::new(text)?;
    let (entries, _) = p.env_entries(&TokenKind::Eof)?;
    entries.finish().map_err(EnvFileError::MissingSection)
}

const ENV_KEYS: [&str; 4] = ["states", "actions", "rewards", "terminal_states"];
const AGENT_KEYS: [&str; 5] = ["alpha", "gamma", "epsilon", "total_episodes", "beta"];

#[derive(Default)]
struct EnvEntries {
    states: Option<Vec<String>>,
    actions: Option<Vec<Vec<i64>>>,
    rewards: Option<Vec<Vec<f64>>>,
    terminal_states: Option<Vec<String>>,
}

impl EnvEntries {
    fn has(&self, key: &str) -> bool {
        match key {
            "states" => self.states.is_some(),
            "actions" => self.actions.is_some(),
            "rewards" => self.rewards.is_some(),
            _ => self.terminal_states.is_some(),
        }
    }

    fn finish(self) -> Result<EnvironmentSpec, String> {
        Ok(EnvironmentSpec {
            states: self.states.ok_or("states")?,
            actions: self.actions.ok_or("actions")?,
            rewards: self.rewards.ok_or("rewards")?,
            terminal_states: self.terminal_states.ok_or("terminal_states")?,
        })
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if !matches!(tok.kind, TokenKind::Eof) {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        let tok = self.bump();
        if tok.kind == kind {
            Ok(tok)
        } else {
            Err(ParseError::expected(tok.span, kind.describe(), &tok.kind))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        let tok = self.peek();
        if tok.kind == TokenKind::Eof {
            Ok(())
        } else {
            Err(ParseError::expected(tok.span, "end of input", &tok.kind))
        }
    }

    fn atom(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        let tok = self.bump();
        match tok.kind {
            TokenKind::Atom(a) => Ok((a, tok.span)),
            other => Err(ParseError::expected(tok.span, what, &other)),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<SourceSpan, ParseError> {
        let tok = self.bump();
        match &tok.kind {
            TokenKind::Atom(a) if a == word => Ok(tok.span),
            other => Err(ParseError::expected(tok.span, format!("`{word}`"), other)),
        }
    }

    fn model(&mut self) -> Result<Model, ParseError> {
        let (root, root_span) = self.atom("`rlml` or `rlml_comparator`")?;
        let comparator = match root.as_str() {
            "rlml" => false,
            "rlml_comparator" => true,
            _ => {
                return Err(ParseError::expected(
                    root_span,
                    "`rlml` or `rlml_comparator`",
                    &TokenKind::Atom(root),
                ))
            }
        };
        let (name, name_span) = self.atom("model name")?;
        if !is_identifier(&name) {
            return Err(ParseError {
                span: name_span,
                message: format!("invalid model name `{name}`"),
                expected: Some("identifier".into()),
            });
        }
        self.expect(TokenKind::LBrace)?;
        let (environment, input_source) = self.env_block()?;

        let mut agents = Vec::new();
        while matches!(&self.peek().kind, TokenKind::Atom(a) if a == "agent") {
            agents.push(self.agent_block()?);
        }
        let close = self.peek().clone();
        if close.kind != TokenKind::RBrace {
            let what = if agents.is_empty() {
                "`agent`"
            } else {
                "`agent` or `}`"
            };
            return Err(ParseError::expected(close.span, what, &close.kind));
        }
        if comparator && agents.len() < 2 {
            return Err(ParseError {
                span: close.span,
                message: "expected at least 2 agent blocks".into(),
                expected: Some("`agent`".into()),
            });
        }
        if !comparator && agents.len() != 1 {
            return Err(ParseError::new(
                close.span,
                "expected exactly one agent block (use `rlml_comparator` for several)",
            ));
        }
        self.bump();

        Ok(if comparator {
            Model::Comparator(ComparatorModel {
                name,
                environment,
                agents,
                input_source,
            })
        } else {
            Model::Single(RlmlModel {
                name,
                environment,
                agent: agents.remove(0),
                input_source,
            })
        })
    }

    fn env_block(&mut self) -> Result<(EnvironmentSpec, InputSource), ParseError> {
        self.keyword("environment")?;
        let tok = self.bump();
        match tok.kind {
            TokenKind::LBrace => {
                let (entries, close) = self.env_entries(&TokenKind::RBrace)?;
                self.bump();
                let env = entries.finish().map_err(|key| {
                    ParseError::new(close, format!("missing `{key}` entry in environment"))
                })?;
                Ok((env, InputSource::Inline))
            }
            TokenKind::Atom(ref a) if a == "from" => {
                let path = self.bump();
                match path.kind {
                    TokenKind::Str(p) => Ok((EnvironmentSpec::default(), InputSource::File(p))),
                    other => Err(ParseError::expected(path.span, "file path string", &other)),
                }
            }
            other => Err(ParseError::expected(tok.span, "`{` or `from`", &other)),
        }
    }

    /// Reads entries up to (not including) `end`; returns the span of `end`.
    fn env_entries(&mut self, end: &TokenKind) -> Result<(EnvEntries, SourceSpan), ParseError> {
        let mut entries = EnvEntries::default();
        loop {
            let tok = self.peek().clone();
            if &tok.kind == end {
                return Ok((entries, tok.span));
            }
            let (key, span) = self.atom(&format!("environment entry or {}", end.describe()))?;
            if !ENV_KEYS.contains(&key.as_str()) {
                return Err(ParseError {
                    span,
                    message: format!("unknown environment entry `{key}`"),
                    expected: Some(ENV_KEYS.join(", ")),
                });
            }
            if entries.has(&key) {
                return Err(ParseError::new(span, format!("duplicate entry `{key}`")));
            }
            self.expect(TokenKind::Colon)?;
            match key.as_str() {
                "states" => entries.states = Some(self.list(Self::state_name)?),
                "terminal_states" => entries.terminal_states = Some(self.list(Self::state_name)?),
                "actions" => {
                    entries.actions = Some(self.list(|p| p.list(Self::integer))?);
                }
                _ => entries.rewards = Some(self.list(|p| p.list(Self::number))?),
            }
        }
    }

    /// `[ item (, item)* ,? ]` or `[]`.
    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.expect(TokenKind::LBracket)?;
        let mut out = Vec::new();
        loop {
            if self.peek().kind == TokenKind::RBracket {
                self.bump();
                return Ok(out);
            }
            out.push(item(self)?);
            let tok = self.bump();
            match tok.kind {
                TokenKind::Comma => {}
                TokenKind::RBracket => return Ok(out),
                other => return Err(ParseError::expected(tok.span, "`,` or `]`", &other)),
            }
        }
    }

    fn state_name(&mut self) -> Result<String, ParseError> {
        let tok = self.bump();
        match tok.kind {
            TokenKind::Atom(a) | TokenKind::Str(a) => Ok(a),
            other => Err(ParseError::expected(tok.span, "state name", &other)),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let tok = self.bump();
        match &tok.kind {
            TokenKind::Atom(a) => a.parse::<i64>().map_err(|_| ParseError {
                span: tok.span,
                message: format!("invalid state index `{a}`"),
                expected: Some("integer".into()),
            }),
            other => Err(ParseError::expected(tok.span, "integer", other)),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let tok = self.bump();
        match &tok.kind {
            TokenKind::Atom(a) => parse_number(a).ok_or_else(|| ParseError {
                span: tok.span,
                message: format!("invalid number `{a}`"),
                expected: Some("number".into()),
            }),
            other => Err(ParseError::expected(tok.span, "number", other)),
        }
    }

    fn agent_block(&mut self) -> Result<AgentSpec, ParseError> {
        self.keyword("agent")?;
        let (algo, span) = self.atom("algorithm name")?;
        let algorithm = algo.parse::<AlgorithmKind>().map_err(|e| ParseError {
            span,
            message: e.to_string(),
            expected: Some("QLearning, SARSA, ActorCritic or MonteCarlo".into()),
        })?;
        self.expect(TokenKind::LBrace)?;

        let mut values: [Option<f64>; 4] = [None; 4];
        let mut total_episodes = None;
        loop {
            let tok = self.peek().clone();
            if tok.kind == TokenKind::RBrace {
                self.bump();
                break;
            }
            let (key, key_span) = self.atom("hyperparameter name or `}`")?;
            let Some(slot) = AGENT_KEYS.iter().position(|k| *k == key) else {
                return Err(ParseError {
                    span: key_span,
                    message: format!("unknown hyperparameter `{key}`"),
                    expected: Some(AGENT_KEYS.join(", ")),
                });
            };
            self.expect(TokenKind::Colon)?;
            let duplicate = match slot {
                3 => total_episodes.is_some(),
                4 => values[3].is_some(),
                i => values[i].is_some(),
            };
            if duplicate {
                return Err(ParseError::new(
                    key_span,
                    format!("duplicate hyperparameter `{key}`"),
                ));
            }
            if slot == 3 {
                let tok = self.bump();
                let parsed = match &tok.kind {
                    TokenKind::Atom(a) => a.parse::<u64>().ok(),
                    _ => None,
                };
                total_episodes = Some(parsed.ok_or_else(|| ParseError {
                    span: tok.span,
                    message: format!("invalid total_episodes {}", tok.kind.describe()),
                    expected: Some("non-negative integer".into()),
                })?);
            } else {
                let v = self.number()?;
                values[if slot == 4 { 3 } else { slot }] = Some(v);
            }
        }

        let close = self.tokens[self.pos - 1].span;
        let missing = |key: &str| ParseError::new(close, format!("missing hyperparameter `{key}`"));
        Ok(AgentSpec {
            algorithm,
            hyperparameters: Hyperparameters {
                alpha: values[0].ok_or_else(|| missing("alpha"))?,
                gamma: values[1].ok_or_else(|| missing("gamma"))?,
                epsilon: values[2].ok_or_else(|| missing("epsilon"))?,
                total_episodes: total_episodes.ok_or_else(|| missing("total_episodes"))?,
                beta: values[3],
            },
        })
    }
}

fn parse_number(atom: &str) -> Option<f64> {
    let first = atom.chars().next()?;
    if !(first.is_ascii_digit() || matches!(first, '-' | '+' | '.')) {
        return None;
    }
    atom.parse::<f64>().ok().filter(|v| v.is_finite())
}
