//! Hand-written lexer and recursive-descent parser for the query grammar.

use super::ast::*;
use crate::graph::{is_valid_label, is_valid_relationship_type, PropertyValue};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {position}: found {found}, expected {expected}")]
    Syntax {
        position: usize,
        found: String,
        expected: String,
    },
    #[error("unbound variable `{name}` at offset {position}")]
    UnboundVariable { name: String, position: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Dot,
    Dash,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
    Star,
    Dollar,
    Ident(String),
    Str(String),
    Int(i64),
    Real(f64),
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Str(_) => "string literal".to_string(),
            Token::Int(i) => format!("`{i}`"),
            Token::Real(r) => format!("`{r}`"),
            Token::Eof => "end of input".to_string(),
            Token::LParen => "`(`".to_string(),
            Token::RParen => "`)`".to_string(),
            Token::LBracket => "`[`".to_string(),
            Token::RBracket => "`]`".to_string(),
            Token::LBrace => "`{`".to_string(),
            Token::RBrace => "`}`".to_string(),
            Token::Colon => "`:`".to_string(),
            Token::Comma => "`,`".to_string(),
            Token::Dot => "`.`".to_string(),
            Token::Dash => "`-`".to_string(),
            Token::Lt => "`<`".to_string(),
            Token::Gt => "`>`".to_string(),
            Token::Le => "`<=`".to_string(),
            Token::Ge => "`>=`".to_string(),
            Token::Eq => "`=`".to_string(),
            Token::Ne => "`<>`".to_string(),
            Token::Star => "`*`".to_string(),
            Token::Dollar => "`$`".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let offset = i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => tokens.push(Spanned { token: Token::LParen, offset }),
            ')' => tokens.push(Spanned { token: Token::RParen, offset }),
            '[' => tokens.push(Spanned { token: Token::LBracket, offset }),
            ']' => tokens.push(Spanned { token: Token::RBracket, offset }),
            '{' => tokens.push(Spanned { token: Token::LBrace, offset }),
            '}' => tokens.push(Spanned { token: Token::RBrace, offset }),
            ':' => tokens.push(Spanned { token: Token::Colon, offset }),
            ',' => tokens.push(Spanned { token: Token::Comma, offset }),
            '.' => tokens.push(Spanned { token: Token::Dot, offset }),
            '-' => tokens.push(Spanned { token: Token::Dash, offset }),
            '*' => tokens.push(Spanned { token: Token::Star, offset }),
            '$' => tokens.push(Spanned { token: Token::Dollar, offset }),
            '=' => tokens.push(Spanned { token: Token::Eq, offset }),
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Spanned { token: Token::Ge, offset });
                    i += 1;
                } else {
                    tokens.push(Spanned { token: Token::Gt, offset });
                }
            }
            '<' => match bytes.get(i + 1) {
                Some(&b'=') => {
                    tokens.push(Spanned { token: Token::Le, offset });
                    i += 1;
                }
                Some(&b'>') => {
                    tokens.push(Spanned { token: Token::Ne, offset });
                    i += 1;
                }
                _ => tokens.push(Spanned { token: Token::Lt, offset }),
            },
            '\'' | '"' => {
                let quote = c;
                let mut value = String::new();
                let mut j = i + 1;
                let mut closed = false;
                while j < bytes.len() {
                    let ch = text[j..].chars().next().unwrap();
                    if ch == '\\' {
                        let esc = text[j + 1..].chars().next().ok_or(ParseError::Syntax {
                            position: j,
                            found: "end of input".into(),
                            expected: "escape character".into(),
                        })?;
                        value.push(match esc {
                            'n' => '\n',
                            'r' => '\r',
                            't' => '\t',
                            other => other,
                        });
                        j += 1 + esc.len_utf8();
                    } else if ch == quote {
                        closed = true;
                        j += 1;
                        break;
                    } else {
                        value.push(ch);
                        j += ch.len_utf8();
                    }
                }
                if !closed {
                    return Err(ParseError::Syntax {
                        position: offset,
                        found: "unterminated string".into(),
                        expected: format!("closing `{quote}`"),
                    });
                }
                tokens.push(Spanned { token: Token::Str(value), offset });
                i = j;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                let mut is_real = false;
                while j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                    j += 1;
                }
                if j < bytes.len()
                    && bytes[j] == b'.'
                    && j + 1 < bytes.len()
                    && (bytes[j + 1] as char).is_ascii_digit()
                {
                    is_real = true;
                    j += 1;
                    while j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        j += 1;
                    }
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && (bytes[k] as char).is_ascii_digit() {
                        is_real = true;
                        j = k;
                        while j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                            j += 1;
                        }
                    }
                }
                let literal = &text[i..j];
                let token = if is_real {
                    Token::Real(literal.parse().map_err(|_| ParseError::Syntax {
                        position: offset,
                        found: format!("`{literal}`"),
                        expected: "a real literal".into(),
                    })?)
                } else {
                    Token::Int(literal.parse().map_err(|_| ParseError::Syntax {
                        position: offset,
                        found: format!("`{literal}`"),
                        expected: "an integer literal".into(),
                    })?)
                };
                tokens.push(Spanned { token, offset });
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len() {
                    let ch = bytes[j] as char;
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        j += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Spanned {
                    token: Token::Ident(text[i..j].to_string()),
                    offset,
                });
                i = j;
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    position: offset,
                    found: format!("`{other}`"),
                    expected: "a query token".into(),
                });
            }
        }
        i += 1;
    }
    tokens.push(Spanned { token: Token::Eof, offset: text.len() });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn peek_offset(&self) -> usize {
        self.tokens[self.pos].offset
    }

    fn advance(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.peek_offset(),
            found: self.peek().describe(),
            expected: expected.to_string(),
        })
    }

    fn expect(&mut self, token: Token, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == token {
            self.advance();
            Ok(())
        } else {
            self.error(expected)
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        if self.peek_is_keyword(word) {
            self.advance();
            Ok(())
        } else {
            self.error(&format!("keyword {word}"))
        }
    }

    fn peek_is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Token::Ident(s) if s.eq_ignore_ascii_case(word))
    }

    fn ident(&mut self, expected: &str) -> Result<String, ParseError> {
        match self.peek() {
            Token::Ident(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => self.error(expected),
        }
    }

    fn value(&mut self) -> Result<ConstraintValue, ParseError> {
        match self.peek().clone() {
            Token::Dollar => {
                self.advance();
                let name = self.ident("a parameter name")?;
                Ok(ConstraintValue::Parameter(name))
            }
            Token::Str(s) => {
                self.advance();
                Ok(ConstraintValue::Literal(PropertyValue::Text(s)))
            }
            Token::Int(i) => {
                self.advance();
                Ok(ConstraintValue::Literal(PropertyValue::Integer(i)))
            }
            Token::Real(r) => {
                self.advance();
                Ok(ConstraintValue::Literal(PropertyValue::Real(r)))
            }
            Token::Dash => {
                self.advance();
                match self.peek().clone() {
                    Token::Int(i) => {
                        self.advance();
                        Ok(ConstraintValue::Literal(PropertyValue::Integer(-i)))
                    }
                    Token::Real(r) => {
                        self.advance();
                        Ok(ConstraintValue::Literal(PropertyValue::Real(-r)))
                    }
                    _ => self.error("a numeric literal after `-`"),
                }
            }
            Token::Ident(s) if s.eq_ignore_ascii_case("true") => {
                self.advance();
                Ok(ConstraintValue::Literal(PropertyValue::Boolean(true)))
            }
            Token::Ident(s) if s.eq_ignore_ascii_case("false") => {
                self.advance();
                Ok(ConstraintValue::Literal(PropertyValue::Boolean(false)))
            }
            _ => self.error("a literal or `$parameter`"),
        }
    }

    fn node_pattern(&mut self) -> Result<NodePattern, ParseError> {
        self.expect(Token::LParen, "`(` starting a node pattern")?;
        let mut pattern = NodePattern::default();
        if let Token::Ident(_) = self.peek() {
            pattern.variable = Some(self.ident("a variable")?);
        }
        if *self.peek() == Token::Colon {
            self.advance();
            let offset = self.peek_offset();
            let label = self.ident("a node label")?;
            if !is_valid_label(&label) {
                return Err(ParseError::Syntax {
                    position: offset,
                    found: format!("`{label}`"),
                    expected: "a label matching [A-Za-z][A-Za-z0-9_]*".into(),
                });
            }
            pattern.label = Some(label);
        }
        if *self.peek() == Token::LBrace {
            self.advance();
            loop {
                let name = self.ident("a property name")?;
                self.expect(Token::Colon, "`:` after the property name")?;
                let value = self.value()?;
                pattern.constraints.push((name, value));
                if *self.peek() == Token::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
            self.expect(Token::RBrace, "`}` closing the property map")?;
        }
        self.expect(Token::RParen, "`)` closing the node pattern")?;
        Ok(pattern)
    }

    fn rel_body(&mut self) -> Result<Option<String>, ParseError> {
        self.expect(Token::LBracket, "`[` starting a relationship pattern")?;
        let mut rel_type = None;
        if *self.peek() == Token::Colon {
            self.advance();
            let offset = self.peek_offset();
            let name = self.ident("a relationship type")?;
            if !is_valid_relationship_type(&name) {
                return Err(ParseError::Syntax {
                    position: offset,
                    found: format!("`{name}`"),
                    expected: "a relationship type matching [A-Z][A-Z0-9_]*".into(),
                });
            }
            rel_type = Some(name);
        }
        self.expect(Token::RBracket, "`]` closing the relationship pattern")?;
        Ok(rel_type)
    }

    /// Parses `-[..]->`, `<-[..]-` or `-[..]-`.
    fn rel_pattern(&mut self) -> Result<RelPattern, ParseError> {
        if *self.peek() == Token::Lt {
            self.advance();
            self.expect(Token::Dash, "`-` after `<`")?;
            let rel_type = self.rel_body()?;
            self.expect(Token::Dash, "`-` after `]`")?;
            if *self.peek() == Token::Gt {
                return self.error("a node pattern (a relationship cannot point both ways)");
            }
            Ok(RelPattern { rel_type, direction: RelDirection::Incoming })
        } else {
            self.expect(Token::Dash, "`-` starting a relationship pattern")?;
            let rel_type = self.rel_body()?;
            self.expect(Token::Dash, "`-` after `]`")?;
            let direction = if *self.peek() == Token::Gt {
                self.advance();
                RelDirection::Outgoing
            } else {
                RelDirection::Undirected
            };
            Ok(RelPattern { rel_type, direction })
        }
    }

    fn path_pattern(&mut self) -> Result<PathPattern, ParseError> {
        let mut nodes = vec![self.node_pattern()?];
        let mut rels = Vec::new();
        while matches!(self.peek(), Token::Dash | Token::Lt) {
            rels.push(self.rel_pattern()?);
            nodes.push(self.node_pattern()?);
        }
        Ok(PathPattern { nodes, rels })
    }

    fn predicate(&mut self) -> Result<Predicate, ParseError> {
        let variable = self.ident("a variable")?;
        self.expect(Token::Dot, "`.` after the variable")?;
        let property = self.ident("a property name")?;
        let comparator = match self.peek() {
            Token::Eq => Comparator::Eq,
            Token::Ne => Comparator::Ne,
            Token::Lt => Comparator::Lt,
            Token::Le => Comparator::Le,
            Token::Gt => Comparator::Gt,
            Token::Ge => Comparator::Ge,
            _ => return self.error("a comparison operator"),
        };
        self.advance();
        let value = self.value()?;
        Ok(Predicate { variable, property, comparator, value })
    }

    fn return_clause(&mut self) -> Result<ReturnClause, ParseError> {
        if *self.peek() == Token::Star {
            self.advance();
            return Ok(ReturnClause::All);
        }
        let mut items = Vec::new();
        loop {
            let variable = self.ident("a return item")?;
            let property = if *self.peek() == Token::Dot {
                self.advance();
                Some(self.ident("a property name")?)
            } else {
                None
            };
            items.push(ReturnItem { variable, property });
            if *self.peek() == Token::Comma {
                self.advance();
            } else {
                break;
            }
        }
        Ok(ReturnClause::Items(items))
    }

    fn query(&mut self) -> Result<QueryAst, ParseError> {
        self.keyword("MATCH")?;
        let mut paths = vec![self.path_pattern()?];
        while *self.peek() == Token::Comma {
            self.advance();
            paths.push(self.path_pattern()?);
        }
        let mut predicates = Vec::new();
        if self.peek_is_keyword("WHERE") {
            self.advance();
            predicates.push(self.predicate()?);
            while self.peek_is_keyword("AND") {
                self.advance();
                predicates.push(self.predicate()?);
            }
        }
        self.keyword("RETURN")?;
        let returns = self.return_clause()?;
        if *self.peek() != Token::Eof {
            return self.error("end of query");
        }
        Ok(QueryAst { paths, predicates, returns })
    }
}

/// Parses query text into an AST, checking that every variable used in the
/// WHERE and RETURN clauses is bound by some pattern.
pub fn parse(text: &str) -> Result<QueryAst, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let ast = parser.query()?;

    let bound = ast.variables();
    for pred in &ast.predicates {
        if !bound.contains(&pred.variable.as_str()) {
            return Err(ParseError::UnboundVariable {
                name: pred.variable.clone(),
                position: 0,
            });
        }
    }
    if let ReturnClause::Items(items) = &ast.returns {
        for item in items {
            if !bound.contains(&item.variable.as_str()) {
                return Err(ParseError::UnboundVariable {
                    name: item.variable.clone(),
                    position: 0,
                });
            }
        }
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::super::unparse;
    use super::*;

    #[test]
    fn parses_generator_one_liner() {
        let ast =
            parse("MATCH(n:Preventive)-[:ACTION]->(p)-[:FOR]->(q:Generator) RETURN n,p,q").unwrap();
        assert_eq!(ast.paths.len(), 1);
        let path = &ast.paths[0];
        assert_eq!(path.nodes.len(), 3);
        assert_eq!(path.rels.len(), 2);
        assert_eq!(path.nodes[0].label.as_deref(), Some("Preventive"));
        assert_eq!(path.rels[0].rel_type.as_deref(), Some("ACTION"));
        assert_eq!(path.rels[0].direction, RelDirection::Outgoing);
        assert_eq!(path.rels[1].rel_type.as_deref(), Some("FOR"));
        assert_eq!(path.nodes[2].label.as_deref(), Some("Generator"));
        match &ast.returns {
            ReturnClause::Items(items) => {
                let names: Vec<_> = items.iter().map(|i| i.variable.as_str()).collect();
                assert_eq!(names, ["n", "p", "q"]);
            }
            other => panic!("unexpected return clause {other:?}"),
        }
    }

    #[test]
    fn parses_anonymous_node() {
        let ast = parse("MATCH (n) RETURN n").unwrap();
        assert_eq!(ast.paths[0].nodes[0].variable.as_deref(), Some("n"));
        assert_eq!(ast.paths[0].nodes[0].label, None);
        let anon = parse("MATCH () RETURN *").unwrap();
        assert_eq!(anon.paths[0].nodes[0], NodePattern::default());
    }

    #[test]
    fn parses_undirected_and_untyped_rels() {
        let ast = parse("MATCH(n:Preventive)-[:ACTION]-(p)-[]-(q:Blades) RETURN *").unwrap();
        assert_eq!(ast.paths[0].rels[0].direction, RelDirection::Undirected);
        assert_eq!(ast.paths[0].rels[1].rel_type, None);
        assert_eq!(ast.returns, ReturnClause::All);
    }

    #[test]
    fn parses_parameters_and_where() {
        let ast = parse(
            "MATCH(n:Corrective)-[:ACTION]->(p)-[:FOR]->(q)-[:RELATESTO]-(r:Feature) \
             WHERE r.description = $description RETURN *",
        )
        .unwrap();
        assert_eq!(ast.predicates.len(), 1);
        assert_eq!(
            ast.predicates[0].value,
            ConstraintValue::Parameter("description".into())
        );

        let ast = parse("MATCH(r:Feature{name:$name}) RETURN r").unwrap();
        assert_eq!(
            ast.paths[0].nodes[0].constraints,
            vec![("name".to_string(), ConstraintValue::Parameter("name".into()))]
        );
    }

    #[test]
    fn unclosed_paren_is_syntax_error_at_position() {
        match parse("MATCH (n RETURN n") {
            Err(ParseError::Syntax { position, .. }) => {
                // the RETURN keyword is where a `)` was expected
                assert_eq!(position, 9);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unbound_variables_rejected() {
        assert!(matches!(
            parse("MATCH (n) WHERE m.x = 1 RETURN n"),
            Err(ParseError::UnboundVariable { .. })
        ));
        assert!(matches!(
            parse("MATCH (n) RETURN m"),
            Err(ParseError::UnboundVariable { .. })
        ));
    }

    #[test]
    fn keywords_case_insensitive_identifiers_not() {
        let a = parse("match (n:Feature) return n").unwrap();
        let b = parse("MATCH (n:Feature) RETURN n").unwrap();
        assert_eq!(a, b);
        assert_ne!(
            parse("MATCH (n:feature) RETURN n").unwrap(),
            parse("MATCH (n:Feature) RETURN n").unwrap()
        );
    }

    #[test]
    fn unparse_is_canonical_and_reparses() {
        let text = "match ( n : Preventive ) - [ : ACTION ] -> ( p ) return n , p";
        let ast = parse(text).unwrap();
        let canonical = unparse(&ast);
        assert_eq!(canonical, "MATCH(n:Preventive)-[:ACTION]->(p) RETURN n,p");
        assert_eq!(parse(&canonical).unwrap(), ast);
    }

    #[test]
    fn unparse_keeps_compact_property_maps() {
        let ast = parse(
            "MATCH(n:Corrective)-[:ACTION]->(p)-[:FOR]->(q)-[:AFFECTS]-(r{fno:$fno}) RETURN p,q,r",
        )
        .unwrap();
        let text = unparse(&ast);
        assert!(text.contains("{fno:$fno}"), "got: {text}");
        assert_eq!(parse(&text).unwrap(), ast);
    }

    #[test]
    fn literals_round_trip() {
        let ast = parse(
            "MATCH (n{a:\"it \\\"q\\\" x\",b:-42,c:2.5,d:true,e:1e3}) WHERE n.f <> -0.5 RETURN n",
        )
        .unwrap();
        assert_eq!(parse(&unparse(&ast)).unwrap(), ast);
        assert_eq!(
            ast.paths[0].nodes[0].constraints[4].1,
            ConstraintValue::Literal(PropertyValue::Real(1000.0))
        );
    }
}
