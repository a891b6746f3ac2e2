//! Declaration parser for the Solidity subset.
//!
//! Recognised at file scope: `pragma`, `import` (ignored), and
//! `contract | library | interface | abstract contract NAME is BASE, ... { ... }`.
//! Inside a contract body: state variables, `function`/`constructor`/
//! `modifier`/`fallback`/`receive` with brace-balanced bodies, `using`
//! directives, and `event`/`error`/`struct`/`enum` declarations. Anything
//! else is skipped by brace or semicolon balancing, never by abort.

use std::collections::BTreeMap;
use std::ops::Range;

use super::lexer::{Token, TokenKind};
use super::{ContractKind, ExtractError, FunctionKind, Visibility};

#[derive(Debug, Clone)]
pub struct ParsedContract {
    pub name: String,
    pub kind: ContractKind,
    pub bases: Vec<String>,
    /// state variable name -> core type identifier (mappings/arrays stripped
    /// to the element identifier)
    pub state_var_types: BTreeMap<String, String>,
    /// libraries named in `using L for T;` directives
    pub usings: Vec<String>,
    pub functions: Vec<ParsedFunction>,
}

#[derive(Debug, Clone)]
pub struct ParsedFunction {
    pub name: String,
    pub kind: FunctionKind,
    pub visibility: Visibility,
    /// disambiguates overloads in source order, 0-based
    pub ordinal: u32,
    /// parameter name -> core type identifier
    pub params: Vec<(String, String)>,
    /// token range of the body, exclusive of the outer braces
    pub body: Option<Range<usize>>,
}

#[derive(Debug, Clone, Default)]
pub struct ParsedUnit {
    pub pragma_versions: Vec<String>,
    pub contracts: Vec<ParsedContract>,
}

pub fn parse_declarations(tokens: &[Token], file: &str) -> Result<ParsedUnit, ExtractError> {
    let mut unit = ParsedUnit::default();
    let mut i = 0usize;
    while i < tokens.len() {
        match tokens[i].ident() {
            Some("pragma") => {
                let end = scan_to_semicolon(tokens, i);
                let version = render_tokens(&tokens[i + 1..end.min(tokens.len())]);
                unit.pragma_versions.push(version);
                i = end + 1;
            }
            Some("import") => {
                i = scan_to_semicolon(tokens, i) + 1;
            }
            Some("abstract") if peek_is(tokens, i + 1, "contract") => {
                let (contract, next) =
                    parse_contract(tokens, i + 1, ContractKind::AbstractContract, file)?;
                unit.contracts.push(contract);
                i = next;
            }
            Some("contract") => {
                let (contract, next) = parse_contract(tokens, i, ContractKind::Contract, file)?;
                unit.contracts.push(contract);
                i = next;
            }
            Some("library") => {
                let (contract, next) = parse_contract(tokens, i, ContractKind::Library, file)?;
                unit.contracts.push(contract);
                i = next;
            }
            Some("interface") => {
                let (contract, next) = parse_contract(tokens, i, ContractKind::Interface, file)?;
                unit.contracts.push(contract);
                i = next;
            }
            _ => {
                // free functions, file-level constants, user-defined value
                // types, file-level using: skip one construct
                i = skip_construct(tokens, i, file)?;
            }
        }
    }
    Ok(unit)
}

fn peek_is(tokens: &[Token], i: usize, ident: &str) -> bool {
    tokens.get(i).map(|t| t.is_ident(ident)).unwrap_or(false)
}

fn render_tokens(tokens: &[Token]) -> String {
    let mut out = String::new();
    for t in tokens {
        match &t.kind {
            TokenKind::Ident(s) => {
                if !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(s);
            }
            TokenKind::Number(s) => out.push_str(s),
            TokenKind::Str => out.push_str("\"…\""),
            TokenKind::Punct(c) => out.push(*c),
        }
    }
    out
}

/// Index of the next `;` at the current nesting depth (or len when missing).
fn scan_to_semicolon(tokens: &[Token], mut i: usize) -> usize {
    let mut depth = 0i32;
    while i < tokens.len() {
        match tokens[i].kind {
            TokenKind::Punct('{') | TokenKind::Punct('(') | TokenKind::Punct('[') => depth += 1,
            TokenKind::Punct('}') | TokenKind::Punct(')') | TokenKind::Punct(']') => depth -= 1,
            TokenKind::Punct(';') if depth <= 0 => return i,
            _ => {}
        }
        i += 1;
    }
    tokens.len()
}

/// Skip a balanced `{ ... }` starting at the opening brace; returns the index
/// one past the matching close.
fn skip_braces(tokens: &[Token], open: usize, file: &str) -> Result<usize, ExtractError> {
    debug_assert!(tokens[open].is_punct('{'));
    let mut depth = 0i32;
    let mut i = open;
    while i < tokens.len() {
        if tokens[i].is_punct('{') {
            depth += 1;
        } else if tokens[i].is_punct('}') {
            depth -= 1;
            if depth == 0 {
                return Ok(i + 1);
            }
        }
        i += 1;
    }
    Err(ExtractError::Parse {
        file: file.to_string(),
        line: tokens[open].line,
        message: "unbalanced braces".into(),
    })
}

/// Skip an unrecognised construct: to the first of `;` or a balanced brace
/// block at depth zero.
fn skip_construct(tokens: &[Token], start: usize, file: &str) -> Result<usize, ExtractError> {
    let mut i = start;
    let mut depth = 0i32;
    while i < tokens.len() {
        match tokens[i].kind {
            TokenKind::Punct('(') | TokenKind::Punct('[') => depth += 1,
            TokenKind::Punct(')') | TokenKind::Punct(']') => depth -= 1,
            TokenKind::Punct(';') if depth <= 0 => return Ok(i + 1),
            TokenKind::Punct('{') if depth <= 0 => return skip_braces(tokens, i, file),
            _ => {}
        }
        i += 1;
    }
    Ok(tokens.len())
}

/// Parse `contract NAME is A, B(…) { members }`, cursor at the kind keyword.
fn parse_contract(
    tokens: &[Token],
    kw: usize,
    kind: ContractKind,
    file: &str,
) -> Result<(ParsedContract, usize), ExtractError> {
    let line = tokens[kw].line;
    let name = match tokens.get(kw + 1).and_then(|t| t.ident()) {
        Some(n) => n.to_string(),
        None => {
            return Err(ExtractError::Parse {
                file: file.to_string(),
                line,
                message: "expected contract name".into(),
            })
        }
    };
    let mut i = kw + 2;
    let mut bases = Vec::new();
    if peek_is(tokens, i, "is") {
        i += 1;
        // base list: IDENT [ (args) ] [, ...] up to `{`
        while i < tokens.len() && !tokens[i].is_punct('{') {
            if let Some(base) = tokens[i].ident() {
                if !bases.iter().any(|b| b == base) {
                    bases.push(base.to_string());
                }
                i += 1;
                if i < tokens.len() && tokens[i].is_punct('(') {
                    i = skip_group(tokens, i, '(', ')', file)?;
                }
            } else {
                i += 1; // commas, stray punctuation
            }
        }
    } else {
        while i < tokens.len() && !tokens[i].is_punct('{') {
            i += 1;
        }
    }
    if i >= tokens.len() {
        return Err(ExtractError::Parse {
            file: file.to_string(),
            line,
            message: format!("missing body for contract {name}"),
        });
    }
    let body_end = skip_braces(tokens, i, file)?;
    let mut contract = ParsedContract {
        name,
        kind,
        bases,
        state_var_types: BTreeMap::new(),
        usings: Vec::new(),
        functions: Vec::new(),
    };
    parse_members(tokens, i + 1, body_end - 1, &mut contract, file)?;
    Ok((contract, body_end))
}

/// Skip a balanced group opened by `open_c` at `open`; returns index one past
/// the matching closer.
fn skip_group(
    tokens: &[Token],
    open: usize,
    open_c: char,
    close_c: char,
    file: &str,
) -> Result<usize, ExtractError> {
    let mut depth = 0i32;
    let mut i = open;
    while i < tokens.len() {
        if tokens[i].is_punct(open_c) {
            depth += 1;
        } else if tokens[i].is_punct(close_c) {
            depth -= 1;
            if depth == 0 {
                return Ok(i + 1);
            }
        }
        i += 1;
    }
    Err(ExtractError::Parse {
        file: file.to_string(),
        line: tokens[open].line,
        message: "unbalanced parentheses".into(),
    })
}

fn parse_members(
    tokens: &[Token],
    start: usize,
    end: usize,
    contract: &mut ParsedContract,
    file: &str,
) -> Result<(), ExtractError> {
    let mut i = start;
    while i < end {
        let tok = &tokens[i];
        match tok.ident() {
            Some("function") => i = parse_function(tokens, i, end, contract, file)?,
            Some("constructor") => {
                i = parse_callable(tokens, i, end, contract, file, "constructor", FunctionKind::Constructor)?
            }
            Some("modifier") => {
                let name = tokens
                    .get(i + 1)
                    .and_then(|t| t.ident())
                    .unwrap_or("modifier")
                    .to_string();
                i = parse_callable(tokens, i + 1, end, contract, file, &name, FunctionKind::Modifier)?
            }
            Some("fallback") => {
                i = parse_callable(tokens, i, end, contract, file, "fallback", FunctionKind::Fallback)?
            }
            Some("receive") => {
                i = parse_callable(tokens, i, end, contract, file, "receive", FunctionKind::Receive)?
            }
            Some("using") => {
                // using L for T;   |   using {a, b} for T;
                if let Some(lib) = tokens.get(i + 1).and_then(|t| t.ident()) {
                    contract.usings.push(lib.to_string());
                }
                i = scan_to_semicolon(tokens, i) + 1;
            }
            Some("event") | Some("error") => {
                i = scan_to_semicolon(tokens, i) + 1;
            }
            Some("struct") | Some("enum") => {
                // skip to and over the brace block
                let mut j = i;
                while j < end && !tokens[j].is_punct('{') {
                    j += 1;
                }
                i = if j < end { skip_braces(tokens, j, file)? } else { end };
            }
            _ => {
                // candidate state variable: TYPE NAME ... ;
                if let Some((var, core)) = try_state_variable(tokens, i, end) {
                    contract.state_var_types.insert(var, core);
                }
                i = skip_construct_in(tokens, i, end, file)?;
            }
        }
    }
    Ok(())
}

/// `skip_construct` bounded by `end`.
fn skip_construct_in(
    tokens: &[Token],
    start: usize,
    end: usize,
    file: &str,
) -> Result<usize, ExtractError> {
    let mut i = start;
    let mut depth = 0i32;
    while i < end {
        match tokens[i].kind {
            TokenKind::Punct('(') | TokenKind::Punct('[') => depth += 1,
            TokenKind::Punct(')') | TokenKind::Punct(']') => depth -= 1,
            TokenKind::Punct(';') if depth <= 0 => return Ok(i + 1),
            TokenKind::Punct('{') if depth <= 0 => return skip_braces(tokens, i, file),
            _ => {}
        }
        i += 1;
    }
    Ok(end)
}

/// `function NAME(params) visibility ... { body }` — cursor on `function`.
/// `function()` without a name is the legacy fallback form.
fn parse_function(
    tokens: &[Token],
    kw: usize,
    end: usize,
    contract: &mut ParsedContract,
    file: &str,
) -> Result<usize, ExtractError> {
    let (name, kind, header) = match tokens.get(kw + 1) {
        Some(t) if t.ident().is_some() => {
            (t.ident().unwrap().to_string(), FunctionKind::Function, kw + 1)
        }
        _ => ("fallback".to_string(), FunctionKind::Fallback, kw),
    };
    parse_callable(tokens, header, end, contract, file, &name, kind)
}

/// Shared tail for functions, constructors, modifiers, fallback/receive.
/// `header` points at the name token (or the keyword for anonymous forms);
/// parameters, attributes and the optional body follow.
fn parse_callable(
    tokens: &[Token],
    header: usize,
    end: usize,
    contract: &mut ParsedContract,
    file: &str,
    name: &str,
    kind: FunctionKind,
) -> Result<usize, ExtractError> {
    let mut i = header + 1;
    let mut params = Vec::new();
    if i < end && tokens[i].is_punct('(') {
        let close = skip_group(tokens, i, '(', ')', file)?;
        params = parse_params(&tokens[i + 1..close - 1]);
        i = close;
    }
    // attributes until body or `;`: visibility, mutability, modifiers
    // (possibly with argument lists), `returns (...)`, overrides
    let mut visibility = Visibility::Unspecified;
    while i < end && !tokens[i].is_punct('{') && !tokens[i].is_punct(';') {
        match tokens[i].ident() {
            Some("public") => visibility = Visibility::Public,
            Some("external") => visibility = Visibility::External,
            Some("internal") => visibility = Visibility::Internal,
            Some("private") => visibility = Visibility::Private,
            _ => {}
        }
        if tokens[i].is_punct('(') {
            i = skip_group(tokens, i, '(', ')', file)?;
        } else {
            i += 1;
        }
    }
    let (body, next) = if i < end && tokens[i].is_punct('{') {
        let close = skip_braces(tokens, i, file)?;
        (Some(i + 1..close - 1), close)
    } else {
        (None, (i + 1).min(end))
    };
    let ordinal = contract
        .functions
        .iter()
        .filter(|f| f.name == name)
        .count() as u32;
    contract.functions.push(ParsedFunction {
        name: name.to_string(),
        kind,
        visibility,
        ordinal,
        params,
        body,
    });
    Ok(next)
}

const DATA_LOCATIONS: &[&str] = &["memory", "storage", "calldata", "payable", "indexed"];

/// Parameter list: comma-separated `TYPE [location] [NAME]`.
fn parse_params(tokens: &[Token]) -> Vec<(String, String)> {
    let mut params = Vec::new();
    let mut i = 0usize;
    while i < tokens.len() {
        if let Some((core, mut j)) = parse_type(tokens, i) {
            while j < tokens.len()
                && tokens[j]
                    .ident()
                    .map(|s| DATA_LOCATIONS.contains(&s))
                    .unwrap_or(false)
            {
                j += 1;
            }
            if let Some(name) = tokens.get(j).and_then(|t| t.ident()) {
                params.push((name.to_string(), core));
                j += 1;
            }
            i = j;
        }
        // advance to past the next top-level comma
        let mut depth = 0i32;
        while i < tokens.len() {
            match tokens[i].kind {
                TokenKind::Punct('(') | TokenKind::Punct('[') => depth += 1,
                TokenKind::Punct(')') | TokenKind::Punct(']') => depth -= 1,
                TokenKind::Punct(',') if depth <= 0 => {
                    i += 1;
                    break;
                }
                _ => {}
            }
            i += 1;
        }
    }
    params
}

/// Keywords that can never open a type.
const NOT_A_TYPE: &[&str] = &[
    "return", "returns", "delete", "emit", "revert", "throw", "if", "else", "for", "while", "do",
    "break", "continue", "assembly", "unchecked", "try", "catch", "new", "require", "assert",
    "function", "constructor", "modifier", "fallback", "receive", "event", "error", "struct",
    "enum", "using", "is", "constant", "immutable", "public", "external", "internal", "private",
];

/// Parse a type expression starting at `i`, returning its core identifier and
/// the index one past the type. The core identifier is the element type:
/// mappings resolve to their value type, arrays to the element, qualified
/// names (`A.B`) to the final segment.
pub(super) fn parse_type(tokens: &[Token], i: usize) -> Option<(String, usize)> {
    let first = tokens.get(i)?.ident()?;
    if NOT_A_TYPE.contains(&first) {
        return None;
    }
    let (mut core, mut j) = if first == "mapping" {
        if !tokens.get(i + 1)?.is_punct('(') {
            return None;
        }
        // find matching close and the last `=>` (split as '=' '>') at depth 1
        let mut depth = 0i32;
        let mut k = i + 1;
        let mut arrow_after: Option<usize> = None;
        let close;
        loop {
            let t = tokens.get(k)?;
            if t.is_punct('(') || t.is_punct('[') {
                depth += 1;
            } else if t.is_punct(')') || t.is_punct(']') {
                depth -= 1;
                if depth == 0 {
                    close = k;
                    break;
                }
            } else if depth == 1
                && t.is_punct('=')
                && tokens.get(k + 1).map(|n| n.is_punct('>')).unwrap_or(false)
            {
                arrow_after = Some(k + 2);
            }
            k += 1;
        }
        let value_start = arrow_after?;
        let (core, _) = parse_type(tokens, value_start)?;
        (core, close + 1)
    } else {
        let mut core = first.to_string();
        let mut j = i + 1;
        // qualified name: take the last segment
        while j + 1 < tokens.len()
            && tokens[j].is_punct('.')
            && tokens[j + 1].ident().is_some()
        {
            core = tokens[j + 1].ident().unwrap().to_string();
            j += 2;
        }
        (core, j)
    };
    // array suffixes
    while tokens.get(j).map(|t| t.is_punct('[')).unwrap_or(false) {
        let mut depth = 0i32;
        loop {
            let t = tokens.get(j)?;
            if t.is_punct('[') {
                depth += 1;
            } else if t.is_punct(']') {
                depth -= 1;
                if depth == 0 {
                    j += 1;
                    break;
                }
            }
            j += 1;
        }
    }
    core = core.to_string();
    Some((core, j))
}

/// Detect `TYPE NAME … ;` at a member position; returns (name, core type).
fn try_state_variable(tokens: &[Token], i: usize, end: usize) -> Option<(String, String)> {
    let (core, mut j) = parse_type(tokens, i)?;
    // attribute keywords between type and name
    while j < end
        && tokens[j]
            .ident()
            .map(|s| {
                DATA_LOCATIONS.contains(&s)
                    || matches!(
                        s,
                        "constant" | "immutable" | "public" | "internal" | "private" | "override"
                    )
            })
            .unwrap_or(false)
    {
        j += 1;
    }
    let name = tokens.get(j)?.ident()?.to_string();
    let next = tokens.get(j + 1)?;
    if next.is_punct('=') || next.is_punct(';') {
        Some((name, core))
    } else {
        None
    }
}
