//! Call-site scanning and target resolution against the project-wide symbol
//! table.
//!
//! Resolution priority for a call expression:
//!   (a) bare `f(...)` where `f` is declared in the source contract or a
//!       transitive base — target is the declaring contract;
//!   (b) `x.f(...)` where `x` is a parameter, local, or (possibly inherited)
//!       state variable whose core type names a project contract — that
//!       contract; indexed receivers (`xs[i].f(...)`) resolve through the
//!       element type;
//!   (c) `Contract.f(...)` / `Library.f(...)` — that contract or library;
//!   (d) `new Contract(...)` — that contract;
//!   (e) everything else (address members, low-level `call`/`delegatecall`,
//!       `this`/`super`, casts, unknown identifiers) — the `None` sentinel,
//!       except that a member call whose name is declared by exactly one
//!       project library resolves to that library (the `using`-attachment
//!       convention).
//!
//! Calls to built-ins (`require`, `keccak256`, elementary-type conversions,
//! `emit`-ted events, array `push`/`pop`, ...) emit no records at all.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::ops::Range;

use super::lexer::Token;
use super::parser::{parse_type, ParsedUnit};
use super::{CallRecord, ContractDecl, ContractKind, FunctionDecl};

#[derive(Debug)]
pub struct ContractInfo {
    pub final_name: String,
    pub original_name: String,
    pub kind: ContractKind,
    pub file: String,
    pub bases: Vec<String>,
    pub state_vars: BTreeMap<String, String>,
    /// function and modifier names declared directly on this contract
    pub callables: BTreeSet<String>,
}

/// Project-wide symbol table; duplicate contract names are suffixed in
/// discovery order and reported as warnings.
#[derive(Debug, Default)]
pub struct SymbolTable {
    pub contracts: Vec<ContractInfo>,
    by_final: HashMap<String, usize>,
    /// original name -> index of its first occurrence
    by_original: HashMap<String, usize>,
    /// function name -> final names of project libraries declaring it
    lib_fns: HashMap<String, BTreeSet<String>>,
}

impl SymbolTable {
    pub fn build(units: &[(String, ParsedUnit)]) -> (SymbolTable, Vec<String>) {
        let mut table = SymbolTable::default();
        let mut warnings = Vec::new();
        for (file, unit) in units {
            for contract in &unit.contracts {
                let mut final_name = contract.name.clone();
                if table.by_original.contains_key(&final_name) {
                    let mut n = 2usize;
                    let mut candidate = format!("{}_{}", contract.name, n);
                    while table.by_final.contains_key(&candidate) {
                        n += 1;
                        candidate = format!("{}_{}", contract.name, n);
                    }
                    warnings.push(format!(
                        "duplicate contract name `{}` in {}; renamed to `{}`",
                        contract.name, file, candidate
                    ));
                    final_name = candidate;
                }
                let idx = table.contracts.len();
                table.by_final.insert(final_name.clone(), idx);
                table.by_original.entry(contract.name.clone()).or_insert(idx);
                if contract.kind == ContractKind::Library {
                    for f in &contract.functions {
                        table
                            .lib_fns
                            .entry(f.name.clone())
                            .or_default()
                            .insert(final_name.clone());
                    }
                }
                table.contracts.push(ContractInfo {
                    final_name,
                    original_name: contract.name.clone(),
                    kind: contract.kind,
                    file: file.clone(),
                    bases: contract.bases.clone(),
                    state_vars: contract.state_var_types.clone(),
                    callables: contract.functions.iter().map(|f| f.name.clone()).collect(),
                });
            }
        }
        (table, warnings)
    }

    fn lookup_original(&self, name: &str) -> Option<usize> {
        self.by_original.get(name).copied()
    }

    /// Contract or interface (any declared kind) the type name refers to.
    fn type_is_contract(&self, type_name: &str) -> Option<&str> {
        self.lookup_original(type_name)
            .map(|i| self.contracts[i].final_name.as_str())
    }

    /// Search self then transitive bases (declaration order, depth-first) for
    /// a callable named `f`; returns the declaring contract's final name.
    fn resolve_bare(&self, contract_idx: usize, f: &str) -> Option<&str> {
        let mut visited: HashSet<usize> = HashSet::new();
        let mut stack = vec![contract_idx];
        // iterative preorder over the inheritance DAG
        let mut order = Vec::new();
        while let Some(i) = stack.pop() {
            if !visited.insert(i) {
                continue;
            }
            order.push(i);
            let info = &self.contracts[i];
            for base in info.bases.iter().rev() {
                if let Some(bi) = self.lookup_original(base) {
                    stack.push(bi);
                }
            }
        }
        for i in order {
            if self.contracts[i].callables.contains(f) {
                return Some(self.contracts[i].final_name.as_str());
            }
        }
        None
    }

    /// State-variable type lookup over self and transitive bases.
    fn state_var_type(&self, contract_idx: usize, var: &str) -> Option<&str> {
        let mut visited: HashSet<usize> = HashSet::new();
        let mut stack = vec![contract_idx];
        while let Some(i) = stack.pop() {
            if !visited.insert(i) {
                continue;
            }
            if let Some(ty) = self.contracts[i].state_vars.get(var) {
                return Some(ty);
            }
            for base in self.contracts[i].bases.iter().rev() {
                if let Some(bi) = self.lookup_original(base) {
                    stack.push(bi);
                }
            }
        }
        None
    }

    fn sole_library_declaring(&self, f: &str) -> Option<&str> {
        match self.lib_fns.get(f) {
            Some(libs) if libs.len() == 1 => libs.iter().next().map(|s| s.as_str()),
            _ => None,
        }
    }
}

const BUILTIN_CALLS: &[&str] = &[
    "require", "assert", "revert", "keccak256", "sha256", "sha3", "ripemd160", "ecrecover",
    "addmod", "mulmod", "selfdestruct", "suicide", "blockhash", "gasleft", "type", "payable",
    // control-flow keywords that precede parentheses
    "if", "for", "while", "do", "return", "returns", "catch", "assembly", "unchecked", "emit",
];

const NAMESPACES: &[&str] = &["abi", "msg", "block", "tx"];

const LOW_LEVEL_MEMBERS: &[&str] = &["call", "delegatecall", "staticcall", "callcode"];

const ARRAY_BUILTINS: &[&str] = &["push", "pop"];

fn is_elementary_type(name: &str) -> bool {
    if matches!(name, "address" | "bool" | "string" | "bytes" | "byte") {
        return true;
    }
    for prefix in ["uint", "int", "bytes", "fixed", "ufixed"] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit() || c == 'x') {
                return true;
            }
            if rest.is_empty() && matches!(prefix, "uint" | "int" | "fixed" | "ufixed") {
                return true;
            }
        }
    }
    false
}

/// Receiver of a member call, reconstructed by walking left from the `.`.
enum Receiver {
    /// No receiver: a bare call.
    Bare,
    /// Chain of identifiers, head first (`a.b[i].f(..)` -> ["a", "b"]).
    Chain(Vec<String>),
    /// Receiver exists but is an expression (cast, chained call, parenthesised).
    Expr,
}

/// Walk left from `name_idx` (the called identifier) and reconstruct the
/// receiver chain. Returns the receiver and the index of the leftmost token
/// of the whole call expression.
fn receiver_of(tokens: &[Token], name_idx: usize) -> (Receiver, usize) {
    if name_idx == 0 || !tokens[name_idx - 1].is_punct('.') {
        return (Receiver::Bare, name_idx);
    }
    let mut chain: Vec<String> = Vec::new();
    let mut i = name_idx - 1; // at '.'
    loop {
        // element left of the '.' at i
        if i == 0 {
            return (Receiver::Expr, i);
        }
        let mut k = i - 1;
        // skip one or more index groups `[...]`
        while tokens[k].is_punct(']') {
            let mut depth = 0i32;
            loop {
                if tokens[k].is_punct(']') {
                    depth += 1;
                } else if tokens[k].is_punct('[') {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                if k == 0 {
                    return (Receiver::Expr, 0);
                }
                k -= 1;
            }
            if k == 0 {
                return (Receiver::Expr, 0);
            }
            k -= 1;
        }
        match tokens[k].ident() {
            Some(id) => {
                chain.push(id.to_string());
                if k > 0 && tokens[k - 1].is_punct('.') {
                    i = k - 1;
                    continue;
                }
                chain.reverse();
                return (Receiver::Chain(chain), k);
            }
            None => {
                // parenthesised or call expression receiver
                return (Receiver::Expr, k.saturating_sub(1));
            }
        }
    }
}

/// Scan one function body and append the records it produces.
#[allow(clippy::too_many_arguments)]
fn scan_body(
    tokens: &[Token],
    body: Range<usize>,
    table: &SymbolTable,
    contract_idx: usize,
    function_name: &str,
    params: &[(String, String)],
    file: &str,
    records: &mut Vec<CallRecord>,
) {
    let source_contract = table.contracts[contract_idx].final_name.clone();
    let mut locals: HashMap<String, String> = params.iter().cloned().collect();
    let mut stmt_start = true;
    let mut i = body.start;
    while i < body.end {
        if stmt_start {
            if let Some((core, j)) = parse_type(tokens, i) {
                // TYPE [location] NAME (= | ; | ,) declares a local
                let mut k = j;
                while k < body.end
                    && tokens[k]
                        .ident()
                        .map(|s| matches!(s, "memory" | "storage" | "calldata" | "payable"))
                        .unwrap_or(false)
                {
                    k += 1;
                }
                if let Some(name) = tokens.get(k).and_then(|t| t.ident()) {
                    if let Some(next) = tokens.get(k + 1) {
                        if next.is_punct('=') || next.is_punct(';') || next.is_punct(',') {
                            locals.insert(name.to_string(), core);
                        }
                    }
                }
            }
        }
        stmt_start = tokens[i].is_punct(';') || tokens[i].is_punct('{') || tokens[i].is_punct('}');

        let Some(name) = tokens[i].ident() else {
            i += 1;
            continue;
        };
        if !is_call_head(tokens, i, body.end) {
            i += 1;
            continue;
        }

        let (receiver, expr_start) = receiver_of(tokens, i);
        let preceding = expr_start.checked_sub(1).map(|p| &tokens[p]);
        let after_emit = preceding
            .map(|t| t.is_ident("emit") || t.is_ident("revert"))
            .unwrap_or(false);
        let after_new = preceding.map(|t| t.is_ident("new")).unwrap_or(false);

        let target: Option<Option<String>> = if after_emit {
            None // событие / custom error: no record
        } else if after_new {
            // rule (d)
            Some(table.type_is_contract(name).map(|s| s.to_string()))
        } else {
            match &receiver {
                Receiver::Bare => {
                    if BUILTIN_CALLS.contains(&name) || is_elementary_type(name) {
                        None
                    } else if let Some(decl) = table.resolve_bare(contract_idx, name) {
                        Some(Some(decl.to_string())) // rule (a)
                    } else {
                        Some(None) // rule (e)
                    }
                }
                Receiver::Chain(chain) => resolve_member_call(
                    table,
                    contract_idx,
                    &locals,
                    chain,
                    name,
                ),
                Receiver::Expr => {
                    if LOW_LEVEL_MEMBERS.contains(&name) {
                        Some(None)
                    } else if ARRAY_BUILTINS.contains(&name) {
                        None
                    } else if let Some(lib) = table.sole_library_declaring(name) {
                        Some(Some(lib.to_string()))
                    } else {
                        Some(None)
                    }
                }
            }
        };

        if let Some(target_contract) = target {
            records.push(CallRecord {
                file: file.to_string(),
                source_contract: source_contract.clone(),
                source_function: function_name.to_string(),
                target_contract,
            });
        }
        i += 1;
    }
}

/// True when the identifier at `i` heads a call: `name(...)` or
/// `name{opts}(...)`.
fn is_call_head(tokens: &[Token], i: usize, end: usize) -> bool {
    match tokens.get(i + 1) {
        Some(t) if t.is_punct('(') => true,
        Some(t) if t.is_punct('{') => {
            // call options: `{ value: x }` directly followed by `(`
            let mut depth = 0i32;
            let mut j = i + 1;
            while j < end {
                if tokens[j].is_punct('{') {
                    depth += 1;
                } else if tokens[j].is_punct('}') {
                    depth -= 1;
                    if depth == 0 {
                        return tokens.get(j + 1).map(|t| t.is_punct('(')).unwrap_or(false);
                    }
                }
                j += 1;
            }
            false
        }
        _ => false,
    }
}

/// Member-call resolution, rules (b), (c) and the (e) refinements.
fn resolve_member_call(
    table: &SymbolTable,
    contract_idx: usize,
    locals: &HashMap<String, String>,
    chain: &[String],
    callee: &str,
) -> Option<Option<String>> {
    let head = chain.first().map(|s| s.as_str()).unwrap_or("");
    if chain.len() == 1 && NAMESPACES.contains(&head) {
        return None; // abi.encode, block.*, msg.*, tx.*
    }
    if head == "this" || head == "super" {
        return Some(None);
    }
    // rule (b): variable of a project contract type
    let var_type = locals
        .get(head)
        .map(|s| s.as_str())
        .or_else(|| table.state_var_type(contract_idx, head));
    if let Some(ty) = var_type {
        if let Some(contract) = table.type_is_contract(ty) {
            return Some(Some(contract.to_string()));
        }
    }
    // rule (c): ContractName.f / LibraryName.f (single-identifier receiver)
    if chain.len() == 1 && var_type.is_none() {
        if let Some(contract) = table.type_is_contract(head) {
            return Some(Some(contract.to_string()));
        }
    }
    if LOW_LEVEL_MEMBERS.contains(&callee) {
        return Some(None);
    }
    if ARRAY_BUILTINS.contains(&callee) {
        return None;
    }
    if let Some(lib) = table.sole_library_declaring(callee) {
        return Some(Some(lib.to_string()));
    }
    Some(None)
}

/// Run resolution over every parsed unit; inputs must already be in scan
/// order and the symbol table fully merged.
pub fn resolve_project(
    units: &[(String, Vec<Token>, ParsedUnit)],
    table: &SymbolTable,
) -> Vec<CallRecord> {
    // map (file, original contract name) -> table index
    let mut idx_of: HashMap<(&str, &str), usize> = HashMap::new();
    for (i, info) in table.contracts.iter().enumerate() {
        idx_of.insert((info.file.as_str(), info.original_name.as_str()), i);
    }
    let mut records = Vec::new();
    for (file, tokens, unit) in units {
        for contract in &unit.contracts {
            let Some(&ci) = idx_of.get(&(file.as_str(), contract.name.as_str())) else {
                continue;
            };
            for function in &contract.functions {
                let Some(body) = &function.body else { continue };
                scan_body(
                    tokens,
                    body.clone(),
                    table,
                    ci,
                    &function.name,
                    &function.params,
                    file,
                    &mut records,
                );
            }
        }
    }
    records
}

/// Flatten declarations into the public record types.
pub fn declarations(
    units: &[(String, Vec<Token>, ParsedUnit)],
    table: &SymbolTable,
) -> (Vec<ContractDecl>, Vec<FunctionDecl>) {
    let mut idx_of: HashMap<(&str, &str), usize> = HashMap::new();
    for (i, info) in table.contracts.iter().enumerate() {
        idx_of.insert((info.file.as_str(), info.original_name.as_str()), i);
    }
    let mut contracts = Vec::new();
    let mut functions = Vec::new();
    for (file, _, unit) in units {
        for parsed in &unit.contracts {
            let Some(&ci) = idx_of.get(&(file.as_str(), parsed.name.as_str())) else {
                continue;
            };
            let info = &table.contracts[ci];
            contracts.push(ContractDecl {
                name: info.final_name.clone(),
                kind: parsed.kind,
                file: file.clone(),
                bases: parsed.bases.clone(),
                state_var_types: parsed.state_var_types.clone(),
            });
            for f in &parsed.functions {
                functions.push(FunctionDecl {
                    contract: info.final_name.clone(),
                    name: f.name.clone(),
                    kind: f.kind,
                    visibility: f.visibility,
                    ordinal: f.ordinal,
                });
            }
        }
    }
    (contracts, functions)
}
