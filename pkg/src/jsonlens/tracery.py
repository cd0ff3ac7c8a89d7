"""Generative-grammar expansion with provenance, and output-to-grammar sync.

A grammar maps symbol names to rule lists; `#symbol#` references inside a
rule expand recursively from the start symbol. Expansion records an
execution tree so that edits made to the *output* can be pushed back into
the grammar: first by enumerating candidate rule edits and re-expanding,
then by provenance lookup when enumeration is ambiguous. When neither
phase can prove the round trip, the result is out-of-sync and the grammar
is left untouched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterator, Union

from .errors import ExpansionDepthError, NoEditError, SymbolError, TraceStaleError

_REF_RE = re.compile(r"#([^#\s][^#]*)#")

_MASK = (1 << 64) - 1

MAX_PHASE1_VARIANTS = 4000


class SeededChoice:
    """splitmix64 sequence; byte-stable across platforms.

    state' = state + 0x9E3779B97F4A7C15 (mod 2^64); the output mixes the
    new state with xor-shifts and two odd multipliers.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next_u64() % n if n > 0 else 0


@dataclass(frozen=True)
class TraceryGrammar:
    rules: dict[str, list[str]]
    start_symbol: str = "origin"

    def fingerprint(self) -> tuple:
        return (self.start_symbol, tuple((k, tuple(v)) for k, v in self.rules.items()))

    def dangling_references(self) -> list[str]:
        missing = []
        for rules in self.rules.values():
            for rule in rules:
                for ref in _REF_RE.findall(rule):
                    if ref not in self.rules and ref not in missing:
                        missing.append(ref)
        return missing

    @staticmethod
    def from_value(value: Any, start_symbol: str = "origin") -> "TraceryGrammar":
        if not isinstance(value, dict):
            raise SymbolError("grammar must be an object of symbol -> rule list")
        rules: dict[str, list[str]] = {}
        for symbol, rule_list in value.items():
            if not isinstance(rule_list, list) or not all(isinstance(r, str) for r in rule_list):
                raise SymbolError(f"rules for {symbol!r} must be a list of strings")
            rules[str(symbol)] = list(rule_list)
        return TraceryGrammar(rules, start_symbol)


@dataclass(frozen=True)
class LitPart:
    """Literal run copied from the rule text into the output."""

    rule_start: int
    rule_end: int
    out_start: int
    out_end: int


@dataclass
class TraceNode:
    symbol: str
    rule_index: int
    start: int
    end: int
    parts: list[Union[LitPart, "TraceNode"]] = field(default_factory=list)

    @property
    def children(self) -> list["TraceNode"]:
        return [p for p in self.parts if isinstance(p, TraceNode)]


@dataclass
class ExpansionTrace:
    root: TraceNode
    seed: int
    output: str
    grammar_fingerprint: tuple = ()

    def walk(self) -> Iterator[TraceNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaf_spans(self) -> list[tuple[int, int]]:
        spans: list[tuple[int, int]] = []

        def go(node: TraceNode) -> None:
            for part in node.parts:
                if isinstance(part, LitPart):
                    spans.append((part.out_start, part.out_end))
                else:
                    go(part)

        go(self.root)
        return spans


def _split_rule(rule: str) -> list[tuple[str, int, int, str]]:
    """(kind, start, end, payload) segments: 'lit' text or 'ref' symbol name."""
    segments = []
    pos = 0
    for m in _REF_RE.finditer(rule):
        if m.start() > pos:
            segments.append(("lit", pos, m.start(), rule[pos : m.start()]))
        segments.append(("ref", m.start(), m.end(), m.group(1)))
        pos = m.end()
    if pos < len(rule):
        segments.append(("lit", pos, len(rule), rule[pos:]))
    return segments


def expand(grammar: TraceryGrammar, seed: int, depth_limit: int = 64) -> ExpansionTrace:
    """Deterministic seeded expansion; rule choices are drawn in pre-order."""
    if grammar.start_symbol not in grammar.rules:
        raise SymbolError(f"start symbol {grammar.start_symbol!r} not in grammar")
    rng = SeededChoice(seed)
    out: list[str] = []
    length = 0

    def go(symbol: str, depth: int) -> TraceNode:
        nonlocal length
        if depth > depth_limit:
            raise ExpansionDepthError(f"expansion exceeded depth {depth_limit}")
        rules = grammar.rules.get(symbol)
        if rules is None:
            raise SymbolError(f"undefined symbol {symbol!r}")
        if not rules:
            raise SymbolError(f"symbol {symbol!r} has no rules")
        choice = rng.below(len(rules))
        rule = rules[choice]
        node = TraceNode(symbol, choice, length, length)
        for kind, seg_start, seg_end, payload in _split_rule(rule):
            if kind == "lit":
                out.append(payload)
                node.parts.append(LitPart(seg_start, seg_end, length, length + len(payload)))
                length += len(payload)
            else:
                node.parts.append(go(payload, depth + 1))
        node.end = length
        return node

    root = go(grammar.start_symbol, 0)
    output = "".join(out)
    return ExpansionTrace(root, seed, output, grammar.fingerprint())


# --- output edit classification -------------------------------------------------


@dataclass(frozen=True)
class OutputEdit:
    classification: str  # delete | insert | swap
    start: int
    end: int
    replacement: str


def classify_edit(original: str, edited: str) -> OutputEdit:
    """Isolate one contiguous differing region via common prefix/suffix."""
    if original == edited:
        raise NoEditError("strings are identical")
    prefix = 0
    limit = min(len(original), len(edited))
    while prefix < limit and original[prefix] == edited[prefix]:
        prefix += 1
    suffix = 0
    while (
        suffix < limit - prefix
        and original[len(original) - 1 - suffix] == edited[len(edited) - 1 - suffix]
    ):
        suffix += 1
    start = prefix
    end = len(original) - suffix
    replacement = edited[prefix : len(edited) - suffix]
    if start == end:
        classification = "insert"
    elif not replacement:
        classification = "delete"
    else:
        classification = "swap"
    return OutputEdit(classification, start, end, replacement)


# --- synthesis -------------------------------------------------------------------


@dataclass(frozen=True)
class SyncResult:
    status: str  # applied | outOfSync
    grammar_edit: tuple[str, int, str] | None = None
    reason: str = ""


def _with_rule(grammar: TraceryGrammar, symbol: str, index: int, text: str) -> TraceryGrammar:
    rules = {k: list(v) for k, v in grammar.rules.items()}
    rules[symbol][index] = text
    return TraceryGrammar(rules, grammar.start_symbol)


def _reexpands_to(grammar: TraceryGrammar, seed: int, expected: str) -> bool:
    try:
        return expand(grammar, seed).output == expected
    except (SymbolError, ExpansionDepthError):
        return False


def synthesize(grammar: TraceryGrammar, trace: ExpansionTrace, edited: str) -> SyncResult:
    """Push an output edit back into the grammar when that is provably sound."""
    if grammar.fingerprint() != trace.grammar_fingerprint:
        raise TraceStaleError("trace was produced from a different grammar")
    if edited == trace.output:
        return SyncResult("applied", None)
    edit = classify_edit(trace.output, edited)

    candidates = _enumerate_candidates(grammar, trace, edit, edited)
    if len(candidates) == 1:
        symbol, index, text = next(iter(candidates))
        return SyncResult("applied", (symbol, index, text))

    provenance = _provenance_candidate(grammar, trace, edit)
    if isinstance(provenance, str):
        return SyncResult("outOfSync", None, provenance)
    symbol, index, text = provenance
    if _reexpands_to(_with_rule(grammar, symbol, index, text), trace.seed, edited):
        return SyncResult("applied", (symbol, index, text))
    return SyncResult("outOfSync", None, "noCandidate")


def _enumerate_candidates(
    grammar: TraceryGrammar, trace: ExpansionTrace, edit: OutputEdit, edited: str
) -> set[tuple[str, int, str]]:
    """Rule edits analogous to the output edit that reproduce it exactly."""
    region_text = trace.output[edit.start : edit.end]
    attempted = 0
    accepted: set[tuple[str, int, str]] = set()
    for symbol, rules in grammar.rules.items():
        for index, rule in enumerate(rules):
            variants: set[str] = set()
            if edit.classification == "insert":
                for pos in range(len(rule) + 1):
                    variants.add(rule[:pos] + edit.replacement + rule[pos:])
            else:
                at = rule.find(region_text)
                while at != -1:
                    variants.add(rule[:at] + edit.replacement + rule[at + len(region_text) :])
                    at = rule.find(region_text, at + 1)
            for variant in variants:
                if variant == rule:
                    continue
                attempted += 1
                if attempted > MAX_PHASE1_VARIANTS:
                    return accepted
                if _reexpands_to(_with_rule(grammar, symbol, index, variant), trace.seed, edited):
                    accepted.add((symbol, index, variant))
    return accepted


def _provenance_candidate(
    grammar: TraceryGrammar, trace: ExpansionTrace, edit: OutputEdit
) -> tuple[str, int, str] | str:
    """Locate the literal run that produced the edited region.

    Returns a grammar edit, or an out-of-sync reason string.
    """
    a, b = edit.start, edit.end
    node = trace.root
    while True:
        narrower = None
        for part in node.parts:
            if isinstance(part, TraceNode) and part.start <= a and b <= part.end:
                if a == b and (a == part.start or b == part.end):
                    continue  # boundary insert is ambiguous, stay at the parent
                narrower = part
                break
        if narrower is None:
            break
        node = narrower
    lit = None
    for part in node.parts:
        if isinstance(part, LitPart):
            if a == b:
                if part.out_start < a < part.out_end:
                    lit = part
                    break
            elif part.out_start <= a and b <= part.out_end:
                lit = part
                break
    if lit is None:
        return "crossesProvenanceBoundary"
    uses = sum(
        1 for n in trace.walk() if n.symbol == node.symbol and n.rule_index == node.rule_index
    )
    if uses > 1:
        return "ambiguousRuleUse"
    rule = grammar.rules[node.symbol][node.rule_index]
    rule_a = lit.rule_start + (a - lit.out_start)
    rule_b = lit.rule_start + (b - lit.out_start)
    new_rule = rule[:rule_a] + edit.replacement + rule[rule_b:]
    return (node.symbol, node.rule_index, new_rule)
