"""
Parser and printer for the Prolog-like program format.

    head :- b1, ..., bn.      rule
    head.                     fact
    :- b1, ..., bn.           integrity constraint (constraint files only)
    #abducible p/1, q/0.      abducible declaration (program files)
    #layer                    layer separator (layered-theory files)
    % ...                     comment to end of line

Identifiers starting with an uppercase letter or underscore are variables.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple, Union

from apps.core.exceptions import ArityClashError, ParseError

from .terms import Atom, Clause, Compound, DefiniteGoal, Term, Theory, Variable

logger = logging.getLogger(__name__)

TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"%[^\n]*"),
    ("NECK", r":-"),
    ("DIRECTIVE", r"#[A-Za-z_]+"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("COMMA", r","),
    ("DOT", r"\."),
    ("SLASH", r"/"),
    ("NUMBER", r"[0-9]+"),
    ("VAR", r"[A-Z_][A-Za-z0-9_]*"),
    ("NAME", r"[a-z][A-Za-z0-9_]*"),
]
TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_SPEC))


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, source: Optional[str] = None) -> List[Token]:
    """
    Split program text into tokens.

    Raises:
        ParseError: On a character that starts no token
    """
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(
                f"Unexpected character {text[pos]!r}",
                line=line,
                column=pos - line_start + 1,
                source=source,
            )
        kind = match.lastgroup or ""
        value = match.group()
        if kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + value.rindex("\n") + 1
        pos = match.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


@dataclass
class SymbolTable:
    """Arities seen so far; shared across the files of one problem instance."""

    predicates: Dict[str, int] = field(default_factory=dict)
    functors: Dict[str, int] = field(default_factory=dict)

    def declare_predicate(self, name: str, arity: int, source: Optional[str] = None) -> None:
        """
        Record a predicate signature given outside program text.

        Raises:
            ArityClashError: If the predicate is already known with another arity
        """
        known = self.predicates.setdefault(name, arity)
        if known != arity:
            raise ArityClashError(
                f"Predicate '{name}' declared with arity {arity}, previously {known}",
                source=source,
            )


@dataclass(frozen=True)
class ClauseStatement:
    clause: Clause
    line: int


@dataclass(frozen=True)
class GoalStatement:
    goal: DefiniteGoal
    line: int


@dataclass(frozen=True)
class AbducibleStatement:
    signatures: Tuple[Tuple[str, int], ...]
    line: int


@dataclass(frozen=True)
class LayerStatement:
    line: int


Statement = Union[ClauseStatement, GoalStatement, AbducibleStatement, LayerStatement]


class Parser:
    """Recursive-descent parser over the token stream of one text."""

    def __init__(
        self,
        text: str,
        source: Optional[str] = None,
        symbols: Optional[SymbolTable] = None,
    ):
        self.source = source
        self.tokens = tokenize(text, source)
        self.index = 0
        self.symbols = symbols if symbols is not None else SymbolTable()
        self._anonymous = 0
        self._taken: FrozenSet[str] = frozenset()

    # -- token helpers -----------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        return ParseError(message, line=token.line, column=token.column, source=self.source)

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _expect(self, kind: str, what: str) -> Token:
        token = self.current
        if token.kind != kind:
            found = "end of input" if token.kind == "EOF" else repr(token.text)
            raise self._error(f"Expected {what}, found {found}")
        return self._advance()

    def at_end(self) -> bool:
        return self.current.kind == "EOF"

    # -- arity bookkeeping -------------------------------------------------

    def _register(self, table: Dict[str, int], kind: str, name: str, arity: int, token: Token):
        known = table.setdefault(name, arity)
        if known != arity:
            raise ArityClashError(
                f"{kind} '{name}' used with arity {arity}, previously {known}",
                line=token.line,
                column=token.column,
                source=self.source,
            )

    # -- grammar -----------------------------------------------------------

    def parse_statements(self) -> List[Statement]:
        statements: List[Statement] = []
        while not self.at_end():
            statements.append(self.parse_statement())
        return statements

    def parse_statement(self) -> Statement:
        token = self.current
        if token.kind == "DIRECTIVE":
            return self._parse_directive()
        if token.kind == "NECK":
            self._advance()
            self._anonymous_reset()
            body = self._parse_body()
            self._expect("DOT", "'.' after constraint")
            return GoalStatement(DefiniteGoal(frozenset(body)), token.line)
        clause = self.parse_clause()
        return ClauseStatement(clause, token.line)

    def _parse_directive(self) -> Statement:
        token = self._advance()
        name = token.text[1:]
        if name == "layer":
            if self.current.kind == "DOT":
                self._advance()
            return LayerStatement(token.line)
        if name == "abducible":
            signatures = [self._parse_signature()]
            while self.current.kind == "COMMA":
                self._advance()
                signatures.append(self._parse_signature())
            self._expect("DOT", "'.' after #abducible declaration")
            return AbducibleStatement(tuple(signatures), token.line)
        raise self._error(f"Unknown directive '{token.text}'", token)

    def _parse_signature(self) -> Tuple[str, int]:
        name = self._expect("NAME", "predicate name")
        self._expect("SLASH", "'/'")
        arity = self._expect("NUMBER", "arity")
        signature = (name.text, int(arity.text))
        self._register(self.symbols.predicates, "Predicate", name.text, signature[1], name)
        return signature

    def parse_clause(self) -> Clause:
        self._anonymous_reset()
        head = self.parse_atom()
        body: List[Atom] = []
        if self.current.kind == "NECK":
            self._advance()
            body = self._parse_body()
        self._expect("DOT", "'.' at end of clause")
        return Clause(head, frozenset(body))

    def _parse_body(self) -> List[Atom]:
        body = [self.parse_atom()]
        while self.current.kind == "COMMA":
            self._advance()
            body.append(self.parse_atom())
        return body

    def parse_atom(self) -> Atom:
        token = self._expect("NAME", "predicate name")
        args: Tuple[Term, ...] = ()
        if self.current.kind == "LPAREN":
            args = self._parse_args()
        self._register(self.symbols.predicates, "Predicate", token.text, len(args), token)
        return Atom(token.text, args)

    def _parse_args(self) -> Tuple[Term, ...]:
        opening = self._expect("LPAREN", "'('")
        args = [self.parse_term()]
        while self.current.kind == "COMMA":
            self._advance()
            args.append(self.parse_term())
        if self.current.kind != "RPAREN":
            found = "end of input" if self.at_end() else repr(self.current.text)
            raise self._error(
                f"Unclosed '(' opened at {opening.line}:{opening.column}, found {found}"
            )
        self._advance()
        return tuple(args)

    def parse_term(self) -> Term:
        token = self.current
        if token.kind == "VAR":
            self._advance()
            if token.text == "_":
                return self._fresh_anonymous()
            return Variable(token.text)
        if token.kind == "NUMBER":
            self._advance()
            self._register(self.symbols.functors, "Functor", token.text, 0, token)
            return Compound(token.text)
        if token.kind == "NAME":
            self._advance()
            args: Tuple[Term, ...] = ()
            if self.current.kind == "LPAREN":
                args = self._parse_args()
            self._register(self.symbols.functors, "Functor", token.text, len(args), token)
            return Compound(token.text, args)
        found = "end of input" if token.kind == "EOF" else repr(token.text)
        raise self._error(f"Expected a term, found {found}")

    def _anonymous_reset(self) -> None:
        """Start a statement; '_' names must avoid the variables written in it."""
        self._anonymous = 0
        taken = set()
        for token in self.tokens[self.index :]:
            if token.kind in ("DOT", "EOF"):
                break
            if token.kind == "VAR":
                taken.add(token.text)
        self._taken = frozenset(taken)

    def _fresh_anonymous(self) -> Variable:
        name = f"_Anon{self._anonymous}"
        while name in self._taken:
            self._anonymous += 1
            name = f"_Anon{self._anonymous}"
        self._anonymous += 1
        return Variable(name)


# --------------------------------------------------------------------------
# Entry points
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProgramFile:
    """Clauses of a program file plus its abducible declarations."""

    theory: Theory
    abducibles: FrozenSet[Tuple[str, int]] = frozenset()


def _reject(statement: Statement, what: str, source: Optional[str]) -> ParseError:
    return ParseError(f"{what} not allowed here", line=statement.line, column=1, source=source)


def parse_program(
    text: str, source: Optional[str] = None, symbols: Optional[SymbolTable] = None
) -> ProgramFile:
    """Parse a program file: clauses and #abducible declarations."""
    clauses: List[Clause] = []
    abducibles: List[Tuple[str, int]] = []
    for statement in Parser(text, source, symbols).parse_statements():
        if isinstance(statement, ClauseStatement):
            clauses.append(statement.clause)
        elif isinstance(statement, AbducibleStatement):
            abducibles.extend(statement.signatures)
        elif isinstance(statement, GoalStatement):
            raise _reject(statement, "Integrity constraint (':-' goal) in a program file", source)
        else:
            raise _reject(statement, "'#layer' separator in a program file", source)
    logger.debug(f"Parsed {len(clauses)} clauses from {source or '<text>'}")
    return ProgramFile(Theory(clauses), frozenset(abducibles))


def parse_theory(
    text: str, source: Optional[str] = None, symbols: Optional[SymbolTable] = None
) -> Theory:
    """Parse a clause set; abducible declarations are accepted and dropped."""
    return parse_program(text, source, symbols).theory


def parse_constraints(
    text: str, source: Optional[str] = None, symbols: Optional[SymbolTable] = None
) -> Tuple[DefiniteGoal, ...]:
    """Parse a constraint file holding only ':- body.' goals."""
    goals: List[DefiniteGoal] = []
    for statement in Parser(text, source, symbols).parse_statements():
        if not isinstance(statement, GoalStatement):
            raise _reject(statement, "Only ':-' goals are", source)
        goals.append(statement.goal)
    return tuple(dict.fromkeys(goals))


def parse_layered_theory(
    text: str, source: Optional[str] = None, symbols: Optional[SymbolTable] = None
):
    """Parse a layered theory: ground clauses, layers split by #layer, layer 1 first."""
    from .connected import LayeredTheory

    statements = Parser(text, source, symbols).parse_statements()
    if not any(isinstance(statement, ClauseStatement) for statement in statements):
        raise ParseError("Layered theory has no clauses", line=1, column=1, source=source)
    layers: List[List[Clause]] = [[]]
    for position, statement in enumerate(statements):
        if isinstance(statement, LayerStatement):
            if position == 0:
                continue
            if not layers[-1]:
                raise ParseError(
                    f"Empty layer {len(layers)} before '#layer'",
                    line=statement.line,
                    column=1,
                    source=source,
                )
            layers.append([])
        elif isinstance(statement, ClauseStatement):
            layers[-1].append(statement.clause)
        else:
            raise _reject(statement, "Only clauses and '#layer' separators are", source)
    if not layers[-1]:
        raise ParseError(
            f"Empty layer {len(layers)} after the last '#layer'",
            line=statements[-1].line,
            column=1,
            source=source,
        )
    return LayeredTheory(tuple(Theory(layer) for layer in layers))


def _single(text: str, kind: str, symbols: Optional[SymbolTable] = None) -> Parser:
    stripped = text.strip()
    if kind == "clause" and not stripped.endswith("."):
        stripped += "."
    return Parser(stripped, source=f"<{kind}>", symbols=symbols)


def parse_atom(text: str, symbols: Optional[SymbolTable] = None) -> Atom:
    """Parse one atom, e.g. a query given on the command line."""
    parser = _single(text, "atom", symbols)
    parser._anonymous_reset()
    atom = parser.parse_atom()
    if parser.current.kind == "DOT":
        parser._advance()
    if not parser.at_end():
        raise parser._error(f"Unexpected trailing input {parser.current.text!r}")
    return atom


def parse_clause(text: str, symbols: Optional[SymbolTable] = None) -> Clause:
    """Parse one clause; the terminating dot is optional."""
    parser = _single(text, "clause", symbols)
    clause = parser.parse_clause()
    if not parser.at_end():
        raise parser._error(f"Unexpected trailing input {parser.current.text!r}")
    return clause


# --------------------------------------------------------------------------
# Printing
# --------------------------------------------------------------------------


def format_term(term: Term) -> str:
    return str(term)


def format_atom(atom: Atom) -> str:
    return str(atom)


def format_clause(clause: Clause) -> str:
    return str(clause)


def format_goal(goal: DefiniteGoal) -> str:
    return str(goal)


def format_theory(theory: Iterable[Clause]) -> str:
    return "".join(f"{clause}\n" for clause in theory)


def format_abducibles(signatures: Iterable[Tuple[str, int]]) -> str:
    items = sorted(signatures)
    if not items:
        return ""
    return "#abducible " + ", ".join(f"{name}/{arity}" for name, arity in items) + ".\n"


def format_layered_theory(layered) -> str:
    """Render a layered theory, layer 1 first, layers split by #layer lines."""
    chunks = []
    for number, layer in enumerate(layered.layers, start=1):
        header = "" if number == 1 else "#layer\n"
        chunks.append(f"{header}% layer {number}\n{format_theory(layer)}")
    return "".join(chunks)
