"""Front end: lexing, parsing, validation and pretty-printing.

The surface language is ProbLog-like:

    % a comment
    0.3::edge(a, b).          probabilistic fact (decimal or num/den weight)
    path(X, Y) :- edge(X, Y), not blocked(X, Y).
    vertex(a).                deterministic fact

Probability literals are kept as exact ``fractions.Fraction`` values; no
floating point is used anywhere in the front end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PlpSyntaxError


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Term:
    """A constant (lowercase identifier or unsigned integer) or a variable."""

    kind: str  # "const" | "var"
    name: str

    @property
    def is_variable(self) -> bool:
        return self.kind == "var"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def is_ground(self) -> bool:
        return all(not t.is_variable for t in self.args)

    def variables(self) -> set[str]:
        return {t.name for t in self.args if t.is_variable}

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Subgoal:
    atom: Atom
    negated: bool = False

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[Subgoal, ...] = ()

    @property
    def is_fact(self) -> bool:
        return not self.body

    def variables(self) -> set[str]:
        vs = self.head.variables()
        for sg in self.body:
            vs |= sg.atom.variables()
        return vs

    def __str__(self) -> str:
        if self.is_fact:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.body))}."


@dataclass(frozen=True)
class ProbFact:
    atom: Atom
    prob: Fraction

    def __str__(self) -> str:
        return f"{format_rational(self.prob)}::{self.atom}."


@dataclass
class Program:
    rules: list[Rule] = field(default_factory=list)
    prob_facts: list[ProbFact] = field(default_factory=list)

    def __eq__(self, other):
        return (
            isinstance(other, Program)
            and self.rules == other.rules
            and self.prob_facts == other.prob_facts
        )


TRUTH_VALUES = ("true", "false", "undefined")


@dataclass
class Query:
    """Ground truth assignments: the query part and optional evidence."""

    q_assignments: list[tuple[Atom, str]]
    e_assignments: list[tuple[Atom, str]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Diagnostics


@dataclass
class Diagnostic:
    level: str  # "error" | "warning"
    file: str
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.level.upper()} {self.file}:{self.line}:{self.col} {self.message}"


# ---------------------------------------------------------------------------
# Lexer

_PUNCT = {"::", ":-", ",", "(", ")", ".", "/", "="}


@dataclass
class _Token:
    kind: str  # NAME VAR INT DECIMAL PUNCT EOF
    text: str
    line: int
    col: int


def _tokenize(text: str, filename: str) -> list[_Token]:
    toks: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            # decimal point only when followed by another digit; a bare "."
            # after digits terminates the clause
            if j + 1 < n and text[j] == "." and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                toks.append(_Token("DECIMAL", text[i:j], start_line, start_col))
            else:
                toks.append(_Token("INT", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "VAR" if (word[0].isupper() or word[0] == "_") else "NAME"
            toks.append(_Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        if text.startswith("::", i) or text.startswith(":-", i):
            toks.append(_Token("PUNCT", text[i : i + 2], start_line, start_col))
            i += 2
            col += 2
            continue
        if text.startswith("\\+", i):
            # alternate spelling of default negation
            toks.append(_Token("NAME", "not", start_line, start_col))
            i += 2
            col += 2
            continue
        if c in ",().=/":
            toks.append(_Token("PUNCT", c, start_line, start_col))
            i += 1
            col += 1
            continue
        raise PlpSyntaxError(
            [Diagnostic("error", filename, line, col, f"unexpected character {c!r}")]
        )
    toks.append(_Token("EOF", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str, filename: str):
        self.filename = filename
        self.toks = _tokenize(text, filename)
        self.pos = 0
        self.arities: dict[str, tuple[int, _Token]] = {}

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def error(self, tok: _Token, msg: str):
        raise PlpSyntaxError(
            [Diagnostic("error", self.filename, tok.line, tok.col, msg)]
        )

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            self.error(tok, f"expected {text!r}, found {tok.text!r}")
        return tok

    def parse_term(self) -> Term:
        tok = self.next()
        if tok.kind == "NAME":
            return Term("const", tok.text)
        if tok.kind == "INT":
            return Term("const", tok.text)
        if tok.kind == "VAR":
            return Term("var", tok.text)
        self.error(tok, f"expected a term, found {tok.text!r}")

    def parse_atom(self) -> Atom:
        tok = self.next()
        if tok.kind != "NAME":
            self.error(tok, f"expected an atom, found {tok.text!r}")
        args: list[Term] = []
        if self.peek().text == "(":
            self.next()
            args.append(self.parse_term())
            while self.peek().text == ",":
                self.next()
                args.append(self.parse_term())
            self.expect(")")
        self._check_arity(tok, Atom(tok.text, tuple(args)))
        return Atom(tok.text, tuple(args))

    def _check_arity(self, tok: _Token, atom: Atom):
        seen = self.arities.get(atom.predicate)
        if seen is None:
            self.arities[atom.predicate] = (len(atom.args), tok)
        elif seen[0] != len(atom.args):
            self.error(
                tok,
                f"predicate {atom.predicate!r} used with arity {len(atom.args)} "
                f"but earlier with arity {seen[0]} "
                f"(at {seen[1].line}:{seen[1].col})",
            )

    def parse_subgoal(self) -> Subgoal:
        if self.peek().text == "not":
            self.next()
            return Subgoal(self.parse_atom(), negated=True)
        return Subgoal(self.parse_atom())

    def parse_probability(self) -> Fraction:
        tok = self.next()
        if tok.kind == "DECIMAL":
            value = Fraction(tok.text)
        elif tok.kind == "INT":
            if self.peek().text == "/":
                self.next()
                den = self.next()
                if den.kind != "INT":
                    self.error(den, "expected a denominator")
                if int(den.text) == 0:
                    self.error(den, "zero denominator")
                value = Fraction(int(tok.text), int(den.text))
            else:
                value = Fraction(int(tok.text))
        else:
            self.error(tok, f"expected a probability, found {tok.text!r}")
        if not 0 <= value <= 1:
            self.error(tok, f"probability {tok.text} outside [0, 1]")
        return value

    def _at_probability(self) -> bool:
        tok = self.peek()
        if tok.kind == "DECIMAL":
            return True
        if tok.kind == "INT":
            nxt = self.toks[self.pos + 1]
            if nxt.text == "::":
                return True
            if nxt.text == "/" and self.toks[self.pos + 3].text == "::":
                return True
        return False

    def parse_clause(self, program: Program):
        if self._at_probability():
            prob = self.parse_probability()
            self.expect("::")
            atom = self.parse_atom()
            self.expect(".")
            program.prob_facts.append(ProbFact(atom, prob))
            return
        head = self.parse_atom()
        body: list[Subgoal] = []
        if self.peek().text == ":-":
            self.next()
            body.append(self.parse_subgoal())
            while self.peek().text == ",":
                self.next()
                body.append(self.parse_subgoal())
        self.expect(".")
        program.rules.append(Rule(head, tuple(body)))

    def parse_program(self) -> Program:
        program = Program()
        while self.peek().kind != "EOF":
            self.parse_clause(program)
        return program


def parse_program(text: str, filename: str = "<string>") -> Program:
    """Parse a program, raising PlpSyntaxError with diagnostics on failure."""
    return _Parser(text, filename).parse_program()


def parse_query(text: str, evidence: str = "", filename: str = "<query>") -> Query:
    """Parse ``atom=true|false|undefined`` assignment lists.

    A bare ``atom`` abbreviates ``atom=true``. All atoms must be ground.
    """
    return Query(
        _parse_assignments(text, filename),
        _parse_assignments(evidence, filename) if evidence else [],
    )


def _parse_assignments(text: str, filename: str) -> list[tuple[Atom, str]]:
    parser = _Parser(text, filename)
    out: list[tuple[Atom, str]] = []
    seen: dict[Atom, str] = {}
    if parser.peek().kind == "EOF":
        return out
    while True:
        tok = parser.peek()
        atom = parser.parse_atom()
        value = "true"
        if parser.peek().text == "=":
            parser.next()
            vtok = parser.next()
            if vtok.text not in TRUTH_VALUES:
                parser.error(vtok, f"unknown truth value {vtok.text!r}")
            value = vtok.text
        if not atom.is_ground:
            parser.error(tok, f"query atom {atom} is not ground")
        if atom in seen:
            if seen[atom] != value:
                parser.error(tok, f"conflicting assignments for {atom}")
        else:
            seen[atom] = value
            out.append((atom, value))
        if parser.peek().text != ",":
            break
        parser.next()
    tok = parser.peek()
    if tok.kind != "EOF":
        parser.error(tok, f"unexpected trailing input {tok.text!r}")
    return out


# ---------------------------------------------------------------------------
# Pretty printing


def format_rational(value: Fraction) -> str:
    """Render exactly: finite decimal when the denominator is 2^a*5^b,
    otherwise ``num/den``."""
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    k = max(twos, fives)
    scaled = value.numerator * 10**k // value.denominator
    digits = str(scaled).rjust(k + 1, "0")
    if k == 0:
        return f"{digits}.0"
    return f"{digits[:-k]}.{digits[-k:]}"


def format_program(program: Program) -> str:
    """Canonical text; re-parsing it yields a structurally equal Program."""
    lines = [str(pf) for pf in program.prob_facts]
    lines += [str(rule) for rule in program.rules]
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Lint (advisory diagnostics; never alter semantics)


def _unifies(a: Atom, b: Atom) -> bool:
    if a.predicate != b.predicate or len(a.args) != len(b.args):
        return False
    # variables of the two atoms are standardized apart via a side tag
    bindings: dict[tuple[str, str], tuple[str, Term]] = {}

    def resolve(side: str, t: Term) -> tuple[str, Term]:
        while t.is_variable and (side, t.name) in bindings:
            side, t = bindings[(side, t.name)]
        return side, t

    for ta, tb in zip(a.args, b.args):
        sa, ta = resolve("l", ta)
        sb, tb = resolve("r", tb)
        if ta.is_variable:
            if not (sa == sb and ta == tb):
                bindings[(sa, ta.name)] = (sb, tb)
        elif tb.is_variable:
            bindings[(sb, tb.name)] = (sa, ta)
        elif ta.name != tb.name:
            return False
    return True


def lint_program(program: Program, filename: str = "<string>") -> list[Diagnostic]:
    """Advisory checks: probabilistic facts unifying with rule heads."""
    out = []
    for pf in program.prob_facts:
        for rule in program.rules:
            if _unifies(pf.atom, rule.head):
                out.append(
                    Diagnostic(
                        "warning",
                        filename,
                        1,
                        1,
                        f"probabilistic fact {pf.atom} unifies with the head of "
                        f"rule '{rule}' (disjointness condition violated)",
                    )
                )
    return out
