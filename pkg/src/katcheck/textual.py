"""Concrete syntax: goal files, expressions, programs and guarded strings.

Grammar (``;`` is KAT product, ``;;`` program sequencing)::

    file    := sig stmt*
    sig     := ['tests' ident* ';'] ['actions' ident* ';']
    stmt    := 'assume' (equation | triple) | 'show' (equation | prog '~' prog | triple)
    equation:= expr ('==' | '<=') expr
    triple  := '{' bool '}' prog '{' bool '}'
    expr    := term ('+' term)*
    term    := factor (';' factor)*
    factor  := base '*'*
    base    := action | '[' bool ']' | '0' | '1' | '(' expr ')'
    bool    := bt ('|' bt)*
    bt      := bf ('&' bf)*
    bf      := '!' bf | test | 'T' | 'F' | '(' bool ')'
    prog    := simple [';;' prog]
    simple  := 'skip' | action | '(' prog ')'
             | 'if' bool 'then' prog 'else' prog 'fi'
             | 'while' bool 'do' prog 'od'

``#`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from katcheck.semantics import GuardedString
from katcheck.syntax import (
    BOT,
    DEFAULT_ATOM_LIMIT,
    ONE,
    TOP,
    ZERO,
    And,
    BoolExpr,
    Bot,
    Dot,
    Equation,
    KatExpr,
    Letter,
    Not,
    One,
    Or,
    Plus,
    PrimTest,
    Signature,
    SignatureError,
    Star,
    Test,
    Top,
    Zero,
    mk_dot,
    mk_plus,
    mk_star,
)
from katcheck.whilelang import Act, HoareTriple, Ite, Prog, Seq, Skp, Whl

KEYWORDS = frozenset(
    "tests actions assume show skip if then else fi while do od T F".split()
)

_TOKEN = re.compile(
    r"(?P<ws>\s+|\#[^\n]*)"
    r"|(?P<op>==|<=|;;|[;+*\[\]()!&|{},~])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<num>[01](?![0-9A-Za-z_]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{self.line}:{self.col}: {message}")
        self.message = message


@dataclass(frozen=True)
class Token:
    kind: str  # "op", "ident", "num", "eof"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


@dataclass(frozen=True)
class ProgEquiv:
    left: Prog
    right: Prog


Goal = Union[Equation, ProgEquiv, HoareTriple]
Assumption = Union[Equation, HoareTriple]


@dataclass
class GoalFile:
    signature: Signature
    assumptions: list[Assumption] = field(default_factory=list)
    goal: Goal | None = None


class Parser:
    def __init__(self, text: str, sig: Signature | None = None):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.sig = sig or Signature()

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, self.text, tok.pos)

    def at(self, *texts: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text in texts

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r} but found {found!r}")
        return self.advance()

    def expect_end(self):
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    def ident(self) -> Token:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error(f"expected an identifier but found {tok.text or 'end of input'!r}")
        return self.advance()

    def _action(self, tok: Token) -> int:
        if tok.text in self.sig.actions:
            return self.sig.action_index(tok.text)
        if tok.text in self.sig.tests:
            raise self.error(f"{tok.text!r} is a test, not an action (write [{tok.text}])", tok)
        raise self.error(f"undeclared identifier {tok.text!r}", tok)

    def _test(self, tok: Token) -> int:
        if tok.text in self.sig.tests:
            return self.sig.test_index(tok.text)
        if tok.text in self.sig.actions:
            raise self.error(f"{tok.text!r} is an action, not a test", tok)
        raise self.error(f"undeclared identifier {tok.text!r}", tok)

    # signature and statements
    def signature(self, atom_limit: int = DEFAULT_ATOM_LIMIT) -> Signature:
        tests: list[str] = []
        actions: list[str] = []
        seen = set()
        start = self.tok
        while self.at("tests", "actions"):
            kw = self.advance().text
            if kw in seen:
                raise self.error(f"duplicate {kw!r} declaration")
            seen.add(kw)
            names = tests if kw == "tests" else actions
            while not self.at(";"):
                names.append(self.ident().text)
            self.expect(";")
        try:
            self.sig = Signature(tuple(tests), tuple(actions), atom_limit)
        except SignatureError as exc:
            raise self.error(str(exc), start) from None
        return self.sig

    def goal_file(self, atom_limit: int = DEFAULT_ATOM_LIMIT) -> GoalFile:
        gf = GoalFile(self.signature(atom_limit))
        while self.tok.kind != "eof":
            if self.at("assume"):
                self.advance()
                if self.at("{"):
                    gf.assumptions.append(self.triple())
                else:
                    gf.assumptions.append(self.equation())
            elif self.at("show"):
                tok = self.advance()
                if gf.goal is not None:
                    raise self.error("only one 'show' statement is allowed", tok)
                gf.goal = self.show_body()
            else:
                raise self.error(f"expected 'assume' or 'show' but found {self.tok.text!r}")
        if gf.goal is None:
            raise self.error("missing 'show' statement")
        return gf

    def _program_goal_ahead(self) -> bool:
        depth = 0
        for tok in self.tokens[self.i :]:
            if tok.kind == "eof" or (depth == 0 and tok.text in ("assume", "show")):
                return False
            if tok.text in ("(", "[", "{"):
                depth += 1
            elif tok.text in (")", "]", "}"):
                depth -= 1
            elif tok.text == "~" and depth == 0:
                return True
        return False

    def show_body(self) -> Goal:
        if self.at("{"):
            return self.triple()
        if self._program_goal_ahead():
            left = self.prog()
            self.expect("~")
            return ProgEquiv(left, self.prog())
        return self.equation()

    def equation(self) -> Equation:
        lhs = self.expr()
        if not self.at("==", "<="):
            found = self.tok.text or "end of input"
            raise self.error(f"expected '==' or '<=' but found {found!r}")
        rel = self.advance().text
        return Equation(lhs, self.expr(), rel)

    def triple(self) -> HoareTriple:
        self.expect("{")
        pre = self.bool()
        self.expect("}")
        prog = self.prog()
        self.expect("{")
        post = self.bool()
        self.expect("}")
        return HoareTriple(pre, prog, post)

    # KAT expressions
    def expr(self) -> KatExpr:
        x = self.term()
        while self.at("+"):
            self.advance()
            x = mk_plus(x, self.term())
        return x

    def term(self) -> KatExpr:
        x = self.factor()
        while self.at(";"):
            self.advance()
            x = mk_dot(x, self.factor())
        return x

    def factor(self) -> KatExpr:
        x = self.base()
        while self.at("*"):
            self.advance()
            x = mk_star(x)
        return x

    def base(self) -> KatExpr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return ONE if tok.text == "1" else ZERO
        if self.at("["):
            self.advance()
            b = self.bool()
            self.expect("]")
            return Test(b)
        if self.at("("):
            self.advance()
            x = self.expr()
            self.expect(")")
            return x
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            return Letter(self._action(tok))
        raise self.error(f"expected an expression but found {tok.text or 'end of input'!r}")

    # Boolean expressions
    def bool(self) -> BoolExpr:
        b = self.bool_term()
        while self.at("|"):
            self.advance()
            b = Or(b, self.bool_term())
        return b

    def bool_term(self) -> BoolExpr:
        b = self.bool_factor()
        while self.at("&"):
            self.advance()
            b = And(b, self.bool_factor())
        return b

    def bool_factor(self) -> BoolExpr:
        tok = self.tok
        if self.at("!"):
            self.advance()
            return Not(self.bool_factor())
        if self.at("T"):
            self.advance()
            return TOP
        if self.at("F"):
            self.advance()
            return BOT
        if self.at("("):
            self.advance()
            b = self.bool()
            self.expect(")")
            return b
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            return PrimTest(self._test(tok))
        raise self.error(f"expected a test but found {tok.text or 'end of input'!r}")

    # programs
    def prog(self) -> Prog:
        p = self.simple_prog()
        if self.at(";;"):
            self.advance()
            return Seq(p, self.prog())
        return p

    def simple_prog(self) -> Prog:
        tok = self.tok
        if self.at("skip"):
            self.advance()
            return Skp()
        if self.at("if"):
            self.advance()
            cond = self.bool()
            self.expect("then")
            then = self.prog()
            self.expect("else")
            orelse = self.prog()
            self.expect("fi")
            return Ite(cond, then, orelse)
        if self.at("while"):
            self.advance()
            cond = self.bool()
            self.expect("do")
            body = self.prog()
            self.expect("od")
            return Whl(cond, body)
        if self.at("("):
            self.advance()
            p = self.prog()
            self.expect(")")
            return p
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            return Act(self._action(tok))
        raise self.error(f"expected a program but found {tok.text or 'end of input'!r}")

    # guarded strings
    def atom(self) -> int:
        self.expect("{")
        value = 0
        seen: set[int] = set()
        while not self.at("}"):
            if seen:
                self.expect(",")
            neg = self.at("!")
            if neg:
                self.advance()
            tok = self.ident()
            i = self._test(tok)
            if i in seen:
                raise self.error(f"test {tok.text!r} listed twice", tok)
            seen.add(i)
            if not neg:
                value |= 1 << i
        if len(seen) != self.sig.n_tests:
            raise self.error("an atom must give a value to every declared test")
        self.expect("}")
        return value

    def guarded_string(self) -> GuardedString:
        atoms = [self.atom()]
        letters = []
        while self.tok.kind == "ident":
            letters.append(self._action(self.advance()))
            atoms.append(self.atom())
        return GuardedString.from_parts(atoms, letters)


def _parse_with(method: str, text: str, sig: Signature):
    parser = Parser(text, sig)
    result = getattr(parser, method)()
    parser.expect_end()
    return result


def parse_goal(text: str, atom_limit: int = DEFAULT_ATOM_LIMIT) -> GoalFile:
    parser = Parser(text)
    return parser.goal_file(atom_limit)


def parse_expr(text: str, sig: Signature) -> KatExpr:
    return _parse_with("expr", text, sig)


def parse_bool(text: str, sig: Signature) -> BoolExpr:
    return _parse_with("bool", text, sig)


def parse_equation(text: str, sig: Signature) -> Equation:
    return _parse_with("equation", text, sig)


def parse_assumption(text: str, sig: Signature) -> Assumption:
    parser = Parser(text, sig)
    result = parser.triple() if parser.at("{") else parser.equation()
    parser.expect_end()
    return result


def parse_prog(text: str, sig: Signature) -> Prog:
    return _parse_with("prog", text, sig)


def parse_triple(text: str, sig: Signature) -> HoareTriple:
    return _parse_with("triple", text, sig)


def parse_guarded_string(text: str, sig: Signature) -> GuardedString:
    return _parse_with("guarded_string", text, sig)


# printing ------------------------------------------------------------------


def format_bool(b: BoolExpr, sig: Signature, prec: int = 0) -> str:
    if isinstance(b, PrimTest):
        return sig.tests[b.index]
    if isinstance(b, Top):
        return "T"
    if isinstance(b, Bot):
        return "F"
    if isinstance(b, Not):
        return "!" + format_bool(b.arg, sig, 2)
    if isinstance(b, Or):
        s = f"{format_bool(b.left, sig, 0)} | {format_bool(b.right, sig, 1)}"
        return f"({s})" if prec > 0 else s
    if isinstance(b, And):
        s = f"{format_bool(b.left, sig, 1)} & {format_bool(b.right, sig, 2)}"
        return f"({s})" if prec > 1 else s
    raise TypeError(f"not a Boolean expression: {b!r}")


def format_expr(x: KatExpr, sig: Signature, prec: int = 0) -> str:
    if isinstance(x, Letter):
        return sig.actions[x.index]
    if isinstance(x, Test):
        return f"[{format_bool(x.test, sig)}]"
    if isinstance(x, One):
        return "1"
    if isinstance(x, Zero):
        return "0"
    if isinstance(x, Plus):
        s = f"{format_expr(x.left, sig, 1)} + {format_expr(x.right, sig, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(x, Dot):
        s = f"{format_expr(x.left, sig, 2)};{format_expr(x.right, sig, 1)}"
        return f"({s})" if prec > 1 else s
    if isinstance(x, Star):
        return format_expr(x.arg, sig, 3) + "*"
    raise TypeError(f"not a KAT expression: {x!r}")


def format_equation(e: Equation, sig: Signature) -> str:
    return f"{format_expr(e.lhs, sig)} {e.relation} {format_expr(e.rhs, sig)}"


def format_prog(p: Prog, sig: Signature) -> str:
    if isinstance(p, Skp):
        return "skip"
    if isinstance(p, Act):
        return sig.actions[p.index]
    if isinstance(p, Seq):
        first = format_prog(p.first, sig)
        if isinstance(p.first, Seq):
            first = f"({first})"
        return f"{first} ;; {format_prog(p.second, sig)}"
    if isinstance(p, Ite):
        return (
            f"if {format_bool(p.cond, sig)} then {format_prog(p.then, sig)} "
            f"else {format_prog(p.orelse, sig)} fi"
        )
    if isinstance(p, Whl):
        return f"while {format_bool(p.cond, sig)} do {format_prog(p.body, sig)} od"
    raise TypeError(f"not a program: {p!r}")


def format_triple(t: HoareTriple, sig: Signature) -> str:
    return f"{{{format_bool(t.pre, sig)}}} {format_prog(t.prog, sig)} {{{format_bool(t.post, sig)}}}"


def format_atom(alpha: int, sig: Signature) -> str:
    lits = [("" if alpha >> i & 1 else "!") + name for i, name in enumerate(sig.tests)]
    return "{" + ",".join(lits) + "}"


def print_guarded_string(u: GuardedString, sig: Signature) -> str:
    parts = []
    for alpha, p in u.body:
        parts.append(format_atom(alpha, sig))
        parts.append(sig.actions[p])
    parts.append(format_atom(u.last, sig))
    return " ".join(parts)


def format_signature(sig: Signature) -> str:
    return f"tests {' '.join(sig.tests)}; actions {' '.join(sig.actions)};"
