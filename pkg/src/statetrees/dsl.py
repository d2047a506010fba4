"""Text formats: the tree DSL and the amplitude listing.

Tree grammar (whitespace-insensitive, ';' comments run to end of line):

    node   := leaf | plus | tensor
    leaf   := "(leaf" INT COMPLEX COMPLEX ")"      ; qubit, alpha, beta
    plus   := "(+" {"(" COMPLEX node ")"}+ ")"     ; edge coefficient per child
    tensor := "(*" node+ ")"
    COMPLEX := FLOAT | FLOAT ("+"|"-") FLOAT "i"   ; e.g. 0.5, -0.5+0.5i

Amplitude listing: one line per basis state, "BITSTRING RE IM", in
lexicographic bitstring order; zero rows may be omitted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .trees import Leaf, Node, Plus, StateTree, Tensor, qubit_mask

_UFLOAT = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_FLOAT_RE = re.compile(rf"^[+-]?{_UFLOAT}$")
_COMPLEX_RE = re.compile(rf"^(?P<re>[+-]?{_UFLOAT})(?:(?P<im>[+-]{_UFLOAT})i)?$")
_INT_RE = re.compile(r"^\d+$")


@dataclass(frozen=True)
class Token:
    kind: str  # '(', ')' or 'atom'
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            out.append(Token(c, c, line, col))
            i += 1
            col += 1
        else:
            j = i
            while j < n and text[j] not in " \t\r\n();":
                j += 1
            out.append(Token("atom", text[i:j], line, col))
            col += j - i
            i = j
    return out


def fmt_float(x: float) -> str:
    if x == 0.0:
        x = 0.0  # normalize -0.0
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    return s


def fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return fmt_float(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{fmt_float(z.real)}{sign}{fmt_float(abs(z.imag))}i"


def parse_complex_text(text: str) -> complex:
    m = _COMPLEX_RE.match(text)
    if not m:
        raise ValueError(f"not a complex literal: {text!r}")
    re_part = float(m.group("re"))
    im_part = float(m.group("im")) if m.group("im") else 0.0
    return complex(re_part, im_part)


class _Reader:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            last = self.tokens[-1] if self.tokens else Token("atom", "", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.next()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, got {t.text!r}", t.line, t.col)
        return t


def _parse_complex_tok(t: Token) -> complex:
    try:
        return parse_complex_text(t.text)
    except ValueError:
        raise ParseError(f"expected a complex number, got {t.text!r}", t.line, t.col) from None


def _parse_node(r: _Reader) -> Node:
    r.expect("(")
    head = r.next()
    if head.kind != "atom":
        raise ParseError("expected node head (leaf, + or *)", head.line, head.col)
    if head.text == "leaf":
        qt = r.next()
        if not _INT_RE.match(qt.text):
            raise ParseError(f"leaf qubit must be an integer, got {qt.text!r}", qt.line, qt.col)
        alpha = _parse_complex_tok(r.next())
        beta = _parse_complex_tok(r.next())
        r.expect(")")
        return Leaf(int(qt.text), alpha, beta)
    if head.text == "+":
        children = []
        while True:
            t = r.peek()
            if t is None:
                raise ParseError("unterminated (+ ...)", head.line, head.col)
            if t.kind == ")":
                r.next()
                break
            r.expect("(")
            coeff = _parse_complex_tok(r.next())
            node = _parse_node(r)
            r.expect(")")
            children.append((coeff, node))
        if not children:
            raise ParseError("(+ ...) needs at least one child", head.line, head.col)
        return Plus(tuple(children))
    if head.text == "*":
        children = []
        while True:
            t = r.peek()
            if t is None:
                raise ParseError("unterminated (* ...)", head.line, head.col)
            if t.kind == ")":
                r.next()
                break
            children.append(_parse_node(r))
        if not children:
            raise ParseError("(* ...) needs at least one child", head.line, head.col)
        return Tensor(tuple(children))
    raise ParseError(f"unknown node head {head.text!r}", head.line, head.col)


def parse(text: str, n: int | None = None) -> StateTree:
    """Parse tree DSL text; n defaults to the largest qubit mentioned."""
    r = _Reader(tokenize(text))
    node = _parse_node(r)
    t = r.peek()
    if t is not None:
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    if n is None:
        n = qubit_mask(node).bit_length()
    return StateTree(n, node)


_WIDTH = 100


def _render(node: Node, indent: int) -> str:
    pad = " " * indent
    if isinstance(node, Leaf):
        return f"(leaf {node.qubit} {fmt_complex(node.alpha)} {fmt_complex(node.beta)})"
    if isinstance(node, Tensor):
        parts = [_render(ch, indent + 2) for ch in node.children]
        flat = "(* " + " ".join(parts) + ")"
        if len(flat) + indent <= _WIDTH and "\n" not in flat:
            return flat
        sep = "\n" + pad + "  "
        return "(*" + sep + sep.join(parts) + ")"
    parts = [f"({fmt_complex(c)} {_render(ch, indent + 2)})" for c, ch in node.children]
    flat = "(+ " + " ".join(parts) + ")"
    if len(flat) + indent <= _WIDTH and "\n" not in flat:
        return flat
    sep = "\n" + pad + "  "
    return "(+" + sep + sep.join(parts) + ")"


def serialize(tree: StateTree | Node) -> str:
    node = tree.root if isinstance(tree, StateTree) else tree
    return _render(node, 0) + "\n"


# ---------------------------------------------------------------------------
# amplitude listings


def format_amplitudes(v: np.ndarray, skip_zeros: bool = False, tol: float = 0.0) -> str:
    n = int(np.log2(len(v)))
    if 1 << n != len(v):
        raise ValueError("amplitude vector length is not a power of 2")
    lines = []
    for x in range(len(v)):
        z = complex(v[x])
        if skip_zeros and abs(z) <= tol:
            continue
        lines.append(f"{x:0{n}b} {fmt_float(z.real)} {fmt_float(z.imag)}")
    return "\n".join(lines) + "\n"


def parse_amplitudes(text: str) -> np.ndarray:
    entries = []
    n = None
    for ln_no, raw in enumerate(text.splitlines(), start=1):
        ln = raw.split(";")[0].strip()
        if not ln:
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'BITS RE IM', got {raw!r}", ln_no, 1)
        bits, re_s, im_s = parts
        if set(bits) - {"0", "1"}:
            raise ParseError(f"bad bitstring {bits!r}", ln_no, 1)
        if n is None:
            n = len(bits)
        elif len(bits) != n:
            raise ParseError(f"inconsistent bitstring length {bits!r}", ln_no, 1)
        if not (_FLOAT_RE.match(re_s) and _FLOAT_RE.match(im_s)):
            raise ParseError(f"bad amplitude numbers in {raw!r}", ln_no, 1)
        entries.append((int(bits, 2), complex(float(re_s), float(im_s))))
    if n is None:
        raise ParseError("no amplitude lines found")
    v = np.zeros(1 << n, dtype=complex)
    for idx, z in entries:
        v[idx] = z
    return v


__all__ = [
    "Token", "tokenize", "fmt_float", "fmt_complex", "parse_complex_text",
    "parse", "serialize", "format_amplitudes", "parse_amplitudes",
]
