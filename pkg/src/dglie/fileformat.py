"""Line-oriented presentation files.

    # comment
    ring invert 2 3 5        (or: ring Q)
    window 3 10
    gen u 3
    gen v 6
    gen w 10
    diff w [u,v] - 1/2*[u,[u,v]]

Omitted ``diff`` lines mean a zero differential.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .dgl import DglPresentation
from .errors import (DegreeMismatch, NonSUnitDenominator, PresentationSyntaxError,
                     UndeclaredGenerator)
from .freelie import format_coefficient
from .ring import LocalRing

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_NUMBER = re.compile(r"\d+(?:/\d+)?")


class _ExprParser:
    """Recursive descent over one ``diff`` expression.  Columns are 1-based."""

    def __init__(self, text, line, offset, degrees):
        self.text = text
        self.line = line
        self.offset = offset
        self.pos = 0
        self.degrees = degrees

    def error(self, message, pos=None):
        pos = self.pos if pos is None else pos
        raise PresentationSyntaxError(message, self.line, self.offset + pos + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self):
        terms = []
        if self.peek() == "0" and self.text[self.pos:].strip() == "0":
            return terms
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        while True:
            start = self.pos
            coeff, tree = self.term()
            terms.append((sign * coeff, tree, start))
            ch = self.peek()
            if ch == "":
                return terms
            if ch not in "+-":
                self.error(f"unexpected {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1

    def term(self):
        coeff = Fraction(1)
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if m:
            num_pos = self.pos
            coeff = Fraction(m.group(0))
            self.pos = m.end()
            if coeff.denominator == 0:
                self.error("zero denominator", num_pos)
            self.coeff_pos = num_pos
            if self.peek() != "*":
                self.error("expected '*' after coefficient")
            self.pos += 1
        else:
            self.coeff_pos = None
        return coeff, self.mono()

    def mono(self):
        ch = self.peek()
        if ch == "[":
            self.pos += 1
            left = self.mono()
            self.expect(",")
            right = self.mono()
            self.expect("]")
            return (left, right)
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a generator name or '['")
        name = m.group(0)
        if name not in self.degrees:
            raise UndeclaredGenerator(name, self.line, self.offset + self.pos + 1)
        self.pos = m.end()
        return name


def _tree_degree(tree, degrees):
    if isinstance(tree, str):
        return degrees[tree]
    return _tree_degree(tree[0], degrees) + _tree_degree(tree[1], degrees)


def parse(text: str, check: bool = True) -> DglPresentation:
    """Parse presentation text into a validated :class:`DglPresentation`."""
    ring = None
    window = None
    gens, degrees = [], {}
    diffs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        words = stripped.split()
        key = words[0]

        starts = [m.start() for m in re.finditer(r"\S+", line)]

        def col(i):
            return starts[i] + 1

        if key == "ring":
            if ring is not None:
                raise PresentationSyntaxError("ring declared twice", lineno, indent + 1)
            if words[1:] == ["Q"]:
                ring = LocalRing.rationals()
            elif words[1:2] == ["Z"] and len(words) == 2:
                ring = LocalRing.integers()
            elif words[1:2] == ["invert"]:
                if len(words) == 2:
                    raise PresentationSyntaxError(
                        "'ring invert' needs at least one prime (use 'ring Z' for the integers)",
                        lineno, col(1))
                primes = []
                for i, w in enumerate(words[2:], start=2):
                    if not w.isdigit():
                        raise PresentationSyntaxError(f"expected a prime, got {w!r}", lineno, col(i))
                    primes.append(int(w))
                try:
                    ring = LocalRing.invert(*primes)
                except ValueError as e:
                    raise PresentationSyntaxError(str(e), lineno, col(2)) from None
            else:
                raise PresentationSyntaxError("expected 'ring Q' or 'ring invert p ...'",
                                              lineno, indent + 1)
        elif key == "window":
            if len(words) != 3:
                raise PresentationSyntaxError("expected 'window m k'", lineno, indent + 1)
            for i in (1, 2):
                if not words[i].isdigit():
                    raise PresentationSyntaxError(f"expected an integer, got {words[i]!r}",
                                                  lineno, col(i))
            window = (int(words[1]), int(words[2]))
        elif key == "gen":
            if len(words) != 3:
                raise PresentationSyntaxError("expected 'gen NAME DEGREE'", lineno, indent + 1)
            if not _NAME.fullmatch(words[1]):
                raise PresentationSyntaxError(f"bad generator name {words[1]!r}", lineno, col(1))
            if not words[2].isdigit():
                raise PresentationSyntaxError(f"expected a degree, got {words[2]!r}",
                                              lineno, col(2))
            name = words[1]
            if name in degrees:
                raise PresentationSyntaxError(f"generator {name!r} declared twice", lineno, col(1))
            degrees[name] = int(words[2])
            gens.append((name, int(words[2])))
        elif key == "diff":
            if len(words) < 3:
                raise PresentationSyntaxError("expected 'diff NAME EXPR'", lineno, indent + 1)
            name = words[1]
            if name not in degrees:
                raise UndeclaredGenerator(name, lineno, col(1))
            if name in diffs:
                raise PresentationSyntaxError(f"second diff for {name!r}", lineno, col(1))
            start = col(2) - 1
            parser = _ExprParser(line[start:], lineno, start, degrees)
            terms = []
            for coeff, tree, pos in parser.parse():
                d = _tree_degree(tree, degrees)
                if d != degrees[name] - 1:
                    raise DegreeMismatch(
                        f"line {lineno}, column {start + pos + 1}: term of degree {d} in "
                        f"d({name}), expected {degrees[name] - 1}")
                terms.append((coeff, tree, pos))
            diffs[name] = (terms, lineno, start)
        else:
            raise PresentationSyntaxError(f"unknown directive {key!r}", lineno, indent + 1)
    if ring is None:
        raise PresentationSyntaxError("missing 'ring' line", 1, 1)
    differential = {}
    for name, (terms, lineno, start) in diffs.items():
        for coeff, _, pos in terms:
            if not ring.contains(coeff):
                raise NonSUnitDenominator(
                    f"line {lineno}, column {start + pos + 1}: coefficient {coeff} "
                    f"is not in {ring}")
        differential[name] = [(c, t) for c, t, _ in terms]
    return DglPresentation(ring, gens, differential, window=window, check=check)


def load(path) -> DglPresentation:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def ring_line(ring: LocalRing) -> str:
    if ring.rational:
        return "ring Q"
    if not ring.inverted_primes:
        return "ring Z"
    return "ring invert " + " ".join(map(str, ring.inverted_primes))


def format_expression(x) -> str:
    """A parseable rendering of a Lie element (``COEFF*MONO`` terms)."""
    if not x.terms:
        return "0"
    out = []
    for mono, c in x.items():
        body = x.algebra.format_monomial(mono)
        mag = abs(c)
        piece = body if mag == 1 else f"{format_coefficient(mag)}*{body}"
        if not out:
            out.append(piece if c > 0 else f"-{piece}")
        else:
            out.append(f"{'+' if c > 0 else '-'} {piece}")
    return " ".join(out)


def dumps(p: DglPresentation) -> str:
    lines = [ring_line(p.ring), f"window {p.window[0]} {p.window[1]}"]
    lines += [f"gen {g.name} {g.degree}" for g in p.generators]
    for g in p.generators:
        value = p.differential[g.name]
        if value:
            lines.append(f"diff {g.name} {format_expression(value)}")
    return "\n".join(lines) + "\n"
