"""Text format for algebras, morphisms and points.

    # comments run to the end of the line
    algebra A {
      gen x: 0 weight 1;
      gen xi: -1;
      d xi = x^2 - 1;
    }
    algebra B {
      adjoin y: 0, eta: -1 with d eta = y^2;
    }
    morphism f: A -> B { x -> y; xi -> y*eta; }
    point p on A { x = 1; }

Generators of degree 0 may be omitted from a point (they default to 0).
"""

import re
from fractions import Fraction

from .dga import Augmentation, DGAMorphism, ResolvingAlgebra
from .errors import DGError, DSLError
from .poly import GradedRing, _Parser

_TOK = re.compile(r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<arrow>->)"
                  r"|(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[{}:;,=+\-*/^()])")

KEYWORDS = {"algebra", "morphism", "point", "gen", "d", "weight", "adjoin", "with", "on"}


class Token:
    __slots__ = ("kind", "text", "line", "col", "pos")

    def __init__(self, kind, text, line, col, pos):
        self.kind, self.text, self.line, self.col, self.pos = kind, text, line, col, pos

    def __repr__(self):
        return f"{self.text!r}@{self.line}:{self.col}"


def lex(text):
    toks = []
    pos, line, col0 = 0, 1, 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if m is None:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - col0 + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            col0 = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Token(kind, m.group(), line, pos - col0 + 1, pos))
        pos = m.end()
    return toks


class Workspace:
    """Named algebras, morphisms and points, kept in definition order."""

    def __init__(self):
        self.algebras = {}
        self.morphisms = {}
        self.points = {}

    def algebra(self, name):
        try:
            return self.algebras[name]
        except KeyError:
            raise DGError(f"no algebra named {name!r}") from None

    def morphism(self, name):
        try:
            return self.morphisms[name]
        except KeyError:
            raise DGError(f"no morphism named {name!r}") from None

    def point(self, name):
        try:
            return self.points[name]
        except KeyError:
            raise DGError(f"no point named {name!r}") from None

    def __eq__(self, other):
        return isinstance(other, Workspace) and serialize(self) == serialize(other)


class _Reader:
    def __init__(self, text):
        self.text = text
        self.toks = lex(text)
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def err(self, msg, tok=None):
        tok = tok or self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else None
            raise DSLError(msg + " (at end of input)", last.line if last else 1, None)
        raise DSLError(msg, tok.line, tok.col)

    def take(self, text=None, kind=None):
        tok = self.peek()
        if tok is None:
            self.err(f"expected {text or kind}")
        if text is not None and tok.text != text:
            self.err(f"expected {text!r}, found {tok.text!r}")
        if kind is not None and tok.kind != kind:
            self.err(f"expected {kind}, found {tok.text!r}")
        self.i += 1
        return tok

    def name(self):
        tok = self.take(kind="id")
        return tok

    def integer(self):
        neg = False
        if self.peek() is not None and self.peek().text == "-":
            self.take("-")
            neg = True
        tok = self.take(kind="num")
        v = int(tok.text)
        return -v if neg else v

    def rational(self):
        neg = False
        if self.peek() is not None and self.peek().text == "-":
            self.take("-")
            neg = True
        num = int(self.take(kind="num").text)
        den = 1
        if self.peek() is not None and self.peek().text == "/":
            self.take("/")
            den = int(self.take(kind="num").text)
            if den == 0:
                self.err("zero denominator")
        v = Fraction(num, den)
        return -v if neg else v

    def expr_span(self, stops):
        """Raw source text of an expression up to a stop token at nesting depth 0."""
        start = self.peek()
        if start is None or start.text in stops:
            self.err("expected an expression")
        depth = 0
        while True:
            tok = self.peek()
            if tok is None:
                self.err("unterminated expression")
            if depth == 0 and tok.text in stops:
                break
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                depth -= 1
            if tok.text in ("{", "}") or tok.kind == "arrow":
                if depth == 0 and ";" in stops:
                    self.err(f"expected ';', found {tok.text!r}")
                self.err(f"unexpected {tok.text!r} in expression")
            self.i += 1
        end = self.toks[self.i - 1]
        return (self.text[start.pos:end.pos + len(end.text)], start.line, start.col)


def _parse_poly(span, ring):
    text, line, col = span
    p = _Parser(text, ring, line, col)
    try:
        return p.parse_all()
    except DSLError:
        raise
    except (ValueError, ZeroDivisionError) as e:
        raise DSLError(str(e), line, col) from None


def parse(text):
    """Parse DSL text into a Workspace."""
    r = _Reader(text)
    ws = Workspace()
    while r.peek() is not None:
        kw = r.peek()
        if kw.text == "algebra":
            _algebra(r, ws)
        elif kw.text == "morphism":
            _morphism(r, ws)
        elif kw.text == "point":
            _point(r, ws)
        else:
            r.err(f"expected 'algebra', 'morphism' or 'point', found {kw.text!r}")
    return ws


def _check_new(r, ws, tok):
    name = tok.text
    if name in ws.algebras or name in ws.morphisms or name in ws.points:
        raise DSLError(f"duplicate name {name!r}", tok.line, tok.col)
    if name in KEYWORDS:
        raise DSLError(f"{name!r} is a keyword", tok.line, tok.col)


def _algebra(r, ws):
    r.take("algebra")
    ntok = r.name()
    _check_new(r, ws, ntok)
    r.take("{")
    gens = []
    weights = {}
    diffs = []
    seen = {}
    while r.peek() is not None and r.peek().text != "}":
        tok = r.peek()
        if tok.text == "gen":
            r.take("gen")
            g = r.name()
            r.take(":")
            deg = r.integer()
            _add_gen(g, deg, gens, seen)
            if r.peek() is not None and r.peek().text == "weight":
                r.take("weight")
                weights[g.text] = r.integer()
            r.take(";")
        elif tok.text == "d":
            r.take("d")
            g = r.name()
            r.take("=")
            diffs.append((g, r.expr_span({";"})))
            r.take(";")
        elif tok.text == "adjoin":
            r.take("adjoin")
            while True:
                g = r.name()
                r.take(":")
                _add_gen(g, r.integer(), gens, seen)
                if r.peek() is not None and r.peek().text == ",":
                    r.take(",")
                    continue
                break
            if r.peek() is not None and r.peek().text == "with":
                r.take("with")
                while True:
                    r.take("d")
                    g = r.name()
                    r.take("=")
                    diffs.append((g, r.expr_span({";", ","})))
                    if r.peek() is not None and r.peek().text == ",":
                        r.take(",")
                        continue
                    break
            r.take(";")
        else:
            r.err(f"expected 'gen', 'd' or 'adjoin', found {tok.text!r}")
    r.take("}")
    try:
        ring = GradedRing(gens)
    except ValueError as e:
        raise DSLError(str(e), ntok.line, ntok.col) from None
    dmap = {}
    for g, span in diffs:
        if g.text not in ring.index:
            raise DSLError(f"differential of undeclared generator {g.text!r}", g.line, g.col)
        if g.text in dmap:
            raise DSLError(f"differential of {g.text!r} given twice", g.line, g.col)
        dmap[g.text] = _parse_poly(span, ring)
    if weights and set(weights) != set(ring.names):
        raise DSLError("weights must be given for all generators or none", ntok.line, ntok.col)
    ws.algebras[ntok.text] = ResolvingAlgebra(ring, dmap, weights=weights or None, name=ntok.text)


def _add_gen(tok, deg, gens, seen):
    if tok.text in seen:
        raise DSLError(f"generator {tok.text!r} declared twice", tok.line, tok.col)
    if tok.text in KEYWORDS:
        raise DSLError(f"{tok.text!r} is a keyword", tok.line, tok.col)
    seen[tok.text] = deg
    gens.append((tok.text, deg))


def _morphism(r, ws):
    r.take("morphism")
    ntok = r.name()
    _check_new(r, ws, ntok)
    r.take(":")
    src_t = r.name()
    r.take(kind="arrow")
    tgt_t = r.name()
    for t in (src_t, tgt_t):
        if t.text not in ws.algebras:
            raise DSLError(f"unknown algebra {t.text!r}", t.line, t.col)
    src, tgt = ws.algebras[src_t.text], ws.algebras[tgt_t.text]
    r.take("{")
    images = {}
    while r.peek() is not None and r.peek().text != "}":
        g = r.name()
        if g.text not in src.ring.index:
            raise DSLError(f"{g.text!r} is not a generator of {src_t.text}", g.line, g.col)
        if g.text in images:
            raise DSLError(f"image of {g.text!r} given twice", g.line, g.col)
        r.take(kind="arrow")
        images[g.text] = _parse_poly(r.expr_span({";"}), tgt.ring)
        r.take(";")
    r.take("}")
    missing = [n for n in src.names if n not in images]
    if missing:
        raise DSLError(f"morphism {ntok.text} has no image for {missing}", ntok.line, ntok.col)
    try:
        ws.morphisms[ntok.text] = DGAMorphism(src, tgt, images, name=ntok.text)
    except DGError as e:
        raise DSLError(str(e), ntok.line, ntok.col) from None


def _point(r, ws):
    r.take("point")
    ntok = r.name()
    _check_new(r, ws, ntok)
    r.take("on")
    atok = r.name()
    if atok.text not in ws.algebras:
        raise DSLError(f"unknown algebra {atok.text!r}", atok.line, atok.col)
    A = ws.algebras[atok.text]
    r.take("{")
    values = {}
    while r.peek() is not None and r.peek().text != "}":
        g = r.name()
        if g.text not in A.ring.index or A.ring.degree_of(g.text) != 0:
            raise DSLError(f"{g.text!r} is not a degree-zero generator of {atok.text}", g.line, g.col)
        r.take("=")
        values[g.text] = r.rational()
        r.take(";")
    r.take("}")
    ws.points[ntok.text] = Augmentation(A, values, name=ntok.text)


def serialize(ws):
    """Canonical text for a Workspace; parse(serialize(ws)) reproduces it."""
    out = []
    for name, A in ws.algebras.items():
        lines = [f"algebra {name} {{"]
        for g, deg in A.ring.gens_spec:
            w = f" weight {A.weights[g]}" if A.weights else ""
            lines.append(f"  gen {g}: {deg}{w};")
        for g in A.names:
            if A.dmap[g].terms:
                lines.append(f"  d {g} = {A.dmap[g]};")
        lines.append("}")
        out.append("\n".join(lines))
    for name, f in ws.morphisms.items():
        src = _name_of(ws.algebras, f.source)
        tgt = _name_of(ws.algebras, f.target)
        lines = [f"morphism {name}: {src} -> {tgt} {{"]
        for g in f.source.names:
            lines.append(f"  {g} -> {f.images[g]};")
        lines.append("}")
        out.append("\n".join(lines))
    for name, p in ws.points.items():
        alg = _name_of(ws.algebras, p.algebra)
        lines = [f"point {name} on {alg} {{"]
        for g in p.algebra.names:
            if g in p.values:
                lines.append(f"  {g} = {p.values[g]};")
        lines.append("}")
        out.append("\n".join(lines))
    return "\n\n".join(out) + "\n"


def _name_of(algebras, A):
    for n, B in algebras.items():
        if B is A:
            return n
    for n, B in algebras.items():
        if B.ring == A.ring and B.dmap == A.dmap:
            return n
    raise DGError("algebra is not part of the workspace")


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
