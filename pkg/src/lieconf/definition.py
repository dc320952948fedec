"""Algebra definition files.

::

    # comments start with '#'
    algebra M
    generator e torsion D
    generator u
    generator n
    bracket u n = n
    vacuum e
    window -8 0
    product u n 0 = n

A file with ``vacuum`` or ``product`` lines defines a vertex algebra; its
brackets come from the nonnegative products and any ``bracket`` lines must
agree with them.  A bracket given for ``(g, h)`` but not ``(h, g)`` is
completed by skew symmetry; pairs given neither way are zero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .conformal import ConformalAlgebra, LambdaElement
from .errors import DefinitionError, ParseError
from .hmodule import ModuleElement, PresentedModule
from .parsing import parse_linear, parse_poly
from .poly import RatPoly
from .vertex import DEFAULT_TRUNCATION, VertexAlgebra, lie_functor

log = logging.getLogger(__name__)

_KEYWORDS = ("algebra", "generator", "bracket", "vacuum", "window", "product")


@dataclass
class Definition:
    name: str
    algebra: ConformalAlgebra
    vertex: VertexAlgebra | None = None
    warnings: list = field(default_factory=list)

    @property
    def carrier(self) -> PresentedModule:
        return self.algebra.carrier


def _is_name(s: str) -> bool:
    return s.isidentifier() and s not in ("D", "L")


def parse_element(text: str, carrier: PresentedModule, line: int = 1, col_offset: int = 0) -> ModuleElement:
    """``"u + D*n"`` -> carrier element."""
    polys = parse_linear(text, ["D"], carrier.labels, line, col_offset)
    coords = [RatPoly()] * carrier.ngens
    for g, p in polys.items():
        coords[carrier.labels.index(g)] = p.univariate(0)
    return carrier.element(coords)


def parse_definition(text: str) -> Definition:
    name = None
    gens: list[str] = []
    torsion: dict[str, RatPoly] = {}
    brackets: dict = {}
    products: dict = {}
    vacuum = None
    window = None
    carrier = None

    def need_carrier(lineno):
        nonlocal carrier
        if carrier is None:
            if not gens:
                raise ParseError("no generators declared", lineno, 1)
            rels = []
            for i, g in enumerate(gens):
                if g in torsion:
                    row = [RatPoly()] * len(gens)
                    row[i] = torsion[g]
                    rels.append(row)
            carrier = PresentedModule(gens, rels)
        return carrier

    def gen_word(word, lineno, col):
        if word not in gens:
            raise ParseError(f"unknown generator {word!r}", lineno, col)
        return word

    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())
        words = body.split()
        kw = words[0]
        col = indent + 1
        if kw not in _KEYWORDS:
            raise ParseError(f"unknown keyword {kw!r}", lineno, col)
        if kw != "algebra" and name is None:
            raise ParseError("no algebra declared", lineno, col)
        if kw == "algebra":
            if name is not None:
                raise ParseError("algebra declared twice", lineno, col)
            if len(words) != 2:
                raise ParseError("expected 'algebra <name>'", lineno, col)
            name = words[1]
        elif kw == "generator":
            if carrier is not None:
                raise ParseError("generators must precede brackets and products", lineno, col)
            if len(words) < 2 or not _is_name(words[1]):
                raise ParseError("expected 'generator <name> [torsion <poly>]'", lineno, col)
            g = words[1]
            if g in gens:
                raise ParseError(f"generator {g!r} declared twice", lineno, body.index(g, indent) + 1)
            gens.append(g)
            if len(words) > 2:
                if words[2] != "torsion" or len(words) == 3:
                    raise ParseError("expected 'torsion <poly in D>'", lineno, body.index(words[2], indent) + 1)
                start = body.index("torsion", indent) + len("torsion")
                p = parse_poly(body[start:], ["D"], lineno, start).univariate(0)
                if p.degree < 1:
                    raise DefinitionError(f"line {lineno}: torsion of {g} must have positive degree")
                torsion[g] = p.monic()
        elif kw in ("bracket", "product"):
            M = need_carrier(lineno)
            if "=" not in body:
                raise ParseError("expected '='", lineno, len(body) + 1)
            lhs, rhs = body.split("=", 1)
            lw = lhs.split()
            nargs = 3 if kw == "bracket" else 4
            if len(lw) != nargs:
                usage = "bracket <g1> <g2> = ..." if kw == "bracket" else "product <g1> <g2> <n> = ..."
                raise ParseError(f"expected '{usage}'", lineno, col)
            g1 = gen_word(lw[1], lineno, lhs.index(lw[1], indent + len(kw)) + 1)
            g2 = gen_word(lw[2], lineno, lhs.rindex(lw[2]) + 1)
            off = len(lhs) + 1
            if kw == "bracket":
                polys = parse_linear(rhs, ["L", "D"], M.labels, lineno, off)
                key = (g1, g2)
                if key in brackets:
                    raise ParseError(f"bracket {g1} {g2} given twice", lineno, col)
                brackets[key] = LambdaElement.from_polys(M, polys)
            else:
                try:
                    n = int(lw[3])
                except ValueError:
                    raise ParseError("product index must be an integer", lineno, lhs.rindex(lw[3]) + 1) from None
                key = (g1, g2, n)
                if key in products:
                    raise ParseError(f"product {g1} {g2} {n} given twice", lineno, col)
                products[key] = parse_element(rhs, M, lineno, off)
        elif kw == "vacuum":
            need_carrier(lineno)
            if len(words) != 2:
                raise ParseError("expected 'vacuum <generator>'", lineno, col)
            if vacuum is not None:
                raise ParseError("vacuum declared twice", lineno, col)
            vacuum = gen_word(words[1], lineno, body.index(words[1], indent + 6) + 1)
        elif kw == "window":
            if len(words) != 3:
                raise ParseError("expected 'window <lo> <hi>'", lineno, col)
            try:
                window = (int(words[1]), int(words[2]))
            except ValueError:
                raise ParseError("window bounds must be integers", lineno, col) from None
            if window[0] > window[1] + 1:
                raise ParseError("empty product window", lineno, col)

    if name is None:
        raise ParseError("no algebra declared", 0, 0)
    M = need_carrier(0)
    warnings = []
    if vacuum is not None or products or window is not None:
        if vacuum is None:
            raise DefinitionError("vertex algebra without a vacuum")
        V = VertexAlgebra(M, vacuum, products, window, name=name)
        L = lie_functor(V)
        L.name = name
        for (g1, g2), v in brackets.items():
            if L.entry(M.labels.index(g1), M.labels.index(g2)) != v:
                raise DefinitionError(f"bracket {g1} {g2} disagrees with the products")
        return Definition(name, L, V, warnings)
    # explicit entries (zeros included) are never overwritten
    given = ConformalAlgebra(M, brackets, verify=False)
    table = dict(brackets)
    for g1, g2 in brackets:
        if (g2, g1) not in brackets:
            table[(g2, g1)] = given.skew_partner(M.gen(g1), M.gen(g2))
            msg = f"bracket {g2} {g1} filled in by skew symmetry"
            log.warning(msg)
            warnings.append(msg)
    missing = [(a, b) for a in M.labels for b in M.labels if (a, b) not in table]
    if missing:
        msg = "brackets set to zero: " + ", ".join(f"{a} {b}" for a, b in missing)
        log.warning(msg)
        warnings.append(msg)
    return Definition(name, ConformalAlgebra(M, table, name=name), None, warnings)


def serialize(defn: Definition | ConformalAlgebra | VertexAlgebra, truncation_order: int = DEFAULT_TRUNCATION) -> str:
    """Canonical text form; ``parse_definition`` reads it back unchanged.

    Vertex algebras without a finite window are written on ``-T..top``.
    """
    if isinstance(defn, Definition):
        obj = defn.vertex or defn.algebra
        name = defn.name
    else:
        obj = defn
        name = obj.name
    M = obj.carrier
    lines = [f"algebra {name or 'A'}"]
    torsion = {}
    for r in M.relations:
        cols = [i for i, c in enumerate(r) if c]
        if len(cols) != 1:
            raise DefinitionError("only single-generator torsion relations can be written")
        torsion[cols[0]] = r[cols[0]].monic()
    for i, g in enumerate(M.labels):
        lines.append(f"generator {g}" + (f" torsion {torsion[i].to_str('D')}" if i in torsion else ""))
    if isinstance(obj, VertexAlgebra):
        lines.append(f"vacuum {M.labels[obj.vacuum_index]}")
        lo = obj.lo if obj.lo is not None else -truncation_order
        lines.append(f"window {lo} {obj.top}")
        for (g1, g2, n), v in sorted(
            obj.product_table(lo, obj.top).items(),
            key=lambda t: (M.labels.index(t[0][0]), M.labels.index(t[0][1]), t[0][2]),
        ):
            lines.append(f"product {g1} {g2} {n} = {v.to_str()}")
    else:
        for i, g in enumerate(M.labels):
            for j, h in enumerate(M.labels):
                lines.append(f"bracket {g} {h} = {obj.entry(i, j).to_str()}")
    return "\n".join(lines) + "\n"
