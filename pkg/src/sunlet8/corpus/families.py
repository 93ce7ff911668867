"""Parameterised block families and their expansion into explicit blocks.

A family file looks like::

    host cartesian 8 10
    for i = 1..8
      i:1 i:6 i:2 i:7 / i:3 i:8 i:4 i:9
    for (j,k) = (2,10), (4,1) | j = 3; k = 5
      1:j 2:j 3:j 4:j / 1:k 2:k 3:k 4:k
    const
      1:1 2:1 3:1 4:1 / 5:1 6:1 7:1 8:1

Matrix rows are the cycle (in order) and the pendants (aligned by column).
An entry ``a:b`` is the product vertex in row ``a``, column ``b``; a bare
``a`` is vertex ``a`` of a non-product host.  Indices are 1-based and may be
integer expressions over the bound variables.  A binding line is a ``|``
separated union of alternatives; inside one alternative the ``;`` separated
clauses are combined as a Cartesian product.
"""

from __future__ import annotations

import ast
import itertools
import re
from dataclasses import dataclass, field
from typing import Optional

from ..graphs import CartesianComplete, GraphSpec, SpecError, Vertex, parse_spec
from ..sunlet import SunletBlock


class FamilyError(ValueError):
    pass


@dataclass
class Family:
    binding: str  # "" for constants
    templates: list[str]
    line: int


@dataclass
class FamilyFile:
    host: GraphSpec
    families: list[Family]


@dataclass
class Expansion:
    host: GraphSpec
    blocks: list[SunletBlock]
    # (line, binding values, template, message) for templates that could not be built
    failures: list[tuple[int, dict, str, str]] = field(default_factory=list)


def parse_family_file(text: str) -> FamilyFile:
    host = None
    fams: list[Family] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if raw[:1].isspace():
            if not fams:
                raise FamilyError(f"line {no}: matrix outside a family")
            fams[-1].templates.append(line.strip())
            continue
        word, _, rest = line.partition(" ")
        if word == "host":
            host = parse_spec(rest)
        elif word == "for":
            fams.append(Family(rest.strip(), [], no))
        elif word == "const":
            fams.append(Family("", [], no))
        else:
            raise FamilyError(f"line {no}: unexpected {word!r}")
    if host is None:
        raise FamilyError("missing host line")
    return FamilyFile(host, fams)


# --------------------------------------------------------------------------
# Bindings
# --------------------------------------------------------------------------


def _value_list(text: str) -> list:
    text = text.strip()
    if text.startswith("("):
        out = []
        for tup in re.findall(r"\(([^)]*)\)", text):
            out.append(tuple(int(x) for x in tup.split(",")))
        return out
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if ".." in tok:
            lo, hi = tok.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif tok:
            out.append(int(tok))
    return out


def _clause(text: str) -> list[dict]:
    names, eq, vals = text.partition("=")
    if not eq:
        raise FamilyError(f"clause without '=': {text!r}")
    names = names.strip()
    values = _value_list(vals)
    if names.startswith("("):
        keys = [k.strip() for k in names.strip("()").split(",")]
        rows = []
        for v in values:
            if not isinstance(v, tuple) or len(v) != len(keys):
                raise FamilyError(f"value {v} does not fit {names}")
            rows.append(dict(zip(keys, v)))
        return rows
    if any(isinstance(v, tuple) for v in values):
        raise FamilyError(f"tuple value for scalar {names}")
    return [{names: v} for v in values]


def bindings(spec: str) -> list[dict]:
    if not spec:
        return [{}]
    out = []
    for alt in spec.split("|"):
        clauses = [_clause(c) for c in alt.split(";") if c.strip()]
        for combo in itertools.product(*clauses):
            env: dict = {}
            for part in combo:
                env.update(part)
            out.append(env)
    return out


# --------------------------------------------------------------------------
# Index expressions
# --------------------------------------------------------------------------

_OPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b, ast.Mult: lambda a, b: a * b}


def _eval(node, env):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise FamilyError(f"unbound variable {node.id}")
        return env[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval(node.operand, env)
    raise FamilyError(f"unsupported expression {ast.dump(node)}")


def index(expr: str, env: dict) -> int:
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise FamilyError(f"bad index {expr!r}") from exc
    return _eval(tree, env)


def _vertex(entry: str, env: dict, product: bool) -> Vertex:
    if product:
        r, sep, c = entry.partition(":")
        if not sep:
            raise FamilyError(f"product host needs row:col, got {entry!r}")
        return Vertex(index(r, env) - 1, index(c, env) - 1)
    if ":" in entry:
        raise FamilyError(f"non-product host takes bare indices, got {entry!r}")
    return Vertex(index(entry, env) - 1, 0)


def build(template: str, env: dict, product: bool) -> SunletBlock:
    top, sep, bottom = template.partition("/")
    cyc, pend = top.split(), bottom.split()
    if not sep or len(cyc) != 4 or len(pend) != 4:
        raise FamilyError(f"a matrix needs 4 entries per row: {template!r}")
    return SunletBlock(
        tuple(_vertex(e, env, product) for e in cyc), tuple(_vertex(e, env, product) for e in pend)
    )


def expand(ff: FamilyFile) -> Expansion:
    product = isinstance(ff.host, CartesianComplete)
    res = Expansion(ff.host, [])
    for fam in ff.families:
        for env in bindings(fam.binding):
            for t in fam.templates:
                try:
                    res.blocks.append(build(t, env, product))
                except FamilyError as exc:
                    res.failures.append((fam.line, dict(env), t, str(exc)))
    return res


def expand_text(text: str) -> Expansion:
    try:
        return expand(parse_family_file(text))
    except (SpecError, ValueError) as exc:
        if isinstance(exc, FamilyError):
            raise
        raise FamilyError(str(exc)) from exc
