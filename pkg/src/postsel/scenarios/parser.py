"""Observable expressions such as ``"PA[0]*sx[1] - 0.5*sz[2]"``.

Grammar (whitespace is ignored, sites are 0-based)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := [number '*'] factor ('*' factor)*
    factor := ('sx'|'sy'|'sz'|'PA'|'PB'|'I') '[' integer ']'

``PA``/``PB`` are the box projectors in the declared box basis of each site.
"""

from __future__ import annotations

import re
from typing import Sequence

import numpy as np

from .. import qcore
from ..errors import DuplicateSite, ObservableSyntaxError, SiteOutOfRange
from ..qcore import LocalOperator, OperatorSum

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>sx|sy|sz|PA|PB|I)
  | (?P<op>[-+*\[\]])
    """,
    re.VERBOSE,
)

_PAULI = {"sx": qcore.SX, "sy": qcore.SY, "sz": qcore.SZ, "I": qcore.ID2}
FACTOR_NAMES = ("sx", "sy", "sz", "PA", "PB", "I")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ObservableSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n_sites: int, to_box: Sequence | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n_sites = n_sites
        self.to_box = to_box

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str, value: str | None = None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ObservableSyntaxError(f"expected {want!r}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> OperatorSum:
        terms = []
        sign = 1.0
        if self.peek()[:2] in (("op", "-"), ("op", "+")):
            sign = -1.0 if self.take("op")[1] == "-" else 1.0
        terms.append(self.term(sign))
        while self.peek()[:2] in (("op", "-"), ("op", "+")):
            sign = -1.0 if self.take("op")[1] == "-" else 1.0
            terms.append(self.term(sign))
        self.take("end")
        return OperatorSum(tuple(terms))

    def term(self, sign: float):
        coeff = sign
        if self.peek()[0] == "number":
            coeff *= float(self.take("number")[1])
            self.take("op", "*")
        factors = [self.factor()]
        while self.peek()[:2] == ("op", "*"):
            self.take("op", "*")
            factors.append(self.factor())
        seen = set()
        for f, pos in factors:
            if f.site in seen:
                raise DuplicateSite(f"site {f.site} appears twice in one term (position {pos})")
            seen.add(f.site)
        return coeff, tuple(f for f, _ in factors)

    def factor(self):
        tok = self.peek()
        if tok[0] != "name":
            got = tok[1] or "end of input"
            raise ObservableSyntaxError(f"expected an operator name, got {got!r}", tok[2])
        name = self.take("name")[1]
        self.take("op", "[")
        site_tok = self.take("number")
        if not site_tok[1].isdigit():
            raise ObservableSyntaxError("site index must be a non-negative integer", site_tok[2])
        site = int(site_tok[1])
        self.take("op", "]")
        if site >= self.n_sites:
            raise SiteOutOfRange(f"site {site} >= n_sites {self.n_sites} (position {tok[2]})")
        if name in _PAULI:
            matrix = _PAULI[name]
        else:
            u = None if self.to_box is None else self.to_box[site]
            matrix = qcore.box_projector(site, name[1], u).terms[0][1][0].array
        return LocalOperator(matrix, site, name), tok[2]


def parse_observable(text: str, n_sites: int, to_box: Sequence | None = None) -> OperatorSum:
    """Parse ``text`` into an :class:`OperatorSum` over ``n_sites`` sites.

    ``to_box`` optionally gives, per site, the storage->box unitary used for
    ``PA``/``PB`` (``None`` entries mean the storage basis itself).
    """
    return _Parser(text, n_sites, to_box).expr()


def _format_coeff(c: complex) -> str:
    if c.imag != 0:
        raise ValueError(f"cannot format complex coefficient {c}")
    return repr(float(abs(c.real)))


def format_observable(op: OperatorSum) -> str:
    """Inverse of :func:`parse_observable` for real-coefficient, labelled operators."""
    parts = []
    for k, (c, factors) in enumerate(op.terms):
        if c.imag != 0:
            raise ValueError(f"cannot format complex coefficient {c}")
        negative = np.signbit(c.real)
        if factors:
            names = []
            for f in factors:
                if f.label not in FACTOR_NAMES:
                    raise ValueError(f"factor on site {f.site} has no printable label")
                names.append(f"{f.label}[{f.site}]")
            body = "*".join(names)
        else:
            body = "I[0]"
        if abs(c.real) != 1.0:
            body = f"{_format_coeff(c)}*{body}"
        if k == 0:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append((" - " if negative else " + ") + body)
    return "".join(parts)
