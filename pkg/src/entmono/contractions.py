"""Text DSL for polynomial-invariant contractions and its evaluator.

Grammar::

    expr   := factor ('*' factor)*
    factor := ('psi' | 'psi*' | 'delta' | 'eps') '[' ident (',' ident)* ']'

Whitespace is insignificant; identifiers are alphanumeric.  A ``psi`` /
``psi*`` factor has one index per party (position = party); ``delta`` and
``eps`` take exactly two indices, and every index name must occur exactly
twice across the whole expression.  ``eps`` is the two-dimensional
antisymmetric tensor (eps_01 = 1, eps_10 = -1), so it may only bind
dimension-2 indices.

Example -- the quadratic norm invariant::

    psi[i,j,k] * psi*[i,j,k]
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractionSyntaxError,
    DegreeImbalanceWarning,
    DimensionMismatch,
    EpsDimensionError,
    IndexArityError,
    SlotArityError,
)
from .states import StateTensor

PSI = "psi"
PSI_CONJ = "psi*"
DELTA = "delta"
EPSILON = "eps"

_EPS_TENSOR = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)

_TOKEN_RE = re.compile(r"\s*(?:([A-Za-z0-9]+)|([\[\],*])|(\S))")


@dataclass(frozen=True)
class Factor:
    kind: str
    indices: tuple[str, ...]


@dataclass(frozen=True)
class ContractionExpr:
    factors: tuple[Factor, ...]
    slot_count: int
    balanced: bool

    def __str__(self) -> str:
        return format_contraction(self)


def format_contraction(expr: ContractionExpr) -> str:
    """Canonical text form; reparses to an identical AST."""
    return " * ".join(f"{f.kind}[{','.join(f.indices)}]" for f in expr.factors)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1) is not None:
            tokens.append(("ident", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("sym", m.group(2), m.start(2)))
        else:
            raise ContractionSyntaxError(
                f"unexpected character {m.group(3)!r} at position {m.start(3)}"
            )
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.at = 0

    def _peek(self):
        return self.tokens[self.at] if self.at < len(self.tokens) else None

    def _next(self, expect_sym: str | None = None):
        tok = self._peek()
        if tok is None:
            raise ContractionSyntaxError(
                f"unexpected end of input at position {len(self.text)}"
            )
        if expect_sym is not None and (tok[0] != "sym" or tok[1] != expect_sym):
            raise ContractionSyntaxError(
                f"expected {expect_sym!r} at position {tok[2]}, got {tok[1]!r}"
            )
        self.at += 1
        return tok

    def factor(self) -> Factor:
        tok = self._next()
        if tok[0] != "ident" or tok[1] not in (PSI, DELTA, EPSILON):
            raise ContractionSyntaxError(
                f"expected psi, psi*, delta or eps at position {tok[2]}, got {tok[1]!r}"
            )
        kind = tok[1]
        nxt = self._peek()
        if kind == PSI and nxt is not None and nxt[:2] == ("sym", "*"):
            self._next()
            kind = PSI_CONJ
        self._next("[")
        indices = [self._ident()]
        while True:
            nxt = self._peek()
            if nxt is not None and nxt[:2] == ("sym", ","):
                self._next()
                indices.append(self._ident())
            else:
                break
        self._next("]")
        return Factor(kind, tuple(indices))

    def _ident(self) -> str:
        tok = self._next()
        if tok[0] != "ident":
            raise ContractionSyntaxError(
                f"expected an index name at position {tok[2]}, got {tok[1]!r}"
            )
        return tok[1]

    def expr(self) -> list[Factor]:
        factors = [self.factor()]
        while self._peek() is not None:
            self._next("*")
            factors.append(self.factor())
        return factors


def parse_contraction(text: str) -> ContractionExpr:
    """Parse the DSL text and validate the structural invariants.

    Raises ContractionSyntaxError / SlotArityError / IndexArityError.  An
    unequal number of psi and psi* factors is legal but warns
    (DegreeImbalanceWarning), since such contractions are generally not
    full-unitary-group invariants.
    """
    factors = _Parser(text).expr()

    slot_count = 0
    for f in factors:
        if f.kind in (PSI, PSI_CONJ):
            if slot_count == 0:
                slot_count = len(f.indices)
            elif len(f.indices) != slot_count:
                raise SlotArityError(
                    f"{f.kind} factor has {len(f.indices)} indices, "
                    f"expected {slot_count}"
                )
        elif len(f.indices) != 2:
            raise SlotArityError(
                f"{f.kind} factor must have exactly 2 indices, got {len(f.indices)}"
            )

    counts: dict[str, int] = {}
    for f in factors:
        for ix in f.indices:
            counts[ix] = counts.get(ix, 0) + 1
    for ix, c in counts.items():
        if c != 2:
            raise IndexArityError(f"index {ix!r} occurs {c} times, must occur exactly 2")

    n_psi = sum(f.kind == PSI for f in factors)
    n_conj = sum(f.kind == PSI_CONJ for f in factors)
    balanced = n_psi == n_conj
    if not balanced:
        warnings.warn(
            f"contraction has {n_psi} psi but {n_conj} psi* factors; "
            "it is not a U(d)-invariant polynomial as written",
            DegreeImbalanceWarning,
            stacklevel=2,
        )
    return ContractionExpr(tuple(factors), slot_count, balanced)


@dataclass(frozen=True)
class InvariantValue:
    value: complex
    imag_warning: bool


def _index_dims(expr: ContractionExpr, dims: tuple[int, ...]) -> dict[str, int]:
    """Resolve the dimension carried by every index name.

    psi slots pin dimensions directly; delta/eps equate their two indices.
    """
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: str, y: str) -> None:
        parent[find(x)] = find(y)

    for f in expr.factors:
        if f.kind in (DELTA, EPSILON):
            union(f.indices[0], f.indices[1])

    dim_of_root: dict[str, int] = {}
    for f in expr.factors:
        if f.kind not in (PSI, PSI_CONJ):
            continue
        for slot, ix in enumerate(f.indices):
            root = find(ix)
            d = dims[slot]
            if dim_of_root.setdefault(root, d) != d:
                raise DimensionMismatch(
                    f"index {ix!r} is bound to dimensions "
                    f"{dim_of_root[root]} and {d} at once"
                )
    resolved = {}
    for ix in parent:
        root = find(ix)
        if root not in dim_of_root:
            raise DimensionMismatch(f"cannot infer the dimension of index {ix!r}")
        resolved[ix] = dim_of_root[root]
    for f in expr.factors:
        for ix in f.indices:
            if ix not in resolved:
                raise DimensionMismatch(f"cannot infer the dimension of index {ix!r}")
    return resolved


def eval_contraction(expr: ContractionExpr, state: StateTensor) -> InvariantValue:
    """Einstein-sum the factor product over the state's amplitudes."""
    if expr.slot_count != state.n_parties:
        raise DimensionMismatch(
            f"expression binds {expr.slot_count} parties, state has {state.n_parties}"
        )
    dims = _index_dims(expr, state.dims)
    for f in expr.factors:
        if f.kind == EPSILON:
            for ix in f.indices:
                if dims[ix] != 2:
                    raise EpsDimensionError(
                        f"eps index {ix!r} is bound to dimension {dims[ix]}, need 2"
                    )

    label = {ix: i for i, ix in enumerate(dims)}
    t = state.tensor()
    args: list = []
    for f in expr.factors:
        if f.kind == PSI:
            args.append(t)
        elif f.kind == PSI_CONJ:
            args.append(t.conj())
        elif f.kind == DELTA:
            args.append(np.eye(dims[f.indices[0]], dtype=complex))
        else:
            args.append(_EPS_TENSOR)
        args.append([label[ix] for ix in f.indices])
    args.append([])
    value = complex(np.einsum(*args, optimize="greedy"))
    return InvariantValue(value, expr.balanced and abs(value.imag) > 1e-9)


def is_simple_form(expr: ContractionExpr) -> tuple[bool, str | None]:
    """Check the multiplicativity-friendly normal form.

    Simple means: contractions use delta only (explicitly or by direct
    index repetition), each contraction joins a psi index to a psi* index,
    and the joined indices sit at the same party slot.  Returns (ok,
    first violation or None).
    """
    # where does each index occur? (factor kind, party slot or None)
    sites: dict[str, list[tuple[str, int | None]]] = {}
    for f in expr.factors:
        for slot, ix in enumerate(f.indices):
            party = slot if f.kind in (PSI, PSI_CONJ) else None
            sites.setdefault(ix, []).append((f.kind, party))

    for f in expr.factors:
        if f.kind == EPSILON:
            return False, f"factor eps[{','.join(f.indices)}] is not a delta contraction"

    def psi_site(ix: str) -> tuple[str, int | None] | None:
        for kind, party in sites[ix]:
            if kind in (PSI, PSI_CONJ):
                return kind, party
        return None

    for f in expr.factors:
        if f.kind == DELTA:
            a, b = f.indices
            sa, sb = psi_site(a), psi_site(b)
            if sa is None or sb is None:
                return False, (
                    f"delta[{a},{b}] does not join psi-type indices directly"
                )
            if {sa[0], sb[0]} != {PSI, PSI_CONJ}:
                return False, f"delta[{a},{b}] does not join a psi index to a psi* index"
            if sa[1] != sb[1]:
                return False, (
                    f"delta[{a},{b}] joins party slot {sa[1]} to slot {sb[1]}"
                )

    for ix, occ in sites.items():
        kinds = [k for k, _ in occ]
        if DELTA in kinds:
            continue  # handled above
        (ka, pa), (kb, pb) = occ
        if {ka, kb} != {PSI, PSI_CONJ}:
            return False, f"index {ix!r} joins {ka} to {kb}, need psi with psi*"
        if pa != pb:
            return False, f"index {ix!r} sits at party slot {pa} and slot {pb}"
    return True, None
