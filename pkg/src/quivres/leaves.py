"""Decomposition classes Phi, the multiplicities m_beta, and local quivers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidLocalQuiver, InvalidStability
from .quiver import (
    DimVector,
    Instance,
    Quiver,
    dot,
    is_connected,
    is_positive_root,
    support,
    sym_form,
    tits_q,
    validate_stability,
)


@dataclass(frozen=True)
class PhiSet:
    quiver: Quiver
    alpha: DimVector
    theta: tuple
    x: str
    betas: tuple[DimVector, ...]
    m: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.betas)

    def index_of(self, beta: Sequence[int]) -> int:
        return self.betas.index(tuple(beta))

    def label(self, i: int) -> str:
        """Short name like ``x+1+2`` or ``x+2*1`` for the i-th class."""
        parts = []
        for v, c in zip(self.quiver.vertices, self.betas[i]):
            if c == 1:
                parts.append(v)
            elif c:
                parts.append(f"{c}*{v}")
        return "+".join(parts)


def m_beta(q: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    rest = [a - b for a, b in zip(alpha, beta)]
    return -sym_form(q, beta, rest)


def _candidates(alpha, xi):
    ranges = [range(1, a + 1) if i == xi else range(a + 1) for i, a in enumerate(alpha)]
    alpha = tuple(alpha)
    for beta in itertools.product(*ranges):
        if beta != alpha:
            yield beta


def _root_test(q, beta, use_shortcut):
    if use_shortcut:
        return is_connected(q, support(beta))
    return is_positive_root(q, beta)


def enumerate_phi(
    q: Quiver,
    alpha: Sequence[int],
    theta: Sequence,
    x: str,
    require_m_gt_2: bool = True,
    shortcut: bool | None = None,
) -> PhiSet:
    """All two-summand decomposition classes through ``x``.

    ``shortcut`` selects the connected-support root test (valid for 0/1
    vectors); by default it is used exactly when ``alpha`` is all ones.
    Classes are listed in descending lexicographic order of the vector.
    """
    alpha = tuple(int(a) for a in alpha)
    if not validate_stability(theta, alpha):
        raise InvalidStability("theta . alpha != 0")
    xi = q.index(x)
    if shortcut is None:
        shortcut = all(a == 1 for a in alpha)
    found = []
    for beta in _candidates(alpha, xi):
        if dot(theta, beta) != 0:
            continue
        rest = tuple(a - b for a, b in zip(alpha, beta))
        if not _root_test(q, beta, shortcut) or not _root_test(q, rest, shortcut):
            continue
        m = m_beta(q, alpha, beta)
        if require_m_gt_2 and m <= 2:
            continue
        found.append((beta, m))
    found.sort(reverse=True)
    return PhiSet(q, alpha, tuple(theta), x, tuple(b for b, _ in found), tuple(m for _, m in found))


def phi_from_betas(q: Quiver, alpha, theta, x: str, betas) -> PhiSet:
    """Wrap a hard-coded list of classes, checking the defining conditions."""
    alpha = tuple(int(a) for a in alpha)
    if not validate_stability(theta, alpha):
        raise InvalidStability("theta . alpha != 0")
    xi = q.index(x)
    out = []
    for beta in betas:
        beta = tuple(int(c) for c in beta)
        rest = tuple(a - b for a, b in zip(alpha, beta))
        if beta[xi] < 1 or any(c < 0 for c in rest) or beta == alpha:
            raise ValueError(f"{beta} is not between e_x and alpha")
        if dot(theta, beta) != 0:
            raise ValueError(f"theta . {beta} != 0")
        out.append((beta, m_beta(q, alpha, beta)))
    out.sort(reverse=True)
    return PhiSet(q, alpha, tuple(theta), x, tuple(b for b, _ in out), tuple(m for _, m in out))


def phi_for(inst: Instance, require_m_gt_2: bool = True) -> PhiSet:
    if inst.phi is not None:
        return phi_from_betas(inst.quiver, inst.alpha, inst.theta, inst.x, inst.phi)
    return enumerate_phi(inst.quiver, inst.alpha, inst.theta, inst.x, require_m_gt_2)


def count_locally_projective(q: Quiver, alpha, theta, x: str) -> int:
    return 2 ** len(enumerate_phi(q, alpha, theta, x))


@dataclass(frozen=True)
class LocalQuiver:
    dims: tuple[DimVector, ...]
    multiplicities: tuple[int, ...]
    loops: tuple[int, ...]
    arrows: tuple[tuple[int, ...], ...]  # symmetric, zero diagonal

    @property
    def n(self) -> int:
        return len(self.dims)


def local_quiver(q: Quiver, summands: Sequence[tuple[Sequence[int], int]]) -> LocalQuiver:
    """Loops 2 - 2q(dim V_i) at each summand, -(dim V_i, dim V_j) arrows between summands."""
    dims = []
    mults = []
    for d, k in summands:
        d = tuple(int(c) for c in d)
        if not any(d):
            raise InvalidLocalQuiver("summand of dimension zero")
        if k < 1:
            raise InvalidLocalQuiver("summand multiplicity must be positive")
        dims.append(d)
        mults.append(int(k))
    loops = tuple(2 - 2 * tits_q(q, d) for d in dims)
    if any(v < 0 for v in loops):
        raise InvalidLocalQuiver(f"negative loop count {loops}; a summand is not a root")
    n = len(dims)
    arrows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a = -sym_form(q, dims[i], dims[j])
            if a < 0:
                raise InvalidLocalQuiver(f"negative arrow count between summands {i} and {j}")
            arrows[i][j] = arrows[j][i] = a
    return LocalQuiver(tuple(dims), tuple(mults), loops, tuple(tuple(r) for r in arrows))
