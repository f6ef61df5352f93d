"""Projectivity of sign functions via exact strict linear feasibility.

A sign function s on Phi is realizable when some theta' with
theta' . alpha = 0 has sign(theta' . beta) = s(beta) for every beta. The
alternative (Gordan with one equality) is a certificate: lambda >= 0, not all
zero, with sum(lambda_beta s(beta) beta) = mu alpha.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import fm
from .errors import CapExceeded, InvalidParams, NotAnExtension
from .exactlp import linprog
from .leaves import PhiSet, enumerate_phi
from .quiver import dot


@dataclass(frozen=True)
class SignFunction:
    signs: tuple[int, ...]  # +1 / -1 per class, in Phi order

    def __post_init__(self):
        if any(v not in (1, -1) for v in self.signs):
            raise ValueError("signs must be +1 or -1")

    def __len__(self) -> int:
        return len(self.signs)

    def __str__(self) -> str:
        return "".join("+" if v > 0 else "-" for v in self.signs)

    @property
    def mask(self) -> int:
        return sum(1 << i for i, v in enumerate(self.signs) if v < 0)

    def __neg__(self) -> SignFunction:
        return SignFunction(tuple(-v for v in self.signs))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> SignFunction:
        return cls(tuple(-1 if mask >> i & 1 else 1 for i in range(n)))

    @classmethod
    def from_string(cls, text: str) -> SignFunction:
        table = {"+": 1, "-": -1, "−": -1}
        try:
            return cls(tuple(table[c] for c in text.strip()))
        except KeyError as e:
            raise ValueError(f"bad sign character {e.args[0]!r}; use + and -") from None

    @classmethod
    def constant(cls, n: int, sign: int = 1) -> SignFunction:
        return cls((sign,) * n)

    @classmethod
    def from_mapping(cls, phi: PhiSet, values: dict, default: int | None = None) -> SignFunction:
        out = []
        for b in phi.betas:
            if b in values:
                out.append(values[b])
            elif default is not None:
                out.append(default)
            else:
                raise ValueError(f"no sign given for {b}")
        return cls(tuple(out))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: tuple[int, ...] | None = None
    lam: tuple[int, ...] | None = None
    mu: Fraction | None = None

    def to_json(self) -> dict:
        if self.feasible:
            return {"verdict": "feasible", "witness": list(self.witness)}
        return {"verdict": "infeasible", "lambda": list(self.lam), "mu": fraction_str(self.mu)}


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _primitive_ints(vals: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for v in vals:
        den = math.lcm(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in vals]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return tuple(v // g for v in ints) if g else tuple(ints)


def _signed_rows(phi: PhiSet, s: SignFunction) -> tuple[tuple[int, ...], ...]:
    if len(s) != len(phi):
        raise ValueError(f"sign function has length {len(s)}, Phi has {len(phi)}")
    return tuple(tuple(sg * c for c in b) for sg, b in zip(s.signs, phi.betas))


@lru_cache(maxsize=1 << 16)
def decide(rows: tuple[tuple[int, ...], ...], alpha: tuple[int, ...]) -> FeasibilityResult:
    """Strict feasibility of rows . theta > 0 on alpha-perp, with a witness or certificate."""
    d = len(alpha)
    if not rows:
        return FeasibilityResult(True, witness=(0,) * d)
    # margin LP: max t  s.t.  row . theta >= t,  alpha . theta = 0,  -1 <= theta <= 1
    c = [0] * d + [-1]
    A_ub = [[-v for v in r] + [1] for r in rows]
    res = linprog(c, A_ub, [0] * len(rows), [list(alpha) + [0]], [0],
                  [(-1, 1)] * d + [(0, None)])
    if not res.ok:
        raise RuntimeError(f"margin LP returned {res.status}")
    if -res.fun > 0:
        return FeasibilityResult(True, witness=_primitive_ints(res.x[:d]))
    # certificate LP: lambda >= 0, sum lambda = 1, sum lambda_i row_i - mu alpha = 0
    k = len(rows)
    A_eq = [[r[v] for r in rows] + [-alpha[v]] for v in range(d)]
    A_eq.append([1] * k + [0])
    cert = linprog([0] * (k + 1), A_eq=A_eq, b_eq=[0] * d + [1],
                   bounds=[(0, None)] * k + [(None, None)])
    if not cert.ok:
        raise RuntimeError("neither a witness nor a certificate was found")
    lam = cert.x[:k]
    mu = cert.x[k]
    den = 1
    for v in lam:
        den = math.lcm(den, v.denominator)
    ints = [int(v * den) for v in lam]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return FeasibilityResult(False, lam=tuple(v // g for v in ints), mu=mu * den / g)


def realizable(phi: PhiSet, s: SignFunction) -> FeasibilityResult:
    return decide(_signed_rows(phi, s), tuple(phi.alpha))


def realizable_fm(phi: PhiSet, s: SignFunction) -> bool:
    """Verdict only, by Fourier-Motzkin elimination."""
    return fm.strictly_feasible(_signed_rows(phi, s), phi.alpha)


def verify_feasibility_result(phi: PhiSet, s: SignFunction, r: FeasibilityResult) -> bool:
    """Re-check a witness or certificate with plain integer/rational arithmetic."""
    if len(s) != len(phi):
        return False
    alpha = phi.alpha
    if r.feasible:
        w = r.witness
        if w is None or len(w) != len(alpha):
            return False
        if dot(w, alpha) != 0:
            return False
        if any(sg * dot(w, b) <= 0 for sg, b in zip(s.signs, phi.betas)):
            return False
        if phi.betas:
            g = 0
            for v in w:
                g = math.gcd(g, int(v))
            if g != 1:
                return False
        return True
    lam, mu = r.lam, r.mu
    if lam is None or mu is None or len(lam) != len(phi):
        return False
    if any(v < 0 for v in lam) or not any(lam):
        return False
    for v in range(len(alpha)):
        total = sum(Fraction(l) * sg * b[v] for l, sg, b in zip(lam, s.signs, phi.betas))
        if total != Fraction(mu) * alpha[v]:
            return False
    return True


@dataclass
class CensusReport:
    total: int
    projective: int
    nonprojective: int
    results: list  # FeasibilityResult per mask, index = mask
    seconds: float

    def nonprojective_masks(self) -> list[int]:
        return [m for m, r in enumerate(self.results) if not r.feasible]


def _negate(r: FeasibilityResult) -> FeasibilityResult:
    if r.feasible:
        return FeasibilityResult(True, witness=tuple(-v for v in r.witness))
    return FeasibilityResult(False, lam=r.lam, mu=-r.mu)


def _census_chunk(args):
    phi, masks = args
    n = len(phi)
    return [realizable(phi, SignFunction.from_mask(n, m)) for m in masks]


def census(phi: PhiSet, cap: int = 24, jobs: int = 1, verify: bool = True) -> CensusReport:
    """Classify all 2^|Phi| sign functions in mask order (bit i set means minus).

    Only masks with the top bit clear are solved; the rest follow from the
    global sign flip and are verified like everything else.
    """
    n = len(phi)
    if n > cap:
        raise CapExceeded(f"|Phi| = {n} exceeds the cap {cap}")
    t0 = time.perf_counter()
    total = 1 << n
    half = total >> 1 if n else 1
    masks = list(range(half))
    if jobs > 1 and half > 1:
        size = max(1, half // (4 * jobs))
        chunks = [(phi, masks[i:i + size]) for i in range(0, half, size)]
        with ProcessPoolExecutor(jobs) as ex:
            low = [r for part in ex.map(_census_chunk, chunks) for r in part]
    else:
        low = _census_chunk((phi, masks))
    results = list(low)
    if n:
        full = total - 1
        results += [_negate(low[full ^ m]) for m in range(half, total)]
    if verify:
        for m, r in enumerate(results):
            if not verify_feasibility_result(phi, SignFunction.from_mask(n, m), r):
                raise RuntimeError(f"verification failed for mask {m}")
    nonproj = sum(1 for r in results if not r.feasible)
    return CensusReport(total, total - nonproj, nonproj, results, time.perf_counter() - t0)


@dataclass(frozen=True)
class MultisetCertificate:
    plus: tuple[int, ...]  # indices into Phi, with repetition
    minus: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.plus)


def multiset_certificate_search(phi: PhiSet, s: SignFunction, k_max: int):
    """Smallest k <= k_max with beta_1+..+beta_k = gamma_1+..+gamma_k (s = + resp. -)."""
    if k_max < 2:
        raise InvalidParams("k_max must be at least 2")
    plus = [i for i, v in enumerate(s.signs) if v > 0]
    minus = [i for i, v in enumerate(s.signs) if v < 0]
    if not plus or not minus:
        return None

    def total(idx):
        return tuple(sum(col) for col in zip(*(phi.betas[i] for i in idx)))

    for k in range(2, k_max + 1):
        sums = {}
        for combo in itertools.combinations_with_replacement(minus, k):
            sums.setdefault(total(combo), combo)
        for combo in itertools.combinations_with_replacement(plus, k):
            hit = sums.get(total(combo))
            if hit is not None:
                return MultisetCertificate(combo, hit)
    return None


def check_multiset_certificate(phi: PhiSet, s: SignFunction, cert: MultisetCertificate) -> bool:
    if len(cert.plus) != len(cert.minus) or not cert.plus:
        return False
    if any(s.signs[i] < 0 for i in cert.plus) or any(s.signs[i] > 0 for i in cert.minus):
        return False
    d = len(phi.alpha)
    lhs = [sum(phi.betas[i][v] for i in cert.plus) for v in range(d)]
    rhs = [sum(phi.betas[i][v] for i in cert.minus) for v in range(d)]
    return lhs == rhs


def embed(phi: PhiSet, target: PhiSet) -> list[int]:
    """Index in ``target`` of each class of ``phi`` after extension by zero."""
    src_q, dst_q = phi.quiver, target.quiver
    pos = []
    for v in src_q.vertices:
        if not dst_q.has_vertex(v):
            raise NotAnExtension(f"vertex {v!r} is missing from the larger quiver")
        pos.append(dst_q.index(v))
    out = []
    for b in phi.betas:
        big = [0] * dst_q.n
        for p, c in zip(pos, b):
            big[p] = c
        big = tuple(big)
        if big not in target.betas:
            raise NotAnExtension(f"class {b} has no counterpart in the larger Phi")
        out.append(target.betas.index(big))
    return out


def extend_sign_function(phi: PhiSet, target: PhiSet, s: SignFunction, default_sign: int = 1):
    if default_sign not in (1, -1):
        raise InvalidParams("default sign must be +1 or -1")
    idx = embed(phi, target)
    out = [default_sign] * len(target)
    for i, j in enumerate(idx):
        out[j] = s.signs[i]
    return SignFunction(tuple(out))


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: Fraction
    stderr: float
    hits: int
    trials: int


def star_phi(n: int, m: int) -> PhiSet:
    from .catalog import star

    inst = star(n, m)
    return enumerate_phi(inst.quiver, inst.alpha, inst.theta, "x")


def _spoke_set(phi: PhiSet, i: int) -> frozenset[int]:
    # vertices are x, 1..n, y; spoke j sits at index j
    return frozenset(j for j in range(1, phi.quiver.n - 1) if phi.betas[i][j])


def k2_nonprojective(phi: PhiSet, m: int, s: SignFunction) -> bool:
    """Partition test on W = {1..2m}: two complementary m-sets labelled + and two labelled -."""
    lookup = {_spoke_set(phi, i): i for i in range(len(phi))}
    w = range(1, 2 * m + 1)
    seen_plus = seen_minus = False
    for first in itertools.combinations(w, m):
        if 1 not in first:
            break
        a = frozenset(first)
        b = frozenset(w) - a
        sa, sb = s.signs[lookup[a]], s.signs[lookup[b]]
        if sa == sb == 1:
            seen_plus = True
        elif sa == sb == -1:
            seen_minus = True
        if seen_plus and seen_minus:
            return True
    return False


def _trial_signs(seed: int, trial: int, k: int) -> SignFunction:
    bits = np.random.default_rng([seed, trial]).integers(0, 2, size=k)
    return SignFunction(tuple(-1 if b else 1 for b in bits))


def monte_carlo_nonprojective(n: int, m: int, trials: int, seed: int = 0,
                              method: str = "lp") -> MonteCarloResult:
    """Fraction of uniformly random sign functions on the star family that are nonprojective."""
    if trials < 1:
        raise InvalidParams("trials must be at least 1")
    if not 2 <= m <= n - 2:
        raise InvalidParams("need 2 <= m <= n - 2")
    if method not in ("lp", "k2-criterion"):
        raise InvalidParams(f"unknown method {method!r}")
    if method == "k2-criterion" and 2 * m > n:
        raise InvalidParams("the partition test needs 2m <= n")
    phi = star_phi(n, m)
    hits = 0
    for t in range(trials):
        s = _trial_signs(seed, t, len(phi))
        if method == "lp":
            bad = not realizable(phi, s).feasible
        else:
            bad = k2_nonprojective(phi, m, s)
        hits += bad
    p = Fraction(hits, trials)
    stderr = math.sqrt(float(p) * (1 - float(p)) / trials)
    return MonteCarloResult(p, stderr, hits, trials)
