"""Deterministic bracketed root finding and two-cycle enumeration.

``find_h_roots`` locates every root of h on the clamped interval
(theta_1, theta_2).  The interval spans many decades (its upper end grows
like theta^-k), so the primary scan runs on a uniform grid in ln x;
``scan_brackets`` itself stays a plain uniform-grid scanner and the log
transform is applied to its arguments.  The known root at x = 1 is injected
analytically and deduplicated against whatever the scan found, and extra
fine scans around x = 1 catch the two-cycle pair as it collapses into the
fixed point near the critical activity.

Everything here is pure and deterministic: identical inputs give
bit-identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .period2 import DomainError, domain_bounds, f_scalar, h_scalar, theta_cr

# relative margin pulled inside (theta_1, theta_2) before scanning
CLAMP_MARGIN = 1e-9
# computed roots this close (relative) to 1.0 are the injected root
DEDUP_REL = 1e-9
# adjacent roots closer than this (relative) merge into one, flagged
NEAR_DEGENERATE_REL = 1e-7
# h values below this are rounding noise (measured evaluation error near
# x = 1 stays under 1e-15); adjacent sign changes with h pinned below the
# floor between them are one uncertifiable root, not several
NOISE_FLOOR = 1e-14
# |f(x0) - x2| tolerance for orbit pairing
PAIR_TOL = 1e-8

KIND_TRANSLATION_INVARIANT = "translation-invariant"
KIND_PERIOD2 = "period-2"


@dataclass(frozen=True)
class Bracket:
    """Sign-change interval with cached endpoint values."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)
                and self.lo < self.hi):
            raise ValueError(f"need finite lo < hi, got [{self.lo}, {self.hi}]")
        if not (math.isfinite(self.f_lo) and math.isfinite(self.f_hi)):
            raise ValueError("endpoint values must be finite")
        if self.f_lo == 0.0 or self.f_hi == 0.0 or \
                (self.f_lo > 0) == (self.f_hi > 0):
            raise ValueError("endpoint values must have opposite signs")


class BisectionError(RuntimeError):
    """Refinement failed; carries the final bracket for diagnostics."""

    def __init__(self, message: str, bracket: Bracket):
        super().__init__(f"{message} (bracket [{bracket.lo}, {bracket.hi}], "
                         f"values [{bracket.f_lo}, {bracket.f_hi}])")
        self.bracket = bracket


def scan_brackets(fn: Callable[[float], float], lo: float, hi: float,
                  grid: int) -> list[Bracket]:
    """Brackets from sign changes of fn on a uniform grid over [lo, hi].

    Grid points where fn raises DomainError or returns a non-finite value
    are treated as non-bracketing.  A simple root landing exactly on an
    interior grid node is bracketed by its neighbours; a zero at the first
    or last node (or a node-zero without a sign change around it) cannot be
    bracketed and is skipped.  Deterministic for fixed inputs.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"need finite lo < hi, got [{lo}, {hi}]")
    if not isinstance(grid, (int, np.integer)) or grid < 2:
        raise ValueError(f"grid must be an integer >= 2, got {grid!r}")

    xs = np.linspace(lo, hi, grid)
    vals = []
    for x in xs:
        try:
            v = float(fn(float(x)))
        except DomainError:
            v = math.nan
        vals.append(v)

    def signed(a: float, b: float) -> bool:
        return (math.isfinite(a) and math.isfinite(b)
                and a != 0.0 and b != 0.0 and (a > 0) != (b > 0))

    found = []
    for i in range(grid - 1):
        if vals[i] == 0.0 and i > 0 and signed(vals[i - 1], vals[i + 1]):
            found.append(Bracket(float(xs[i - 1]), float(xs[i + 1]),
                                 vals[i - 1], vals[i + 1]))
        if signed(vals[i], vals[i + 1]):
            found.append(Bracket(float(xs[i]), float(xs[i + 1]),
                                 vals[i], vals[i + 1]))
    return found


def bisect(fn: Callable[[float], float], bracket: Bracket,
           tol_x: float = 1e-12, tol_f: float = 0.0,
           max_iter: int = 200) -> float:
    """Bisection inside a bracket.

    Stops when |fn| at the returned point is <= tol_f, or the bracket width
    drops below tol_x * max(1, |x|), or the bracket endpoints become adjacent
    floats, whichever comes first.  With tol_x = tol_f = 0 it runs to float
    exhaustion.  The returned point is always an endpoint of (or the exact
    zero inside) the final bracket.
    """
    lo, hi, f_lo, f_hi = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    for _ in range(max_iter):
        best, f_best = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
        if abs(f_best) <= tol_f:
            return best
        if hi - lo <= tol_x * max(1.0, abs(best)):
            return best
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:  # adjacent floats, nothing left to split
            return best
        f_mid = float(fn(mid))
        if not math.isfinite(f_mid):
            raise BisectionError("non-finite value inside bracket",
                                 Bracket(lo, hi, f_lo, f_hi))
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    raise BisectionError(f"no convergence within {max_iter} iterations",
                         Bracket(lo, hi, f_lo, f_hi))


@dataclass(frozen=True)
class RootEntry:
    x: float
    residual: float           # |h(x)|
    bracket: Optional[Bracket]
    kind: str                 # KIND_TRANSLATION_INVARIANT or KIND_PERIOD2


@dataclass(frozen=True)
class RootReport:
    theta: float
    k: int
    theta_cr: float
    theta_1: float
    theta_2: float
    roots: tuple[RootEntry, ...]   # ascending in x
    pairs: tuple[tuple[float, float], ...]
    flags: tuple[str, ...]

    @property
    def count(self) -> int:
        return len(self.roots)


def find_h_roots(theta: float, k: int, grid: int = 4001) -> RootReport:
    """All roots of h on the clamped domain, classified and orbit-paired.

    Below theta_cr(k) the count is 3: the fixed point x = 1 plus a two-cycle
    pair (x0, x2) with x0 < 1 < x2 and f(x0) = x2.  Roots closer together
    than 1e-7 relative are merged and flagged "near-degenerate"; a scan whose
    first or last grid value has the wrong sign flags "domain-edge".
    """
    if not (math.isfinite(theta) and 0.0 < theta < 1.0):
        raise ValueError(f"theta must lie in (0, 1), got {theta!r}")
    t_cr = theta_cr(k)  # validates k >= 3
    if not isinstance(grid, (int, np.integer)) or grid < 2:
        raise ValueError(f"grid must be an integer >= 2, got {grid!r}")

    t1, t2 = domain_bounds(theta, k)
    lo = t1 * (1.0 + CLAMP_MARGIN)
    hi = t2 * (1.0 - CLAMP_MARGIN)

    def fn(x: float) -> float:
        return h_scalar(x, theta, k)

    def fn_log(t: float) -> float:
        return fn(math.exp(t))

    flags: list[str] = []
    # h must enter negative and leave positive; anything else means a root
    # is hiding inside the clamp margin
    try:
        if fn(lo) >= 0.0 or fn(hi) <= 0.0:
            flags.append("domain-edge")
    except DomainError:
        flags.append("domain-edge")

    t_lo, t_hi = math.log(lo), math.log(hi)
    windows = [(t_lo, t_hi, grid)]
    # finer passes around x = 1, where the two-cycle pair collapses into the
    # fixed point as theta approaches theta_cr
    for half_width in (0.3, 3e-3, 3e-5):
        a = max(t_lo, -half_width)
        b = min(t_hi, half_width)
        if a < b:
            windows.append((a, b, 2001))

    found: list[tuple[float, float, Bracket]] = []
    for a, b, n in windows:
        for tb in scan_brackets(fn_log, a, b, n):
            xb = Bracket(math.exp(tb.lo), math.exp(tb.hi), tb.f_lo, tb.f_hi)
            root = bisect(fn, xb, tol_x=0.0, tol_f=0.0, max_iter=200)
            found.append((root, abs(fn(root)), xb))

    # the root at x = 1 is analytic (numerator and denominator of both
    # ratios coincide there); inject it and absorb scanned duplicates
    one_bracket: Optional[Bracket] = None
    kept: list[tuple[float, float, Optional[Bracket]]] = []
    for root, res, xb in found:
        if abs(root - 1.0) <= DEDUP_REL:
            one_bracket = one_bracket or xb
        else:
            kept.append((root, res, xb))
    kept.append((1.0, abs(fn(1.0)), one_bracket))
    kept.sort(key=lambda e: e[0])

    # collapse duplicates from overlapping windows, then near-degenerate
    # neighbours; prefer the injected 1.0, then the smaller residual
    merged: list[tuple[float, float, Optional[Bracket]]] = []
    for entry in kept:
        if merged:
            prev = merged[-1]
            gap = entry[0] - prev[0]
            scale = max(abs(entry[0]), abs(prev[0]))
            if gap <= DEDUP_REL * scale:
                if prev[0] != 1.0 and (entry[0] == 1.0
                                       or entry[1] < prev[1]):
                    merged[-1] = entry
                continue
            if gap <= NEAR_DEGENERATE_REL * scale:
                if "near-degenerate" not in flags:
                    flags.append("near-degenerate")
                if prev[0] != 1.0 and (entry[0] == 1.0
                                       or entry[1] < prev[1]):
                    merged[-1] = entry
                continue
        merged.append(entry)

    # at the critical activity h is cubically flat at x = 1 and dips below
    # rounding noise over a finite span, turning one root into a pile of
    # noise crossings; absorb neighbours that h never separates
    settled: list[tuple[float, float, Optional[Bracket]]] = []
    for entry in merged:
        if settled:
            prev = settled[-1]
            probes = np.exp(np.linspace(math.log(prev[0]),
                                        math.log(entry[0]), 15)[1:-1])
            if all(abs(fn(x)) <= NOISE_FLOOR for x in probes):
                if "near-degenerate" not in flags:
                    flags.append("near-degenerate")
                if prev[0] != 1.0 and (entry[0] == 1.0
                                       or entry[1] < prev[1]):
                    settled[-1] = entry
                continue
        settled.append(entry)
    merged = settled

    roots = tuple(
        RootEntry(x=root, residual=res, bracket=xb,
                  kind=(KIND_TRANSLATION_INVARIANT if root == 1.0
                        else KIND_PERIOD2))
        for root, res, xb in merged)

    below = [e.x for e in roots if e.kind == KIND_PERIOD2 and e.x < 1.0]
    above = [e.x for e in roots if e.kind == KIND_PERIOD2 and e.x > 1.0]
    pairs: list[tuple[float, float]] = []
    unused = list(above)
    for x0 in below:
        fx = f_scalar(x0, theta, k)
        if not unused:
            continue
        partner = min(unused, key=lambda x2: abs(fx - x2))
        if abs(fx - partner) <= PAIR_TOL:
            pairs.append((x0, partner))
            unused.remove(partner)

    return RootReport(theta=float(theta), k=int(k), theta_cr=t_cr,
                      theta_1=t1, theta_2=t2, roots=roots,
                      pairs=tuple(pairs), flags=tuple(flags))


@dataclass(frozen=True)
class FixedPointResult:
    z: np.ndarray
    iterations: int
    converged: bool


def fixed_point_iterate(map_fn: Callable[[np.ndarray], np.ndarray], z0,
                        tol: float = 1e-10,
                        max_iter: int = 500) -> FixedPointResult:
    """Iterate z <- map_fn(z) until the sup-norm update drops to tol.

    On convergence the returned z satisfies ||map_fn(z) - z||_inf <= tol;
    iterations counts accepted updates, so a z0 that already satisfies the
    tolerance reports 0.  Callers chasing two-cycles pass the twice-composed
    map so that cycle points become fixed points.  Non-convergence is
    reported via converged=False with the last iterate, not an exception.
    """
    z = np.asarray(z0, dtype=float).copy()
    if z.ndim != 1 or not (np.isfinite(z).all() and (z > 0).all()):
        raise ValueError("z0 must be a vector of positive finite components")
    if not (math.isfinite(tol) and tol > 0):
        raise ValueError(f"tol must be positive, got {tol!r}")
    if max_iter < 0:
        raise ValueError(f"max_iter must be >= 0, got {max_iter!r}")

    for iteration in range(max_iter + 1):
        z_next = np.asarray(map_fn(z), dtype=float)
        if float(np.max(np.abs(z_next - z))) <= tol:
            return FixedPointResult(z=z, iterations=iteration, converged=True)
        z = z_next
    return FixedPointResult(z=z, iterations=max_iter, converged=False)
