"""Explicit families with a single prescribed gap, and the lower bounds
they witness.

For 1 <= ell <= m - 4 (m >= 6) the coefficient multiset

    [1 x (ell-1), (ell+1) x m, 2*ell+1]

represents every nonnegative integer except ell: sums of the ell-1 unit
coefficients and the single 2*ell+1 coefficient realize every residue mod
ell+1 without ever totalling ell, and the m middle coefficients mop up the
remaining multiple of ell+1.  The gap at ell is forced because nonzero
contributions are either 1 (at most ell-1 of them) or already above ell.

The same gap argument shows ell-1 unit coefficients cannot represent ell,
so any universal list of unit-coefficient sums needs length beyond ell-1;
these are the classic lower-bound witnesses for gamma.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .polygonal import PolygonalForm, represented_set

DEFAULT_GUY_BOUND = 5000


@dataclass(frozen=True)
class GuyForm:
    m: int
    ell: int
    form: PolygonalForm


@dataclass(frozen=True)
class GuyReport:
    m: int
    ell: int
    bound: int
    missing: tuple[int, ...]
    passed: bool


def guy_form(m: int, ell: int) -> GuyForm:
    """The almost-universal form with its designed gap at ell."""
    if m < 6:
        raise ValueError("construction needs m >= 6")
    if not 1 <= ell <= m - 4:
        raise ValueError(f"need 1 <= ell <= m - 4, got ell={ell} for m={m}")
    coeffs = sorted([1] * (ell - 1) + [ell + 1] * m + [2 * ell + 1])
    return GuyForm(m, ell, PolygonalForm(m, tuple(coeffs)))


def verify_guy(gf: GuyForm, bound: int = DEFAULT_GUY_BOUND) -> GuyReport:
    """Check the represented set on [0, bound] misses exactly {ell}."""
    rep = represented_set(gf.form, bound)
    missing = tuple(k for k in range(bound + 1) if k not in rep)
    return GuyReport(gf.m, gf.ell, bound, missing, missing == (gf.ell,))


def lower_bound_witness(m: int, ell: int) -> bool:
    """True iff ell-1 unit coefficients fail to represent ell (they always
    do for ell <= m - 4: available sums below m - 3 top out at ell - 1)."""
    if m < 6:
        raise ValueError("witnesses are stated for m >= 6")
    if not 1 <= ell <= m - 4:
        raise ValueError(f"need 1 <= ell <= m - 4, got ell={ell} for m={m}")
    form = PolygonalForm(m, (1,) * (ell - 1))
    return ell not in represented_set(form, ell)


def worker_count() -> int:
    """Parallelism cap from MGONAL_THREADS (default 1 = serial)."""
    raw = os.environ.get("MGONAL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _verify_pair(args: tuple[int, int, int]) -> GuyReport:
    m, ell, bound = args
    return verify_guy(guy_form(m, ell), bound)


def verify_guy_grid(
    m_lo: int, m_hi: int, bound: int = DEFAULT_GUY_BOUND
) -> list[GuyReport]:
    """Verify the whole (m, ell) grid for m in [m_lo, m_hi].

    Work is independent per pair; with MGONAL_THREADS > 1 it runs in a
    process pool, and results are returned in grid order either way.
    """
    pairs = [(m, ell, bound) for m in range(m_lo, m_hi + 1) for ell in range(1, m - 3)]
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_verify_pair, pairs))
    return [_verify_pair(p) for p in pairs]


def guy_report_csv(reports: list[GuyReport]) -> str:
    """CSV with columns m, ell, bound, missing (space-joined), pass."""
    import csv
    import io

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["m", "ell", "bound", "missing", "pass"])
    for r in reports:
        writer.writerow(
            [r.m, r.ell, r.bound, " ".join(map(str, r.missing)),
             "true" if r.passed else "false"]
        )
    return out.getvalue()
