"""Fixed-point construction of the model space.

The space is the least fixed point of two mutually recursive families:
W collects the noise symbol and all products of up to N integrands, U
collects polynomial monomials and integrals of W members.  Both grow
monotonically, so iteration from the empty family converges whenever the
truncation threshold admits finitely many symbols.

Truncation keeps a symbol iff the kappa-free part of its homogeneity is at
most maxh; the kappa coefficient is ignored for pruning since it only
matters infinitesimally.  For the negative sector to be provably complete,
maxh has to clear the factor bound returned by
:func:`completeness_threshold`: any factor of a negative product sits at
most (N-1) integration gaps above zero, so keeping everything up to that
level loses nothing that a negative symbol could ever be built from.

Homogeneity comparisons on the hot path use integers: with L the common
denominator of the noise homogeneity and rho, every kappa-free part is an
exact multiple of 1/L.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Optional

from .params import (
    Homogeneity,
    Parameters,
    SubcriticalityError,
    _frac,
    is_locally_subcritical,
)
from .symbols import (
    Symbol,
    _dense,
    homogeneity_of,
    integrate,
    monomial,
    one,
    parse_symbol,
    product,
    render,
    xi,
)
from .trees import ExplosionError

__all__ = [
    "BuildConfig",
    "ModelSpace",
    "build",
    "completeness_threshold",
    "negative_sector",
    "h0_F",
    "h_F",
    "c_F",
    "to_json_dict",
    "from_json_dict",
    "save_json",
    "load_json",
]


@dataclass(frozen=True)
class BuildConfig:
    """Truncation threshold, iteration budget and explosion guard for a build."""

    maxh: Fraction
    iter: int = 8
    cap: int = 10_000_000

    def __post_init__(self):
        object.__setattr__(self, "maxh", _frac(self.maxh))
        if self.maxh < 0:
            raise ValueError("maxh must be >= 0")
        if self.iter < 1:
            raise ValueError("iter must be >= 1")
        if self.cap < 1:
            raise ValueError("cap must be >= 1")


@dataclass
class ModelSpace:
    """All symbols kept by a build, each tagged with its first iteration.

    The negative sector, counting maps, and exports all derive from
    `generations`; homogeneities are recomputed on demand (they are cheap
    and keeping a Fraction pair per symbol doubles memory).
    """

    params: Parameters
    config: BuildConfig
    converged: bool
    aborted: bool
    generations: dict[Symbol, int]
    _neg: Optional[list] = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.generations)

    @property
    def complete(self) -> bool:
        """Certificate that the negative sector cannot grow any further.

        Requires actual convergence plus a threshold at or above the factor
        bound; a converged build below that threshold may still be missing
        negative products whose factors were pruned.
        """
        return (
            self.converged
            and not self.aborted
            and self.config.maxh >= completeness_threshold(self.params)
        )

    def index_set(self) -> list[Homogeneity]:
        """Sorted distinct homogeneities of all stored symbols."""
        hs = {homogeneity_of(s, self.params) for s in self.generations}
        return sorted(hs)


def completeness_threshold(params: Parameters) -> Fraction:
    """Least maxh at which a converged build certifies its negative sector.

    Each factor of a product that ends up negative lies at most
    (N-1) * |min(alpha0 + rho, 0)| above zero, so that value is a safe
    truncation level.  When integrating the noise already has positive
    homogeneity the threshold is zero.
    """
    climb = params.alpha0.a + params.rho
    if climb >= 0:
        return Fraction(0)
    return -(params.N - 1) * climb


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _monomials(params: Parameters, maxh: Fraction) -> list[Symbol]:
    """All monomials with scaled degree <= maxh, in lexicographic k order."""
    out = []
    k0 = 0
    while params.rho * k0 <= maxh:
        spatial_budget = int(maxh - params.rho * k0)
        for t in range(spatial_budget + 1):
            for comp in _compositions(t, params.d):
                out.append(monomial((k0,) + comp))
        k0 += 1
    return out


def _product_tuples(
    units: list[int],
    is_new: list[bool],
    N: int,
    maxh_units: int,
    threads: int,
) -> list[tuple[int, ...]]:
    """Index multisets (nondecreasing tuples) of 1..N pool members.

    The pool is sorted ascending by units, so two prunes apply: once a
    positive-unit member pushes the running total over the threshold no
    later member can help, and a branch with no new member in reach can be
    dropped entirely (products of all-old factors were emitted in an
    earlier iteration).  Every emitted tuple has total units <= threshold
    and at least one new member.
    """
    n_pool = len(units)
    suffix_new = [False] * (n_pool + 1)
    for j in range(n_pool - 1, -1, -1):
        suffix_new[j] = suffix_new[j + 1] or is_new[j]

    def walk_from(j0: int) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []
        stack = [j0]
        u0 = units[j0]

        def walk(start: int, slots: int, total: int, has_new: bool) -> None:
            for j in range(start, n_pool):
                if not has_new and not suffix_new[j]:
                    break
                uj = units[j]
                t2 = total + uj
                if uj > 0 and t2 > maxh_units:
                    break
                hn = has_new or is_new[j]
                stack.append(j)
                if hn:
                    out.append(tuple(stack))
                if slots > 1:
                    walk(j, slots - 1, t2, hn)
                stack.pop()

        if is_new[j0]:
            out.append((j0,))
        if N > 1:
            walk(j0, N - 1, u0, is_new[j0])
        return out

    starts = [
        j
        for j in range(n_pool)
        if suffix_new[j] and not (units[j] > 0 and units[j] > maxh_units)
    ]
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            shards = list(ex.map(walk_from, starts))
    else:
        shards = [walk_from(j) for j in starts]
    return [t for shard in shards for t in shard]


def build(params: Parameters, config: BuildConfig, *, threads: int = 1) -> ModelSpace:
    """Iterate the two-family recursion until convergence or the budget ends.

    Raises SubcriticalityError for parameters outside the subcritical
    regime and ExplosionError (with the partial space attached) when the
    symbol count passes config.cap.  The returned space is deterministic:
    same inputs, same symbols, same generation tags, regardless of thread
    count.
    """
    ok, _case = is_locally_subcritical(params)
    if not ok:
        raise SubcriticalityError(
            f"parameters N={params.N}, d={params.d}, rho={params.rho}, "
            f"alpha0={params.alpha0} satisfy no subcriticality condition"
        )
    if threads < 1:
        raise ValueError("threads must be >= 1")

    maxh = config.maxh
    scale = lcm(params.alpha0.a.denominator, params.rho.denominator)
    maxh_units = (maxh.numerator * scale) // maxh.denominator

    one_sym = one()
    xi_sym = xi()
    records: dict[Symbol, int] = {}
    units_cache: dict[Symbol, int] = {}

    def units_of(sym: Symbol) -> int:
        u = units_cache.get(sym)
        if u is None:
            a = homogeneity_of(sym, params).a
            u = (a.numerator * scale) // a.denominator
            units_cache[sym] = u
        return u

    def admit(sym: Symbol, m: int) -> None:
        if len(records) >= config.cap:
            space = ModelSpace(
                params=params,
                config=config,
                converged=False,
                aborted=True,
                generations=dict(records),
            )
            raise ExplosionError(
                f"symbol cap {config.cap} reached at iteration {m}", partial=space
            )
        records[sym] = m

    W_set: set[Symbol] = set()
    U_set: set[Symbol] = set()
    U_all: list[Symbol] = []
    new_last: set[Symbol] = set()
    converged = False

    def pool_products(new_marks: set[Symbol]) -> list[Symbol]:
        pool = sorted(
            (s for s in U_all if s is not one_sym),
            key=lambda s: (units_of(s), s.enc),
        )
        units = [units_of(s) for s in pool]
        marks = [s in new_marks for s in pool]
        tuples = _product_tuples(units, marks, params.N, maxh_units, threads)
        return [product([pool[j] for j in t]) for t in tuples]

    # Seeding, tagged generation 0: the noise symbol, every monomial under the
    # threshold, and the integrated noise.  Each following round then combines
    # integrands into products and integrates the new products, so iter counts
    # product rounds; this matches the iteration counts reported alongside the
    # reference sector sizes.
    W_set.add(xi_sym)
    admit(xi_sym, 0)
    seed_U: list[Symbol] = []
    for mono in _monomials(params, maxh):
        U_set.add(mono)
        admit(mono, 0)
        seed_U.append(mono)
    ixi = integrate(xi_sym)
    if ixi is not None and homogeneity_of(ixi, params).a <= maxh:
        U_set.add(ixi)
        admit(ixi, 0)
        seed_U.append(ixi)
    U_all.extend(seed_U)
    new_last = set(seed_U)

    for m in range(1, config.iter + 1):
        W_new: list[Symbol] = []
        if new_last:
            for sym in pool_products(new_last):
                if sym not in W_set:
                    W_set.add(sym)
                    if sym not in records:
                        admit(sym, m)
                    W_new.append(sym)

        U_new: list[Symbol] = []
        for tau in W_new:
            if tau is one_sym:
                continue
            itau = integrate(tau)
            if itau is None:
                continue
            if homogeneity_of(itau, params).a <= maxh and itau not in U_set:
                U_set.add(itau)
                if itau not in records:
                    admit(itau, m)
                U_new.append(itau)

        U_all.extend(U_new)
        new_last = set(U_new)
        if not W_new and not U_new:
            converged = True
            break

    if not converged:
        if not new_last:
            converged = True
        else:
            converged = all(sym in W_set for sym in pool_products(new_last))

    return ModelSpace(
        params=params,
        config=config,
        converged=converged,
        aborted=False,
        generations=records,
    )


# ---------------------------------------------------------------------------
# sector extraction and counting maps


def negative_sector(ms: ModelSpace) -> list[tuple[Symbol, Homogeneity]]:
    """Stored symbols with negative homogeneity, ascending, ties by encoding."""
    if ms._neg is None:
        out = []
        for s in ms.generations:
            h = homogeneity_of(s, ms.params)
            if h.is_negative:
                out.append((s, h))
        out.sort(key=lambda sh: (sh[1].a, sh[1].b, sh[0].enc))
        ms._neg = out
    return ms._neg


def c_F(ms: ModelSpace) -> int:
    """Number of negative-sector symbols."""
    return len(negative_sector(ms))


def h_F(ms: ModelSpace) -> int:
    """Number of distinct negative homogeneities (kappa coefficient included)."""
    return len({h for _, h in negative_sector(ms)})


def h0_F(ms: ModelSpace) -> int:
    """Distinct negative homogeneities over undecorated symbols only."""
    return len({h for s, h in negative_sector(ms) if not s.kvec})


# ---------------------------------------------------------------------------
# persistence


def _fstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def to_json_dict(ms: ModelSpace) -> dict:
    d = ms.params.d
    entries = []
    for s in ms.generations:
        h = homogeneity_of(s, ms.params)
        entries.append((h.a, h.b, s.enc, s, h))
    entries.sort(key=lambda e: e[:3])
    symbols = [
        {
            "symbol": render(s, d),
            "p": s.p,
            "q": s.q,
            "k": list(_dense(s.kvec, d)),
            "a": _fstr(h.a),
            "b": h.b,
            "generation": ms.generations[s],
        }
        for _, _, _, s, h in entries
    ]
    return {
        "parameters": {
            "N": ms.params.N,
            "d": ms.params.d,
            "rho": _fstr(ms.params.rho),
            "alpha0": {"a": _fstr(ms.params.alpha0.a), "b": ms.params.alpha0.b},
        },
        "config": {
            "maxh": _fstr(ms.config.maxh),
            "iter": ms.config.iter,
            "cap": ms.config.cap,
        },
        "converged": ms.converged,
        "complete": ms.complete,
        "aborted": ms.aborted,
        "symbols": symbols,
    }


def from_json_dict(data: dict) -> ModelSpace:
    p = data["parameters"]
    params = Parameters(
        N=p["N"],
        d=p["d"],
        rho=Fraction(p["rho"]),
        alpha0=Homogeneity(Fraction(p["alpha0"]["a"]), p["alpha0"]["b"]),
    )
    c = data["config"]
    config = BuildConfig(maxh=Fraction(c["maxh"]), iter=c["iter"], cap=c["cap"])
    generations: dict[Symbol, int] = {}
    for rec in data["symbols"]:
        sym = parse_symbol(rec["symbol"])
        h = homogeneity_of(sym, params)
        stored = (rec["p"], rec["q"], tuple(rec["k"][: params.d + 1]))
        actual = (sym.p, sym.q, tuple(_dense(sym.kvec, params.d)))
        if stored != actual or _fstr(h.a) != rec["a"] or h.b != rec["b"]:
            raise ValueError(f"inconsistent symbol record: {rec['symbol']!r}")
        if sym in generations:
            raise ValueError(f"duplicate symbol record: {rec['symbol']!r}")
        generations[sym] = rec["generation"]
    ms = ModelSpace(
        params=params,
        config=config,
        converged=data["converged"],
        aborted=data["aborted"],
        generations=generations,
    )
    if ms.complete != data["complete"]:
        raise ValueError("stored completeness flag disagrees with certificate")
    return ms


def save_json(ms: ModelSpace, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps(to_json_dict(ms), indent=2, sort_keys=True))
        fh.write("\n")


def load_json(path: str) -> ModelSpace:
    with open(path) as fh:
        return from_json_dict(json.load(fh))
