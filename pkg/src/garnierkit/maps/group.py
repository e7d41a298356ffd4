"""Group structure generated by sigma1..sigma4."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .birational import BirationalMap, compose, is_identity, param_permutation
from .catalog import SIGMA_NAMES, catalog_get

ORDER_CAP = 6

Perm = tuple[int, ...]


def _perm_compose(a: Perm, b: Perm) -> Perm:
    """Slot permutation of (apply b, then a)."""
    # new slot i of a takes old slot a[i]; that slot was filled from b[a[i]]
    return tuple(b[a[i]] for i in range(len(a)))


def closure(generators: list[Perm]) -> set[Perm]:
    n = len(generators[0]) if generators else 0
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = _perm_compose(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def _signed_key(g: BirationalMap) -> tuple:
    perm, signs = param_permutation(g)
    return tuple(zip(perm, signs))


def parameter_group_order(names: tuple[str, ...] = SIGMA_NAMES) -> int:
    gens = []
    for n in names:
        perm, signs = param_permutation(catalog_get(n))
        if any(x != 1 for x in signs):
            raise ValueError(f"{n}: parameter action has sign changes; not a plain permutation")
        gens.append(perm)
    return len(closure(gens))


def perm_order(p: Perm) -> int:
    ident = tuple(range(len(p)))
    q, k = p, 1
    while q != ident:
        q = _perm_compose(p, q)
        k += 1
    return k


def map_order(g: BirationalMap, cap: int = ORDER_CAP, mode: str = "exact") -> int | None:
    """Order of ``g`` as a birational map, or None when no power up to ``cap`` is the identity."""
    power = g
    for k in range(1, cap + 1):
        if is_identity(power, mode):
            return k
        power = compose(g, power)
    return None


@dataclass(frozen=True)
class RelationEntry:
    word: tuple[str, ...]
    map_order: int | None
    param_order: int
    cap_exceeded: bool

    @property
    def consistent(self) -> bool:
        return not self.cap_exceeded and self.map_order == self.param_order


def relation_orders(names: tuple[str, ...] = SIGMA_NAMES, mode: str = "exact") -> list[RelationEntry]:
    words = [(n,) for n in names] + list(combinations(names, 2))
    out = []
    for word in words:
        g = catalog_get(word[0])
        for n in word[1:]:
            g = compose(g, catalog_get(n))
        perm, _ = param_permutation(g)
        order = map_order(g, mode=mode)
        out.append(RelationEntry(word, order, perm_order(perm), order is None))
    return out


def _map_key(g: BirationalMap) -> tuple[str, ...]:
    return tuple(str(c) for c in g.phase_fwd + g.base_fwd + g.param_fwd)


def materialize_group(names: tuple[str, ...] = SIGMA_NAMES, limit: int = 1000) -> int:
    """Enumerate the generated group as full birational maps (expensive)."""
    gens = [catalog_get(n) for n in names]
    start = catalog_get("identity")
    seen = {_map_key(start)}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                h = compose(g, m)
                key = _map_key(h)
                if key not in seen:
                    seen.add(key)
                    nxt.append(h)
                    if len(seen) > limit:
                        raise RuntimeError(f"group exceeds {limit} elements")
        frontier = nxt
    return len(seen)
