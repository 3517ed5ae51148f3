"""Reiter's hitting-set tree, used to enumerate all minimal losing sub-cubes."""

from __future__ import annotations

from typing import Callable, Iterable

from ..formula import Cube


def literal_drop(cube: Iterable[int], is_losing: Callable[[list[int]], bool]) -> list[int]:
    """Drop literals in ascending variable order while the cube stays losing."""
    cur = sorted(cube, key=abs)
    for l in list(cur):
        trial = [m for m in cur if m != l]
        if is_losing(trial):
            cur = trial
    return cur


def hs_tree(cube: Iterable[int], is_losing: Callable[[list[int]], bool],
            shrink: Callable[[list[int]], list[int]] | None = None,
            node_limit: int = 64) -> list[Cube]:
    """All minimal losing sub-cubes of ``cube`` (complete unless ``node_limit`` fires).

    Losing-ness is monotone: any super-cube of a losing cube is losing.  Each
    tree node removes the literals on its path from the cube and asks for a
    minimal losing sub-cube of what remains; its children branch on that
    label's literals.
    """
    shrink = shrink or (lambda c: literal_drop(c, is_losing))
    full = sorted(cube, key=abs)
    labels: list[frozenset[int]] = []
    seen_paths: set[frozenset[int]] = set()
    closed: list[frozenset[int]] = []
    queue: list[frozenset[int]] = [frozenset()]
    nodes = 0
    while queue and nodes < node_limit:
        h = queue.pop(0)
        if h in seen_paths or any(p <= h for p in closed):
            continue
        seen_paths.add(h)
        nodes += 1
        label = next((m for m in labels if not (m & h)), None)
        if label is None:
            rest = [l for l in full if l not in h]
            if not is_losing(rest):
                closed.append(h)
                continue
            label = frozenset(shrink(rest))
            if label not in labels:
                labels.append(label)
        for l in sorted(label, key=abs):
            queue.append(h | {l})
    return [Cube(m) for m in labels]

