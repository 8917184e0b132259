"""Exact A(n, d) by exhaustive search, for checking bounds at tiny n.

A code of minimum distance d is a clique in the graph on {0,1}^n joining
words at distance >= d.  The search is a branch-and-bound over bitsets with
a greedy colouring bound; the greedy lexicode seeds the incumbent.  Since
translations preserve distances the code may be assumed to contain 0.

With 0 fixed, branching is restricted to one word per orbit of the
coordinate permutations fixing the words chosen so far (isomorph rejection).
The colouring bound is weak on these dense graphs, so when the search exceeds
its node budget (at n <= 8 only (8, 3) does) the instance is handed to a 0-1
program solved by HiGHS; its code is always re-checked exactly.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from typing import Optional

from .certificates import BoundReport

__all__ = [
    "DEFAULT_CAP",
    "MAX_CAP",
    "NODE_BUDGET",
    "CapExceededError",
    "CodeSearchResult",
    "BoundValidation",
    "exact_A",
    "lexicode",
    "min_distance",
    "validate_bound",
    "oracle_table",
    "write_table_csv",
    "read_table_csv",
    "clear_cache",
]

DEFAULT_CAP = 8
MAX_CAP = 10
NODE_BUDGET = 20_000


class CapExceededError(ValueError):
    pass


@dataclass(frozen=True)
class CodeSearchResult:
    n: int
    d: int
    max_size: int
    witness_code: tuple[int, ...]
    nodes_explored: int
    engine: str = "clique"

    def witness_hex(self) -> str:
        width = max(1, (self.n + 3) // 4)
        return " ".join(format(c, f"0{width}x") for c in self.witness_code)


@dataclass(frozen=True)
class BoundValidation:
    status: str  # "pass", "fail" or "skipped"
    bound: object
    exact: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.status != "fail"


def min_distance(code) -> Optional[int]:
    """Minimum pairwise Hamming distance, None for fewer than two words."""
    code = list(code)
    best = None
    for a in range(len(code)):
        for b in range(a + 1, len(code)):
            dist = (code[a] ^ code[b]).bit_count()
            if best is None or dist < best:
                best = dist
    return best


def lexicode(n: int, d: int) -> list[int]:
    """Greedy code: scan 0..2^n-1, keep each word at distance >= d from all kept."""
    code: list[int] = []
    for x in range(1 << n):
        if all((x ^ c).bit_count() >= d for c in code):
            code.append(x)
    return code


class _Search:
    """Clique search with a colouring bound and orbit pruning.

    Once 0 is fixed, the remaining symmetry at a node is the group of
    coordinate permutations preserving the cells (coordinates with equal
    columns in the chosen words).  Words with the same weight in every cell
    form one orbit, and only one representative per orbit is branched on.
    """

    def __init__(self, n, d, words, best_size, best_code, max_nodes=None):
        self.n, self.words = n, words
        k = len(words)
        self.adj = [0] * k
        for a in range(k):
            wa, mask = words[a], 0
            for b in range(k):
                if b != a and (wa ^ words[b]).bit_count() >= d:
                    mask |= 1 << b
            self.adj[a] = mask
        self.best_size = best_size
        self.best_code = best_code
        self.nodes = 0
        self.max_nodes = max_nodes

    def _colours(self, P):
        count, adj = 0, self.adj
        while P:
            count += 1
            Q = P
            while Q:
                low = Q & -Q
                Q &= ~adj[low.bit_length() - 1] & ~low
                P &= ~low
        return count

    def expand(self, chosen, P, cells, base):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _Budget()
        if not P:
            if base + len(chosen) > self.best_size:
                self.best_size = base + len(chosen)
                self.best_code = [self.words[u] for u in chosen]
            return
        words = self.words
        orbits: dict = {}
        Q = P
        while Q:
            low = Q & -Q
            Q ^= low
            v = low.bit_length() - 1
            key = tuple((words[v] & c).bit_count() for c in cells)
            orbits.setdefault(key, []).append(v)
        for orb in sorted(orbits.values(), key=lambda o: (-len(o), o[0])):
            if base + len(chosen) + self._colours(P) <= self.best_size:
                return
            v = orb[0]
            w = words[v]
            chosen.append(v)
            self.expand(chosen, P & self.adj[v],
                        [x for c in cells for x in (c & w, c & ~w) if x], base)
            chosen.pop()
            for u in orb:
                P &= ~(1 << u)


class _Budget(Exception):
    pass


def _milp_search(n, d, seed):
    """0-1 program over the cube with clique inequalities, solved by HiGHS.

    Every ball of radius t = (d-1)//2 holds at most one codeword; for even d
    so does every union of two balls with adjacent centres.  The optimum is
    accepted only when the solver's dual bound is below size + 1.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    N = 1 << n
    t = (d - 1) // 2
    ball_offsets = [x for x in range(N) if x.bit_count() <= t]
    groups = []
    if d % 2:
        groups = [[y ^ o for o in ball_offsets] for y in range(N)]
    else:
        for y in range(N):
            for b in range(n):
                z = y ^ (1 << b)
                if y < z:
                    groups.append(sorted({y ^ o for o in ball_offsets} | {z ^ o for o in ball_offsets}))
    rows = [r for r, g in enumerate(groups) for _ in g]
    cols = [v for g in groups for v in g]
    A = coo_matrix(([1.0] * len(cols), (rows, cols)), shape=(len(groups), N)).tocsr()
    lower = [0.0] * N
    lower[0] = 1.0
    res = milp(
        c=[-1.0] * N,
        constraints=[LinearConstraint(A, 0, 1)],
        integrality=[1] * N,
        bounds=Bounds(lower, [1.0] * N),
    )
    if res.status != 0:
        raise RuntimeError(f"MILP search failed: {res.message}")
    code = [x for x in range(N) if res.x[x] > 0.5]
    if len(code) > 1 and min_distance(code) < d:
        raise AssertionError("MILP returned a code violating the distance")
    if len(code) < len(seed):
        code = list(seed)
    dual = getattr(res, "mip_dual_bound", None)
    if dual is None or -dual >= len(code) + 1 - 1e-6:
        raise RuntimeError("MILP did not prove optimality")
    return code


_MEMO: dict = {}


def clear_cache() -> None:
    _MEMO.clear()


def _check(n, d, cap):
    if cap > MAX_CAP:
        raise CapExceededError(f"cap {cap} exceeds the hard limit {MAX_CAP}")
    if not 1 <= n <= cap:
        raise CapExceededError(f"n={n} outside the oracle range [1, {cap}]")
    if not 1 <= d <= n:
        raise ValueError(f"d={d} outside [1, {n}]")


def exact_A(
    n: int,
    d: int,
    cap: int = DEFAULT_CAP,
    fix_zero: bool = True,
    engine: str = "auto",
    node_budget: int = NODE_BUDGET,
    cache_path: Optional[str] = None,
) -> CodeSearchResult:
    """Maximum size of a binary code of length n and minimum distance d.

    ``engine`` is "clique" (search only), "milp" or "auto" (search, then the
    0-1 program past ``node_budget`` nodes).  ``fix_zero=False`` runs the
    plain search over all of {0,1}^n and is meant for cross-checks at n <= 6.
    """
    _check(n, d, cap)
    if engine not in ("auto", "clique", "milp"):
        raise ValueError(f"unknown engine {engine!r}")
    key = (n, d, fix_zero, engine)
    table = read_table_csv(cache_path) if cache_path is not None and fix_zero else None
    if table is not None and (n, d) in table:
        _MEMO.setdefault(key, table[(n, d)])
        return _MEMO[key]
    if key not in _MEMO:
        result = _solve(n, d, fix_zero, node_budget, engine)
        dist = min_distance(result.witness_code)
        if len(result.witness_code) != result.max_size or (dist is not None and dist < d):
            raise AssertionError("search produced an invalid witness code")
        _MEMO[key] = result
    result = _MEMO[key]
    if table is not None:
        table[(n, d)] = result
        write_table_csv(sorted(table.values(), key=lambda r: (r.n, r.d)), cache_path)
    return result


def _solve(n, d, fix_zero, node_budget, engine):
    seed = lexicode(n, d)  # contains 0
    if d == 1:
        return CodeSearchResult(n, d, 1 << n, tuple(range(1 << n)), 0, "trivial")
    if not fix_zero:
        words = list(range(1 << n))
        s = _Search(n, d, words, len(seed), list(seed))
        s.expand([], (1 << len(words)) - 1, [], 0)
        return CodeSearchResult(n, d, s.best_size, tuple(sorted(s.best_code)), s.nodes, "clique")
    if engine in ("auto", "clique"):
        words = [x for x in range(1, 1 << n) if x.bit_count() >= d]
        budget = node_budget if engine == "auto" else None
        s = _Search(n, d, words, len(seed), [c for c in seed if c], budget)
        try:
            s.expand([], (1 << len(words)) - 1, [(1 << n) - 1], 1)
        except _Budget:
            pass
        else:
            code = [0] + [c for c in s.best_code if c]
            return CodeSearchResult(n, d, s.best_size, tuple(sorted(code)), s.nodes, "clique")
    code = _milp_search(n, d, seed)
    return CodeSearchResult(n, d, len(code), tuple(sorted(code)), 0, "milp")


def validate_bound(report: BoundReport, cap: int = DEFAULT_CAP) -> BoundValidation:
    """Pass iff report.bound >= A(n, d); skipped when n is beyond the cap."""
    if not report.feasible:
        return BoundValidation("fail", report.bound, None, "report is not feasible")
    try:
        exact = exact_A(report.n, report.d, cap=cap)
    except CapExceededError as exc:
        return BoundValidation("skipped", report.bound, None, str(exc))
    if report.bound >= exact.max_size:
        return BoundValidation("pass", report.bound, exact.max_size)
    return BoundValidation("fail", report.bound, exact.max_size,
                           f"bound {report.bound} < A({report.n},{report.d}) = {exact.max_size}")


def oracle_table(max_n: int = DEFAULT_CAP, cap: int = DEFAULT_CAP) -> list[CodeSearchResult]:
    return [exact_A(n, d, cap=cap) for n in range(1, max_n + 1) for d in range(1, n + 1)]


_FIELDS = ["n", "d", "A", "witness_hex", "engine"]


def write_table_csv(results, path_or_file) -> None:
    if isinstance(path_or_file, (str, os.PathLike)):
        with open(path_or_file, "w", newline="") as fh:
            write_table_csv(results, fh)
        return
    out = csv.writer(path_or_file, lineterminator="\n")
    out.writerow(_FIELDS)
    for r in results:
        out.writerow([r.n, r.d, r.max_size, r.witness_hex(), r.engine])


def read_table_csv(path) -> dict:
    table: dict = {}
    if not os.path.exists(path):
        return table
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            n, d = int(row["n"]), int(row["d"])
            code = tuple(int(h, 16) for h in row["witness_hex"].split())
            if len(code) != int(row["A"]) or (len(code) > 1 and min_distance(code) < d):
                raise ValueError(f"corrupt cache row for ({n}, {d})")
            table[(n, d)] = CodeSearchResult(n, d, int(row["A"]), code, 0, row.get("engine") or "cache")
    return table
