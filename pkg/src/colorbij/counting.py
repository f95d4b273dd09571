"""Exact counts of colored compositions, Dyck paths and polygon dissections.

Each count is computed twice: once from the partial Bell polynomial
closed form (with every division checked for exactness) and once by an
integer dynamic program that never touches Bell polynomials. The two must
agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .model import UNIFORM, ColorSequence


class CountMismatch(AssertionError):
    """Closed form and DP disagree, or a division was not exact."""


def binomial(n: int, k: int) -> int:
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def narayana(n: int, k: int) -> int:
    return binomial(n, k - 1) * binomial(n, k) // n


def catalan(n: int) -> int:
    return binomial(2 * n, n) // (n + 1)


def exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise CountMismatch(f"{a} is not divisible by {b}")
    return q


@lru_cache(maxsize=256)
def _bell_table(x: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """B[n][k] for 0 <= k <= n <= len(x), by B_{n,k} = sum_i C(n-1,i-1) x_i B_{n-i,k-1}."""
    size = len(x)
    B = [[0] * (size + 1) for _ in range(size + 1)]
    B[0][0] = 1
    for n in range(1, size + 1):
        for k in range(1, n + 1):
            B[n][k] = sum(math.comb(n - 1, i - 1) * x[i - 1] * B[n - i][k - 1]
                          for i in range(1, n - k + 2))
    return tuple(tuple(row) for row in B)


def bell_partial(n: int, k: int, x: Sequence[int]) -> int:
    """Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1})."""
    if n < 0 or k < 0:
        raise ValueError("bell_partial needs n, k >= 0")
    if k > n:
        raise ValueError(f"bell_partial needs k <= n, got k={k}, n={n}")
    if n == 0:
        return 1
    if len(x) < n - k + 1:
        raise ValueError(f"need x_1..x_{n - k + 1}")
    xs = tuple(int(v) for v in x[:n]) + (0,) * max(0, n - len(x))
    return _bell_table(xs)[n][k]


def bell_inputs(n: int, gamma: ColorSequence) -> tuple[int, ...]:
    """x_i = i! * gamma_i for i = 1..n."""
    return tuple(math.factorial(i) * gamma[i] for i in range(1, n + 1))


def _check_nk(n: int, k: int):
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")


# -- closed forms -----------------------------------------------------------


def compositions_closed(n: int, k: int, gamma: ColorSequence = UNIFORM) -> int:
    _check_nk(n, k)
    B = bell_partial(n, k, bell_inputs(n, gamma))
    return exact_div(math.factorial(k) * B, math.factorial(n))


def dyck_closed(n: int, k: int, gamma: ColorSequence = UNIFORM) -> int:
    _check_nk(n, k)
    B = bell_partial(n, k, bell_inputs(n, gamma))
    return exact_div(B, math.factorial(n - k + 1))


def polygons_closed(n: int, k: int, gamma: ColorSequence = UNIFORM) -> int:
    _check_nk(n, k)
    B = bell_partial(n, k, bell_inputs(n, gamma))
    inner = exact_div(math.factorial(k) * B, math.factorial(n))
    return exact_div(binomial(n + k, k) * inner, n + 1)


# -- dynamic programs -------------------------------------------------------
# Tables are computed once per (gamma prefix, size bound) and answer every
# n up to the bound; sizes are rounded up so nearby calls share a table.


def _bound(n: int) -> int:
    return 16 * -(-n // 16)


@lru_cache(maxsize=128)
def _composition_table(g: tuple[int, ...]) -> list[list[int]]:
    N = len(g)
    c = [[0] * (N + 1) for _ in range(N + 1)]
    c[0][0] = 1
    for n in range(1, N + 1):
        for k in range(1, n + 1):
            c[n][k] = sum(g[j - 1] * c[n - j][k - 1] for j in range(1, n - k + 2))
    return c


def _shift_add(dst: list[int], src: list[int], w: int):
    """dst[p+1] += w * src[p]."""
    if w:
        for p in range(len(src) - 1):
            if src[p]:
                dst[p + 1] += w * src[p]


@lru_cache(maxsize=128)
def _dyck_table(g: tuple[int, ...]) -> list[list[int]]:
    """d[n][k]: paths weighted by gamma_j over maximal descents D^j."""
    N = len(g)
    width = N + 2
    # up[h]: prefixes ending in U at height h; done[h]: prefixes ending a full
    # descent (or empty); both are vectors over the number of peaks so far
    up = [[0] * width for _ in range(N + 1)]
    done = [[0] * width for _ in range(N + 1)]
    done[0][0] = 1
    table = [[0] * (N + 1) for _ in range(N + 1)]
    for u in range(1, N + 1):
        new_up = [[0] * width for _ in range(N + 1)]
        for h in range(1, u + 1):
            new_up[h] = [x + y for x, y in zip(done[h - 1], up[h - 1])]
        new_done = [[0] * width for _ in range(N + 1)]
        for h in range(1, u + 1):
            for j in range(1, h + 1):
                _shift_add(new_done[h - j], new_up[h], g[j - 1])
        up, done = new_up, new_done
        for k in range(1, u + 1):
            table[u][k] = done[0][k]
    return table


@lru_cache(maxsize=128)
def _tree_table(g: tuple[int, ...]) -> list[list[int]]:
    """p[n][k]: plane trees with n+1 leaves, k internal nodes weighted by gamma_{outdeg-1}.

    Trees are read as preorder words: an internal node of outdegree j+1 opens
    j extra pending slots, a leaf closes one; a word is complete when no slot
    is pending.
    """
    N = len(g)
    L = N + 1
    # state[leaves][pending] -> vector over internal-node count
    state = [[[0] * (N + 2) for _ in range(L + 2)] for _ in range(L + 1)]
    state[0][1][0] = 1
    table = [[0] * (N + 1) for _ in range(N + 1)]
    for leaves in range(L + 1):
        for pend in range(1, L + 1):
            vec = state[leaves][pend]
            if not any(vec):
                continue
            # internal node: pending grows by j, at most what the leaf budget allows
            for j in range(1, L - leaves - pend + 1):
                _shift_add(state[leaves][pend + j], vec, g[j - 1])
            if leaves + 1 <= L:
                dst = state[leaves + 1][pend - 1]
                for p in range(N + 2):
                    dst[p] += vec[p]
        if leaves >= 2:
            vec = state[leaves][0]
            for k in range(1, leaves):
                table[leaves - 1][k] = vec[k]
    return table


def compositions_dp(n: int, k: int, gamma: ColorSequence = UNIFORM) -> int:
    _check_nk(n, k)
    return _composition_table(gamma.prefix(n))[n][k]


def dyck_dp(n: int, k: int, gamma: ColorSequence = UNIFORM) -> int:
    _check_nk(n, k)
    return _dyck_table(gamma.prefix(_bound(n)))[n][k]


def polygons_dp(n: int, k: int, gamma: ColorSequence = UNIFORM) -> int:
    _check_nk(n, k)
    return _tree_table(gamma.prefix(_bound(n)))[n][k]


# -- public counts ----------------------------------------------------------


def _agree(name, closed, dp):
    if closed != dp:
        raise CountMismatch(f"{name}: closed form {closed} != dynamic program {dp}")
    return closed


def count_compositions(n: int, k: int, gamma: ColorSequence = UNIFORM) -> int:
    """c_{n,k}(gamma): gamma-colored compositions of n with k parts."""
    return _agree("c", compositions_closed(n, k, gamma), compositions_dp(n, k, gamma))


def count_dyck(n: int, k: int, gamma: ColorSequence = UNIFORM) -> int:
    """d_{n,k}(gamma): n-Dyck paths with k peaks, descents UD^j in gamma_j colors."""
    return _agree("d", dyck_closed(n, k, gamma), dyck_dp(n, k, gamma))


def count_polygons(n: int, k: int, gamma: ColorSequence = UNIFORM) -> int:
    """p_{n,k}(gamma): rooted (n+2)-gons cut into k cells, a (j+2)-gon in gamma_j colors."""
    return _agree("p", polygons_closed(n, k, gamma), polygons_dp(n, k, gamma))


@dataclass
class IdentityReport:
    n: int
    k: int
    gamma: ColorSequence
    c: int
    d: int
    p: int
    rows: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(lhs == rhs for _, lhs, rhs in self.rows)

    def lines(self) -> list[str]:
        out = [f"n={self.n} k={self.k} gamma={self.gamma} c={self.c} d={self.d} p={self.p}"]
        for name, lhs, rhs in self.rows:
            out.append(f"{'PASS' if lhs == rhs else 'FAIL'} {name}: {lhs} = {rhs}")
        return out


def verify_identities(n: int, k: int, gamma: ColorSequence = UNIFORM) -> IdentityReport:
    c = count_compositions(n, k, gamma)
    d = count_dyck(n, k, gamma)
    p = count_polygons(n, k, gamma)
    rows = [
        ("C(n,k-1)*c = k*d", binomial(n, k - 1) * c, k * d),
        ("C(n+k,k)*d = C(n+1,k)*p", binomial(n + k, k) * d, binomial(n + 1, k) * p),
        ("(n+1)*p = C(n+k,k)*c", (n + 1) * p, binomial(n + k, k) * c),
    ]
    return IdentityReport(n, k, gamma, c, d, p, rows)


OEIS = ("A001700", "A368178", "A176479")


def oeis_prefix(tag: str, length: int) -> list[int]:
    """First ``length`` terms (n = 1, 2, ...) of the marked-object totals."""
    if length < 1:
        raise ValueError("length must be >= 1")
    if tag == "A001700":
        term = lambda n, k: binomial(n, k - 1) * count_compositions(n, k)
    elif tag == "A368178":
        term = lambda n, k: binomial(n + k, k) * count_dyck(n, k)
    elif tag == "A176479":
        term = lambda n, k: (n + 1) * count_polygons(n, k)
    else:
        raise ValueError(f"unknown sequence {tag!r}; expected one of {OEIS}")
    return [sum(term(n, k) for k in range(1, n + 1)) for n in range(1, length + 1)]
