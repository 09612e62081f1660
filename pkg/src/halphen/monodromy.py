"""Tuples of monodromy generators, Fricke coordinates and braid actions.

A tuple (A1, ..., Ar) satisfies A1*A2*...*Ar = identity.  For rank two and
r = 4 the Fricke coordinates are the four traces a_i = tr(A_i) together with
x = tr(A1 A2), y = tr(A2 A3), z = tr(A1 A3).
"""
from __future__ import annotations

import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .exactalg import (
    ExactMatrix,
    Quad,
    Scalar,
    as_scalar,
    extension_of,
    format_scalar,
    is_rational,
    nullspace,
    span_basis,
    sqrt_rational,
)
from .report import Report


class MatrixTuple:
    """An ordered tuple of invertible square matrices with product identity."""

    __slots__ = ("matrices",)

    def __init__(self, matrices, check: bool = True):
        ms = [m if isinstance(m, ExactMatrix) else ExactMatrix(m) for m in matrices]
        if not ms:
            raise ValueError("empty tuple")
        n = ms[0].nrows
        for k, m in enumerate(ms, 1):
            if m.shape != (n, n):
                raise ValueError(f"A{k} has shape {m.shape}, expected {(n, n)}")
        self.matrices: tuple[ExactMatrix, ...] = tuple(ms)
        if check:
            if not self.product().is_identity():
                raise ValueError("product A1*...*Ar is not the identity")
            for k, m in enumerate(ms, 1):
                if m.det() == 0:
                    raise ValueError(f"A{k} is singular")

    @classmethod
    def closing(cls, first) -> "MatrixTuple":
        """The tuple (A1, ..., A_{r-1}, (A1*...*A_{r-1})^-1)."""
        first = [m if isinstance(m, ExactMatrix) else ExactMatrix(m) for m in first]
        p = first[0]
        for m in first[1:]:
            p = p @ m
        return cls(first + [p.inverse()])

    @property
    def size(self) -> int:
        return self.matrices[0].nrows

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, i) -> ExactMatrix:
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def __eq__(self, other):
        return isinstance(other, MatrixTuple) and self.matrices == other.matrices

    def __hash__(self):
        return hash(self.matrices)

    def product(self) -> ExactMatrix:
        p = self.matrices[0]
        for m in self.matrices[1:]:
            p = p @ m
        return p

    def field(self) -> int | None:
        return extension_of(v for m in self.matrices for r in m.rows for v in r)

    def conjugate_by(self, D: ExactMatrix) -> "MatrixTuple":
        """(D^-1 A_i D)_i."""
        Di = D.inverse()
        return MatrixTuple([Di @ m @ D for m in self.matrices])

    def __repr__(self):
        return f"MatrixTuple({list(self.matrices)!r})"


# ---------------------------------------------------------------------------
# Fricke coordinates


@dataclass(frozen=True)
class FrickeData:
    a1: Scalar
    a2: Scalar
    a3: Scalar
    a4: Scalar
    x: Scalar
    y: Scalar
    z: Scalar

    def __post_init__(self):
        for k in ("a1", "a2", "a3", "a4", "x", "y", "z"):
            object.__setattr__(self, k, as_scalar(getattr(self, k)))

    def astuple(self) -> tuple[Scalar, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.x, self.y, self.z)

    def __str__(self):
        return "(" + ", ".join(format_scalar(v) for v in self.astuple()) + ")"


def fricke_params(t: MatrixTuple, r: int = 4, m: int = 2) -> FrickeData:
    if len(t) != r or t.size != m or (r, m) != (4, 2):
        raise ValueError(f"Fricke coordinates need 4 matrices of size 2, got {len(t)} of size {t.size}")
    A1, A2, A3, A4 = t.matrices
    return FrickeData(A1.trace(), A2.trace(), A3.trace(), A4.trace(),
                      (A1 @ A2).trace(), (A2 @ A3).trace(), (A1 @ A3).trace())


def fricke_residual(f: FrickeData) -> Scalar:
    a1, a2, a3, a4, x, y, z = f.astuple()
    lhs = (a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4 + a1 * a2 * a3 * a4
           + x * x + y * y + z * z + x * y * z
           - (a1 * a2 + a3 * a4) * x - (a1 * a4 + a2 * a3) * y - (a1 * a3 + a2 * a4) * z)
    return lhs - 4


# ---------------------------------------------------------------------------
# braid group


_LETTER = re.compile(r"\s*(?:b|beta)([12])(\^-1|\^\(-1\)|\^1|')?\s*[,*]?")


def parse_braid_word(word) -> list[tuple[int, int]]:
    """Letters as (generator, +1 | -1), leftmost first.

    Accepts "b1 b2^-1 b1", "b1*b2", "beta2'" or a list of such strings.
    """
    if not isinstance(word, str):
        word = " ".join(word)
    out = []
    pos = 0
    text = word.strip()
    while pos < len(text):
        m = _LETTER.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"malformed braid word at position {pos}: {word!r}")
        sign = -1 if m.group(2) in ("^-1", "^(-1)", "'") else 1
        out.append((int(m.group(1)), sign))
        pos = m.end()
    return out


def _braid_step(ms: list[ExactMatrix], gen: int, sign: int) -> list[ExactMatrix]:
    i = gen - 1
    A, B = ms[i], ms[i + 1]
    ms = list(ms)
    if sign > 0:
        ms[i], ms[i + 1] = B, B.inverse() @ A @ B
    else:
        ms[i], ms[i + 1] = A @ B @ A.inverse(), A
    return ms


def braid(t: MatrixTuple, word) -> MatrixTuple:
    """Apply a braid word; the rightmost letter acts first."""
    letters = parse_braid_word(word)
    ms = list(t.matrices)
    if len(ms) < 3:
        raise ValueError("braid action needs at least 3 matrices")
    for gen, sign in reversed(letters):
        if gen + 1 >= len(ms):
            raise ValueError(f"generator b{gen} needs more matrices")
        ms = _braid_step(ms, gen, sign)
    return MatrixTuple(ms, check=False)


def _fricke_step(f: FrickeData, gen: int, sign: int) -> FrickeData:
    a1, a2, a3, a4, x, y, z = f.astuple()
    if gen == 1 and sign > 0:
        return FrickeData(a2, a1, a3, a4, x, a1 * a3 + a2 * a4 - z - x * y, y)
    if gen == 1:
        return FrickeData(a2, a1, a3, a4, x, z, a2 * a3 + a1 * a4 - y - x * z)
    if sign > 0:
        return FrickeData(a1, a3, a2, a4, z, y, a1 * a2 + a3 * a4 - x - y * z)
    return FrickeData(a1, a3, a2, a4, a1 * a3 + a2 * a4 - z - x * y, y, x)


def braid_fricke(f: FrickeData, word) -> FrickeData:
    for gen, sign in reversed(parse_braid_word(word)):
        f = _fricke_step(f, gen, sign)
    return f


# ---------------------------------------------------------------------------
# unipotent triples and Vieta descent

CASE_A4 = {"i": 2, "ii": 0, "iii": 1, "iv": -1}


@dataclass(frozen=True)
class TripleCase:
    """Which value a4 takes when A1, A2, A3 are unipotent.

    Case i (a4 = 2) carries the gcd scale N: x = n1*N + 2 and so on.  The
    other cases use x = n1 + 2.
    """

    case: str
    N: int | None = None

    def __post_init__(self):
        if self.case not in CASE_A4:
            raise ValueError(f"unknown case {self.case!r}; expected one of i, ii, iii, iv")
        if self.case == "i":
            if self.N is None or int(self.N) != self.N or self.N < 1:
                raise ValueError("case i needs an integer N >= 1")
        elif self.N is not None:
            raise ValueError(f"case {self.case} takes no N")

    @property
    def a4(self) -> int:
        return CASE_A4[self.case]

    @property
    def shift(self) -> int:
        return 2 - self.a4

    @classmethod
    def from_a4(cls, a4, N: int | None = None) -> "TripleCase":
        for k, v in CASE_A4.items():
            if v == a4:
                return cls(k, N if k == "i" else None)
        raise ValueError(f"a4 = {format_scalar(a4)} is not one of 2, 0, 1, -1")

    def __str__(self):
        return f"case {self.case}" + (f" N={self.N}" if self.N is not None else "")


def unipotent_residual(n, case: TripleCase) -> int:
    n1, n2, n3 = n
    if case.case == "i":
        return (n1 + n2 + n3) ** 2 + case.N * n1 * n2 * n3
    return (n1 + n2 + n3 + case.shift) ** 2 + n1 * n2 * n3


def vieta_partner(n, i: int, case: TripleCase) -> tuple[int, int, int]:
    """Swap n_i (1-based) for the other root of the relation, read as a quadratic in n_i."""
    n = tuple(int(v) for v in n)
    if unipotent_residual(n, case) != 0:
        raise ValueError(f"{n} does not satisfy the {case} relation")
    if i not in (1, 2, 3):
        raise ValueError("index must be 1, 2 or 3")
    k = i - 1
    if n[k] == 0:
        raise ValueError(f"n{i} = 0 has no Vieta partner")
    s = sum(n) - n[k]
    c = s if case.case == "i" else s + case.shift
    q = Fraction(c * c, n[k])
    if q.denominator != 1:  # cannot happen for a zero residual
        raise ArithmeticError("non-integral Vieta partner")
    out = list(n)
    out[k] = int(q)
    return tuple(out)


def _height(n) -> int:
    return sum(abs(v) for v in n)


def _sorted_triple(n) -> tuple[int, int, int]:
    return tuple(sorted(n, key=lambda v: (abs(v), v)))


def _best_jump(n, case: TripleCase):
    best = None
    for i in (1, 2, 3):
        if n[i - 1] == 0:
            continue
        m = vieta_partner(n, i, case)
        if _height(m) < _height(n if best is None else best):
            best = m
    return best


def descend_minimal(n, case: TripleCase) -> tuple[int, int, int]:
    """Follow height-decreasing Vieta jumps to a local minimum, sorted by |n_i|."""
    n = tuple(int(v) for v in n)
    if unipotent_residual(n, case) != 0:
        raise ValueError(f"{n} does not satisfy the {case} relation")
    while True:
        m = _best_jump(n, case)
        if m is None:
            return _sorted_triple(n)
        n = m


def is_jump_fixed(n, case: TripleCase) -> bool:
    return _best_jump(tuple(n), case) is None


@dataclass(frozen=True, order=True)
class MinimalTriple:
    N: int
    n: tuple[int, int, int]

    def __str__(self):
        return (f"N={self.N} " if self.N else "") + "(" + ",".join(map(str, self.n)) + ")"


def _search_slab(case: str, bound: int, n1_values) -> set[MinimalTriple]:
    found = set()
    for a in n1_values:
        for b in range(a, bound + 1):
            for c in range(b, bound + 1):
                n = (-a, -b, -c)
                if case == "i":
                    if math.gcd(a, b, c) != 1:
                        continue
                    N, rem = divmod((a + b + c) ** 2, a * b * c)
                    if rem:
                        continue
                    tc = TripleCase("i", N)
                else:
                    tc = TripleCase(case)
                    if unipotent_residual(n, tc) != 0:
                        continue
                if is_jump_fixed(n, tc):
                    found.add(MinimalTriple(tc.N or 0, _sorted_triple(n)))
    return found


def enumerate_minimal(case: str, bound: int, workers: int = 1) -> list[MinimalTriple]:
    """All jump-fixed negative triples with |n_i| <= bound, sorted.

    In case i only gcd 1 triples are listed, and N is read off from the
    relation N = (n1+n2+n3)^2 / |n1 n2 n3|.
    """
    TripleCase(case, 1 if case == "i" else None)
    if bound < 1:
        raise ValueError("bound must be at least 1")
    values = list(range(1, bound + 1))
    if workers > 1:
        slabs = [values[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            parts = ex.map(_search_slab, [case] * workers, [bound] * workers, slabs)
            found = set().union(*parts)
    else:
        found = _search_slab(case, bound, values)
    return sorted(found)


def classify(f: FrickeData) -> tuple[TripleCase, tuple[int, int, int]]:
    """Case and triple of Fricke data with a1 = a2 = a3 = 2 (triple sorted by |n_i|)."""
    if (f.a1, f.a2, f.a3) != (2, 2, 2):
        raise ValueError("a1, a2, a3 must all be 2")
    m = [f.x - 2, f.y - 2, f.z - 2]
    if any(not is_rational(v) or v.denominator != 1 for v in m):
        raise ValueError("x, y, z are not integers")
    m = [int(v) for v in m]
    if f.a4 == 2:
        N = math.gcd(*m)
        if N == 0:
            raise ValueError("x = y = z = 2: no scale")
        return TripleCase("i", N), _sorted_triple(v // N for v in m)
    return TripleCase.from_a4(f.a4), _sorted_triple(m)


# ---------------------------------------------------------------------------
# reconstruction from trace data


@dataclass(frozen=True)
class ConstructedTuple:
    tuple: MatrixTuple
    fricke: FrickeData
    matches_input: bool

    @property
    def note(self) -> str:
        if self.matches_input:
            return "traces reproduce the input"
        return "traces give the other root a4 of the Fricke relation"


def construct_tuple(f: FrickeData) -> ConstructedTuple:
    """A1 = [[1,1],[0,1]], A2 = [[1,0],[x-2,1]], A3 unipotent from y and z."""
    if (f.a1, f.a2, f.a3) != (2, 2, 2):
        raise ValueError("construct_tuple needs a1 = a2 = a3 = 2")
    if f.x == 2:
        raise ValueError("degenerate: x = 2")
    if fricke_residual(f) != 0:
        raise ValueError(f"Fricke residual is {format_scalar(fricke_residual(f))}, not 0")
    x, y, z = f.x, f.y, f.z
    q = (y - 2) / (x - 2)
    r = z - 2
    root = _sqrt(-q * r)
    A1 = ExactMatrix([[1, 1], [0, 1]])
    A2 = ExactMatrix([[1, 0], [x - 2, 1]])
    first = None
    for s in (root, -root):
        p = 1 + s
        A3 = ExactMatrix([[p, q], [r, 2 - p]])
        t = MatrixTuple.closing([A1, A2, A3])
        got = fricke_params(t)
        if got == f:
            return ConstructedTuple(t, got, True)
        if first is None:
            first = ConstructedTuple(t, got, False)
    return first


def _sqrt(v: Scalar) -> Scalar:
    if isinstance(v, Quad):
        raise ValueError("square root of a quadratic irrational is not supported")
    return sqrt_rational(v)


def diagonal_conjugator(src: MatrixTuple, dst: MatrixTuple) -> ExactMatrix | None:
    """D = diag(1, d) with D^-1 src_i D = dst_i for all i, or None."""
    if len(src) != len(dst) or src.size != 2 or dst.size != 2:
        return None
    d = None
    for A, B in zip(src, dst):
        if A[0, 1] != 0:
            d = B[0, 1] / A[0, 1]
            break
        if A[1, 0] != 0:
            if B[1, 0] == 0:
                return None
            d = A[1, 0] / B[1, 0]
            break
    if d is None or d == 0:
        d = Fraction(1)
    D = ExactMatrix.diag([1, d])
    if src.conjugate_by(D) == dst:
        return D
    return None


# ---------------------------------------------------------------------------
# golden tuples


def verify_paper_tuples() -> Report:
    from .golden import conjugate_pairs, family_matrices, matrix, golden_tuples, tuple_families

    rep = Report("tuples")
    minimal = {c: set(enumerate_minimal(c, 30)) for c in CASE_A4}
    by_label = {}
    for entry in golden_tuples():
        label = entry["label"]
        ms = [matrix(m) for m in entry["matrices"]]
        t = MatrixTuple(ms, check=False)
        by_label[label] = t
        prod_ok = t.product().is_identity()
        f = fricke_params(t)
        res = fricke_residual(f)
        detail = {"fricke": [format_scalar(v) for v in f.astuple()], "residual": format_scalar(res)}
        try:
            tc, n = classify(f)
        except ValueError as exc:
            rep.add(label, False, product_identity=prod_ok, error=str(exc), **detail)
            continue
        want = TripleCase(entry["case"], entry.get("N"))
        want_n = _sorted_triple(entry["n"])
        low = descend_minimal(n, tc) if unipotent_residual(n, tc) == 0 else None
        in_table = low is not None and MinimalTriple(tc.N or 0, low) in minimal[tc.case]
        ok = prod_ok and res == 0 and tc == want and low == want_n and in_table
        detail.update(case=tc.case, triple=list(n), minimal_triple=None if low is None else list(low), in_table=in_table)
        if tc.N is not None:
            detail["N"] = tc.N
        for e in entry.get("errata", []):
            k = e["index"]
            printed = matrix(e["printed"])
            if e["kind"] == "inverse":
                fixed = printed.inverse() == ms[k - 1]
            else:
                fixed = printed != ms[k - 1] and fricke_residual(f) == 0
            ok = ok and fixed
            detail.setdefault("errata", []).append(f"A{k}: {e['kind']}")
        rep.add(label, ok, product_identity=prod_ok, **detail)
    for a, b in conjugate_pairs():
        D = diagonal_conjugator(by_label[a], by_label[b])
        rep.add(
            f"{a} ~ {b}",
            D is not None,
            D=None if D is None else [[format_scalar(v) for v in r] for r in D.rows],
        )
    for fam in tuple_families():
        samples = fam["samples"]
        keys = list(samples)
        bad = []
        count = 0
        for vals in zip(*(samples[k] for k in keys)) if fam["id"] == "notgeom-2" else product(*(samples[k] for k in keys)):
            env = dict(zip(keys, vals))
            ms = family_matrices(fam, env)
            t = MatrixTuple(ms, check=False)
            count += 1
            if not t.product().is_identity() or not _family_traces_ok(fam["id"], env, fricke_params(t)):
                bad.append(env)
            for e in fam.get("errata", []):
                printed = list(ms)
                printed[e["index"] - 1] = family_matrices({"matrices": [e["printed"]]}, env)[0]
                if MatrixTuple(printed, check=False).product().is_identity():
                    bad.append({**env, "erratum": "printed matrix already closes the product"})
        detail = {"samples": count, "failing": bad}
        if fam.get("errata"):
            detail["errata"] = [f"A{e['index']}: {e['kind']}" for e in fam["errata"]]
        rep.add(fam["id"], not bad, **detail)
    return rep


def _family_traces_ok(fid: str, env: dict, f: FrickeData) -> bool:
    got = sorted([f.x, f.y, f.z])
    if (f.a1, f.a2, f.a3) != (2, 2, 2):
        return False
    if fid == "notgeom-1":
        n1, a4 = env["n1"], env["a4"]
        return f.a4 == a4 and got == sorted(map(Fraction, [n1 + 2, 2, a4 - n1]))
    if fid == "notgeom-3":
        n1 = env["n1"]
        return f.a4 == -2 and got == sorted(map(Fraction, [n1 + 2, n1 + 2, -2]))
    return f.a4 == 2 and got == [2, 2, 2]


# ---------------------------------------------------------------------------
# symmetric square, middle convolution and the trace map


def sym_square(A: ExactMatrix) -> ExactMatrix:
    """Action on u^2, uv, v^2 where A sends u to a u + c v and v to b u + d v."""
    if A.shape != (2, 2):
        raise ValueError("sym_square needs a 2x2 matrix")
    a, b = A.rows[0]
    c, d = A.rows[1]
    return ExactMatrix([
        [a * a, a * b, b * b],
        [2 * a * c, a * d + b * c, 2 * b * d],
        [c * c, c * d, d * d],
    ])


def sym_square_tuple(t: MatrixTuple, m: int = 2) -> MatrixTuple:
    if m != 2 or t.size != 2:
        raise ValueError("sym_square_tuple needs 2x2 matrices")
    return MatrixTuple([sym_square(A) for A in t], check=False)


def _block(rows) -> ExactMatrix:
    return ExactMatrix([sum((list(b.rows[i]) for b in row), []) for row in rows for i in range(row[0].nrows)])


def _quotient_action(mats: list[ExactMatrix], sub: list[tuple]) -> list[ExactMatrix]:
    """Action on V/W for a common invariant subspace W given by spanning vectors."""
    n = mats[0].nrows
    W = span_basis(sub) if sub else []
    basis = list(W)
    for j in range(n):
        e = tuple(Fraction(int(i == j)) for i in range(n))
        trial = basis + [e]
        if ExactMatrix(trial).transpose().rank() == len(trial):
            basis = trial
    P = ExactMatrix.from_columns(basis)
    Pi = P.inverse()
    k = len(W)
    out = []
    for B in mats:
        C = Pi @ B @ P
        out.append(ExactMatrix([r[k:] for r in C.rows[k:]]))
    return out


def middle_convolution(t: MatrixTuple, lam, closed: bool = True) -> MatrixTuple:
    """Middle convolution MC_lam.

    With ``closed`` (the default) the last matrix of t is read as the local
    monodromy at infinity: the convolution acts on A1..A_{r-1} and the last
    output matrix closes the product.  Without it every matrix is convolved
    and the product of the outputs is in general not the identity.
    """
    lam = as_scalar(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    ms = list(t.matrices[:-1] if closed else t.matrices)
    # The block construction is natural for the product taken right to left,
    # so it runs on the reversed tuple and the outputs are reversed back.
    out = _mc_blocks(ms[::-1], lam)[::-1]
    if closed:
        return MatrixTuple.closing(out)
    return MatrixTuple(out, check=False)


def _mc_blocks(ms: list[ExactMatrix], lam: Scalar) -> list[ExactMatrix]:
    r, m = len(ms), ms[0].nrows
    I = ExactMatrix.identity(m)
    Z = ExactMatrix.zeros(m, m)
    big = []
    for k in range(r):
        rows = []
        for i in range(r):
            if i != k:
                rows.append([I if j == i else Z for j in range(r)])
            else:
                rows.append([ms[j] - I if j < k else (ms[k].scale(lam) if j == k else (ms[j] - I).scale(lam)) for j in range(r)])
        big.append(_block(rows))
    sub: list[tuple] = []
    for k in range(r):
        for v in nullspace(ms[k] - I):
            w = [Fraction(0)] * (r * m)
            w[k * m:(k + 1) * m] = v
            sub.append(tuple(w))
    Ibig = ExactMatrix.identity(r * m)
    stacked = ExactMatrix([row for B in big for row in (B - Ibig).rows])
    sub.extend(nullspace(stacked))
    if sub and ExactMatrix(sub).rank() == r * m:
        raise ValueError("middle convolution has dimension 0")
    return _quotient_action(big, sub)


def involution_normal_form(t: MatrixTuple) -> tuple[MatrixTuple, bool]:
    """Rescale a trace-0 tuple so that A1, A2, A3 are involutions.

    Trace-0 matrices of determinant 1 square to -1; multiplying them by
    sqrt(-1) (and A4 by the same factor, keeping the product) gives
    involutions.  Returns the tuple and whether it was rescaled.
    """
    if t.size != 2 or len(t) != 4:
        raise ValueError("need four 2x2 matrices")
    if any(A.trace() != 0 for A in t.matrices[:3]):
        raise ValueError("A1, A2, A3 must have trace 0")
    dets = {A.det() for A in t.matrices[:3]}
    if dets == {Fraction(-1)}:
        return t, False
    if dets == {Fraction(1)}:
        i = Quad(0, 1, -1)
        return MatrixTuple([A.scale(i) for A in t], check=False), True
    raise ValueError("A1, A2, A3 must all have determinant 1 or all -1")


def trace_pipeline(t: MatrixTuple) -> MatrixTuple:
    """MC_{-1} of the symmetric square, after the involution rescaling."""
    s, _ = involution_normal_form(t)
    C = sym_square_tuple(s)
    return middle_convolution(C, -1)


def trace_map(f: FrickeData, det: int = -1) -> FrickeData:
    """Fricke data of MC_{-1}(Sym^2(A)) from that of A, for trace-0 A1, A2, A3.

    ``det`` is the common determinant of A1, A2, A3.  For det = 1 the
    rescaling by sqrt(-1) turns a4 into sqrt(-1)*a4, so the a4 image becomes
    a4^2 - 2 instead of -a4^2 - 2.
    """
    if (f.a1, f.a2, f.a3) != (0, 0, 0):
        raise ValueError("trace_map needs a1 = a2 = a3 = 0")
    if det not in (1, -1):
        raise ValueError("det must be 1 or -1")
    a4 = det * f.a4 * f.a4 - 2
    return FrickeData(2, 2, 2, a4, -(f.x * f.x - 2), -(f.y * f.y - 2), -(f.z * f.z - 2))


# ---------------------------------------------------------------------------
# hermitian forms and irreducibility


@dataclass(frozen=True)
class InvariantForm:
    """Solution space of A^dagger H A = H over hermitian H = S + sqrt(d)*T.

    ``form`` is one basis element (or None), given as a 2x2 matrix.
    """

    dimension: int
    form: ExactMatrix | None
    signature: str
    d: int


def _hermitian_basis(d: int) -> list[ExactMatrix]:
    s = sqrt_rational(d)
    return [
        ExactMatrix([[1, 0], [0, 0]]),
        ExactMatrix([[0, 0], [0, 1]]),
        ExactMatrix([[0, 1], [1, 0]]),
        ExactMatrix([[0, s], [-s, 0]]),
    ]


def _split(v: Scalar) -> tuple[Fraction, Fraction]:
    if isinstance(v, Quad):
        return v.a, v.b
    return Fraction(v), Fraction(0)


def invariant_form(t: MatrixTuple, m: int = 2) -> InvariantForm:
    if m != 2 or t.size != 2:
        raise ValueError("invariant_form needs 2x2 matrices")
    d = t.field()
    if d is None:
        d = -1
    elif d > 0:
        raise ValueError(f"entries in the real field Q(sqrt({d})) are not supported")
    basis = _hermitian_basis(d)
    columns = []
    for E in basis:
        col: list[Fraction] = []
        for A in t:
            M = A.adjoint() @ E @ A - E
            for row in M.rows:
                for v in row:
                    col.extend(_split(v))
        columns.append(col)
    sols = nullspace(ExactMatrix.from_columns(columns))
    dim = len(sols)
    if dim == 0:
        return InvariantForm(0, None, "none", d)
    H = basis[0].scale(0)
    for c, E in zip(sols[0], basis):
        H = H + E.scale(c)
    if dim != 1:
        return InvariantForm(dim, H, "degenerate", d)
    det = H.det()
    sig = "definite" if det > 0 else ("indefinite" if det < 0 else "degenerate")
    return InvariantForm(1, H, sig, d)


def is_irreducible(t: MatrixTuple) -> bool:
    """No common eigenvector, i.e. the words of length <= 2 span all 2x2 matrices."""
    if t.size != 2:
        raise ValueError("is_irreducible handles 2x2 tuples")
    words = [ExactMatrix.identity(2)] + list(t.matrices)
    words += [A @ B for A in t.matrices for B in t.matrices]
    vecs = [tuple(v for r in w.rows for v in r) for w in words]
    return len(span_basis(vecs)) == 4


@dataclass(frozen=True)
class TraceClassification:
    squares: tuple[Scalar, Scalar, Scalar]
    form_exists: bool
    branch: str


def inverse_trace_data(f: FrickeData) -> TraceClassification:
    """Squares (2-x, 2-y, 2-z) of the preimage traces and the form verdict."""
    if (f.a1, f.a2, f.a3) != (2, 2, 2):
        raise ValueError("inverse_trace_data needs a1 = a2 = a3 = 2")
    xyz = (f.x, f.y, f.z)
    if not all(is_rational(v) for v in xyz):
        raise ValueError("x, y, z must be real")
    squares = tuple(2 - v for v in xyz)
    below = all(v <= -2 for v in xyz)
    inside = all(-2 <= v <= 2 for v in xyz)
    if f.a4 == 2:
        return TraceClassification(squares, below, "all <= -2" if below else "not all <= -2")
    if below:
        return TraceClassification(squares, True, "all <= -2")
    if inside:
        return TraceClassification(squares, True, "all in [-2, 2]")
    return TraceClassification(squares, False, "mixed")


__all__ = [
    "MatrixTuple", "FrickeData", "fricke_params", "fricke_residual", "parse_braid_word",
    "braid", "braid_fricke", "TripleCase", "unipotent_residual", "vieta_partner",
    "descend_minimal", "is_jump_fixed", "MinimalTriple", "enumerate_minimal", "classify",
    "ConstructedTuple", "construct_tuple", "diagonal_conjugator", "verify_paper_tuples",
    "sym_square", "sym_square_tuple", "middle_convolution", "involution_normal_form",
    "trace_pipeline", "trace_map", "InvariantForm", "invariant_form", "is_irreducible",
    "TraceClassification", "inverse_trace_data",
]
