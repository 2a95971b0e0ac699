"""Exact dense linear algebra over prime fields GF(p).

Matrices are immutable values: int64 numpy arrays with entries reduced to
[0, p), wrapped together with their field.  Row reduction uses first-nonzero
pivoting (scan columns left to right, take the topmost nonzero entry), so
every result -- echelon form, pivot columns, kernel basis order, solve
output -- is deterministic.

The echelon core processes panels of columns with plain rank-1 updates and
then applies one accumulated update to the trailing block per panel.  The
accumulated update is a float64 matrix product, exact as long as
width * (p-1)^2 stays below 2^52; the panel width shrinks automatically for
large p.  Everything else (kernel, solve, rank, inverse) is derived from the
echelon form.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError

_FLOAT_EXACT = 2 ** 52


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin, valid far beyond 2^31
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """GF(p) for a prime p < 2^31."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise InputError(f"field order must be prime, got {p!r}")
        if p >= 2 ** 31:
            raise InputError(f"field order too large: {p}")
        self.p = p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(x, self.p - 2, self.p)

    def neg(self, x: int) -> int:
        return -x % self.p

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})"


class Mat:
    """Immutable matrix over a prime field.

    data is an int64 array of shape (rows, cols) with entries in [0, p).
    """

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data):
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            raise InputError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr = arr % field.p
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def entry(self, i: int, j: int) -> int:
        return int(self.data[i, j])

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mat)
            and other.field == self.field
            and other.data.shape == self.data.shape
            and bool(np.array_equal(other.data, self.data))
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.data.shape, self.data.tobytes()))

    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def __add__(self, other: "Mat") -> "Mat":
        return mat_add(self, other)

    def __sub__(self, other: "Mat") -> "Mat":
        _check_same_shape(self, other)
        return Mat(self.field, self.data - other.data)

    def __neg__(self) -> "Mat":
        return Mat(self.field, -self.data)

    def __repr__(self) -> str:
        return f"Mat({self.field!r}, {self.data.tolist()!r})"

    def is_zero(self) -> bool:
        return not self.data.any()


def identity(field: Field, n: int) -> Mat:
    return Mat(field, np.eye(n, dtype=np.int64))

def zeros(field: Field, rows: int, cols: int) -> Mat:
    return Mat(field, np.zeros((rows, cols), dtype=np.int64))

def transpose(a: Mat) -> Mat:
    return Mat(a.field, a.data.T)

def hstack(mats: list[Mat]) -> Mat:
    assert mats, "hstack of nothing"
    f = mats[0].field
    assert all(m.field == f for m in mats)
    return Mat(f, np.hstack([m.data for m in mats]))

def vstack(mats: list[Mat]) -> Mat:
    assert mats, "vstack of nothing"
    f = mats[0].field
    assert all(m.field == f for m in mats)
    return Mat(f, np.vstack([m.data for m in mats]))


def _check_same_shape(a: Mat, b: Mat) -> None:
    if a.field != b.field:
        raise InputError(f"field mismatch: {a.field} vs {b.field}")
    if a.data.shape != b.data.shape:
        raise InputError(f"shape mismatch: {a.data.shape} vs {b.data.shape}")


def mat_add(a: Mat, b: Mat) -> Mat:
    _check_same_shape(a, b)
    return Mat(a.field, a.data + b.data)


def _mul_arrays(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) mod p.  Uses BLAS through float64 when the inner
    dimension keeps products below 2^52, otherwise chunks the sum."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    per = (p - 1) ** 2
    inner = a.shape[1]
    if per * inner < _FLOAT_EXACT:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.rint(prod).astype(np.int64) % p
    # large p: int64 accumulation, chunked so sums stay below 2^62
    chunk = max(1, (2 ** 62) // per)
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for lo in range(0, inner, chunk):
        hi = min(lo + chunk, inner)
        acc = (acc + a[:, lo:hi] @ b[lo:hi]) % p
    return acc


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a.field != b.field:
        raise InputError(f"field mismatch: {a.field} vs {b.field}")
    if a.cols != b.rows:
        raise InputError(f"inner dimension mismatch: {a.cols} vs {b.rows}")
    return Mat(a.field, _mul_arrays(a.data, b.data, a.field.p))


def _echelon(arr: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p with first-nonzero pivoting.

    Works on a copy.  Panel width adapts so the accumulated float64 update
    stays exact; at width 1 this degenerates to the plain rank-1 method,
    which is itself exact in int64 for any p < 2^31.
    """
    R = arr.astype(np.int64, copy=True) % p
    rows, cols = R.shape
    pivots: list[int] = []
    if rows == 0 or cols == 0:
        return R, pivots
    width = 64
    while width > 1 and width * (p - 1) ** 2 >= _FLOAT_EXACT:
        width //= 2
    r = 0
    c0 = 0
    while r < rows and c0 < cols:
        c1 = min(c0 + width, cols)
        panel = R[:, c0:c1]
        batch: list[int] = []     # pivot row index per panel pivot
        invs: list[int] = []      # inverse applied when scaling that pivot row
        mults: list[np.ndarray] = []  # panel column captured before zeroing
        rr = r
        for c in range(c1 - c0):
            if rr == rows:
                break
            nz = np.nonzero(panel[rr:, c])[0]
            if nz.size == 0:
                continue
            pr = rr + int(nz[0])
            if pr != rr:
                R[[rr, pr]] = R[[pr, rr]]
                # captured multipliers follow row content through swaps
                for colv in mults:
                    colv[rr], colv[pr] = colv[pr], colv[rr]
            inv = pow(int(panel[rr, c]), p - 2, p)
            if inv != 1:
                panel[rr] = (panel[rr] * inv) % p
            colv = panel[:, c].copy()
            colv[rr] = 0
            mask = colv != 0
            if mask.any():
                panel[mask] = (panel[mask] - np.outer(colv[mask], panel[rr])) % p
            pivots.append(c0 + c)
            batch.append(rr)
            invs.append(inv)
            mults.append(colv)
            rr += 1
        if batch and c1 < cols:
            k = len(batch)
            M = np.stack(mults, axis=1)           # rows x k, multiplier per step
            T0 = R[batch, c1:]                    # stale trailing of pivot rows
            # S[j] = trailing of pivot row j as it stood when step j used it:
            # corrections from earlier steps, then the scaling.
            S = np.zeros_like(T0)
            for j in range(k):
                acc = T0[j]
                if j:
                    upd = _mul_arrays(M[batch[j], :j].reshape(1, j), S[:j], p)
                    acc = (acc - upd[0]) % p
                S[j] = (acc * invs[j]) % p if invs[j] != 1 else acc
            # final pivot rows: step j replaced the row by S[j], later steps
            # subtract their multiples.
            U = np.zeros((k, k), dtype=np.int64)
            for j in range(k):
                U[j, j + 1:] = M[batch[j], j + 1:]
            R[batch, c1:] = (S - _mul_arrays(U, S, p)) % p
            others = np.ones(rows, dtype=bool)
            others[batch] = False
            Mo = M[others]
            if Mo.size and Mo.any():
                R[others, c1:] = (R[others, c1:] - _mul_arrays(Mo, S, p)) % p
        r = rr
        c0 = c1
    return R, pivots


def rref(a: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    R, piv = _echelon(a.data, a.field.p)
    return Mat(a.field, R), piv


def rank(a: Mat) -> int:
    _, piv = _echelon(a.data, a.field.p)
    return len(piv)


def kernel_basis(a: Mat) -> Mat:
    """Columns form a basis of the right null space.

    One basis column per free column of the echelon form, ordered by free
    column index ascending; the free coordinate is set to 1.
    """
    p = a.field.p
    R, piv = _echelon(a.data, p)
    piv_set = set(piv)
    free = [c for c in range(a.cols) if c not in piv_set]
    K = np.zeros((a.cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        K[fc, j] = 1
        for i, pc in enumerate(piv):
            K[pc, j] = (-R[i, fc]) % p
    return Mat(a.field, K)


def solve(a: Mat, b: Mat) -> Mat | None:
    """One solution X of a @ X = b, or None if inconsistent.

    Free coordinates are set to 0, so the answer is deterministic.  b may
    have several columns; they are solved together.
    """
    if a.field != b.field:
        raise InputError(f"field mismatch: {a.field} vs {b.field}")
    if a.rows != b.rows:
        raise InputError(f"row mismatch: {a.rows} vs {b.rows}")
    p = a.field.p
    aug = np.hstack([a.data, b.data])
    R, piv = _echelon(aug, p)
    if piv and piv[-1] >= a.cols:
        return None
    X = np.zeros((a.cols, b.cols), dtype=np.int64)
    for i, pc in enumerate(piv):
        X[pc] = R[i, a.cols:]
    return Mat(a.field, X)


def expressor(basis: Mat) -> Mat:
    """For a matrix whose columns are linearly independent, return E with
    E @ basis = identity.  Applying E to any vector inside the column span
    yields its coordinates; behaviour outside the span is unspecified."""
    p = basis.field.p
    n, k = basis.rows, basis.cols
    aug = np.hstack([basis.data, np.eye(n, dtype=np.int64)])
    R, piv = _echelon(aug, p)
    if len([c for c in piv if c < k]) != k:
        raise InputError("expressor: columns are not independent")
    return Mat(basis.field, R[:k, k:])


def extend_basis(have: Mat, candidates: Mat) -> list[int]:
    """Indices of candidate columns that extend the span of `have`.

    Greedy in column order: a candidate is taken iff it is outside the span
    of `have` plus the candidates already taken.  Deterministic.
    """
    if have.cols and candidates.cols:
        assert have.rows == candidates.rows
    p = have.field.p
    aug = np.hstack([have.data, candidates.data])
    _, piv = _echelon(aug, p)
    return [c - have.cols for c in piv if c >= have.cols]


def column_space_dim(cols: np.ndarray, p: int) -> int:
    _, piv = _echelon(cols, p)
    return len(piv)
