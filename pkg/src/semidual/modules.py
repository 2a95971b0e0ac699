"""Finite-dimensional modules over a commutative local algebra.

A Module is a coordinate space k^n with one action matrix per algebra basis
element.  Modules built directly from action matrices are validated (unit
acts as identity, the representation law holds entrywise; commutativity of
the action matrices follows from the law since the algebra is commutative,
and is re-checked by the same comparison).  Modules derived by the
constructions in this file -- kernels, quotients, duals, hom and tensor
carriers -- are correct by construction and skip re-validation; validate()
can always be called explicitly.

Direct powers W^b (used pervasively by resolutions: free modules are powers
of the regular module, injective resolutions are powers of its dual) carry
their block structure instead of materialised action matrices.  Basis order
inside a power is copy-major: b consecutive copies of W's basis.  Hom and
tensor constructions route around the blocks, so Hom(W^b, N) costs b small
problems instead of one giant one; their answers agree with the generic
construction because the identifications are the canonical ones.

Hom spaces and tensor products both come as "space" objects holding the
carrier Module plus the translation between coordinates and honest matrices
or pure tensors; the plain hom_module / tensor_module functions return the
carrier together with materialised interpretation data.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .algebra import Algebra
from .errors import InputError, TheoremViolationError
from .linalg import Mat, _mul_arrays, expressor, extend_basis, kernel_basis, rref, solve, transpose

_caches: list[dict] = []


def _cache() -> dict:
    d: dict = {}
    _caches.append(d)
    return d


def clear_caches() -> None:
    for d in _caches:
        d.clear()


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


class Module:
    """R-module on k^dim.  Do not mutate; construct through the helpers."""

    __slots__ = ("ring", "dim", "label", "_action", "_block", "_fp")

    def __init__(self, ring: Algebra, action, label: str = "M", check: bool = True):
        arr = np.asarray(action, dtype=np.int64) % ring.field.p
        if arr.ndim != 3 or arr.shape[0] != ring.dim or arr.shape[1] != arr.shape[2]:
            raise InputError(
                f"need {ring.dim} square action matrices, got shape {arr.shape}")
        self.ring = ring
        self.dim = int(arr.shape[1])
        self.label = label
        self._action = _frozen(arr)
        self._block = None
        self._fp = None
        if check:
            self.validate()

    @classmethod
    def _power(cls, base: "Module", copies: int, label: str) -> "Module":
        self = object.__new__(cls)
        self.ring = base.ring
        self.dim = base.dim * copies
        self.label = label
        self._action = None
        self._block = (base, copies)
        self._fp = None
        return self

    @property
    def block(self) -> tuple["Module", int] | None:
        return self._block

    @property
    def action(self) -> np.ndarray:
        """The d action matrices, materialised if this is a power."""
        if self._action is None:
            base, b = self._block
            d = self.ring.dim
            eye = np.eye(b, dtype=np.int64)
            self._action = _frozen(
                np.stack([np.kron(eye, base.action[i]) for i in range(d)]))
        return self._action

    def act(self, i: int, cols: np.ndarray) -> np.ndarray:
        """Apply the action of basis element e_i to column vectors."""
        p = self.ring.field.p
        if self._block is None:
            return _mul_arrays(self._action[i], cols, p)
        base, b = self._block
        return _block_apply(base.action[i], b, cols, p)

    def act_element(self, elem: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Apply the action of an arbitrary ring element."""
        p = self.ring.field.p
        if self._block is None:
            return _mul_arrays(self.element_matrix(elem), cols, p)
        base, b = self._block
        return _block_apply(base.element_matrix(elem), b, cols, p)

    def element_matrix(self, elem: np.ndarray) -> np.ndarray:
        """Dense matrix of the action of a ring element (small modules)."""
        p = self.ring.field.p
        elem = np.asarray(elem) % p
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        act = self.action
        for i in range(self.ring.dim):
            if elem[i]:
                out = (out + int(elem[i]) * act[i]) % p
        return out

    def validate(self) -> None:
        ring = self.ring
        p = ring.field.p
        d = ring.dim
        act = self.action
        if not np.array_equal(self.element_matrix(ring.unit),
                              np.eye(self.dim, dtype=np.int64)):
            raise InputError(f"unit does not act as identity on {self.label}")
        for i in range(d):
            for j in range(i, d):
                prod = _mul_arrays(act[i], act[j], p)
                if not np.array_equal(prod, self.element_matrix(ring.structure[i, j])):
                    raise InputError(
                        f"action matrices violate the ring relations on {self.label}")
                if i != j and not np.array_equal(prod, _mul_arrays(act[j], act[i], p)):
                    raise InputError(f"action matrices do not commute on {self.label}")

    @property
    def fingerprint(self) -> bytes:
        if self._fp is None:
            h = hashlib.sha256()
            h.update(self.ring.fingerprint)
            if self._block is not None:
                base, b = self._block
                h.update(b"pow")
                h.update(base.fingerprint)
                h.update(str(b).encode())
            else:
                h.update(str(self.dim).encode())
                h.update(self._action.tobytes())
            self._fp = h.digest()
        return self._fp

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self) -> str:
        return f"Module({self.label}, dim={self.dim})"


class ModuleHom:
    """R-linear map between modules, stored as a dst.dim x src.dim matrix."""

    __slots__ = ("src", "dst", "mat")

    def __init__(self, src: Module, dst: Module, mat, check: bool = True):
        if src.ring is not dst.ring and src.ring.fingerprint != dst.ring.fingerprint:
            raise InputError("source and target live over different rings")
        arr = np.asarray(mat, dtype=np.int64) % src.ring.field.p
        if arr.shape != (dst.dim, src.dim):
            raise InputError(f"matrix shape {arr.shape} does not match "
                             f"({dst.dim}, {src.dim})")
        self.src = src
        self.dst = dst
        self.mat = _frozen(arr)
        if check:
            self.validate()

    def validate(self) -> None:
        for i in range(self.src.ring.dim):
            lhs = self.dst.act(i, self.mat)
            rhs = _right_act(self.src, i, self.mat)
            if not np.array_equal(lhs, rhs):
                raise InputError(
                    f"map {self.src.label} -> {self.dst.label} is not R-linear "
                    f"(fails on basis element {i})")

    def __call__(self, vec: np.ndarray) -> np.ndarray:
        return _mul_arrays(self.mat, np.asarray(vec).reshape(-1, 1),
                           self.src.ring.field.p)[:, 0]

    def compose(self, other: "ModuleHom") -> "ModuleHom":
        """self after other."""
        assert other.dst.dim == self.src.dim
        p = self.src.ring.field.p
        return ModuleHom(other.src, self.dst,
                         _mul_arrays(self.mat, other.mat, p), check=False)

    def matrix(self) -> Mat:
        return Mat(self.src.ring.field, self.mat)

    def rank(self) -> int:
        from .linalg import rank as _rank
        return _rank(self.matrix())

    def is_injective(self) -> bool:
        return self.rank() == self.src.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.dst.dim

    def is_bijective(self) -> bool:
        return self.src.dim == self.dst.dim and self.rank() == self.src.dim

    def __repr__(self) -> str:
        return f"ModuleHom({self.src.label} -> {self.dst.label})"


def _block_apply(small: np.ndarray, b: int, cols: np.ndarray, p: int) -> np.ndarray:
    """(I_b kron small) @ cols, exactly, without building the big matrix."""
    w = small.shape[0]
    k = cols.shape[1] if cols.ndim == 2 else 1
    shaped = cols.reshape(b, w, k).transpose(1, 0, 2).reshape(w, b * k)
    out = _mul_arrays(small, shaped, p)
    return out.reshape(w, b, k).transpose(1, 0, 2).reshape(b * w, k)


def _right_act(module: Module, i: int, rows: np.ndarray) -> np.ndarray:
    """rows @ A_i(module) without materialising block actions."""
    p = module.ring.field.p
    if module.block is None:
        return _mul_arrays(rows, module.action[i], p)
    base, b = module.block
    w = base.dim
    shaped = np.ascontiguousarray(rows).reshape(-1, w)
    out = _mul_arrays(shaped, base.action[i], p)
    return out.reshape(rows.shape[0], module.dim)


def identity_hom(m: Module) -> ModuleHom:
    return ModuleHom(m, m, np.eye(m.dim, dtype=np.int64), check=False)


def zero_hom(src: Module, dst: Module) -> ModuleHom:
    return ModuleHom(src, dst, np.zeros((dst.dim, src.dim), dtype=np.int64), check=False)


# -- basic constructors ------------------------------------------------------

_regular_cache = _cache()
_dual_cache = _cache()


def regular_module(R: Algebra) -> Module:
    """R as a module over itself."""
    got = _regular_cache.get(R.fingerprint)
    if got is None:
        got = Module(R, R.left_mult, label=R.name, check=False)
        _regular_cache[R.fingerprint] = got
    return got


def zero_module(R: Algebra) -> Module:
    return Module(R, np.zeros((R.dim, 0, 0), dtype=np.int64), label="0", check=False)


def power_module(base: Module, copies: int, label: str | None = None) -> Module:
    if copies < 0:
        raise InputError("negative power")
    if base.block is not None:
        inner, a = base.block
        return power_module(inner, a * copies, label)
    if copies == 0 or base.dim == 0:
        return zero_module(base.ring)
    if label is None:
        label = f"{base.label}^{copies}" if copies != 1 else base.label
    if copies == 1:
        return base
    return Module._power(base, copies, label)


def free_module(R: Algebra, n: int) -> Module:
    return power_module(regular_module(R), n, label=f"{R.name}^{n}")


def direct_sum(parts: list[Module], label: str | None = None) -> Module:
    """Dense direct sum; meant for small modules."""
    assert parts, "direct sum of nothing"
    ring = parts[0].ring
    d = ring.dim
    n = sum(m.dim for m in parts)
    act = np.zeros((d, n, n), dtype=np.int64)
    off = 0
    for m in parts:
        act[:, off:off + m.dim, off:off + m.dim] = m.action
        off += m.dim
    if label is None:
        label = " + ".join(m.label for m in parts)
    return Module(ring, act, label=label, check=False)


_named_cache = _cache()


def residue_field_module(R: Algebra) -> Module:
    """R / rad(R) as a module; one-dimensional when R is local."""
    key = ("k", R.fingerprint)
    got = _named_cache.get(key)
    if got is None:
        from .algebra import radical
        got = _quotient_by_columns(regular_module(R), radical(R).data, "k").carrier
        _named_cache[key] = got
    return got


def radical_submodule(R: Algebra) -> Module:
    """rad(R) as a module over R (the maximal ideal, for local R)."""
    key = ("m", R.fingerprint)
    got = _named_cache.get(key)
    if got is None:
        from .algebra import radical
        got = _submodule_from_columns(regular_module(R), radical(R).data, "m").carrier
        _named_cache[key] = got
    return got


def matlis_dual(M: Module) -> Module:
    """Hom_k(M, k) with the transpose action.  Exact and contravariant."""
    got = _dual_cache.get(M.fingerprint)
    if got is not None:
        return got
    if M.block is not None:
        base, b = M.block
        out = power_module(matlis_dual(base), b, label=f"({M.label})*")
    else:
        out = Module(M.ring, M.action.transpose(0, 2, 1),
                     label=f"({M.label})*", check=False)
    _dual_cache[M.fingerprint] = out
    return out


def matlis_dual_hom(f: ModuleHom) -> ModuleHom:
    return ModuleHom(matlis_dual(f.dst), matlis_dual(f.src), f.mat.T, check=False)


def dualizing_module(R: Algebra) -> Module:
    """Matlis dual of the ring: the injective hull of the residue field
    (for local R), and the canonical module of the Artinian ring."""
    D = matlis_dual(regular_module(R))
    return D


# -- subquotients -----------------------------------------------------------


class Subquotient:
    """Carrier module plus the structure map and a k-linear section.

    kind 'kernel' / 'image': map embeds the carrier into the ambient module,
    section expresses ambient vectors lying in the subspace in carrier
    coordinates.  kind 'quotient': map projects the ambient module onto the
    carrier, section lifts carrier coordinates to representatives.
    """

    __slots__ = ("carrier", "map", "section", "kind")

    def __init__(self, carrier: Module, map_: ModuleHom, section: np.ndarray, kind: str):
        self.carrier = carrier
        self.map = map_
        self.section = _frozen(section)
        self.kind = kind


def _submodule_from_columns(ambient: Module, cols: np.ndarray, label: str,
                            kind: str = "submodule") -> Subquotient:
    """Module structure on the span of the given independent columns.
    The span must be closed under the action; this is asserted."""
    p = ambient.ring.field.p
    d = ambient.ring.dim
    k = cols.shape[1]
    E = expressor(Mat(ambient.ring.field, cols)).data if k else np.zeros((0, ambient.dim), dtype=np.int64)
    act = np.zeros((d, k, k), dtype=np.int64)
    for i in range(d):
        moved = ambient.act(i, cols)
        coords = _mul_arrays(E, moved, p)
        assert np.array_equal(_mul_arrays(cols, coords, p), moved), \
            "columns do not span a submodule"
        act[i] = coords
    carrier = Module(ambient.ring, act, label=label, check=False)
    inj = ModuleHom(carrier, ambient, cols, check=False)
    return Subquotient(carrier, inj, E, kind)


def kernel(f: ModuleHom) -> Subquotient:
    K = kernel_basis(Mat(f.src.ring.field, f.mat)).data
    return _submodule_from_columns(f.src, K, f"ker({f.src.label}->{f.dst.label})", "kernel")


def image(f: ModuleHom) -> Subquotient:
    _, piv = rref(Mat(f.src.ring.field, f.mat))
    cols = f.mat[:, piv] if piv else np.zeros((f.dst.dim, 0), dtype=np.int64)
    return _submodule_from_columns(f.dst, cols, f"im({f.src.label}->{f.dst.label})", "image")


def _quotient_by_columns(ambient: Module, cols: np.ndarray, label: str) -> Subquotient:
    """Quotient of the ambient module by the span of the given columns
    (which must be action-stable)."""
    p = ambient.ring.field.p
    n = ambient.dim
    red, piv = rref(transpose(Mat(ambient.ring.field, cols)))
    E = red.data[: len(piv)]          # echelon basis of the subspace, as rows
    keep = [j for j in range(n) if j not in set(piv)]
    q = len(keep)
    Q = np.zeros((q, n), dtype=np.int64)
    for t, j in enumerate(keep):
        Q[t, j] = 1
    for i, pc in enumerate(piv):
        Q[:, pc] = (-E[i, keep]) % p
    sigma = np.zeros((n, q), dtype=np.int64)
    for t, j in enumerate(keep):
        sigma[j, t] = 1
    d = ambient.ring.dim
    act = np.zeros((d, q, q), dtype=np.int64)
    for i in range(d):
        act[i] = _mul_arrays(Q, ambient.act(i, sigma), p)
    carrier = Module(ambient.ring, act, label=label, check=False)
    proj = ModuleHom(ambient, carrier, Q, check=False)
    return Subquotient(carrier, proj, sigma, "quotient")


def cokernel(f: ModuleHom) -> Subquotient:
    return _quotient_by_columns(f.dst, f.mat,
                                f"coker({f.src.label}->{f.dst.label})")


# -- generators and freeness --------------------------------------------------

_gen_cache = _cache()


def radical_span(M: Module) -> np.ndarray:
    """Columns spanning rad(R) * M (not reduced to a basis)."""
    from .algebra import radical
    rad = radical(M.ring)
    if rad.cols == 0 or M.dim == 0:
        return np.zeros((M.dim, 0), dtype=np.int64)
    return np.hstack([M.act_element(rad.data[:, j], np.eye(M.dim, dtype=np.int64))
                      for j in range(rad.cols)])


def minimal_generators(M: Module) -> np.ndarray:
    """Columns forming a minimal generating set (Nakayama): standard basis
    vectors whose classes give a basis of M / rad M.  Deterministic."""
    got = _gen_cache.get(M.fingerprint)
    if got is not None:
        return got
    span = radical_span(M)
    field = M.ring.field
    red, piv = rref(transpose(Mat(field, span)))
    have = transpose(Mat(field, red.data[: len(piv)]))
    idx = extend_basis(have, Mat(field, np.eye(M.dim, dtype=np.int64)))
    gens = np.eye(M.dim, dtype=np.int64)[:, idx]
    gens = _frozen(gens)
    _gen_cache[M.fingerprint] = gens
    return gens


def cover_matrix(M: Module, gens: np.ndarray) -> np.ndarray:
    """Matrix of the map R^g -> M sending the s-th free generator to
    gens[:, s].  Column (s, mu) is e_mu * gens_s; copy-major layout."""
    g = gens.shape[1]
    d = M.ring.dim
    out = np.zeros((M.dim, g * d), dtype=np.int64)
    for s in range(g):
        for mu in range(d):
            out[:, s * d + mu] = M.act(mu, gens[:, s:s + 1])[:, 0]
    return out


def minimal_cover(M: Module) -> tuple[Module, ModuleHom, np.ndarray]:
    """(free module F, surjection F -> M, generator columns)."""
    gens = minimal_generators(M)
    g = gens.shape[1]
    F = free_module(M.ring, g)
    mat = cover_matrix(M, gens)
    return F, ModuleHom(F, M, mat, check=False), gens


def is_free(M: Module) -> int | None:
    """Rank if M is free, else None."""
    if M.dim == 0:
        return 0
    gens = minimal_generators(M)
    g = gens.shape[1]
    if g * M.ring.dim != M.dim:
        return None
    mat = cover_matrix(M, gens)
    from .linalg import rank as _rank
    if _rank(Mat(M.ring.field, mat)) != M.dim:
        return None
    return g


def is_injective(M: Module) -> int | None:
    """Rank of the dual if M is injective (= dual of a free), else None."""
    return is_free(matlis_dual(M))


def presentation_to_module(R: Algebra, n: int, m: int, entries) -> tuple[Module, ModuleHom]:
    """Cokernel of the R-matrix map R^m -> R^n with the given n x m entries.

    Entries may be polynomial strings or coordinate vectors.  Returns the
    module together with the projection from R^n.
    """
    if n < 0 or m < 0:
        raise InputError("negative presentation size")
    rows = list(entries)
    if len(rows) != n or any(len(r) != m for r in rows):
        raise InputError(f"need {n} x {m} entries")
    src = free_module(R, m)
    dst = free_module(R, n)
    d = R.dim
    mat = np.zeros((n * d, m * d), dtype=np.int64)
    for s in range(n):
        for t in range(m):
            e = rows[s][t]
            vec = R.element_from_string(e) if isinstance(e, str) else np.asarray(e)
            mat[s * d:(s + 1) * d, t * d:(t + 1) * d] = R.mult_matrix(vec)
    f = ModuleHom(src, dst, mat, check=False)
    if not mat.any():
        return dst, identity_hom(dst)
    sq = cokernel(f)
    sq.carrier.label = f"coker({n}x{m})"
    return sq.carrier, sq.map


# -- hom spaces ---------------------------------------------------------------

_homspace_cache = _cache()


class HomSpace:
    """Hom_R(source, target) as a module plus coordinate translations.

    coords are vectors of length dim; mat_of turns coordinates into an
    honest (target.dim x source.dim) matrix, coords_of inverts that on
    matrices that really are R-linear maps.
    """

    def __init__(self, source: Module, target: Module):
        self.source = source
        self.target = target
        self.ring = source.ring
        self.module: Module = None  # set by _build
        self._build()

    @property
    def dim(self) -> int:
        return self.module.dim

    # -- translations, overridden per construction

    def mat_of(self, coords: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def coords_of(self, mat: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def basis_mat(self, l: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[l] = 1
        return self.mat_of(e)

    def hom(self, coords: np.ndarray, check: bool = False) -> ModuleHom:
        return ModuleHom(self.source, self.target, self.mat_of(coords), check=check)


class _GenericHom(HomSpace):
    """Solve the commutation system f A_i = B_i f directly."""

    def _build(self):
        M, N = self.source, self.target
        p = self.ring.field.p
        t, s = N.dim, M.dim
        d = self.ring.dim
        if t * s == 0:
            self.module = zero_module(self.ring)
            self._basis = np.zeros((0, t, s), dtype=np.int64)
            self._expr = np.zeros((0, t * s), dtype=np.int64)
            return
        eye_t = np.eye(t, dtype=np.int64)
        eye_s = np.eye(s, dtype=np.int64)
        blocks = [
            (np.kron(eye_t, M.action[i].T) - np.kron(N.action[i], eye_s)) % p
            for i in range(d)
        ]
        system = Mat(self.ring.field, np.vstack(blocks))
        K = kernel_basis(system).data            # (t*s) x q
        q = K.shape[1]
        self._basis = K.T.reshape(q, t, s)
        self._expr = (expressor(Mat(self.ring.field, K)).data if q
                      else np.zeros((0, t * s), dtype=np.int64))
        act = np.zeros((d, q, q), dtype=np.int64)
        for i in range(d):
            if q:
                moved = np.stack([N.act(i, self._basis[l]) for l in range(q)])
                act[i] = _mul_arrays(self._expr, moved.reshape(q, t * s).T, p)
        self.module = Module(self.ring, act,
                             label=f"Hom({M.label},{N.label})", check=False)

    def mat_of(self, coords):
        t, s = self.target.dim, self.source.dim
        p = self.ring.field.p
        return np.tensordot(np.asarray(coords) % p, self._basis, axes=([0], [0])) % p

    def coords_of(self, mat):
        p = self.ring.field.p
        return _mul_arrays(self._expr, np.asarray(mat).reshape(-1, 1), p)[:, 0]


class _FreeSourceHom(HomSpace):
    """Hom(R^b, N) = N^b: a map is its values on the b free generators."""

    def _build(self):
        b = free_copies(self.source)
        self.copies = b
        N = self.target
        self.module = power_module(N, b, label=f"Hom({self.source.label},{N.label})")
        # column layout of the source: copy s occupies columns s*d..(s+1)*d
        self._d = self.ring.dim

    def mat_of(self, coords):
        # value on generator s is the block s of coords; the matrix column
        # (s, mu) is e_mu * value_s
        N = self.target
        b, d = self.copies, self._d
        coords = np.asarray(coords).reshape(b, N.dim)
        out = np.zeros((N.dim, b * d), dtype=np.int64)
        for s in range(b):
            vals = coords[s].reshape(-1, 1)
            for mu in range(d):
                out[:, s * d + mu] = N.act(mu, vals)[:, 0]
        return out

    def coords_of(self, mat):
        # evaluate at the unit of each copy
        b, d = self.copies, self._d
        unit = self.ring.unit.reshape(-1, 1)
        N = self.target
        out = np.zeros((b, N.dim), dtype=np.int64)
        p = self.ring.field.p
        for s in range(b):
            out[s] = _mul_arrays(np.ascontiguousarray(mat[:, s * d:(s + 1) * d]),
                                 unit, p)[:, 0]
        return out.reshape(-1)


class _BlockSourceHom(HomSpace):
    """Hom(W^b, N) = Hom(W, N)^b for a general dense W."""

    def _build(self):
        base, b = self.source.block
        self.copies = b
        self.small = hom_space(base, self.target)
        self.module = power_module(self.small.module, b,
                                   label=f"Hom({self.source.label},{self.target.label})")

    def mat_of(self, coords):
        b = self.copies
        w = self.small.source.dim
        q = self.small.dim
        coords = np.asarray(coords).reshape(b, q)
        out = np.zeros((self.target.dim, b * w), dtype=np.int64)
        for s in range(b):
            out[:, s * w:(s + 1) * w] = self.small.mat_of(coords[s])
        return out

    def coords_of(self, mat):
        b = self.copies
        w = self.small.source.dim
        return np.concatenate(
            [self.small.coords_of(mat[:, s * w:(s + 1) * w]) for s in range(b)])


class _BlockTargetHom(HomSpace):
    """Hom(M, V^b) = Hom(M, V)^b."""

    def _build(self):
        base, b = self.target.block
        self.copies = b
        self.small = hom_space(self.source, base)
        self.module = power_module(self.small.module, b,
                                   label=f"Hom({self.source.label},{self.target.label})")

    def mat_of(self, coords):
        b = self.copies
        v = self.small.target.dim
        q = self.small.dim
        coords = np.asarray(coords).reshape(b, q)
        out = np.zeros((b * v, self.source.dim), dtype=np.int64)
        for s in range(b):
            out[s * v:(s + 1) * v] = self.small.mat_of(coords[s])
        return out

    def coords_of(self, mat):
        b = self.copies
        v = self.small.target.dim
        return np.concatenate(
            [self.small.coords_of(mat[s * v:(s + 1) * v]) for s in range(b)])


def free_copies(module: Module) -> int | None:
    """Number of copies if the module is a canonical-basis free module (a
    power of the regular module, or the regular module itself), else None."""
    reg = regular_module(module.ring)
    if module.block is not None:
        base, b = module.block
        return b if base.fingerprint == reg.fingerprint else None
    if module.fingerprint == reg.fingerprint:
        return 1
    return None


def hom_space(M: Module, N: Module) -> HomSpace:
    key = (M.fingerprint, N.fingerprint)
    got = _homspace_cache.get(key)
    if got is not None:
        return got
    if free_copies(M) is not None:
        cls = _FreeSourceHom
    elif M.block is not None:
        cls = _BlockSourceHom
    elif N.block is not None:
        cls = _BlockTargetHom
    else:
        cls = _GenericHom
    hs = cls(M, N)
    _homspace_cache[key] = hs
    return hs


def hom_module(M: Module, N: Module) -> tuple[Module, list[ModuleHom]]:
    """Hom_R(M, N) as a module, with each basis vector interpreted as a map."""
    hs = hom_space(M, N)
    homs = []
    for l in range(hs.dim):
        homs.append(ModuleHom(M, N, hs.basis_mat(l), check=False))
    return hs.module, homs


def hom_functor_map(C: Module, f: ModuleHom, side: str = "covariant") -> ModuleHom:
    """Hom(C, f): Hom(C, src) -> Hom(C, dst) for covariant side,
    Hom(f, C): Hom(dst, C) -> Hom(src, C) for contravariant."""
    p = C.ring.field.p
    if side == "covariant":
        hs_src = hom_space(C, f.src)
        hs_dst = hom_space(C, f.dst)
        cols = []
        for l in range(hs_src.dim):
            cols.append(hs_dst.coords_of(_mul_arrays(f.mat, hs_src.basis_mat(l), p)))
    elif side == "contravariant":
        hs_src = hom_space(f.dst, C)
        hs_dst = hom_space(f.src, C)
        cols = []
        for l in range(hs_src.dim):
            cols.append(hs_dst.coords_of(_mul_arrays(hs_src.basis_mat(l), f.mat, p)))
    else:
        raise InputError(f"unknown side {side!r}")
    mat = np.stack(cols, axis=1) if cols else np.zeros((hs_dst.dim, 0), dtype=np.int64)
    return ModuleHom(hs_src.module, hs_dst.module, mat, check=False)


# -- tensor products ----------------------------------------------------------

_tensorspace_cache = _cache()


class TensorSpace:
    """M tensor_R N as a module plus the pure tensor map."""

    def __init__(self, left: Module, right: Module):
        self.left = left
        self.right = right
        self.ring = left.ring
        self.module: Module = None
        self._build()

    @property
    def dim(self) -> int:
        return self.module.dim

    def pure(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def pure_matrix(self) -> np.ndarray:
        """dim x (left.dim * right.dim), column i*right.dim+j = pure(e_i, e_j).
        Only sensible for small factors."""
        m, n = self.left.dim, self.right.dim
        out = np.zeros((self.dim, m * n), dtype=np.int64)
        eye_m = np.eye(m, dtype=np.int64)
        eye_n = np.eye(n, dtype=np.int64)
        for i in range(m):
            for j in range(n):
                out[:, i * n + j] = self.pure(eye_m[i], eye_n[j])
        return out


class _RightFreeTensor(TensorSpace):
    """M (x) R^b = M^b."""

    def _build(self):
        b = free_copies(self.right)
        self.copies = b
        self.module = power_module(self.left, b,
                                   label=f"{self.left.label}(x){self.right.label}")

    def pure(self, u, v):
        M = self.left
        b = self.copies
        d = self.ring.dim
        v = np.asarray(v).reshape(b, d)
        out = np.zeros((b, M.dim), dtype=np.int64)
        for s in range(b):
            if v[s].any():
                out[s] = M.act_element(v[s], np.asarray(u).reshape(-1, 1))[:, 0]
        return out.reshape(-1)


class _LeftFreeTensor(TensorSpace):
    """R^b (x) N = N^b."""

    def _build(self):
        b = free_copies(self.left)
        self.copies = b
        self.module = power_module(self.right, b,
                                   label=f"{self.left.label}(x){self.right.label}")

    def pure(self, u, v):
        N = self.right
        b = self.copies
        d = self.ring.dim
        u = np.asarray(u).reshape(b, d)
        out = np.zeros((b, N.dim), dtype=np.int64)
        for s in range(b):
            if u[s].any():
                out[s] = N.act_element(u[s], np.asarray(v).reshape(-1, 1))[:, 0]
        return out.reshape(-1)


class _BlockLeftTensor(TensorSpace):
    """W^b (x) N = (W (x) N)^b."""

    def _build(self):
        base, b = self.left.block
        self.copies = b
        self.small = tensor_space(base, self.right)
        self.module = power_module(self.small.module, b,
                                   label=f"{self.left.label}(x){self.right.label}")

    def pure(self, u, v):
        b = self.copies
        w = self.small.left.dim
        q = self.small.dim
        u = np.asarray(u).reshape(b, w)
        out = np.zeros((b, q), dtype=np.int64)
        for s in range(b):
            if u[s].any():
                out[s] = self.small.pure(u[s], v)
        return out.reshape(-1)


class _BlockRightTensor(TensorSpace):
    """M (x) V^b = (M (x) V)^b."""

    def _build(self):
        base, b = self.right.block
        self.copies = b
        self.small = tensor_space(self.left, base)
        self.module = power_module(self.small.module, b,
                                   label=f"{self.left.label}(x){self.right.label}")

    def pure(self, u, v):
        b = self.copies
        w = self.small.right.dim
        q = self.small.dim
        v = np.asarray(v).reshape(b, w)
        out = np.zeros((b, q), dtype=np.int64)
        for s in range(b):
            if v[s].any():
                out[s] = self.small.pure(u, v[s])
        return out.reshape(-1)


class _GenericTensor(TensorSpace):
    """Present the left factor, then M (x) N = coker(N^a -> N^g).

    With R^a -> R^g -> M -> 0 a presentation picking g minimal generators
    of M and a spanning set of the kernel, right-exactness of the tensor
    gives M (x) N as the cokernel of the induced map on N-blocks.
    """

    def _build(self):
        M, N = self.left, self.right
        p = self.ring.field.p
        if M.dim == 0 or N.dim == 0:
            self.module = zero_module(self.ring)
            self._Q = np.zeros((0, 0), dtype=np.int64)
            self._sec = np.zeros((M.dim, 0), dtype=np.int64)
            self._gens = np.zeros((M.dim, 0), dtype=np.int64)
            return
        gens = minimal_generators(M)
        g = gens.shape[1]
        cover = cover_matrix(M, gens)           # M.dim x g*d
        K = kernel_basis(Mat(self.ring.field, cover)).data   # (g*d) x a
        a = K.shape[1]
        d = self.ring.dim
        n = N.dim
        rel = np.zeros((g * n, a * n), dtype=np.int64)
        for t in range(a):
            for s in range(g):
                elem = K[s * d:(s + 1) * d, t]
                if elem.any():
                    rel[s * n:(s + 1) * n, t * n:(t + 1) * n] = N.element_matrix(elem)
        ambient = power_module(N, g)
        sq = _quotient_by_columns(ambient, rel, f"{M.label}(x){N.label}")
        self.module = sq.carrier
        self._Q = sq.map.mat                    # (dim) x (g*n)
        # section of the cover: cover @ sec = identity on M
        sec = solve(Mat(self.ring.field, cover), Mat(self.ring.field, np.eye(M.dim, dtype=np.int64)))
        assert sec is not None, "minimal cover is not surjective"
        self._sec = sec.data                    # (g*d) x M.dim
        self._gens = gens

    def pure(self, u, v):
        p = self.ring.field.p
        N = self.right
        d = self.ring.dim
        g = self._gens.shape[1]
        w = _mul_arrays(self._sec, np.asarray(u).reshape(-1, 1), p)[:, 0]
        emb = np.zeros((g, N.dim), dtype=np.int64)
        vcol = np.asarray(v).reshape(-1, 1)
        for s in range(g):
            elem = w[s * d:(s + 1) * d]
            if elem.any():
                emb[s] = N.act_element(elem, vcol)[:, 0]
        return _mul_arrays(self._Q, emb.reshape(-1, 1), p)[:, 0]


def tensor_space(M: Module, N: Module) -> TensorSpace:
    key = (M.fingerprint, N.fingerprint)
    got = _tensorspace_cache.get(key)
    if got is not None:
        return got
    if free_copies(N) is not None:
        cls = _RightFreeTensor
    elif free_copies(M) is not None:
        cls = _LeftFreeTensor
    elif M.block is not None:
        cls = _BlockLeftTensor
    elif N.block is not None:
        cls = _BlockRightTensor
    else:
        cls = _GenericTensor
    ts = cls(M, N)
    _tensorspace_cache[key] = ts
    return ts


def tensor_module(M: Module, N: Module) -> tuple[Module, TensorSpace]:
    ts = tensor_space(M, N)
    return ts.module, ts


def tensor_functor_map(C: Module, f: ModuleHom) -> ModuleHom:
    """C (x) f : C (x) src -> C (x) dst.  Small modules only: solves the
    defining relation kappa . pure_src = pure_dst . (id (x) f)."""
    p = C.ring.field.p
    ts_src = tensor_space(C, f.src)
    ts_dst = tensor_space(C, f.dst)
    P_src = ts_src.pure_matrix()                      # t1 x (c*m)
    P_dst = ts_dst.pure_matrix()                      # t2 x (c*n)
    idxf = np.kron(np.eye(C.dim, dtype=np.int64), f.mat)   # (c*n) x (c*m)
    rhs = _mul_arrays(P_dst, idxf, p)                 # t2 x (c*m)
    sol = solve(Mat(C.ring.field, P_src.T), Mat(C.ring.field, rhs.T))
    if sol is None:
        raise TheoremViolationError("tensor functor map is not well defined")
    return ModuleHom(ts_src.module, ts_dst.module, sol.data.T, check=False)


# -- the natural maps ---------------------------------------------------------


def evaluation_nu(C: Module, M: Module) -> ModuleHom:
    """nu: C (x) Hom(C, M) -> M, c (x) f -> f(c)."""
    p = C.ring.field.p
    hs = hom_space(C, M)
    ts = tensor_space(C, hs.module)
    c, h = C.dim, hs.dim
    beta = np.zeros((M.dim, c * h), dtype=np.int64)
    for l in range(h):
        bm = hs.basis_mat(l)           # M.dim x c
        beta[:, [i * h + l for i in range(c)]] = bm
    P = ts.pure_matrix()               # t x (c*h)
    sol = solve(Mat(C.ring.field, P.T), Mat(C.ring.field, beta.T))
    if sol is None:
        raise TheoremViolationError("evaluation does not factor through the tensor product")
    return ModuleHom(ts.module, M, sol.data.T, check=False)


def coevaluation_mu(C: Module, M: Module) -> ModuleHom:
    """mu: M -> Hom(C, C (x) M), m -> (c -> c (x) m)."""
    ts = tensor_space(C, M)
    hs = hom_space(C, ts.module)
    cols = np.zeros((hs.dim, M.dim), dtype=np.int64)
    eye_c = np.eye(C.dim, dtype=np.int64)
    eye_m = np.eye(M.dim, dtype=np.int64)
    for j in range(M.dim):
        hmat = np.zeros((ts.dim, C.dim), dtype=np.int64)
        for a in range(C.dim):
            hmat[:, a] = ts.pure(eye_c[a], eye_m[j])
        cols[:, j] = hs.coords_of(hmat)
    return ModuleHom(M, hs.module, cols, check=False)


def adjunction_iso(C: Module, M: Module, N: Module) -> ModuleHom:
    """Hom(C (x) M, N) -> Hom(M, Hom(C, N)), g -> (m -> (c -> g(c (x) m))).

    The classical tensor-hom bijection, as an explicit R-linear map between
    the constructed carriers.  Small modules only.
    """
    p = C.ring.field.p
    ts = tensor_space(C, M)
    hs_t = hom_space(ts.module, N)
    hs_cn = hom_space(C, N)
    hs_out = hom_space(M, hs_cn.module)
    P = ts.pure_matrix()                       # t x (C.dim * M.dim)
    cols = []
    for l in range(hs_t.dim):
        g = hs_t.basis_mat(l)                  # N.dim x t
        gp = _mul_arrays(g, P, p)              # N.dim x (C.dim * M.dim)
        ghat = np.zeros((hs_cn.dim, M.dim), dtype=np.int64)
        for j in range(M.dim):
            hmat = gp[:, [a * M.dim + j for a in range(C.dim)]]
            ghat[:, j] = hs_cn.coords_of(np.ascontiguousarray(hmat))
        cols.append(hs_out.coords_of(ghat))
    mat = (np.stack(cols, axis=1) if cols
           else np.zeros((hs_out.dim, 0), dtype=np.int64))
    return ModuleHom(hs_t.module, hs_out.module, mat, check=False)


def homothety_chi(R: Algebra, C: Module) -> ModuleHom:
    """chi: R -> Hom(C, C), r -> multiplication by r."""
    hs = hom_space(C, C)
    Rm = free_module(R, 1)
    d = R.dim
    cols = np.zeros((hs.dim, d), dtype=np.int64)
    for mu in range(d):
        e = np.zeros(d, dtype=np.int64)
        e[mu] = 1
        cols[:, mu] = hs.coords_of(C.element_matrix(e))
    return ModuleHom(Rm, hs.module, cols, check=False)
