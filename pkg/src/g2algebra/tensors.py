"""Exterior algebra on R^7 and the structure tensors phi, psi.

Forms are stored densely by strictly increasing index tuples (21 entries for
2-forms, 35 for 3- and 4-forms).  The public API uses 1-based indices so that
coefficients can be read off against the usual written form
``phi = e123 - e167 - e527 - e563 - e415 - e426 - e437``; storage is 0-based.

Integer inputs stay integer: every operation here preserves ``int64`` dtype
when all of its operands are integer-valued.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb

import numpy as np

from .reports import Check, IdentityReport

DIM = 7


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (0 if it has repeats)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def keys(k: int) -> tuple[tuple[int, ...], ...]:
    """0-based increasing index tuples of degree ``k``."""
    return tuple(itertools.combinations(range(DIM), k))


@lru_cache(maxsize=None)
def key_index(k: int) -> dict[tuple[int, ...], int]:
    return {key: n for n, key in enumerate(keys(k))}


@lru_cache(maxsize=None)
def _scatter(k: int):
    # (flat positions in the dense 7^k tensor, coefficient slot, sign) for
    # every permutation of every increasing key
    flat, slot, sign = [], [], []
    perms = list(itertools.permutations(range(k)))
    for n, key in enumerate(keys(k)):
        for p in perms:
            idx = tuple(key[q] for q in p)
            flat.append(np.ravel_multi_index(idx, (DIM,) * k) if k else 0)
            slot.append(n)
            sign.append(perm_sign(p))
    return np.array(flat, dtype=np.intp), np.array(slot, dtype=np.intp), np.array(sign, dtype=np.int64)


def _coerce(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype.kind in "biu":
        return arr.astype(np.int64)
    if arr.dtype.kind == "f":
        return arr.astype(np.float64)
    raise TypeError(f"unsupported coefficient dtype {arr.dtype}")


class Form:
    """A k-form on R^7 (0 <= k <= 7).

    Indexing takes 1-based index tuples and honours antisymmetry::

        >>> phi = standard_phi()
        >>> phi[4, 3, 7]
        -1
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs):
        if not 0 <= degree <= DIM:
            raise ValueError(f"invalid form degree {degree}")
        coeffs = _coerce(coeffs).reshape(-1)
        if coeffs.shape != (comb(DIM, degree),):
            raise ValueError(f"degree-{degree} form needs {comb(DIM, degree)} coefficients, got {coeffs.shape}")
        coeffs.setflags(write=False)
        self.degree = degree
        self.coeffs = coeffs

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, degree: int, dtype=np.int64) -> "Form":
        return cls(degree, np.zeros(comb(DIM, degree), dtype=dtype))

    @classmethod
    def from_terms(cls, degree: int, terms) -> "Form":
        """Build from ``(coefficient, (i1, ..., ik))`` pairs with 1-based, possibly unsorted indices."""
        values = [c for c, _ in terms]
        out = np.zeros(comb(DIM, degree), dtype=_coerce(values or [0]).dtype)
        index = key_index(degree)
        for c, idx in terms:
            idx0 = tuple(i - 1 for i in idx)
            if len(idx0) != degree or not all(0 <= i < DIM for i in idx0):
                raise ValueError(f"bad index tuple {idx} for a {degree}-form")
            s = perm_sign(idx0)
            if s:
                out[index[tuple(sorted(idx0))]] += s * c
        return cls(degree, out)

    @classmethod
    def from_tensor(cls, tensor) -> "Form":
        """Read the increasing-index entries of a dense antisymmetric tensor."""
        t = _coerce(tensor)
        k = t.ndim
        if t.shape != (DIM,) * k:
            raise ValueError(f"tensor must have shape {(DIM,) * k}")
        if k == 0:
            return cls(0, t.reshape(1))
        return cls(k, np.array([t[key] for key in keys(k)], dtype=t.dtype))

    @classmethod
    def vector(cls, v) -> "Form":
        return cls(1, v)

    # access ---------------------------------------------------------------
    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        if len(idx) != self.degree:
            raise IndexError(f"need {self.degree} indices")
        idx0 = tuple(i - 1 for i in idx)
        if not all(0 <= i < DIM for i in idx0):
            raise IndexError(f"indices are 1..{DIM}")
        s = perm_sign(idx0)
        if s == 0:
            return self.coeffs.dtype.type(0)
        return s * self.coeffs[key_index(self.degree)[tuple(sorted(idx0))]]

    def tensor(self) -> np.ndarray:
        """Dense fully antisymmetric array of shape ``(7,) * degree``."""
        k = self.degree
        if k == 0:
            return self.coeffs.reshape(())
        flat, slot, sign = _scatter(k)
        out = np.zeros(DIM**k, dtype=self.coeffs.dtype)
        out[flat] = sign * self.coeffs[slot]
        return out.reshape((DIM,) * k)

    def terms(self) -> list[tuple]:
        """Nonzero ``(coefficient, 1-based indices)`` pairs in storage order."""
        return [(c.item(), tuple(i + 1 for i in key)) for c, key in zip(self.coeffs, keys(self.degree)) if c != 0]

    @property
    def is_integer(self) -> bool:
        return self.coeffs.dtype.kind == "i"

    def norm(self) -> float:
        """Norm in which the ``e_I`` are orthonormal."""
        return float(np.sqrt(np.sum(self.coeffs.astype(float) ** 2)))

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "Form"):
        if not isinstance(other, Form) or other.degree != self.degree:
            raise ValueError("forms must have equal degree")

    def __add__(self, other):
        self._check(other)
        return Form(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return Form(self.degree, self.coeffs - other.coeffs)

    def __neg__(self):
        return Form(self.degree, -self.coeffs)

    def __mul__(self, scalar):
        return Form(self.degree, self.coeffs * scalar)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Form) and other.degree == self.degree and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.degree, self.coeffs.tobytes()))

    def allclose(self, other: "Form", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol))

    def __repr__(self):
        body = " ".join(f"{c:+g}e{''.join(map(str, idx))}" for c, idx in self.terms()) or "0"
        return f"Form{self.degree}({body})"


def e(i: int) -> np.ndarray:
    """Standard basis vector e_i (1-based) as an integer array."""
    if not 1 <= i <= DIM:
        raise ValueError("basis index must be in 1..7")
    v = np.zeros(DIM, dtype=np.int64)
    v[i - 1] = 1
    return v


PHI_TERMS = [(1, (1, 2, 3)), (-1, (1, 6, 7)), (-1, (5, 2, 7)), (-1, (5, 6, 3)),
             (-1, (4, 1, 5)), (-1, (4, 2, 6)), (-1, (4, 3, 7))]
PSI_TERMS = [(1, (4, 5, 6, 7)), (-1, (4, 5, 2, 3)), (-1, (4, 1, 6, 3)), (-1, (4, 1, 2, 7)),
             (-1, (2, 6, 3, 7)), (-1, (1, 5, 3, 7)), (-1, (1, 5, 2, 6))]


@lru_cache(maxsize=None)
def standard_phi() -> Form:
    """The associative 3-form in the standard basis."""
    return Form.from_terms(3, PHI_TERMS)


@lru_cache(maxsize=None)
def standard_psi() -> Form:
    """The coassociative 4-form in the standard basis (equal to the Hodge star of phi)."""
    return Form.from_terms(4, PSI_TERMS)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


PHI = _readonly(standard_phi().tensor())
PSI = _readonly(standard_psi().tensor())
DELTA = _readonly(np.eye(DIM, dtype=np.int64))


def hodge_star(form: Form) -> Form:
    """Hodge star for the Euclidean metric and orientation e1 ^ ... ^ e7.

    ``e_I`` maps to ``sign(I, I^c) e_{I^c}`` so that ``a ^ *a = |a|^2 vol``.
    """
    if not isinstance(form, Form):
        raise TypeError("hodge_star takes a Form")
    k = form.degree
    out = np.zeros(comb(DIM, DIM - k), dtype=form.coeffs.dtype)
    index = key_index(DIM - k)
    for c, key in zip(form.coeffs, keys(k)):
        if c:
            comp = tuple(i for i in range(DIM) if i not in key)
            out[index[comp]] += perm_sign(key + comp) * c
    return Form(DIM - k, out)


def _as_form(x) -> Form:
    if isinstance(x, Form):
        return x
    arr = np.asarray(x)
    if arr.shape == (DIM,):
        return Form(1, arr)
    if arr.ndim == 0:
        return Form(0, arr.reshape(1))
    return Form.from_tensor(arr)


def wedge(a, b) -> Form:
    """Exterior product; vectors and dense tensors are accepted and converted.

    With this convention ``(u ^ v)(x, y) = <u,x><v,y> - <u,y><v,x>``.
    """
    a, b = _as_form(a), _as_form(b)
    j, k = a.degree, b.degree
    if j + k > DIM:
        raise ValueError(f"degree overflow: {j} + {k} > {DIM}")
    dtype = np.result_type(a.coeffs.dtype, b.coeffs.dtype)
    out = np.zeros(comb(DIM, j + k), dtype=dtype)
    index = key_index(j + k)
    ka, kb = keys(j), keys(k)
    for ia in np.flatnonzero(a.coeffs):
        for ib in np.flatnonzero(b.coeffs):
            joined = ka[ia] + kb[ib]
            s = perm_sign(joined)
            if s:
                out[index[tuple(sorted(joined))]] += s * a.coeffs[ia] * b.coeffs[ib]
    return Form(j + k, out)


def interior(v, form) -> Form:
    """Contraction in the first slot: ``(v _| a)(x2, ..., xk) = a(v, x2, ..., xk)``."""
    form = _as_form(form)
    if form.degree == 0:
        raise ValueError("cannot contract a 0-form")
    v = _coerce(v)
    if v.shape != (DIM,):
        raise ValueError("interior product needs a 7-vector")
    return Form.from_tensor(np.tensordot(v, form.tensor(), axes=(0, 0)))


# --- contraction identities -------------------------------------------------

def _identity_residuals(phi: np.ndarray, psi: np.ndarray):
    d = DELTA
    es = np.einsum
    fam = {}
    fam["phi-phi single"] = (
        es("ijp,abp->ijab", phi, phi)
        - (es("ia,jb->ijab", d, d) - es("ib,ja->ijab", d, d) - psi),
        "phi_ijp phi_abp = d_ia d_jb - d_ib d_ja - psi_ijab",
    )
    fam["phi-psi single"] = (
        es("ijp,abcp->ijabc", phi, psi)
        - (es("ia,jbc->ijabc", d, phi) + es("ib,ajc->ijabc", d, phi) + es("ic,abj->ijabc", d, phi)
           - es("ja,ibc->ijabc", d, phi) - es("jb,aic->ijabc", d, phi) - es("jc,abi->ijabc", d, phi)),
        "phi_ijp psi_abcp = d_ia phi_jbc + ... - d_jc phi_abi",
    )
    fam["phi-psi double"] = (
        es("ipq,abpq->iab", phi, psi) + 4 * phi,
        "phi_ipq psi_abpq = -4 phi_iab",
    )
    ddd = lambda s: es(s, d, d, d)
    fam["psi-psi single"] = (
        es("ijkp,abcp->ijkabc", psi, psi)
        - (- es("ajk,ibc->ijkabc", phi, phi) - es("iak,jbc->ijkabc", phi, phi) - es("ija,kbc->ijkabc", phi, phi)
           + ddd("ia,jb,kc->ijkabc") + ddd("ib,jc,ka->ijkabc") + ddd("ic,ja,kb->ijkabc")
           - ddd("ia,jc,kb->ijkabc") - ddd("ib,ja,kc->ijkabc") - ddd("ic,jb,ka->ijkabc")
           - es("ia,jkbc->ijkabc", d, psi) - es("ja,kibc->ijkabc", d, psi) - es("ka,ijbc->ijkabc", d, psi)
           + es("ab,ijkc->ijkabc", d, psi) - es("ac,ijkb->ijkabc", d, psi)),
        "psi_ijkp psi_abcp = -phi phi ... - d_ac psi_ijkb",
    )
    fam["psi-psi double"] = (
        es("ijpq,abpq->ijab", psi, psi)
        - (4 * es("ia,jb->ijab", d, d) - 4 * es("ib,ja->ijab", d, d) - 2 * psi),
        "psi_ijpq psi_abpq = 4 d_ia d_jb - 4 d_ib d_ja - 2 psi_ijab",
    )
    return fam


ANCHORS = {
    "phi-phi single": "fundamental identity phi.phi",
    "phi-psi single": "phi.psi one contraction",
    "phi-psi double": "phi.psi two contractions",
    "psi-psi single": "psi.psi one contraction",
    "psi-psi double": "psi.psi two contractions",
}


def verify_contraction_identities(phi: Form | None = None, psi: Form | None = None) -> IdentityReport:
    """Check the five phi/psi contraction identities over every free-index tuple.

    Runs in integer arithmetic.  Passing a modified ``phi`` or ``psi`` (e.g. a
    flipped sign) is how the mutation tests provoke a failure; the witness is
    the first offending 1-based index tuple in lexicographic order.
    """
    phi = standard_phi() if phi is None else phi
    psi = standard_psi() if psi is None else psi
    if not (phi.is_integer and psi.is_integer):
        raise TypeError("identity verification requires integer-valued tensors")
    report = IdentityReport("contraction identities")
    for name, (res, formula) in _identity_residuals(phi.tensor(), psi.tensor()).items():
        bad = np.argwhere(res != 0)
        witness = tuple(int(i) + 1 for i in bad[0]) if len(bad) else None
        report.add(Check(
            name=name,
            anchor=ANCHORS[name],
            passed=witness is None,
            deviation=float(np.abs(res).max()),
            count=int(res.size),
            witness=witness,
            detail=formula if witness is not None else "",
        ))
    return report
