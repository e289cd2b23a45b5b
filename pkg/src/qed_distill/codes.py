"""Stabilizer codes in the binary symplectic picture.

Pauli operators are stored as a pair of bit vectors ``(x, z)``; ``Y`` on a
qubit is ``x=1, z=1``.  Phases are never tracked: every question asked of a
code here (syndrome, stabilizer membership, logical class) is phase-free.
"""

from __future__ import annotations

import csv
import io
import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

BASES = ("X", "Y", "Z")
_PAULI_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_PAULI = {v: k for k, v in _PAULI_BITS.items()}


class CatalogError(ValueError):
    """Malformed or invalid code catalog."""


@dataclass(frozen=True)
class PauliOp:
    """Phase-free n-qubit Pauli operator."""

    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        if len(self.x) != len(self.z):
            raise ValueError("x and z parts must have equal length")
        if len(self.x) < 1:
            raise ValueError("a Pauli operator acts on at least one qubit")
        object.__setattr__(self, "x", tuple(int(b) & 1 for b in self.x))
        object.__setattr__(self, "z", tuple(int(b) & 1 for b in self.z))

    @classmethod
    def from_string(cls, s: str) -> "PauliOp":
        s = s.strip().upper()
        try:
            bits = [_PAULI_BITS[c] for c in s]
        except KeyError as exc:
            raise ValueError(f"not a Pauli string: {s!r}") from exc
        return cls(tuple(b[0] for b in bits), tuple(b[1] for b in bits))

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls((0,) * n, (0,) * n)

    @classmethod
    def single(cls, n: int, qubit: int, pauli: str) -> "PauliOp":
        x = [0] * n
        z = [0] * n
        x[qubit], z[qubit] = _PAULI_BITS[pauli]
        return cls(tuple(x), tuple(z))

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        if other.n != self.n:
            raise ValueError("length mismatch")
        return PauliOp(
            tuple(a ^ b for a, b in zip(self.x, other.x)),
            tuple(a ^ b for a, b in zip(self.z, other.z)),
        )

    def symplectic(self, other: "PauliOp") -> int:
        """0 if the operators commute, 1 if they anticommute."""
        if other.n != self.n:
            raise ValueError("length mismatch")
        s = 0
        for a, b, c, d in zip(self.x, self.z, other.x, other.z):
            s ^= (a & d) ^ (b & c)
        return s

    def commutes_with(self, other: "PauliOp") -> bool:
        return self.symplectic(other) == 0

    def relabel(self, mapping: dict[str, str]) -> "PauliOp":
        """Apply a qubit-wise permutation of {X, Y, Z}."""
        return PauliOp.from_string("".join(mapping.get(c, c) for c in str(self)))

    def as_vector(self) -> np.ndarray:
        return np.array(self.x + self.z, dtype=np.uint8)

    def __str__(self) -> str:
        return "".join(_BITS_PAULI[(a, b)] for a, b in zip(self.x, self.z))


def gf2_rank(m: np.ndarray) -> int:
    a = np.array(m, dtype=np.uint8) & 1
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, c]), None)
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        for r in range(rows):
            if r != rank and a[r, c]:
                a[r] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    d: int
    stabilizers: tuple[PauliOp, ...]
    logical_x: tuple[PauliOp, ...]
    logical_z: tuple[PauliOp, ...]
    name: str = ""

    def __post_init__(self):
        ops = self.stabilizers + self.logical_x + self.logical_z
        if any(op.n != self.n for op in ops):
            raise ValueError("operator length does not match n")
        if len(self.stabilizers) + self.k != self.n:
            raise ValueError("need n - k stabilizer generators")
        if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
            raise ValueError("need k logical X and k logical Z operators")

    @property
    def r(self) -> int:
        return self.n - self.k

    # Matrix views, rows are operators, columns qubits.
    @cached_property
    def sx(self) -> np.ndarray:
        return _rows(self.stabilizers, "x", self.n)

    @cached_property
    def sz(self) -> np.ndarray:
        return _rows(self.stabilizers, "z", self.n)

    @cached_property
    def lx(self) -> np.ndarray:
        return _rows(self.logical_x, "x", self.n)

    @cached_property
    def lxz(self) -> np.ndarray:
        return _rows(self.logical_x, "z", self.n)

    @cached_property
    def lz(self) -> np.ndarray:
        return _rows(self.logical_z, "x", self.n)

    @cached_property
    def lzz(self) -> np.ndarray:
        return _rows(self.logical_z, "z", self.n)

    def check_matrix(self) -> np.ndarray:
        return np.hstack([self.sx, self.sz])

    def validate(self) -> None:
        """Raise ValueError unless all symplectic conditions hold."""
        for a, b in itertools.combinations(self.stabilizers, 2):
            if not a.commutes_with(b):
                raise ValueError(f"stabilizers {a} and {b} anticommute")
        if gf2_rank(self.check_matrix()) != self.r:
            raise ValueError("stabilizer generators are not independent")
        for i, lx in enumerate(self.logical_x):
            for s in self.stabilizers:
                if not lx.commutes_with(s) or not self.logical_z[i].commutes_with(s):
                    raise ValueError(f"logical pair {i} does not commute with {s}")
            for j, lz in enumerate(self.logical_z):
                if lx.symplectic(lz) != int(i == j):
                    raise ValueError(f"logical X{i} / Z{j} commutation is wrong")
            for j in range(i + 1, self.k):
                if not lx.commutes_with(self.logical_x[j]):
                    raise ValueError("logical X operators must commute")
                if not self.logical_z[i].commutes_with(self.logical_z[j]):
                    raise ValueError("logical Z operators must commute")

    def relabel(self, mapping: dict[str, str], name: str = "") -> "StabilizerCode":
        return StabilizerCode(
            self.n,
            self.k,
            self.d,
            tuple(s.relabel(mapping) for s in self.stabilizers),
            tuple(o.relabel(mapping) for o in self.logical_x),
            tuple(o.relabel(mapping) for o in self.logical_z),
            name or self.name,
        )

    # Vectorised kernels used by the simulator.  ``x`` and ``z`` have shape
    # (..., n) with 0/1 entries.
    def syndrome_bits(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        return ((x @ self.sz.T.astype(np.int64)) + (z @ self.sx.T.astype(np.int64))) & 1

    def logical_bits(self, x: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Logical (x, z) components of errors with trivial syndrome."""
        # X-component of logical j <-> anticommutes with logical Z_j
        lx = ((x @ self.lzz.T.astype(np.int64)) + (z @ self.lz.T.astype(np.int64))) & 1
        lz = ((x @ self.lxz.T.astype(np.int64)) + (z @ self.lx.T.astype(np.int64))) & 1
        return lx, lz


def _rows(ops: Sequence[PauliOp], part: str, n: int) -> np.ndarray:
    if not ops:
        return np.zeros((0, n), dtype=np.uint8)
    return np.array([getattr(op, part) for op in ops], dtype=np.uint8)


def parity_code(n: int) -> StabilizerCode:
    """The [[n, n-2, 2]] code with checks X^n and Z^n.

    Qubit 0 carries the X-type check and qubit 1 the Z-type check; qubits
    2..n-1 are the logical positions, with X_j = X_1 X_j and Z_j = Z_0 Z_j.
    """
    if n < 4 or n % 2:
        raise ValueError(f"parity code needs even n >= 4, got {n}")
    stabs = (PauliOp.from_string("X" * n), PauliOp.from_string("Z" * n))
    lx = []
    lz = []
    for j in range(2, n):
        x = [0] * n
        x[1] = x[j] = 1
        lx.append(PauliOp(tuple(x), (0,) * n))
        z = [0] * n
        z[0] = z[j] = 1
        lz.append(PauliOp((0,) * n, tuple(z)))
    return StabilizerCode(n, n - 2, 2, stabs, tuple(lx), tuple(lz), f"parity({n})")


# Z <-> X and Z <-> Y swaps take the Z-basis repetition code to the other bases.
_BASIS_MAP = {
    "Z": {},
    "X": {"X": "Z", "Z": "X"},
    "Y": {"Y": "Z", "Z": "Y"},
}


def repetition_code(n: int, basis: str = "Z") -> StabilizerCode:
    if n < 2:
        raise ValueError(f"repetition code needs n >= 2, got {n}")
    basis = basis.upper()
    if basis not in BASES:
        raise ValueError(f"basis must be one of X, Y, Z, got {basis!r}")
    stabs = []
    for i in range(n - 1):
        z = [0] * n
        z[i] = z[i + 1] = 1
        stabs.append(PauliOp((0,) * n, tuple(z)))
    code = StabilizerCode(
        n,
        1,
        n,
        tuple(stabs),
        (PauliOp.from_string("X" * n),),
        (PauliOp.single(n, 0, "Z"),),
        f"repetition({n},{basis})",
    )
    if basis == "Z":
        return code
    code = code.relabel(_BASIS_MAP[basis])
    # Re-pick the logical pair within the relabeled logical group so that an
    # undetected single-qubit P on qubit 0 reads as logical P, matching the
    # physical output frame used by channels.repetition_step.
    (lx,), (lz,) = code.logical_x, code.logical_z
    if basis == "X":
        lx, lz = lz, lx
    else:
        lz = lz * lx
    return StabilizerCode(n, 1, n, code.stabilizers, (lx,), (lz,), code.name)


def syndrome(code: StabilizerCode, e: PauliOp) -> tuple[int, ...]:
    if e.n != code.n:
        raise ValueError(f"error acts on {e.n} qubits, code has {code.n}")
    return tuple(e.symplectic(s) for s in code.stabilizers)


def logical_effect(code: StabilizerCode, e: PauliOp) -> str:
    """Logical Pauli implemented by an undetected error, one letter per logical qubit."""
    if any(syndrome(code, e)):
        raise ValueError("error has a nontrivial syndrome")
    out = []
    for lx, lz in zip(code.logical_x, code.logical_z):
        out.append(_BITS_PAULI[(e.symplectic(lz), e.symplectic(lx))])
    return "".join(out)


# ---------------------------------------------------------------------------
# Declarative code identities and the catalog.

KINDS = ("repetition", "parity", "hamming", "catalog")
_KIND_ORDER = {k: i for i, k in enumerate(KINDS)}


@dataclass(frozen=True)
class CodeSpec:
    kind: str
    n: int
    k: int
    d: int
    basis: str | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown code kind {self.kind!r}")
        if self.kind == "repetition":
            if self.n < 2 or self.k != 1 or self.d != self.n:
                raise ValueError(f"invalid repetition code [{self.n},{self.k},{self.d}]")
            if self.basis not in BASES:
                raise ValueError(f"repetition code needs a basis, got {self.basis!r}")
        else:
            if self.basis is not None:
                raise ValueError("only repetition codes carry a basis")
            if not 1 <= self.k < self.n:
                raise ValueError(f"need 1 <= k < n, got [[{self.n},{self.k},{self.d}]]")
            if self.d < 2 or self.d > self.n:
                raise ValueError(f"need 2 <= d <= n, got [[{self.n},{self.k},{self.d}]]")
        if self.kind == "parity" and (self.n % 2 or self.n < 4 or self.k != self.n - 2 or self.d != 2):
            raise ValueError(f"invalid parity code [[{self.n},{self.k},{self.d}]]")
        if self.kind == "hamming":
            r = self.n.bit_length() - 1
            if self.n != 2**r or r < 3 or self.k != self.n - r - 2 or self.d != 3:
                raise ValueError(f"invalid quantum Hamming code [[{self.n},{self.k},{self.d}]]")

    @classmethod
    def repetition(cls, n: int, basis: str) -> "CodeSpec":
        return cls("repetition", n, 1, n, basis.upper())

    @classmethod
    def parity(cls, n: int) -> "CodeSpec":
        return cls("parity", n, n - 2, 2)

    @classmethod
    def hamming(cls, r: int) -> "CodeSpec":
        return cls("hamming", 2**r, 2**r - r - 2, 3)

    @classmethod
    def catalog(cls, n: int, k: int, d: int, label: str = "") -> "CodeSpec":
        return cls("catalog", n, k, d, None, label)

    @property
    def is_classical(self) -> bool:
        return self.kind == "repetition"

    @property
    def simulable(self) -> bool:
        return self.kind in ("repetition", "parity")

    @property
    def token(self) -> str:
        """Compact name, also the sequence-grammar token for this code."""
        if self.is_classical:
            return f"r{self.n}{self.basis}"
        return f"q{self.n}.{self.k}.{self.d}"

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.n, self.k, self.d)

    def sort_key(self) -> tuple:
        """Canonical search order: classical codes by n, then quantum by (n, -k)."""
        if self.is_classical:
            return (0, self.n, BASES.index(self.basis), 0, 0, "")
        return (1, self.n, -self.k, -self.d, _KIND_ORDER[self.kind], self.label)

    def to_stabilizer_code(self) -> StabilizerCode:
        if self.kind == "repetition":
            return repetition_code(self.n, self.basis)
        if self.kind == "parity":
            return parity_code(self.n)
        raise ValueError(f"{self.token} ({self.kind}) carries parameters only and cannot be simulated")

    def __str__(self) -> str:
        return self.token


def code_from_params(n: int, k: int, d: int, label: str = "") -> CodeSpec:
    """Most specific kind matching the parameters."""
    if n % 2 == 0 and n >= 4 and k == n - 2 and d == 2:
        return CodeSpec.parity(n)
    r = n.bit_length() - 1
    if n == 2**r and r >= 3 and k == n - r - 2 and d == 3:
        return CodeSpec.hamming(r)
    return CodeSpec.catalog(n, k, d, label)


_TOKEN = re.compile(r"^(?:r(\d+)([xyz])|q(\d+)\.(\d+)\.(\d+))$", re.IGNORECASE)


def parse_sequence(text: str) -> list[CodeSpec]:
    """Parse ``"r3X,r2Y,q4.2.2"`` style sequences.

    Raises ValueError naming the offending token and its character offset.
    """
    if text is None or not text.strip():
        return []
    out = []
    pos = 0
    for raw in text.split(","):
        tok = raw.strip()
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse code token {tok!r} at position {pos}")
        try:
            if m.group(1):
                out.append(CodeSpec.repetition(int(m.group(1)), m.group(2)))
            else:
                out.append(code_from_params(int(m.group(3)), int(m.group(4)), int(m.group(5))))
        except ValueError as exc:
            raise ValueError(f"invalid code {tok!r} at position {pos}: {exc}") from exc
        pos += len(raw) + 1
    return out


def format_sequence(seq: Iterable[CodeSpec]) -> str:
    return ",".join(c.token for c in seq)


def check_ordering(seq: Sequence[CodeSpec]) -> None:
    """Classical codes may not follow a quantum code."""
    seen_quantum = None
    for i, c in enumerate(seq):
        if c.is_classical and seen_quantum is not None:
            raise ValueError(
                f"classical code {c.token} at level {i + 1} follows quantum code {seen_quantum}"
            )
        if not c.is_classical and seen_quantum is None:
            seen_quantum = c.token


@dataclass(frozen=True)
class CodeCatalog:
    entries: tuple[CodeSpec, ...]
    provenance: str = "builtin"
    _keys: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self):
        keys = set()
        for c in self.entries:
            key = (c.kind, c.n, c.k, c.d, c.basis)
            if key in keys:
                raise CatalogError(f"duplicate catalog entry {c.token} ({c.kind})")
            keys.add(key)
        object.__setattr__(self, "_keys", frozenset(keys))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, c: CodeSpec) -> bool:
        return (c.kind, c.n, c.k, c.d, c.basis) in self._keys

    def sorted(self) -> list[CodeSpec]:
        return sorted(self.entries, key=CodeSpec.sort_key)


def generated_families() -> list[CodeSpec]:
    """Parity n <= 40, quantum Hamming r <= 6 and repetition n <= 12 in X, Y, Z."""
    out = [CodeSpec.parity(n) for n in range(4, 41, 2)]
    out += [CodeSpec.hamming(r) for r in range(3, 7)]
    out += [CodeSpec.repetition(n, b) for n in range(2, 13) for b in BASES]
    return out


def parse_catalog_text(text: str, source: str = "<string>") -> list[CodeSpec]:
    entries = []
    for lineno, line in enumerate(io.StringIO(text, newline=None), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = next(csv.reader([line]))
        fields = [f.strip() for f in fields]
        if len(fields) not in (3, 4):
            raise CatalogError(f"{source}:{lineno}: expected n,k,d[,label], got {line!r}")
        try:
            n, k, d = (int(f) for f in fields[:3])
        except ValueError:
            raise CatalogError(f"{source}:{lineno}: n, k, d must be integers, got {line!r}") from None
        label = fields[3] if len(fields) == 4 else ""
        if not (1 <= k < n) or not (2 <= d <= n):
            raise CatalogError(f"{source}:{lineno}: invalid parameters [[{n},{k},{d}]]")
        entries.append(CodeSpec.catalog(n, k, d, label))
    return entries


def builtin_catalog_text() -> str:
    return resources.files("qed_distill").joinpath("data/builtin_catalog.csv").read_text("utf-8")


def load_catalog(path: str | Path | None = None, *, builtin: bool = True, generated: bool = True) -> CodeCatalog:
    """Load a catalog CSV.

    ``path=None`` reads only the bundled table (when ``builtin``).  The generated
    parity / Hamming / repetition families are added unless ``generated`` is
    false; entries duplicating an earlier one are dropped.
    """
    entries: list[CodeSpec] = []
    sources = []
    if generated:
        entries += generated_families()
    if builtin:
        entries += parse_catalog_text(builtin_catalog_text(), "builtin_catalog.csv")
        sources.append("builtin")
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        entries += parse_catalog_text(text, str(path))
        sources.append(str(path))
    unique = {}
    for c in entries:
        unique.setdefault((c.kind, c.n, c.k, c.d, c.basis), c)
    return CodeCatalog(tuple(unique.values()), "+".join(sources) or "generated")
