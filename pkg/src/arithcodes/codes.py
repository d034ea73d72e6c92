"""Matrix codes Theta(S) in (M_d(F_q0))^s with the sum-rank and column Hamming metrics."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exactnum.finitefield import FiniteField


class MapMismatch(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class TooFewWords(ValueError):
    pass


class Infeasible(ValueError):
    pass


Block = tuple  # d x d tuple of tuples of field elements (int encodings)
Codeword = tuple  # tuple of s blocks


@dataclass
class Code:
    words: tuple
    s: int
    d: int
    field: FiniteField
    metadata: dict = field(default_factory=dict)
    collisions: list = field(default_factory=list)

    @property
    def q0(self) -> int:
        return self.field.q

    @property
    def N(self) -> int:
        return self.d * self.s

    @property
    def q(self) -> int:
        return self.q0**self.d

    def __len__(self):
        return len(self.words)

    @property
    def rate(self) -> float:
        return math.log(len(self.words)) / (self.N * math.log(self.q)) if self.words else 0.0

    @cached_property
    def array(self) -> np.ndarray:
        """Words as an int array of shape (|C|, s, d, d)."""
        return np.array(self.words, dtype=np.int64).reshape(len(self.words), self.s, self.d, self.d)

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "d": self.d,
            "p": self.field.p,
            "f": self.field.f,
            "modulus": list(self.field.modulus),
            "N": self.N,
            "q": self.q,
            "words": [[[list(row) for row in blk] for blk in w] for w in self.words],
            "collisions": [list(c) for c in self.collisions],
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Code":
        ff = FiniteField(data["p"], data["f"], tuple(data["modulus"]))
        words = tuple(tuple(tuple(tuple(row) for row in blk) for blk in w) for w in data["words"])
        return cls(words, data["s"], data["d"], ff, data.get("metadata", {}),
                   [tuple(c) for c in data.get("collisions", [])])


def theta(elements, maps, metadata: dict | None = None) -> Code:
    """One codeword per element: the tuple of its images under the residue maps.

    ``elements`` are AlgElems or integer coordinate rows on the order basis.
    Repeated codewords are kept once; the colliding input pairs are recorded.
    """
    maps = list(maps)
    if not maps:
        raise MapMismatch("need at least one residue map")
    fields = {(m.field.p, m.field.f, m.field.modulus) for m in maps}
    if len(fields) != 1:
        raise MapMismatch("residue maps do not share one alphabet field")
    d = 2 if hasattr(maps[0], "quotient_images") else 1
    if any((2 if hasattr(m, "quotient_images") else 1) != d for m in maps):
        raise MapMismatch("residue maps have different matrix sizes")
    ff = maps[0].field
    elements = list(elements)
    coords = []
    for x in elements:
        if hasattr(x, "comps"):
            coords.append([c for c in maps[0].quotient.order.coords_of(x)])
        else:
            coords.append(list(x))
    blocks_per_map = []
    for m in maps:
        if d == 2 and ff.f == 1 and all(all(getattr(c, "denominator", 1) == 1 for c in row) for row in coords):
            arr = m.images_batch(np.array([[int(c) for c in row] for row in coords], dtype=np.int64).reshape(-1, m.quotient.order.rank))
            blocks_per_map.append([tuple(tuple(int(v) for v in r) for r in M) for M in arr.tolist()])
        elif d == 2:
            blocks_per_map.append([m.image_coords(row) for row in coords])
        else:
            blocks_per_map.append([((m.image_coords(row),),) for row in coords])
    seen: dict = {}
    words = []
    collisions = []
    for k in range(len(coords)):
        w = tuple(bpm[k] for bpm in blocks_per_map)
        if w in seen:
            collisions.append((seen[w], k))
        else:
            seen[w] = k
            words.append(w)
    meta = dict(metadata or {})
    meta.setdefault("source_size", len(coords))
    return Code(tuple(words), len(maps), d, ff, meta, collisions)


def _rank(ff: FiniteField, M) -> int:
    return ff.rank([list(r) for r in M])


def _sub_block(ff: FiniteField, X, Y):
    return tuple(tuple(ff.sub(a, b) for a, b in zip(rx, ry)) for rx, ry in zip(X, Y))


def distances(x, y, ff: FiniteField) -> tuple[int, int]:
    """(sum-rank distance, Hamming distance of the column expansion)."""
    if len(x) != len(y) or any(len(bx) != len(by) or any(len(r) != len(s) for r, s in zip(bx, by))
                               for bx, by in zip(x, y)):
        raise ShapeMismatch("codewords have different shapes")
    dr = dh = 0
    for bx, by in zip(x, y):
        diff = _sub_block(ff, bx, by)
        dr += _rank(ff, diff)
        dcols = len(diff[0])
        dh += sum(1 for c in range(dcols) if any(diff[r][c] for r in range(len(diff))))
    return dr, dh


def _field_tables(ff: FiniteField):
    q = ff.q
    sub = np.array([[ff.sub(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    mul = np.array([[ff.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    return sub, mul


def _pair_distances(W: np.ndarray, i: int, js: np.ndarray, ff: FiniteField, tables) -> tuple[np.ndarray, np.ndarray]:
    """d_R and d_H between word i and words js (vectorised for d <= 2)."""
    d = W.shape[2]
    if ff.f == 1:
        p = ff.p
        D = (W[js] - W[i]) % p
    else:
        sub, _ = tables
        D = sub[W[js], W[i]]
    nonzero_cols = (D != 0).any(axis=2)  # (k, s, d) over columns
    dh = nonzero_cols.sum(axis=(1, 2))
    if d == 1:
        dr = (D[:, :, 0, 0] != 0).sum(axis=1)
        return dr, dh
    if ff.f == 1:
        det = (D[:, :, 0, 0] * D[:, :, 1, 1] - D[:, :, 0, 1] * D[:, :, 1, 0]) % ff.p
    else:
        sub, mul = tables
        det = sub[mul[D[:, :, 0, 0], D[:, :, 1, 1]], mul[D[:, :, 0, 1], D[:, :, 1, 0]]]
    nz = (D != 0).any(axis=(2, 3))
    rank = np.where(det != 0, 2, np.where(nz, 1, 0))
    return rank.sum(axis=1), dh


@dataclass
class DistanceReport:
    d_R: int
    d_H: int
    rate: float
    bound_dR: float | None
    witnesses: tuple
    size: int
    N: int
    q: int

    @property
    def bound_vacuous(self) -> bool:
        return self.bound_dR is not None and self.bound_dR <= 0

    @property
    def meets_bound(self) -> bool | None:
        return None if self.bound_dR is None else self.d_R >= self.bound_dR

    def to_dict(self) -> dict:
        out = {
            "d_R": self.d_R,
            "d_H": self.d_H,
            "rate": self.rate,
            "size": self.size,
            "N": self.N,
            "q": self.q,
            "witnesses": list(self.witnesses),
            "bound_dR": self.bound_dR,
            "bound_status": describe_bound(self.bound_dR),
            "meets_bound": self.meets_bound,
        }
        return out


def describe_bound(v: float | None) -> str:
    if v is None:
        return "none"
    return "vacuous (<= 0)" if v <= 0 else f"{v:.6g}"


def min_distance(C: Code, bound: float | None = None) -> DistanceReport:
    """Exact all-pairs minimum sum-rank distance, with the column-code Hamming distance."""
    K = len(C.words)
    if K < 2:
        raise TooFewWords("minimum distance needs at least two codewords")
    W = C.array
    tables = _field_tables(C.field) if C.field.f > 1 else None
    best_r, best_h, wit = None, None, None
    for i in range(K - 1):
        js = np.arange(i + 1, K)
        dr, dh = _pair_distances(W, i, js, C.field, tables)
        k = int(np.argmin(dr))
        if best_r is None or dr[k] < best_r:
            best_r, wit = int(dr[k]), (i, int(js[k]))
        mh = int(dh.min())
        if best_h is None or mh < best_h:
            best_h = mh
    return DistanceReport(best_r, best_h, C.rate, bound, wit, K, C.N, C.q)


def pairwise_csv(C: Code) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "d_R", "d_H"])
    W = C.array
    tables = _field_tables(C.field) if C.field.f > 1 else None
    for i in range(len(C.words) - 1):
        js = np.arange(i + 1, len(C.words))
        dr, dh = _pair_distances(W, i, js, C.field, tables)
        for j, a, b in zip(js.tolist(), dr.tolist(), dh.tolist()):
            w.writerow([i, j, a, b])
    return buf.getvalue()


@dataclass
class ColumnCode:
    """Columns of each block as symbols of the alphabet F_q0^d."""

    words: tuple
    N: int
    d: int
    q0: int

    def __len__(self):
        return len(self.words)

    @property
    def rate(self) -> float:
        return math.log(len(self.words)) / (self.N * self.d * math.log(self.q0)) if self.words else 0.0

    def min_hamming(self) -> int:
        arr = np.array(self.words, dtype=np.int64)  # (K, N, d)
        best = None
        for i in range(len(arr) - 1):
            dh = (arr[i + 1:] != arr[i]).any(axis=2).sum(axis=1).min()
            best = int(dh) if best is None else min(best, int(dh))
        return best


def expand_columns(C: Code) -> ColumnCode:
    words = []
    for w in C.words:
        cols = []
        for blk in w:
            for c in range(C.d):
                cols.append(tuple(blk[r][c] for r in range(C.d)))
        words.append(tuple(cols))
    return ColumnCode(tuple(words), C.N, C.d, C.q0)


# -- bounds ---------------------------------------------------------------------

def distance_bound_mult(n: int, d: int, t: float, q: float, N: int) -> float:
    """N - n d^2 log 2 / log q - 2 n d^2 t / log q (may be <= 0)."""
    lq = math.log(q)
    return N - n * d * d * math.log(2) / lq - 2 * n * d * d * t / lq


def injectivity_threshold(N: int, n: int, d: int, q: float) -> float:
    """Largest t with 2t <= N log q / (n d^2) - log 2."""
    x = N * math.log(q) / (n * d * d) - math.log(2)
    if x <= 0:
        raise Infeasible(f"N log q = {N * math.log(q):.4g} does not exceed n d^2 log 2")
    return x / 2


def distance_bound_add(n: int, d: int, t: float, q: float, N: int) -> float:
    """N - d^2 n log(2t) / log q + (d^2 n / 2) log d / log q."""
    lq = math.log(q)
    return N - d * d * n * math.log(2 * t) / lq + (d * d * n / 2) * math.log(d) / lq


def collision_norm_check(order, x, y, q0: int, d: int = 2) -> bool:
    """For colliding x, y: N(x - y) = |N_{F/Q} nrd(x - y)|^d is divisible by q0^(d d)."""
    from .exactnum.numberfield import nf_norm

    diff = x - y
    nv = abs(nf_norm(diff.nrd())) ** d
    if nv.denominator != 1:
        return False
    return int(nv) % (q0 ** (d * d)) == 0


def save_code(C: Code, path) -> None:
    with open(path, "w") as fh:
        json.dump(C.to_json(), fh, sort_keys=True)


def load_code(path) -> Code:
    with open(path) as fh:
        return Code.from_json(json.load(fh))
