"""Family datasets: per-form, per-prime Omega coordinates.

CSV files carry a header ``form_id,p,x,y`` or ``form_id,p,theta1,theta2``
(optionally followed by ``conductor``) and a sidecar ``<stem>.meta.json``
with ``{"k1", "k2", "N", "coords"}``.  JSON files hold
``{"metadata": {...}, "records": [{...}, ...]}`` with the same fields.
Parsing is strict: anything unexpected raises ``SchemaViolation``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sympy import isprime

from ..errors import MissingPrime, SchemaViolation
from ..measures import sample

OMEGA_COLS = ["form_id", "p", "x", "y"]
ANGLE_COLS = ["form_id", "p", "theta1", "theta2"]


@dataclass(frozen=True, eq=False)
class FamilyDataset:
    """Records ``(form_id, p, x, y)`` of a family of level ``N`` and weight ``(k1, k2)``.

    Equality compares metadata and record arrays exactly; ``source`` is a
    provenance tag and is not compared.
    """

    k1: int
    k2: int
    N: int
    form_ids: tuple[str, ...]
    ps: np.ndarray
    xs: np.ndarray
    ys: np.ndarray
    conductors: np.ndarray | None = None
    source: str = "ingested"

    def __post_init__(self):
        n = len(self.form_ids)
        for name in ("ps", "xs", "ys"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
            if arr.shape != (n,):
                raise SchemaViolation(f"column {name} has shape {arr.shape}, expected ({n},)")
        if self.conductors is not None:
            c = np.asarray(self.conductors, dtype=float)
            c.setflags(write=False)
            object.__setattr__(self, "conductors", c)
            if c.shape != (n,) or np.any(~(c >= 1)):
                raise SchemaViolation("conductor column must hold values >= 1")
        if n and (np.any(~(np.abs(self.xs) <= 2.0)) or np.any(~(np.abs(self.ys) <= 2.0))):
            raise SchemaViolation("coordinates outside Omega = [-2, 2]^2")
        index = {}
        for i, key in enumerate(zip(self.form_ids, self.ps.tolist())):
            if key in index:
                raise SchemaViolation(f"duplicate record for form {key[0]!r} at p={key[1]}")
            index[key] = i
        for p in set(self.ps.tolist()):
            if not isprime(p):
                raise SchemaViolation(f"p={p} is not prime")
            if self.N % p == 0:
                raise SchemaViolation(f"p={p} divides the level N={self.N}")
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_forms", tuple(sorted(set(self.form_ids))))

    def __len__(self) -> int:
        return len(self.form_ids)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FamilyDataset):
            return NotImplemented
        same_c = (self.conductors is None and other.conductors is None) or (
            self.conductors is not None
            and other.conductors is not None
            and np.array_equal(self.conductors, other.conductors)
        )
        return (
            (self.k1, self.k2, self.N, self.form_ids) == (other.k1, other.k2, other.N, other.form_ids)
            and np.array_equal(self.ps, other.ps)
            and np.array_equal(self.xs, other.xs)
            and np.array_equal(self.ys, other.ys)
            and same_c
        )

    @property
    def forms(self) -> tuple[str, ...]:
        return self._forms

    @property
    def size(self) -> int:
        """Number of distinct forms."""
        return len(self._forms)

    @property
    def primes(self) -> list[int]:
        return sorted(set(self.ps.tolist()))

    def at_prime(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        """``(xs, ys)`` of every form at ``p``, in form order."""
        rows = []
        for f in self._forms:
            i = self._index.get((f, p))
            if i is None:
                raise MissingPrime(f"form {f!r} has no record at p={p}")
            rows.append(i)
        rows = np.asarray(rows, dtype=int)
        return self.xs[rows], self.ys[rows]

    def log_conductor(self) -> float:
        """Mean log conductor over forms, from the conductor column."""
        if self.conductors is None:
            raise SchemaViolation("dataset has no conductor column")
        per_form = {}
        for f, c in zip(self.form_ids, self.conductors.tolist()):
            if per_form.setdefault(f, c) != c:
                raise SchemaViolation(f"form {f!r} has inconsistent conductors")
        return math.fsum(math.log(c) for c in per_form.values()) / len(per_form)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _int(value, what: str) -> int:
    if isinstance(value, bool):
        raise SchemaViolation(f"{what} must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.strip().lstrip("-").isdigit():
        return int(value)
    raise SchemaViolation(f"{what} must be an integer, got {value!r}")


def _float(value, what: str) -> float:
    if isinstance(value, bool):
        raise SchemaViolation(f"{what} must be a number, got {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise SchemaViolation(f"{what} must be a number, got {value!r}") from None
    if not math.isfinite(out):
        raise SchemaViolation(f"{what} is not finite")
    return out


def _check_meta(meta) -> tuple[int, int, int, str]:
    if not isinstance(meta, dict):
        raise SchemaViolation("metadata must be an object")
    for key in ("k1", "k2", "N", "coords"):
        if key not in meta:
            raise SchemaViolation(f"metadata lacks {key!r}")
    k1, k2, N = _int(meta["k1"], "k1"), _int(meta["k2"], "k2"), _int(meta["N"], "N")
    if not k1 >= k2 >= 3:
        raise SchemaViolation(f"weight ({k1}, {k2}) violates k1 >= k2 >= 3")
    if N < 1:
        raise SchemaViolation("N must be >= 1")
    coords = meta["coords"]
    if coords not in ("omega", "angles"):
        raise SchemaViolation(f"coords must be 'omega' or 'angles', got {coords!r}")
    return k1, k2, N, coords


def _build(meta, rows: list[dict], source: str) -> FamilyDataset:
    k1, k2, N, coords = _check_meta(meta)
    a, b = ("x", "y") if coords == "omega" else ("theta1", "theta2")
    has_c = bool(rows) and "conductor" in rows[0]
    ids, ps, xs, ys, cs = [], [], [], [], []
    for i, r in enumerate(rows):
        want = {"form_id", "p", a, b} | ({"conductor"} if has_c else set())
        if set(r) != want:
            raise SchemaViolation(f"record {i} has fields {sorted(r)}, expected {sorted(want)}")
        fid = r["form_id"]
        if not isinstance(fid, str) or not fid:
            raise SchemaViolation(f"record {i}: form_id must be a non-empty string")
        u, v = _float(r[a], a), _float(r[b], b)
        if coords == "angles":
            if not (0.0 <= u <= math.pi and 0.0 <= v <= math.pi):
                raise SchemaViolation(f"record {i}: angles outside [0, pi]")
            u, v = min(u, v), max(u, v)
            u, v = 2.0 * math.cos(u), 2.0 * math.cos(v)
        elif not (abs(u) <= 2.0 and abs(v) <= 2.0):
            raise SchemaViolation(f"record {i}: ({u}, {v}) outside Omega")
        ids.append(fid)
        ps.append(_int(r["p"], "p"))
        xs.append(u)
        ys.append(v)
        if has_c:
            cs.append(_float(r["conductor"], "conductor"))
    return FamilyDataset(
        k1, k2, N, tuple(ids),
        np.asarray(ps, dtype=np.int64), np.asarray(xs, dtype=float), np.asarray(ys, dtype=float),
        np.asarray(cs, dtype=float) if has_c else None, source,
    )


def _sidecar(path: Path) -> Path:
    return path.with_name(path.stem + ".meta.json")


def ingest(path, format: str | None = None) -> FamilyDataset:
    """Read and validate a dataset from CSV (with sidecar) or JSON."""
    path = Path(path)
    fmt = format or path.suffix.lstrip(".").lower()
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SchemaViolation(f"{path} is not UTF-8: {exc}") from None
    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or set(doc) != {"metadata", "records"}:
            raise SchemaViolation("JSON must be an object with 'metadata' and 'records'")
        if not isinstance(doc["records"], list) or not all(isinstance(r, dict) for r in doc["records"]):
            raise SchemaViolation("'records' must be a list of objects")
        return _build(doc["metadata"], doc["records"], "ingested")
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    side = _sidecar(path)
    if not side.exists():
        raise SchemaViolation(f"missing metadata sidecar {side.name}")
    try:
        meta = json.loads(side.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"invalid sidecar JSON: {exc}") from None
    if "\r" in text:
        raise SchemaViolation("CSV must use LF line endings")
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise SchemaViolation("empty CSV")
    base = header[:4]
    if base not in (OMEGA_COLS, ANGLE_COLS) or header[4:] not in ([], ["conductor"]):
        raise SchemaViolation(f"unexpected header {header}")
    coords = "omega" if base == OMEGA_COLS else "angles"
    if isinstance(meta, dict) and meta.get("coords") != coords:
        raise SchemaViolation(f"header implies coords={coords!r}, sidecar says {meta.get('coords')!r}")
    rows = []
    for line_no, rec in enumerate(reader, start=2):
        if len(rec) != len(header):
            raise SchemaViolation(f"line {line_no}: expected {len(header)} fields, got {len(rec)}")
        rows.append(dict(zip(header, rec)))
    return _build(meta, rows, "ingested")


def _meta(ds: FamilyDataset) -> dict:
    return {"k1": ds.k1, "k2": ds.k2, "N": ds.N, "coords": "omega"}


def serialize(ds: FamilyDataset, path, format: str | None = None) -> Path:
    """Write ``ds`` in Omega coordinates; floats use shortest round-trip repr."""
    path = Path(path)
    fmt = format or path.suffix.lstrip(".").lower()
    has_c = ds.conductors is not None
    if fmt == "json":
        recs = []
        for i, f in enumerate(ds.form_ids):
            r = {"form_id": f, "p": int(ds.ps[i]), "x": float(ds.xs[i]), "y": float(ds.ys[i])}
            if has_c:
                r["conductor"] = float(ds.conductors[i])
            recs.append(r)
        path.write_text(json.dumps({"metadata": _meta(ds), "records": recs}, indent=1) + "\n", encoding="utf-8")
        return path
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(OMEGA_COLS + (["conductor"] if has_c else []))
    for i, f in enumerate(ds.form_ids):
        row = [f, int(ds.ps[i]), repr(float(ds.xs[i])), repr(float(ds.ys[i]))]
        if has_c:
            row.append(repr(float(ds.conductors[i])))
        w.writerow(row)
    path.write_text(buf.getvalue(), encoding="utf-8")
    _sidecar(path).write_text(json.dumps(_meta(ds)) + "\n", encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# synthetic families
# ---------------------------------------------------------------------------

def prime_seed(seed: int, p: int) -> int:
    """Per-prime stream key derived from the family seed."""
    return int(np.random.SeedSequence([int(seed) & (2**64 - 1), int(p)]).generate_state(1, np.uint64)[0])


def synth_family(p_list, n_forms: int, k: tuple[int, int], N: int, seed: int,
                 antithetic: bool = False) -> FamilyDataset:
    """Draw one independent point of normalized ``mu_p`` per form and prime.

    With ``antithetic=True`` the second half of the forms mirrors the first
    under ``(x, y) -> (-x, -y)``, a symmetry of every ``mu_p``; ``n_forms``
    must then be even.
    """
    k1, k2 = k
    if n_forms < 0:
        raise ValueError("n_forms must be >= 0")
    if antithetic and n_forms % 2:
        raise ValueError("antithetic families need an even n_forms")
    p_list = [int(p) for p in p_list]
    for p in p_list:
        if N % p == 0:
            raise SchemaViolation(f"p={p} divides the level N={N}")
    width = max(5, len(str(max(n_forms - 1, 0))))
    names = [f"F{i:0{width}d}" for i in range(n_forms)]
    ids, ps, xs, ys = [], [], [], []
    for p in p_list:
        if n_forms == 0:
            break
        m = n_forms // 2 if antithetic else n_forms
        batch = sample(p, m, prime_seed(seed, p))
        bx, by = batch.xs, batch.ys
        if antithetic:
            bx, by = np.concatenate([bx, -bx]), np.concatenate([by, -by])
        ids.extend(names)
        ps.extend([p] * n_forms)
        xs.append(bx)
        ys.append(by)
    return FamilyDataset(
        k1, k2, N, tuple(ids), np.asarray(ps, dtype=np.int64),
        np.concatenate(xs) if xs else np.zeros(0), np.concatenate(ys) if ys else np.zeros(0),
        None, f"synthetic({seed})",
    )
