"""Union-of-coset UMP codes over GF(2) and their Monte Carlo validation.

Each class is a coset {uG_i + v_i} of a random linear code; the decoder scans
classes in a fixed order and outputs the first codeword whose information
density strictly exceeds the class threshold log2(M_i / lambda_i). Codewords
are stored packed 64 bits per word and compared via XOR + popcount, which is
also the layout contract of the on-disk codebook format.

Single codebook draws may exceed the analytic class bound; the random-coding
guarantee is in expectation over codebooks, so validation averages over
(seeded) codebook draws.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .achievability import SimplexWeights
from .channel import ChannelKind, ChannelSpec, Symbol

MAX_CLASS_K = 20
MAX_TOTAL_CODEWORDS = 1 << 22

_MAGIC = b"UMPC"
_FORMAT_VERSION = 1

MC_CHUNK = 8192


class ResourceBudgetError(Exception):
    """Raised when a requested codebook exceeds the exhaustive-decoding budget."""


@dataclass(frozen=True)
class DecodeOutcome:
    """Either decoded(class_index, message) or no codeword above threshold."""

    class_index: Optional[int]
    message: Optional[int]

    @property
    def decoded(self) -> bool:
        return self.class_index is not None

    @classmethod
    def none(cls) -> "DecodeOutcome":
        return cls(None, None)


@dataclass(frozen=True)
class McClassResult:
    errors: int
    trials: int

    @property
    def error_rate(self) -> float:
        return self.errors / self.trials

    @property
    def std_error(self) -> float:
        p = self.error_rate
        return math.sqrt(p * (1.0 - p) / self.trials)


def _words(n: int) -> int:
    return (n + 63) // 64


def _pack_rows(bits: np.ndarray, n: int) -> np.ndarray:
    """Pack (T, n) 0/1 rows into (T, ceil(n/64)) uint64 words, bit 0 first."""
    bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
    packed = np.packbits(bits, axis=1, bitorder="little")
    pad = _words(n) * 8 - packed.shape[1]
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return packed.view("<u8")


@dataclass
class CosetCodebook:
    """Per-class generator matrices, coset shifts and decoding thresholds.

    Message index w maps to coefficient bits little-endian: bit j of w selects
    generator row j. Coset codewords are not necessarily distinct for random
    generators; collisions are a diagnostic, not an error, and only make the
    empirical error conservative.
    """

    n: int
    k: Tuple[int, ...]
    lambdas: SimplexWeights
    generators: List[np.ndarray]  # class i: (k_i, n) uint8
    shifts: List[np.ndarray]  # class i: (n,) uint8
    log2_thresholds: Tuple[float, ...]  # log2(M_i / lambda_i)
    class_order: Tuple[int, ...]
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.k)

    def codewords_packed(self, class_i: int) -> np.ndarray:
        """All 2^k_i codewords of the class, packed, indexed by message."""
        cached = self._tables.get(class_i)
        if cached is not None:
            return cached
        table = _pack_rows(self.shifts[class_i][None, :], self.n)
        for row in self.generators[class_i]:
            row_packed = _pack_rows(row[None, :], self.n)
            table = np.vstack([table, table ^ row_packed])
        self._tables[class_i] = table
        return table

    def codeword_collisions(self, class_i: int) -> int:
        """Number of duplicated codeword labels in the class."""
        table = self.codewords_packed(class_i)
        return table.shape[0] - np.unique(table, axis=0).shape[0]

    def with_class_order(self, order: Sequence[int]) -> "CosetCodebook":
        if sorted(order) != list(range(self.m)):
            raise ValueError(f"not a permutation of classes: {order}")
        return CosetCodebook(
            self.n,
            self.k,
            self.lambdas,
            self.generators,
            self.shifts,
            self.log2_thresholds,
            tuple(order),
            self._tables,
        )


def build_coset_code(
    spec: ChannelSpec, k: Sequence[int], lambdas: SimplexWeights, rng: np.random.Generator
) -> CosetCodebook:
    """Draw all generator and shift entries as i.i.d. fair bits.

    Deterministic given the rng state. Budget: every k_i <= 20 and the total
    codeword count <= 2^22, so exhaustive threshold decoding stays tractable.
    """
    k = tuple(int(v) for v in k)
    if len(k) != len(lambdas):
        raise ValueError(f"{len(k)} classes but {len(lambdas)} simplex weights")
    if any(v < 0 for v in k):
        raise ValueError(f"class exponents must be >= 0: {k}")
    if any(v > MAX_CLASS_K for v in k):
        raise ResourceBudgetError(
            f"class exponent above decoding budget k <= {MAX_CLASS_K}: {k}"
        )
    if sum(1 << v for v in k) > MAX_TOTAL_CODEWORDS:
        raise ResourceBudgetError(
            f"total codewords {sum(1 << v for v in k)} exceed budget {MAX_TOTAL_CODEWORDS}"
        )
    if any(lam <= 0.0 for lam in lambdas.weights):
        raise ValueError("every class in a coset code needs lambda_i > 0")
    generators, shifts = [], []
    for k_i in k:
        generators.append(rng.integers(0, 2, size=(k_i, spec.n), dtype=np.uint8))
        shifts.append(rng.integers(0, 2, size=spec.n, dtype=np.uint8))
    thresholds = tuple(
        k_i - math.log2(lam) for k_i, lam in zip(k, lambdas.weights)
    )
    return CosetCodebook(
        spec.n, k, lambdas, generators, shifts, thresholds, tuple(range(len(k)))
    )


def encode(code: CosetCodebook, class_i: int, u: np.ndarray) -> np.ndarray:
    """uG_i + v_i over GF(2); u bit j multiplies generator row j."""
    u = np.asarray(u, dtype=np.uint8)
    if u.shape != (code.k[class_i],):
        raise ValueError(
            f"message must have shape ({code.k[class_i]},), got {u.shape}"
        )
    x = code.shifts[class_i].copy()
    for bit, row in zip(u, code.generators[class_i]):
        if bit:
            x ^= row
    return x


def info_density_bits(spec: ChannelSpec, x: np.ndarray, y: np.ndarray) -> float:
    """Information density in bits of (input word, channel output), -inf allowed."""
    x = np.asarray(x, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    if x.shape != y.shape or x.shape != (spec.n,):
        raise ValueError(f"length mismatch: x {x.shape}, y {y.shape}, n={spec.n}")
    if spec.kind is ChannelKind.BSC:
        if np.any(y > 1):
            raise ValueError("BSC outputs are bits")
        t = int(np.count_nonzero(x != y))
        if spec.p == 0.0:
            return float(spec.n) if t == 0 else -math.inf
        if spec.p == 1.0:
            return float(spec.n) if t == spec.n else -math.inf
        return spec.n * math.log2(2.0 - 2.0 * spec.p) + t * math.log2(
            spec.p / (1.0 - spec.p)
        )
    unerased = y != Symbol.ERASED
    if np.any(x[unerased] != y[unerased]):
        return -math.inf
    return float(np.count_nonzero(unerased))


def _decode_batch_bsc(
    code: CosetCodebook, spec: ChannelSpec, y_packed: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    T = y_packed.shape[0]
    out_class = np.full(T, -1, dtype=np.int32)
    out_msg = np.full(T, -1, dtype=np.int64)
    undecided = np.ones(T, dtype=bool)
    p, n = spec.p, spec.n
    for class_i in code.class_order:
        if not np.any(undecided):
            break
        idx = np.nonzero(undecided)[0]
        table = code.codewords_packed(class_i)
        diff = y_packed[idx, None, :] ^ table[None, :, :]
        dist = np.bitwise_count(diff).sum(axis=2, dtype=np.int64)
        thr = code.log2_thresholds[class_i]
        if p == 0.0:
            qualify = (dist == 0) & (n > thr)
        elif p == 1.0:
            qualify = (dist == n) & (n > thr)
        else:
            info = n * math.log2(2.0 - 2.0 * p) + dist * math.log2(p / (1.0 - p))
            qualify = info > thr
        has = qualify.any(axis=1)
        first = qualify.argmax(axis=1)
        hit = idx[has]
        out_class[hit] = class_i
        out_msg[hit] = first[has]
        undecided[hit] = False
    return out_class, out_msg


def _decode_batch_bec(
    code: CosetCodebook,
    spec: ChannelSpec,
    y_packed: np.ndarray,
    erased_packed: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    T = y_packed.shape[0]
    out_class = np.full(T, -1, dtype=np.int32)
    out_msg = np.full(T, -1, dtype=np.int64)
    undecided = np.ones(T, dtype=bool)
    unerased = spec.n - np.bitwise_count(erased_packed).sum(axis=1, dtype=np.int64)
    for class_i in code.class_order:
        if not np.any(undecided):
            break
        idx = np.nonzero(undecided)[0]
        table = code.codewords_packed(class_i)
        mism = (y_packed[idx, None, :] ^ table[None, :, :]) & ~erased_packed[idx, None, :]
        agree = ~np.any(mism, axis=2)
        thr = code.log2_thresholds[class_i]
        qualify = agree & (unerased[idx] > thr)[:, None]
        has = qualify.any(axis=1)
        first = qualify.argmax(axis=1)
        hit = idx[has]
        out_class[hit] = class_i
        out_msg[hit] = first[has]
        undecided[hit] = False
    return out_class, out_msg


def decode(code: CosetCodebook, spec: ChannelSpec, y: np.ndarray) -> DecodeOutcome:
    """Sequential threshold decode of one channel output.

    Scans classes in code.class_order and messages by index, returning the
    first codeword with information density strictly above its class
    threshold.
    """
    y = np.asarray(y, dtype=np.uint8)
    if y.shape != (spec.n,):
        raise ValueError(f"output must have shape ({spec.n},), got {y.shape}")
    if spec.kind is ChannelKind.BSC:
        cls, msg = _decode_batch_bsc(code, spec, _pack_rows(y[None, :], spec.n))
    else:
        erased = (y == Symbol.ERASED).astype(np.uint8)
        y_vals = np.where(erased, 0, y).astype(np.uint8)
        cls, msg = _decode_batch_bec(
            code,
            spec,
            _pack_rows(y_vals[None, :], spec.n),
            _pack_rows(erased[None, :], spec.n),
        )
    if cls[0] < 0:
        return DecodeOutcome.none()
    return DecodeOutcome(int(cls[0]), int(msg[0]))


def _mc_chunk_errors(
    code: CosetCodebook,
    spec: ChannelSpec,
    class_i: int,
    seed: int,
    chunk_index: int,
    trials: int,
    fixed_message: Optional[int] = None,
) -> int:
    """Errors in one deterministic chunk of Monte Carlo trials for one class."""
    ss = np.random.SeedSequence(
        [seed, class_i, chunk_index] if fixed_message is None
        else [seed, class_i, fixed_message, chunk_index]
    )
    rng = np.random.Generator(np.random.PCG64(ss))
    table = code.codewords_packed(class_i)
    if fixed_message is None:
        msgs = rng.integers(0, 1 << code.k[class_i], size=trials, dtype=np.int64)
    else:
        msgs = np.full(trials, fixed_message, dtype=np.int64)
    x = table[msgs]
    noise = rng.random((trials, spec.n)) < spec.p
    if spec.kind is ChannelKind.BSC:
        y = x ^ _pack_rows(noise, spec.n)
        cls, dec = _decode_batch_bsc(code, spec, y)
    else:
        erased = _pack_rows(noise, spec.n)
        cls, dec = _decode_batch_bec(code, spec, x, erased)
    return int(np.count_nonzero((cls != class_i) | (dec != msgs)))


def monte_carlo_error(
    code: CosetCodebook,
    spec: ChannelSpec,
    trials_per_class: int,
    seed: int,
    threads: int = 1,
) -> List[McClassResult]:
    """Empirical per-class error rate with binomial standard error.

    Trials are partitioned into fixed-size chunks whose substreams derive
    deterministically from (seed, class, chunk index), so results do not
    depend on the thread count.
    """
    if trials_per_class < 100:
        raise ValueError(f"need at least 100 trials per class, got {trials_per_class}")
    tasks = []
    for class_i in range(code.m):
        done = 0
        chunk_index = 0
        while done < trials_per_class:
            size = min(MC_CHUNK, trials_per_class - done)
            tasks.append((class_i, chunk_index, size))
            done += size
            chunk_index += 1
    errors = [0] * code.m

    def run(task):
        class_i, chunk_index, size = task
        return class_i, _mc_chunk_errors(code, spec, class_i, seed, chunk_index, size)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]
    for class_i, err in results:
        errors[class_i] += err
    return [McClassResult(errors[i], trials_per_class) for i in range(code.m)]


def monte_carlo_max_error(
    code: CosetCodebook,
    spec: ChannelSpec,
    trials_per_message: int,
    seed: int,
    threads: int = 1,
) -> List[McClassResult]:
    """Worst-message empirical error per class, exhaustive over messages.

    Gated to k_i <= 10 since it runs trials_per_message trials for every one
    of the 2^k_i messages.
    """
    if any(k_i > 10 for k_i in code.k):
        raise ResourceBudgetError(
            f"per-message mode requires every k_i <= 10, got {code.k}"
        )
    if trials_per_message < 100:
        raise ValueError(
            f"need at least 100 trials per message, got {trials_per_message}"
        )
    out = []
    for class_i in range(code.m):
        worst = McClassResult(0, trials_per_message)
        for w in range(1 << code.k[class_i]):
            err = _mc_chunk_errors(
                code, spec, class_i, seed, 0, trials_per_message, fixed_message=w
            )
            if err > worst.errors:
                worst = McClassResult(err, trials_per_message)
        out.append(worst)
    return out


_KIND_CODE = {ChannelKind.BSC: 0, ChannelKind.BEC: 1}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}


def save_codebook(code: CosetCodebook, spec: ChannelSpec, path) -> None:
    """Write the little-endian binary codebook format.

    Classes are written in scan order, which therefore becomes the decode
    order on reload. Bit vectors are packed bit 0 = symbol 0.
    """
    nbytes = (code.n + 7) // 8
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<HBd I H", _FORMAT_VERSION, _KIND_CODE[spec.kind],
                             spec.p, spec.n, code.m))
        for class_i in code.class_order:
            fh.write(struct.pack("<Hd", code.k[class_i], code.lambdas[class_i]))
            fh.write(
                np.packbits(code.shifts[class_i], bitorder="little").tobytes()[:nbytes]
            )
            for row in code.generators[class_i]:
                fh.write(np.packbits(row, bitorder="little").tobytes()[:nbytes])


def load_codebook(path) -> Tuple[CosetCodebook, ChannelSpec]:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError(f"{path}: not a codebook file")
        version, kind_code, p, n, m = struct.unpack("<HBd I H", fh.read(struct.calcsize("<HBd I H")))
        if version != _FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported codebook version {version}")
        spec = ChannelSpec(_CODE_KIND[kind_code], p, n)
        nbytes = (n + 7) // 8
        ks, lams, gens, shifts = [], [], [], []
        for _ in range(m):
            k_i, lam_i = struct.unpack("<Hd", fh.read(struct.calcsize("<Hd")))
            ks.append(k_i)
            lams.append(lam_i)
            raw = np.frombuffer(fh.read(nbytes), dtype=np.uint8)
            shifts.append(np.unpackbits(raw, bitorder="little")[:n].astype(np.uint8))
            rows = np.empty((k_i, n), dtype=np.uint8)
            for r in range(k_i):
                raw = np.frombuffer(fh.read(nbytes), dtype=np.uint8)
                rows[r] = np.unpackbits(raw, bitorder="little")[:n]
            gens.append(rows)
    lambdas = SimplexWeights(lams)
    thresholds = tuple(k_i - math.log2(lam) for k_i, lam in zip(ks, lams))
    return (
        CosetCodebook(n, tuple(ks), lambdas, gens, shifts, thresholds, tuple(range(m))),
        spec,
    )
