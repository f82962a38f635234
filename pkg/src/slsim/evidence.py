"""Four-class evidence model and competence-filtered perception.

Evidence items are pro or con (always perceived correctly) and valuable or
noisy (perceived correctly only with probability ``tc``). A perceiving agent
turns a matrix of items into belief, disbelief and uncertain counts, which
then map onto an opinion.
"""

from __future__ import annotations

import re
from functools import cached_property
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .opinion import EvidenceCounts, Opinion, from_evidence


class EvidenceClass(Enum):
    PV = "PV"  # pro, valuable
    PN = "PN"  # pro, noisy
    CV = "CV"  # con, valuable
    CN = "CN"  # con, noisy


_CLASSES = tuple(EvidenceClass)
_HEADER_RE = re.compile(r"^#\s*pv=(\d+)\s+pn=(\d+)\s+cv=(\d+)\s+cn=(\d+)\s*$")


@dataclass(frozen=True)
class EvidenceMatrix:
    """Ordered evidence items plus their per-class counts ``(PV, PN, CV, CN)``."""

    items: tuple[EvidenceClass, ...]
    counts: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        recount = tuple(sum(1 for it in self.items if it is c) for c in _CLASSES)
        if recount != tuple(self.counts):
            raise ValueError(f"stored counts {self.counts} disagree with items {recount}")

    @classmethod
    def from_items(cls, items: Iterable[EvidenceClass]) -> EvidenceMatrix:
        items = tuple(items)
        counts = tuple(sum(1 for it in items if it is c) for c in _CLASSES)
        return cls(items, counts)

    def __len__(self) -> int:
        return len(self.items)

    @cached_property
    def codes(self) -> np.ndarray:
        """Items as integer codes 0..3 in ``EvidenceClass`` order."""
        index = {c: k for k, c in enumerate(_CLASSES)}
        return np.fromiter((index[it] for it in self.items), dtype=np.int8, count=len(self.items))


@dataclass(frozen=True)
class PerceivedCounts:
    n_b: int
    n_d: int
    n_u: int

    @property
    def total(self) -> int:
        return self.n_b + self.n_d + self.n_u


def build_matrix(
    n_pv: int, n_pn: int, n_cv: int, n_cn: int, rng: np.random.Generator
) -> EvidenceMatrix:
    """Create a matrix holding exactly the requested counts, shuffled by ``rng``."""
    counts = (n_pv, n_pn, n_cv, n_cn)
    if any(c < 0 for c in counts):
        raise ValueError(f"evidence counts must be non-negative, got {counts}")
    if sum(counts) == 0:
        raise ValueError("an evidence matrix needs at least one item")
    codes = np.repeat(np.arange(4), counts)
    rng.shuffle(codes)
    return EvidenceMatrix(tuple(_CLASSES[k] for k in codes), counts)


def map_evidence(tc: float, ev: EvidenceMatrix, rng: np.random.Generator) -> PerceivedCounts:
    """Perceive every item once with topic competence ``tc``.

    One uniform draw ``r`` in [0, 1) per item. With ``r <= tc`` the agent sees
    the item for what it is: valuable pro counts as belief, valuable con as
    disbelief and noisy items as uncertain. Otherwise the valuable/noisy label
    is flipped, so valuable items become uncertain and noisy ones are taken
    at face value.
    """
    if not 0.0 <= tc <= 1.0:
        raise ValueError(f"tc must lie in [0, 1], got {tc!r}")
    codes = ev.codes
    hit = rng.random(codes.size) <= tc
    pv, pn, cv, cn = (codes == k for k in range(4))
    n_b = int(np.count_nonzero(pv & hit) + np.count_nonzero(pn & ~hit))
    n_d = int(np.count_nonzero(cv & hit) + np.count_nonzero(cn & ~hit))
    return PerceivedCounts(n_b, n_d, codes.size - n_b - n_d)


def perceived_opinion(pc: PerceivedCounts, a: float = 0.5) -> Opinion:
    """Normalize perceived counts into an opinion with base rate ``a``."""
    if pc.total <= 0:
        raise ValueError("cannot form an opinion from zero perceived evidence")
    return from_evidence(EvidenceCounts(pc.n_b, pc.n_d, pc.n_u), a)


def write_matrix(ev: EvidenceMatrix, stream: TextIO) -> None:
    pv, pn, cv, cn = ev.counts
    stream.write(f"# pv={pv} pn={pn} cv={cv} cn={cn}\n")
    for item in ev.items:
        stream.write(item.value + "\n")


def read_matrix(stream: TextIO) -> EvidenceMatrix:
    """Parse the one-token-per-line format written by :func:`write_matrix`.

    The header is optional; when present its counts must match the items.
    """
    header = None
    items = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER_RE.match(line)
            if m and header is None:
                header = tuple(int(g) for g in m.groups())
            continue
        try:
            items.append(EvidenceClass(line.upper()))
        except ValueError:
            raise ValueError(f"line {lineno}: unknown evidence token {line!r}") from None
    ev = EvidenceMatrix.from_items(items)
    if header is not None and header != ev.counts:
        raise ValueError(f"header counts {header} disagree with items {ev.counts}")
    return ev


def save_matrix(ev: EvidenceMatrix, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_matrix(ev, fh)


def load_matrix(path: str | Path) -> EvidenceMatrix:
    with open(path, encoding="utf-8") as fh:
        return read_matrix(fh)
