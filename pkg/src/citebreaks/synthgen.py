"""Deterministic synthetic citation corpora with planted ground truth.

Papers live in a regular micro/meso/macro grid. Every paper carries a latent
lognormal attractiveness; citers pick targets inside their own micro-field
with probability proportional to attractiveness, and with probability
``cross_macro_rate`` a reference is redirected to a uniformly chosen foreign
macro-field instead. The heavy lognormal tail reproduces the skewed
citation distributions the analyses expect.

Planted breakthroughs get attractiveness pinned at the 99.9th percentile of
the lognormal, so they dominate their micro-field. Their own references are
drawn uniformly from the low-attractiveness half of the field, which keeps
them out of candidate-pair relationships. Planted followers sit in the same
micro-field as their predecessor, are published later, cite it, and have at
least ``follower_cociter_share`` of their citers forced to co-cite the
predecessor, which is enough to fail the default 70% alone-share screen.

Everything is drawn from one seeded generator: a (seed, config) pair fully
determines the corpus, byte for byte.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import norm

from .corpus import (
    ARTICLE,
    OTHER,
    REVIEW,
    ClusterHierarchy,
    Corpus,
    IngestReport,
)

logger = logging.getLogger(__name__)

_PLANTED_QUANTILE = 0.999


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 42
    n_macro: int = 21
    meso_per_macro: int = 5
    micro_per_meso: int = 10
    papers_per_micro: int = 50
    year_min: int = 1993
    year_max: int = 2011
    attract_location: float = 1.0
    attract_scale: float = 1.2
    refs_per_paper: float = 8.0
    review_rate: float = 0.08
    other_rate: float = 0.04
    n_planted_breakthroughs: int = 40
    n_planted_followers: int = 20
    follower_cociter_share: float = 0.5
    cross_macro_rate: float = 0.05
    n_units: int = 3
    unit_rate: float = 0.05

    @property
    def n_micro(self) -> int:
        return self.n_macro * self.meso_per_macro * self.micro_per_meso

    @property
    def n_papers(self) -> int:
        return self.n_micro * self.papers_per_micro

    def validate(self) -> None:
        for name in ("n_macro", "meso_per_macro", "micro_per_meso", "papers_per_micro"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in (
            "review_rate", "other_rate", "follower_cociter_share",
            "cross_macro_rate", "unit_rate",
        ):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.review_rate + self.other_rate > 1.0:
            raise ValueError("review_rate + other_rate must not exceed 1")
        if self.year_min > self.year_max:
            raise ValueError("year_min must not exceed year_max")
        if self.refs_per_paper < 0:
            raise ValueError("refs_per_paper must be nonnegative")
        if self.n_planted_breakthroughs < 0 or self.n_planted_followers < 0:
            raise ValueError("planted counts must be nonnegative")
        if self.n_planted_followers > 0 and self.n_planted_breakthroughs == 0:
            raise ValueError("planted followers require at least one planted breakthrough")
        if self.n_planted_breakthroughs > self.n_micro:
            raise ValueError("more planted breakthroughs than micro-fields")
        if self.n_planted_followers and self.papers_per_micro < 2:
            raise ValueError("planted followers require at least 2 papers per micro-field")
        per_b = -(-self.n_planted_followers // max(self.n_planted_breakthroughs, 1))
        if self.n_planted_followers and per_b > self.papers_per_micro - 1:
            raise ValueError("too many planted followers per breakthrough field")
        if self.cross_macro_rate > 0 and self.n_macro < 2:
            raise ValueError("cross-macro citations require at least 2 macro-fields")
        if self.n_units < 0:
            raise ValueError("n_units must be nonnegative")


@dataclass(frozen=True)
class GroundTruth:
    planted_breakthroughs: frozenset[str]
    planted_followers: frozenset[str]


def _pub_id(i: int, width: int) -> str:
    return f"p{i:0{width}d}"


def generate(config: SynthConfig) -> tuple[Corpus, GroundTruth]:
    """Generate a corpus and its planted-label ground truth."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    n = config.n_papers
    n_micro = config.n_micro
    per_micro = config.papers_per_micro
    micros_per_macro = config.meso_per_macro * config.micro_per_meso

    width = max(len(str(n)), 6)
    pub_ids = [_pub_id(i, width) for i in range(n)]

    # grid layout: micro-field f owns positions [f*per_micro, (f+1)*per_micro)
    micro0 = np.repeat(np.arange(n_micro, dtype=np.int64), per_micro)
    meso0 = micro0 // config.micro_per_meso
    macro0 = meso0 // config.meso_per_macro

    years = rng.integers(config.year_min, config.year_max + 1, size=n).astype(np.int32)
    r = rng.random(n)
    doc_codes = np.full(n, ARTICLE, dtype=np.int8)
    doc_codes[r < config.review_rate] = REVIEW
    doc_codes[(r >= config.review_rate) & (r < config.review_rate + config.other_rate)] = OTHER

    unit_draw = rng.random(n)
    unit_pick = rng.integers(0, max(config.n_units, 1), size=n)
    units: list[tuple[str, ...]] = [
        (f"u{unit_pick[i] + 1}",) if config.n_units and unit_draw[i] < config.unit_rate else ()
        for i in range(n)
    ]

    attract = rng.lognormal(config.attract_location, config.attract_scale, size=n)

    # plant breakthroughs in distinct micro-fields, followers beside them
    planted_value = math.exp(
        config.attract_location + config.attract_scale * norm.ppf(_PLANTED_QUANTILE)
    )
    b_fields = rng.choice(n_micro, size=config.n_planted_breakthroughs, replace=False)
    b_offsets = rng.integers(0, per_micro, size=config.n_planted_breakthroughs)
    b_idx = b_fields * per_micro + b_offsets

    mid_year = (config.year_min + config.year_max) // 2
    f_idx = np.empty(config.n_planted_followers, dtype=np.int64)
    f_pred = np.empty(config.n_planted_followers, dtype=np.int64)
    if config.n_planted_followers:
        assigned: dict[int, list[int]] = {}
        for j in range(config.n_planted_followers):
            assigned.setdefault(j % config.n_planted_breakthroughs, []).append(j)
        for k, follower_js in sorted(assigned.items()):
            field = int(b_fields[k])
            free = [o for o in range(per_micro) if o != int(b_offsets[k])]
            picks = rng.choice(len(free), size=len(follower_js), replace=False)
            for j, pick in zip(follower_js, picks.tolist()):
                f_idx[j] = field * per_micro + free[pick]
                f_pred[j] = b_idx[k]

    planted = np.concatenate([b_idx, f_idx]).astype(np.int64)
    attract[planted] = planted_value
    doc_codes[planted] = ARTICLE
    if config.n_planted_breakthroughs:
        years[b_idx] = rng.integers(config.year_min, mid_year + 1, size=b_idx.size)
    for j in range(config.n_planted_followers):
        lo = min(int(years[f_pred[j]]) + 1, config.year_max)
        years[f_idx[j]] = rng.integers(lo, config.year_max + 1)

    citing, cited = _draw_references(config, rng, attract, micro0, macro0, b_idx, micros_per_macro)

    # follower -> predecessor edge, then dedupe everything once
    if config.n_planted_followers:
        citing = np.concatenate([citing, f_idx])
        cited = np.concatenate([cited, f_pred])
    citing, cited, n_dup = _dedupe(citing, cited, n)

    # force co-citers: a share of each follower's citers must also cite its
    # predecessor, which caps the follower's alone share at 1 - share
    if config.n_planted_followers and config.follower_cociter_share > 0:
        extra_src: list[np.ndarray] = []
        extra_dst: list[np.ndarray] = []
        for j in range(config.n_planted_followers):
            f, b = int(f_idx[j]), int(f_pred[j])
            citers = np.unique(citing[cited == f])
            citers = citers[citers != b]
            if not citers.size:
                continue
            k = math.ceil(config.follower_cociter_share * citers.size)
            chosen = rng.choice(citers, size=k, replace=False)
            extra_src.append(chosen)
            extra_dst.append(np.full(k, b, dtype=np.int64))
        if extra_src:
            citing = np.concatenate([citing] + extra_src)
            cited = np.concatenate([cited] + extra_dst)
            citing, cited, more_dup = _dedupe(citing, cited, n)
            n_dup += more_dup

    report = IngestReport(
        publications=n,
        edges_accepted=int(citing.size),
        edges_self=0,
        edges_duplicate=n_dup,
        edges_dangling=0,
    )
    hierarchy = ClusterHierarchy.from_rows(
        (m + 1, m // config.micro_per_meso + 1, m // micros_per_macro + 1)
        for m in range(n_micro)
    )
    corpus = Corpus(
        pub_ids,
        years,
        doc_codes,
        micro0 + 1,
        meso0 + 1,
        macro0 + 1,
        units,
        citing,
        cited,
        hierarchy,
        config.year_min,
        config.year_max,
        report,
    )
    truth = GroundTruth(
        planted_breakthroughs=frozenset(pub_ids[i] for i in b_idx.tolist()),
        planted_followers=frozenset(pub_ids[i] for i in f_idx.tolist()),
    )
    logger.info(
        "generated %d publications, %d edges, %d planted breakthroughs, %d planted followers",
        n, corpus.n_edges, len(truth.planted_breakthroughs), len(truth.planted_followers),
    )
    return corpus, truth


def _dedupe(citing: np.ndarray, cited: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, int]:
    keep = citing != cited
    keys = np.unique(citing[keep] * n + cited[keep])
    n_dup = int(keep.sum()) - keys.size
    return keys // n, keys % n, n_dup


def _draw_references(
    config: SynthConfig,
    rng: np.random.Generator,
    attract: np.ndarray,
    micro0: np.ndarray,
    macro0: np.ndarray,
    b_idx: np.ndarray,
    micros_per_macro: int,
) -> tuple[np.ndarray, np.ndarray]:
    n = attract.size
    per_micro = config.papers_per_micro
    n_refs = rng.poisson(config.refs_per_paper, size=n)
    n_cross = rng.binomial(n_refs, config.cross_macro_rate)

    is_breakthrough = np.zeros(n, dtype=bool)
    is_breakthrough[b_idx] = True
    n_cross[b_idx] = 0  # planted breakthroughs only cite locally

    n_local = n_refs - n_cross

    src_parts: list[np.ndarray] = []
    dst_parts: list[np.ndarray] = []

    # local references, attractiveness-weighted within the micro-field
    for field in range(config.n_micro):
        members = np.arange(field * per_micro, (field + 1) * per_micro, dtype=np.int64)
        organic = members[~is_breakthrough[members]]
        n_org = n_local[organic]
        total = int(n_org.sum())
        if total and members.size > 1:
            w = attract[members] / attract[members].sum()
            src = np.repeat(organic, n_org)
            dst = rng.choice(members, size=total, p=w)
            keep = src != dst
            src_parts.append(src[keep])
            dst_parts.append(dst[keep])
        # planted breakthroughs cite the quiet half of their own field
        for b in members[is_breakthrough[members]].tolist():
            k = int(n_local[b])
            if not k:
                continue
            others = members[members != b]
            low = others[attract[others] < np.median(attract[members])]
            targets = low if low.size else others
            if targets.size:
                src_parts.append(np.full(k, b, dtype=np.int64))
                dst_parts.append(rng.choice(targets, size=k))

    # cross-macro references: uniform foreign macro, uniform micro inside it,
    # attractiveness-weighted paper inside that micro
    total_cross = int(n_cross.sum())
    if total_cross:
        src = np.repeat(np.arange(n, dtype=np.int64), n_cross)
        own_macro = macro0[src]
        shift = rng.integers(1, config.n_macro, size=total_cross)
        tgt_macro = (own_macro + shift) % config.n_macro
        tgt_micro = tgt_macro * micros_per_macro + rng.integers(
            0, micros_per_macro, size=total_cross
        )
        order = np.argsort(tgt_micro, kind="stable")
        sorted_src = src[order]
        sorted_micro = tgt_micro[order]
        starts = np.flatnonzero(np.r_[True, sorted_micro[1:] != sorted_micro[:-1]])
        bounds = np.append(starts, sorted_micro.size)
        for s, e in zip(bounds[:-1], bounds[1:]):
            field = int(sorted_micro[s])
            members = np.arange(field * per_micro, (field + 1) * per_micro, dtype=np.int64)
            w = attract[members] / attract[members].sum()
            dst = rng.choice(members, size=e - s, p=w)
            src_parts.append(sorted_src[s:e])
            dst_parts.append(dst)

    if not src_parts:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(src_parts), np.concatenate(dst_parts)


def write_ground_truth_tsv(truth: GroundTruth, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("pub_id\tlabel\n")
        for pid in sorted(truth.planted_breakthroughs):
            fh.write(f"{pid}\tbreakthrough\n")
        for pid in sorted(truth.planted_followers):
            fh.write(f"{pid}\tfollower\n")
