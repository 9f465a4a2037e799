"""The three selection rules end to end on a synthetic corpus.

Generates a corpus with planted breakthroughs and planted followers, then
runs the full pipeline: citation classes, candidate pool, follower screen,
and the M1 / M2a / M2b selections. The planted labels give ground truth:
breakthroughs should surface in M2a, followers should be screened out.
"""

from citebreaks import (
    candidate_pool,
    citation_counts,
    css_all_fields,
    detect_m1,
    detect_m2a,
    detect_m2b,
    filter_followers,
    find_pairs,
    macro_diffusion,
)
from citebreaks.synthgen import SynthConfig, generate

config = SynthConfig(
    seed=42,
    n_macro=8,
    meso_per_macro=3,
    micro_per_meso=5,
    papers_per_micro=50,
    n_planted_breakthroughs=12,
    n_planted_followers=6,
)
corpus, truth = generate(config)
print(f"corpus: {len(corpus):,} publications, {corpus.n_edges:,} edges")
print(f"planted: {len(truth.planted_breakthroughs)} breakthroughs, "
      f"{len(truth.planted_followers)} followers")

counts = citation_counts(corpus)
partitions = css_all_fields(corpus, counts)
pool = candidate_pool(corpus, partitions)
pairs = find_pairs(pool, corpus)
verdicts = filter_followers(pool, pairs, corpus)
discarded = sum(1 for v in verdicts.values() if not v.kept)
print(f"\ncandidate pool: {len(pool)} outstanding articles")
print(f"pairs found: {len(pairs)}; screened out as followers: {discarded}")

m1 = detect_m1(corpus, counts)
m2a = detect_m2a(pool, verdicts)
diffusion = macro_diffusion(m2a, corpus)
m2b = detect_m2b(m2a, diffusion, corpus)

print(f"\nM1  (micro-field maxima):        {len(m1.members):>5}")
print(f"M2a (filtered outstanding pool): {len(m2a.members):>5}")
print(f"M2b (wide-diffusion subset):     {len(m2b.members):>5}")

ties = sum(1 for p in m1.members if m1.evidence[p].tied)
print(f"\nM1 ties: {ties} members share a field maximum")

recovered = truth.planted_breakthroughs & m2a.members
leaked = truth.planted_followers & m2a.members
print(f"\nplanted breakthroughs recovered in M2a: {len(recovered)}/{len(truth.planted_breakthroughs)}")
print(f"planted followers leaking into M2a:     {len(leaked)}/{len(truth.planted_followers)}")

print("\nwidest-diffusion members of M2b:")
top = sorted(m2b.members, key=lambda p: -m2b.evidence[p].external_macros)[:5]
for pid in top:
    ev = m2b.evidence[pid]
    print(f"   {pid}: cited from {ev.external_macros} foreign macro-fields "
          f"(meso average {ev.meso_mean:.2f})")
