"""Portfolio reports for funding units.

Units are tags on publications. The report counts a unit's papers and its
breakthrough papers per method, and relates the unit's share of all
breakthroughs to its share of all publications: a baseline ratio above 1
means the unit is overrepresented among breakthroughs. PP(top 10%) is the
share of the unit's papers among the top decile of their field-year
stratum, with ties split fractionally.
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
    meso_overlay,
    pp_top10,
    reference_report,
    unit_report,
)
from citebreaks.synthgen import SynthConfig, generate

config = SynthConfig(
    seed=1337,
    n_macro=6,
    meso_per_macro=3,
    micro_per_meso=4,
    papers_per_micro=60,
    n_planted_breakthroughs=10,
    n_planted_followers=4,
    n_units=2,
    unit_rate=0.30,
)
corpus, _ = generate(config)
counts = citation_counts(corpus)
partitions = css_all_fields(corpus, counts)
pool = candidate_pool(corpus, partitions)
verdicts = filter_followers(pool, find_pairs(pool, corpus), corpus)
m1 = detect_m1(corpus, counts)
m2a = detect_m2a(pool, verdicts)
m2b = detect_m2b(m2a, macro_diffusion(m2a, corpus), corpus)
sets = [m1, m2a, m2b]

print(f"{'unit':<12}{'method':<8}{'pubs':>6}{'breaks':>7}{'own %':>8}{'share %':>9}{'ratio':>7}")
for report in [reference_report(corpus, sets)] + [
    unit_report(corpus, sets, u) for u in corpus.all_units()
]:
    for method in ("M1", "M2a", "M2b"):
        st = report.methods[method]
        pct = f"{100 * st.pct_of_own_set:.2f}" if st.pct_of_own_set is not None else "-"
        share = f"{100 * st.share_of_reference:.1f}" if st.share_of_reference is not None else "-"
        ratio = f"{st.baseline_ratio:.2f}" if st.baseline_ratio is not None else "-"
        print(f"{report.unit_id:<12}{method:<8}{report.n_pubs:>6}{st.n_breakthroughs:>7}"
              f"{pct:>8}{share:>9}{ratio:>7}")

print("\nPP(top 10%) per unit (fractional tie assignment):")
for unit in corpus.all_units():
    print(f"   {unit}: {pp_top10(corpus, counts, unit):.4f}")

print("\nmeso-field overlay for M2b (member counts per field):")
overlay = meso_overlay(m2b, corpus)
for meso_id in sorted(overlay)[:10]:
    print(f"   meso {meso_id}: {overlay[meso_id]}")
