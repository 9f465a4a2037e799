"""The follower screen on a small citation story.

"origin" is a highly cited paper; "rider" cites it and is itself highly
cited, but most of rider's citers also cite origin, so rider looks like it
is riding the predecessor's wave. "solo" is equally cited with no
predecessor link. The screen keeps a candidate only if at least 70% of its
citers cite it alone.
"""

from citebreaks import filter_followers, find_pairs
from citebreaks.corpus import ClusterHierarchy, DocType, PublicationRecord, from_records


def paper(pid, year, micro=1):
    return PublicationRecord(pid, year, DocType.ARTICLE, micro, 1, 1)


pubs = [paper("origin", 1998), paper("rider", 2001), paper("solo", 2002, micro=2)]
pubs += [paper(f"c{i}", 2003 + i % 3, micro=3) for i in range(12)]

edges = [("rider", "origin")]
edges += [(f"c{i}", "rider") for i in range(10)]      # 10 citers of rider...
edges += [(f"c{i}", "origin") for i in range(8)]      # ...8 of them co-cite origin
edges += [(f"c{i}", "solo") for i in range(2, 12)]    # solo has 10 citers, no pairs

hierarchy = ClusterHierarchy.from_rows([(1, 1, 1), (2, 1, 1), (3, 1, 1)])
corpus = from_records(pubs, edges, hierarchy)

pool = {"origin", "rider", "solo"}
pairs = find_pairs(pool, corpus)
print("candidate pairs (citing -> cited):")
for p in sorted(pairs):
    print(f"   {p.b2_id} -> {p.b1_id}")

for semantics in ("union", "per_pair"):
    print(f"\nverdicts ({semantics} semantics):")
    verdicts = filter_followers(pool, pairs, corpus, keep_threshold=0.70, semantics=semantics)
    for pid in sorted(verdicts):
        v = verdicts[pid]
        flag = "kept" if v.kept else "DISCARDED"
        print(
            f"   {pid:<8} citers={v.n_citers:>2} co-citers={v.n_cociters:>2} "
            f"alone={v.alone_share:.2f} -> {flag}"
        )

print("\nthe threshold is configurable and inclusive: a candidate sitting")
print("exactly on it survives. rider keeps 20% of its citers alone:")
for threshold in (0.70, 0.20):
    kept = filter_followers(pool, pairs, corpus, keep_threshold=threshold)["rider"].kept
    print(f"   keep_threshold={threshold:.2f} -> rider kept = {kept}")
