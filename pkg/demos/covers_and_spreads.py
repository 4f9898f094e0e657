"""Second subconstituents as antipodal covers, and the spread pipeline.

At a regular point of a pseudo-GQ(q,q) graph, the second subconstituent
is a distance-regular antipodal q-cover of K_{q^2}.  Turning its fibres
into cliques (adding a spread) yields a strongly regular graph with
GQ(q-1,q+1) parameters; removing spreads goes back.
"""
from gqswitch import check_antipodal_cover, check_srg, canonical_form, wq_graph
from gqswitch.graphcore import induced_subgraph
from gqswitch.switchkit import add_spread, antipodal_classes, find_spreads, remove_spread

w3 = wq_graph(3)
far = [u for u in range(40) if u != 0 and not w3.has_edge(0, u)]
cover, _ = induced_subgraph(w3, far)
print("second subconstituent of W(3):", cover)
print("antipodal 3-cover of K9?", check_antipodal_cover(cover, 3))

srg = add_spread(cover, antipodal_classes(cover))
print("after adding the spread:", check_srg(srg), "(the GQ(2,4) parameters)")

spreads = find_spreads(srg, 2)
print("spreads of that graph:", len(spreads))
covers = {}
for sp in spreads:
    covers.setdefault(canonical_form(remove_spread(srg, sp)), []).append(sp)
print("distinct covers after removal:", len(covers), "- class sizes:", sorted(len(v) for v in covers.values()))
print("(these are the two antipodal 3-covers of K9)")
