"""The Hermitian quadrangle GQ(4,2) and its non-geometric cospectral mate.

The quotient at a regular point is the bilinear forms graph H_2(2,2);
its automorphisms that swap the two maximal-clique families are not
collineations of the net, and switching by one produces a strongly
regular graph with the same parameters that is not isomorphic to the
original.  Applying the same construction to the mate returns the
original: the graphs come in pairs.
"""
from gqswitch import (
    GqOrder,
    are_isomorphic,
    bilinear_forms_graph,
    check_srg,
    decompose,
    hermitian_gq_graph,
    is_collineation,
    regular_points,
    switch_sigma,
    type_swapping_automorphism,
)

g = hermitian_gq_graph(2)
order = GqOrder(4, 2)
print("GQ(4,2):", check_srg(g))

v = regular_points(g, order)[0]
data = decompose(g, v, order)
print("fibres:", len(data.fibres), "of size", len(data.fibres[0]))
print("quotient:", check_srg(data.bhat), "= H_2(2,2)?", are_isomorphic(data.bhat, bilinear_forms_graph(2)))

sigma = type_swapping_automorphism(data.bhat)
print("type-swapping automorphism found; collineation?", is_collineation(sigma, data.net))

mate = switch_sigma(data, sigma)
print("mate:", check_srg(mate), " isomorphic to original?", are_isomorphic(mate, g))

w = regular_points(mate, order)[0]
back_data = decompose(mate, w, order)
back = switch_sigma(back_data, type_swapping_automorphism(back_data.bhat))
print("switching the mate back returns the original's class:", are_isomorphic(back, g))
