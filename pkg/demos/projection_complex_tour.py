"""Projection systems from disjoint segments in a tree and from cosets in a
free product, with the standard-path and complex checks."""
from treembed import projcomplex as pc

chain = pc.chain_instance(5, 4)
print("chain of 5 segments, 4 vertices each")
print("  axioms:", pc.verify_axioms(chain).to_json(chain.names))
print("  standard path S0 -> S4 at K=1:", [chain.names[i] for i in pc.standard_path(chain, 1, 0, 4)])

s = pc.tree_segments_instance(seed=3, n_vertices=150, n_segments=15)
bundle = pc.build_complexes(s, K=2, seed=3)
print(f"\nrandom tree instance: {s.n} segments, {s.total_vertices} vertices")
print(f"  projection complex edges {len(bundle.pk_edges())}, tree edges {len(bundle.tree_edges)}")
rep = pc.verify_section5(s, bundle, seed=3)
for name, c in rep["checks"].items():
    print(f"  {name:30} {'pass' if c['pass'] else 'FAIL'}  ({c['checked']} cases)")

fp = pc.free_product_instance(2)
print(f"\nfree product of two Z^2 at radius 2: {fp.n} cosets, {fp.total_vertices} vertices")
print("  axioms ok:", pc.verify_axioms(fp).ok)
X = fp.keys.index(((), 0))
Z = max(range(fp.n), key=lambda i: len(fp.keys[i][0]))
print(f"  standard path {fp.names[X]} -> {fp.names[Z]}:", [fp.names[i] for i in pc.standard_path(fp, 0, X, Z)])
