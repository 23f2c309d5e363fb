"""Follow the separation rewrites on a few small instances.

Each instance is reduced to irreducible leaves; the oracle is run on the
leaves and folded back through the combiner tree, then compared with the
oracle on the original graph.

Run with:  python3 demos/reduction_walkthrough.py
"""

from rootedminors.graph_core import RootedGraph, parse_graph6
from rootedminors.reductions import Instance, fixpoint_reduce, lx_two_two_counterexample, reduced_decide
from rootedminors.structure import generate_class


def show(title, inst, allow_unsound=False):
    leaves, tree, trace = fixpoint_reduce(inst, allow_unsound=allow_unsound)
    folded = tree.fold(lambda leaf: leaf.decide())
    print(f"\n{title}  [{inst.pattern}, {inst.graph.n} vertices]")
    for s in trace.steps:
        print(f"  {s['lemma']:<26} boundary {s['boundary']!s:<10} -> {s['combiner']}")
    print(f"  leaves: {len(leaves)}; folded answer {folded}; oracle {inst.decide()}")


show("square, roots in cycle order", Instance.of(RootedGraph(parse_graph6("Cl"), (0, 1, 2, 3)), "w4x"))

rg, _ = generate_class("C")
show("class C graph", Instance.of(rg, "w4x"))

rg, _ = generate_class("B")
show("class B graph", Instance.of(rg, "k24x"))

# Splitting L(X) along a separation with two roots on each side looks
# natural but loses the minor on this graph.
rg, boundary = lx_two_two_counterexample()
inst = Instance.of(rg, "lx")
show("L(X) counterexample, sound rules only", inst)
show("L(X) counterexample, with the two-and-two split", inst, allow_unsound=True)
print(f"\nwith the split the reduction answers {reduced_decide(inst, allow_unsound=True)}, "
      f"the oracle {inst.decide()}")
