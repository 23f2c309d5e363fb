"""Walk through a web subgraph: why it has no W4(X) minor, and what the
oracle thinks.

Run with:  python3 demos/webs_and_obstructions.py [seed]
"""

import random
import sys

from rootedminors.graph_core import encode_graph6
from rootedminors.minor_oracle import decide, find_rooted_minor, get_pattern
from rootedminors.reductions import Instance, reduce_to_planar
from rootedminors.structure import decide_w4_by_obstructions
from rootedminors.structure.k24 import decide_k24
from rootedminors.structure.planted import planted_obstruction

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
rng = random.Random(seed)

# A web subgraph built so that some cycle through the roots carries a
# triangle of 2-separations (obstruction kind 2).
po = planted_obstruction(2, rng, max_n=9)
rg = po.rooted
print(f"graph6 {encode_graph6(rg.graph)}, {rg.n} vertices, roots {rg.roots}")
print(f"planted kind {po.kind} on cycle {po.cycle}")

verdict = decide_w4_by_obstructions(rg)
print(f"\nobstruction verdict: {verdict.status}")
for cycle, w in verdict.witnesses[:4]:
    print(f"  cycle {cycle}: kind {w.kind}")
if len(verdict.witnesses) > 4:
    print(f"  ... {len(verdict.witnesses) - 4} more cycles, each obstructed")

# the oracle agrees, and a W4-free web cannot have K2,4(X) either
print(f"\noracle W4(X): {decide(rg, get_pattern('w4x'))}")
print(f"oracle K2,4(X): {decide(rg, get_pattern('k24x'))}")
print(f"structural K2,4(X) with the certificate: {decide_k24(rg, po.cert)}")

# K2,2(X) depends on how the four roots pair up; on a web the pairing
# that follows the outer order never works
a, b, c, d = rg.roots
for pairing in ((a, b, c, d), (a, c, b, d), (a, d, b, c)):
    model = find_rooted_minor(type(rg)(rg.graph, pairing), get_pattern("k22x"))
    print(f"K2,2(X) with sides {pairing[:2]} | {pairing[2:]}: {'found' if model else 'absent'}")

cliques = {t: vs for t, vs in po.cert.triangle_cliques.items() if vs}
planar = reduce_to_planar(Instance.of(rg, "w4x"), po.cert)
print(f"\nclique vertices per triangle: {cliques or 'none'}")
print(f"after contracting the clique parts: {planar.n} vertices, {len(planar.edges)} edges")
