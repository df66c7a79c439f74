"""Step-by-step tour of the nine edge-edit operations on a 6-node ring.

Each gene either fires (when its preconditions hold) or is a silent
no-op, so arbitrary evolved command strings are always safe to express.
Run:  python demos/01_edge_edit_walkthrough.py
"""

from grefine import Gene, Graph, Opcode, apply_gene, express, format_gene

ring = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
print(f"start: ring on 6 nodes, edges = {ring.sorted_edges()}")

# A sequence exercising every conditional behavior once.
steps = [
    (Gene(Opcode.ADD, (0, 3, 0, 0)), "add a chord"),
    (Gene(Opcode.TOGGLE, (1, 4, 0, 0)), "toggle a missing edge -> add"),
    (Gene(Opcode.LOCAL_ADD, (2, 3, 4, 0)), "path 2-3-4 exists -> close it"),
    (Gene(Opcode.LOCAL_TOGGLE, (0, 5, 4, 0)), "path 0-5-4 exists -> toggle 0-4"),
    (Gene(Opcode.HOP, (5, 4, 3, 0)), "slide edge 5-4 to 5-3"),
    (Gene(Opcode.LOCAL_DELETE, (0, 1, 4, 0)), "path 0-1-4 exists -> drop 0-4"),
    (Gene(Opcode.DELETE, (5, 0, 0, 0)), "plain deletion"),
    (Gene(Opcode.SWAP, (1, 0, 4, 3)), "rewire 1-0,4-3 into 1-3,0-4 (degrees kept)"),
]

g = ring
for gene, why in steps:
    before = g.edge_count
    g = apply_gene(g, gene)
    print(f"{format_gene(gene):<22} {why:<45} edges {before} -> {g.edge_count}")

print(f"final edge set: {g.sorted_edges()}")

# The same sequence as one genome (padded with Null to the canonical
# length 2 * node_count) expresses identically and leaves the base alone.
genome = tuple(gene for gene, _ in steps) + (Gene(Opcode.NULL),) * 4
assert express(ring, genome).edges == g.edges
assert ring.edge_count == 6
print("expressing the padded genome reproduces the same graph; base untouched")

# A no-op example: the hop below requires edge 0-2, which does not exist.
noop = apply_gene(ring, Gene(Opcode.HOP, (0, 2, 4, 0)))
print(f"unsatisfied precondition is a silent no-op: {noop.edges == ring.edges}")
