"""
Doubling a disk with the reflection trick
=========================================

A disk whose boundary is a 5-cycle becomes the chamber of a right-angled
group, one generator per boundary vertex.  Copies of the disk glue up
into a surface, and cutting along the walls gives the disk back.
"""
from davis_hierarchy.simplicial import SimplicialComplex, cycle
from davis_hierarchy.trick import prepare_mirrored_manifold, run_trick

disk = SimplicialComplex([(f"v{i}", f"v{(i + 1) % 5}", "c") for i in range(5)])
MM = prepare_mirrored_manifold(disk, cycle(5))
print("generators:", MM.generators)

out = run_trick(MM, 2)
for cert in out.certificates:
    print(f"{cert.name:30s} {'ok' if cert.passed else 'FAILED'}")
print("pieces:", out.trace.terminal.components, "isomorphic to the disk:", out.trace.terminal_isomorphic)
