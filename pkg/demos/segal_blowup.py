"""Blowup complexes of a few covers and the induced map to the base on homology."""

from dhomotopy.complexes import vertex_star_cover
from dhomotopy.corpus import projective_plane, three_arc_cover, torus, two_arc_cover
from dhomotopy.hocolim import blowup_total_complex, bru_isomorphism, verify_segal

COVERS = {
    "circle, two arcs": two_arc_cover(),
    "circle, three arcs": three_arc_cover(),
    "RP2, vertex stars": vertex_star_cover(projective_plane()),
    "torus, vertex stars": vertex_star_cover(torus()),
}

for name, cov in COVERS.items():
    B = blowup_total_complex(cov)
    print(f"{name}: {len(cov)} parts, blowup ranks {B.total.ranks}, "
          f"B R_U = sd N U: {bru_isomorphism(cov).ok}")
    for line in verify_segal(cov).lines():
        print("   ", line)
