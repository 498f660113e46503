"""Combinatorial and numerical companions to smooth homotopy theory of diffeological spaces.

Simplicial complexes and sets, integer homology, cover blowups (homotopy
colimits) and floating-point checks of the smoothing maps on standard simplices.
"""

from .complexes import (Cover, PrismComplex, SimplicialComplex, boundary_complex, cone, euler_characteristic,
                        is_isomorphic, iterated_subdivision, nerve_of_cover, prism_complex, standard_complex,
                        star_cover_of_subdivision, subdivide, vertex_star_cover)
from .hocolim import (BlowupComplex, CoverDiagram, blowup_total_complex, bru_chain_complex, projection_to_base,
                      ru_category, verify_segal)
from .homology import (ChainMap, HomologyGroup, IntegerChainComplex, cellular_chain_complex, chain_complex,
                       homology, induced_on_homology, last_vertex_map, mayer_vietoris, pair_long_exact_sequence,
                       sd_chain_map)
from .sset import (FiniteSimplicialSet, SmallCategory, from_ordered_complex, horn_fillers, nerve_category,
                   skeletal_filtration)
from .smoothmaps import (BaryPoint, CutoffParams, PartitionOfUnity, barycentric_map, cutoff_lambda,
                         fd_smoothness_check, h_p_k, homotopy_Lambda, linear_homotopy, phi_chart, phi_I,
                         phi_I_inverse, psi_p_k, psi_polyhedron, star_partition)

__version__ = "0.1.0"
