"""Constructions and symmetry verification for sharply k-arc-transitive digraphs."""

from sharparc.autsearch import (ColoredDigraph, automorphism_generators, automorphism_search,
                                refine_partition)
from sharparc.constructions import (PsiGroup, ZQuotientSpec, ZWindowSpec, cdc, cdhc,
                                    coordinate_automorphism, complete_digraph,
                                    family_automorphism, fibre_product, praeger_tuple_graph,
                                    psi_coordinate_automorphism, shift_automorphism,
                                    shift_register_quotient, theta_cycle, theta_isomorphism,
                                    translation_magnitude, z_quotient, z_window)
from sharparc.digraph import (AlternetPartition, Digraph, LeveledDigraph, alternets,
                              build_digraph, check_level_map, enumerate_k_arcs, is_bipartite,
                              is_connected)
from sharparc.errors import (ConstructionError, DegreeMismatchError, GroupError,
                             ResourceLimitError, SharpArcError)
from sharparc.perm import (BlockSystem, Permutation, PermGroup, compose, group_order,
                           is_member, minimal_block, orbit, pointwise_stabilizer_order)
from sharparc.tfaut import (TFPair, dihedral_theta_group, is_psi_arc_transitive,
                            is_psi_stable, is_stable, is_tf_pair, tf_from_cdhc)
from sharparc.transitivity import (GrowthSequence, TransitivityProfile,
                                   fiber_stabilizer_triviality, growth_ball,
                                   growth_degree_estimate, k_arc_orbits,
                                   transitivity_profile)

__version__ = "0.1.0"
