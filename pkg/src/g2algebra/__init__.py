"""Exact and numerical algebra of the G2 structure on R^7.

Submodules:

* :mod:`~g2algebra.tensors` - k-forms, the structure tensors phi and psi, exact identities
* :mod:`~g2algebra.cross` - cross product, adapted frames, associative planes
* :mod:`~g2algebra.splitting` - the splitting of 2-forms into 7- and 14-dimensional parts
* :mod:`~g2algebra.canonical` - spectral canonical forms and rank analysis
* :mod:`~g2algebra.subalgebras` - Lambda2(P), Psi(P), Theta(P) and their intersections
* :mod:`~g2algebra.io`, :mod:`~g2algebra.cli` - documents and the command line
"""
from .canonical import (G2CanonicalForm, SkewSpectrum, classify_rank, g2_canonical_form, lambda7_canonical_form,
                        maximal_torus_check, rank4_block_form, skew_canonical_form)
from .cross import (AssociativePlane, Frame, complete_g2_frame, cross, is_associative, psi_vector,
                    random_associative_plane, triple_phi)
from .splitting import (bracket, is_in_g2, psi_2form, project7, project14, split, verify_psi_identities)
from .subalgebras import (Subalgebra, ThetaDecomposition, coassoc_selfdual_check, lambda2_of_plane,
                          proper_subspace_check, psi_of_plane, theta_intersect, theta_of_plane)
from .tensors import Form, hodge_star, interior, standard_phi, standard_psi, verify_contraction_identities, wedge

__version__ = "0.1.0"
