"""Exact homological algebra over Z, Q and F_2."""

from .matrix import SparseMatrix
from .snf import (smith_normal_form, is_smith_normal_form, invariant_factors,
                  rank_mod_p, rank_q, det)
from .reduction import EntryNotUnit, Reduction
from .complexes import (NotAComplex, ChainMapViolation, BasedModule, ChainComplex, ChainMap,
                        BigradedGroup, HomologyBasis, homology, tensor, dual, dual_label,
                        is_chain_homotopic, homotopy_solve, induced_map, gaussian_eliminate,
                        eliminate_all)
from .filtered import (UnboundedFiltration, FiltrationViolation, FilteredComplex, Page, ord,
                       ord_matrix, spectral_sequence, associated_graded_homology, e_infinity)
