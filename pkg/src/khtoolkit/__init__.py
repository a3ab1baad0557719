"""Khovanov homology of link diagrams, exactly.

Subpackages and modules:

``diagram``    PD codes, resolutions, mirrors, unions, braid closures
``cube``       the cube of resolutions and sign assignments
``homalg``     integer chain complexes, Smith normal form, filtrations
``khovanov``   the Khovanov complex, its homology and structural maps
``cobordism``  elementary moves, cobordism maps and movies
``corpus``     the named diagrams shipped with the package
"""

from .diagram import LinkDiagram, parse_pd, mirror, disjoint_union, unlink, braid_closure
from .khovanov import build_ckh, kh_homology, graded_euler, kauffman_jones

__version__ = "0.1.0"
