"""Link cobordism maps built from elementary moves."""

from ..homalg.complexes import ChainMapViolation
from .moves import (MoveError, ElementaryMove, faces, is_planar, birth, death, saddle, r1_add,
                    r1_remove, r2_add, r2_remove, r3, relabel, apply_move)
from .maps import (CircleNotFree, SiteInconsistent, HomotopyCheckFailed, NoEliminationPlan,
                   CobMap, ckh, birth_map, death_map, saddle_map, relabel_map, reidemeister_map,
                   elementary_map, identity_map)
from .movie import (FrameMismatch, MovieSyntaxError, NotFilteredIso, Movie, parse_movie,
                    movie_map, torus_movie, sphere_movie, birth_power, death_power, SignCheck,
                    sign_uniqueness_check, graded_automorphism, extremal_ranks,
                    r3_conjugate_movie, r3_conjugate_map, sign_normalized, agree_up_to_sign)
