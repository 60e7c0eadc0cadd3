"""Normal forms for double loop Grassmannians over artinian test rings."""

from .ring import (BaseField, LocalFactor, NilpotencyCertificate, NotInvertible, RingElement,
                   TestRing, ideal_nilpotency, is_nilpotent, is_unit_ring, split_factors)
from .series import (Indeterminate, LaurentRing, LaurentSeries, SUBRING_TAGS, invert_series,
                     iter_series, membership, membership3, unit_decompose)
from .parse import ParseError, format_series, parse_element, parse_iter, parse_ring, parse_series
from .gm import (NormalFormResult, split_twisted_positive, nested_positive_bound, quotient_tag, reduce,
                 reduce_gr1d, reduce_gr2, reduce_grbig, reduce_grj, reduce_grl, reduce_lgr,
                 reduce_lsigma_mod_jsigma)
from .ga import AdditiveSplit, chart, reduce_ga
from .tower import (BOREL, TowerDescriptor, TowerElement, parse_tower, parse_tower_element, reduce_tower,
                    tower_inv, tower_mul)
from .flags import fiber_ring, geometric_to_quotient
from .verify import VerificationWindow, coset_equal, verify_reduction, verify_split, verify_tower
from .uniqueness import brute_force_uniqueness

__version__ = "0.1.0"
