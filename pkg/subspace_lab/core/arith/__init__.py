from subspace_lab.core.arith.places import (
    INFINITY,
    Place,
    abs_value,
    as_rational,
    height_rational,
    height_vector,
    ord_p,
    product_formula_check,
    rational_str,
)
from subspace_lab.core.arith.enclosure import RealEnclosure
from subspace_lab.core.arith.algebraic import (
    AlgebraicReal,
    continued_fraction,
    convergents,
    height_algebraic,
    parse_algebraic,
)
from subspace_lab.core.arith.field import NumberField
from subspace_lab.core.arith.forms import LinearForm, eval_linear_form
from subspace_lab.core.arith.linalg import Subspace
