"""Modular representations of cyclic p-groups, their stable category, and tt-rings in it."""

from .errors import (
    BudgetExceededError,
    CriteriaDisagreeError,
    InputError,
    StabringError,
)
from .ffield import FieldSpec, GF, ff_make
from .modrep import (
    Module,
    ModuleHom,
    hom_basis,
    hom_dim,
    mod_decompose,
    mod_dual,
    mod_indec,
    mod_induce,
    mod_perm,
    mod_restrict,
    mod_sympow,
    mod_tensor,
    module_from_blocks,
)
from .stable import StableContext, phom_basis, stable_equal, stable_hom_dim
from .radical import ihat_member, jordan_basis, rad_member, rad_tensor_witness, tensor_faithful
from .ringobj import (
    RingObject,
    graded_sep_enum,
    ring_check,
    ring_iso_search,
    ring_perm,
    ring_product,
    ring_tensor,
    ring_trivial,
    sep_solve,
)
from .classify import SearchBudget, enum_ttrings, verify_c4, verify_cp, verify_main

__version__ = "0.1.0"
