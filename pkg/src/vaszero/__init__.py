"""Covers, filtered covers and verdicts for vector addition systems with one zero test."""

from .budget import Budget
from .closed_sets import (
    DownBasis,
    UpBasis,
    complement_down,
    complement_up,
    down_compare,
    down_member,
    down_union,
    filter_down,
    minimize_down,
    minimize_up,
)
from .errors import BudgetExhausted
from .filtered_cover import (
    filtered_cover_basis,
    filtered_member,
    translate_f_to_P,
    translate_P_to_f,
    vj_basis,
)
from .karp_miller import km_cover, km_tree
from .model import (
    BuchiAutomaton,
    LabeledVassz,
    Vas,
    Vassz,
    Vasz,
    build_repeated_product,
    build_vas_P,
    build_vas_y,
    buchi_product,
    encode_vassz_as_vasz,
    fire,
    fire_word,
    normalize,
    reinit,
    strip_zero_test,
)
from .omega import OMEGA, onat_add, onat_mul, vec_leq, vec_leq_P, widen
from .omega_check import mc_omega_regular, repeated_state
from .oracles import (
    ProductiveCandidate,
    Verdict,
    enumerate_productive,
    lim_member,
    productive_check,
    reach_decide,
)
from .vasz_analysis import algorithm1, coverable, place_bounded, vasz_cover

__version__ = "0.1.0"
