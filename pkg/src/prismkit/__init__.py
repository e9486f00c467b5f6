"""prismkit: exact truncated arithmetic for prisms, windows and prismatic
Dieudonne modules, with property suites and a command-line runner."""
from .delta import DeltaRing, Prism, bk_prism, crystalline_prism, prism_make, q_prism
from .dmodules import (
    DieudonneModule,
    FilteredDieudonneModule,
    TorsionDieudonneModule,
    dm_check,
    dual,
    exactness_check,
    fdm_check,
    forget_filtration,
    isogeny_cokernel,
    refill_perfect,
    standard_module,
    torsion_check,
)
from .envelope import Envelope, envelope_build, envelope_delta, envelope_phi, nilpotence_certify
from .errors import *  # noqa: F401,F403
from .ext import FiniteAbelianGroup, bd_d1, bd_d2, ext_groups, primitive_elements
from .frames import (
    Frame,
    Window,
    bk_to_window,
    envelope_frame,
    frame_from_prism,
    lift_phi_invariant,
    lift_window_hom,
    normal_decomposition,
    window_check,
    window_to_bk,
    witt_frame,
)
from .qprism import QContext
from .ring import AtLeast, Element, Ring, RingSpec, element_from_json, ring_make
from .witt import WittVector, witt_FV, witt_op, witt_structure_polys

__version__ = "0.1.0"
