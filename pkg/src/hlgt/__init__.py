"""Lattice higher gauge theory for finite crossed modules."""

__version__ = "0.1.0"

from .groups import FiniteGroup, conjugacy_classes, cyclic, symmetric  # noqa: E402,F401
from .xmod import BUILTIN_XMODS, CrossedModule, crossed_module, flux_orbits  # noqa: E402,F401
from .lattice import Lattice2, builtin, lattice_from_spec  # noqa: E402,F401
from .config import (ConfigSpace, GaugeConfig, enumerate_fake_flat, make_config,  # noqa: E402,F401
                     path_holonomy, surface_holonomy, zeta)
from .gauge import GaugeElement, apply_gauge_element, edge_spike, vertex_spike  # noqa: E402,F401
from .hamiltonian import (SparseOperator, build_hamiltonian, ground_state_degeneracy,  # noqa: E402,F401
                          spectrum)
