"""ringforge: solvers for weighted ring/connectivity augmentation.

Core pipeline: reduce (cactus -> ring), seed with a minimum-cost directed
shadow solution made non-shortenable, then improve with thin-component
relative greedy or witness-set local search; exact brute-force oracles
cross-check every guarantee at desk scale.
"""

__version__ = "0.1.0"

from .model import (
    Cut,
    Link,
    RootedRingInstance,
    covers,
    enumerate_cuts,
    is_feasible,
    is_wrap_solution,
    links_intersect,
    load_instance,
    load_solution,
    make_instance,
    save_instance,
    save_solution,
)
from .directed import (
    Arborescence,
    DirectedLink,
    enters,
    is_directed_solution,
    lca,
    make_non_shortenable,
    min_cost_directed_solution,
    responsibilities,
    shadows,
    verify_structure,
)
from .dropcalc import (
    connected_vertices,
    drop_by_characterization,
    drop_by_definition,
    drop_connected,
    intersection_graph,
    intersects,
    v_bad_interval,
)
from .thinness import LaminarFamily, is_alpha_c_thin, is_alpha_thin
from .component_dp import (
    DpEntry,
    Pattern,
    compatible,
    dp_max_realizers,
    find_best_drop_component,
    find_min_ratio_component,
    merge,
    pattern_objective,
    pattern_of,
    realizes,
    u_set,
    uniform_overlay,
)
from .solvers import MixedState, SolveReport, local_search, relative_greedy, two_approx
from .decomposition import (
    Decomposition,
    DependencyGraph,
    Festoon,
    build_dependency_graph,
    decompose,
    max_festoon,
    minimal_connecting_set,
    partition_into_festoons,
    tangled,
)
from .reduction import (
    CactusInstance,
    UnfoldMap,
    is_wcap_solution,
    load_cactus,
    map_solution_back,
    min_cut,
    save_cactus,
    unfold_cactus,
)
from .oracle import (
    OracleBudget,
    exact_best_component,
    exact_directed_opt,
    exact_min_ratio,
    exact_opt,
)
